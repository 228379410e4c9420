//! Ground semantics of time-series constraints: signatures, word height,
//! supporting series, maximal occurrences, features and aggregation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::characteristics::PairTable;
use crate::sigre::{self, Automaton, Dfa, Letter, ParseError, Regex, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("invalid domain: lower bound {lo} exceeds upper bound {hi}")]
    InvalidDomain { lo: i64, hi: i64 },
    #[error("malformed domain {0:?}: expected lo:hi")]
    MalformedDomain(String),
    #[error("malformed series: {0}")]
    MalformedSeries(String),
    #[error("trimming empties the pattern at occurrence ({i},{j})")]
    EmptyPattern { i: usize, j: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },
}

/// Integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain {
    pub lo: i64,
    pub hi: i64,
}

impl Domain {
    pub fn new(lo: i64, hi: i64) -> Result<Domain, SemanticsError> {
        if lo > hi {
            return Err(SemanticsError::InvalidDomain { lo, hi });
        }
        Ok(Domain { lo, hi })
    }

    /// `[0, span]`.
    pub fn of_span(span: usize) -> Domain {
        Domain { lo: 0, hi: span as i64 }
    }

    pub fn span(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn size(&self) -> u64 {
        self.span() as u64 + 1
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for Domain {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SemanticsError::MalformedDomain(s.to_string());
        let (a, b) = s.trim().split_once(':').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        Domain::new(lo, hi)
    }
}

/// Ground integer time series.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeSeries(pub Vec<i64>);

impl TimeSeries {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TimeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Comma-separated integers; whitespace is ignored.
impl FromStr for TimeSeries {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(SemanticsError::MalformedSeries("empty series".into()));
        }
        cleaned
            .split(',')
            .enumerate()
            .map(|(k, p)| {
                p.parse::<i64>()
                    .map_err(|_| SemanticsError::MalformedSeries(format!("item {} ({p:?}) is not an integer", k + 1)))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(TimeSeries)
    }
}

/// Integers extended with both infinities. Variant order gives the total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }
}

impl From<i64> for ExtInt {
    fn from(x: i64) -> Self {
        ExtInt::Fin(x)
    }
}

impl Add for ExtInt {
    type Output = ExtInt;

    /// `+∞ + −∞` is taken as `+∞` (never produced by this crate).
    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::PosInf, _) | (_, ExtInt::PosInf) => ExtInt::PosInf,
            (ExtInt::NegInf, _) | (_, ExtInt::NegInf) => ExtInt::NegInf,
            (ExtInt::Fin(a), ExtInt::Fin(b)) => ExtInt::Fin(a + b),
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::PosInf => write!(f, "+inf"),
            ExtInt::Fin(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for ExtInt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+inf" | "inf" => Ok(ExtInt::PosInf),
            "-inf" => Ok(ExtInt::NegInf),
            t => t
                .parse()
                .map(ExtInt::Fin)
                .map_err(|_| format!("not an extended integer: {s:?}")),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(x) => s.serialize_i64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::I(x) => Ok(ExtInt::Fin(x)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    One,
    Width,
    Max,
    Min,
    Surf,
}

impl Feature {
    pub const ALL: [Feature; 5] = [Feature::One, Feature::Width, Feature::Max, Feature::Min, Feature::Surf];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Aggregator {
    Max,
    Min,
    Sum,
}

impl Aggregator {
    pub const ALL: [Aggregator; 3] = [Aggregator::Max, Aggregator::Min, Aggregator::Sum];
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Feature::One => "one",
            Feature::Width => "width",
            Feature::Max => "max",
            Feature::Min => "min",
            Feature::Surf => "surf",
        };
        write!(f, "{s}")
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Aggregator::Max => "Max",
            Aggregator::Min => "Min",
            Aggregator::Sum => "Sum",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Feature {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Feature::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or(SemanticsError::UnknownName {
                kind: "feature",
                name: s.to_string(),
            })
    }
}

impl FromStr for Aggregator {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Aggregator::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or(SemanticsError::UnknownName {
                kind: "aggregator",
                name: s.to_string(),
            })
    }
}

/// Values of `N` for a series without any pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefaultPolicy {
    pub max: ExtInt,
    pub min: ExtInt,
    pub sum: ExtInt,
}

impl Default for DefaultPolicy {
    fn default() -> Self {
        DefaultPolicy {
            max: ExtInt::Fin(0),
            min: ExtInt::PosInf,
            sum: ExtInt::Fin(0),
        }
    }
}

impl DefaultPolicy {
    /// Absent patterns make `Max` yield `−∞` instead of `0`.
    pub fn neg_inf_max() -> Self {
        DefaultPolicy {
            max: ExtInt::NegInf,
            ..Default::default()
        }
    }

    pub fn value(&self, g: Aggregator) -> ExtInt {
        match g {
            Aggregator::Max => self.max,
            Aggregator::Min => self.min,
            Aggregator::Sum => self.sum,
        }
    }
}

/// Pair tables keyed by (span, longest word length).
pub(crate) type PairTableCache = HashMap<(usize, usize), Arc<PairTable>>;

/// A named regular expression with trimming constants `a` (right border)
/// and `b` (left border).
#[derive(Clone)]
pub struct PatternSpec {
    pub name: String,
    pub ast: Regex,
    pub aut: Automaton,
    pub a: usize,
    pub b: usize,
    dfa: Arc<Dfa>,
    factor_dfa: Arc<Dfa>,
    pub(crate) pair_tables: Arc<Mutex<PairTableCache>>,
}

impl fmt::Debug for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternSpec")
            .field("name", &self.name)
            .field("expr", &self.ast.to_string())
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}

impl PatternSpec {
    pub fn new(name: impl Into<String>, ast: Regex, a: usize, b: usize) -> PatternSpec {
        let aut = sigre::compile(&ast);
        let dfa = Arc::new(aut.determinize());
        let factor_dfa = Arc::new(aut.factor_dfa());
        PatternSpec {
            name: name.into(),
            ast,
            aut,
            a,
            b,
            dfa,
            factor_dfa,
            pair_tables: Arc::default(),
        }
    }

    pub fn from_expr(name: impl Into<String>, expr: &str, a: usize, b: usize) -> Result<PatternSpec, ParseError> {
        Ok(PatternSpec::new(name, sigre::parse(expr)?, a, b))
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.dfa.accepts(w.letters())
    }

    pub fn accepts_letters(&self, w: &[Letter]) -> bool {
        self.dfa.accepts(w)
    }

    pub fn is_factor(&self, w: &Word) -> bool {
        self.factor_dfa.accepts(w.letters())
    }
}

/// A maximal occurrence `S_i..S_j` (1-based signature indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub i: usize,
    pub j: usize,
}

fn letter_of(x: i64, y: i64) -> Letter {
    match x.cmp(&y) {
        Ordering::Less => Letter::Lt,
        Ordering::Equal => Letter::Eq,
        Ordering::Greater => Letter::Gt,
    }
}

pub fn signature(t: &TimeSeries) -> Word {
    Word::new(t.0.windows(2).map(|p| letter_of(p[0], p[1])).collect())
}

pub fn signature_of(values: &[i64]) -> Vec<Letter> {
    values.windows(2).map(|p| letter_of(p[0], p[1])).collect()
}

/// Smallest span admitting a supporting series: the longest count of `<`
/// in a factor free of `>`, or of `>` in a factor free of `<`.
pub fn word_height(w: &Word) -> usize {
    letters_height(w.letters())
}

pub fn letters_height(w: &[Letter]) -> usize {
    let (mut up, mut down, mut best) = (0usize, 0usize, 0usize);
    for &l in w {
        match l {
            Letter::Lt => {
                up += 1;
                down = 0;
            }
            Letter::Gt => {
                down += 1;
                up = 0;
            }
            Letter::Eq => {}
        }
        best = best.max(up).max(down);
    }
    best
}

fn related(l: Letter, x: i64, y: i64) -> bool {
    letter_of(x, y) == l
}

/// All series over `d` with signature `w`, in lexicographic order.
pub fn supporting_series(w: &Word, d: Domain) -> Vec<TimeSeries> {
    let mut out = Vec::new();
    for_each_supporting(w.letters(), d, |s| out.push(TimeSeries(s.to_vec())));
    out
}

/// Visit every supporting series of `w` over `d` in lexicographic order.
pub fn for_each_supporting(w: &[Letter], d: Domain, mut visit: impl FnMut(&[i64])) {
    let m = w.len() + 1;
    // feas[p]: interval of values at position p from which the rest of the
    // word can still be completed inside d.
    let mut feas = vec![(d.lo, d.hi); m];
    for p in (0..m - 1).rev() {
        let (lo, hi) = feas[p + 1];
        if lo > hi {
            feas[p] = (1, 0);
            continue;
        }
        feas[p] = match w[p] {
            Letter::Lt => (d.lo, hi - 1),
            Letter::Gt => (lo + 1, d.hi),
            Letter::Eq => (lo, hi),
        };
    }
    if feas[0].0 > feas[0].1 {
        return;
    }
    let mut buf = vec![0i64; m];
    fn rec(w: &[Letter], feas: &[(i64, i64)], p: usize, buf: &mut [i64], visit: &mut impl FnMut(&[i64])) {
        let (lo, hi) = feas[p];
        for x in lo..=hi {
            if p > 0 && !related(w[p - 1], buf[p - 1], x) {
                continue;
            }
            buf[p] = x;
            if p + 1 == buf.len() {
                visit(buf);
            } else {
                rec(w, feas, p + 1, buf, visit);
            }
        }
    }
    rec(w, &feas, 0, &mut buf, &mut visit);
}

/// Maximal occurrences of the pattern in `s`, sorted by `i` then `j`.
pub fn maximal_occurrences(spec: &PatternSpec, s: &Word) -> Vec<Occurrence> {
    maximal_occurrences_in(spec.dfa(), s.letters())
}

pub fn maximal_occurrences_in(dfa: &Dfa, s: &[Letter]) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let mut reach = 0usize; // furthest end among earlier starts
    for i in 0..s.len() {
        let mut q = dfa.start();
        let mut last = None;
        for (k, &l) in s[i..].iter().enumerate() {
            q = dfa.step(q, l);
            if dfa.is_dead(q) {
                break;
            }
            if dfa.is_accepting(q) {
                last = Some(i + k + 1);
            }
        }
        if let Some(j) = last {
            if j > reach {
                out.push(Occurrence { i: i + 1, j });
                reach = j;
            }
        }
    }
    out
}

/// Trimmed pattern `X_{i+b} .. X_{j+1-a}` as a slice of the series.
fn trimmed<'a>(spec: &PatternSpec, t: &'a [i64], occ: Occurrence) -> Result<&'a [i64], SemanticsError> {
    let start = occ.i + spec.b;
    let end = (occ.j + 1).saturating_sub(spec.a);
    if start > end || end > t.len() {
        return Err(SemanticsError::EmptyPattern { i: occ.i, j: occ.j });
    }
    Ok(&t[start - 1..end])
}

pub fn feature_of(spec: &PatternSpec, f: Feature, t: &TimeSeries, occ: Occurrence) -> Result<i64, SemanticsError> {
    feature_of_values(spec, f, &t.0, occ)
}

pub fn feature_of_values(spec: &PatternSpec, f: Feature, t: &[i64], occ: Occurrence) -> Result<i64, SemanticsError> {
    let p = trimmed(spec, t, occ)?;
    Ok(match f {
        Feature::One => 1,
        Feature::Width => p.len() as i64,
        Feature::Max => *p.iter().max().unwrap(),
        Feature::Min => *p.iter().min().unwrap(),
        Feature::Surf => p.iter().sum(),
    })
}

/// Aggregate feature values, `None` when there are none.
pub fn aggregate(g: Aggregator, vals: impl IntoIterator<Item = i64>) -> Option<i64> {
    let mut it = vals.into_iter();
    let first = it.next()?;
    Some(it.fold(first, |acc, x| match g {
        Aggregator::Max => acc.max(x),
        Aggregator::Min => acc.min(x),
        Aggregator::Sum => acc + x,
    }))
}

/// Result of evaluating a constraint on a ground series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub value: ExtInt,
    pub signature: Word,
    pub occurrences: Vec<Occurrence>,
    pub features: Vec<i64>,
}

pub fn evaluate(spec: &PatternSpec, f: Feature, g: Aggregator, t: &TimeSeries) -> Result<ExtInt, SemanticsError> {
    evaluate_with(spec, f, g, t, &DefaultPolicy::default()).map(|e| e.value)
}

pub fn evaluate_with(
    spec: &PatternSpec,
    f: Feature,
    g: Aggregator,
    t: &TimeSeries,
    policy: &DefaultPolicy,
) -> Result<Evaluation, SemanticsError> {
    let sig = signature(t);
    let occurrences = maximal_occurrences(spec, &sig);
    let features = occurrences
        .iter()
        .map(|&o| feature_of(spec, f, t, o))
        .collect::<Result<Vec<_>, _>>()?;
    let value = aggregate(g, features.iter().copied())
        .map(ExtInt::Fin)
        .unwrap_or(policy.value(g));
    Ok(Evaluation {
        value,
        signature: sig,
        occurrences,
        features,
    })
}
