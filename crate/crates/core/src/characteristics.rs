//! Regular-expression characteristics: width ω, height η, range φ(n) and
//! its linear parameters, inducing words Θ, overlap o, shift ν and the
//! smallest variation of maxima δ.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{letters_height, maximal_occurrences, Domain, PatternSpec};
use crate::sigre::{self, bounded_height_automaton, intersect, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("the language has no nonempty word")]
    EmptyLanguage,
    #[error("branch {0} is not disjunction-capsuled")]
    NotDisjunctionCapsuled(usize),
    #[error("branch {0} has several shortest nonempty words")]
    AmbiguousInducingWord(usize),
    #[error("word {0} is not in the language")]
    WordNotInLanguage(Word),
}

impl From<sigre::SigreError> for CharError {
    fn from(e: sigre::SigreError) -> Self {
        match e {
            sigre::SigreError::NotDisjunctionCapsuled(k) => CharError::NotDisjunctionCapsuled(k),
        }
    }
}

/// Value of a characteristic obtained by a bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CharValue {
    Defined(i64),
    Undefined,
    Unbounded,
    /// Value at the largest cap tried, and that cap; not cap-stable.
    CapLimited(i64, usize),
}

impl CharValue {
    pub fn defined(self) -> Option<i64> {
        match self {
            CharValue::Defined(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Defined(x) => write!(f, "{x}"),
            CharValue::Undefined => write!(f, "undefined"),
            CharValue::Unbounded => write!(f, "unbounded"),
            CharValue::CapLimited(x, c) => write!(f, "{x} (cap-limited at {c})"),
        }
    }
}

pub fn width(spec: &PatternSpec) -> Result<usize, CharError> {
    spec.aut.shortest_nonempty_len().ok_or(CharError::EmptyLanguage)
}

pub fn height(spec: &PatternSpec) -> Result<usize, CharError> {
    let omega = width(spec)?;
    (0..=omega)
        .find(|&h| !intersect(&spec.aut, &bounded_height_automaton(h)).is_empty())
        .ok_or(CharError::EmptyLanguage)
}

/// Minimum height over the words of length `n − 1`.
pub fn range(spec: &PatternSpec, n: usize) -> CharValue {
    let k = n.saturating_sub(1);
    for h in 0..n.max(1) {
        if intersect(&spec.aut, &bounded_height_automaton(h)).exists_word_of_length(k) {
            return CharValue::Defined(h as i64);
        }
    }
    CharValue::Undefined
}

/// `(e, c)` such that `φ(n) = e·(n − 1 − η) + c + η` on the sampled lengths.
pub fn range_params(spec: &PatternSpec) -> Option<(u8, u8)> {
    let omega = width(spec).ok()?;
    let eta = height(spec).ok()? as i64;
    let samples: Vec<(i64, i64)> = (omega + 2..=omega + 4)
        .map(|n| range(spec, n).defined().map(|v| (n as i64, v)))
        .collect::<Option<_>>()?;
    [(0u8, 0u8), (0, 1), (1, 0)].into_iter().find(|&(e, c)| {
        samples
            .iter()
            .all(|&(n, v)| v == e as i64 * (n - 1 - eta) + c as i64 + eta)
    })
}

pub fn inducing_words(spec: &PatternSpec) -> Result<BTreeSet<Word>, CharError> {
    let branches = sigre::dc_decompose(&spec.ast)?;
    let mut out = BTreeSet::new();
    for (k, b) in branches.iter().enumerate() {
        let aut = sigre::compile(b);
        let len = aut.shortest_nonempty_len().ok_or(CharError::EmptyLanguage)?;
        let mut ws = aut.words_of_length(len);
        if ws.len() != 1 {
            return Err(CharError::AmbiguousInducingWord(k + 1));
        }
        out.insert(ws.pop().unwrap());
    }
    Ok(out)
}

fn check_member(spec: &PatternSpec, w: &Word) -> Result<(), CharError> {
    if spec.accepts(w) {
        Ok(())
    } else {
        Err(CharError::WordNotInLanguage(w.clone()))
    }
}

/// Overlays of `w` onto `v` that are superpositions for span `span`,
/// shortest first (which is also canonical order).
fn overlays(spec: &PatternSpec, v: &[Letter], w: &[Letter], span: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for k in v.len().saturating_sub(w.len())..=v.len() {
        if v[k..] != w[..v.len() - k] {
            continue;
        }
        let mut z = v[..k].to_vec();
        z.extend_from_slice(w);
        if !spec.accepts_letters(&z) && letters_height(&z) <= span {
            out.push(z);
        }
    }
    out
}

pub fn superpositions(spec: &PatternSpec, v: &Word, w: &Word, d: Domain) -> Result<BTreeSet<Word>, CharError> {
    check_member(spec, v)?;
    check_member(spec, w)?;
    Ok(overlays(spec, v.letters(), w.letters(), d.span())
        .into_iter()
        .map(Word::new)
        .collect())
}

fn overlap_from_shortest(v: usize, w: usize, z: Option<usize>) -> usize {
    z.map(|z| v + w - z + 1).unwrap_or(0)
}

pub fn overlap_of_words(spec: &PatternSpec, v: &Word, w: &Word, d: Domain) -> Result<usize, CharError> {
    let z = superpositions(spec, v, w, d)?;
    Ok(overlap_from_shortest(v.len(), w.len(), z.iter().next().map(Word::len)))
}

/// `min over t of max(t) − max(t[p..=q])`, `t` ranging over the supporting
/// series of `z` on `[0, height(z)]`; `p`, `q` are 1-based series positions.
///
/// Exact reachability over (value, running max, running max inside the span).
pub fn shift_at(z: &[Letter], p: usize, q: usize) -> u64 {
    let h = letters_height(z);
    let m = z.len() + 1;
    assert!(1 <= p && p <= q && q <= m, "span {p}..{q} outside 1..{m}");
    let vals = h + 1;
    let none = vals; // "span not entered yet"
    let idx = |x: usize, g: usize, s: usize| (x * vals + g) * (vals + 1) + s;
    let size = vals * vals * (vals + 1);
    let mut cur = vec![false; size];
    let mut next = vec![false; size];
    for x in 0..vals {
        cur[idx(x, x, if p == 1 { x } else { none })] = true;
    }
    for pos in 2..=m {
        let l = z[pos - 2];
        next.iter_mut().for_each(|b| *b = false);
        let inside = p <= pos && pos <= q;
        for x in 0..vals {
            for g in x..vals {
                for s in 0..=vals {
                    if !cur[idx(x, g, s)] {
                        continue;
                    }
                    let range = match l {
                        Letter::Lt => x + 1..vals,
                        Letter::Eq => x..x + 1,
                        Letter::Gt => 0..x,
                    };
                    for y in range {
                        let s2 = if inside {
                            if s == none {
                                y
                            } else {
                                s.max(y)
                            }
                        } else {
                            s
                        };
                        next[idx(y, g.max(y), s2)] = true;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut best = u64::MAX;
    for x in 0..vals {
        for g in 0..vals {
            for s in 0..vals {
                if cur[idx(x, g, s)] {
                    best = best.min((g - s) as u64);
                }
            }
        }
    }
    best
}

/// Shift of the `i`-th maximal occurrence of the proper factor `w` in `z`.
pub fn shift(spec: &PatternSpec, z: &Word, w: &Word, i: usize) -> Option<u64> {
    if i == 0 || w == z {
        return None;
    }
    let occ = maximal_occurrences(spec, z)
        .into_iter()
        .filter(|o| &z.factor(o.i, o.j) == w)
        .nth(i - 1)?;
    Some(shift_at(z.letters(), occ.i, occ.j + 1))
}

/// Signed difference of shifts between the prefix pattern (`v`) and the
/// suffix pattern (`w`) of the superposition `z`.
pub fn variation_in(z: &[Letter], v_len: usize, w_len: usize) -> i64 {
    let m = z.len() + 1;
    shift_at(z, 1, v_len + 1) as i64 - shift_at(z, m - w_len, m) as i64
}

fn best_variation(spec: &PatternSpec, v: &[Letter], w: &[Letter], span: usize) -> Option<i64> {
    overlays(spec, v, w, span)
        .iter()
        .map(|z| variation_in(z, v.len(), w.len()))
        .fold(None, |best: Option<i64>, x| match best {
            Some(b) if b.abs() <= x.abs() => Some(b),
            _ => Some(x),
        })
}

pub fn variation_of_words(spec: &PatternSpec, v: &Word, w: &Word, d: Domain) -> Result<i64, CharError> {
    check_member(spec, v)?;
    check_member(spec, w)?;
    Ok(best_variation(spec, v.letters(), w.letters(), d.span()).unwrap_or(0))
}

/// One pair `(v, w)` with at least one superposition.
#[derive(Clone, Debug)]
pub struct PairRecord {
    pub v: usize,
    pub w: usize,
    pub overlap: usize,
    pub variation: i64,
    /// `max(|v|, |w|)`: the smallest cap at which the pair is visible.
    pub cap: usize,
}

/// All pairs of words of `L(σ)` up to `kmax` letters that admit a
/// superposition for one span, in canonical pair order.
#[derive(Clone, Debug)]
pub struct PairTable {
    pub span: usize,
    pub kmax: usize,
    pub words: Vec<Word>,
    pub pairs: Vec<PairRecord>,
}

impl PairTable {
    pub fn build(spec: &PatternSpec, span: usize, kmax: usize) -> PairTable {
        // Words higher than the span admit no superposition at all.
        let words = intersect(&spec.aut, &bounded_height_automaton(span)).words_up_to(kmax);
        let mut pairs = Vec::new();
        for (iv, v) in words.iter().enumerate() {
            for (iw, w) in words.iter().enumerate() {
                let zs = overlays(spec, v.letters(), w.letters(), span);
                let Some(shortest) = zs.first() else { continue };
                let overlap = overlap_from_shortest(v.len(), w.len(), Some(shortest.len()));
                let mut variation = 0;
                let mut best = u64::MAX;
                for z in &zs {
                    let x = variation_in(z, v.len(), w.len());
                    if x.unsigned_abs() < best {
                        best = x.unsigned_abs();
                        variation = x;
                    }
                }
                pairs.push(PairRecord {
                    v: iv,
                    w: iw,
                    overlap,
                    variation,
                    cap: v.len().max(w.len()),
                });
            }
        }
        PairTable {
            span,
            kmax,
            words,
            pairs,
        }
    }

    fn visible(&self, cap: usize) -> impl Iterator<Item = &PairRecord> {
        assert!(cap <= self.kmax);
        self.pairs.iter().filter(move |p| p.cap <= cap)
    }

    pub fn max_overlap(&self, cap: usize) -> usize {
        self.visible(cap).map(|p| p.overlap).max().unwrap_or(0)
    }

    /// `None` when both signs occur.
    pub fn smallest_variation(&self, cap: usize) -> Option<i64> {
        let (mut pos, mut neg) = (false, false);
        let mut best: Option<i64> = None;
        for p in self.visible(cap) {
            pos |= p.variation > 0;
            neg |= p.variation < 0;
            if p.overlap > 0 && best.is_none_or(|b| p.variation.abs() < b.abs()) {
                best = Some(p.variation);
            }
        }
        if pos && neg {
            return None;
        }
        if self.max_overlap(cap) == 0 {
            return Some(0);
        }
        best
    }
}

/// Cached pair table for `span` covering at least `kmax` letters.
pub fn pair_table(spec: &PatternSpec, span: usize, kmax: usize) -> Arc<PairTable> {
    let mut cache = spec.pair_tables.lock().unwrap();
    if let Some(t) = cache
        .iter()
        .filter(|((s, k), _)| *s == span && *k >= kmax)
        .map(|(_, t)| t)
        .next()
    {
        return Arc::clone(t);
    }
    let t = Arc::new(PairTable::build(spec, span, kmax));
    cache.insert((span, kmax), Arc::clone(&t));
    t
}

pub fn default_cap(spec: &PatternSpec) -> Result<usize, CharError> {
    Ok(2 * width(spec)? + 2)
}

/// Stability protocol on three consecutive caps.
pub fn stabilize(values: [i64; 3], cap: usize) -> CharValue {
    let [a, b, c] = values;
    if a == c {
        CharValue::Defined(a)
    } else if a < b && b < c {
        CharValue::Unbounded
    } else {
        CharValue::CapLimited(c, cap + 2)
    }
}

pub fn overlap(spec: &PatternSpec, d: Domain, cap: usize) -> CharValue {
    let t = pair_table(spec, d.span(), cap + 2);
    let vals = [0, 1, 2].map(|k| t.max_overlap(cap + k) as i64);
    stabilize(vals, cap)
}

pub fn smallest_variation(spec: &PatternSpec, d: Domain, cap: usize) -> CharValue {
    let t = pair_table(spec, d.span(), cap + 2);
    variation_protocol([0, 1, 2].map(|k| t.smallest_variation(cap + k)), cap)
}

/// Undefinedness is monotone in the cap, so the largest cap decides it.
pub fn variation_protocol(vals: [Option<i64>; 3], cap: usize) -> CharValue {
    match vals {
        [_, _, None] => CharValue::Undefined,
        [Some(a), _, Some(c)] if a == c => CharValue::Defined(a),
        [_, _, Some(c)] => CharValue::CapLimited(c, cap + 2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicsReport {
    pub omega: usize,
    pub eta: usize,
    pub range_at_n: CharValue,
    pub range_params: Option<(u8, u8)>,
    pub inducing: BTreeSet<Word>,
    pub overlap: CharValue,
    pub variation: CharValue,
    pub domain: Domain,
    pub n: usize,
    pub cap: usize,
}

/// All characteristics at once; `cap = None` selects the default cap.
pub fn report(spec: &PatternSpec, d: Domain, n: usize, cap: Option<usize>) -> Result<CharacteristicsReport, CharError> {
    let omega = width(spec)?;
    let cap = cap.unwrap_or(2 * omega + 2);
    Ok(CharacteristicsReport {
        omega,
        eta: height(spec)?,
        range_at_n: range(spec, n),
        range_params: range_params(spec),
        inducing: inducing_words(spec)?,
        overlap: overlap(spec, d, cap),
        variation: smallest_variation(spec, d, cap),
        domain: d,
        n,
        cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::word_height;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn spec(expr: &str, a: usize, b: usize) -> PatternSpec {
        PatternSpec::from_expr(expr, expr, a, b).unwrap()
    }

    #[test]
    fn width_height_range() {
        let dt = spec(">=+>", 1, 1);
        assert_eq!(width(&dt).unwrap(), 3);
        assert_eq!(height(&dt).unwrap(), 2);
        assert_eq!(height(&spec("=+", 0, 0)).unwrap(), 0);
        let gorge = spec("(>(>|=)*)*><((<|=)*<)*", 1, 1);
        assert_eq!(range(&gorge, 3), CharValue::Defined(1));
        assert_eq!(range(&gorge, 5), CharValue::Defined(2));
        assert_eq!(range(&spec(">><>>", 1, 2), 7), CharValue::Undefined);
        assert_eq!(range(&spec(">+", 0, 0), 6), CharValue::Defined(5));
        assert_eq!(range_params(&gorge), Some((0, 1)));
        assert_eq!(range_params(&dt), Some((0, 0)));
        assert_eq!(range_params(&spec(">+", 0, 0)), Some((1, 0)));
        assert_eq!(range_params(&spec(">><>>", 1, 2)), None);
        assert_eq!(width(&spec("0", 0, 0)), Err(CharError::EmptyLanguage));
    }

    #[test]
    fn inducing() {
        let infl = spec("<(<|=)*>|>(>|=)*<", 1, 1);
        assert_eq!(inducing_words(&infl).unwrap(), BTreeSet::from([w("<>"), w("><")]));
        let amb = spec("<>|><", 0, 0);
        assert_eq!(inducing_words(&amb).unwrap().len(), 2);
        assert_eq!(
            inducing_words(&spec("(<|>)=", 0, 0)),
            Err(CharError::NotDisjunctionCapsuled(1))
        );
        assert_eq!(
            inducing_words(&spec("(<|1)(>|1)", 0, 0)),
            Err(CharError::AmbiguousInducingWord(1))
        );
    }

    #[test]
    fn superposition_examples() {
        let dt = spec(">=+>", 1, 1);
        let v = w(">=>");
        let s = |span| superpositions(&dt, &v, &v, Domain::of_span(span)).unwrap();
        assert_eq!(s(3), BTreeSet::from([w(">=>=>")]));
        assert_eq!(s(4), BTreeSet::from([w(">=>=>"), w(">=>>=>")]));
        assert!(s(2).is_empty());
        assert_eq!(overlap_of_words(&dt, &v, &v, Domain::of_span(3)).unwrap(), 2);
        assert_eq!(overlap_of_words(&dt, &v, &v, Domain::of_span(2)).unwrap(), 0);
        let infl = spec("<(<|=)*>|>(>|=)*<", 1, 1);
        assert_eq!(
            overlap_of_words(&infl, &w("<>"), &w("><"), Domain::of_span(1)).unwrap(),
            2
        );
        assert_eq!(
            superpositions(&dt, &w(">>"), &v, Domain::of_span(3)),
            Err(CharError::WordNotInLanguage(w(">>")))
        );
    }

    #[test]
    fn shift_examples() {
        let dt = spec(">=+>", 1, 1);
        assert_eq!(shift(&dt, &w(">=>=>"), &w(">=>"), 1), Some(0));
        assert_eq!(shift(&dt, &w(">=>=>"), &w(">=>"), 2), Some(1));
        assert_eq!(shift(&dt, &w(">=>=>"), &w(">=>"), 3), None);
        assert_eq!(shift(&dt, &w(">=>"), &w("<>"), 1), None);
        assert_eq!(shift(&dt, &w(">=>"), &w(">=>"), 1), None);
    }

    #[test]
    fn variation_examples() {
        let dt = spec(">=+>", 1, 1);
        let it = spec("<=+<", 1, 1);
        let d3 = Domain::of_span(3);
        assert_eq!(variation_of_words(&dt, &w(">=>"), &w(">=>"), d3).unwrap(), -1);
        assert_eq!(variation_of_words(&it, &w("<=<"), &w("<=<"), d3).unwrap(), 1);
        assert_eq!(
            variation_of_words(&dt, &w(">=>"), &w(">=>"), Domain::of_span(2)).unwrap(),
            0
        );
    }

    #[test]
    fn domain_characteristics() {
        let dt = spec(">=+>", 1, 1);
        let cap = default_cap(&dt).unwrap();
        assert_eq!(overlap(&dt, Domain::of_span(2), cap), CharValue::Defined(0));
        assert_eq!(overlap(&dt, Domain::of_span(3), cap), CharValue::Defined(2));
        assert_eq!(smallest_variation(&dt, Domain::of_span(3), cap), CharValue::Defined(-1));
        assert_eq!(smallest_variation(&dt, Domain::of_span(2), cap), CharValue::Defined(0));
        let cex = spec("<=*|=*>", 0, 0);
        assert_eq!(overlap(&cex, Domain::of_span(1), 4), CharValue::Unbounded);
    }

    #[test]
    fn protocols() {
        assert_eq!(stabilize([2, 2, 2], 6), CharValue::Defined(2));
        assert_eq!(stabilize([1, 2, 3], 6), CharValue::Unbounded);
        assert_eq!(stabilize([1, 1, 2], 6), CharValue::CapLimited(2, 8));
        assert_eq!(variation_protocol([Some(0), None, None], 6), CharValue::Undefined);
        assert_eq!(
            variation_protocol([Some(-1), Some(0), Some(-1)], 6),
            CharValue::Defined(-1)
        );
        assert_eq!(
            variation_protocol([Some(0), Some(0), Some(-1)], 6),
            CharValue::CapLimited(-1, 8)
        );
    }

    #[test]
    fn report_decreasing_terrace() {
        let dt = spec(">=+>", 1, 1);
        let r = report(&dt, Domain::new(0, 3).unwrap(), 6, None).unwrap();
        assert_eq!((r.omega, r.eta), (3, 2));
        assert_eq!(r.range_at_n, CharValue::Defined(2));
        assert_eq!(r.range_params, Some((0, 0)));
        assert_eq!(r.inducing, BTreeSet::from([w(">=>")]));
        assert_eq!(r.overlap, CharValue::Defined(2));
        assert_eq!(r.variation, CharValue::Defined(-1));
    }

    #[test]
    fn shift_on_longer_superposition() {
        let z = w(">=>>=>");
        assert_eq!(word_height(&z), 4);
        assert_eq!(shift_at(z.letters(), 1, 4), 0);
        assert_eq!(shift_at(z.letters(), 4, 7), 2);
    }
}
