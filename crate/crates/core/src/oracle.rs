//! Exhaustive ground truth: extrema of the result variable over every
//! series of a bounded domain, characteristic values recomputed straight
//! from their definitions, and the sharpness sweep that certifies bounds.
//!
//! Nothing here goes through the automaton-based shortcuts of
//! [`crate::characteristics`]: languages are sliced from the expression
//! tree, membership uses a direct recursive matcher and word heights come
//! from a difference-constraint feasibility test.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bound, BoundResult, Side};
use crate::characteristics::CharValue;
use crate::semantics::{
    aggregate, feature_of_values, maximal_occurrences_in, signature_of, Aggregator, DefaultPolicy, Domain, ExtInt,
    Feature, PatternSpec, SemanticsError, TimeSeries,
};
use crate::sigre::{Letter, Regex, Word};

/// Default ceiling on the number of enumerated series.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration of {needed} series exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremaResult {
    pub min_all: ExtInt,
    pub max_all: ExtInt,
    /// Extrema over series with at least one occurrence; `+inf`/`-inf`
    /// when there is none.
    pub min_occ: ExtInt,
    pub max_occ: ExtInt,
    pub witness_min: TimeSeries,
    pub witness_max: TimeSeries,
}

fn series_count(n: usize, d: Domain) -> u128 {
    (d.size() as u128).saturating_pow(n as u32)
}

/// Visit every series of length `n` over `d`, lexicographically.
fn for_each_series(
    n: usize,
    d: Domain,
    mut visit: impl FnMut(&[i64]) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    let mut t = vec![d.lo; n];
    loop {
        visit(&t)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if t[k] < d.hi {
                t[k] += 1;
                t[k + 1..].iter_mut().for_each(|x| *x = d.lo);
                break;
            }
        }
    }
}

/// Extrema of several `(feature, aggregator)` pairs in one enumeration.
pub fn scan(
    spec: &PatternSpec,
    combos: &[(Feature, Aggregator)],
    n: usize,
    d: Domain,
    budget: u64,
) -> Result<Vec<ExtremaResult>, OracleError> {
    let needed = series_count(n, d);
    if needed > budget as u128 {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    let policy = DefaultPolicy::default();
    let mut out: Vec<ExtremaResult> = combos
        .iter()
        .map(|_| ExtremaResult {
            min_all: ExtInt::PosInf,
            max_all: ExtInt::NegInf,
            min_occ: ExtInt::PosInf,
            max_occ: ExtInt::NegInf,
            witness_min: TimeSeries(Vec::new()),
            witness_max: TimeSeries(Vec::new()),
        })
        .collect();
    let dfa = spec.dfa();
    for_each_series(n, d, |t| {
        let sig = signature_of(t);
        let occ = maximal_occurrences_in(dfa, &sig);
        for (k, &(f, g)) in combos.iter().enumerate() {
            let vals = occ
                .iter()
                .map(|&o| feature_of_values(spec, f, t, o))
                .collect::<Result<Vec<_>, _>>()?;
            let agg = aggregate(g, vals);
            let v = agg.map(ExtInt::Fin).unwrap_or(policy.value(g));
            let r = &mut out[k];
            if v < r.min_all {
                r.min_all = v;
                r.witness_min = TimeSeries(t.to_vec());
            }
            if v > r.max_all {
                r.max_all = v;
                r.witness_max = TimeSeries(t.to_vec());
            }
            if agg.is_some() {
                r.min_occ = r.min_occ.min(v);
                r.max_occ = r.max_occ.max(v);
            }
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn brute_extrema(
    spec: &PatternSpec,
    f: Feature,
    g: Aggregator,
    n: usize,
    d: Domain,
    budget: u64,
) -> Result<ExtremaResult, OracleError> {
    Ok(scan(spec, &[(f, g)], n, d, budget)?.remove(0))
}

// ---------------------------------------------------------------------
// Direct language tools.

/// End positions reachable by matching `r` on `w` from `start`.
fn match_ends(r: &Regex, w: &[Letter], start: usize) -> BTreeSet<usize> {
    match r {
        Regex::Empty => BTreeSet::new(),
        Regex::Epsilon => BTreeSet::from([start]),
        Regex::Letter(l) => {
            if w.get(start) == Some(l) {
                BTreeSet::from([start + 1])
            } else {
                BTreeSet::new()
            }
        }
        Regex::Concat(fs) => fs.iter().fold(BTreeSet::from([start]), |acc, f| {
            acc.iter().flat_map(|&p| match_ends(f, w, p)).collect()
        }),
        Regex::Union(bs) => bs.iter().flat_map(|b| match_ends(b, w, start)).collect(),
        Regex::Star(inner) => {
            let mut seen = BTreeSet::from([start]);
            let mut todo = vec![start];
            while let Some(p) = todo.pop() {
                for q in match_ends(inner, w, p) {
                    if seen.insert(q) {
                        todo.push(q);
                    }
                }
            }
            seen
        }
    }
}

/// Membership by direct recursion on the expression tree.
pub fn naive_match(r: &Regex, w: &[Letter]) -> bool {
    match_ends(r, w, 0).contains(&w.len())
}

/// Every word of `L(r)` with at most `k` letters.
pub fn language_slice(r: &Regex, k: usize) -> BTreeSet<Vec<Letter>> {
    let product = |a: &BTreeSet<Vec<Letter>>, b: &BTreeSet<Vec<Letter>>| -> BTreeSet<Vec<Letter>> {
        let mut out = BTreeSet::new();
        for x in a {
            for y in b {
                if x.len() + y.len() <= k {
                    let mut z = x.clone();
                    z.extend_from_slice(y);
                    out.insert(z);
                }
            }
        }
        out
    };
    match r {
        Regex::Empty => BTreeSet::new(),
        Regex::Epsilon => BTreeSet::from([Vec::new()]),
        Regex::Letter(l) => {
            if k >= 1 {
                BTreeSet::from([vec![*l]])
            } else {
                BTreeSet::new()
            }
        }
        Regex::Concat(fs) => fs.iter().fold(BTreeSet::from([Vec::new()]), |acc, f| {
            product(&acc, &language_slice(f, k))
        }),
        Regex::Union(bs) => bs.iter().flat_map(|b| language_slice(b, k)).collect(),
        Regex::Star(inner) => {
            let base = language_slice(inner, k);
            let mut all = BTreeSet::from([Vec::new()]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let next: BTreeSet<_> = product(&frontier, &base).difference(&all).cloned().collect();
                all.extend(next.iter().cloned());
                frontier = next;
            }
            all
        }
    }
}

/// Is the system `{x_{i+1} − x_i ≥ 1 | ≤ −1 | = 0}` feasible with all
/// `x_i ∈ [0, h]`? Bellman-Ford on the constraint graph, with a virtual
/// source bounding every variable.
pub fn difference_constraints_feasible(w: &[Letter], h: usize) -> bool {
    let m = w.len() + 1;
    let src = m;
    let h = h as i64;
    // Edge (u, v, c) encodes x_v − x_u ≤ c.
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..m {
        edges.push((src, i, h));
        edges.push((i, src, 0));
    }
    for (i, &l) in w.iter().enumerate() {
        let (a, b) = (i, i + 1);
        match l {
            Letter::Lt => edges.push((b, a, -1)),
            Letter::Gt => edges.push((a, b, -1)),
            Letter::Eq => {
                edges.push((a, b, 0));
                edges.push((b, a, 0));
            }
        }
    }
    let mut dist = vec![0i64; m + 1];
    for _ in 0..=m {
        let mut changed = false;
        for &(u, v, c) in &edges {
            if dist[u] + c < dist[v] {
                dist[v] = dist[u] + c;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

/// Smallest `h` for which the difference constraints of `w` are feasible.
pub fn difference_constraints_height(w: &[Letter]) -> usize {
    (0..=w.len())
        .find(|&h| difference_constraints_feasible(w, h))
        .expect("height never exceeds the word length")
}

/// `min over t of max(t) − max(t[p..=q])` by enumerating every supporting
/// series of `z` on `[0, height(z)]`.
fn brute_shift(z: &[Letter], p: usize, q: usize) -> u64 {
    fn go(z: &[Letter], h: i64, t: &mut Vec<i64>, p: usize, q: usize, best: &mut u64) {
        if t.len() == z.len() + 1 {
            let all = *t.iter().max().unwrap();
            let part = *t[p - 1..q].iter().max().unwrap();
            *best = (*best).min((all - part) as u64);
            return;
        }
        let x = *t.last().unwrap();
        let range = match z[t.len() - 1] {
            Letter::Lt => x + 1..=h,
            Letter::Eq => x..=x,
            Letter::Gt => 0..=x - 1,
        };
        for y in range {
            t.push(y);
            go(z, h, t, p, q, best);
            t.pop();
        }
    }
    let h = difference_constraints_height(z) as i64;
    let mut best = u64::MAX;
    for x0 in 0..=h {
        go(z, h, &mut vec![x0], p, q, &mut best);
    }
    best
}

struct PairFacts {
    cap: usize,
    overlap: i64,
    variation: i64,
}

/// Every pair of words of `L(σ)` (at most `kmax` letters, feasible on the
/// span) that admits a superposition, evaluated from the definitions.
fn brute_pairs(spec: &PatternSpec, span: usize, kmax: usize) -> Vec<PairFacts> {
    let mut words: Vec<Word> = language_slice(&spec.ast, kmax)
        .into_iter()
        .filter(|w| !w.is_empty() && difference_constraints_height(w) <= span)
        .map(Word::new)
        .collect();
    words.sort();
    let mut shifts: HashMap<(Vec<Letter>, usize, usize), u64> = HashMap::new();
    let mut shift = |z: &[Letter], p: usize, q: usize| -> u64 {
        *shifts.entry((z.to_vec(), p, q)).or_insert_with(|| brute_shift(z, p, q))
    };
    let mut out = Vec::new();
    for v in &words {
        for w in &words {
            let (lv, lw) = (v.len(), w.len());
            let mut shortest = None;
            let mut best: Option<i64> = None;
            for len in lv.max(lw)..=lv + lw {
                // The only candidate with prefix v of this length whose
                // tail comes from w; it must still have w as an actual suffix.
                let mut z = v.letters().to_vec();
                z.extend_from_slice(&w.letters()[lw - (len - lv)..]);
                if !z.ends_with(w.letters()) || naive_match(&spec.ast, &z) || difference_constraints_height(&z) > span {
                    continue;
                }
                shortest.get_or_insert(len);
                let m = z.len() + 1;
                let x = shift(&z, 1, lv + 1) as i64 - shift(&z, m - lw, m) as i64;
                if best.is_none_or(|b| x.abs() < b.abs()) {
                    best = Some(x);
                }
            }
            if let (Some(len), Some(var)) = (shortest, best) {
                out.push(PairFacts {
                    cap: lv.max(lw),
                    overlap: (lv + lw + 1 - len) as i64,
                    variation: var,
                });
            }
        }
    }
    out
}

fn three_caps<T>(cap: usize, f: impl Fn(usize) -> T) -> [T; 3] {
    [f(cap), f(cap + 1), f(cap + 2)]
}

/// Overlap recomputed from the definition, with the same three-cap
/// stabilisation contract as the fast implementation.
pub fn brute_overlap(spec: &PatternSpec, d: Domain, cap: usize) -> CharValue {
    let pairs = brute_pairs(spec, d.span(), cap + 2);
    let [a, b, c] = three_caps(cap, |k| {
        pairs
            .iter()
            .filter(|p| p.cap <= k)
            .map(|p| p.overlap)
            .max()
            .unwrap_or(0)
    });
    if a == c {
        CharValue::Defined(a)
    } else if a < b && b < c {
        CharValue::Unbounded
    } else {
        CharValue::CapLimited(c, cap + 2)
    }
}

/// Smallest variation recomputed from the definition.
pub fn brute_variation(spec: &PatternSpec, d: Domain, cap: usize) -> CharValue {
    let pairs = brute_pairs(spec, d.span(), cap + 2);
    let at = |k: usize| -> Option<i64> {
        let vis: Vec<&PairFacts> = pairs.iter().filter(|p| p.cap <= k).collect();
        let pos = vis.iter().any(|p| p.variation > 0);
        let neg = vis.iter().any(|p| p.variation < 0);
        if pos && neg {
            return None;
        }
        Some(vis.iter().map(|p| p.variation).min_by_key(|x| x.abs()).unwrap_or(0))
    };
    match three_caps(cap, at) {
        [_, _, None] => CharValue::Undefined,
        [Some(a), _, Some(c)] if a == c => CharValue::Defined(a),
        [_, _, Some(c)] => CharValue::CapLimited(c, cap + 2),
    }
}

// ---------------------------------------------------------------------
// Sharpness sweep.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    /// Valid, and attained whenever flagged sharp.
    Pass { bound: BoundResult, attained: bool },
    /// Some series violates the bound.
    Invalid {
        bound: BoundResult,
        value: ExtInt,
        counterexample: TimeSeries,
    },
    /// Flagged sharp but no series reaches the bound.
    NotAttained { bound: BoundResult, best: ExtInt },
    /// No bound exists for this input.
    Skipped { reason: String },
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Invalid { .. } | Outcome::NotAttained { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub pattern: String,
    pub aggregator: Aggregator,
    pub feature: Feature,
    pub side: Side,
    pub n: usize,
    pub domain: Domain,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<CaseReport>,
}

impl SharpnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| c.outcome.is_failure())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub budget: u64,
    /// Added to every finite bound before checking; the harness self-test
    /// uses it to make sure faults are caught.
    pub perturb: i64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: DEFAULT_BUDGET,
            perturb: 0,
        }
    }
}

fn judge(mut b: BoundResult, ex: &ExtremaResult, f: Feature, perturb: i64) -> Outcome {
    if let ExtInt::Fin(x) = b.value {
        b.value = ExtInt::Fin(x + perturb);
    }
    let (worst, witness) = match b.side {
        Side::Lower => (ex.min_all, &ex.witness_min),
        Side::Upper => (ex.max_all, &ex.witness_max),
    };
    let valid = match b.side {
        Side::Lower => worst >= b.value,
        Side::Upper => worst <= b.value,
    };
    if !valid {
        return Outcome::Invalid {
            value: worst,
            counterexample: witness.clone(),
            bound: b,
        };
    }
    // Pattern-free series carry the default value; the minimum width is
    // attained among series that do contain a pattern.
    let best = match (b.side, f) {
        (Side::Lower, Feature::Width) => ex.min_occ,
        _ => worst,
    };
    let attained = best == b.value;
    if b.sharp && !attained {
        Outcome::NotAttained { bound: b, best }
    } else {
        Outcome::Pass { bound: b, attained }
    }
}

/// Check every bound of `combos` against exhaustive enumeration.
pub fn sharpness_report(
    specs: &[&PatternSpec],
    combos: &[(Aggregator, Feature, Side)],
    n_range: std::ops::RangeInclusive<usize>,
    domains: &[Domain],
    opts: SweepOptions,
) -> Result<SharpnessReport, OracleError> {
    // Refuse oversized sweeps before doing any work.
    for n in n_range.clone() {
        for &d in domains {
            let needed = series_count(n, d);
            if needed > opts.budget as u128 {
                return Err(OracleError::BudgetExceeded {
                    needed,
                    budget: opts.budget,
                });
            }
        }
    }
    let fg: Vec<(Feature, Aggregator)> = combos.iter().map(|&(g, f, _)| (f, g)).collect();
    let mut report = SharpnessReport::default();
    for spec in specs {
        for n in n_range.clone() {
            for &d in domains {
                let ex = scan(spec, &fg, n, d, opts.budget)?;
                for (k, &(g, f, side)) in combos.iter().enumerate() {
                    let outcome = match bound(g, f, side, spec, n, d) {
                        Ok(b) => judge(b, &ex[k], f, opts.perturb),
                        Err(e) => Outcome::Skipped { reason: e.to_string() },
                    };
                    match &outcome {
                        Outcome::Pass { .. } => report.passed += 1,
                        Outcome::Skipped { .. } => report.skipped += 1,
                        _ => report.failed += 1,
                    }
                    report.cases.push(CaseReport {
                        pattern: spec.name.clone(),
                        aggregator: g,
                        feature: f,
                        side,
                        n,
                        domain: d,
                        outcome,
                    });
                }
            }
        }
    }
    Ok(report)
}
