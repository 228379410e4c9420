//! Structural properties of a pattern for a domain, with witnesses that
//! can be re-checked condition by condition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characteristics::{
    self as ch, overlap_of_words, range, range_params, superpositions, variation_in, CharError, CharValue,
};
use crate::semantics::{maximal_occurrences, word_height, Domain, PatternSpec};
use crate::sigre::{bounded_height_automaton, compile, parse, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error(transparent)]
    Characteristic(#[from] CharError),
    #[error("the language is fixed-length")]
    FixedLengthRegex,
}

/// Objects a positive check rests on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z1: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z2: Option<Word>,
    pub values: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub failed_condition: Option<String>,
}

impl PropertyCheck {
    fn pass(w: Witness) -> Self {
        PropertyCheck {
            holds: true,
            witness: Some(w),
            failed_condition: None,
        }
    }

    fn fail(cond: impl Into<String>) -> Self {
        PropertyCheck {
            holds: false,
            witness: None,
            failed_condition: Some(cond.into()),
        }
    }
}

pub const DEFAULT_WINDOW: usize = 4;

/// A pattern can occur in a series of length `n` over `d`.
pub fn occurrence_feasible(spec: &PatternSpec, n: usize, d: Domain) -> Result<bool, CharError> {
    Ok(n > ch::width(spec)? && d.span() >= ch::height(spec)?)
}

pub fn is_fixed_length(spec: &PatternSpec) -> bool {
    spec.aut.lengths().is_some_and(|s| s.len() <= 1)
}

pub fn nb_simple(spec: &PatternSpec, d: Domain) -> Result<PropertyCheck, CharError> {
    let theta = ch::inducing_words(spec)?;
    let all_strict = theta.iter().all(|w| w.letters().iter().any(|&l| l != Letter::Eq));
    let all_eq = theta.iter().all(|w| w.contains(Letter::Eq));
    if all_strict || (all_eq && d.span() > 0) {
        let mut wit = Witness::default();
        wit.values.insert("inducing_words".into(), theta.len() as i64);
        Ok(PropertyCheck::pass(wit))
    } else if all_eq {
        Ok(PropertyCheck::fail("NB-simple (ii): empty domain span"))
    } else {
        Ok(PropertyCheck::fail("NB-simple (i)"))
    }
}

/// Shortest words whose height equals the height of the pattern.
fn minimal_words(spec: &PatternSpec) -> Result<(usize, usize, Vec<Word>), CharError> {
    let omega = ch::width(spec)?;
    let eta = ch::height(spec)?;
    let ws = spec
        .aut
        .words_of_length(omega)
        .into_iter()
        .filter(|v| word_height(v) == eta)
        .collect();
    Ok((omega, eta, ws))
}

fn variation_of(z: &Word, first: &Word, second: &Word) -> i64 {
    variation_in(z.letters(), first.len(), second.len())
}

fn defined(x: CharValue) -> Option<i64> {
    x.defined()
}

/// Per-condition verdicts of a NB-overlap candidate tuple.
pub fn nb_overlap_conditions(
    spec: &PatternSpec,
    d: Domain,
    v: &Word,
    w: &Word,
    z1: &Word,
    z2: &Word,
) -> Result<Vec<(&'static str, bool)>, CharError> {
    let omega = ch::width(spec)?;
    let eta = ch::height(spec)?;
    let cap = ch::default_cap(spec)?;
    let o = defined(ch::overlap(spec, d, cap));
    let delta = defined(ch::smallest_variation(spec, d, cap));
    let is_sup = |a: &Word, b: &Word, z: &Word| superpositions(spec, a, b, d).is_ok_and(|s| s.contains(z));
    let lv = v.len() as i64;
    let lw = w.len() as i64;
    let c3 = o
        .is_some_and(|o| lv + lw - z1.len() as i64 + 1 == o && lw + lv - z2.len() as i64 + 1 == o && o <= omega as i64);
    let c5 = delta.is_some_and(|dl| {
        if v != w {
            variation_of(z1, v, w) == dl && variation_of(z2, w, v) == dl
        } else {
            variation_of(z1, v, v) == dl
        }
    });
    let c6 = delta.is_some_and(|dl| {
        let h = (eta as i64 + dl.abs()) as usize;
        word_height(z1) == h && word_height(z2) == h
    });
    let c7 = match delta {
        Some(dl) if dl > 0 => !spec.is_factor(&v.with(Letter::Lt)) && !spec.is_factor(&w.with(Letter::Lt)),
        Some(dl) if dl < 0 => !spec.is_factor(&v.with(Letter::Gt)) && !spec.is_factor(&w.with(Letter::Gt)),
        Some(_) => true,
        None => false,
    };
    Ok(vec![
        ("superpositions", is_sup(v, w, z1) && is_sup(w, v, z2)),
        ("(i)", word_height(v) == eta && word_height(w) == eta),
        ("(ii)", v.len() == omega && w.len() == omega),
        ("(iii)", c3),
        ("(iv)", !spec.is_factor(z1) && !spec.is_factor(z2)),
        ("(v)", c5),
        ("(vi)", c6),
        ("(vii)", c7),
    ])
}

pub fn nb_overlap(spec: &PatternSpec, d: Domain) -> Result<PropertyCheck, CharError> {
    let cap = ch::default_cap(spec)?;
    let o = ch::overlap(spec, d, cap);
    let delta = ch::smallest_variation(spec, d, cap);
    let (Some(o), Some(dl)) = (defined(o), defined(delta)) else {
        return Ok(PropertyCheck::fail(format!(
            "NB-overlap: overlap {o} / variation {delta} not defined"
        )));
    };
    if o == 0 {
        return Ok(PropertyCheck::fail("NB-overlap: overlap is 0"));
    }
    let (_, _, cands) = minimal_words(spec)?;
    let mut furthest = "(iii)";
    for v in &cands {
        for w in &cands {
            let z1s = superpositions(spec, v, w, d)?;
            let z2s = superpositions(spec, w, v, d)?;
            for z1 in &z1s {
                for z2 in &z2s {
                    let conds = nb_overlap_conditions(spec, d, v, w, z1, z2)?;
                    match conds.iter().find(|c| !c.1) {
                        None => {
                            let mut values = BTreeMap::new();
                            values.insert("overlap".into(), o);
                            values.insert("variation".into(), dl);
                            return Ok(PropertyCheck::pass(Witness {
                                v: Some(v.clone()),
                                w: Some(w.clone()),
                                z1: Some(z1.clone()),
                                z2: Some(z2.clone()),
                                values,
                            }));
                        }
                        Some((label, _)) => {
                            if *label > furthest {
                                furthest = label;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(PropertyCheck::fail(format!("NB-overlap {furthest}")))
}

/// Some word of length `n − 1` and height at most `span` has `v` as a
/// maximal occurrence.
fn maximal_somewhere(spec: &PatternSpec, v: &Word, n: usize, span: usize) -> Option<Word> {
    bounded_height_automaton(span)
        .words_of_length(n - 1)
        .into_iter()
        .find(|s| maximal_occurrences(spec, s).iter().any(|o| s.factor(o.i, o.j) == *v))
}

fn no_overlap_iii(spec: &PatternSpec, v: &Word, eta: usize) -> bool {
    let gt = v.with(Letter::Gt);
    let lt = v.with(Letter::Lt);
    (!spec.is_factor(&gt) && !spec.is_factor(&lt))
        || Letter::ALL.iter().any(|&l| {
            let x = v.with(l).concat(v);
            !spec.is_factor(&x) && word_height(&x) == eta
        })
}

pub fn nb_no_overlap_conditions(
    spec: &PatternSpec,
    d: Domain,
    v: &Word,
    window: usize,
) -> Result<Vec<(&'static str, bool)>, CharError> {
    let omega = ch::width(spec)?;
    let eta = ch::height(spec)?;
    let cap = ch::default_cap(spec)?;
    let o = ch::overlap(spec, d, cap);
    let c4 = (omega + 1..=omega + 1 + window).all(|n| maximal_somewhere(spec, v, n, d.span()).is_some());
    Ok(vec![
        ("overlap", o == CharValue::Defined(0)),
        ("member", spec.accepts(v)),
        ("(i)", v.len() == omega),
        ("(ii)", word_height(v) == eta),
        ("(iii)", no_overlap_iii(spec, v, eta)),
        ("(iv)", c4),
    ])
}

pub fn nb_no_overlap(spec: &PatternSpec, d: Domain, window: usize) -> Result<PropertyCheck, CharError> {
    let omega = ch::width(spec)?;
    let cap = ch::default_cap(spec)?;
    let o = ch::overlap(spec, d, cap);
    if o != CharValue::Defined(0) {
        return Ok(PropertyCheck::fail(format!("NB-no-overlap: overlap is {o}")));
    }
    let (_, eta, cands) = minimal_words(spec)?;
    let mut failed = "(i)";
    for v in &cands {
        if !no_overlap_iii(spec, v, eta) {
            failed = failed.max("(iii)");
            continue;
        }
        if (omega + 1..=omega + 1 + window).any(|n| maximal_somewhere(spec, v, n, d.span()).is_none()) {
            failed = "(iv)";
            continue;
        }
        let mut values = BTreeMap::new();
        values.insert("window".into(), window as i64);
        return Ok(PropertyCheck::pass(Witness {
            v: Some(v.clone()),
            values,
            ..Default::default()
        }));
    }
    Ok(PropertyCheck::fail(format!("NB-no-overlap {failed}")))
}

pub fn width_max(spec: &PatternSpec) -> Result<PropertyCheck, CharError> {
    let (_, _, cands) = minimal_words(spec)?;
    let Some(v) = cands.first() else {
        return Ok(PropertyCheck::fail("WIDTH-max (i)"));
    };
    let Some((e, c)) = range_params(spec) else {
        return Ok(PropertyCheck::fail("WIDTH-max (ii)"));
    };
    let mut values = BTreeMap::new();
    values.insert("e".into(), e as i64);
    values.insert("c".into(), c as i64);
    Ok(PropertyCheck::pass(Witness {
        v: Some(v.clone()),
        values,
        ..Default::default()
    }))
}

pub fn width_sum(spec: &PatternSpec, d: Domain) -> Result<PropertyCheck, CharError> {
    let omega = ch::width(spec)?;
    let cap = ch::default_cap(spec)?;
    let Some(o) = defined(ch::overlap(spec, d, cap)) else {
        return Ok(PropertyCheck::fail("WIDTH-sum (i): overlap not defined"));
    };
    if o > (spec.a + spec.b) as i64 {
        return Ok(PropertyCheck::fail("WIDTH-sum (i)"));
    }
    let linear = (omega + 2..=omega + 4).all(|n| range(spec, n) == CharValue::Defined(n as i64 - 1));
    if linear && !(spec.a == 0 && spec.b == 0 && o == 0 && omega == 1) {
        return Ok(PropertyCheck::fail("WIDTH-sum (ii)"));
    }
    let mut values = BTreeMap::new();
    values.insert("overlap".into(), o);
    Ok(PropertyCheck::pass(Witness {
        values,
        ..Default::default()
    }))
}

pub fn width_occurrence(spec: &PatternSpec, d: Domain) -> Result<PropertyCheck, PropertyError> {
    if is_fixed_length(spec) {
        return Err(PropertyError::FixedLengthRegex);
    }
    let (_, _, cands) = minimal_words(spec)?;
    // '=' first: it never raises the height of the extension.
    for v in &cands {
        for l in [Letter::Eq, Letter::Lt, Letter::Gt] {
            let w = v.with(l);
            if word_height(&w) <= d.span() && !spec.is_factor(&w) {
                return Ok(PropertyCheck::pass(Witness {
                    v: Some(v.clone()),
                    w: Some(w),
                    ..Default::default()
                }));
            }
        }
    }
    Ok(PropertyCheck::fail("WIDTH-occurrence"))
}

/// Overlap of the witness pair, for reporting.
pub fn witness_overlap(spec: &PatternSpec, d: Domain, wit: &Witness) -> Option<usize> {
    overlap_of_words(spec, wit.v.as_ref()?, wit.w.as_ref()?, d).ok()
}

fn same_language(spec: &PatternSpec, expr: &str) -> bool {
    spec.aut
        .equivalent(&compile(&parse(expr).expect("valid literal expression")))
}

/// The language is exactly `{=}`.
pub fn is_steady(spec: &PatternSpec) -> bool {
    same_language(spec, "=")
}

/// The language is exactly `=+`.
pub fn is_steady_sequence(spec: &PatternSpec) -> bool {
    same_language(spec, "=+")
}

/// Which of the two NB properties holds for one span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NbVerdict {
    Overlap,
    NoOverlap,
    Both,
    Neither,
}

/// Grouping of patterns by how the NB properties depend on the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternClass {
    /// NB-overlap at every feasible span.
    Overlapping,
    /// NB-no-overlap at every feasible span.
    NonOverlapping,
    /// NB-no-overlap at the smallest feasible span, NB-overlap above it.
    Mixed,
    /// Steady and steady sequence.
    Special,
    /// None of the above on the sampled spans.
    Unclassified,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternClass::Overlapping => "Overlapping",
            PatternClass::NonOverlapping => "Non-Overlapping",
            PatternClass::Mixed => "Overlapping/Non-Overlapping",
            PatternClass::Special => "Special",
            PatternClass::Unclassified => "Unclassified",
        })
    }
}

pub fn nb_verdict(spec: &PatternSpec, d: Domain) -> Result<NbVerdict, CharError> {
    let ov = nb_overlap(spec, d)?.holds;
    let nov = nb_no_overlap(spec, d, DEFAULT_WINDOW)?.holds;
    Ok(match (ov, nov) {
        (true, true) => NbVerdict::Both,
        (true, false) => NbVerdict::Overlap,
        (false, true) => NbVerdict::NoOverlap,
        (false, false) => NbVerdict::Neither,
    })
}

/// Class from the verdicts at spans `η`, `η + 1`, `η + 2`.
pub fn classify(spec: &PatternSpec) -> Result<(PatternClass, [NbVerdict; 3]), CharError> {
    let eta = ch::height(spec)?;
    let mut v = [NbVerdict::Neither; 3];
    for (k, x) in v.iter_mut().enumerate() {
        *x = nb_verdict(spec, Domain::of_span(eta + k))?;
    }
    use NbVerdict::{NoOverlap as N, Overlap as O};
    let class = if is_steady(spec) || is_steady_sequence(spec) {
        PatternClass::Special
    } else {
        match v {
            [O, O, O] => PatternClass::Overlapping,
            [N, N, N] => PatternClass::NonOverlapping,
            [N, O, O] => PatternClass::Mixed,
            _ => PatternClass::Unclassified,
        }
    };
    Ok((class, v))
}
