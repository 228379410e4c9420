//! Sharp bounds on the result variable of a time-series constraint, with
//! the preconditions each one rests on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characteristics::{self as ch, CharError, CharValue};
use crate::properties::{self as pr, PropertyError};
use crate::semantics::{Aggregator, DefaultPolicy, Domain, ExtInt, Feature, PatternSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lower" | "lo" | "min" => Ok(Side::Lower),
            "upper" | "up" | "max" => Ok(Side::Upper),
            _ => Err(format!("unknown side {s:?} (expected lower or upper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("property {0} does not hold")]
    PropertyMissing(String),
    #[error("overlap {overlap} exceeds width {omega}")]
    OverlapExceedsWidth { overlap: i64, omega: usize },
    #[error("smallest variation is {0}")]
    VariationUndefined(CharValue),
    #[error("{what} is {value}")]
    CharacteristicUnavailable { what: &'static str, value: CharValue },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Characteristic(#[from] CharError),
}

impl From<PropertyError> for BoundError {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::Characteristic(c) => BoundError::Characteristic(c),
            PropertyError::FixedLengthRegex => BoundError::NotApplicable("fixed-length regex".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: ExtInt,
    pub side: Side,
    pub sharp: bool,
    pub source: String,
    pub preconditions: Vec<(String, bool)>,
    pub m_used: Option<ExtInt>,
}

impl BoundResult {
    fn new(value: impl Into<ExtInt>, side: Side, sharp: bool, source: &str, pre: Vec<(&str, bool)>) -> Self {
        debug_assert!(!sharp || pre.iter().all(|p| p.1));
        BoundResult {
            value: value.into(),
            side,
            sharp,
            source: source.to_string(),
            preconditions: pre.into_iter().map(|(l, b)| (l.to_string(), b)).collect(),
            m_used: None,
        }
    }
}

const FEASIBLE: &str = "occurrence feasible";
const INFEASIBLE: &str = "no occurrence possible";

fn check_n(n: usize) -> Result<(), BoundError> {
    if n < 2 {
        Err(BoundError::InvalidArgument(format!("series length {n} < 2")))
    } else {
        Ok(())
    }
}

fn defined(what: &'static str, v: CharValue) -> Result<i64, BoundError> {
    v.defined()
        .ok_or(BoundError::CharacteristicUnavailable { what, value: v })
}

fn overlap_value(spec: &PatternSpec, d: Domain) -> Result<i64, BoundError> {
    defined("overlap", ch::overlap(spec, d, ch::default_cap(spec)?))
}

pub fn nb_lower(spec: &PatternSpec, n: usize, d: Domain) -> Result<BoundResult, BoundError> {
    check_n(n)?;
    if pr::nb_simple(spec, d)?.holds {
        return Ok(BoundResult::new(
            0,
            Side::Lower,
            true,
            "nb-lower:simple",
            vec![("NB-simple", true)],
        ));
    }
    if d.span() == 0 {
        if pr::is_steady(spec) {
            return Ok(BoundResult::new(
                n as i64 - 1,
                Side::Lower,
                true,
                "nb-lower:steady",
                vec![("steady on a single value", true)],
            ));
        }
        if pr::is_steady_sequence(spec) {
            return Ok(BoundResult::new(
                1,
                Side::Lower,
                true,
                "nb-lower:steady-sequence",
                vec![("steady sequence on a single value", true)],
            ));
        }
    }
    Err(BoundError::NotApplicable("NB-simple does not hold".into()))
}

/// Maximum length of an interval without restart.
pub fn interval_cap(spec: &PatternSpec, d: Domain) -> Result<ExtInt, BoundError> {
    let cap = ch::default_cap(spec)?;
    let delta = ch::smallest_variation(spec, d, cap);
    let Some(dl) = delta.defined() else {
        return Err(BoundError::VariationUndefined(delta));
    };
    if dl == 0 {
        return Ok(ExtInt::PosInf);
    }
    let o = overlap_value(spec, d)?;
    let omega = ch::width(spec)? as i64;
    let eta = ch::height(spec)? as i64;
    let k = (d.span() as i64 - eta + dl.abs()).max(0) / dl.abs();
    Ok(ExtInt::Fin(k * (omega + 1 - o) + o))
}

/// Maximum number of occurrences when every chained pair shares `o`
/// variables: `⌊max(0, len − o)/(ω + 1 − o)⌋`.
fn chained(len: i64, o: i64, omega: i64) -> i64 {
    (len - o).max(0) / (omega + 1 - o)
}

pub fn nb_upper(spec: &PatternSpec, n: usize, d: Domain) -> Result<BoundResult, BoundError> {
    check_n(n)?;
    if !pr::occurrence_feasible(spec, n, d)? {
        return Ok(BoundResult::new(
            0,
            Side::Upper,
            true,
            "nb-upper:infeasible",
            vec![(INFEASIBLE, true)],
        ));
    }
    if d.span() == 0 && pr::is_steady_sequence(spec) {
        return Ok(BoundResult::new(
            1,
            Side::Upper,
            true,
            "nb-upper:steady-sequence",
            vec![("steady sequence on a single value", true)],
        ));
    }
    let omega = ch::width(spec)?;
    let o = overlap_value(spec, d)?;
    if o > omega as i64 {
        return Err(BoundError::OverlapExceedsWidth { overlap: o, omega });
    }
    let w = omega as i64;
    let prop = if pr::nb_overlap(spec, d)?.holds {
        Some("NB-overlap")
    } else if pr::nb_no_overlap(spec, d, pr::DEFAULT_WINDOW)?.holds {
        Some("NB-no-overlap")
    } else {
        None
    };
    let cap = prop.map(|_| interval_cap(spec, d)).transpose();
    match (prop, cap) {
        (Some(label), Ok(Some(mc))) => {
            let n = n as i64;
            let m = match mc {
                ExtInt::Fin(x) => n.min(x.max(1)),
                _ => n,
            };
            let a = chained(m, o, w);
            let b = n / m;
            let c = chained(n % m, o, w);
            let mut r = BoundResult::new(
                a * b + c,
                Side::Upper,
                true,
                "nb-upper:interval",
                vec![(FEASIBLE, true), (label, true)],
            );
            r.m_used = Some(mc);
            Ok(r)
        }
        (Some(_), Err(e)) => Err(e),
        _ => Ok(BoundResult::new(
            chained(n as i64, o, w),
            Side::Upper,
            false,
            "nb-upper:fallback",
            vec![
                (FEASIBLE, true),
                ("overlap <= width", true),
                ("NB-overlap or NB-no-overlap", false),
            ],
        )),
    }
}

fn width_preconditions(spec: &PatternSpec) -> Result<(u8, u8), BoundError> {
    if pr::is_fixed_length(spec) {
        return Err(BoundError::NotApplicable("fixed-length regex".into()));
    }
    let c = pr::width_max(spec)?;
    if !c.holds {
        return Err(BoundError::PropertyMissing("WIDTH-max".into()));
    }
    Ok(ch::range_params(spec).expect("WIDTH-max implies range parameters"))
}

fn span_covers_range(spec: &PatternSpec, n: usize, d: Domain) -> bool {
    matches!(ch::range(spec, n), CharValue::Defined(p) if d.span() as i64 >= p)
}

pub fn max_width_upper(spec: &PatternSpec, n: usize, d: Domain) -> Result<BoundResult, BoundError> {
    check_n(n)?;
    let (e, c) = width_preconditions(spec)?;
    let pre = vec![("WIDTH-max", true), ("non-fixed-length", true)];
    if !pr::occurrence_feasible(spec, n, d)? {
        return Ok(BoundResult::new(
            0,
            Side::Upper,
            true,
            "max-width:infeasible",
            vec![(INFEASIBLE, true)],
        ));
    }
    let (a, b) = (spec.a as i64, spec.b as i64);
    let omega = ch::width(spec)? as i64;
    let v = if span_covers_range(spec, n, d) {
        n as i64 - a - b
    } else {
        e as i64 * (d.span() as i64 + 1 - a - b) + c as i64 * (omega + 1 - a - b)
    };
    Ok(BoundResult::new(v, Side::Upper, true, "max-width", pre))
}

pub fn sum_width_upper(spec: &PatternSpec, n: usize, d: Domain) -> Result<BoundResult, BoundError> {
    check_n(n)?;
    let (e, c) = width_preconditions(spec)?;
    if !pr::width_sum(spec, d)?.holds {
        return Err(BoundError::PropertyMissing("WIDTH-sum".into()));
    }
    if !pr::occurrence_feasible(spec, n, d)? {
        return Ok(BoundResult::new(
            0,
            Side::Upper,
            true,
            "sum-width:infeasible",
            vec![(INFEASIBLE, true)],
        ));
    }
    let (a, b) = (spec.a as i64, spec.b as i64);
    let omega = ch::width(spec)? as i64;
    let eta = ch::height(spec)? as i64;
    let pre = vec![("WIDTH-max", true), ("WIDTH-sum", true), ("non-fixed-length", true)];
    if span_covers_range(spec, n, d) {
        return Ok(BoundResult::new(n as i64 - a - b, Side::Upper, true, "sum-width", pre));
    }
    let rho = (eta + 1 - d.span() as i64).clamp(0, 1) * (n as i64 % 2);
    let tau = if c == 0 {
        0
    } else {
        nb_upper(spec, n, d)?.value.finite().expect("finite occurrence count")
    };
    let v = e as i64 * (n as i64 - rho) + c as i64 * (omega + 1 - a - b) * tau;
    Ok(BoundResult::new(v, Side::Upper, true, "sum-width", pre))
}

pub fn min_width_lower(spec: &PatternSpec, n: usize, d: Domain) -> Result<BoundResult, BoundError> {
    check_n(n)?;
    if !pr::occurrence_feasible(spec, n, d)? {
        return Ok(BoundResult::new(
            DefaultPolicy::default().value(Aggregator::Min),
            Side::Lower,
            true,
            "min-width:infeasible",
            vec![(INFEASIBLE, true)],
        ));
    }
    if pr::width_occurrence(spec, d)?.holds {
        let v = ch::width(spec)? as i64 + 1 - (spec.a + spec.b) as i64;
        return Ok(BoundResult::new(
            v,
            Side::Lower,
            true,
            "min-width",
            vec![("WIDTH-occurrence", true)],
        ));
    }
    if d.span() == 0 && pr::is_steady_sequence(spec) {
        return Ok(BoundResult::new(
            n as i64,
            Side::Lower,
            true,
            "min-width:steady-sequence",
            vec![("steady sequence on a single value", true)],
        ));
    }
    Err(BoundError::NotApplicable("WIDTH-occurrence does not hold".into()))
}

/// The five supported `(aggregator, feature, side)` combinations.
pub const SUPPORTED: [(Aggregator, Feature, Side); 5] = [
    (Aggregator::Sum, Feature::One, Side::Lower),
    (Aggregator::Sum, Feature::One, Side::Upper),
    (Aggregator::Max, Feature::Width, Side::Upper),
    (Aggregator::Sum, Feature::Width, Side::Upper),
    (Aggregator::Min, Feature::Width, Side::Lower),
];

pub fn bound(
    g: Aggregator,
    f: Feature,
    side: Side,
    spec: &PatternSpec,
    n: usize,
    d: Domain,
) -> Result<BoundResult, BoundError> {
    use Aggregator as A;
    use Feature as F;
    match (g, f, side) {
        (A::Sum, F::One, Side::Lower) => nb_lower(spec, n, d),
        (A::Sum, F::One, Side::Upper) => nb_upper(spec, n, d),
        (A::Max, F::Width, Side::Upper) => max_width_upper(spec, n, d),
        (A::Sum, F::Width, Side::Upper) => sum_width_upper(spec, n, d),
        (A::Min, F::Width, Side::Lower) => min_width_lower(spec, n, d),
        (A::Max, F::Min, Side::Upper) => Err(BoundError::NotSupported(
            "the (max, min) bound is the one of CP16, not derived here".into(),
        )),
        _ => Err(BoundError::NotSupported(
            "no bound is known for this combination".into(),
        )),
    }
}
