//! The 22 named signature patterns and their reference characteristics.
//!
//! Data lives in `data/catalogue.json`, embedded at build time. Each record
//! holds `name`, `aliases`, `expr`, `a`, `b`, `omega`, `eta`, `ec` (a
//! two-element array or `null`), `class` (`overlapping`, `non_overlapping`,
//! `mixed` or `special`), `inducing` (list of words) and three lists
//! of guarded cases, `overlap_cases`, `delta_cases` and `range_cases`.
//! A case is `{"when": GUARD, "value": VALUE}`; the first case whose guard
//! holds applies. `GUARD` is `otherwise` or `VAR OP INT` with `VAR` one of
//! `span`, `n` and `OP` one of `<=`, `<`, `=`, `>=`, `>`. For overlap and δ
//! the value is an integer; for the range it is a string: an integer,
//! `n`, `n - K`, `n + K`, or `undefined`. Range cases apply to `n > ω`
//! only; shorter series have no word of the language.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characteristics::{CharValue, CharacteristicsReport};
use crate::properties::PatternClass;
use crate::semantics::PatternSpec;
use crate::sigre::{self, Word};

const DATA: &str = include_str!("../data/catalogue.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogueError {
    #[error("unknown pattern {name:?}{}", suggest(.suggestions))]
    UnknownPattern { name: String, suggestions: Vec<String> },
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case<V> {
    pub when: String,
    pub value: V,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub omega: usize,
    pub eta: usize,
    pub ec: Option<(u8, u8)>,
    pub class: PatternClass,
    pub inducing: BTreeSet<Word>,
    pub overlap_cases: Vec<Case<i64>>,
    pub delta_cases: Vec<Case<i64>>,
    pub range_cases: Vec<Case<String>>,
}

#[derive(Debug, Clone, Deserialize)]
struct Record {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
    expr: String,
    a: usize,
    b: usize,
    #[serde(flatten)]
    golden: Golden,
}

#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub expr: String,
    pub a: usize,
    pub b: usize,
    pub golden: Golden,
    spec: PatternSpec,
}

impl CatalogueEntry {
    /// The compiled pattern; clones share the characteristic caches.
    pub fn spec(&self) -> &PatternSpec {
        &self.spec
    }
}

fn guard_holds(guard: &str, var: &str, x: i64) -> bool {
    let g = guard.trim();
    if g == "otherwise" {
        return true;
    }
    let parts: Vec<&str> = g.split_whitespace().collect();
    let [v, op, k] = parts[..] else {
        panic!("malformed guard {guard:?}")
    };
    assert_eq!(v, var, "guard {guard:?} does not test {var}");
    let k: i64 = k.parse().unwrap_or_else(|_| panic!("malformed guard {guard:?}"));
    match op {
        "<=" => x <= k,
        "<" => x < k,
        "=" => x == k,
        ">=" => x >= k,
        ">" => x > k,
        _ => panic!("malformed guard {guard:?}"),
    }
}

fn select<'a, V>(cases: &'a [Case<V>], var: &str, x: i64) -> Option<&'a V> {
    cases.iter().find(|c| guard_holds(&c.when, var, x)).map(|c| &c.value)
}

fn range_value(expr: &str, n: i64) -> CharValue {
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if e == "undefined" {
        return CharValue::Undefined;
    }
    if let Ok(k) = e.parse() {
        return CharValue::Defined(k);
    }
    let rest = e
        .strip_prefix('n')
        .unwrap_or_else(|| panic!("malformed range value {expr:?}"));
    let off: i64 = if rest.is_empty() {
        0
    } else {
        rest.parse()
            .unwrap_or_else(|_| panic!("malformed range value {expr:?}"))
    };
    CharValue::Defined(n + off)
}

impl Golden {
    pub fn overlap_at(&self, span: usize) -> Option<i64> {
        select(&self.overlap_cases, "span", span as i64).copied()
    }

    pub fn delta_at(&self, span: usize) -> Option<i64> {
        select(&self.delta_cases, "span", span as i64).copied()
    }

    pub fn range_at(&self, n: usize) -> CharValue {
        if n <= self.omega {
            return CharValue::Undefined;
        }
        select(&self.range_cases, "n", n as i64)
            .map(|v| range_value(v, n as i64))
            .unwrap_or(CharValue::Undefined)
    }
}

fn load() -> Vec<CatalogueEntry> {
    let records: Vec<Record> = serde_json::from_str(DATA).expect("embedded catalogue is valid JSON");
    records
        .into_iter()
        .map(|r| {
            let ast = sigre::parse(&r.expr).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            assert!(r.a + r.b <= r.golden.omega + 1, "{}: trimming exceeds width", r.name);
            CatalogueEntry {
                spec: PatternSpec::new(r.name.clone(), ast, r.a, r.b),
                name: r.name,
                aliases: r.aliases,
                expr: r.expr,
                a: r.a,
                b: r.b,
                golden: r.golden,
            }
        })
        .collect()
}

/// All entries, alphabetical by canonical name.
pub fn all() -> &'static [CatalogueEntry] {
    static CAT: OnceLock<Vec<CatalogueEntry>> = OnceLock::new();
    CAT.get_or_init(load)
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, '_' | '-' | ' '))
        .flat_map(char::to_lowercase)
        .collect()
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1];
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur.push(sub.min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Case-insensitive lookup by canonical name or shortcut; `_`, `-` and
/// spaces are ignored, so `DecTer`, `dec_ter` and `DecreasingTerrace` all
/// resolve to `decreasing_terrace`.
pub fn lookup(name: &str) -> Result<&'static CatalogueEntry, CatalogueError> {
    let key = normalize(name);
    if let Some(e) = all()
        .iter()
        .find(|e| normalize(&e.name) == key || e.aliases.iter().any(|a| normalize(a) == key))
    {
        return Ok(e);
    }
    let mut scored: Vec<(usize, &str)> = all()
        .iter()
        .map(|e| {
            let d = std::iter::once(&e.name)
                .chain(&e.aliases)
                .map(|n| {
                    let n = normalize(n);
                    if n.starts_with(&key) || key.starts_with(&n) {
                        0
                    } else {
                        edit_distance(&n, &key)
                    }
                })
                .min()
                .unwrap();
            (d, e.name.as_str())
        })
        .filter(|&(d, _)| d <= 3)
        .collect();
    scored.sort();
    Err(CatalogueError::UnknownPattern {
        name: name.to_string(),
        suggestions: scored.into_iter().take(3).map(|(_, n)| n.to_string()).collect(),
    })
}

/// One disagreement between a computed report and the reference data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub characteristic: &'static str,
    pub expected: String,
    pub got: String,
}

pub fn golden_check(entry: &CatalogueEntry, r: &CharacteristicsReport) -> Vec<Mismatch> {
    let g = &entry.golden;
    let mut out = Vec::new();
    let mut cmp = |what: &'static str, expected: String, got: String| {
        if expected != got {
            out.push(Mismatch {
                characteristic: what,
                expected,
                got,
            });
        }
    };
    let show_ec = |x: Option<(u8, u8)>| match x {
        Some((e, c)) => format!("({e},{c})"),
        None => "undefined".to_string(),
    };
    let show_set = |s: &BTreeSet<Word>| {
        let v: Vec<String> = s.iter().map(|w| w.to_string()).collect();
        format!("{{{}}}", v.join(","))
    };
    let show_opt = |x: Option<i64>| x.map_or("no case".to_string(), |v| CharValue::Defined(v).to_string());
    let span = r.domain.span();
    cmp("omega", g.omega.to_string(), r.omega.to_string());
    cmp("eta", g.eta.to_string(), r.eta.to_string());
    cmp("range_params", show_ec(g.ec), show_ec(r.range_params));
    cmp("range", g.range_at(r.n).to_string(), r.range_at_n.to_string());
    cmp("inducing", show_set(&g.inducing), show_set(&r.inducing));
    cmp("overlap", show_opt(g.overlap_at(span)), r.overlap.to_string());
    cmp("variation", show_opt(g.delta_at(span)), r.variation.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_two_sorted_entries() {
        let names: Vec<&str> = all().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), 22);
        assert_eq!(names[0], "bump_on_decreasing_sequence");
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn lookups() {
        let dt = lookup("decreasing_terrace").unwrap();
        assert_eq!((dt.expr.as_str(), dt.a, dt.b), (">=+>", 1, 1));
        assert_eq!(lookup("dec_ter").unwrap().name, "decreasing_terrace");
        assert_eq!(lookup("DecTer").unwrap().name, "decreasing_terrace");
        assert_eq!(lookup("PEAK").unwrap().expr, "<(<|=)*(>|=)*>");
        let b = lookup("bump_on_decreasing_sequence").unwrap();
        assert_eq!((b.a, b.b), (1, 2));
        match lookup("peek") {
            Err(CatalogueError::UnknownPattern { suggestions, .. }) => {
                assert!(suggestions.contains(&"peak".to_string()))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn guarded_cases() {
        let dec = &lookup("dec").unwrap().golden;
        assert_eq!(dec.overlap_at(1), Some(0));
        assert_eq!(dec.overlap_at(2), Some(1));
        assert_eq!(dec.delta_at(3), Some(-1));
        assert_eq!(dec.range_at(2), CharValue::Defined(1));
        assert_eq!(dec.range_at(3), CharValue::Undefined);
        let sds = &lookup("s_dec_seq").unwrap().golden;
        assert_eq!(sds.range_at(7), CharValue::Defined(6));
        let peak = &lookup("peak").unwrap().golden;
        assert_eq!(peak.range_at(2), CharValue::Undefined);
        assert_eq!(peak.range_at(3), CharValue::Defined(1));
    }
}
