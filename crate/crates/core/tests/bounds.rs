//! Bound formulas on reference instances, cross-checked by enumeration.

use proptest::prelude::*;
use sigpat::bounds::{self, interval_cap, BoundError, Side, SUPPORTED};
use sigpat::catalogue;
use sigpat::characteristics as ch;
use sigpat::oracle::brute_extrema;
use sigpat::semantics::{Aggregator, Domain, ExtInt, Feature, PatternSpec};

fn spec(name: &str) -> &'static PatternSpec {
    catalogue::lookup(name).unwrap().spec()
}

fn dom(lo: i64, hi: i64) -> Domain {
    Domain::new(lo, hi).unwrap()
}

fn fin(x: i64) -> ExtInt {
    ExtInt::Fin(x)
}

#[test]
fn nb_lower_instances() {
    let b = bounds::nb_lower(spec("peak"), 6, dom(0, 3)).unwrap();
    assert_eq!((b.value, b.sharp), (fin(0), true));
    let b = bounds::nb_lower(spec("steady"), 5, dom(2, 2)).unwrap();
    assert_eq!((b.value, b.sharp), (fin(4), true));
    let b = bounds::nb_lower(spec("steady_sequence"), 5, dom(2, 2)).unwrap();
    assert_eq!((b.value, b.sharp), (fin(1), true));
}

#[test]
fn interval_cap_instances() {
    assert_eq!(
        interval_cap(spec("decreasing_terrace"), dom(0, 2)).unwrap(),
        ExtInt::PosInf
    );
    for u in 3..=8 {
        assert_eq!(
            interval_cap(spec("decreasing_terrace"), dom(0, u)).unwrap(),
            fin((u - 1) * 2 + 2)
        );
    }
    assert_eq!(interval_cap(spec("peak"), dom(0, 1)).unwrap(), ExtInt::PosInf);
}

#[test]
fn nb_upper_instances() {
    let dt = spec("decreasing_terrace");
    for n in 2..=20 {
        let b = bounds::nb_upper(dt, n, dom(0, 2)).unwrap();
        assert_eq!((b.value, b.sharp), (fin(n as i64 / 4), true), "n={n}");
    }
    let b = bounds::nb_upper(dt, 8, dom(0, 3)).unwrap();
    assert_eq!((b.value, b.sharp, b.m_used), (fin(2), true, Some(fin(6))));
    let b = bounds::nb_upper(spec("steady_sequence"), 5, dom(1, 1)).unwrap();
    assert_eq!((b.value, b.sharp), (fin(1), true));
}

#[test]
fn width_bound_instances() {
    let inf = spec("inflexion");
    assert_eq!(bounds::max_width_upper(inf, 10, dom(0, 3)).unwrap().value, fin(8));
    assert_eq!(bounds::max_width_upper(inf, 10, dom(0, 0)).unwrap().value, fin(0));
    assert_eq!(
        bounds::max_width_upper(spec("gorge"), 10, dom(0, 1)).unwrap().value,
        fin(1)
    );
    assert_eq!(
        bounds::max_width_upper(spec("strictly_decreasing_sequence"), 10, dom(0, 4))
            .unwrap()
            .value,
        fin(5)
    );
    for n in 4..=12 {
        assert_eq!(
            bounds::sum_width_upper(inf, n, dom(0, 2)).unwrap().value,
            fin(n as i64 - 2),
            "n={n}"
        );
        assert_eq!(
            bounds::sum_width_upper(spec("gorge"), n, dom(0, 1)).unwrap().value,
            fin((n as i64 - 1) / 2),
            "n={n}"
        );
    }
    assert_eq!(
        bounds::sum_width_upper(spec("strictly_decreasing_sequence"), 7, dom(0, 1))
            .unwrap()
            .value,
        fin(6)
    );
    assert_eq!(bounds::min_width_lower(inf, 6, dom(0, 1)).unwrap().value, fin(1));
    assert_eq!(
        bounds::min_width_lower(spec("steady_sequence"), 6, dom(2, 2))
            .unwrap()
            .value,
        fin(6)
    );
    assert_eq!(
        bounds::min_width_lower(spec("decreasing_terrace"), 6, dom(0, 2))
            .unwrap()
            .value,
        fin(2)
    );
}

#[test]
fn instances_agree_with_enumeration() {
    let cases: [(&str, Aggregator, Feature, usize, Domain, i64); 6] = [
        ("decreasing_terrace", Aggregator::Sum, Feature::One, 8, dom(0, 3), 2),
        ("decreasing_terrace", Aggregator::Sum, Feature::One, 8, dom(0, 2), 2),
        (
            "strictly_decreasing_sequence",
            Aggregator::Sum,
            Feature::Width,
            7,
            dom(0, 1),
            6,
        ),
        ("gorge", Aggregator::Sum, Feature::Width, 9, dom(0, 1), 4),
        ("inflexion", Aggregator::Max, Feature::Width, 8, dom(0, 3), 6),
        ("peak", Aggregator::Sum, Feature::One, 4, dom(0, 1), 1),
    ];
    for (name, g, f, n, d, want) in cases {
        let ex = brute_extrema(spec(name), f, g, n, d, u64::MAX).unwrap();
        assert_eq!(ex.max_all, fin(want), "{name} {g} {f} n={n} {d}");
    }
    let ex = brute_extrema(
        spec("decreasing_terrace"),
        Feature::Width,
        Aggregator::Min,
        6,
        dom(0, 2),
        u64::MAX,
    )
    .unwrap();
    assert_eq!(ex.min_occ, fin(2));
}

#[test]
fn unsupported_combinations() {
    let peak = spec("peak");
    let e = bounds::bound(Aggregator::Max, Feature::Min, Side::Upper, peak, 6, dom(0, 3)).unwrap_err();
    assert!(matches!(&e, BoundError::NotSupported(m) if m.contains("CP16")), "{e}");
    let e = bounds::bound(Aggregator::Min, Feature::Width, Side::Upper, peak, 6, dom(0, 3)).unwrap_err();
    assert!(matches!(e, BoundError::NotSupported(_)));
    let b = bounds::bound(
        Aggregator::Sum,
        Feature::One,
        Side::Upper,
        spec("decreasing_terrace"),
        8,
        dom(0, 2),
    )
    .unwrap();
    assert_eq!(b.value, fin(2));
    let e = bounds::max_width_upper(spec("decreasing"), 6, dom(0, 2)).unwrap_err();
    assert!(matches!(e, BoundError::NotApplicable(_)));
}

/// The maximum number of shortest patterns, counted directly: the largest
/// number of width-ω occurrences over all series.
fn shortest_pattern_count(s: &PatternSpec, n: usize, d: Domain) -> i64 {
    let omega = ch::width(s).unwrap();
    let a_b = (s.a + s.b) as i64;
    let mut best = 0;
    let mut vals = vec![d.lo; n];
    loop {
        let t = sigpat::semantics::TimeSeries(vals.clone());
        let ev = sigpat::semantics::evaluate_with(s, Feature::Width, Aggregator::Sum, &t, &Default::default()).unwrap();
        let short = ev.features.iter().filter(|&&w| w == omega as i64 + 1 - a_b).count() as i64;
        best = best.max(short);
        let mut p = 0;
        while p < n && vals[p] == d.hi {
            vals[p] = d.lo;
            p += 1;
        }
        if p == n {
            return best;
        }
        vals[p] += 1;
    }
}

#[test]
fn tau_equals_the_count_of_shortest_patterns() {
    for name in [
        "gorge",
        "peak",
        "strictly_decreasing_sequence",
        "decreasing_terrace",
        "inflexion",
    ] {
        let s = spec(name);
        for n in 2..=7 {
            for span in 0..=2 {
                let d = Domain::of_span(span);
                let tau = bounds::nb_upper(s, n, d).unwrap();
                if !tau.sharp {
                    continue;
                }
                assert_eq!(
                    tau.value,
                    fin(shortest_pattern_count(s, n, d)),
                    "{name} n={n} span {span}"
                );
            }
        }
    }
}

#[test]
fn sharp_results_have_all_preconditions() {
    for e in catalogue::all() {
        for &(g, f, side) in &SUPPORTED {
            for n in 2..=9 {
                for span in 0..=3 {
                    if let Ok(b) = bounds::bound(g, f, side, e.spec(), n, Domain::of_span(span)) {
                        if b.sharp {
                            assert!(
                                b.preconditions.iter().all(|p| p.1),
                                "{} {g} {f} {side} n={n}: {:?}",
                                e.name,
                                b.preconditions
                            );
                        }
                    }
                }
            }
        }
    }
}

fn arb_pattern() -> impl Strategy<Value = usize> {
    0..catalogue::all().len()
}

proptest! {
    #[test]
    fn fallback_coincides_with_sharp_bound_without_restarts(p in arb_pattern(), n in 2usize..40, span in 0usize..5) {
        let s = catalogue::all()[p].spec();
        let d = Domain::of_span(span);
        let b = bounds::nb_upper(s, n, d).unwrap();
        if b.sharp && b.m_used == Some(fin(n as i64)) && interval_cap(s, d).unwrap() == ExtInt::PosInf {
            let omega = ch::width(s).unwrap() as i64;
            let o = ch::overlap(s, d, ch::default_cap(s).unwrap()).defined().unwrap();
            prop_assert_eq!(b.value, fin((n as i64 - o).max(0) / (omega + 1 - o)));
        }
    }

    #[test]
    fn nb_bounds_are_ordered_and_monotone(p in arb_pattern(), n in 2usize..40, span in 0usize..5) {
        let s = catalogue::all()[p].spec();
        let d = Domain::of_span(span);
        let hi = bounds::nb_upper(s, n, d).unwrap().value;
        let hi_next = bounds::nb_upper(s, n + 1, d).unwrap().value;
        if let Ok(lo) = bounds::nb_lower(s, n, d) {
            prop_assert!(lo.value <= hi);
        }
        prop_assert!(hi >= fin(0) && hi <= fin(n as i64));
        prop_assert!(hi <= hi_next || !bounds::nb_upper(s, n, d).unwrap().sharp);
    }

    #[test]
    fn width_bounds_fit_the_series(p in arb_pattern(), n in 2usize..40, span in 0usize..5) {
        let s = catalogue::all()[p].spec();
        let d = Domain::of_span(span);
        if let Ok(b) = bounds::max_width_upper(s, n, d) {
            prop_assert!(b.value <= fin(n as i64));
        }
        if let Ok(b) = bounds::sum_width_upper(s, n, d) {
            prop_assert!(b.value <= fin(n as i64));
        }
    }
}
