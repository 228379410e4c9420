//! Characteristics: structural invariants and agreement with brute force.

use proptest::prelude::*;
use sigpat::catalogue;
use sigpat::characteristics::{self as ch, CharValue};
use sigpat::oracle::{brute_overlap, brute_variation, difference_constraints_feasible, naive_match};
use sigpat::semantics::{supporting_series, word_height, Domain, PatternSpec};
use sigpat::sigre::{self, Letter, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn spans(spec: &PatternSpec) -> std::ops::RangeInclusive<usize> {
    let eta = ch::height(spec).unwrap();
    eta..=eta + 2
}

#[test]
fn height_width_and_range_are_ordered() {
    for e in catalogue::all() {
        let s = e.spec();
        let omega = ch::width(s).unwrap();
        let eta = ch::height(s).unwrap();
        assert!(eta <= omega, "{}", e.name);
        assert!(e.a + e.b <= omega + 1, "{}", e.name);
        for n in omega + 1..=omega + 6 {
            if let CharValue::Defined(phi) = ch::range(s, n) {
                assert!(phi >= eta as i64, "{} n={n}", e.name);
            }
        }
    }
}

#[test]
fn inducing_words_are_shortest_members_of_their_branch() {
    for e in catalogue::all() {
        let s = e.spec();
        let theta = ch::inducing_words(s).unwrap();
        let branches = sigre::dc_decompose(&s.ast).unwrap();
        assert_eq!(theta.len(), branches.len(), "{}", e.name);
        for v in &theta {
            assert!(naive_match(&s.ast, v.letters()), "{}: {v}", e.name);
            let owner = branches
                .iter()
                .find(|b| naive_match(b, v.letters()))
                .unwrap_or_else(|| panic!("{}: {v} in no branch", e.name));
            for k in 1..v.len() {
                for u in Word::all_of_length(k) {
                    assert!(!naive_match(owner, u.letters()), "{}: {u} shorter than {v}", e.name);
                }
            }
        }
    }
}

/// The definition of a superposition, checked with independent tools.
fn is_superposition(spec: &PatternSpec, v: &Word, x: &Word, z: &Word, span: usize) -> bool {
    !naive_match(&spec.ast, z.letters())
        && v.is_prefix_of(z)
        && x.is_suffix_of(z)
        && z.len() <= v.len() + x.len()
        && difference_constraints_feasible(z.letters(), span)
}

fn members(spec: &PatternSpec, k: usize) -> Vec<Word> {
    (1..=k).flat_map(|n| spec.aut.words_of_length(n)).collect()
}

#[test]
fn superpositions_satisfy_the_definition_and_are_complete() {
    for e in catalogue::all() {
        let s = e.spec();
        let omega = ch::width(s).unwrap();
        let words = members(s, omega + 2);
        for span in spans(s) {
            let d = Domain::of_span(span);
            for v in &words {
                for x in &words {
                    let got = ch::superpositions(s, v, x, d).unwrap();
                    for z in &got {
                        assert!(is_superposition(s, v, x, z, span), "{}: {v},{x} -> {z}", e.name);
                    }
                    for len in v.len().max(x.len())..=v.len() + x.len() {
                        let k = len - x.len();
                        let mut z = v.factor(1, k);
                        if k == 0 {
                            z = Word::empty();
                        }
                        let z = z.concat(x);
                        if is_superposition(s, v, x, &z, span) {
                            assert!(got.contains(&z), "{}: {v},{x} misses {z}", e.name);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn reference_superposition_examples() {
    let dt = catalogue::lookup("decreasing_terrace").unwrap().spec();
    let v = w(">=>");
    assert_eq!(
        ch::superpositions(dt, &v, &v, Domain::of_span(3))
            .unwrap()
            .into_iter()
            .collect::<Vec<_>>(),
        [w(">=>=>")]
    );
    assert!(ch::superpositions(dt, &v, &v, Domain::of_span(2)).unwrap().is_empty());
    assert_eq!(ch::overlap_of_words(dt, &v, &v, Domain::of_span(3)).unwrap(), 2);
    assert_eq!(ch::overlap_of_words(dt, &v, &v, Domain::of_span(2)).unwrap(), 0);
}

/// `min over t of max(t) − max(t[p..=q])` by enumerating supporting series.
fn shift_by_enumeration(z: &Word, p: usize, q: usize) -> u64 {
    let h = word_height(z);
    supporting_series(z, Domain::of_span(h))
        .iter()
        .map(|t| {
            let v = t.values();
            let all = *v.iter().max().unwrap();
            let part = *v[p - 1..q].iter().max().unwrap();
            (all - part) as u64
        })
        .min()
        .unwrap()
}

#[test]
fn shift_matches_enumeration() {
    for k in 1..=6 {
        for z in Word::all_of_length(k) {
            let m = k + 1;
            for p in 1..=m {
                for q in p..=m {
                    assert_eq!(
                        ch::shift_at(z.letters(), p, q),
                        shift_by_enumeration(&z, p, q),
                        "{z} {p}..{q}"
                    );
                }
            }
        }
    }
}

#[test]
fn variation_sign_follows_the_letters() {
    for e in catalogue::all() {
        let s = e.spec();
        let omega = ch::width(s).unwrap();
        let words = members(s, omega + 2);
        for span in spans(s) {
            let d = Domain::of_span(span);
            for v in &words {
                for x in &words {
                    let var = ch::variation_of_words(s, v, x, d).unwrap();
                    if var > 0 {
                        assert!(!v.contains(Letter::Gt), "{}: {v},{x} has variation {var}", e.name);
                    }
                    if var < 0 {
                        assert!(!x.contains(Letter::Lt), "{}: {v},{x} has variation {var}", e.name);
                    }
                }
            }
        }
    }
}

#[test]
fn bounded_search_agrees_with_direct_definition() {
    for e in catalogue::all() {
        let s = e.spec();
        let cap = ch::default_cap(s).unwrap();
        for span in spans(s) {
            let d = Domain::of_span(span);
            assert_eq!(
                ch::overlap(s, d, cap),
                brute_overlap(s, d, cap),
                "{} span {span}",
                e.name
            );
            assert_eq!(
                ch::smallest_variation(s, d, cap),
                brute_variation(s, d, cap),
                "{} span {span}",
                e.name
            );
        }
    }
}

#[test]
fn unbounded_overlap_counterexample() {
    let s = PatternSpec::from_expr("cex", "<=*|=*>", 0, 0).unwrap();
    let cap = ch::default_cap(&s).unwrap();
    for span in 1..=3 {
        assert_eq!(ch::overlap(&s, Domain::of_span(span), cap), CharValue::Unbounded);
    }
}

#[test]
fn stabilisation_protocol() {
    assert_eq!(ch::stabilize([2, 2, 2], 6), CharValue::Defined(2));
    assert_eq!(ch::stabilize([2, 3, 4], 6), CharValue::Unbounded);
    assert_eq!(
        ch::variation_protocol([Some(-1), Some(-1), Some(-1)], 6),
        CharValue::Defined(-1)
    );
    assert_eq!(ch::stabilize([1, 2, 1], 6), CharValue::Defined(1));
    assert_eq!(ch::stabilize([1, 2, 2], 6), CharValue::CapLimited(2, 8));
    assert_eq!(
        ch::variation_protocol([Some(0), Some(0), None], 6),
        CharValue::Undefined
    );
    assert_eq!(
        ch::variation_protocol([Some(0), Some(-1), Some(-1)], 6),
        CharValue::CapLimited(-1, 8)
    );
}

fn arb_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), 1..=max).prop_map(Word::new)
}

proptest! {
    #[test]
    fn shift_is_bounded_by_height(z in arb_word(7), a in 0usize..8, b in 0usize..8) {
        let m = z.len() + 1;
        let (p, q) = (1 + a % m, 1 + b % m);
        let (p, q) = (p.min(q), p.max(q));
        let sh = ch::shift_at(z.letters(), p, q);
        prop_assert!(sh <= word_height(&z) as u64);
        // Widening the window can only lower the shift.
        prop_assert!(ch::shift_at(z.letters(), 1, m) == 0);
        prop_assert!(ch::shift_at(z.letters(), 1.max(p.saturating_sub(1)), q) <= sh);
    }
}
