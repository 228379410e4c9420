//! Computed characteristics against the reference table.

use sigpat::catalogue::{all, golden_check};
use sigpat::characteristics::report;
use sigpat::semantics::Domain;

#[test]
fn every_entry_matches_reference_at_three_spans() {
    let mut failures = Vec::new();
    for e in all() {
        let eta = e.golden.eta;
        for span in eta..=eta + 2 {
            let n = e.golden.omega + 3;
            let r = report(e.spec(), Domain::of_span(span), n, None).unwrap();
            for m in golden_check(e, &r) {
                failures.push(format!("{} span {span}: {m:?}", e.name));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
