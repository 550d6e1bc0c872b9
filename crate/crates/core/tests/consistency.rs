mod common;

use common::*;
use skelsem_core::consistency::check_filter_consistency;
use skelsem_core::language::AbstractOutput;
use skelsem_core::Exec;

#[test]
fn toy_filters_are_consistent() {
    let lang = toy();
    let r = check_filter_consistency(&lang, &ToySampler, 2000, 7, Exec::Parallel);
    assert_eq!(r.filters.len(), 6);
    for f in &r.filters {
        assert!(f.passed(), "{f:?}");
        assert!(f.trials > 1500);
        assert!(f.related > 0, "{} never related", f.filter);
        assert!(f.monotonicity_trials > 0);
    }
}

#[test]
fn unsound_filter_is_caught() {
    let mut lang = toy();
    lang.set_abstract_filter("succ", |a| {
        AbstractOutput::Values(vec![a[0].as_flow().unwrap().clone()])
    });
    let r = check_filter_consistency(&lang, &ToySampler, 500, 1, Exec::Sequential);
    let succ = r.filters.iter().find(|f| f.filter == "succ").unwrap();
    assert!(succ.violations > 0);
    assert!(!succ.counterexamples.is_empty());
    assert!(!r.passed());
}

#[test]
fn non_monotone_filter_is_caught() {
    let mut lang = toy();
    lang.set_abstract_filter("id", |a| match a[0].as_flow().unwrap() {
        Ps::Set(_) => AbstractOutput::Values(vec![Ps::Top]),
        Ps::Top => AbstractOutput::Values(vec![Ps::of(&[0, 1, 2, 3, 4, 5, -1, -2, -3, -4, -5])]),
    });
    let r = check_filter_consistency(&lang, &ToySampler, 500, 1, Exec::Sequential);
    let id = r.filters.iter().find(|f| f.filter == "id").unwrap();
    assert_eq!(id.violations, 0);
    assert!(id.monotonicity_failures > 0);
}

#[test]
fn outcome_depends_only_on_seed() {
    let lang = toy();
    let a = check_filter_consistency(&lang, &ToySampler, 300, 42, Exec::Sequential);
    let b = check_filter_consistency(&lang, &ToySampler, 300, 42, Exec::Parallel);
    assert_eq!(a, b);
}
