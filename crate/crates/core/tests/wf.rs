mod common;

use common::{toy, Toy};
use skelsem_core::skeleton::{branches, filter, hook, Var, X_OUT, X_SIGMA};
use skelsem_core::wf::check_skeleton;
use skelsem_core::{check_language, Exec, Language, Skeleton, Term, WfReason};

fn replace(lang: &mut Language<Toy>, s: Skeleton) {
    lang.remove_skeleton(&s.ctor.clone());
    lang.add_skeleton(s);
}

fn reason(lang: &Language<Toy>, ctor: &str) -> Option<WfReason> {
    check_skeleton(lang, lang.skeleton(ctor).unwrap())
        .result
        .err()
        .map(|e| e.reason)
}

#[test]
fn toy_language_is_well_formed() {
    let lang = toy();
    let report = check_language(&lang, Exec::Sequential);
    assert!(report.is_ok());
    let lines: Vec<String> = report.verdicts.iter().map(|v| v.line()).collect();
    assert_eq!(
        lines,
        [
            "OK Set",
            "OK Inc",
            "OK Down",
            "OK Seq",
            "OK Choose",
            "OK Ifz"
        ]
    );
}

#[test]
fn undefined_variable() {
    let mut lang = toy();
    replace(
        &mut lang,
        Skeleton::new(
            "Seq",
            "seq",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, Term::var("t1"), "f1"),
                hook("f9", Term::var("t2"), X_OUT),
            ],
        ),
    );
    let v = check_skeleton(&lang, lang.skeleton("seq").unwrap());
    assert_eq!(v.line(), "FAIL Seq bone=2 reason=UseBeforeDef");
}

#[test]
fn branch_share_mismatch() {
    let mut lang = toy();
    replace(
        &mut lang,
        Skeleton::new(
            "Choose",
            "choose",
            &["t1", "t2"],
            vec![branches(
                &[],
                vec![
                    vec![hook(X_SIGMA, Term::var("t1"), X_OUT)],
                    vec![hook(X_SIGMA, Term::var("t2"), X_OUT)],
                ],
            )],
        ),
    );
    assert_eq!(reason(&lang, "choose"), Some(WfReason::BranchShareMismatch));
}

#[test]
fn wrong_filter_arity() {
    let mut lang = toy();
    replace(
        &mut lang,
        Skeleton::new(
            "Inc",
            "inc",
            &[],
            vec![filter("succ", &[Var::sigma(), Var::sigma()], &[Var::out()])],
        ),
    );
    assert_eq!(reason(&lang, "inc"), Some(WfReason::SortClash));
}

#[test]
fn redefinition_and_single_branch() {
    let mut lang = toy();
    replace(
        &mut lang,
        Skeleton::new(
            "Inc",
            "inc",
            &[],
            vec![filter("succ", &[Var::sigma()], &[Var::sigma()])],
        ),
    );
    assert_eq!(reason(&lang, "inc"), Some(WfReason::Redefinition));
    replace(
        &mut lang,
        Skeleton::new(
            "Choose",
            "choose",
            &["t1", "t2"],
            vec![branches(
                &[Var::out()],
                vec![vec![hook(X_SIGMA, Term::var("t1"), X_OUT)]],
            )],
        ),
    );
    assert_eq!(reason(&lang, "choose"), Some(WfReason::BranchCountBelowTwo));
}

#[test]
fn missing_output() {
    let mut lang = toy();
    replace(
        &mut lang,
        Skeleton::new(
            "Inc",
            "inc",
            &[],
            vec![filter("succ", &[Var::sigma()], &[Var::Flow("f".into())])],
        ),
    );
    assert_eq!(reason(&lang, "inc"), Some(WfReason::OutputSortMismatch));
}

#[test]
fn strategies_agree() {
    let lang = toy();
    assert_eq!(
        check_language(&lang, Exec::Sequential),
        check_language(&lang, Exec::Parallel)
    );
}
