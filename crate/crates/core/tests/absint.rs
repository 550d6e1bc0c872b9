mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use skelsem_core::absint::{derive, AbstractRules};
use skelsem_core::constraints::analyze;
use skelsem_core::split::AbsIndex;
use skelsem_core::{
    abstract_immediate_consequence_on, check_invariant, eval, split_lookup, AbstractTriple,
    Carriers, Exec, Flag, Mode,
};

fn at(s: &[i64], t: skelsem_core::Term, r: &[i64]) -> AbstractTriple<Ps> {
    AbstractTriple::new(Ps::of(s), t, Ps::of(r))
}

#[test]
fn choose_joins_branches() {
    let lang = toy();
    let hyps = [
        AbstractTriple::new(Ps::Top, set(1), Ps::of(&[1])),
        AbstractTriple::new(Ps::Top, set(2), Ps::of(&[2])),
    ];
    let index = AbsIndex::new(&hyps);
    let rules = AbstractRules::new(&lang, &index, Mode::Minimal, false);
    let rs = derive(&rules, &Ps::Top, &choose(set(1), set(2))).unwrap();
    let joined: Vec<_> = rs.iter().filter(|(f, _)| *f == Flag::Top).collect();
    assert_eq!(joined, [&(Flag::Top, Ps::of(&[1, 2]))]);
}

#[test]
fn guards_prune_branches() {
    let lang = toy();
    let out = abstract_immediate_consequence_on(&lang, &[(Ps::of(&[0]), down())], &[]).unwrap();
    assert!(out.contains(&at(&[0], down(), &[0])));
    // a non-zero state needs a hypothesis for the recursive call
    let out = abstract_immediate_consequence_on(&lang, &[(Ps::of(&[2]), down())], &[]).unwrap();
    assert!(out.iter().all(|t| t.result == Ps::of(&[])));
    let out = abstract_immediate_consequence_on(
        &lang,
        &[(Ps::of(&[2]), down())],
        &[at(&[1], down(), &[0])],
    )
    .unwrap();
    assert!(out.contains(&at(&[2], down(), &[0])));
}

#[test]
fn invariant_check_accepts_and_rejects() {
    let lang = toy();
    let good = [
        at(&[2], down(), &[0]),
        at(&[1], down(), &[0]),
        at(&[0], down(), &[0]),
    ];
    let r = check_invariant(&lang, &good, false, Exec::Sequential).unwrap();
    assert_eq!(r.checked, 3);
    assert!(r.passed());
    let gap = [good[0].clone(), good[2].clone()];
    let r = check_invariant(&lang, &gap, false, Exec::Sequential).unwrap();
    assert_eq!(r.failures, [good[0].clone()]);
    let bad = [at(&[0, 1], down(), &[])];
    assert!(!check_invariant(&lang, &bad, false, Exec::Sequential)
        .unwrap()
        .passed());
}

#[test]
fn splitting_combines_covering_triples() {
    let a = [at(&[0], down(), &[0]), at(&[1], down(), &[0])];
    let found = split_lookup::<Toy>(&a, &Ps::of(&[0, 1]), &down()).unwrap();
    assert_eq!(found, [Ps::of(&[0])].into());
    let missing = split_lookup::<Toy>(&a[..1], &Ps::of(&[0, 1]), &down()).unwrap();
    assert!(missing.is_empty());

    let lang = toy();
    // the recursive call on {0,1} is only covered piecewise
    let tri = [
        at(&[1, 2], down(), &[0]),
        at(&[0], down(), &[0]),
        at(&[1], down(), &[0]),
    ];
    let plain = check_invariant(&lang, &tri, false, Exec::Sequential).unwrap();
    let split = check_invariant(&lang, &tri, true, Exec::Sequential).unwrap();
    assert!(!plain.passed());
    assert!(split.passed());
}

#[test]
fn strategies_agree() {
    let lang = toy();
    let t = seq(choose(set(2), set(3)), down());
    let (triples, _) = analyze(&lang, &t, Ps::Top, 3, Exec::Sequential).unwrap();
    assert_eq!(
        check_invariant(&lang, &triples, true, Exec::Sequential).unwrap(),
        check_invariant(&lang, &triples, true, Exec::Parallel).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn analysis_is_sound(seed in any::<u64>(), xs in prop::collection::btree_set(-2i64..=4, 1..4)) {
        let lang = toy();
        let t = random_prog(&mut StdRng::seed_from_u64(seed), 4);
        let init = Ps::Set(xs.clone());
        let (triples, _) = analyze(&lang, &t, init.clone(), 3, Exec::Sequential).unwrap();
        let root = triples.iter().find(|a| a.term == t && Toy::leq(&init, &a.state));
        let root = root.expect("root triple present");
        for x in xs {
            if let Ok(rs) = eval(&lang, &x, &t, 200) {
                for r in rs {
                    prop_assert!(Toy::member(&r, &root.result), "{} from {} not in {:?}", r, x, root.result);
                }
            }
        }
    }
}
