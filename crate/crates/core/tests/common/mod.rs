//! A toy counter language over a finite-powerset domain.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;
use skelsem_core::consistency::FilterSampler;
use skelsem_core::language::{ASlot, ATerm, AbstractOutput, FilterSig, Slot};
use skelsem_core::skeleton::{branches, filter, fv, hook, tv, Var, X_OUT, X_SIGMA};
use skelsem_core::{Carriers, Cover, Language, Skeleton, SortKind, Syntax, Term};

/// Sets of small integers, or anything.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Ps {
    Set(BTreeSet<i64>),
    Top,
}

impl Ps {
    pub fn of(xs: &[i64]) -> Ps {
        Ps::Set(xs.iter().copied().collect())
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> Ps {
        match self {
            Ps::Top => Ps::Top,
            Ps::Set(s) => Ps::Set(s.iter().map(|x| f(*x)).collect()),
        }
    }
}

pub struct Toy;

const WIDTH: usize = 6;

impl Carriers for Toy {
    type Value = i64;
    type Abs = Ps;

    fn inhabits(_: &i64, sort: &str) -> bool {
        sort == "Int"
    }
    fn abs_inhabits(_: &Ps, sort: &str) -> bool {
        sort == "Int"
    }
    fn bottom(sort: &str) -> Option<Ps> {
        (sort == "Int").then(|| Ps::of(&[]))
    }
    fn is_bottom(a: &Ps) -> bool {
        matches!(a, Ps::Set(s) if s.is_empty())
    }
    fn leq(a: &Ps, b: &Ps) -> bool {
        match (a, b) {
            (_, Ps::Top) => true,
            (Ps::Top, _) => false,
            (Ps::Set(x), Ps::Set(y)) => x.is_subset(y),
        }
    }
    fn join(a: &Ps, b: &Ps) -> Ps {
        match (a, b) {
            (Ps::Set(x), Ps::Set(y)) => Ps::Set(x.union(y).copied().collect()),
            _ => Ps::Top,
        }
    }
    fn widen(_: &Ps, new: &Ps) -> Ps {
        match new {
            Ps::Set(s) if s.len() > WIDTH => Ps::Top,
            _ => new.clone(),
        }
    }
    fn member(v: &i64, a: &Ps) -> bool {
        match a {
            Ps::Top => true,
            Ps::Set(s) => s.contains(v),
        }
    }
    fn cover(q: &Ps, parts: &[&Ps]) -> Cover {
        match q {
            Ps::Top if parts.iter().any(|p| **p == Ps::Top) => Cover::Covered,
            Ps::Top => Cover::NotCovered,
            Ps::Set(s) => {
                if s.iter().all(|x| parts.iter().any(|p| Self::member(x, p))) {
                    Cover::Covered
                } else {
                    Cover::NotCovered
                }
            }
        }
    }
    fn base_term_ok(sort: &str, text: &str) -> bool {
        sort == "num" && text.parse::<i64>().is_ok_and(|n| n.to_string() == text)
    }
}

fn t(v: &str) -> Term {
    Term::var(v)
}

pub fn num(n: i64) -> Term {
    Term::base("num", &n.to_string())
}

pub fn set(n: i64) -> Term {
    Term::ctor("set", vec![num(n)])
}

pub fn inc() -> Term {
    Term::ctor("inc", vec![])
}

pub fn down() -> Term {
    Term::ctor("down", vec![])
}

pub fn seq(a: Term, b: Term) -> Term {
    Term::ctor("seq", vec![a, b])
}

pub fn choose(a: Term, b: Term) -> Term {
    Term::ctor("choose", vec![a, b])
}

pub fn ifz(a: Term, b: Term) -> Term {
    Term::ctor("ifz", vec![a, b])
}

pub fn syntax() -> Syntax {
    let mut syn = Syntax::default();
    syn.sort("num", SortKind::Base)
        .sort("prog", SortKind::Program)
        .sort("Int", SortKind::Flow)
        .ctor("set", &["num"], "prog")
        .ctor("inc", &[], "prog")
        .ctor("down", &[], "prog")
        .ctor("seq", &["prog", "prog"], "prog")
        .ctor("choose", &["prog", "prog"], "prog")
        .ctor("ifz", &["prog", "prog"], "prog")
        .filter("lit", &["num"], &["Int"])
        .filter("succ", &["Int"], &["Int"])
        .filter("pred", &["Int"], &["Int"])
        .filter("isZero", &["Int"], &[])
        .filter("nonZero", &["Int"], &[])
        .filter("id", &["Int"], &["Int"])
        .flow("prog", "Int", "Int");
    syn
}

pub fn skeletons() -> Vec<Skeleton> {
    vec![
        Skeleton::new(
            "Set",
            "set",
            &["t"],
            vec![filter("lit", &[tv("t")], &[Var::out()])],
        ),
        Skeleton::new(
            "Inc",
            "inc",
            &[],
            vec![filter("succ", &[Var::sigma()], &[Var::out()])],
        ),
        Skeleton::new(
            "Down",
            "down",
            &[],
            vec![branches(
                &[Var::out()],
                vec![
                    vec![
                        filter("isZero", &[Var::sigma()], &[]),
                        filter("id", &[Var::sigma()], &[Var::out()]),
                    ],
                    vec![
                        filter("nonZero", &[Var::sigma()], &[]),
                        filter("pred", &[Var::sigma()], &[fv("f1")]),
                        hook("f1", Term::ctor("down", vec![]), X_OUT),
                    ],
                ],
            )],
        ),
        Skeleton::new(
            "Seq",
            "seq",
            &["t1", "t2"],
            vec![hook(X_SIGMA, t("t1"), "f1"), hook("f1", t("t2"), X_OUT)],
        ),
        Skeleton::new(
            "Choose",
            "choose",
            &["t1", "t2"],
            vec![branches(
                &[Var::out()],
                vec![
                    vec![hook(X_SIGMA, t("t1"), X_OUT)],
                    vec![hook(X_SIGMA, t("t2"), X_OUT)],
                ],
            )],
        ),
        Skeleton::new(
            "Ifz",
            "ifz",
            &["t1", "t2"],
            vec![branches(
                &[Var::out()],
                vec![
                    vec![
                        filter("isZero", &[Var::sigma()], &[]),
                        hook(X_SIGMA, t("t1"), X_OUT),
                    ],
                    vec![
                        filter("nonZero", &[Var::sigma()], &[]),
                        hook(X_SIGMA, t("t2"), X_OUT),
                    ],
                ],
            )],
        ),
    ]
}

fn flow(a: &Slot<i64>) -> i64 {
    *a.as_flow().unwrap()
}

fn aflow(a: &ASlot<Ps>) -> &Ps {
    a.as_flow().unwrap()
}

fn vals(v: Ps) -> AbstractOutput<Ps> {
    AbstractOutput::Values(vec![v])
}

fn gate(ok: bool) -> AbstractOutput<Ps> {
    if ok {
        AbstractOutput::Values(vec![])
    } else {
        AbstractOutput::Bottom
    }
}

pub fn toy() -> Language<Toy> {
    let mut lang = Language::new("toy", syntax());
    for s in skeletons() {
        lang.add_skeleton(s);
    }
    lang.set_concrete_filter("lit", |a| match a[0].as_term() {
        Some(Term::Base(b)) => vec![vec![b.text.parse().unwrap()]],
        _ => vec![],
    })
    .set_concrete_filter("succ", |a| vec![vec![flow(&a[0]) + 1]])
    .set_concrete_filter("pred", |a| vec![vec![flow(&a[0]) - 1]])
    .set_concrete_filter("isZero", |a| {
        if flow(&a[0]) == 0 {
            vec![vec![]]
        } else {
            vec![]
        }
    })
    .set_concrete_filter("nonZero", |a| {
        if flow(&a[0]) != 0 {
            vec![vec![]]
        } else {
            vec![]
        }
    })
    .set_concrete_filter("id", |a| vec![vec![flow(&a[0])]]);
    lang.set_abstract_filter("lit", |a| match &a[0] {
        ASlot::Term(ATerm::Term(Term::Base(b))) => vals(Ps::of(&[b.text.parse().unwrap()])),
        _ => vals(Ps::of(&[])),
    })
    .set_abstract_filter("succ", |a| vals(aflow(&a[0]).map(|x| x + 1)))
    .set_abstract_filter("pred", |a| vals(aflow(&a[0]).map(|x| x - 1)))
    .set_abstract_filter("isZero", |a| gate(Toy::member(&0, aflow(&a[0]))))
    .set_abstract_filter("nonZero", |a| gate(!Toy::leq(aflow(&a[0]), &Ps::of(&[0]))))
    .set_abstract_filter("id", |a| vals(aflow(&a[0]).clone()));
    lang
}

pub fn random_ps(rng: &mut StdRng) -> Ps {
    if rng.gen_ratio(1, 10) {
        Ps::Top
    } else {
        Ps::Set((-3..=3).filter(|_| rng.gen_bool(0.3)).collect())
    }
}

pub fn below(p: &Ps, rng: &mut StdRng) -> Ps {
    match p {
        Ps::Top if rng.gen_bool(0.3) => Ps::Top,
        Ps::Top => random_ps(rng),
        Ps::Set(s) => Ps::Set(s.iter().copied().filter(|_| rng.gen_bool(0.6)).collect()),
    }
}

pub struct ToySampler;

impl FilterSampler<Toy> for ToySampler {
    fn sample(
        &self,
        sig: &FilterSig,
        rng: &mut StdRng,
    ) -> Option<(Vec<Slot<i64>>, Vec<ASlot<Ps>>)> {
        let mut c = Vec::new();
        let mut a = Vec::new();
        for s in &sig.inputs {
            if &**s == "num" {
                let n = num(rng.gen_range(-3..=3));
                c.push(Slot::Term(n.clone()));
                a.push(ASlot::Term(ATerm::Term(n)));
            } else {
                let p = random_ps(rng);
                let v = match &p {
                    Ps::Top => rng.gen_range(-5..=5),
                    Ps::Set(s) => *s.iter().nth(rng.gen_range(0..s.len().max(1)))?,
                };
                c.push(Slot::Flow(v));
                a.push(ASlot::Flow(p));
            }
        }
        Some((c, a))
    }

    fn sample_ordered(
        &self,
        sig: &FilterSig,
        rng: &mut StdRng,
    ) -> Option<(Vec<ASlot<Ps>>, Vec<ASlot<Ps>>)> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for s in &sig.inputs {
            if &**s == "num" {
                let n = ATerm::Term(num(rng.gen_range(-3..=3)));
                lo.push(ASlot::Term(n.clone()));
                hi.push(ASlot::Term(n));
            } else {
                let h = random_ps(rng);
                lo.push(ASlot::Flow(below(&h, rng)));
                hi.push(ASlot::Flow(h));
            }
        }
        Some((lo, hi))
    }
}

/// Random closed program of bounded depth.
pub fn random_prog(rng: &mut StdRng, depth: u32) -> Term {
    let leaf = depth == 0 || rng.gen_ratio(1, 3);
    if leaf {
        return match rng.gen_range(0..4) {
            0 => set(rng.gen_range(0..=3)),
            1 | 2 => inc(),
            _ => down(),
        };
    }
    let a = random_prog(rng, depth - 1);
    let b = random_prog(rng, depth - 1);
    match rng.gen_range(0..3) {
        0 => seq(a, b),
        1 => choose(a, b),
        _ => ifz(a, b),
    }
}

/// Direct reference semantics of the toy language; `None` when it diverges
/// within the step budget.
pub fn reference(t: &Term, x: i64, budget: &mut u32) -> Option<BTreeSet<i64>> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let args = t.args();
    Some(match t.head().map(|c| &**c) {
        Some("set") => match &args[0] {
            Term::Base(b) => [b.text.parse().unwrap()].into(),
            _ => unreachable!(),
        },
        Some("inc") => [x + 1].into(),
        Some("down") => {
            if x < 0 {
                return None;
            }
            [0].into()
        }
        Some("seq") => {
            let mut out = BTreeSet::new();
            for y in reference(&args[0], x, budget)? {
                out.extend(reference(&args[1], y, budget)?);
            }
            out
        }
        Some("choose") => {
            let mut out = reference(&args[0], x, budget)?;
            out.extend(reference(&args[1], x, budget)?);
            out
        }
        Some("ifz") => {
            if x == 0 {
                reference(&args[0], x, budget)?
            } else {
                reference(&args[1], x, budget)?
            }
        }
        _ => unreachable!(),
    })
}
