//! Random abstract values, concrete members of them, and ordered pairs of
//! abstract values. Drives the filter consistency and monotonicity checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use skelsem_core::consistency::FilterSampler;
use skelsem_core::language::{ASlot, ATerm, FilterSig, Slot};
use skelsem_core::{name, Term};

use crate::domain::{AHeap, AIo, AState, AVal, Abs, Bound, Domains, Itv, LocSet, Stream, B4};
use crate::syntax::{ident, lit};
use crate::value::{Heap, IoState, Val, Value};

pub const VARS: &[&str] = &["x", "y", "z"];

fn small(rng: &mut StdRng) -> BigInt {
    if rng.gen_ratio(1, 40) {
        let big: i128 = rng.gen_range(-(1i128 << 80)..(1i128 << 80));
        big.into()
    } else {
        rng.gen_range(-6i64..=6).into()
    }
}

pub fn itv(rng: &mut StdRng) -> Itv {
    match rng.gen_range(0..10) {
        0 => Itv::Bot,
        1 => Itv::top(),
        2 => Itv::point(small(rng)),
        3 => Itv::new(Bound::Fin(small(rng)), Bound::PosInf),
        4 => Itv::new(Bound::NegInf, Bound::Fin(small(rng))),
        _ => {
            let (a, b) = (small(rng), small(rng));
            Itv::new(Bound::Fin(a.clone().min(b.clone())), Bound::Fin(a.max(b)))
        }
    }
}

fn int_in(i: &Itv, rng: &mut StdRng) -> Option<BigInt> {
    let Itv::Range(lo, hi) = i else {
        return None;
    };
    let lo = match lo {
        Bound::Fin(n) => n.clone(),
        _ => match hi {
            Bound::Fin(h) => h - rng.gen_range(0..8),
            _ => small(rng),
        },
    };
    let span = match hi {
        Bound::Fin(h) => (h - &lo).min(BigInt::from(8)),
        _ => BigInt::from(8),
    };
    let span: i64 = span.try_into().expect("span fits");
    Some(lo + rng.gen_range(0..=span))
}

pub fn b4(rng: &mut StdRng) -> B4 {
    *[B4::Bot, B4::Tt, B4::Ff, B4::Top]
        .choose(rng)
        .expect("non-empty")
}

fn bool_in(b: B4, rng: &mut StdRng) -> Option<bool> {
    let opts: Vec<bool> = [true, false]
        .into_iter()
        .filter(|x| b.contains(*x))
        .collect();
    opts.choose(rng).copied()
}

pub fn locset(rng: &mut StdRng) -> LocSet {
    if rng.gen_ratio(1, 8) {
        LocSet::Top
    } else {
        LocSet::Set((0..4).filter(|_| rng.gen_bool(0.35)).collect())
    }
}

fn loc_in(l: &LocSet, rng: &mut StdRng) -> Option<u64> {
    match l {
        LocSet::Top => Some(rng.gen_range(0..6)),
        LocSet::Set(s) => s.iter().copied().collect::<Vec<_>>().choose(rng).copied(),
    }
}

pub fn aval(rng: &mut StdRng, with_locs: bool) -> AVal {
    AVal {
        int: if rng.gen_bool(0.7) {
            itv(rng)
        } else {
            Itv::Bot
        },
        bool: if rng.gen_bool(0.5) { b4(rng) } else { B4::Bot },
        loc: if with_locs && rng.gen_bool(0.3) {
            locset(rng)
        } else {
            LocSet::default()
        },
    }
}

fn val_in(a: &AVal, rng: &mut StdRng) -> Option<Val> {
    let mut opts = Vec::new();
    if let Some(n) = int_in(&a.int, rng) {
        opts.push(Val::Int(n));
    }
    if let Some(b) = bool_in(a.bool, rng) {
        opts.push(Val::Bool(b));
    }
    if let Some(l) = loc_in(&a.loc, rng) {
        opts.push(Val::Loc(l));
    }
    opts.choose(rng).cloned()
}

pub fn astate(rng: &mut StdRng, with_locs: bool) -> AState {
    if rng.gen_ratio(1, 10) {
        return AState::Bot;
    }
    AState::from_pairs(
        VARS.iter()
            .filter_map(|x| {
                let keep = rng.gen_bool(0.6);
                let v = aval(rng, with_locs);
                keep.then_some((name(x), v))
            })
            .collect::<Vec<_>>(),
    )
}

fn store_in(a: &AState, rng: &mut StdRng) -> Option<BTreeMap<skelsem_core::Name, Val>> {
    if *a == AState::Bot {
        return None;
    }
    let mut s = BTreeMap::new();
    for x in VARS {
        if rng.gen_bool(0.8) {
            if let Some(v) = val_in(&a.get(x), rng) {
                s.insert(name(x), v);
            }
        }
    }
    Some(s)
}

fn stream(rng: &mut StdRng) -> Stream {
    if rng.gen_ratio(1, 8) {
        Stream::Bot
    } else {
        Stream::Of(aval(rng, true))
    }
}

fn list_in(s: &Stream, rng: &mut StdRng) -> Option<Vec<Val>> {
    match s {
        Stream::Bot => None,
        Stream::Of(a) => {
            let n = rng.gen_range(0..4);
            Some((0..n).filter_map(|_| val_in(a, rng)).collect())
        }
    }
}

fn aheap(rng: &mut StdRng) -> AHeap {
    match rng.gen_range(0..10) {
        0 => AHeap::Bot,
        1 => AHeap::Top,
        _ => {
            let next = rng.gen_range(0..4);
            let cells = (0..next)
                .filter_map(|l| {
                    if !rng.gen_bool(0.8) {
                        return None;
                    }
                    let v = aval(rng, true);
                    Some((l, if v.is_bot() { AVal::int(Itv::top()) } else { v }))
                })
                .collect();
            AHeap::Heap { next, cells }
        }
    }
}

fn heap_in(h: &AHeap, rng: &mut StdRng) -> Option<Heap> {
    match h {
        AHeap::Bot => None,
        AHeap::Top => {
            let next = rng.gen_range(0..4);
            let cells = (0..next)
                .filter_map(|l| {
                    let keep = rng.gen_bool(0.8);
                    let v = Val::Int(small(rng));
                    keep.then_some((l, v))
                })
                .collect();
            Some(Heap { next, cells })
        }
        AHeap::Heap { next, cells } => {
            let mut out = BTreeMap::new();
            for (k, v) in cells {
                out.insert(*k, val_in(v, rng)?);
            }
            Some(Heap {
                next: *next,
                cells: out,
            })
        }
    }
}

fn aio(rng: &mut StdRng) -> AIo {
    if rng.gen_ratio(1, 12) {
        return AIo::bot();
    }
    AIo {
        input: stream(rng),
        output: stream(rng),
        state: astate(rng, true),
        heap: aheap(rng),
    }
}

fn io_in(a: &AIo, rng: &mut StdRng) -> Option<IoState> {
    Some(IoState {
        input: list_in(&a.input, rng)?,
        output: list_in(&a.output, rng)?,
        store: store_in(&a.state, rng)?,
        heap: heap_in(&a.heap, rng)?,
    })
}

/// A random abstract value of a flow sort.
pub fn abs(sort: &str, rng: &mut StdRng) -> Abs {
    match sort {
        "Int" => Abs::Int(itv(rng)),
        "Bool" => Abs::Bool(b4(rng)),
        "Val" => Abs::Val(aval(rng, true)),
        "State" => Abs::State(astate(rng, true)),
        "Loc" => Abs::Loc(locset(rng)),
        "In" => Abs::In(stream(rng)),
        "Out" => Abs::Out(stream(rng)),
        "Heap" => Abs::Heap(aheap(rng)),
        "IOState" => Abs::Io(Box::new(aio(rng))),
        "ValIOState" => Abs::ValIo(aval(rng, true), Box::new(aio(rng))),
        "ExcIOState" => Abs::ExcIo(b4(rng), Box::new(aio(rng))),
        s => panic!("no sampler for sort {s}"),
    }
}

/// A concrete member of `a`, if one is found.
pub fn member_of(a: &Abs, rng: &mut StdRng) -> Option<Value> {
    Some(match a {
        Abs::Int(i) => Value::Int(int_in(i, rng)?),
        Abs::Bool(b) => Value::Bool(bool_in(*b, rng)?),
        Abs::Val(v) => Value::Val(val_in(v, rng)?),
        Abs::State(s) => Value::State(store_in(s, rng)?),
        Abs::Loc(l) => Value::Loc(loc_in(l, rng)?),
        Abs::In(s) => Value::In(list_in(s, rng)?),
        Abs::Out(s) => Value::Out(list_in(s, rng)?),
        Abs::Heap(h) => Value::Heap(heap_in(h, rng)?),
        Abs::Io(s) => Value::Io(Box::new(io_in(s, rng)?)),
        Abs::ValIo(v, s) => Value::ValIo(val_in(v, rng)?, Box::new(io_in(s, rng)?)),
        Abs::ExcIo(b, s) => Value::ExcIo(bool_in(*b, rng)?, Box::new(io_in(s, rng)?)),
    })
}

fn below_itv(i: &Itv, rng: &mut StdRng) -> Itv {
    if rng.gen_ratio(1, 6) {
        return Itv::Bot;
    }
    let Itv::Range(lo, hi) = i else {
        return Itv::Bot;
    };
    let (Some(a), Some(b)) = (int_in(i, rng), int_in(i, rng)) else {
        return i.clone();
    };
    let lo2 = if rng.gen_bool(0.3) {
        lo.clone()
    } else {
        Bound::Fin(a.clone().min(b.clone()))
    };
    let hi2 = if rng.gen_bool(0.3) {
        hi.clone()
    } else {
        Bound::Fin(a.max(b))
    };
    Itv::new(lo2, hi2)
}

fn below_b4(b: B4, rng: &mut StdRng) -> B4 {
    let opts: Vec<B4> = [B4::Bot, B4::Tt, B4::Ff, B4::Top]
        .into_iter()
        .filter(|x| x.leq(b))
        .collect();
    *opts.choose(rng).expect("bottom is below")
}

fn below_loc(l: &LocSet, rng: &mut StdRng) -> LocSet {
    match l {
        LocSet::Top if rng.gen_bool(0.5) => LocSet::Top,
        LocSet::Top => LocSet::Set((0..6).filter(|_| rng.gen_bool(0.35)).collect()),
        LocSet::Set(s) => LocSet::Set(s.iter().copied().filter(|_| rng.gen_bool(0.6)).collect()),
    }
}

fn below_aval(v: &AVal, rng: &mut StdRng) -> AVal {
    AVal {
        int: below_itv(&v.int, rng),
        bool: below_b4(v.bool, rng),
        loc: below_loc(&v.loc, rng),
    }
}

fn below_state(s: &AState, rng: &mut StdRng) -> AState {
    match s {
        AState::Bot => AState::Bot,
        _ if rng.gen_ratio(1, 8) => AState::Bot,
        AState::Map(m) => AState::from_pairs(
            m.iter()
                .map(|(k, v)| (k.clone(), below_aval(v, rng)))
                .collect::<Vec<_>>(),
        ),
    }
}

fn below_stream(s: &Stream, rng: &mut StdRng) -> Stream {
    match s {
        Stream::Of(v) if rng.gen_bool(0.85) => Stream::Of(below_aval(v, rng)),
        _ => Stream::Bot,
    }
}

fn below_heap(h: &AHeap, rng: &mut StdRng) -> AHeap {
    match h {
        _ if rng.gen_ratio(1, 8) => AHeap::Bot,
        AHeap::Bot => AHeap::Bot,
        AHeap::Top if rng.gen_bool(0.3) => AHeap::Top,
        AHeap::Top => aheap(rng),
        AHeap::Heap { next, cells } => AHeap::Heap {
            next: *next,
            cells: cells
                .iter()
                .map(|(k, v)| (*k, below_aval(v, rng)))
                .collect(),
        },
    }
}

fn below_io(s: &AIo, rng: &mut StdRng) -> AIo {
    AIo {
        input: below_stream(&s.input, rng),
        output: below_stream(&s.output, rng),
        state: below_state(&s.state, rng),
        heap: below_heap(&s.heap, rng),
    }
}

/// A random abstract value below `a`.
pub fn below(a: &Abs, rng: &mut StdRng) -> Abs {
    match a {
        Abs::Int(i) => Abs::Int(below_itv(i, rng)),
        Abs::Bool(b) => Abs::Bool(below_b4(*b, rng)),
        Abs::Val(v) => Abs::Val(below_aval(v, rng)),
        Abs::State(s) => Abs::State(below_state(s, rng)),
        Abs::Loc(l) => Abs::Loc(below_loc(l, rng)),
        Abs::In(s) => Abs::In(below_stream(s, rng)),
        Abs::Out(s) => Abs::Out(below_stream(s, rng)),
        Abs::Heap(h) => Abs::Heap(below_heap(h, rng)),
        Abs::Io(s) => Abs::Io(Box::new(below_io(s, rng))),
        Abs::ValIo(v, s) => Abs::ValIo(below_aval(v, rng), Box::new(below_io(s, rng))),
        Abs::ExcIo(b, s) => Abs::ExcIo(below_b4(*b, rng), Box::new(below_io(s, rng))),
    }
}

fn base_term(sort: &str, rng: &mut StdRng) -> Term {
    match sort {
        "lit" => lit(&small(rng)),
        _ => ident(VARS.choose(rng).expect("non-empty")),
    }
}

fn is_base(sort: &str) -> bool {
    matches!(sort, "lit" | "ident")
}

/// Samples filter arguments of both packs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sampler;

impl FilterSampler<Domains> for Sampler {
    fn sample(
        &self,
        sig: &FilterSig,
        rng: &mut StdRng,
    ) -> Option<(Vec<Slot<Value>>, Vec<ASlot<Abs>>)> {
        let mut conc = Vec::new();
        let mut abst = Vec::new();
        for s in &sig.inputs {
            if is_base(s) {
                let t = base_term(s, rng);
                conc.push(Slot::Term(t.clone()));
                abst.push(ASlot::Term(ATerm::Term(t)));
                continue;
            }
            let mut found = None;
            for _ in 0..8 {
                let a = abs(s, rng);
                if let Some(v) = member_of(&a, rng) {
                    found = Some((v, a));
                    break;
                }
            }
            let (v, a) = found?;
            conc.push(Slot::Flow(v));
            abst.push(ASlot::Flow(a));
        }
        Some((conc, abst))
    }

    fn sample_ordered(
        &self,
        sig: &FilterSig,
        rng: &mut StdRng,
    ) -> Option<(Vec<ASlot<Abs>>, Vec<ASlot<Abs>>)> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for s in &sig.inputs {
            if is_base(s) {
                let t = ATerm::Term(base_term(s, rng));
                let l = if rng.gen_ratio(1, 6) {
                    ATerm::Bot(name(s))
                } else {
                    t.clone()
                };
                lo.push(ASlot::Term(l));
                hi.push(ASlot::Term(t));
                continue;
            }
            let h = abs(s, rng);
            lo.push(ASlot::Flow(below(&h, rng)));
            hi.push(ASlot::Flow(h));
        }
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain;
    use rand::SeedableRng;

    const SORTS: &[&str] = &[
        "Int",
        "Bool",
        "Val",
        "State",
        "Loc",
        "In",
        "Out",
        "Heap",
        "IOState",
        "ValIOState",
        "ExcIOState",
    ];

    #[test]
    fn members_are_members() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..2000 {
            for s in SORTS {
                let a = abs(s, &mut rng);
                if let Some(v) = member_of(&a, &mut rng) {
                    assert!(domain::member(&v, &a), "{v:?} not in {a:?}");
                }
            }
        }
    }

    #[test]
    fn below_is_below() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..2000 {
            for s in SORTS {
                let a = abs(s, &mut rng);
                let b = below(&a, &mut rng);
                assert!(domain::leq(&b, &a), "{b:?} not below {a:?}");
            }
        }
    }
}
