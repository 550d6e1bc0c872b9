#![allow(dead_code)]

use std::collections::BTreeMap;

use skelsem_core::{eval, ConcreteError, Language, Term};
use skelsem_lang::domain::{AHeap, AIo, AState, AVal, Itv, LocSet, Stream, B4};
use skelsem_lang::value::{Heap, IoState, Store};
use skelsem_lang::{parse_program, Abs, Dialect, Domains, Val, Value};
use skelsem_testkit::{Halt, Machine, Outcome, Stmt, V};

pub fn val(v: &V) -> Val {
    match v {
        V::Int(n) => Val::Int(n.clone()),
        V::Bool(b) => Val::Bool(*b),
        V::Loc(l) => Val::Loc(*l),
    }
}

fn vals(vs: &[V]) -> Vec<Val> {
    vs.iter().map(val).collect()
}

pub fn store(m: &Machine) -> Store {
    m.vars
        .iter()
        .map(|(k, v)| (skelsem_core::name(k), val(v)))
        .collect()
}

pub fn io(m: &Machine) -> IoState {
    let cells: BTreeMap<u64, Val> = m
        .heap
        .iter()
        .enumerate()
        .map(|(i, v)| (i as u64, val(v)))
        .collect();
    IoState {
        input: vals(&m.input),
        output: vals(&m.output),
        store: store(m),
        heap: Heap {
            next: m.heap.len() as u64,
            cells,
        },
    }
}

pub fn dialect(ext: bool) -> Dialect {
    if ext {
        Dialect::Ext
    } else {
        Dialect::While
    }
}

/// The pack's input value for a starting machine.
pub fn start(m: &Machine, ext: bool) -> Value {
    if ext {
        Value::Io(Box::new(io(m)))
    } else {
        Value::State(store(m))
    }
}

/// The pack's result value for an oracle outcome.
pub fn finish(o: &Outcome, ext: bool) -> Value {
    match (o, ext) {
        (Outcome::Normal(m), false) => Value::State(store(m)),
        (Outcome::Raised(_), false) => panic!("base While cannot raise"),
        (Outcome::Normal(m), true) => Value::ExcIo(true, Box::new(io(m))),
        (Outcome::Raised(m), true) => Value::ExcIo(false, Box::new(io(m))),
    }
}

/// Goes through the surface printer and parser, so the skeleton interpreter
/// never sees the oracle's AST.
pub fn term(s: &Stmt, ext: bool) -> Term {
    parse_program(&s.to_string(), dialect(ext)).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn pack(ext: bool) -> Language<Domains> {
    if ext {
        skelsem_lang::ext_while_language()
    } else {
        skelsem_lang::while_language()
    }
}

pub const ORACLE_FUEL: u64 = 100_000;
pub const EVAL_FUEL: u64 = 1_000_000;

/// Compares skeleton evaluation with the oracle on one run. `Err` describes
/// the disagreement; `Ok(false)` means the oracle ran out of fuel and the
/// evaluator was checked to run out as well.
pub fn agree(lang: &Language<Domains>, s: &Stmt, m: &Machine, ext: bool) -> Result<bool, String> {
    let t = term(s, ext);
    let sigma = start(m, ext);
    let expected = skelsem_testkit::run(s, m.clone(), ORACLE_FUEL);
    match expected {
        Err(Halt::OutOfFuel) => match eval(lang, &sigma, &t, 200) {
            Err(ConcreteError::FuelExhausted) => Ok(false),
            other => Err(format!("{s}: oracle diverges, eval gave {other:?}")),
        },
        Err(Halt::Stuck(why)) => match eval(lang, &sigma, &t, EVAL_FUEL) {
            Ok(r) if r.is_empty() => Ok(true),
            other => Err(format!("{s}: oracle stuck ({why}), eval gave {other:?}")),
        },
        Ok(o) => {
            let want = finish(&o, ext);
            match eval(lang, &sigma, &t, EVAL_FUEL) {
                Ok(r) if r.len() == 1 && r.contains(&want) => Ok(true),
                other => Err(format!("{s}: oracle {want}, eval gave {other:?}")),
            }
        }
    }
}

pub fn alpha_val(v: &Val) -> AVal {
    match v {
        Val::Int(n) => AVal::int(Itv::point(n.clone())),
        Val::Bool(b) => AVal::boolean(B4::of(*b)),
        Val::Loc(l) => AVal::loc(LocSet::single(*l)),
    }
}

fn alpha_stream(vs: &[Val]) -> Stream {
    Stream::Of(
        vs.iter()
            .fold(AVal::bot(), |acc, v| acc.join(&alpha_val(v))),
    )
}

/// Best abstraction of a starting machine.
pub fn alpha(m: &Machine, ext: bool) -> Abs {
    let state = AState::from_pairs(store(m).iter().map(|(k, v)| (k.clone(), alpha_val(v))));
    if !ext {
        return Abs::State(state);
    }
    let s = io(m);
    Abs::Io(Box::new(AIo {
        input: alpha_stream(&s.input),
        output: alpha_stream(&s.output),
        state,
        heap: AHeap::Heap {
            next: s.heap.next,
            cells: s
                .heap
                .cells
                .iter()
                .map(|(k, v)| (*k, alpha_val(v)))
                .collect(),
        },
    }))
}

/// Every constructor node of `t`, outermost first.
pub fn subterms(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut stack = vec![t.clone()];
    while let Some(u) = stack.pop() {
        if let Term::Ctor(_, args) = &u {
            stack.extend(args.iter().rev().cloned());
            out.push(u);
        }
    }
    out
}
