//! Concrete and abstract filters of both packs. Concrete filters return the
//! empty set where the relation is undefined.

use num_bigint::BigInt;
use skelsem_core::language::{ASlot, ATerm, AbstractOutput, Slot};
use skelsem_core::{Language, Term};

use crate::domain::{AHeap, AIo, AState, AVal, Abs, Domains, Itv, LocSet, Stream, B4};
use crate::value::{IoState, Val, Value};

type Out = Vec<Vec<Value>>;
type AOut = AbstractOutput<Abs>;

fn one(vs: Vec<Value>) -> Out {
    vec![vs]
}

fn term_text(s: &Slot<Value>) -> Option<&str> {
    match s.as_term()? {
        Term::Base(b) => Some(&b.text),
        _ => None,
    }
}

fn flow(s: &Slot<Value>) -> &Value {
    s.as_flow().expect("flow argument")
}

fn aflow(s: &ASlot<Abs>) -> &Abs {
    s.as_flow().expect("flow argument")
}

/// `None` for the bottom term.
fn aterm_text(s: &ASlot<Abs>) -> Option<&str> {
    match s {
        ASlot::Term(ATerm::Term(Term::Base(b))) => Some(&b.text),
        _ => None,
    }
}

fn vals(vs: Vec<Abs>) -> AOut {
    AbstractOutput::Values(vs)
}

fn unit_if(ok: bool) -> AOut {
    if ok {
        vals(vec![])
    } else {
        AbstractOutput::Bottom
    }
}

macro_rules! pat {
    ($e:expr, $p:pat => $r:expr) => {
        match $e {
            $p => $r,
            other => panic!("filter argument of the wrong sort: {other:?}"),
        }
    };
}

fn io(s: &Value) -> &IoState {
    pat!(s, Value::Io(s) => s)
}

fn aio(a: &Abs) -> &AIo {
    pat!(a, Abs::Io(s) => s)
}

fn aval(a: &Abs) -> &AVal {
    pat!(a, Abs::Val(v) => v)
}

fn astate(a: &Abs) -> &AState {
    pat!(a, Abs::State(s) => s)
}

fn aint(a: &Abs) -> &Itv {
    pat!(a, Abs::Int(i) => i)
}

fn abool(a: &Abs) -> B4 {
    pat!(a, Abs::Bool(b) => *b)
}

fn aloc(a: &Abs) -> &LocSet {
    pat!(a, Abs::Loc(l) => l)
}

fn aheap(a: &Abs) -> &AHeap {
    pat!(a, Abs::Heap(h) => h)
}

fn astream(a: &Abs) -> &Stream {
    pat!(a, Abs::In(s) | Abs::Out(s) => s)
}

/// Filters of the base language.
pub fn install_base(lang: &mut Language<Domains>) {
    lang.set_concrete_filter("litInt", |a| {
        match term_text(&a[0]).map(str::parse::<BigInt>) {
            Some(Ok(n)) => one(vec![Value::Int(n)]),
            _ => vec![],
        }
    })
    .set_concrete_filter(
        "intVal",
        |a| pat!(flow(&a[0]), Value::Int(n) => one(vec![Value::Val(Val::Int(n.clone()))])),
    )
    .set_concrete_filter("isInt", |a| match flow(&a[0]) {
        Value::Val(Val::Int(n)) => one(vec![Value::Int(n.clone())]),
        _ => vec![],
    })
    .set_concrete_filter(
        "boolVal",
        |a| pat!(flow(&a[0]), Value::Bool(b) => one(vec![Value::Val(Val::Bool(*b))])),
    )
    .set_concrete_filter("isBool", |a| match flow(&a[0]) {
        Value::Val(Val::Bool(b)) => one(vec![Value::Bool(*b)]),
        _ => vec![],
    })
    .set_concrete_filter("add", |a| match (flow(&a[0]), flow(&a[1])) {
        (Value::Int(x), Value::Int(y)) => one(vec![Value::Int(x + y)]),
        other => panic!("add on {other:?}"),
    })
    .set_concrete_filter("eq", |a| match (flow(&a[0]), flow(&a[1])) {
        (Value::Int(x), Value::Int(y)) => one(vec![Value::Bool(x == y)]),
        other => panic!("eq on {other:?}"),
    })
    .set_concrete_filter(
        "neg",
        |a| pat!(flow(&a[0]), Value::Bool(b) => one(vec![Value::Bool(!b)])),
    )
    .set_concrete_filter("isTrue", |a| match flow(&a[0]) {
        Value::Bool(true) => one(vec![]),
        _ => vec![],
    })
    .set_concrete_filter("isFalse", |a| match flow(&a[0]) {
        Value::Bool(false) => one(vec![]),
        _ => vec![],
    })
    .set_concrete_filter("read", |a| {
        let Some(x) = term_text(&a[0]) else {
            return vec![];
        };
        pat!(flow(&a[1]), Value::State(s) => s
            .get(x)
            .map(|v| one(vec![Value::Val(v.clone())]))
            .unwrap_or_default())
    })
    .set_concrete_filter("write", |a| {
        let Some(x) = term_text(&a[0]) else {
            return vec![];
        };
        match (flow(&a[1]), flow(&a[2])) {
            (Value::State(s), Value::Val(v)) => {
                let mut s = s.clone();
                s.insert(x.into(), v.clone());
                one(vec![Value::State(s)])
            }
            other => panic!("write on {other:?}"),
        }
    })
    .set_concrete_filter("id", |a| one(vec![flow(&a[0]).clone()]));

    lang.set_abstract_filter("litInt", |a| {
        let i = match aterm_text(&a[0]).map(str::parse::<BigInt>) {
            Some(Ok(n)) => Itv::point(n),
            _ => Itv::Bot,
        };
        vals(vec![Abs::Int(i)])
    })
    .set_abstract_filter("intVal", |a| {
        vals(vec![Abs::Val(AVal::int(aint(aflow(&a[0])).clone()))])
    })
    .set_abstract_filter("isInt", |a| {
        vals(vec![Abs::Int(aval(aflow(&a[0])).int.clone())])
    })
    .set_abstract_filter("boolVal", |a| {
        vals(vec![Abs::Val(AVal::boolean(abool(aflow(&a[0]))))])
    })
    .set_abstract_filter("isBool", |a| vals(vec![Abs::Bool(aval(aflow(&a[0])).bool)]))
    .set_abstract_filter("add", |a| {
        vals(vec![Abs::Int(aint(aflow(&a[0])).add(aint(aflow(&a[1]))))])
    })
    .set_abstract_filter("eq", |a| {
        vals(vec![Abs::Bool(abs_eq(
            aint(aflow(&a[0])),
            aint(aflow(&a[1])),
        ))])
    })
    .set_abstract_filter("neg", |a| {
        let b = match abool(aflow(&a[0])) {
            B4::Tt => B4::Ff,
            B4::Ff => B4::Tt,
            b => b,
        };
        vals(vec![Abs::Bool(b)])
    })
    .set_abstract_filter("isTrue", |a| unit_if(abool(aflow(&a[0])).contains(true)))
    .set_abstract_filter("isFalse", |a| unit_if(abool(aflow(&a[0])).contains(false)))
    .set_abstract_filter("read", |a| {
        let v = match aterm_text(&a[0]) {
            Some(x) => astate(aflow(&a[1])).get(x),
            None => AVal::bot(),
        };
        vals(vec![Abs::Val(v)])
    })
    .set_abstract_filter("write", |a| {
        let s = match aterm_text(&a[0]) {
            Some(x) => astate(aflow(&a[1])).set(&x.into(), aval(aflow(&a[2])).clone()),
            None => AState::Bot,
        };
        vals(vec![Abs::State(s)])
    })
    .set_abstract_filter("id", |a| vals(vec![aflow(&a[0]).clone()]));
}

/// Abstract equality test, strict on bottom.
pub fn abs_eq(x: &Itv, y: &Itv) -> B4 {
    if x.is_bot() || y.is_bot() {
        return B4::Bot;
    }
    match (x.as_point(), y.as_point()) {
        (Some(a), Some(b)) if a == b => B4::Tt,
        _ if x.disjoint(y) => B4::Ff,
        _ => B4::Top,
    }
}

fn exc(ok: bool, s: &IoState) -> Value {
    Value::ExcIo(ok, Box::new(s.clone()))
}

fn aexc(flag: B4, s: &AIo) -> Abs {
    if s.is_bot() {
        Abs::ExcIo(B4::Bot, Box::new(AIo::bot()))
    } else {
        Abs::ExcIo(flag, Box::new(s.clone()))
    }
}

/// Filters added by the extended language.
pub fn install_ext(lang: &mut Language<Domains>) {
    lang.set_concrete_filter("in", |a| {
        pat!(flow(&a[0]), Value::In(l) => match l.split_first() {
            Some((v, rest)) => one(vec![Value::Val(v.clone()), Value::In(rest.to_vec())]),
            None => vec![],
        })
    })
    .set_concrete_filter("alloc", |a| match (flow(&a[0]), flow(&a[1])) {
        (Value::Heap(h), Value::Val(v)) => {
            let mut h = h.clone();
            let l = h.next;
            h.cells.insert(l, v.clone());
            h.next += 1;
            one(vec![Value::Heap(h), Value::Loc(l)])
        }
        other => panic!("alloc on {other:?}"),
    })
    .set_concrete_filter("locVal", |a| {
        pat!(flow(&a[0]), Value::Loc(l) => one(vec![Value::Val(Val::Loc(*l))]))
    })
    .set_concrete_filter("isLoc", |a| match flow(&a[0]) {
        Value::Val(Val::Loc(l)) => one(vec![Value::Loc(*l)]),
        _ => vec![],
    })
    .set_concrete_filter("get", |a| match (flow(&a[0]), flow(&a[1])) {
        (Value::Loc(l), Value::Heap(h)) => h
            .cells
            .get(l)
            .map(|v| one(vec![Value::Val(v.clone())]))
            .unwrap_or_default(),
        other => panic!("get on {other:?}"),
    })
    .set_concrete_filter("set", |a| match (flow(&a[0]), flow(&a[1]), flow(&a[2])) {
        (Value::Loc(l), Value::Heap(h), Value::Val(v)) if h.cells.contains_key(l) => {
            let mut h = h.clone();
            h.cells.insert(*l, v.clone());
            one(vec![Value::Heap(h)])
        }
        _ => vec![],
    })
    .set_concrete_filter("out", |a| match (flow(&a[0]), flow(&a[1])) {
        (Value::Out(o), Value::Val(v)) => {
            let mut o = o.clone();
            o.push(v.clone());
            one(vec![Value::Out(o)])
        }
        other => panic!("out on {other:?}"),
    })
    .set_concrete_filter("mkSt", |a| match (flow(&a[0]), flow(&a[1]), flow(&a[2]), flow(&a[3])) {
        (Value::In(i), Value::Out(o), Value::State(s), Value::Heap(h)) => {
            one(vec![Value::Io(Box::new(IoState {
                input: i.clone(),
                output: o.clone(),
                store: s.clone(),
                heap: h.clone(),
            }))])
        }
        other => panic!("mkSt on {other:?}"),
    })
    .set_concrete_filter("splitSt", |a| {
        let s = io(flow(&a[0]));
        one(vec![
            Value::In(s.input.clone()),
            Value::Out(s.output.clone()),
            Value::State(s.store.clone()),
            Value::Heap(s.heap.clone()),
        ])
    })
    .set_concrete_filter("mkValSt", |a| {
        pat!(flow(&a[0]), Value::Val(v) => one(vec![Value::ValIo(v.clone(), Box::new(io(flow(&a[1])).clone()))]))
    })
    .set_concrete_filter("getValSt", |a| {
        pat!(flow(&a[0]), Value::ValIo(v, s) => one(vec![Value::Val(v.clone()), Value::Io(s.clone())]))
    })
    .set_concrete_filter("mkOK", |a| one(vec![exc(true, io(flow(&a[0])))]))
    .set_concrete_filter("mkExc", |a| one(vec![exc(false, io(flow(&a[0])))]))
    .set_concrete_filter("isOK", |a| match flow(&a[0]) {
        Value::ExcIo(true, s) => one(vec![Value::Io(s.clone())]),
        _ => vec![],
    })
    .set_concrete_filter("isExc", |a| match flow(&a[0]) {
        Value::ExcIo(false, s) => one(vec![Value::Io(s.clone())]),
        _ => vec![],
    });

    lang.set_abstract_filter("in", |a| {
        let (v, rest) = match astream(aflow(&a[0])) {
            Stream::Of(v) if !v.is_bot() => (v.clone(), Stream::Of(v.clone())),
            _ => (AVal::bot(), Stream::Bot),
        };
        vals(vec![Abs::Val(v), Abs::In(rest)])
    })
    .set_abstract_filter("alloc", |a| {
        let v = aval(aflow(&a[1]));
        let (h, l) = match aheap(aflow(&a[0])) {
            AHeap::Bot => (AHeap::Bot, LocSet::default()),
            AHeap::Top => (AHeap::Top, LocSet::Top),
            AHeap::Heap { next, cells } => {
                let mut cells = cells.clone();
                cells.insert(*next, v.clone());
                (
                    AHeap::Heap {
                        next: next + 1,
                        cells,
                    },
                    LocSet::single(*next),
                )
            }
        };
        vals(vec![Abs::Heap(h), Abs::Loc(l)])
    })
    .set_abstract_filter("locVal", |a| vals(vec![Abs::Val(AVal::loc(aloc(aflow(&a[0])).clone()))]))
    .set_abstract_filter("isLoc", |a| vals(vec![Abs::Loc(aval(aflow(&a[0])).loc.clone())]))
    .set_abstract_filter("get", |a| {
        let l = aloc(aflow(&a[0]));
        let v = match aheap(aflow(&a[1])) {
            AHeap::Bot => AVal::bot(),
            AHeap::Top if l.is_bot() => AVal::bot(),
            AHeap::Top => AVal::top(),
            AHeap::Heap { cells, .. } => cells
                .iter()
                .filter(|(k, _)| l.contains(**k))
                .fold(AVal::bot(), |acc, (_, v)| acc.join(v)),
        };
        vals(vec![Abs::Val(v)])
    })
    .set_abstract_filter("set", |a| {
        let l = aloc(aflow(&a[0]));
        let v = aval(aflow(&a[2]));
        let h = match aheap(aflow(&a[1])) {
            AHeap::Heap { next, cells } => AHeap::Heap {
                next: *next,
                cells: cells
                    .iter()
                    .map(|(k, w)| (*k, if l.contains(*k) { w.join(v) } else { w.clone() }))
                    .collect(),
            },
            h => h.clone(),
        };
        vals(vec![Abs::Heap(h)])
    })
    .set_abstract_filter("out", |a| {
        let o = match astream(aflow(&a[0])) {
            Stream::Bot => Stream::Bot,
            Stream::Of(w) => Stream::Of(w.join(aval(aflow(&a[1])))),
        };
        vals(vec![Abs::Out(o)])
    })
    .set_abstract_filter("mkSt", |a| {
        vals(vec![Abs::Io(Box::new(AIo {
            input: astream(aflow(&a[0])).clone(),
            output: astream(aflow(&a[1])).clone(),
            state: astate(aflow(&a[2])).clone(),
            heap: aheap(aflow(&a[3])).clone(),
        }))])
    })
    .set_abstract_filter("splitSt", |a| {
        let s = aio(aflow(&a[0]));
        vals(vec![
            Abs::In(s.input.clone()),
            Abs::Out(s.output.clone()),
            Abs::State(s.state.clone()),
            Abs::Heap(s.heap.clone()),
        ])
    })
    .set_abstract_filter("mkValSt", |a| {
        vals(vec![Abs::ValIo(aval(aflow(&a[0])).clone(), Box::new(aio(aflow(&a[1])).clone()))])
    })
    .set_abstract_filter("getValSt", |a| {
        pat!(aflow(&a[0]), Abs::ValIo(v, s) => vals(vec![Abs::Val(v.clone()), Abs::Io(s.clone())]))
    })
    .set_abstract_filter("mkOK", |a| vals(vec![aexc(B4::Tt, aio(aflow(&a[0])))]))
    .set_abstract_filter("mkExc", |a| vals(vec![aexc(B4::Ff, aio(aflow(&a[0])))]))
    .set_abstract_filter("isOK", |a| {
        pat!(aflow(&a[0]), Abs::ExcIo(b, s) => {
            let s = if b.contains(true) { (**s).clone() } else { AIo::bot() };
            vals(vec![Abs::Io(Box::new(s))])
        })
    })
    .set_abstract_filter("isExc", |a| {
        pat!(aflow(&a[0]), Abs::ExcIo(b, s) => {
            let s = if b.contains(false) { (**s).clone() } else { AIo::bot() };
            vals(vec![Abs::Io(Box::new(s))])
        })
    });
}
