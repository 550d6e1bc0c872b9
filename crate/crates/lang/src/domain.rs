//! Abstract domains of both While packs: intervals, four-point booleans,
//! location sets, value triples, stores, streams, heaps and their tuples.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use skelsem_core::{Carriers, Cover, Name};

use crate::value::{Heap, IoState, Val, Value};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Bound {
    NegInf,
    Fin(BigInt),
    PosInf,
}

impl Bound {
    fn add(&self, other: &Bound) -> Bound {
        match (self, other) {
            (Bound::Fin(a), Bound::Fin(b)) => Bound::Fin(a + b),
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            _ => Bound::PosInf,
        }
    }

    fn succ(&self) -> Bound {
        match self {
            Bound::Fin(n) => Bound::Fin(n + 1),
            b => b.clone(),
        }
    }
}

/// Integer interval; empty intervals are normalized to `Bot`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Itv {
    #[default]
    Bot,
    Range(Bound, Bound),
}

impl Itv {
    pub fn new(lo: Bound, hi: Bound) -> Itv {
        if lo == Bound::PosInf || hi == Bound::NegInf || lo > hi {
            Itv::Bot
        } else {
            Itv::Range(lo, hi)
        }
    }

    pub fn point(n: impl Into<BigInt>) -> Itv {
        let n = n.into();
        Itv::Range(Bound::Fin(n.clone()), Bound::Fin(n))
    }

    pub fn of(lo: i64, hi: i64) -> Itv {
        Itv::new(Bound::Fin(lo.into()), Bound::Fin(hi.into()))
    }

    pub fn at_least(lo: i64) -> Itv {
        Itv::new(Bound::Fin(lo.into()), Bound::PosInf)
    }

    pub fn top() -> Itv {
        Itv::Range(Bound::NegInf, Bound::PosInf)
    }

    pub fn is_bot(&self) -> bool {
        *self == Itv::Bot
    }

    pub fn leq(&self, other: &Itv) -> bool {
        match (self, other) {
            (Itv::Bot, _) => true,
            (_, Itv::Bot) => false,
            (Itv::Range(a, b), Itv::Range(c, d)) => c <= a && b <= d,
        }
    }

    pub fn join(&self, other: &Itv) -> Itv {
        match (self, other) {
            (Itv::Bot, x) | (x, Itv::Bot) => x.clone(),
            (Itv::Range(a, b), Itv::Range(c, d)) => Itv::Range(a.min(c).clone(), b.max(d).clone()),
        }
    }

    /// Bounds that grew jump to infinity.
    pub fn widen(&self, new: &Itv) -> Itv {
        match (self, new) {
            (Itv::Bot, x) => x.clone(),
            (x, Itv::Bot) => x.clone(),
            (Itv::Range(a, b), Itv::Range(c, d)) => {
                let lo = if c < a { Bound::NegInf } else { a.clone() };
                let hi = if d > b { Bound::PosInf } else { b.clone() };
                Itv::Range(lo, hi)
            }
        }
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        match self {
            Itv::Bot => false,
            Itv::Range(lo, hi) => {
                let b = Bound::Fin(n.clone());
                *lo <= b && b <= *hi
            }
        }
    }

    pub fn add(&self, other: &Itv) -> Itv {
        match (self, other) {
            (Itv::Range(a, b), Itv::Range(c, d)) => Itv::new(a.add(c), b.add(d)),
            _ => Itv::Bot,
        }
    }

    pub fn as_point(&self) -> Option<&BigInt> {
        match self {
            Itv::Range(Bound::Fin(a), Bound::Fin(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn disjoint(&self, other: &Itv) -> bool {
        match (self, other) {
            (Itv::Range(a, b), Itv::Range(c, d)) => b < c || d < a,
            _ => true,
        }
    }

    /// Whether the union of `parts` contains every integer of `self`.
    pub fn covered_by(&self, parts: &[&Itv]) -> bool {
        let Itv::Range(lo, hi) = self else {
            return true;
        };
        let mut need = lo.clone();
        loop {
            let reach = parts
                .iter()
                .filter_map(|p| match p {
                    Itv::Range(a, b) if *a <= need && *b >= need => Some(b),
                    _ => None,
                })
                .max();
            match reach {
                None => return false,
                Some(b) if b >= hi => return true,
                Some(b) => need = b.succ(),
            }
        }
    }
}

/// Subsets of the booleans.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum B4 {
    #[default]
    Bot,
    Tt,
    Ff,
    Top,
}

impl B4 {
    pub fn of(b: bool) -> B4 {
        if b {
            B4::Tt
        } else {
            B4::Ff
        }
    }

    pub fn leq(self, other: B4) -> bool {
        self == other || self == B4::Bot || other == B4::Top
    }

    pub fn join(self, other: B4) -> B4 {
        match (self, other) {
            (B4::Bot, x) | (x, B4::Bot) => x,
            (a, b) if a == b => a,
            _ => B4::Top,
        }
    }

    pub fn contains(self, b: bool) -> bool {
        B4::of(b).leq(self)
    }

    pub fn covered_by(self, parts: &[B4]) -> bool {
        [true, false]
            .iter()
            .all(|&b| !self.contains(b) || parts.iter().any(|p| p.contains(b)))
    }
}

/// Sets of locations; `Set(∅)` is bottom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LocSet {
    Set(BTreeSet<u64>),
    Top,
}

impl Default for LocSet {
    fn default() -> Self {
        LocSet::Set(BTreeSet::new())
    }
}

impl LocSet {
    pub fn single(l: u64) -> LocSet {
        LocSet::Set([l].into())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, LocSet::Set(s) if s.is_empty())
    }

    pub fn leq(&self, other: &LocSet) -> bool {
        match (self, other) {
            (_, LocSet::Top) => true,
            (LocSet::Top, _) => false,
            (LocSet::Set(a), LocSet::Set(b)) => a.is_subset(b),
        }
    }

    pub fn join(&self, other: &LocSet) -> LocSet {
        match (self, other) {
            (LocSet::Set(a), LocSet::Set(b)) => LocSet::Set(a.union(b).copied().collect()),
            _ => LocSet::Top,
        }
    }

    pub fn contains(&self, l: u64) -> bool {
        match self {
            LocSet::Top => true,
            LocSet::Set(s) => s.contains(&l),
        }
    }

    pub fn covered_by(&self, parts: &[&LocSet]) -> bool {
        match self {
            LocSet::Top => parts.iter().any(|p| **p == LocSet::Top),
            LocSet::Set(s) => s.iter().all(|l| parts.iter().any(|p| p.contains(*l))),
        }
    }
}

/// Abstract value: one component per kind of concrete value.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AVal {
    pub int: Itv,
    pub bool: B4,
    pub loc: LocSet,
}

impl AVal {
    pub fn bot() -> AVal {
        AVal::default()
    }

    pub fn int(i: Itv) -> AVal {
        AVal {
            int: i,
            ..AVal::default()
        }
    }

    pub fn boolean(b: B4) -> AVal {
        AVal {
            bool: b,
            ..AVal::default()
        }
    }

    pub fn loc(l: LocSet) -> AVal {
        AVal {
            loc: l,
            ..AVal::default()
        }
    }

    pub fn top() -> AVal {
        AVal {
            int: Itv::top(),
            bool: B4::Top,
            loc: LocSet::Top,
        }
    }

    pub fn is_bot(&self) -> bool {
        self.int.is_bot() && self.bool == B4::Bot && self.loc.is_bot()
    }

    pub fn leq(&self, o: &AVal) -> bool {
        self.int.leq(&o.int) && self.bool.leq(o.bool) && self.loc.leq(&o.loc)
    }

    pub fn join(&self, o: &AVal) -> AVal {
        AVal {
            int: self.int.join(&o.int),
            bool: self.bool.join(o.bool),
            loc: self.loc.join(&o.loc),
        }
    }

    pub fn widen(&self, o: &AVal) -> AVal {
        AVal {
            int: self.int.widen(&o.int),
            bool: self.bool.join(o.bool),
            loc: self.loc.join(&o.loc),
        }
    }

    pub fn contains(&self, v: &Val) -> bool {
        match v {
            Val::Int(n) => self.int.contains(n),
            Val::Bool(b) => self.bool.contains(*b),
            Val::Loc(l) => self.loc.contains(*l),
        }
    }

    pub fn covered_by(&self, parts: &[&AVal]) -> bool {
        let ints: Vec<&Itv> = parts.iter().map(|p| &p.int).collect();
        let bools: Vec<B4> = parts.iter().map(|p| p.bool).collect();
        let locs: Vec<&LocSet> = parts.iter().map(|p| &p.loc).collect();
        self.int.covered_by(&ints) && self.bool.covered_by(&bools) && self.loc.covered_by(&locs)
    }
}

/// Abstract store: a total map with default bottom, plus an explicit least
/// element denoting no store at all. Bottom-valued entries are never kept.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AState {
    Bot,
    Map(BTreeMap<Name, AVal>),
}

impl Default for AState {
    fn default() -> Self {
        AState::Map(BTreeMap::new())
    }
}

impl AState {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Name, AVal)>) -> AState {
        AState::Map(pairs.into_iter().filter(|(_, v)| !v.is_bot()).collect())
    }

    pub fn get(&self, x: &str) -> AVal {
        match self {
            AState::Bot => AVal::bot(),
            AState::Map(m) => m.get(x).cloned().unwrap_or_default(),
        }
    }

    pub fn set(&self, x: &Name, v: AVal) -> AState {
        match self {
            AState::Bot => AState::Bot,
            AState::Map(m) => {
                let mut m = m.clone();
                if v.is_bot() {
                    m.remove(x);
                } else {
                    m.insert(x.clone(), v);
                }
                AState::Map(m)
            }
        }
    }

    pub fn leq(&self, other: &AState) -> bool {
        match (self, other) {
            (AState::Bot, _) => true,
            (_, AState::Bot) => false,
            (AState::Map(a), AState::Map(_)) => a.iter().all(|(k, v)| v.leq(&other.get(k))),
        }
    }

    fn combine(&self, other: &AState, f: impl Fn(&AVal, &AVal) -> AVal) -> AState {
        match (self, other) {
            (AState::Bot, x) | (x, AState::Bot) => x.clone(),
            (AState::Map(a), AState::Map(b)) => {
                let keys: BTreeSet<&Name> = a.keys().chain(b.keys()).collect();
                AState::from_pairs(
                    keys.into_iter()
                        .map(|k| (k.clone(), f(&self.get(k), &other.get(k)))),
                )
            }
        }
    }

    pub fn join(&self, other: &AState) -> AState {
        self.combine(other, AVal::join)
    }

    pub fn widen(&self, new: &AState) -> AState {
        self.combine(new, AVal::widen)
    }

    /// Concrete stores may leave variables unbound; bound ones must be
    /// described by the abstract entry.
    pub fn contains(&self, s: &BTreeMap<Name, Val>) -> bool {
        match self {
            AState::Bot => false,
            AState::Map(_) => s.iter().all(|(k, v)| self.get(k).contains(v)),
        }
    }

    /// Variables where `self` is not below `other`.
    fn excess(&self, other: &AState) -> BTreeSet<Name> {
        match self {
            AState::Bot => BTreeSet::new(),
            AState::Map(m) => m
                .iter()
                .filter(|(k, v)| !v.leq(&other.get(k)))
                .map(|(k, _)| k.clone())
                .collect(),
        }
    }

    /// Cover test for parts that each differ from `self` in at most one
    /// variable.
    pub fn cover(&self, parts: &[&AState]) -> Cover {
        if parts.iter().any(|p| self.leq(p)) {
            return Cover::Covered;
        }
        let mut by_var: BTreeMap<Name, Vec<AVal>> = BTreeMap::new();
        let mut wide = false;
        for p in parts {
            let ex = self.excess(p);
            if ex.len() == 1 {
                let x = ex.into_iter().next().expect("one element");
                by_var.entry(x.clone()).or_default().push(p.get(&x));
            } else {
                wide = true;
            }
        }
        for (x, vals) in &by_var {
            let refs: Vec<&AVal> = vals.iter().collect();
            if self.get(x).covered_by(&refs) {
                return Cover::Covered;
            }
        }
        if wide {
            Cover::Unsupported
        } else {
            Cover::NotCovered
        }
    }
}

/// A stream is abstracted by one value describing all of its elements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Stream {
    Bot,
    Of(AVal),
}

impl Stream {
    pub fn leq(&self, other: &Stream) -> bool {
        match (self, other) {
            (Stream::Bot, _) => true,
            (_, Stream::Bot) => false,
            (Stream::Of(a), Stream::Of(b)) => a.leq(b),
        }
    }

    fn combine(&self, other: &Stream, f: impl Fn(&AVal, &AVal) -> AVal) -> Stream {
        match (self, other) {
            (Stream::Bot, x) | (x, Stream::Bot) => x.clone(),
            (Stream::Of(a), Stream::Of(b)) => Stream::Of(f(a, b)),
        }
    }

    pub fn join(&self, other: &Stream) -> Stream {
        self.combine(other, AVal::join)
    }

    pub fn widen(&self, new: &Stream) -> Stream {
        self.combine(new, AVal::widen)
    }

    pub fn contains(&self, l: &[Val]) -> bool {
        match self {
            Stream::Bot => false,
            Stream::Of(a) => l.iter().all(|v| a.contains(v)),
        }
    }
}

/// Heaps keep the allocation counter and domain exactly. Heaps with
/// different shapes only meet at `Top`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AHeap {
    Bot,
    Heap {
        next: u64,
        cells: BTreeMap<u64, AVal>,
    },
    Top,
}

impl AHeap {
    pub fn empty() -> AHeap {
        AHeap::Heap {
            next: 0,
            cells: BTreeMap::new(),
        }
    }

    pub fn leq(&self, other: &AHeap) -> bool {
        match (self, other) {
            (AHeap::Bot, _) | (_, AHeap::Top) => true,
            (_, AHeap::Bot) | (AHeap::Top, _) => false,
            (
                AHeap::Heap { next: n, cells: m },
                AHeap::Heap {
                    next: n2,
                    cells: m2,
                },
            ) => {
                n == n2
                    && m.len() == m2.len()
                    && m.iter().all(|(k, v)| m2.get(k).is_some_and(|w| v.leq(w)))
            }
        }
    }

    fn combine(&self, other: &AHeap, f: impl Fn(&AVal, &AVal) -> AVal) -> AHeap {
        match (self, other) {
            (AHeap::Bot, x) | (x, AHeap::Bot) => x.clone(),
            (AHeap::Top, _) | (_, AHeap::Top) => AHeap::Top,
            (
                AHeap::Heap { next: n, cells: m },
                AHeap::Heap {
                    next: n2,
                    cells: m2,
                },
            ) => {
                if n != n2 || m.len() != m2.len() || m.keys().any(|k| !m2.contains_key(k)) {
                    return AHeap::Top;
                }
                AHeap::Heap {
                    next: *n,
                    cells: m.iter().map(|(k, v)| (*k, f(v, &m2[k]))).collect(),
                }
            }
        }
    }

    pub fn join(&self, other: &AHeap) -> AHeap {
        self.combine(other, AVal::join)
    }

    pub fn widen(&self, new: &AHeap) -> AHeap {
        self.combine(new, AVal::widen)
    }

    pub fn contains(&self, h: &Heap) -> bool {
        match self {
            AHeap::Bot => false,
            AHeap::Top => true,
            AHeap::Heap { next, cells } => {
                *next == h.next
                    && cells.len() == h.cells.len()
                    && h.cells
                        .iter()
                        .all(|(k, v)| cells.get(k).is_some_and(|a| a.contains(v)))
            }
        }
    }
}

/// Abstract I/O state, an unsmashed product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AIo {
    pub input: Stream,
    pub output: Stream,
    pub state: AState,
    pub heap: AHeap,
}

impl AIo {
    pub fn bot() -> AIo {
        AIo {
            input: Stream::Bot,
            output: Stream::Bot,
            state: AState::Bot,
            heap: AHeap::Bot,
        }
    }

    pub fn is_bot(&self) -> bool {
        *self == AIo::bot()
    }

    pub fn leq(&self, o: &AIo) -> bool {
        self.input.leq(&o.input)
            && self.output.leq(&o.output)
            && self.state.leq(&o.state)
            && self.heap.leq(&o.heap)
    }

    pub fn join(&self, o: &AIo) -> AIo {
        AIo {
            input: self.input.join(&o.input),
            output: self.output.join(&o.output),
            state: self.state.join(&o.state),
            heap: self.heap.join(&o.heap),
        }
    }

    pub fn widen(&self, o: &AIo) -> AIo {
        AIo {
            input: self.input.widen(&o.input),
            output: self.output.widen(&o.output),
            state: self.state.widen(&o.state),
            heap: self.heap.widen(&o.heap),
        }
    }

    pub fn contains(&self, s: &IoState) -> bool {
        self.input.contains(&s.input)
            && self.output.contains(&s.output)
            && self.state.contains(&s.store)
            && self.heap.contains(&s.heap)
    }
}

/// An abstract value of some flow sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Abs {
    Int(Itv),
    Bool(B4),
    Val(AVal),
    State(AState),
    Loc(LocSet),
    In(Stream),
    Out(Stream),
    Heap(AHeap),
    Io(Box<AIo>),
    ValIo(AVal, Box<AIo>),
    ExcIo(B4, Box<AIo>),
}

/// Carriers shared by the While and extended-While packs.
pub struct Domains;

pub fn abs_inhabits(a: &Abs, sort: &str) -> bool {
    matches!(
        (a, sort),
        (Abs::Int(_), "Int")
            | (Abs::Bool(_), "Bool")
            | (Abs::Val(_), "Val")
            | (Abs::State(_), "State")
            | (Abs::Loc(_), "Loc")
            | (Abs::In(_), "In")
            | (Abs::Out(_), "Out")
            | (Abs::Heap(_), "Heap")
            | (Abs::Io(_), "IOState")
            | (Abs::ValIo(..), "ValIOState")
            | (Abs::ExcIo(..), "ExcIOState")
    )
}

pub fn bottom(sort: &str) -> Option<Abs> {
    Some(match sort {
        "Int" => Abs::Int(Itv::Bot),
        "Bool" => Abs::Bool(B4::Bot),
        "Val" => Abs::Val(AVal::bot()),
        "State" => Abs::State(AState::Bot),
        "Loc" => Abs::Loc(LocSet::default()),
        "In" => Abs::In(Stream::Bot),
        "Out" => Abs::Out(Stream::Bot),
        "Heap" => Abs::Heap(AHeap::Bot),
        "IOState" => Abs::Io(Box::new(AIo::bot())),
        "ValIOState" => Abs::ValIo(AVal::bot(), Box::new(AIo::bot())),
        "ExcIOState" => Abs::ExcIo(B4::Bot, Box::new(AIo::bot())),
        _ => return None,
    })
}

pub fn is_bottom(a: &Abs) -> bool {
    match a {
        Abs::Int(i) => i.is_bot(),
        Abs::Bool(b) => *b == B4::Bot,
        Abs::Val(v) => v.is_bot(),
        Abs::State(s) => *s == AState::Bot,
        Abs::Loc(l) => l.is_bot(),
        Abs::In(s) | Abs::Out(s) => *s == Stream::Bot,
        Abs::Heap(h) => *h == AHeap::Bot,
        Abs::Io(s) => s.is_bot(),
        Abs::ValIo(v, s) => v.is_bot() && s.is_bot(),
        Abs::ExcIo(b, s) => *b == B4::Bot && s.is_bot(),
    }
}

pub fn leq(a: &Abs, b: &Abs) -> bool {
    match (a, b) {
        (Abs::Int(x), Abs::Int(y)) => x.leq(y),
        (Abs::Bool(x), Abs::Bool(y)) => x.leq(*y),
        (Abs::Val(x), Abs::Val(y)) => x.leq(y),
        (Abs::State(x), Abs::State(y)) => x.leq(y),
        (Abs::Loc(x), Abs::Loc(y)) => x.leq(y),
        (Abs::In(x), Abs::In(y)) | (Abs::Out(x), Abs::Out(y)) => x.leq(y),
        (Abs::Heap(x), Abs::Heap(y)) => x.leq(y),
        (Abs::Io(x), Abs::Io(y)) => x.leq(y),
        (Abs::ValIo(v, s), Abs::ValIo(w, t)) => v.leq(w) && s.leq(t),
        (Abs::ExcIo(v, s), Abs::ExcIo(w, t)) => v.leq(*w) && s.leq(t),
        _ => false,
    }
}

fn combine(a: &Abs, b: &Abs, widen: bool) -> Abs {
    match (a, b) {
        (Abs::Int(x), Abs::Int(y)) if widen => Abs::Int(x.widen(y)),
        (Abs::Int(x), Abs::Int(y)) => Abs::Int(x.join(y)),
        (Abs::Bool(x), Abs::Bool(y)) => Abs::Bool(x.join(*y)),
        (Abs::Val(x), Abs::Val(y)) if widen => Abs::Val(x.widen(y)),
        (Abs::Val(x), Abs::Val(y)) => Abs::Val(x.join(y)),
        (Abs::State(x), Abs::State(y)) if widen => Abs::State(x.widen(y)),
        (Abs::State(x), Abs::State(y)) => Abs::State(x.join(y)),
        (Abs::Loc(x), Abs::Loc(y)) => Abs::Loc(x.join(y)),
        (Abs::In(x), Abs::In(y)) if widen => Abs::In(x.widen(y)),
        (Abs::In(x), Abs::In(y)) => Abs::In(x.join(y)),
        (Abs::Out(x), Abs::Out(y)) if widen => Abs::Out(x.widen(y)),
        (Abs::Out(x), Abs::Out(y)) => Abs::Out(x.join(y)),
        (Abs::Heap(x), Abs::Heap(y)) if widen => Abs::Heap(x.widen(y)),
        (Abs::Heap(x), Abs::Heap(y)) => Abs::Heap(x.join(y)),
        (Abs::Io(x), Abs::Io(y)) if widen => Abs::Io(Box::new(x.widen(y))),
        (Abs::Io(x), Abs::Io(y)) => Abs::Io(Box::new(x.join(y))),
        (Abs::ValIo(v, s), Abs::ValIo(w, t)) if widen => {
            Abs::ValIo(v.widen(w), Box::new(s.widen(t)))
        }
        (Abs::ValIo(v, s), Abs::ValIo(w, t)) => Abs::ValIo(v.join(w), Box::new(s.join(t))),
        (Abs::ExcIo(v, s), Abs::ExcIo(w, t)) if widen => {
            Abs::ExcIo(v.join(*w), Box::new(s.widen(t)))
        }
        (Abs::ExcIo(v, s), Abs::ExcIo(w, t)) => Abs::ExcIo(v.join(*w), Box::new(s.join(t))),
        _ => panic!("join of values of different sorts: {a:?} and {b:?}"),
    }
}

pub fn join(a: &Abs, b: &Abs) -> Abs {
    combine(a, b, false)
}

pub fn widen(old: &Abs, new: &Abs) -> Abs {
    combine(old, new, true)
}

pub fn member(v: &Value, a: &Abs) -> bool {
    match (v, a) {
        (Value::Int(n), Abs::Int(i)) => i.contains(n),
        (Value::Bool(b), Abs::Bool(x)) => x.contains(*b),
        (Value::Val(v), Abs::Val(x)) => x.contains(v),
        (Value::State(s), Abs::State(x)) => x.contains(s),
        (Value::Loc(l), Abs::Loc(x)) => x.contains(*l),
        (Value::In(l), Abs::In(x)) | (Value::Out(l), Abs::Out(x)) => x.contains(l),
        (Value::Heap(h), Abs::Heap(x)) => x.contains(h),
        (Value::Io(s), Abs::Io(x)) => x.contains(s),
        (Value::ValIo(v, s), Abs::ValIo(x, y)) => x.contains(v) && y.contains(s),
        (Value::ExcIo(b, s), Abs::ExcIo(x, y)) => x.contains(*b) && y.contains(s),
        _ => false,
    }
}

pub fn cover(query: &Abs, parts: &[&Abs]) -> Cover {
    if is_bottom(query) || parts.iter().any(|p| leq(query, p)) {
        return Cover::Covered;
    }
    let verdict = |ok: bool| {
        if ok {
            Cover::Covered
        } else {
            Cover::NotCovered
        }
    };
    match query {
        Abs::Int(q) => verdict(
            q.covered_by(
                &parts
                    .iter()
                    .filter_map(|p| match p {
                        Abs::Int(i) => Some(i),
                        _ => None,
                    })
                    .collect::<Vec<_>>(),
            ),
        ),
        Abs::Bool(q) => verdict(
            q.covered_by(
                &parts
                    .iter()
                    .filter_map(|p| match p {
                        Abs::Bool(b) => Some(*b),
                        _ => None,
                    })
                    .collect::<Vec<_>>(),
            ),
        ),
        Abs::Val(q) => verdict(
            q.covered_by(
                &parts
                    .iter()
                    .filter_map(|p| match p {
                        Abs::Val(v) => Some(v),
                        _ => None,
                    })
                    .collect::<Vec<_>>(),
            ),
        ),
        Abs::State(q) => q.cover(
            &parts
                .iter()
                .filter_map(|p| match p {
                    Abs::State(s) => Some(s),
                    _ => None,
                })
                .collect::<Vec<_>>(),
        ),
        _ => Cover::Unsupported,
    }
}

/// Literals are canonical decimal integers; identifiers are non-empty.
pub fn base_term_ok(sort: &str, text: &str) -> bool {
    match sort {
        "lit" => text.parse::<BigInt>().is_ok_and(|n| n.to_string() == text),
        "ident" => !text.is_empty(),
        _ => false,
    }
}

impl Carriers for Domains {
    type Value = Value;
    type Abs = Abs;

    fn inhabits(v: &Value, sort: &str) -> bool {
        crate::value::inhabits(v, sort)
    }
    fn abs_inhabits(a: &Abs, sort: &str) -> bool {
        abs_inhabits(a, sort)
    }
    fn bottom(sort: &str) -> Option<Abs> {
        bottom(sort)
    }
    fn is_bottom(a: &Abs) -> bool {
        is_bottom(a)
    }
    fn leq(a: &Abs, b: &Abs) -> bool {
        leq(a, b)
    }
    fn join(a: &Abs, b: &Abs) -> Abs {
        join(a, b)
    }
    fn widen(old: &Abs, new: &Abs) -> Abs {
        widen(old, new)
    }
    fn member(v: &Value, a: &Abs) -> bool {
        member(v, a)
    }
    fn cover(query: &Abs, parts: &[&Abs]) -> Cover {
        cover(query, parts)
    }
    fn base_term_ok(sort: &str, text: &str) -> bool {
        base_term_ok(sort, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use skelsem_core::name;

    fn st(pairs: &[(&str, Itv)]) -> AState {
        AState::from_pairs(pairs.iter().map(|(k, i)| (name(k), AVal::int(i.clone()))))
    }

    #[test]
    fn empty_intervals_are_bottom() {
        assert_eq!(Itv::of(3, 2), Itv::Bot);
        assert!(Itv::Bot.leq(&Itv::of(0, 0)));
        assert_eq!(Itv::of(1, 2).add(&Itv::of(10, 20)), Itv::of(11, 22));
        assert_eq!(Itv::of(0, 1).widen(&Itv::of(0, 2)), Itv::at_least(0));
    }

    #[test]
    fn interval_union_cover() {
        let q = Itv::at_least(0);
        assert!(q.covered_by(&[&Itv::of(0, 0), &Itv::at_least(1)]));
        assert!(!q.covered_by(&[&Itv::of(0, 0), &Itv::at_least(2)]));
        assert!(Itv::top().covered_by(&[
            &Itv::new(Bound::NegInf, Bound::Fin((-1).into())),
            &Itv::at_least(0)
        ]));
    }

    #[test]
    fn state_cover_on_one_variable() {
        let q = st(&[("x", Itv::at_least(0))]);
        let a = st(&[("x", Itv::of(0, 0))]);
        let b = st(&[("x", Itv::at_least(1))]);
        assert_eq!(q.cover(&[&a, &b]), Cover::Covered);
        let c = st(&[("x", Itv::at_least(2))]);
        assert_eq!(q.cover(&[&a, &c]), Cover::NotCovered);
        let q2 = st(&[("x", Itv::at_least(0)), ("y", Itv::at_least(0))]);
        let d = st(&[("x", Itv::of(0, 0)), ("y", Itv::of(0, 0))]);
        assert_eq!(q2.cover(&[&d]), Cover::Unsupported);
    }

    #[test]
    fn unbound_variables_are_members() {
        let s = st(&[("x", Itv::of(1, 5))]);
        assert!(s.contains(&BTreeMap::new()));
        let mut conc = BTreeMap::new();
        conc.insert(name("x"), Val::Int(0.into()));
        assert!(!s.contains(&conc));
        assert!(!AState::Bot.contains(&BTreeMap::new()));
    }

    #[test]
    fn heaps_of_different_shape_join_to_top() {
        let h1 = AHeap::empty();
        let h2 = AHeap::Heap {
            next: 1,
            cells: [(0, AVal::int(Itv::point(7)))].into(),
        };
        assert_eq!(h1.join(&h2), AHeap::Top);
        assert!(h2.leq(&AHeap::Top));
        assert!(!h1.leq(&h2));
    }
}
