//! Concrete values of both While packs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use skelsem_core::Name;

/// Values stored in variables, heap cells and streams.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Val {
    Int(BigInt),
    Bool(bool),
    Loc(u64),
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Int(n) => write!(f, "{n}"),
            Val::Bool(b) => write!(f, "{b}"),
            Val::Loc(l) => write!(f, "@{l}"),
        }
    }
}

pub type Store = BTreeMap<Name, Val>;

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Heap {
    pub next: u64,
    pub cells: BTreeMap<u64, Val>,
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IoState {
    pub input: Vec<Val>,
    pub output: Vec<Val>,
    pub store: Store,
    pub heap: Heap,
}

impl IoState {
    pub fn new(input: Vec<Val>, store: Store) -> Self {
        IoState {
            input,
            output: Vec::new(),
            store,
            heap: Heap::default(),
        }
    }
}

/// A value of some flow sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    Val(Val),
    State(Store),
    Loc(u64),
    In(Vec<Val>),
    Out(Vec<Val>),
    Heap(Heap),
    Io(Box<IoState>),
    ValIo(Val, Box<IoState>),
    /// `true` for normal termination, `false` for an exception.
    ExcIo(bool, Box<IoState>),
}

/// `{x=0, y=true}`.
pub fn show_store(s: &Store) -> String {
    let parts: Vec<String> = s.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_list(l: &[Val]) -> String {
    let parts: Vec<String> = l.iter().map(Val::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn show_heap(h: &Heap) -> String {
    let parts: Vec<String> = h.cells.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("<{}|{}>", h.next, parts.join(", "))
}

fn show_io(s: &IoState) -> String {
    format!(
        "(in={}, out={}, {}, heap={})",
        show_list(&s.input),
        show_list(&s.output),
        show_store(&s.store),
        show_heap(&s.heap)
    )
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Val(v) => write!(f, "{v}"),
            Value::State(s) => f.write_str(&show_store(s)),
            Value::Loc(l) => write!(f, "@{l}"),
            Value::In(l) | Value::Out(l) => f.write_str(&show_list(l)),
            Value::Heap(h) => f.write_str(&show_heap(h)),
            Value::Io(s) => f.write_str(&show_io(s)),
            Value::ValIo(v, s) => write!(f, "({v}, {})", show_io(s)),
            Value::ExcIo(ok, s) => {
                let tag = if *ok { "ok" } else { "exception" };
                write!(f, "({tag}, {})", show_io(s))
            }
        }
    }
}

/// Whether `v` inhabits the flow sort `sort`.
pub fn inhabits(v: &Value, sort: &str) -> bool {
    matches!(
        (v, sort),
        (Value::Int(_), "Int")
            | (Value::Bool(_), "Bool")
            | (Value::Val(_), "Val")
            | (Value::State(_), "State")
            | (Value::Loc(_), "Loc")
            | (Value::In(_), "In")
            | (Value::Out(_), "Out")
            | (Value::Heap(_), "Heap")
            | (Value::Io(_), "IOState")
            | (Value::ValIo(..), "ValIOState")
            | (Value::ExcIo(..), "ExcIOState")
    )
}
