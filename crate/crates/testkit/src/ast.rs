//! Programs as plain enums, printed in the surface syntax.

use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    In,
    Ref(Box<Expr>),
    Deref(Box<Expr>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    Skip,
    Assign(String, Expr),
    Seq(Box<Stmt>, Box<Stmt>),
    If(Expr, Box<Stmt>, Box<Stmt>),
    While(Expr, Box<Stmt>),
    Out(Expr),
    Throw,
    Try(Box<Stmt>, Box<Stmt>),
    Store(Expr, Expr),
}

impl Expr {
    /// Whether the expression needs the extended dialect.
    pub fn is_ext(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Var(_) => false,
            Expr::Add(a, b) | Expr::Eq(a, b) => a.is_ext() || b.is_ext(),
            Expr::Not(a) => a.is_ext(),
            Expr::In | Expr::Ref(_) | Expr::Deref(_) => true,
        }
    }
}

impl Stmt {
    pub fn is_ext(&self) -> bool {
        match self {
            Stmt::Skip => false,
            Stmt::Assign(_, e) => e.is_ext(),
            Stmt::Seq(a, b) => a.is_ext() || b.is_ext(),
            Stmt::If(c, a, b) => c.is_ext() || a.is_ext() || b.is_ext(),
            Stmt::While(c, a) => c.is_ext() || a.is_ext(),
            Stmt::Out(_) | Stmt::Throw | Stmt::Try(..) | Stmt::Store(..) => true,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(x) => f.write_str(x),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Eq(a, b) => write!(f, "({a} = {b})"),
            Expr::Not(a) => write!(f, "not ({a})"),
            Expr::In => f.write_str("in"),
            Expr::Ref(a) => write!(f, "ref ({a})"),
            Expr::Deref(a) => write!(f, "!({a})"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Skip => f.write_str("skip"),
            Stmt::Assign(x, e) => write!(f, "{x} := {e}"),
            Stmt::Seq(a, b) => write!(f, "{{ {a}; {b} }}"),
            Stmt::If(c, a, b) => write!(f, "if {c} then {a} else {b} end"),
            Stmt::While(c, a) => write!(f, "while {c} do {a} end"),
            Stmt::Out(e) => write!(f, "out {e}"),
            Stmt::Throw => f.write_str("throw"),
            Stmt::Try(a, b) => write!(f, "try {a} catch {b} end"),
            Stmt::Store(a, b) => write!(f, "{a} <- {b}"),
        }
    }
}

pub fn int(n: i64) -> Expr {
    Expr::Int(n.into())
}

pub fn var(x: &str) -> Expr {
    Expr::Var(x.into())
}

pub fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

pub fn eq(a: Expr, b: Expr) -> Expr {
    Expr::Eq(Box::new(a), Box::new(b))
}

pub fn not(a: Expr) -> Expr {
    Expr::Not(Box::new(a))
}

pub fn reference(a: Expr) -> Expr {
    Expr::Ref(Box::new(a))
}

pub fn deref(a: Expr) -> Expr {
    Expr::Deref(Box::new(a))
}

pub fn assign(x: &str, e: Expr) -> Stmt {
    Stmt::Assign(x.into(), e)
}

/// Right-nested sequence; `skip` when empty.
pub fn seq(parts: Vec<Stmt>) -> Stmt {
    let mut it = parts.into_iter().rev();
    let Some(last) = it.next() else {
        return Stmt::Skip;
    };
    it.fold(last, |acc, s| Stmt::Seq(Box::new(s), Box::new(acc)))
}

pub fn if_(c: Expr, a: Stmt, b: Stmt) -> Stmt {
    Stmt::If(c, Box::new(a), Box::new(b))
}

pub fn while_(c: Expr, a: Stmt) -> Stmt {
    Stmt::While(c, Box::new(a))
}

pub fn try_(a: Stmt, b: Stmt) -> Stmt {
    Stmt::Try(Box::new(a), Box::new(b))
}

pub fn store(a: Expr, b: Expr) -> Stmt {
    Stmt::Store(a, b)
}
