//! Direct recursive big-step interpreter.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::ast::{Expr, Stmt};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum V {
    Int(BigInt),
    Bool(bool),
    Loc(u64),
}

impl fmt::Display for V {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            V::Int(n) => write!(f, "{n}"),
            V::Bool(b) => write!(f, "{b}"),
            V::Loc(l) => write!(f, "@{l}"),
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Machine {
    pub input: Vec<V>,
    pub output: Vec<V>,
    pub vars: BTreeMap<String, V>,
    /// Cell `i` lives at location `i`.
    pub heap: Vec<V>,
}

impl Machine {
    pub fn with_vars(vars: &[(&str, V)]) -> Self {
        Machine {
            vars: vars
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            ..Machine::default()
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Normal(Machine),
    Raised(Machine),
}

impl Outcome {
    pub fn machine(&self) -> &Machine {
        match self {
            Outcome::Normal(m) | Outcome::Raised(m) => m,
        }
    }
}

/// Why a run produced no outcome.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Halt {
    Stuck(String),
    OutOfFuel,
}

type R<T> = Result<T, Halt>;

fn stuck<T>(why: impl Into<String>) -> R<T> {
    Err(Halt::Stuck(why.into()))
}

struct Run {
    fuel: u64,
}

impl Run {
    fn tick(&mut self) -> R<()> {
        if self.fuel == 0 {
            return Err(Halt::OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn int(&mut self, e: &Expr, m: &mut Machine) -> R<BigInt> {
        match self.expr(e, m)? {
            V::Int(n) => Ok(n),
            v => stuck(format!("{v} is not an integer")),
        }
    }

    fn expr(&mut self, e: &Expr, m: &mut Machine) -> R<V> {
        Ok(match e {
            Expr::Int(n) => V::Int(n.clone()),
            Expr::Var(x) => match m.vars.get(x) {
                Some(v) => v.clone(),
                None => return stuck(format!("{x} is unbound")),
            },
            Expr::Add(a, b) => {
                let x = self.int(a, m)?;
                let y = self.int(b, m)?;
                V::Int(x + y)
            }
            Expr::Eq(a, b) => {
                let x = self.int(a, m)?;
                let y = self.int(b, m)?;
                V::Bool(x == y)
            }
            Expr::Not(a) => match self.expr(a, m)? {
                V::Bool(b) => V::Bool(!b),
                v => return stuck(format!("not {v}")),
            },
            Expr::In => {
                if m.input.is_empty() {
                    return stuck("input exhausted");
                }
                m.input.remove(0)
            }
            Expr::Ref(a) => {
                let v = self.expr(a, m)?;
                m.heap.push(v);
                V::Loc(m.heap.len() as u64 - 1)
            }
            Expr::Deref(a) => match self.expr(a, m)? {
                V::Loc(l) => match m.heap.get(l as usize) {
                    Some(v) => v.clone(),
                    None => return stuck(format!("dangling @{l}")),
                },
                v => return stuck(format!("!{v}")),
            },
        })
    }

    fn cond(&mut self, c: &Expr, m: &mut Machine) -> R<bool> {
        match self.expr(c, m)? {
            V::Bool(b) => Ok(b),
            v => stuck(format!("condition {v}")),
        }
    }

    /// `Ok(false)` when an exception is raised.
    fn stmt(&mut self, s: &Stmt, m: &mut Machine) -> R<bool> {
        self.tick()?;
        match s {
            Stmt::Skip => Ok(true),
            Stmt::Assign(x, e) => {
                let v = self.expr(e, m)?;
                m.vars.insert(x.clone(), v);
                Ok(true)
            }
            Stmt::Seq(a, b) => Ok(self.stmt(a, m)? && self.stmt(b, m)?),
            Stmt::If(c, a, b) => {
                if self.cond(c, m)? {
                    self.stmt(a, m)
                } else {
                    self.stmt(b, m)
                }
            }
            Stmt::While(c, body) => loop {
                if !self.cond(c, m)? {
                    return Ok(true);
                }
                if !self.stmt(body, m)? {
                    return Ok(false);
                }
                self.tick()?;
            },
            Stmt::Out(e) => {
                let v = self.expr(e, m)?;
                m.output.push(v);
                Ok(true)
            }
            Stmt::Throw => Ok(false),
            Stmt::Try(a, b) => {
                if self.stmt(a, m)? {
                    Ok(true)
                } else {
                    self.stmt(b, m)
                }
            }
            Stmt::Store(a, b) => {
                let l = match self.expr(a, m)? {
                    V::Loc(l) => l,
                    v => return stuck(format!("{v} <- _")),
                };
                let v = self.expr(b, m)?;
                match m.heap.get_mut(l as usize) {
                    Some(cell) => *cell = v,
                    None => return stuck(format!("dangling @{l}")),
                }
                Ok(true)
            }
        }
    }
}

/// Runs `s` from `m`, spending one unit of fuel per statement and per loop
/// iteration.
pub fn run(s: &Stmt, mut m: Machine, fuel: u64) -> Result<Outcome, Halt> {
    let ok = Run { fuel }.stmt(s, &mut m)?;
    Ok(if ok {
        Outcome::Normal(m)
    } else {
        Outcome::Raised(m)
    })
}

/// Evaluates a standalone expression.
pub fn run_expr(e: &Expr, mut m: Machine) -> Result<(V, Machine), Halt> {
    let v = Run { fuel: u64::MAX }.expr(e, &mut m)?;
    Ok((v, m))
}
