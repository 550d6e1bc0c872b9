//! Skeletons: per-constructor recipes made of hooks, filters and branches.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::term::{name, Name, Term};

/// Input-state variable of every skeleton.
pub const X_SIGMA: &str = "x_s";
/// Result variable of every skeleton.
pub const X_OUT: &str = "x_o";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Term(Name),
    Flow(Name),
}

impl Var {
    pub fn name(&self) -> &Name {
        match self {
            Var::Term(n) | Var::Flow(n) => n,
        }
    }

    pub fn sigma() -> Var {
        Var::Flow(name(X_SIGMA))
    }

    pub fn out() -> Var {
        Var::Flow(name(X_OUT))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn fv(n: &str) -> Var {
    Var::Flow(name(n))
}

pub fn tv(n: &str) -> Var {
    Var::Term(name(n))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bone {
    Hook {
        input: Name,
        term: Term,
        output: Name,
    },
    Filter {
        name: Name,
        inputs: Vec<Var>,
        outputs: Vec<Var>,
    },
    Branches {
        shared: BTreeSet<Var>,
        branches: Vec<Body>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Body(pub Vec<Bone>);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Skeleton {
    pub name: Name,
    pub ctor: Name,
    pub params: Vec<Name>,
    pub body: Body,
}

pub fn hook(input: &str, term: Term, output: &str) -> Bone {
    Bone::Hook {
        input: name(input),
        term,
        output: name(output),
    }
}

pub fn filter(f: &str, inputs: &[Var], outputs: &[Var]) -> Bone {
    Bone::Filter {
        name: name(f),
        inputs: inputs.to_vec(),
        outputs: outputs.to_vec(),
    }
}

pub fn branches(shared: &[Var], bodies: Vec<Vec<Bone>>) -> Bone {
    Bone::Branches {
        shared: shared.iter().cloned().collect(),
        branches: bodies.into_iter().map(Body).collect(),
    }
}

impl Skeleton {
    pub fn new(skel_name: &str, ctor: &str, params: &[&str], bones: Vec<Bone>) -> Self {
        Skeleton {
            name: name(skel_name),
            ctor: name(ctor),
            params: params.iter().map(|p| name(p)).collect(),
            body: Body(bones),
        }
    }

    /// The term `c(t1, .., tn)` this skeleton is about.
    pub fn pattern(&self) -> Term {
        Term::Ctor(
            self.ctor.clone(),
            self.params.iter().map(|p| Term::Var(p.clone())).collect(),
        )
    }

    /// One bone per line, branches indented.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.name, self.pattern());
        dump_body(&self.body, 1, &mut out);
        out
    }
}

fn join_vars(vs: &[Var]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn dump_body(body: &Body, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for bone in &body.0 {
        match bone {
            Bone::Hook {
                input,
                term,
                output,
            } => {
                let _ = writeln!(out, "{pad}H {input} |- {term} -| {output}");
            }
            Bone::Filter {
                name,
                inputs,
                outputs,
            } => {
                let _ = writeln!(
                    out,
                    "{pad}F {name}({}) |> ({})",
                    join_vars(inputs),
                    join_vars(outputs)
                );
            }
            Bone::Branches { shared, branches } => {
                let shared: Vec<Var> = shared.iter().cloned().collect();
                let _ = writeln!(out, "{pad}BRANCH {{{}}}:", join_vars(&shared));
                for (i, b) in branches.iter().enumerate() {
                    let _ = writeln!(out, "{pad}  [{}]", i + 1);
                    dump_body(b, depth + 2, out);
                }
            }
        }
    }
}

/// Position of a bone: 1-based index in its body, extended through branch
/// sets as `bone.branch.bone`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BonePath(pub Vec<usize>);

impl fmt::Display for BonePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}
