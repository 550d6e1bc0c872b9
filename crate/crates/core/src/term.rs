//! Terms of the object language and program points addressing their subterms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Shared immutable identifier.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A literal of some base sort. The payload is opaque canonical text; the
/// language pack decides what texts are valid for each base sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BaseTerm {
    pub sort: Name,
    pub text: Name,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Base(BaseTerm),
    Var(Name),
    Ctor(Name, Arc<[Term]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown term variable `{0}`")]
    UnknownVariable(Name),
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(Name),
    #[error("constructor `{ctor}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        ctor: Name,
        expected: usize,
        found: usize,
    },
    #[error("argument {position}: expected sort `{expected}`, found `{found}`")]
    SortMismatch {
        position: usize,
        expected: Name,
        found: Name,
    },
    #[error("`{text}` is not a valid literal of base sort `{sort}`")]
    BadBaseTerm { sort: Name, text: Name },
    #[error("program point {point} leaves the term (child {index} of {arity})")]
    PathOutOfRange {
        point: ProgramPoint,
        index: u32,
        arity: usize,
    },
    #[error("program point {0} descends into a leaf")]
    PathIntoLeaf(ProgramPoint),
}

impl Term {
    pub fn base(sort: &str, text: &str) -> Term {
        Term::Base(BaseTerm {
            sort: name(sort),
            text: name(text),
        })
    }

    pub fn var(v: &str) -> Term {
        Term::Var(name(v))
    }

    pub fn ctor(c: &str, args: Vec<Term>) -> Term {
        Term::Ctor(name(c), args.into())
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Base(_) => true,
            Term::Var(_) => false,
            Term::Ctor(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn head(&self) -> Option<&Name> {
        match self {
            Term::Ctor(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Ctor(_, args) => args,
            _ => &[],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }
}

/// Generic prefix rendering, `c(a, b)`; packs provide surface printers.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Base(b) => write!(f, "{}", b.text),
            Term::Var(v) => write!(f, "{v}"),
            Term::Ctor(c, args) if args.is_empty() => write!(f, "{c}"),
            Term::Ctor(c, args) => {
                write!(f, "{c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn term_vars(t: &Term) -> BTreeSet<Name> {
    fn go(t: &Term, acc: &mut BTreeSet<Name>) {
        match t {
            Term::Base(_) => {}
            Term::Var(v) => {
                acc.insert(v.clone());
            }
            Term::Ctor(_, args) => args.iter().for_each(|a| go(a, acc)),
        }
    }
    let mut acc = BTreeSet::new();
    go(t, &mut acc);
    acc
}

/// Homomorphic replacement of term variables.
pub fn substitute(env: &BTreeMap<Name, Term>, t: &Term) -> Result<Term, TermError> {
    substitute_with(&|v: &Name| env.get(v).cloned(), t)
}

pub fn substitute_with(
    lookup: &dyn Fn(&Name) -> Option<Term>,
    t: &Term,
) -> Result<Term, TermError> {
    match t {
        Term::Base(_) => Ok(t.clone()),
        Term::Var(v) => lookup(v).ok_or_else(|| TermError::UnknownVariable(v.clone())),
        Term::Ctor(c, args) => {
            if args.iter().all(Term::is_closed) {
                return Ok(t.clone());
            }
            let args = args
                .iter()
                .map(|a| substitute_with(lookup, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::Ctor(c.clone(), args.into()))
        }
    }
}

/// A position in a term: a list of 1-based child indices. The empty list is
/// the root and prints as `r`; `[1, 2]` prints as `r.1.2`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProgramPoint(pub Vec<u32>);

impl ProgramPoint {
    pub fn root() -> Self {
        ProgramPoint(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u32) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        ProgramPoint(v)
    }

    pub fn concat(&self, other: &ProgramPoint) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ProgramPoint(v)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split('.');
        if parts.next()? != "r" {
            return None;
        }
        let v = parts
            .map(|p| p.parse::<u32>().ok().filter(|&k| k > 0))
            .collect::<Option<Vec<_>>>()?;
        Some(ProgramPoint(v))
    }
}

impl fmt::Display for ProgramPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r")?;
        for k in &self.0 {
            write!(f, ".{k}")?;
        }
        Ok(())
    }
}

pub fn subterm_at<'t>(t: &'t Term, pp: &ProgramPoint) -> Result<&'t Term, TermError> {
    let mut cur = t;
    for &k in &pp.0 {
        match cur {
            Term::Ctor(_, args) if !args.is_empty() => {
                if k == 0 || k as usize > args.len() {
                    return Err(TermError::PathOutOfRange {
                        point: pp.clone(),
                        index: k,
                        arity: args.len(),
                    });
                }
                cur = &args[k as usize - 1];
            }
            _ => return Err(TermError::PathIntoLeaf(pp.clone())),
        }
    }
    Ok(cur)
}
