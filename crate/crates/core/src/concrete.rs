//! Concrete big-step interpretation and its immediate-consequence operator
//! restricted to finite query sets.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::interp::{interpret_body, Interpretation};
use crate::language::{Carriers, LangError, Language, Slot, SortKind};
use crate::skeleton::{BonePath, Var};
use crate::term::{substitute_with, Name, Term};

pub type Env<V> = BTreeMap<Var, Slot<V>>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConcreteTriple<V> {
    pub state: V,
    pub term: Term,
    pub result: V,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConcreteError {
    #[error("fuel exhausted before any derivation was found")]
    FuelExhausted,
    #[error("ill-sorted environment at bone {at}: {detail}")]
    IllSortedEnv { at: BonePath, detail: String },
    #[error("ill-sorted query: {0}")]
    IllSortedQuery(String),
    #[error("{tuples} branch outcome tuples at bone {at} exceed the cap")]
    BudgetExceeded { at: BonePath, tuples: u128 },
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// Finite hypothesis set indexed by (state, term).
#[derive(Clone, Debug)]
pub struct TripleIndex<V: Ord> {
    map: BTreeMap<(V, Term), BTreeSet<V>>,
}

impl<V: Ord + Clone> TripleIndex<V> {
    pub fn new<'a>(triples: impl IntoIterator<Item = &'a ConcreteTriple<V>>) -> Self
    where
        V: 'a,
    {
        let mut map: BTreeMap<(V, Term), BTreeSet<V>> = BTreeMap::new();
        for t in triples {
            map.entry((t.state.clone(), t.term.clone()))
                .or_default()
                .insert(t.result.clone());
        }
        TripleIndex { map }
    }

    pub fn lookup(&self, state: &V, term: &Term) -> Vec<V> {
        self.map
            .get(&(state.clone(), term.clone()))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }
}

/// How hooks are resolved.
pub enum Oracle<'a, V: Ord> {
    /// Literal rule: look the judgement up in a hypothesis set.
    Triples(&'a TripleIndex<V>),
    /// Recursive evaluation, bounded by fuel.
    Recursive,
}

pub struct ConcreteRules<'a, C: Carriers> {
    lang: &'a Language<C>,
    oracle: &'a Oracle<'a, C::Value>,
    fuel: u64,
    exhausted: &'a Cell<bool>,
}

fn ill<T>(at: &BonePath, detail: String) -> Result<T, ConcreteError> {
    Err(ConcreteError::IllSortedEnv {
        at: at.clone(),
        detail,
    })
}

fn close_term<V>(at: &BonePath, env: &Env<V>, t: &Term) -> Result<Term, ConcreteError> {
    substitute_with(
        &|v: &Name| {
            env.get(&Var::Term(v.clone()))
                .and_then(|s| s.as_term().cloned())
        },
        t,
    )
    .or_else(|e| ill(at, e.to_string()))
}

impl<C: Carriers> Interpretation for ConcreteRules<'_, C> {
    type State = Env<C::Value>;
    type Error = ConcreteError;

    fn hook(
        &self,
        at: &BonePath,
        env: &Self::State,
        input: &Name,
        term: &Term,
        output: &Name,
    ) -> Result<Vec<Self::State>, ConcreteError> {
        let Some(Slot::Flow(sigma)) = env.get(&Var::Flow(input.clone())) else {
            return ill(at, format!("`{input}` unbound"));
        };
        let t = close_term(at, env, term)?;
        let results = match self.oracle {
            Oracle::Triples(ix) => ix.lookup(sigma, &t),
            Oracle::Recursive if self.fuel == 0 => {
                self.exhausted.set(true);
                Vec::new()
            }
            Oracle::Recursive => eval_inner(
                self.lang,
                self.oracle,
                sigma,
                &t,
                self.fuel - 1,
                self.exhausted,
            )?
            .into_iter()
            .collect(),
        };
        Ok(results
            .into_iter()
            .map(|v| {
                let mut e = env.clone();
                e.insert(Var::Flow(output.clone()), Slot::Flow(v));
                e
            })
            .collect())
    }

    fn filter(
        &self,
        at: &BonePath,
        env: &Self::State,
        name: &Name,
        inputs: &[Var],
        outputs: &[Var],
    ) -> Result<Vec<Self::State>, ConcreteError> {
        let f = self.lang.concrete_filter(name)?;
        let mut args = Vec::with_capacity(inputs.len());
        for x in inputs {
            match env.get(x) {
                Some(s) => args.push(s.clone()),
                None => return ill(at, format!("`{x}` unbound")),
            }
        }
        let mut out = Vec::new();
        for tuple in f(&args) {
            if tuple.len() != outputs.len() {
                return ill(at, format!("`{name}` returned {} values", tuple.len()));
            }
            let mut e = env.clone();
            for (y, v) in outputs.iter().zip(tuple) {
                e.insert(y.clone(), Slot::Flow(v));
            }
            out.push(e);
        }
        Ok(out)
    }

    fn merge(
        &self,
        _at: &BonePath,
        shared: &BTreeSet<Var>,
        _n: usize,
        outcomes: &BTreeMap<usize, Self::State>,
        env: &Self::State,
    ) -> Result<Vec<Self::State>, ConcreteError> {
        Ok(outcomes
            .values()
            .filter(|o| shared.iter().all(|v| o.contains_key(v)))
            .map(|o| {
                let mut e = env.clone();
                for v in shared {
                    e.insert(v.clone(), o[v].clone());
                }
                e
            })
            .collect())
    }

    fn budget_exceeded(&self, at: &BonePath, tuples: u128) -> ConcreteError {
        ConcreteError::BudgetExceeded {
            at: at.clone(),
            tuples,
        }
    }
}

/// Initial environment of the skeleton for `t`.
pub fn initial_env<'l, C: Carriers>(
    lang: &'l Language<C>,
    sigma: &C::Value,
    t: &Term,
) -> Result<(Env<C::Value>, &'l crate::skeleton::Skeleton), ConcreteError> {
    let Term::Ctor(c, args) = t else {
        return Err(ConcreteError::IllSortedQuery(format!(
            "`{t}` is not a constructor term"
        )));
    };
    let skel = lang.skeleton(c)?;
    if skel.params.len() != args.len() {
        return Err(ConcreteError::IllSortedQuery(format!("arity of `{c}`")));
    }
    let mut env = Env::new();
    env.insert(Var::sigma(), Slot::Flow(sigma.clone()));
    for (p, a) in skel.params.iter().zip(args.iter()) {
        env.insert(Var::Term(p.clone()), Slot::Term(a.clone()));
    }
    Ok((env, skel))
}

fn eval_inner<C: Carriers>(
    lang: &Language<C>,
    oracle: &Oracle<'_, C::Value>,
    sigma: &C::Value,
    t: &Term,
    fuel: u64,
    exhausted: &Cell<bool>,
) -> Result<BTreeSet<C::Value>, ConcreteError> {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
        let (env, skel) = initial_env(lang, sigma, t)?;
        let rules = ConcreteRules {
            lang,
            oracle,
            fuel,
            exhausted,
        };
        let finals = interpret_body(&rules, &env, &skel.body)?;
        Ok(finals
            .into_iter()
            .filter_map(|e| match e.get(&Var::out()) {
                Some(Slot::Flow(v)) => Some(v.clone()),
                _ => None,
            })
            .collect())
    })
}

/// Checks that `t` is a closed program term and `sigma` inhabits its input
/// flow sort. Returns the program sort.
pub fn check_query<C: Carriers>(
    lang: &Language<C>,
    sigma: &C::Value,
    t: &Term,
) -> Result<Name, ConcreteError> {
    let s = lang
        .check_closed(t)
        .map_err(|e| ConcreteError::IllSortedQuery(e.to_string()))?;
    if lang.syntax.kind(&s) != Some(SortKind::Program) {
        return Err(ConcreteError::IllSortedQuery(format!(
            "`{t}` has base sort {s}"
        )));
    }
    let input = lang
        .syntax
        .in_sort(&s)
        .ok_or_else(|| ConcreteError::IllSortedQuery(format!("no flow sorts for {s}")))?;
    if !C::inhabits(sigma, input) {
        return Err(ConcreteError::IllSortedQuery(format!(
            "state is not a {input}"
        )));
    }
    Ok(s)
}

/// All results derivable with hook-recursion depth at most `fuel`. An empty
/// set means every path died on a filter; [`ConcreteError::FuelExhausted`]
/// means no result was found and some path ran out of fuel.
pub fn eval<C: Carriers>(
    lang: &Language<C>,
    sigma: &C::Value,
    t: &Term,
    fuel: u64,
) -> Result<BTreeSet<C::Value>, ConcreteError> {
    check_query(lang, sigma, t)?;
    let exhausted = Cell::new(false);
    let r = eval_inner(lang, &Oracle::Recursive, sigma, t, fuel, &exhausted)?;
    if r.is_empty() && exhausted.get() {
        return Err(ConcreteError::FuelExhausted);
    }
    Ok(r)
}

/// `Some(true)` iff `result` is derivable within `fuel`; `None` when fuel ran
/// out before any result was found.
pub fn check_triple<C: Carriers>(
    lang: &Language<C>,
    triple: &ConcreteTriple<C::Value>,
    fuel: u64,
) -> Result<Option<bool>, ConcreteError> {
    match eval(lang, &triple.state, &triple.term, fuel) {
        Ok(rs) => Ok(Some(rs.contains(&triple.result))),
        Err(ConcreteError::FuelExhausted) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `C(T)` restricted to the given (state, term) queries, hooks resolved only
/// through `hyps`.
pub fn immediate_consequence_on<C: Carriers>(
    lang: &Language<C>,
    queries: &[(C::Value, Term)],
    hyps: &BTreeSet<ConcreteTriple<C::Value>>,
) -> Result<BTreeSet<ConcreteTriple<C::Value>>, ConcreteError> {
    let index = TripleIndex::new(hyps.iter());
    let oracle = Oracle::Triples(&index);
    let unused = Cell::new(false);
    let mut out = BTreeSet::new();
    for (sigma, t) in queries {
        check_query(lang, sigma, t)?;
        for v in eval_inner(lang, &oracle, sigma, t, u64::MAX, &unused)? {
            out.insert(ConcreteTriple {
                state: sigma.clone(),
                term: t.clone(),
                result: v,
            });
        }
    }
    Ok(out)
}
