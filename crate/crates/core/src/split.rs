//! State splitting: admitting a triple whose state is covered by the states
//! of existing triples with the same term and result.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::language::{Carriers, Cover};
use crate::term::Term;

/// Abstract triple `(state, term, result)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AbstractTriple<A> {
    pub state: A,
    pub term: Term,
    pub result: A,
}

impl<A> AbstractTriple<A> {
    pub fn new(state: A, term: Term, result: A) -> Self {
        AbstractTriple {
            state,
            term,
            result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("cover check for `{0}` is outside the supported fragment")]
    CoverCheckUnsupported(Term),
}

/// Hypothesis triples grouped by term, then by result.
#[derive(Clone, Debug, Default)]
pub struct AbsIndex<A: Ord> {
    by_term: BTreeMap<Term, BTreeMap<A, Vec<A>>>,
}

impl<A: Ord + Clone> AbsIndex<A> {
    pub fn new<'a>(triples: impl IntoIterator<Item = &'a AbstractTriple<A>>) -> Self
    where
        A: 'a,
    {
        let mut by_term: BTreeMap<Term, BTreeMap<A, Vec<A>>> = BTreeMap::new();
        for t in triples {
            by_term
                .entry(t.term.clone())
                .or_default()
                .entry(t.result.clone())
                .or_default()
                .push(t.state.clone());
        }
        AbsIndex { by_term }
    }

    pub fn groups(&self, term: &Term) -> Option<&BTreeMap<A, Vec<A>>> {
        self.by_term.get(term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.by_term.keys()
    }
}

/// Results `v` such that some triples `(s_i, term, v)` cover `state`.
/// The second component counts result groups whose cover test fell outside
/// the decidable fragment; those groups are left out.
pub fn split_candidates<C: Carriers>(
    index: &AbsIndex<C::Abs>,
    state: &C::Abs,
    term: &Term,
) -> (Vec<C::Abs>, usize) {
    let mut out = Vec::new();
    let mut unsupported = 0;
    let Some(groups) = index.groups(term) else {
        return (out, 0);
    };
    for (result, states) in groups {
        if states.iter().any(|s| C::leq(state, s)) {
            out.push(result.clone());
            continue;
        }
        let parts: Vec<&C::Abs> = states.iter().collect();
        match C::cover(state, &parts) {
            Cover::Covered => out.push(result.clone()),
            Cover::NotCovered => {}
            Cover::Unsupported => unsupported += 1,
        }
    }
    (out, unsupported)
}

/// Results recorded in `Sp(A)` for `(state, term)`.
pub fn split_lookup<C: Carriers>(
    triples: &[AbstractTriple<C::Abs>],
    state: &C::Abs,
    term: &Term,
) -> Result<BTreeSet<C::Abs>, SplitError> {
    let index = AbsIndex::new(triples);
    let (found, unsupported) = split_candidates::<C>(&index, state, term);
    if unsupported > 0 {
        return Err(SplitError::CoverCheckUnsupported(term.clone()));
    }
    Ok(found.into_iter().collect())
}
