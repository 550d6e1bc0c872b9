//! The generic driver shared by every interpretation of skeleton bodies.

use std::collections::{BTreeMap, BTreeSet};

use crate::skeleton::{Body, Bone, BonePath, Var};
use crate::term::{Name, Term};

/// Default bound on outcome tuples enumerated for one branch set.
pub const DEFAULT_COMBINATION_CAP: u128 = 1_000_000;

/// The four rules of an interpretation. Rules are set-valued: an empty
/// result means no derivation.
pub trait Interpretation {
    type State: Clone + Ord;
    type Error;

    fn nil(&self, st: &Self::State) -> Result<Vec<Self::State>, Self::Error> {
        Ok(vec![st.clone()])
    }

    fn hook(
        &self,
        at: &BonePath,
        st: &Self::State,
        input: &Name,
        term: &Term,
        output: &Name,
    ) -> Result<Vec<Self::State>, Self::Error>;

    fn filter(
        &self,
        at: &BonePath,
        st: &Self::State,
        name: &Name,
        inputs: &[Var],
        outputs: &[Var],
    ) -> Result<Vec<Self::State>, Self::Error>;

    /// `outcomes` maps 0-based branch indices to one result each; branches
    /// without results are absent.
    fn merge(
        &self,
        at: &BonePath,
        shared: &BTreeSet<Var>,
        n: usize,
        outcomes: &BTreeMap<usize, Self::State>,
        st: &Self::State,
    ) -> Result<Vec<Self::State>, Self::Error>;

    fn combination_cap(&self) -> u128 {
        DEFAULT_COMBINATION_CAP
    }

    fn budget_exceeded(&self, at: &BonePath, tuples: u128) -> Self::Error;
}

pub fn interpret_body<I: Interpretation>(
    interp: &I,
    st: &I::State,
    body: &Body,
) -> Result<BTreeSet<I::State>, I::Error> {
    let mut path = BonePath::default();
    run(interp, st, &body.0, 0, &mut path)
}

fn run<I: Interpretation>(
    interp: &I,
    st: &I::State,
    bones: &[Bone],
    offset: usize,
    path: &mut BonePath,
) -> Result<BTreeSet<I::State>, I::Error> {
    let Some((bone, rest)) = bones.split_first() else {
        return Ok(interp.nil(st)?.into_iter().collect());
    };
    path.0.push(offset + 1);
    let next = step(interp, st, bone, path);
    path.0.pop();
    let mut out = BTreeSet::new();
    for s in next? {
        out.extend(run(interp, &s, rest, offset + 1, path)?);
    }
    Ok(out)
}

fn step<I: Interpretation>(
    interp: &I,
    st: &I::State,
    bone: &Bone,
    path: &mut BonePath,
) -> Result<BTreeSet<I::State>, I::Error> {
    match bone {
        Bone::Hook {
            input,
            term,
            output,
        } => Ok(interp
            .hook(path, st, input, term, output)?
            .into_iter()
            .collect()),
        Bone::Filter {
            name,
            inputs,
            outputs,
        } => Ok(interp
            .filter(path, st, name, inputs, outputs)?
            .into_iter()
            .collect()),
        Bone::Branches { shared, branches } => {
            let mut results: Vec<(usize, Vec<I::State>)> = Vec::new();
            for (i, b) in branches.iter().enumerate() {
                path.0.push(i + 1);
                let r = run(interp, st, &b.0, 0, path);
                path.0.pop();
                let r = r?;
                if !r.is_empty() {
                    results.push((i, r.into_iter().collect()));
                }
            }
            let tuples = results
                .iter()
                .fold(1u128, |acc, (_, r)| acc.saturating_mul(r.len() as u128));
            if tuples > interp.combination_cap() {
                return Err(interp.budget_exceeded(path, tuples));
            }
            let mut out = BTreeSet::new();
            let mut choice = vec![0usize; results.len()];
            loop {
                let o: BTreeMap<usize, I::State> = results
                    .iter()
                    .zip(&choice)
                    .map(|((i, r), &k)| (*i, r[k].clone()))
                    .collect();
                out.extend(interp.merge(path, shared, branches.len(), &o, st)?);
                // odometer over the per-branch choices
                let mut pos = 0;
                loop {
                    if pos == choice.len() {
                        return Ok(out);
                    }
                    choice[pos] += 1;
                    if choice[pos] < results[pos].1.len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
            }
        }
    }
}
