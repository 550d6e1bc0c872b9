//! Well-formedness interpretation: define-before-use, freshness, branch
//! sharing and sort consistency of skeletons.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exec::{self, Exec};
use crate::interp::{interpret_body, Interpretation};
use crate::language::{Carriers, Language, SortKind};
use crate::skeleton::{BonePath, Skeleton, Var};
use crate::term::{term_vars, Name, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct WfState {
    pub gamma: BTreeMap<Var, Name>,
    pub defined: BTreeSet<Var>,
    /// Sorts of branch-local variables that went out of scope.
    pub scoped: BTreeMap<Var, Name>,
}

impl WfState {
    /// Every variable the skeleton binds, in scope or not, with its sort.
    pub fn all_sorts(&self) -> BTreeMap<Var, Name> {
        let mut m = self.scoped.clone();
        m.extend(self.gamma.iter().map(|(k, v)| (k.clone(), v.clone())));
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WfReason {
    UseBeforeDef,
    Redefinition,
    SortClash,
    BranchShareMismatch,
    OutputSortMismatch,
    BranchCountBelowTwo,
}

impl fmt::Display for WfReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WfReason::UseBeforeDef => "UseBeforeDef",
            WfReason::Redefinition => "Redefinition",
            WfReason::SortClash => "SortClash",
            WfReason::BranchShareMismatch => "BranchShareMismatch",
            WfReason::OutputSortMismatch => "OutputSortMismatch",
            WfReason::BranchCountBelowTwo => "BranchCountBelowTwo",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfFailure {
    pub bone: BonePath,
    pub reason: WfReason,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonVerdict {
    pub skeleton: Name,
    pub result: Result<WfState, WfFailure>,
}

impl SkeletonVerdict {
    pub fn is_ok(&self) -> bool {
        self.result.is_ok()
    }

    /// `OK <name>` or `FAIL <name> bone=<i> reason=<code>`.
    pub fn line(&self) -> String {
        match &self.result {
            Ok(_) => format!("OK {}", self.skeleton),
            Err(e) => format!("FAIL {} bone={} reason={}", self.skeleton, e.bone, e.reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfReport {
    pub verdicts: Vec<SkeletonVerdict>,
}

impl WfReport {
    pub fn is_ok(&self) -> bool {
        self.verdicts.iter().all(SkeletonVerdict::is_ok)
    }
}

pub struct WfRules<'a, C: Carriers> {
    lang: &'a Language<C>,
}

pub fn wf_rules<C: Carriers>(lang: &Language<C>) -> WfRules<'_, C> {
    WfRules { lang }
}

fn fail<T>(at: &BonePath, reason: WfReason, detail: String) -> Result<T, WfFailure> {
    Err(WfFailure {
        bone: at.clone(),
        reason,
        detail,
    })
}

impl<C: Carriers> WfRules<'_, C> {
    fn kind_fits(&self, v: &Var, sort: &str) -> bool {
        matches!(
            (v, self.lang.syntax.kind(sort)),
            (Var::Flow(_), Some(SortKind::Flow))
                | (Var::Term(_), Some(SortKind::Base | SortKind::Program))
        )
    }

    fn read(&self, at: &BonePath, st: &WfState, v: &Var) -> Result<Name, WfFailure> {
        match st.gamma.get(v) {
            Some(s) if st.defined.contains(v) => Ok(s.clone()),
            _ => fail(at, WfReason::UseBeforeDef, format!("`{v}` is not defined")),
        }
    }
}

impl<C: Carriers> Interpretation for WfRules<'_, C> {
    type State = WfState;
    type Error = WfFailure;

    fn hook(
        &self,
        at: &BonePath,
        st: &WfState,
        input: &Name,
        term: &Term,
        output: &Name,
    ) -> Result<Vec<WfState>, WfFailure> {
        let x1 = Var::Flow(input.clone());
        let x2 = Var::Flow(output.clone());
        let in_sort = self.read(at, st, &x1)?;
        let mut tgamma = BTreeMap::new();
        for v in term_vars(term) {
            let s = self.read(at, st, &Var::Term(v.clone()))?;
            tgamma.insert(v, s);
        }
        let s = match self.lang.syntax.sort_of(&tgamma, term) {
            Ok(s) => s,
            Err(e) => return fail(at, WfReason::SortClash, e.to_string()),
        };
        let (Some(i), Some(o)) = (self.lang.syntax.in_sort(&s), self.lang.syntax.out_sort(&s))
        else {
            return fail(at, WfReason::SortClash, format!("`{s}` has no flow sorts"));
        };
        if *i != in_sort {
            return fail(
                at,
                WfReason::SortClash,
                format!("`{x1}` has sort {in_sort}, hook expects {i}"),
            );
        }
        if st.defined.contains(&x2) {
            return fail(
                at,
                WfReason::Redefinition,
                format!("`{x2}` already defined"),
            );
        }
        let mut next = st.clone();
        next.gamma.insert(x2.clone(), o.clone());
        next.defined.insert(x2);
        Ok(vec![next])
    }

    fn filter(
        &self,
        at: &BonePath,
        st: &WfState,
        name: &Name,
        inputs: &[Var],
        outputs: &[Var],
    ) -> Result<Vec<WfState>, WfFailure> {
        let mut sorts = Vec::with_capacity(inputs.len());
        for x in inputs {
            sorts.push(self.read(at, st, x)?);
        }
        let Some(sig) = self.lang.syntax.filter_sig(name) else {
            return fail(
                at,
                WfReason::SortClash,
                format!("filter `{name}` is undeclared"),
            );
        };
        if sig.inputs.len() != inputs.len() || sig.outputs.len() != outputs.len() {
            return fail(
                at,
                WfReason::SortClash,
                format!(
                    "`{name}` takes {} inputs and {} outputs",
                    sig.inputs.len(),
                    sig.outputs.len()
                ),
            );
        }
        if let Some(i) = (0..inputs.len()).find(|&i| sorts[i] != sig.inputs[i]) {
            return fail(
                at,
                WfReason::SortClash,
                format!(
                    "input {} of `{name}` has sort {}, expected {}",
                    i + 1,
                    sorts[i],
                    sig.inputs[i]
                ),
            );
        }
        let distinct: BTreeSet<&Var> = outputs.iter().collect();
        if distinct.len() != outputs.len() {
            return fail(at, WfReason::Redefinition, "outputs not distinct".into());
        }
        if let Some(y) = outputs.iter().find(|y| st.defined.contains(*y)) {
            return fail(at, WfReason::Redefinition, format!("`{y}` already defined"));
        }
        if let Some(y) = outputs
            .iter()
            .zip(&sig.outputs)
            .find(|(y, s)| !self.kind_fits(y, s))
        {
            return fail(
                at,
                WfReason::SortClash,
                format!("`{}` cannot hold sort {}", y.0, y.1),
            );
        }
        let mut next = st.clone();
        for (y, s) in outputs.iter().zip(&sig.outputs) {
            next.gamma.insert(y.clone(), s.clone());
            next.defined.insert(y.clone());
        }
        Ok(vec![next])
    }

    fn merge(
        &self,
        at: &BonePath,
        shared: &BTreeSet<Var>,
        n: usize,
        outcomes: &BTreeMap<usize, WfState>,
        st: &WfState,
    ) -> Result<Vec<WfState>, WfFailure> {
        if n < 2 {
            return fail(at, WfReason::BranchCountBelowTwo, format!("{n} branch(es)"));
        }
        if outcomes.len() != n {
            return Ok(Vec::new());
        }
        let fresh: Vec<BTreeSet<Var>> = outcomes
            .values()
            .map(|o| o.defined.difference(&st.defined).cloned().collect())
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let common: BTreeSet<Var> = fresh[i].intersection(&fresh[j]).cloned().collect();
                if &common != shared {
                    return fail(
                        at,
                        WfReason::BranchShareMismatch,
                        format!("branches {} and {} share {:?}", i + 1, j + 1, common),
                    );
                }
            }
        }
        let first = &outcomes[&0];
        let mut next = st.clone();
        for v in shared {
            let s = &first.gamma[v];
            if outcomes.values().any(|o| o.gamma.get(v) != Some(s)) {
                return fail(
                    at,
                    WfReason::SortClash,
                    format!("branches disagree on the sort of `{v}`"),
                );
            }
            next.gamma.insert(v.clone(), s.clone());
        }
        for o in outcomes.values() {
            next.defined.extend(o.defined.iter().cloned());
            for (v, s) in o.all_sorts() {
                if !next.gamma.contains_key(&v) {
                    next.scoped.entry(v).or_insert(s);
                }
            }
        }
        Ok(vec![next])
    }

    fn budget_exceeded(&self, at: &BonePath, tuples: u128) -> WfFailure {
        WfFailure {
            bone: at.clone(),
            reason: WfReason::BranchCountBelowTwo,
            detail: format!("{tuples} outcome tuples"),
        }
    }
}

/// Initial environment: `x_s` at the input flow sort, parameters at the
/// constructor's argument sorts.
pub fn initial_state<C: Carriers>(
    lang: &Language<C>,
    skel: &Skeleton,
) -> Result<(WfState, Name), WfFailure> {
    let at = BonePath::default();
    let Some(sig) = lang.syntax.ctor_sig(&skel.ctor) else {
        return fail(
            &at,
            WfReason::SortClash,
            format!("`{}` undeclared", skel.ctor),
        );
    };
    if sig.args.len() != skel.params.len() {
        return fail(&at, WfReason::SortClash, "parameter count".into());
    }
    let (Some(i), Some(o)) = (
        lang.syntax.in_sort(&sig.result),
        lang.syntax.out_sort(&sig.result),
    ) else {
        return fail(&at, WfReason::SortClash, "no flow sorts".into());
    };
    let mut st = WfState::default();
    st.gamma.insert(Var::sigma(), i.clone());
    for (p, s) in skel.params.iter().zip(&sig.args) {
        st.gamma.insert(Var::Term(p.clone()), s.clone());
    }
    st.defined = st.gamma.keys().cloned().collect();
    if st.defined.len() != skel.params.len() + 1 {
        return fail(&at, WfReason::Redefinition, "duplicate parameter".into());
    }
    Ok((st, o.clone()))
}

pub fn check_skeleton<C: Carriers>(lang: &Language<C>, skel: &Skeleton) -> SkeletonVerdict {
    let result = (|| {
        let (st, out) = initial_state(lang, skel)?;
        let finals = interpret_body(&wf_rules(lang), &st, &skel.body)?;
        let end = BonePath(vec![skel.body.0.len() + 1]);
        let Some(fin) = finals.into_iter().next() else {
            return fail(&end, WfReason::UseBeforeDef, "no derivation".into());
        };
        match fin.gamma.get(&Var::out()) {
            Some(s) if *s == out => Ok(fin),
            Some(s) => fail(
                &end,
                WfReason::OutputSortMismatch,
                format!("x_o has sort {s}, expected {out}"),
            ),
            None => fail(
                &end,
                WfReason::OutputSortMismatch,
                "x_o is never defined".into(),
            ),
        }
    })();
    SkeletonVerdict {
        skeleton: skel.name.clone(),
        result,
    }
}

pub fn check_language<C: Carriers>(lang: &Language<C>, ex: Exec) -> WfReport {
    WfReport {
        verdicts: exec::map(ex, lang.skeletons(), |s| check_skeleton(lang, s)),
    }
}
