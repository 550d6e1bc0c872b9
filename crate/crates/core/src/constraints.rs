//! Flow-sensitive constraint generation over program points, a worklist
//! solver with widening, and the triple sets induced by its solutions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::marker::PhantomData;

use thiserror::Error;

use crate::absint::{check_invariant, AbsError, AbstractTriple};
use crate::exec::Exec;
use crate::interp::{interpret_body, Interpretation};
use crate::language::{ASlot, ATerm, AbstractOutput, Carriers, LangError, Language, SortKind};
use crate::skeleton::{BonePath, Skeleton, Var};
use crate::term::{substitute, subterm_at, term_vars, Name, ProgramPoint, Term};
use crate::wf;

/// `pp#x`: skeletal variable `x` of the skeleton instance at `pp`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstraintVar {
    pub pp: ProgramPoint,
    pub var: Name,
}

impl ConstraintVar {
    pub fn new(pp: &ProgramPoint, var: &Var) -> Self {
        ConstraintVar {
            pp: pp.clone(),
            var: var.name().clone(),
        }
    }
}

/// Primes print as `p`, so `f1'` at the root is `r#f1p`.
impl fmt::Display for ConstraintVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.pp, self.var.replace('\'', "p"))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Constraint<A> {
    Eq(ConstraintVar, ConstraintVar),
    Leq(ConstraintVar, ConstraintVar),
    SortIs(ConstraintVar, Name),
    EqTerm(ConstraintVar, Term),
    FilterApp {
        filter: Name,
        inputs: Vec<ConstraintVar>,
        outputs: Vec<ConstraintVar>,
    },
    /// Boundary condition `a ⊑ x`.
    Above(A, ConstraintVar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet<A> {
    pub constraints: BTreeSet<Constraint<A>>,
    /// Variables defined by the skeleton instance at each point.
    pub dfvar: BTreeMap<ProgramPoint, BTreeSet<Var>>,
}

impl<A: Ord + Clone> ConstraintSet<A> {
    /// Declared sort of every variable.
    pub fn vars(&self) -> BTreeMap<ConstraintVar, Name> {
        self.constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::SortIs(v, s) => Some((v.clone(), s.clone())),
                _ => None,
            })
            .collect()
    }

    /// Adds the boundary condition `state ⊑ r#x_s`.
    pub fn seed(&mut self, state: A) {
        self.constraints.insert(Constraint::Above(
            state,
            ConstraintVar::new(&ProgramPoint::root(), &Var::sigma()),
        ));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("hook term `{term}` at {pp} does not occur at any generated point")]
    UndefinedHookPoint { pp: ProgramPoint, term: Term },
    #[error("at {pp}: {detail}")]
    DfvarViolation { pp: ProgramPoint, detail: String },
    #[error("ill-sorted program: {0}")]
    IllSortedQuery(String),
    #[error("solution violates {0}")]
    SolutionCheckFailed(String),
    #[error("{failures} induced triple(s) fail the invariant check")]
    InvariantCheckFailed { failures: usize },
    #[error(transparent)]
    Abs(#[from] AbsError),
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// Points of `t0` holding program-sorted constructor applications.
pub fn gen_points<C: Carriers>(lang: &Language<C>, t0: &Term) -> BTreeSet<ProgramPoint> {
    fn go<C: Carriers>(
        lang: &Language<C>,
        t: &Term,
        pp: ProgramPoint,
        acc: &mut BTreeSet<ProgramPoint>,
    ) {
        let Term::Ctor(_, args) = t else { return };
        let program = lang
            .syntax
            .sort_of_closed(t)
            .is_ok_and(|s| lang.syntax.kind(&s) == Some(SortKind::Program));
        if program {
            acc.insert(pp.clone());
        }
        for (i, a) in args.iter().enumerate() {
            go(lang, a, pp.child(i as u32 + 1), acc);
        }
    }
    let mut acc = BTreeSet::new();
    go(lang, t0, ProgramPoint::root(), &mut acc);
    acc
}

fn instance_env(skel: &Skeleton, t: &Term) -> BTreeMap<Name, Term> {
    skel.params
        .iter()
        .cloned()
        .zip(t.args().iter().cloned())
        .collect()
}

/// Point of the subterm a hook of the skeleton instance at `pp` evaluates.
pub fn hook_point(
    pp: &ProgramPoint,
    skel: &Skeleton,
    hook_term: &Term,
    t0: &Term,
    points: &BTreeSet<ProgramPoint>,
) -> Result<ProgramPoint, ConstraintError> {
    let undefined = || ConstraintError::UndefinedHookPoint {
        pp: pp.clone(),
        term: hook_term.clone(),
    };
    if let Term::Var(v) = hook_term {
        if let Some(i) = skel.params.iter().position(|p| p == v) {
            let q = pp.child(i as u32 + 1);
            return if points.contains(&q) {
                Ok(q)
            } else {
                Err(undefined())
            };
        }
    }
    let here = subterm_at(t0, pp).map_err(|_| undefined())?;
    let target = substitute(&instance_env(skel, here), hook_term).map_err(|_| undefined())?;
    if &target == here {
        return Ok(pp.clone());
    }
    points
        .iter()
        .find(|q| subterm_at(t0, q).is_ok_and(|s| *s == target))
        .cloned()
        .ok_or_else(undefined)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct GenState<A> {
    defined: BTreeSet<Var>,
    cs: BTreeSet<Constraint<A>>,
}

struct GenRules<'a, A> {
    marker: PhantomData<A>,
    pp: &'a ProgramPoint,
    skel: &'a Skeleton,
    t0: &'a Term,
    points: &'a BTreeSet<ProgramPoint>,
}

impl<A> GenRules<'_, A> {
    fn cv(&self, v: &Var) -> ConstraintVar {
        ConstraintVar::new(self.pp, v)
    }

    fn violation<T>(&self, detail: String) -> Result<T, ConstraintError> {
        Err(ConstraintError::DfvarViolation {
            pp: self.pp.clone(),
            detail,
        })
    }

    fn need(&self, st: &BTreeSet<Var>, v: &Var) -> Result<(), ConstraintError> {
        if st.contains(v) {
            Ok(())
        } else {
            self.violation(format!("`{v}` used before definition"))
        }
    }
}

impl<A: Clone + Ord> Interpretation for GenRules<'_, A> {
    type State = GenState<A>;
    type Error = ConstraintError;

    fn hook(
        &self,
        _at: &BonePath,
        st: &GenState<A>,
        input: &Name,
        term: &Term,
        output: &Name,
    ) -> Result<Vec<GenState<A>>, ConstraintError> {
        let x1 = Var::Flow(input.clone());
        let x2 = Var::Flow(output.clone());
        self.need(&st.defined, &x1)?;
        for v in term_vars(term) {
            self.need(&st.defined, &Var::Term(v))?;
        }
        if st.defined.contains(&x2) {
            return self.violation(format!("`{x2}` defined twice"));
        }
        let q = hook_point(self.pp, self.skel, term, self.t0, self.points)?;
        let mut next = st.clone();
        next.cs.insert(Constraint::Leq(
            self.cv(&x1),
            ConstraintVar::new(&q, &Var::sigma()),
        ));
        next.cs.insert(Constraint::Leq(
            ConstraintVar::new(&q, &Var::out()),
            self.cv(&x2),
        ));
        next.defined.insert(x2);
        Ok(vec![next])
    }

    fn filter(
        &self,
        _at: &BonePath,
        st: &GenState<A>,
        name: &Name,
        inputs: &[Var],
        outputs: &[Var],
    ) -> Result<Vec<GenState<A>>, ConstraintError> {
        for x in inputs {
            self.need(&st.defined, x)?;
        }
        if let Some(y) = outputs.iter().find(|y| st.defined.contains(*y)) {
            return self.violation(format!("`{y}` defined twice"));
        }
        let mut next = st.clone();
        next.cs.insert(Constraint::FilterApp {
            filter: name.clone(),
            inputs: inputs.iter().map(|x| self.cv(x)).collect(),
            outputs: outputs.iter().map(|y| self.cv(y)).collect(),
        });
        next.defined.extend(outputs.iter().cloned());
        Ok(vec![next])
    }

    fn merge(
        &self,
        _at: &BonePath,
        shared: &BTreeSet<Var>,
        n: usize,
        outcomes: &BTreeMap<usize, GenState<A>>,
        st: &GenState<A>,
    ) -> Result<Vec<GenState<A>>, ConstraintError> {
        if outcomes.len() != n {
            return self.violation("a branch produced no constraints".into());
        }
        let mut next = st.clone();
        for o in outcomes.values() {
            if let Some(v) = shared.iter().find(|v| !o.defined.contains(*v)) {
                return self.violation(format!("a branch leaves `{v}` undefined"));
            }
            next.cs.extend(o.cs.iter().cloned());
        }
        next.defined.extend(shared.iter().cloned());
        Ok(vec![next])
    }

    fn budget_exceeded(&self, _at: &BonePath, tuples: u128) -> ConstraintError {
        ConstraintError::DfvarViolation {
            pp: self.pp.clone(),
            detail: format!("{tuples} branch outcome tuples"),
        }
    }
}

/// Constraints of every skeleton instance of `t0`.
pub fn generate<C: Carriers>(
    lang: &Language<C>,
    t0: &Term,
) -> Result<ConstraintSet<C::Abs>, ConstraintError> {
    let s = lang
        .check_closed(t0)
        .map_err(|e| ConstraintError::IllSortedQuery(e.to_string()))?;
    if lang.syntax.kind(&s) != Some(SortKind::Program) {
        return Err(ConstraintError::IllSortedQuery(format!(
            "`{t0}` has sort {s}"
        )));
    }
    let points = gen_points(lang, t0);
    let mut set = ConstraintSet {
        constraints: BTreeSet::new(),
        dfvar: BTreeMap::new(),
    };
    for pp in &points {
        let here =
            subterm_at(t0, pp).map_err(|e| ConstraintError::IllSortedQuery(e.to_string()))?;
        let skel = lang.skeleton(
            here.head()
                .expect("generated points are constructor-headed"),
        )?;
        let gamma = match wf::check_skeleton(lang, skel).result {
            Ok(g) => g.all_sorts(),
            Err(e) => {
                return Err(ConstraintError::DfvarViolation {
                    pp: pp.clone(),
                    detail: format!("skeleton {} is ill formed: {}", skel.name, e.detail),
                })
            }
        };
        for (v, sort) in &gamma {
            set.constraints
                .insert(Constraint::SortIs(ConstraintVar::new(pp, v), sort.clone()));
        }
        for (p, a) in skel.params.iter().zip(here.args()) {
            set.constraints.insert(Constraint::EqTerm(
                ConstraintVar::new(pp, &Var::Term(p.clone())),
                a.clone(),
            ));
        }
        let rules = GenRules {
            marker: PhantomData,
            pp,
            skel,
            t0,
            points: &points,
        };
        let mut init = GenState::<C::Abs> {
            defined: BTreeSet::new(),
            cs: BTreeSet::new(),
        };
        init.defined.insert(Var::sigma());
        init.defined
            .extend(skel.params.iter().map(|p| Var::Term(p.clone())));
        let finals = interpret_body(&rules, &init, &skel.body)?;
        let fin = finals
            .into_iter()
            .next()
            .ok_or_else(|| ConstraintError::DfvarViolation {
                pp: pp.clone(),
                detail: "no constraint derivation".into(),
            })?;
        if !fin.defined.contains(&Var::out()) {
            return Err(ConstraintError::DfvarViolation {
                pp: pp.clone(),
                detail: "x_o is never defined".into(),
            });
        }
        set.constraints.extend(fin.cs);
        set.dfvar.insert(pp.clone(), fin.defined);
    }
    Ok(set)
}

/// Assignment of constraint variables to abstract values or terms.
pub type Solution<A> = BTreeMap<ConstraintVar, ASlot<A>>;

fn slot_leq<C: Carriers>(a: &ASlot<C::Abs>, b: &ASlot<C::Abs>) -> bool {
    match (a, b) {
        (ASlot::Flow(x), ASlot::Flow(y)) => C::leq(x, y),
        (ASlot::Term(x), ASlot::Term(y)) => x.leq(y),
        _ => false,
    }
}

fn apply_filter<C: Carriers>(
    lang: &Language<C>,
    sol: &Solution<C::Abs>,
    filter: &Name,
    inputs: &[ConstraintVar],
) -> Result<AbstractOutput<C::Abs>, ConstraintError> {
    let f = lang.abstract_filter(filter)?;
    let args = inputs
        .iter()
        .map(|x| {
            sol.get(x)
                .cloned()
                .ok_or_else(|| ConstraintError::SolutionCheckFailed(format!("`{x}` is unassigned")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(f(&args))
}

struct Solver<C: Carriers> {
    widen_after: usize,
    sol: Solution<C::Abs>,
    updates: BTreeMap<ConstraintVar, usize>,
}

impl<C: Carriers> Solver<C> {
    /// Raises `x` to include `new`; true if the value changed.
    fn raise(&mut self, x: &ConstraintVar, new: &ASlot<C::Abs>) -> Result<bool, ConstraintError> {
        let old = self
            .sol
            .get(x)
            .ok_or_else(|| ConstraintError::SolutionCheckFailed(format!("`{x}` is undeclared")))?;
        if slot_leq::<C>(new, old) {
            return Ok(false);
        }
        let next = match (old, new) {
            (ASlot::Flow(o), ASlot::Flow(n)) => {
                let count = self.updates.entry(x.clone()).or_default();
                *count += 1;
                let j = C::join(o, n);
                if *count > self.widen_after {
                    ASlot::Flow(C::widen(o, &j))
                } else {
                    ASlot::Flow(j)
                }
            }
            (ASlot::Term(ATerm::Bot(_)), ASlot::Term(_)) => new.clone(),
            _ => {
                return Err(ConstraintError::SolutionCheckFailed(format!(
                    "`{x}` would need two different terms"
                )))
            }
        };
        self.sol.insert(x.clone(), next);
        Ok(true)
    }
}

/// Chaotic worklist iteration from bottoms; joins switch to widening after
/// `widen_after` updates of a variable. The result is verified before it is
/// returned.
pub fn solve<C: Carriers>(
    lang: &Language<C>,
    cs: &ConstraintSet<C::Abs>,
    widen_after: usize,
) -> Result<Solution<C::Abs>, ConstraintError> {
    let mut solver = Solver::<C> {
        widen_after,
        sol: Solution::new(),
        updates: BTreeMap::new(),
    };
    let terms: BTreeMap<&ConstraintVar, &Term> = cs
        .constraints
        .iter()
        .filter_map(|c| match c {
            Constraint::EqTerm(v, t) => Some((v, t)),
            _ => None,
        })
        .collect();
    for (v, sort) in cs.vars() {
        let slot = match lang.syntax.kind(&sort) {
            Some(SortKind::Flow) => {
                ASlot::Flow(C::bottom(&sort).ok_or_else(|| AbsError::NoBottom(sort.clone()))?)
            }
            _ => match terms.get(&v) {
                Some(t) => ASlot::Term(ATerm::Term((*t).clone())),
                None => ASlot::Term(ATerm::Bot(sort.clone())),
            },
        };
        solver.sol.insert(v, slot);
    }
    let list: Vec<&Constraint<C::Abs>> = cs.constraints.iter().collect();
    let mut deps: BTreeMap<&ConstraintVar, Vec<usize>> = BTreeMap::new();
    for (i, c) in list.iter().enumerate() {
        let reads: Vec<&ConstraintVar> = match c {
            Constraint::Eq(a, b) => vec![a, b],
            Constraint::Leq(a, _) => vec![a],
            Constraint::FilterApp { inputs, .. } => inputs.iter().collect(),
            _ => Vec::new(),
        };
        for r in reads {
            deps.entry(r).or_default().push(i);
        }
    }
    let mut queue: VecDeque<usize> = (0..list.len()).collect();
    let mut queued = vec![true; list.len()];
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        let mut changed: Vec<ConstraintVar> = Vec::new();
        match list[i] {
            Constraint::Leq(a, b) => {
                let v = solver.sol[a].clone();
                if solver.raise(b, &v)? {
                    changed.push(b.clone());
                }
            }
            Constraint::Eq(a, b) => {
                let va = solver.sol[a].clone();
                if solver.raise(b, &va)? {
                    changed.push(b.clone());
                }
                let vb = solver.sol[b].clone();
                if solver.raise(a, &vb)? {
                    changed.push(a.clone());
                }
            }
            Constraint::FilterApp {
                filter,
                inputs,
                outputs,
            } => {
                if let AbstractOutput::Values(vs) = apply_filter(lang, &solver.sol, filter, inputs)?
                {
                    if vs.len() != outputs.len() {
                        return Err(ConstraintError::SolutionCheckFailed(format!(
                            "`{filter}` returned {} values",
                            vs.len()
                        )));
                    }
                    for (y, v) in outputs.iter().zip(vs) {
                        if solver.raise(y, &ASlot::Flow(v))? {
                            changed.push(y.clone());
                        }
                    }
                }
            }
            Constraint::Above(a, x) => {
                if solver.raise(x, &ASlot::Flow(a.clone()))? {
                    changed.push(x.clone());
                }
            }
            Constraint::SortIs(..) | Constraint::EqTerm(..) => {}
        }
        for x in changed {
            for &j in deps.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    let sol = solver.sol;
    verify(lang, cs, &sol)?;
    Ok(sol)
}

/// Checks every constraint against `sol`.
pub fn verify<C: Carriers>(
    lang: &Language<C>,
    cs: &ConstraintSet<C::Abs>,
    sol: &Solution<C::Abs>,
) -> Result<(), ConstraintError> {
    let get = |x: &ConstraintVar| {
        sol.get(x)
            .ok_or_else(|| ConstraintError::SolutionCheckFailed(format!("`{x}` is unassigned")))
    };
    let fail = |what: String| Err(ConstraintError::SolutionCheckFailed(what));
    for c in &cs.constraints {
        match c {
            Constraint::Eq(a, b) if get(a)? != get(b)? => return fail(format!("{a} = {b}")),
            Constraint::Leq(a, b) if !slot_leq::<C>(get(a)?, get(b)?) => {
                return fail(format!("{a} <= {b}"))
            }
            Constraint::SortIs(x, s) => {
                let ok = match get(x)? {
                    ASlot::Flow(v) => C::abs_inhabits(v, s),
                    ASlot::Term(ATerm::Term(t)) => {
                        lang.syntax.sort_of_closed(t).ok().as_ref() == Some(s)
                    }
                    ASlot::Term(ATerm::Bot(b)) => b == s,
                };
                if !ok {
                    return fail(format!("{x} : {s}"));
                }
            }
            Constraint::EqTerm(x, t) if get(x)? != &ASlot::Term(ATerm::Term(t.clone())) => {
                return fail(format!("{x} = {t}"))
            }
            Constraint::FilterApp {
                filter,
                inputs,
                outputs,
            } => {
                if let AbstractOutput::Values(vs) = apply_filter(lang, sol, filter, inputs)? {
                    let ok = vs.len() == outputs.len()
                        && outputs.iter().zip(&vs).all(|(y, v)| {
                            get(y).is_ok_and(|s| slot_leq::<C>(&ASlot::Flow(v.clone()), s))
                        });
                    if !ok {
                        return fail(format!("{filter} on {inputs:?}"));
                    }
                }
            }
            Constraint::Above(a, x) if !slot_leq::<C>(&ASlot::Flow(a.clone()), get(x)?) => {
                return fail(format!("seed <= {x}"))
            }
            _ => {}
        }
    }
    Ok(())
}

/// `{(S(pp#x_s), t0@pp, S(pp#x_o))}` over the generated points, attested by
/// the invariant check.
pub fn solution_to_triples<C: Carriers>(
    lang: &Language<C>,
    t0: &Term,
    sol: &Solution<C::Abs>,
    ex: Exec,
) -> Result<Vec<AbstractTriple<C::Abs>>, ConstraintError> {
    let mut out = BTreeSet::new();
    for pp in gen_points(lang, t0) {
        let flow = |v: Var| -> Result<C::Abs, ConstraintError> {
            let x = ConstraintVar::new(&pp, &v);
            match sol.get(&x) {
                Some(ASlot::Flow(a)) => Ok(a.clone()),
                _ => Err(ConstraintError::SolutionCheckFailed(format!(
                    "`{x}` is unassigned"
                ))),
            }
        };
        let t = subterm_at(t0, &pp).map_err(|e| ConstraintError::IllSortedQuery(e.to_string()))?;
        out.insert(AbstractTriple::new(
            flow(Var::sigma())?,
            t.clone(),
            flow(Var::out())?,
        ));
    }
    let triples: Vec<_> = out.into_iter().collect();
    let report = check_invariant(lang, &triples, false, ex)?;
    if !report.passed() {
        return Err(ConstraintError::InvariantCheckFailed {
            failures: report.failures.len(),
        });
    }
    Ok(triples)
}

pub type Analysis<A> = (Vec<AbstractTriple<A>>, Solution<A>);

/// Generates, seeds, solves and converts in one go. Returns the triple set
/// and the solution.
pub fn analyze<C: Carriers>(
    lang: &Language<C>,
    t0: &Term,
    seed: C::Abs,
    widen_after: usize,
    ex: Exec,
) -> Result<Analysis<C::Abs>, ConstraintError> {
    let mut cs = generate(lang, t0)?;
    cs.seed(seed);
    let sol = solve(lang, &cs, widen_after)?;
    let triples = solution_to_triples(lang, t0, &sol, ex)?;
    Ok((triples, sol))
}
