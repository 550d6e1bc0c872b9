//! Abstract interpretation over flagged environments, its immediate
//! consequence operator on finite hypothesis sets, and the triple-set checker.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exec::{self, Exec};
use crate::interp::{interpret_body, Interpretation};
use crate::language::{ASlot, ATerm, AbstractOutput, Carriers, LangError, Language, SortKind};
use crate::skeleton::{BonePath, Var};
use crate::split::{split_candidates, AbsIndex};
use crate::term::{substitute_with, term_vars, Name, Term};

pub use crate::split::AbstractTriple;

/// `Bot` marks a derivation in which the skeleton does not apply.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Flag {
    Bot,
    Top,
}

pub type AEnv<A> = BTreeMap<Var, ASlot<A>>;

/// How hooks and filters pick their results under a `Top` flag.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    /// Exactly the immediate consequences of the hypotheses.
    #[default]
    Minimal,
    /// Derivation search: hooks keep only the least matching results and
    /// filters returning bottom may also continue with bottom outputs.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbsError {
    #[error("ill-sorted environment at bone {at}: {detail}")]
    IllSortedEnv { at: BonePath, detail: String },
    #[error("ill-sorted query: {0}")]
    IllSortedQuery(String),
    #[error("{tuples} branch outcome tuples at bone {at} exceed the cap")]
    BudgetExceeded { at: BonePath, tuples: u128 },
    #[error("sort `{0}` has no bottom element")]
    NoBottom(Name),
    #[error("cover check for `{0}` is outside the supported fragment")]
    CoverCheckUnsupported(Term),
    #[error(transparent)]
    Lang(#[from] LangError),
}

fn ill<T>(at: &BonePath, detail: String) -> Result<T, AbsError> {
    Err(AbsError::IllSortedEnv {
        at: at.clone(),
        detail,
    })
}

pub struct AbstractRules<'a, C: Carriers> {
    lang: &'a Language<C>,
    hyps: &'a AbsIndex<C::Abs>,
    mode: Mode,
    split: bool,
    unsupported: Cell<usize>,
}

impl<'a, C: Carriers> AbstractRules<'a, C> {
    pub fn new(lang: &'a Language<C>, hyps: &'a AbsIndex<C::Abs>, mode: Mode, split: bool) -> Self {
        AbstractRules {
            lang,
            hyps,
            mode,
            split,
            unsupported: Cell::new(0),
        }
    }

    /// Hook lookups whose cover test was outside the decidable fragment.
    pub fn unsupported_covers(&self) -> usize {
        self.unsupported.get()
    }

    fn bottom(&self, sort: &Name) -> Result<C::Abs, AbsError> {
        C::bottom(sort).ok_or_else(|| AbsError::NoBottom(sort.clone()))
    }

    /// Sort of `t` and, when no parameter is bottom, its closed form.
    fn close(
        &self,
        at: &BonePath,
        env: &AEnv<C::Abs>,
        t: &Term,
    ) -> Result<(Name, Option<Term>), AbsError> {
        let syn = &self.lang.syntax;
        let mut gamma = BTreeMap::new();
        let mut has_bot = false;
        for v in term_vars(t) {
            match env.get(&Var::Term(v.clone())) {
                Some(ASlot::Term(ATerm::Term(u))) => {
                    let s = syn.sort_of_closed(u).or_else(|e| ill(at, e.to_string()))?;
                    gamma.insert(v, s);
                }
                Some(ASlot::Term(ATerm::Bot(s))) => {
                    has_bot = true;
                    gamma.insert(v, s.clone());
                }
                _ => return ill(at, format!("term variable `{v}` unbound")),
            }
        }
        let sort = syn.sort_of(&gamma, t).or_else(|e| ill(at, e.to_string()))?;
        if has_bot {
            return Ok((sort, None));
        }
        let closed = substitute_with(
            &|v: &Name| {
                env.get(&Var::Term(v.clone()))
                    .and_then(|s| s.as_term().cloned())
            },
            t,
        )
        .or_else(|e| ill(at, e.to_string()))?;
        Ok((sort, Some(closed)))
    }

    fn candidates(&self, sigma: &C::Abs, sort: &Name, term: Option<&Term>) -> Vec<C::Abs> {
        let terms: Vec<&Term> = match term {
            Some(t) => vec![t],
            // a bottom term is below every term of its sort
            None => self
                .hyps
                .terms()
                .filter(|u| self.lang.syntax.sort_of_closed(u).ok().as_ref() == Some(sort))
                .collect(),
        };
        let mut out: Vec<C::Abs> = Vec::new();
        for t in terms {
            if self.split {
                let (found, unsupported) = split_candidates::<C>(self.hyps, sigma, t);
                self.unsupported.set(self.unsupported.get() + unsupported);
                out.extend(found);
            } else if let Some(groups) = self.hyps.groups(t) {
                for (result, states) in groups {
                    if states.iter().any(|s| C::leq(sigma, s)) {
                        out.push(result.clone());
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        if self.mode == Mode::Search {
            let all = out.clone();
            out.retain(|v| !all.iter().any(|w| w != v && C::leq(w, v)));
        }
        out
    }

    fn bind_bottoms(
        &self,
        env: &AEnv<C::Abs>,
        outputs: &[Var],
        sorts: &[Name],
    ) -> Result<AEnv<C::Abs>, AbsError> {
        let mut e = env.clone();
        for (y, s) in outputs.iter().zip(sorts) {
            e.insert(y.clone(), ASlot::Flow(self.bottom(s)?));
        }
        Ok(e)
    }
}

fn join_slot<C: Carriers>(a: &ASlot<C::Abs>, b: &ASlot<C::Abs>) -> Option<ASlot<C::Abs>> {
    match (a, b) {
        (ASlot::Flow(x), ASlot::Flow(y)) => Some(ASlot::Flow(C::join(x, y))),
        (ASlot::Term(x), ASlot::Term(y)) if x.leq(y) => Some(b.clone()),
        (ASlot::Term(x), ASlot::Term(y)) if y.leq(x) => Some(a.clone()),
        _ => None,
    }
}

/// Pointwise join of `envs` on `shared`; `None` if two terms disagree.
fn join_on<C: Carriers>(
    shared: &BTreeSet<Var>,
    envs: &[&AEnv<C::Abs>],
) -> Option<Vec<(Var, ASlot<C::Abs>)>> {
    let mut out = Vec::with_capacity(shared.len());
    for v in shared {
        let mut acc = envs.first()?.get(v)?.clone();
        for e in &envs[1..] {
            acc = join_slot::<C>(&acc, e.get(v)?)?;
        }
        out.push((v.clone(), acc));
    }
    Some(out)
}

impl<C: Carriers> Interpretation for AbstractRules<'_, C> {
    type State = (Flag, AEnv<C::Abs>);
    type Error = AbsError;

    fn hook(
        &self,
        at: &BonePath,
        (flag, env): &Self::State,
        input: &Name,
        term: &Term,
        output: &Name,
    ) -> Result<Vec<Self::State>, AbsError> {
        let Some(ASlot::Flow(sigma)) = env.get(&Var::Flow(input.clone())) else {
            return ill(at, format!("`{input}` unbound"));
        };
        let (sort, closed) = self.close(at, env, term)?;
        let out_sort = match self.lang.syntax.out_sort(&sort) {
            Some(s) => s.clone(),
            None => return ill(at, format!("`{term}` has no flow sorts")),
        };
        let x2 = Var::Flow(output.clone());
        let bind = |v: C::Abs| {
            let mut e = env.clone();
            e.insert(x2.clone(), ASlot::Flow(v));
            e
        };
        if *flag == Flag::Bot {
            return Ok(vec![(Flag::Bot, bind(self.bottom(&out_sort)?))]);
        }
        let mut out = Vec::new();
        for v in self.candidates(sigma, &sort, closed.as_ref()) {
            if C::is_bottom(&v) {
                out.push((Flag::Bot, bind(v.clone())));
            }
            out.push((Flag::Top, bind(v)));
        }
        Ok(out)
    }

    fn filter(
        &self,
        at: &BonePath,
        (flag, env): &Self::State,
        name: &Name,
        inputs: &[Var],
        outputs: &[Var],
    ) -> Result<Vec<Self::State>, AbsError> {
        let sig = self.lang.filter_sig(name)?;
        if sig.outputs.len() != outputs.len() {
            return ill(at, format!("`{name}` arity"));
        }
        let bottoms = self.bind_bottoms(env, outputs, &sig.outputs)?;
        if *flag == Flag::Bot {
            return Ok(vec![(Flag::Bot, bottoms)]);
        }
        let f = self.lang.abstract_filter(name)?;
        let mut args = Vec::with_capacity(inputs.len());
        for x in inputs {
            match env.get(x) {
                Some(s) => args.push(s.clone()),
                None => return ill(at, format!("`{x}` unbound")),
            }
        }
        match f(&args) {
            AbstractOutput::Bottom => {
                let mut out = vec![(Flag::Bot, bottoms.clone())];
                if self.mode == Mode::Search {
                    out.push((Flag::Top, bottoms));
                }
                Ok(out)
            }
            AbstractOutput::Values(vs) => {
                if vs.len() != outputs.len() {
                    return ill(at, format!("`{name}` returned {} values", vs.len()));
                }
                let all_bottom = !vs.is_empty() && vs.iter().all(C::is_bottom);
                let mut e = env.clone();
                for (y, v) in outputs.iter().zip(vs) {
                    e.insert(y.clone(), ASlot::Flow(v));
                }
                if all_bottom {
                    let mut out = vec![(Flag::Bot, e.clone())];
                    if self.mode == Mode::Search {
                        out.push((Flag::Top, e));
                    }
                    Ok(out)
                } else {
                    Ok(vec![(Flag::Top, e)])
                }
            }
        }
    }

    fn merge(
        &self,
        _at: &BonePath,
        shared: &BTreeSet<Var>,
        n: usize,
        outcomes: &BTreeMap<usize, Self::State>,
        (_, env): &Self::State,
    ) -> Result<Vec<Self::State>, AbsError> {
        if outcomes.len() != n {
            return Ok(Vec::new());
        }
        let tops: Vec<&AEnv<C::Abs>> = outcomes
            .values()
            .filter(|(f, _)| *f == Flag::Top)
            .map(|(_, e)| e)
            .collect();
        let (flag, envs) = if tops.is_empty() {
            (Flag::Bot, outcomes.values().map(|(_, e)| e).collect())
        } else {
            (Flag::Top, tops)
        };
        let Some(joined) = join_on::<C>(shared, &envs) else {
            return Ok(Vec::new());
        };
        let mut e = env.clone();
        e.extend(joined);
        Ok(vec![(flag, e)])
    }

    fn budget_exceeded(&self, at: &BonePath, tuples: u128) -> AbsError {
        AbsError::BudgetExceeded {
            at: at.clone(),
            tuples,
        }
    }
}

/// Checks that `t` is a closed program term and returns its (in, out) sorts.
pub fn check_abstract_query<C: Carriers>(
    lang: &Language<C>,
    sigma: &C::Abs,
    t: &Term,
) -> Result<(Name, Name), AbsError> {
    let s = lang
        .check_closed(t)
        .map_err(|e| AbsError::IllSortedQuery(e.to_string()))?;
    if lang.syntax.kind(&s) != Some(SortKind::Program) {
        return Err(AbsError::IllSortedQuery(format!("`{t}` has base sort {s}")));
    }
    let (Some(i), Some(o)) = (lang.syntax.in_sort(&s), lang.syntax.out_sort(&s)) else {
        return Err(AbsError::IllSortedQuery(format!("no flow sorts for {s}")));
    };
    if !C::abs_inhabits(sigma, i) {
        return Err(AbsError::IllSortedQuery(format!("state is not a {i}")));
    }
    Ok((i.clone(), o.clone()))
}

/// Every (final flag, result) derivable for `(sigma, t)` under `rules`.
pub fn derive<C: Carriers>(
    rules: &AbstractRules<'_, C>,
    sigma: &C::Abs,
    t: &Term,
) -> Result<BTreeSet<(Flag, C::Abs)>, AbsError> {
    let lang = rules.lang;
    check_abstract_query(lang, sigma, t)?;
    let Term::Ctor(c, args) = t else {
        return Err(AbsError::IllSortedQuery(format!(
            "`{t}` is not a constructor term"
        )));
    };
    let skel = lang.skeleton(c)?;
    let mut env = AEnv::new();
    env.insert(Var::sigma(), ASlot::Flow(sigma.clone()));
    for (p, a) in skel.params.iter().zip(args.iter()) {
        env.insert(Var::Term(p.clone()), ASlot::Term(ATerm::Term(a.clone())));
    }
    let finals = interpret_body(rules, &(Flag::Top, env), &skel.body)?;
    Ok(finals
        .into_iter()
        .filter_map(|(f, e)| match e.get(&Var::out()) {
            Some(ASlot::Flow(v)) => Some((f, v.clone())),
            _ => None,
        })
        .collect())
}

/// `A♯(hyps)` restricted to the given queries. Results of runs ending with
/// either flag are collected.
pub fn abstract_immediate_consequence_on<C: Carriers>(
    lang: &Language<C>,
    queries: &[(C::Abs, Term)],
    hyps: &[AbstractTriple<C::Abs>],
) -> Result<BTreeSet<AbstractTriple<C::Abs>>, AbsError> {
    let index = AbsIndex::new(hyps);
    let rules = AbstractRules::new(lang, &index, Mode::Minimal, false);
    let mut out = BTreeSet::new();
    for (sigma, t) in queries {
        for (_, v) in derive(&rules, sigma, t)? {
            out.insert(AbstractTriple::new(sigma.clone(), t.clone(), v));
        }
    }
    Ok(out)
}

/// Like [`abstract_immediate_consequence_on`] with hooks resolved through
/// the state-splitting closure of `hyps`.
pub fn abstract_immediate_consequence_split<C: Carriers>(
    lang: &Language<C>,
    queries: &[(C::Abs, Term)],
    hyps: &[AbstractTriple<C::Abs>],
) -> Result<BTreeSet<AbstractTriple<C::Abs>>, AbsError> {
    let index = AbsIndex::new(hyps);
    let rules = AbstractRules::new(lang, &index, Mode::Minimal, true);
    let mut out = BTreeSet::new();
    for (sigma, t) in queries {
        for (_, v) in derive(&rules, sigma, t)? {
            out.insert(AbstractTriple::new(sigma.clone(), t.clone(), v));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport<A> {
    pub checked: usize,
    pub failures: Vec<AbstractTriple<A>>,
    /// Hook lookups whose cover test fell outside the decidable fragment and
    /// were treated as not covered.
    pub unsupported_covers: usize,
}

impl<A> CheckReport<A> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn derivable<C: Carriers>(
    rules: &AbstractRules<'_, C>,
    t: &AbstractTriple<C::Abs>,
) -> Result<bool, AbsError> {
    Ok(derive(rules, &t.state, &t.term)?
        .iter()
        .any(|(f, w)| match f {
            Flag::Top => C::leq(w, &t.result),
            Flag::Bot => *w == t.result,
        }))
}

/// Checks `A ⊆ A♯(A)`, or `A ⊆ A♯(Sp(A))` with `use_splitting`. A passing
/// report makes every triple of `A` (resp. `Sp(A)`) correct.
pub fn check_invariant<C: Carriers>(
    lang: &Language<C>,
    triples: &[AbstractTriple<C::Abs>],
    use_splitting: bool,
    ex: Exec,
) -> Result<CheckReport<C::Abs>, AbsError> {
    for t in triples {
        let (_, o) = check_abstract_query(lang, &t.state, &t.term)?;
        if !C::abs_inhabits(&t.result, &o) {
            return Err(AbsError::IllSortedQuery(format!(
                "result of `{}` is not a {o}",
                t.term
            )));
        }
    }
    let index = AbsIndex::new(triples);
    let verdicts = exec::map(ex, triples, |t| {
        let rules = AbstractRules::new(lang, &index, Mode::Search, use_splitting);
        derivable(&rules, t).map(|ok| (ok, rules.unsupported_covers()))
    });
    let mut report = CheckReport {
        checked: triples.len(),
        failures: Vec::new(),
        unsupported_covers: 0,
    };
    for (t, v) in triples.iter().zip(verdicts) {
        let (ok, unsupported) = v?;
        report.unsupported_covers += unsupported;
        if !ok {
            report.failures.push(t.clone());
        }
    }
    Ok(report)
}

/// As [`check_invariant`], but any cover test outside the decidable fragment
/// is an error rather than a miss.
pub fn check_invariant_strict<C: Carriers>(
    lang: &Language<C>,
    triples: &[AbstractTriple<C::Abs>],
    use_splitting: bool,
    ex: Exec,
) -> Result<CheckReport<C::Abs>, AbsError> {
    let report = check_invariant(lang, triples, use_splitting, ex)?;
    if report.unsupported_covers > 0 {
        if let Some(t) = report.failures.first() {
            return Err(AbsError::CoverCheckUnsupported(t.term.clone()));
        }
    }
    Ok(report)
}
