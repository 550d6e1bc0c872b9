//! Language definitions: sorts, signatures, skeletons and the filter tables of
//! the concrete and abstract interpretations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::sync::Arc;

use thiserror::Error;

use crate::skeleton::{Body, Bone, Skeleton};
use crate::term::{name, Name, Term, TermError};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SortKind {
    Base,
    Program,
    Flow,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SortDecl {
    pub name: Name,
    pub kind: SortKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CtorSig {
    pub name: Name,
    pub args: Vec<Name>,
    pub result: Name,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FilterSig {
    pub name: Name,
    pub inputs: Vec<Name>,
    pub outputs: Vec<Name>,
}

/// Declarations are kept in order so duplicates stay visible to validation.
#[derive(Clone, Debug, Default)]
pub struct Syntax {
    pub sorts: Vec<SortDecl>,
    pub ctors: Vec<CtorSig>,
    pub filters: Vec<FilterSig>,
    /// program sort -> (input flow sort, output flow sort)
    pub flows: BTreeMap<Name, (Name, Name)>,
}

impl Syntax {
    pub fn sort(&mut self, n: &str, kind: SortKind) -> &mut Self {
        self.sorts.push(SortDecl {
            name: name(n),
            kind,
        });
        self
    }

    pub fn ctor(&mut self, n: &str, args: &[&str], result: &str) -> &mut Self {
        self.ctors.push(CtorSig {
            name: name(n),
            args: args.iter().map(|a| name(a)).collect(),
            result: name(result),
        });
        self
    }

    pub fn filter(&mut self, n: &str, inputs: &[&str], outputs: &[&str]) -> &mut Self {
        self.filters.push(FilterSig {
            name: name(n),
            inputs: inputs.iter().map(|a| name(a)).collect(),
            outputs: outputs.iter().map(|a| name(a)).collect(),
        });
        self
    }

    pub fn flow(&mut self, program: &str, input: &str, output: &str) -> &mut Self {
        self.flows
            .insert(name(program), (name(input), name(output)));
        self
    }

    pub fn kind(&self, sort: &str) -> Option<SortKind> {
        self.sorts.iter().find(|s| &*s.name == sort).map(|s| s.kind)
    }

    pub fn ctor_sig(&self, c: &str) -> Option<&CtorSig> {
        self.ctors.iter().find(|s| &*s.name == c)
    }

    pub fn filter_sig(&self, f: &str) -> Option<&FilterSig> {
        self.filters.iter().find(|s| &*s.name == f)
    }

    pub fn in_sort(&self, program: &str) -> Option<&Name> {
        self.flows.get(program).map(|p| &p.0)
    }

    pub fn out_sort(&self, program: &str) -> Option<&Name> {
        self.flows.get(program).map(|p| &p.1)
    }

    /// Sort of `t` under `gamma`, checking constructor signatures.
    pub fn sort_of(&self, gamma: &BTreeMap<Name, Name>, t: &Term) -> Result<Name, TermError> {
        match t {
            Term::Base(b) => Ok(b.sort.clone()),
            Term::Var(v) => gamma
                .get(v)
                .cloned()
                .ok_or_else(|| TermError::UnknownVariable(v.clone())),
            Term::Ctor(c, args) => {
                let sig = self
                    .ctor_sig(c)
                    .ok_or_else(|| TermError::UnknownConstructor(c.clone()))?;
                if sig.args.len() != args.len() {
                    return Err(TermError::ArityMismatch {
                        ctor: c.clone(),
                        expected: sig.args.len(),
                        found: args.len(),
                    });
                }
                for (i, (a, expected)) in args.iter().zip(&sig.args).enumerate() {
                    let found = self.sort_of(gamma, a)?;
                    if &found != expected {
                        return Err(TermError::SortMismatch {
                            position: i + 1,
                            expected: expected.clone(),
                            found,
                        });
                    }
                }
                Ok(sig.result.clone())
            }
        }
    }

    pub fn sort_of_closed(&self, t: &Term) -> Result<Name, TermError> {
        self.sort_of(&BTreeMap::new(), t)
    }
}

/// Verdict of a cover test `gamma(query) ⊆ ∪ gamma(parts)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cover {
    Covered,
    NotCovered,
    /// The query falls outside the fragment the domain can decide.
    Unsupported,
}

/// Concrete and abstract carriers of all flow sorts of a language.
pub trait Carriers: Send + Sync + 'static {
    type Value: Clone + Ord + Debug + Send + Sync;
    type Abs: Clone + Ord + Debug + Send + Sync;

    fn inhabits(v: &Self::Value, sort: &str) -> bool;
    fn abs_inhabits(a: &Self::Abs, sort: &str) -> bool;
    fn bottom(sort: &str) -> Option<Self::Abs>;
    fn is_bottom(a: &Self::Abs) -> bool;
    fn leq(a: &Self::Abs, b: &Self::Abs) -> bool;
    fn join(a: &Self::Abs, b: &Self::Abs) -> Self::Abs;
    fn widen(old: &Self::Abs, new: &Self::Abs) -> Self::Abs;
    /// Computable stand-in for `v ∈ γ(a)`.
    fn member(v: &Self::Value, a: &Self::Abs) -> bool;
    fn cover(query: &Self::Abs, parts: &[&Self::Abs]) -> Cover;
    fn base_term_ok(sort: &str, text: &str) -> bool;
}

/// Argument of a concrete filter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Slot<V> {
    Term(Term),
    Flow(V),
}

impl<V> Slot<V> {
    pub fn as_flow(&self) -> Option<&V> {
        match self {
            Slot::Flow(v) => Some(v),
            Slot::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Slot::Term(t) => Some(t),
            Slot::Flow(_) => None,
        }
    }
}

/// Abstract term: flat order with a least element per sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ATerm {
    Bot(Name),
    Term(Term),
}

impl ATerm {
    pub fn leq(&self, other: &ATerm) -> bool {
        match (self, other) {
            (ATerm::Bot(_), _) => true,
            (ATerm::Term(a), ATerm::Term(b)) => a == b,
            (ATerm::Term(_), ATerm::Bot(_)) => false,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ASlot<A> {
    Term(ATerm),
    Flow(A),
}

impl<A> ASlot<A> {
    pub fn as_flow(&self) -> Option<&A> {
        match self {
            ASlot::Flow(v) => Some(v),
            ASlot::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            ASlot::Term(ATerm::Term(t)) => Some(t),
            _ => None,
        }
    }
}

/// Result of an abstract filter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AbstractOutput<A> {
    /// The filter cannot apply.
    Bottom,
    Values(Vec<A>),
}

/// Concrete filter relation: every output tuple related to the inputs.
pub type ConcreteFilter<V> = Arc<dyn Fn(&[Slot<V>]) -> Vec<Vec<V>> + Send + Sync>;
pub type AbstractFilter<A> = Arc<dyn Fn(&[ASlot<A>]) -> AbstractOutput<A> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("no skeleton for constructor `{0}`")]
    UnknownConstructor(Name),
    #[error("filter `{0}` has no signature")]
    UnknownFilter(Name),
    #[error("filter `{0}` has no concrete implementation")]
    MissingConcreteFilter(Name),
    #[error("filter `{0}` has no abstract implementation")]
    MissingAbstractFilter(Name),
}

pub struct Language<C: Carriers> {
    pub name: String,
    pub syntax: Syntax,
    skeletons: Vec<Skeleton>,
    index: BTreeMap<Name, usize>,
    concrete: BTreeMap<Name, ConcreteFilter<C::Value>>,
    abstracts: BTreeMap<Name, AbstractFilter<C::Abs>>,
}

impl<C: Carriers> Clone for Language<C> {
    fn clone(&self) -> Self {
        Language {
            name: self.name.clone(),
            syntax: self.syntax.clone(),
            skeletons: self.skeletons.clone(),
            index: self.index.clone(),
            concrete: self.concrete.clone(),
            abstracts: self.abstracts.clone(),
        }
    }
}

impl<C: Carriers> Language<C> {
    pub fn new(lang_name: &str, syntax: Syntax) -> Self {
        Language {
            name: lang_name.to_string(),
            syntax,
            skeletons: Vec::new(),
            index: BTreeMap::new(),
            concrete: BTreeMap::new(),
            abstracts: BTreeMap::new(),
        }
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (i, s) in self.skeletons.iter().enumerate() {
            self.index.entry(s.ctor.clone()).or_insert(i);
        }
    }

    pub fn add_skeleton(&mut self, s: Skeleton) -> &mut Self {
        self.skeletons.push(s);
        self.reindex();
        self
    }

    /// Removes every skeleton for `ctor`, returning how many were removed.
    pub fn remove_skeleton(&mut self, ctor: &str) -> usize {
        let before = self.skeletons.len();
        self.skeletons.retain(|s| &*s.ctor != ctor);
        self.reindex();
        before - self.skeletons.len()
    }

    pub fn skeletons(&self) -> &[Skeleton] {
        &self.skeletons
    }

    pub fn skeletons_mut(&mut self) -> &mut Vec<Skeleton> {
        &mut self.skeletons
    }

    /// Call after mutating skeletons through [`Language::skeletons_mut`].
    pub fn refresh(&mut self) {
        self.reindex();
    }

    pub fn skeleton(&self, ctor: &str) -> Result<&Skeleton, LangError> {
        self.index
            .get(ctor)
            .map(|&i| &self.skeletons[i])
            .ok_or_else(|| LangError::UnknownConstructor(name(ctor)))
    }

    pub fn set_concrete_filter(
        &mut self,
        f: &str,
        imp: impl Fn(&[Slot<C::Value>]) -> Vec<Vec<C::Value>> + Send + Sync + 'static,
    ) -> &mut Self {
        self.concrete.insert(name(f), Arc::new(imp));
        self
    }

    pub fn set_abstract_filter(
        &mut self,
        f: &str,
        imp: impl Fn(&[ASlot<C::Abs>]) -> AbstractOutput<C::Abs> + Send + Sync + 'static,
    ) -> &mut Self {
        self.abstracts.insert(name(f), Arc::new(imp));
        self
    }

    pub fn concrete_filter(&self, f: &str) -> Result<&ConcreteFilter<C::Value>, LangError> {
        self.concrete
            .get(f)
            .ok_or_else(|| LangError::MissingConcreteFilter(name(f)))
    }

    pub fn abstract_filter(&self, f: &str) -> Result<&AbstractFilter<C::Abs>, LangError> {
        self.abstracts
            .get(f)
            .ok_or_else(|| LangError::MissingAbstractFilter(name(f)))
    }

    pub fn filter_sig(&self, f: &str) -> Result<&FilterSig, LangError> {
        self.syntax
            .filter_sig(f)
            .ok_or_else(|| LangError::UnknownFilter(name(f)))
    }

    pub fn filter_names(&self) -> Vec<Name> {
        self.syntax.filters.iter().map(|f| f.name.clone()).collect()
    }

    /// Checks a closed term: constructors known, sorts consistent, base
    /// literals well formed. Returns its sort.
    pub fn check_closed(&self, t: &Term) -> Result<Name, TermError> {
        fn literals<C: Carriers>(t: &Term) -> Result<(), TermError> {
            match t {
                Term::Base(b) if !C::base_term_ok(&b.sort, &b.text) => {
                    Err(TermError::BadBaseTerm {
                        sort: b.sort.clone(),
                        text: b.text.clone(),
                    })
                }
                Term::Ctor(_, args) => args.iter().try_for_each(literals::<C>),
                _ => Ok(()),
            }
        }
        literals::<C>(t)?;
        self.syntax.sort_of_closed(t)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_language(self)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Finding {
    DuplicateSort(Name),
    DuplicateConstructor(Name),
    DuplicateFilter(Name),
    DuplicateSkeleton(Name),
    MissingSkeleton(Name),
    SkeletonForUndeclared(Name),
    SkeletonArity(Name),
    DuplicateParam(Name),
    UndeclaredSort(Name),
    ConstructorResultNotProgram(Name),
    FilterOutputNotFlow(Name),
    UnsignedFilter(Name),
    MissingConcreteFilter(Name),
    MissingAbstractFilter(Name),
    MissingFlowSorts(Name),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}

fn filters_used(body: &Body, acc: &mut BTreeSet<Name>) {
    for b in &body.0 {
        match b {
            Bone::Filter { name, .. } => {
                acc.insert(name.clone());
            }
            Bone::Branches { branches, .. } => branches.iter().for_each(|b| filters_used(b, acc)),
            Bone::Hook { .. } => {}
        }
    }
}

pub fn validate_language<C: Carriers>(lang: &Language<C>) -> ValidationReport {
    let syn = &lang.syntax;
    let mut findings = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &syn.sorts {
        if !seen.insert(s.name.clone()) {
            findings.push(Finding::DuplicateSort(s.name.clone()));
        }
    }
    let declared = |s: &Name| syn.kind(s).is_some();
    let mut seen = BTreeSet::new();
    for c in &syn.ctors {
        if !seen.insert(c.name.clone()) {
            findings.push(Finding::DuplicateConstructor(c.name.clone()));
        }
        for s in c.args.iter().chain(std::iter::once(&c.result)) {
            if !declared(s) {
                findings.push(Finding::UndeclaredSort(s.clone()));
            }
        }
        if syn.kind(&c.result) != Some(SortKind::Program) {
            findings.push(Finding::ConstructorResultNotProgram(c.name.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for f in &syn.filters {
        if !seen.insert(f.name.clone()) {
            findings.push(Finding::DuplicateFilter(f.name.clone()));
        }
        for s in f.inputs.iter().chain(&f.outputs) {
            if !declared(s) {
                findings.push(Finding::UndeclaredSort(s.clone()));
            }
        }
        if f.outputs
            .iter()
            .any(|s| syn.kind(s) != Some(SortKind::Flow))
        {
            findings.push(Finding::FilterOutputNotFlow(f.name.clone()));
        }
        if !lang.concrete.contains_key(&f.name) {
            findings.push(Finding::MissingConcreteFilter(f.name.clone()));
        }
        if !lang.abstracts.contains_key(&f.name) {
            findings.push(Finding::MissingAbstractFilter(f.name.clone()));
        }
    }
    for s in &syn.sorts {
        if s.kind == SortKind::Program && !syn.flows.contains_key(&s.name) {
            findings.push(Finding::MissingFlowSorts(s.name.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    let mut used = BTreeSet::new();
    for sk in &lang.skeletons {
        if !seen.insert(sk.ctor.clone()) {
            findings.push(Finding::DuplicateSkeleton(sk.ctor.clone()));
        }
        match syn.ctor_sig(&sk.ctor) {
            None => findings.push(Finding::SkeletonForUndeclared(sk.ctor.clone())),
            Some(sig) if sig.args.len() != sk.params.len() => {
                findings.push(Finding::SkeletonArity(sk.ctor.clone()))
            }
            Some(_) => {}
        }
        let distinct: BTreeSet<_> = sk.params.iter().collect();
        if distinct.len() != sk.params.len() {
            findings.push(Finding::DuplicateParam(sk.ctor.clone()));
        }
        filters_used(&sk.body, &mut used);
    }
    for c in &syn.ctors {
        if !seen.contains(&c.name) {
            findings.push(Finding::MissingSkeleton(c.name.clone()));
        }
    }
    for f in used {
        if syn.filter_sig(&f).is_none() {
            findings.push(Finding::UnsignedFilter(f));
        }
    }
    findings.sort();
    findings.dedup();
    ValidationReport { findings }
}
