//! Skeletal semantics: one skeleton per language construct, interpreted
//! generically as a well-formedness check, a concrete big-step evaluator, an
//! abstract analyzer and a constraint generator.

pub mod absint;
pub mod concrete;
pub mod consistency;
pub mod constraints;
pub mod exec;
pub mod interp;
pub mod language;
pub mod skeleton;
pub mod split;
pub mod term;
pub mod wf;

pub use absint::{
    abstract_immediate_consequence_on, check_invariant, AbsError, AbstractTriple, CheckReport,
    Flag, Mode,
};
pub use concrete::{eval, immediate_consequence_on, ConcreteError, ConcreteTriple};
pub use constraints::{
    gen_points, generate, hook_point, solution_to_triples, solve, Constraint, ConstraintError,
    ConstraintSet, ConstraintVar, Solution,
};
pub use exec::Exec;
pub use language::{
    ASlot, ATerm, AbstractOutput, Carriers, Cover, LangError, Language, Slot, SortKind, Syntax,
};
pub use skeleton::{Body, Bone, BonePath, Skeleton, Var};
pub use split::{split_lookup, SplitError};
pub use term::{name, Name, ProgramPoint, Term};
pub use wf::{check_language, WfReason, WfReport};
