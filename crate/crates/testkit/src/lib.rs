//! Test support for skelsem: a hand-written big-step interpreter for While
//! and extended While that shares no code with the skeleton machinery, random
//! program generators and a fixed program corpus.

pub mod ast;
pub mod corpus;
pub mod direct;
pub mod gen;

pub use ast::{Expr, Stmt};
pub use direct::{run, Halt, Machine, Outcome, V};
