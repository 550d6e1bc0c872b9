//! Deliberately broken language variants used to exercise the checkers.

use clap::ValueEnum;
use skelsem_core::language::AbstractOutput;
use skelsem_core::{name, Body, Bone, Language, WfReason};
use skelsem_lang::domain::Itv;
use skelsem_lang::{Abs, Domains};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WfMutation {
    /// The second hook of `;` reads a variable nobody defines.
    UndefinedVar,
    /// The branches of `if` stop sharing `x_o`.
    BranchShare,
    /// The literal skeleton passes two arguments to `litInt`.
    FilterArity,
}

impl WfMutation {
    pub fn target(self) -> (&'static str, WfReason) {
        match self {
            WfMutation::UndefinedVar => ("Seq", WfReason::UseBeforeDef),
            WfMutation::BranchShare => ("If", WfReason::BranchShareMismatch),
            WfMutation::FilterArity => ("Lit", WfReason::SortClash),
        }
    }

    pub fn apply(self, lang: &mut Language<Domains>) {
        let ctor = match self {
            WfMutation::UndefinedVar => ";",
            WfMutation::BranchShare => "if",
            WfMutation::FilterArity => "const",
        };
        for s in lang.skeletons_mut().iter_mut().filter(|s| &*s.ctor == ctor) {
            match self {
                WfMutation::UndefinedVar => {
                    if let Some(Bone::Hook { input, .. }) = last_hook(&mut s.body) {
                        *input = name("undefined");
                    }
                }
                WfMutation::BranchShare => {
                    for b in &mut s.body.0 {
                        if let Bone::Branches { shared, .. } = b {
                            shared.clear();
                        }
                    }
                }
                WfMutation::FilterArity => {
                    if let Some(Bone::Filter { inputs, .. }) = s
                        .body
                        .0
                        .iter_mut()
                        .find(|b| matches!(b, Bone::Filter { .. }))
                    {
                        let first = inputs[0].clone();
                        inputs.push(first);
                    }
                }
            }
        }
        lang.refresh();
    }
}

fn last_hook(body: &mut Body) -> Option<&mut Bone> {
    let mut found = None;
    for b in body.0.iter_mut() {
        match b {
            Bone::Hook { .. } => found = Some(b),
            Bone::Branches { branches, .. } => {
                if let Some(h) = branches.iter_mut().find_map(last_hook) {
                    found = Some(h);
                }
            }
            Bone::Filter { .. } => {}
        }
    }
    found
}

/// Replaces abstract filter `f` by an unsound version: `add` always answers
/// `0`, anything else always answers bottom.
pub fn break_filter(lang: &mut Language<Domains>, f: &str) -> bool {
    if lang.abstract_filter(f).is_err() {
        return false;
    }
    if f == "add" {
        lang.set_abstract_filter(f, |_| AbstractOutput::Values(vec![Abs::Int(Itv::point(0))]));
    } else {
        lang.set_abstract_filter(f, |_| AbstractOutput::Bottom);
    }
    true
}
