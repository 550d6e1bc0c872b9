//! The base While language: constructors, skeletons and filter signatures.

use skelsem_core::skeleton::{branches, filter, fv, hook, tv, Var, X_OUT, X_SIGMA};
use skelsem_core::{Language, Skeleton, SortKind, Syntax, Term};

use crate::domain::Domains;
use crate::filters;

pub(crate) fn t(v: &str) -> Term {
    Term::var(v)
}

pub(crate) fn base_sorts(syn: &mut Syntax) {
    syn.sort("ident", SortKind::Base)
        .sort("lit", SortKind::Base)
        .sort("expr", SortKind::Program)
        .sort("stat", SortKind::Program)
        .sort("Int", SortKind::Flow)
        .sort("Bool", SortKind::Flow)
        .sort("Val", SortKind::Flow)
        .sort("State", SortKind::Flow);
}

pub(crate) fn base_ctors(syn: &mut Syntax) {
    syn.ctor("const", &["lit"], "expr")
        .ctor("var", &["ident"], "expr")
        .ctor("+", &["expr", "expr"], "expr")
        .ctor("=", &["expr", "expr"], "expr")
        .ctor("not", &["expr"], "expr")
        .ctor("skip", &[], "stat")
        .ctor(":=", &["ident", "expr"], "stat")
        .ctor(";", &["stat", "stat"], "stat")
        .ctor("if", &["expr", "stat", "stat"], "stat")
        .ctor("while", &["expr", "stat"], "stat");
}

pub(crate) fn base_filters(syn: &mut Syntax) {
    syn.filter("litInt", &["lit"], &["Int"])
        .filter("intVal", &["Int"], &["Val"])
        .filter("isInt", &["Val"], &["Int"])
        .filter("add", &["Int", "Int"], &["Int"])
        .filter("boolVal", &["Bool"], &["Val"])
        .filter("isBool", &["Val"], &["Bool"])
        .filter("isTrue", &["Bool"], &[])
        .filter("isFalse", &["Bool"], &[])
        .filter("eq", &["Int", "Int"], &["Bool"])
        .filter("neg", &["Bool"], &["Bool"])
        .filter("read", &["ident", "State"], &["Val"])
        .filter("write", &["ident", "State", "Val"], &["State"])
        .filter("id", &["State"], &["State"]);
}

fn binop(name: &str, ctor: &str, op: &str, wrap: &str) -> Skeleton {
    Skeleton::new(
        name,
        ctor,
        &["t1", "t2"],
        vec![
            hook(X_SIGMA, t("t1"), "f1"),
            filter("isInt", &[fv("f1")], &[fv("f1'")]),
            hook(X_SIGMA, t("t2"), "f2"),
            filter("isInt", &[fv("f2")], &[fv("f2'")]),
            filter(op, &[fv("f1'"), fv("f2'")], &[fv("f3")]),
            filter(wrap, &[fv("f3")], &[Var::out()]),
        ],
    )
}

pub fn skeletons() -> Vec<Skeleton> {
    vec![
        Skeleton::new(
            "Lit",
            "const",
            &["t"],
            vec![
                filter("litInt", &[tv("t")], &[fv("f1")]),
                filter("intVal", &[fv("f1")], &[Var::out()]),
            ],
        ),
        Skeleton::new(
            "Var",
            "var",
            &["t"],
            vec![filter("read", &[tv("t"), Var::sigma()], &[Var::out()])],
        ),
        binop("Add", "+", "add", "intVal"),
        binop("Eq", "=", "eq", "boolVal"),
        Skeleton::new(
            "Neg",
            "not",
            &["t"],
            vec![
                hook(X_SIGMA, t("t"), "f1"),
                filter("isBool", &[fv("f1")], &[fv("f2")]),
                filter("neg", &[fv("f2")], &[fv("f3")]),
                filter("boolVal", &[fv("f3")], &[Var::out()]),
            ],
        ),
        Skeleton::new(
            "Skip",
            "skip",
            &[],
            vec![filter("id", &[Var::sigma()], &[Var::out()])],
        ),
        Skeleton::new(
            "Asn",
            ":=",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t2"), "f1"),
                filter("write", &[tv("t1"), Var::sigma(), fv("f1")], &[Var::out()]),
            ],
        ),
        Skeleton::new(
            "Seq",
            ";",
            &["t1", "t2"],
            vec![hook(X_SIGMA, t("t1"), "f1"), hook("f1", t("t2"), X_OUT)],
        ),
        Skeleton::new(
            "If",
            "if",
            &["t1", "t2", "t3"],
            vec![
                hook(X_SIGMA, t("t1"), "f1"),
                filter("isBool", &[fv("f1")], &[fv("f1'")]),
                branches(
                    &[Var::out()],
                    vec![
                        vec![
                            filter("isTrue", &[fv("f1'")], &[]),
                            hook(X_SIGMA, t("t2"), X_OUT),
                        ],
                        vec![
                            filter("isFalse", &[fv("f1'")], &[]),
                            hook(X_SIGMA, t("t3"), X_OUT),
                        ],
                    ],
                ),
            ],
        ),
        Skeleton::new(
            "While",
            "while",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t1"), "f1"),
                filter("isBool", &[fv("f1")], &[fv("f1'")]),
                branches(
                    &[Var::out()],
                    vec![
                        vec![
                            filter("isTrue", &[fv("f1'")], &[]),
                            hook(X_SIGMA, t("t2"), "f2"),
                            hook("f2", Term::ctor("while", vec![t("t1"), t("t2")]), X_OUT),
                        ],
                        vec![
                            filter("isFalse", &[fv("f1'")], &[]),
                            filter("id", &[Var::sigma()], &[Var::out()]),
                        ],
                    ],
                ),
            ],
        ),
    ]
}

pub fn syntax() -> Syntax {
    let mut syn = Syntax::default();
    base_sorts(&mut syn);
    base_ctors(&mut syn);
    base_filters(&mut syn);
    syn.flow("expr", "State", "Val")
        .flow("stat", "State", "State");
    syn
}

/// The base While language with interval abstractions.
pub fn while_language() -> Language<Domains> {
    let mut lang = Language::new("while", syntax());
    for s in skeletons() {
        lang.add_skeleton(s);
    }
    filters::install_base(&mut lang);
    lang
}
