//! Extended While: exceptions, input/output streams and a heap.

use skelsem_core::skeleton::{branches, filter, fv, hook, tv, Bone, Var, X_OUT, X_SIGMA};
use skelsem_core::{Language, Skeleton, SortKind, Syntax, Term};

use crate::domain::Domains;
use crate::filters;
use crate::while_lang::{base_ctors, base_filters, base_sorts, t};

fn f(name: &str, ins: &[&str], outs: &[&str]) -> Bone {
    let var = |v: &&str| match *v {
        "t" | "t1" | "t2" => tv(v),
        _ => fv(v),
    };
    let ins: Vec<Var> = ins.iter().map(var).collect();
    let outs: Vec<Var> = outs.iter().map(var).collect();
    filter(name, &ins, &outs)
}

fn split(st: &str) -> Bone {
    f("splitSt", &[st], &["i", "o", "s", "h"])
}

fn get_val(w: &str, v: &str, st: &str) -> Bone {
    f("getValSt", &[w], &[v, st])
}

fn binop(name: &str, ctor: &str, op: &str, res: &str, wrap: &str) -> Skeleton {
    Skeleton::new(
        name,
        ctor,
        &["t1", "t2"],
        vec![
            hook(X_SIGMA, t("t1"), "w1"),
            get_val("w1", "v1", "st1"),
            f("isInt", &["v1"], &["n1"]),
            hook("st1", t("t2"), "w2"),
            get_val("w2", "v2", "st2"),
            f("isInt", &["v2"], &["n2"]),
            f(op, &["n1", "n2"], &[res]),
            f(wrap, &[res], &["v"]),
            f("mkValSt", &["v", "st2"], &[X_OUT]),
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
                f("litInt", &["t"], &["n"]),
                f("intVal", &["n"], &["v"]),
                f("mkValSt", &["v", X_SIGMA], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Var",
            "var",
            &["t"],
            vec![
                split(X_SIGMA),
                f("read", &["t", "s"], &["v"]),
                f("mkSt", &["i", "o", "s", "h"], &["st"]),
                f("mkValSt", &["v", "st"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "In",
            "in",
            &[],
            vec![
                split(X_SIGMA),
                f("in", &["i"], &["v", "i'"]),
                f("mkSt", &["i'", "o", "s", "h"], &["st"]),
                f("mkValSt", &["v", "st"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Alloc",
            "ref",
            &["t"],
            vec![
                hook(X_SIGMA, t("t"), "w"),
                get_val("w", "v", "st"),
                split("st"),
                f("alloc", &["h", "v"], &["h'", "l"]),
                f("locVal", &["l"], &["v'"]),
                f("mkSt", &["i", "o", "s", "h'"], &["st'"]),
                f("mkValSt", &["v'", "st'"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Acc",
            "!",
            &["t"],
            vec![
                hook(X_SIGMA, t("t"), "w"),
                get_val("w", "v", "st"),
                f("isLoc", &["v"], &["l"]),
                split("st"),
                f("get", &["l", "h"], &["v'"]),
                f("mkSt", &["i", "o", "s", "h"], &["st'"]),
                f("mkValSt", &["v'", "st'"], &[X_OUT]),
            ],
        ),
        binop("Add", "+", "add", "n", "intVal"),
        binop("Eq", "=", "eq", "b", "boolVal"),
        Skeleton::new(
            "Neg",
            "not",
            &["t"],
            vec![
                hook(X_SIGMA, t("t"), "w"),
                get_val("w", "v", "st"),
                f("isBool", &["v"], &["b"]),
                f("neg", &["b"], &["b'"]),
                f("boolVal", &["b'"], &["v'"]),
                f("mkValSt", &["v'", "st"], &[X_OUT]),
            ],
        ),
        Skeleton::new("Skip", "skip", &[], vec![f("mkOK", &[X_SIGMA], &[X_OUT])]),
        Skeleton::new(
            "Throw",
            "throw",
            &[],
            vec![f("mkExc", &[X_SIGMA], &[X_OUT])],
        ),
        Skeleton::new(
            "Asn",
            ":=",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t2"), "w"),
                get_val("w", "v", "st"),
                split("st"),
                f("write", &["t1", "s", "v"], &["s'"]),
                f("mkSt", &["i", "o", "s'", "h"], &["st'"]),
                f("mkOK", &["st'"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Set",
            "<-",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t1"), "w1"),
                get_val("w1", "v1", "st"),
                f("isLoc", &["v1"], &["l"]),
                hook("st", t("t2"), "w2"),
                get_val("w2", "v2", "st'"),
                split("st'"),
                f("set", &["l", "h", "v2"], &["h'"]),
                f("mkSt", &["i", "o", "s", "h'"], &["st''"]),
                f("mkOK", &["st''"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Out",
            "out",
            &["t1"],
            vec![
                hook(X_SIGMA, t("t1"), "w"),
                get_val("w", "v", "st"),
                split("st"),
                f("out", &["o", "v"], &["o'"]),
                f("mkSt", &["i", "o'", "s", "h"], &["st'"]),
                f("mkOK", &["st'"], &[X_OUT]),
            ],
        ),
        Skeleton::new(
            "Seq",
            ";",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t1"), "e"),
                branches(
                    &[Var::out()],
                    vec![
                        vec![f("isOK", &["e"], &["st"]), hook("st", t("t2"), X_OUT)],
                        vec![f("isExc", &["e"], &["st'"]), f("mkExc", &["st'"], &[X_OUT])],
                    ],
                ),
            ],
        ),
        Skeleton::new(
            "Try",
            "try",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t1"), "e"),
                branches(
                    &[Var::out()],
                    vec![
                        vec![f("isOK", &["e"], &["st"]), f("mkOK", &["st"], &[X_OUT])],
                        vec![f("isExc", &["e"], &["st'"]), hook("st'", t("t2"), X_OUT)],
                    ],
                ),
            ],
        ),
        Skeleton::new(
            "If",
            "if",
            &["t1", "t2", "t3"],
            vec![
                hook(X_SIGMA, t("t1"), "w"),
                get_val("w", "v", "st"),
                f("isBool", &["v"], &["b"]),
                branches(
                    &[Var::out()],
                    vec![
                        vec![f("isTrue", &["b"], &[]), hook("st", t("t2"), X_OUT)],
                        vec![f("isFalse", &["b"], &[]), hook("st", t("t3"), X_OUT)],
                    ],
                ),
            ],
        ),
        Skeleton::new(
            "While",
            "while",
            &["t1", "t2"],
            vec![
                hook(X_SIGMA, t("t1"), "w"),
                get_val("w", "v", "st"),
                f("isBool", &["v"], &["b"]),
                branches(
                    &[Var::out()],
                    vec![
                        vec![
                            f("isTrue", &["b"], &[]),
                            hook("st", t("t2"), "e"),
                            branches(
                                &[Var::out()],
                                vec![
                                    vec![
                                        f("isOK", &["e"], &["st'"]),
                                        hook(
                                            "st'",
                                            Term::ctor("while", vec![t("t1"), t("t2")]),
                                            X_OUT,
                                        ),
                                    ],
                                    vec![
                                        f("isExc", &["e"], &["st''"]),
                                        f("mkExc", &["st''"], &[X_OUT]),
                                    ],
                                ],
                            ),
                        ],
                        vec![f("isFalse", &["b"], &[]), f("mkOK", &["st"], &[X_OUT])],
                    ],
                ),
            ],
        ),
    ]
}

pub fn syntax() -> Syntax {
    let mut syn = Syntax::default();
    base_sorts(&mut syn);
    syn.sort("In", SortKind::Flow)
        .sort("Out", SortKind::Flow)
        .sort("Heap", SortKind::Flow)
        .sort("Loc", SortKind::Flow)
        .sort("IOState", SortKind::Flow)
        .sort("ValIOState", SortKind::Flow)
        .sort("ExcIOState", SortKind::Flow);
    base_ctors(&mut syn);
    syn.ctor("in", &[], "expr")
        .ctor("ref", &["expr"], "expr")
        .ctor("!", &["expr"], "expr")
        .ctor("out", &["expr"], "stat")
        .ctor("throw", &[], "stat")
        .ctor("try", &["stat", "stat"], "stat")
        .ctor("<-", &["expr", "expr"], "stat");
    base_filters(&mut syn);
    syn.filter("in", &["In"], &["Val", "In"])
        .filter("alloc", &["Heap", "Val"], &["Heap", "Loc"])
        .filter("locVal", &["Loc"], &["Val"])
        .filter("isLoc", &["Val"], &["Loc"])
        .filter("get", &["Loc", "Heap"], &["Val"])
        .filter("set", &["Loc", "Heap", "Val"], &["Heap"])
        .filter("out", &["Out", "Val"], &["Out"])
        .filter("mkSt", &["In", "Out", "State", "Heap"], &["IOState"])
        .filter("splitSt", &["IOState"], &["In", "Out", "State", "Heap"])
        .filter("mkValSt", &["Val", "IOState"], &["ValIOState"])
        .filter("getValSt", &["ValIOState"], &["Val", "IOState"])
        .filter("mkOK", &["IOState"], &["ExcIOState"])
        .filter("mkExc", &["IOState"], &["ExcIOState"])
        .filter("isOK", &["ExcIOState"], &["IOState"])
        .filter("isExc", &["ExcIOState"], &["IOState"]);
    syn.flow("expr", "IOState", "ValIOState")
        .flow("stat", "IOState", "ExcIOState");
    syn
}

/// Extended While with stream, heap and exception abstractions.
pub fn ext_while_language() -> Language<Domains> {
    let mut lang = Language::new("while-ext", syntax());
    for s in skeletons() {
        lang.add_skeleton(s);
    }
    filters::install_base(&mut lang);
    filters::install_ext(&mut lang);
    lang
}
