//! Fixed programs with their starting machines.

use crate::ast::*;
use crate::direct::{Machine, V};

pub struct Case {
    pub name: &'static str,
    pub ext: bool,
    pub program: Stmt,
    pub start: Machine,
}

fn ints(vars: &[(&str, i64)]) -> Machine {
    let vs: Vec<(&str, V)> = vars
        .iter()
        .map(|(k, n)| (*k, V::Int((*n).into())))
        .collect();
    Machine::with_vars(&vs)
}

fn with_input(mut m: Machine, input: &[i64]) -> Machine {
    m.input = input.iter().map(|n| V::Int((*n).into())).collect();
    m
}

fn case(name: &'static str, ext: bool, program: Stmt, start: Machine) -> Case {
    Case {
        name,
        ext,
        program,
        start,
    }
}

/// `while not (x = 0) do x := x - 1 end`.
pub fn countdown() -> Stmt {
    while_(
        not(eq(var("x"), int(0))),
        assign("x", add(var("x"), int(-1))),
    )
}

pub fn cases() -> Vec<Case> {
    let sum_to = seq(vec![
        assign("s", int(0)),
        while_(
            not(eq(var("n"), int(0))),
            seq(vec![
                assign("s", add(var("s"), var("n"))),
                assign("n", add(var("n"), int(-1))),
            ]),
        ),
    ]);
    let fib = seq(vec![
        assign("a", int(0)),
        assign("b", int(1)),
        while_(
            not(eq(var("n"), int(0))),
            seq(vec![
                assign("t", add(var("a"), var("b"))),
                assign("a", var("b")),
                assign("b", var("t")),
                assign("n", add(var("n"), int(-1))),
            ]),
        ),
    ]);
    let counter = seq(vec![
        assign("r", reference(Expr::In)),
        store(var("r"), add(deref(var("r")), int(1))),
        Stmt::Out(deref(var("r"))),
        try_(
            seq(vec![Stmt::Throw, Stmt::Out(int(99))]),
            Stmt::Out(int(7)),
        ),
    ]);
    let echo = while_(
        not(eq(var("k"), int(0))),
        seq(vec![
            Stmt::Out(Expr::In),
            assign("k", add(var("k"), int(-1))),
        ]),
    );
    let aliasing = seq(vec![
        assign("p", reference(int(1))),
        assign("q", var("p")),
        store(var("q"), int(5)),
        Stmt::Out(deref(var("p"))),
    ]);
    let escape = seq(vec![
        assign("i", int(0)),
        try_(
            while_(
                eq(int(0), int(0)),
                seq(vec![
                    if_(eq(var("i"), int(3)), Stmt::Throw, Stmt::Skip),
                    Stmt::Out(var("i")),
                    assign("i", add(var("i"), int(1))),
                ]),
            ),
            Stmt::Out(int(-1)),
        ),
    ]);
    let uncaught = seq(vec![Stmt::Out(int(1)), Stmt::Throw, Stmt::Out(int(2))]);
    let nested_try = try_(
        seq(vec![try_(Stmt::Throw, assign("x", int(1))), Stmt::Throw]),
        assign("y", int(2)),
    );
    let list = seq(vec![
        assign("h", reference(int(0))),
        assign("i", int(3)),
        while_(
            not(eq(var("i"), int(0))),
            seq(vec![
                assign("h", reference(var("h"))),
                assign("i", add(var("i"), int(-1))),
            ]),
        ),
        Stmt::Out(deref(deref(deref(var("h"))))),
    ]);
    vec![
        case("countdown", false, countdown(), ints(&[("x", 5)])),
        case("countdown-zero", false, countdown(), ints(&[("x", 0)])),
        case("sum-to", false, sum_to, ints(&[("n", 10)])),
        case("fib", false, fib, ints(&[("n", 12)])),
        case(
            "max",
            false,
            if_(
                eq(var("x"), var("y")),
                assign("m", var("x")),
                assign("m", add(var("x"), var("y"))),
            ),
            ints(&[("x", 4), ("y", 4)]),
        ),
        case("skip", false, Stmt::Skip, ints(&[])),
        case(
            "stuck-read",
            false,
            assign("x", add(var("y"), int(1))),
            ints(&[("x", 1)]),
        ),
        case(
            "stuck-guard",
            false,
            if_(var("x"), Stmt::Skip, Stmt::Skip),
            ints(&[("x", 1)]),
        ),
        case(
            "stuck-add-bool",
            false,
            assign("x", add(eq(int(1), int(1)), int(2))),
            ints(&[]),
        ),
        case(
            "stuck-in-loop",
            false,
            seq(vec![
                assign("i", int(2)),
                while_(not(eq(var("i"), int(0))), assign("i", var("j"))),
            ]),
            ints(&[]),
        ),
        case(
            "bools",
            false,
            seq(vec![
                assign("b", not(eq(var("x"), int(3)))),
                assign("c", not(var("b"))),
            ]),
            ints(&[("x", 3)]),
        ),
        case("counter", true, counter, with_input(ints(&[]), &[41])),
        case(
            "echo",
            true,
            echo.clone(),
            with_input(ints(&[("k", 3)]), &[4, 5, 6, 7]),
        ),
        case(
            "echo-starved",
            true,
            echo,
            with_input(ints(&[("k", 3)]), &[4]),
        ),
        case("aliasing", true, aliasing, ints(&[])),
        case("escape", true, escape, ints(&[])),
        case("uncaught", true, uncaught, ints(&[])),
        case("nested-try", true, nested_try, ints(&[])),
        case("linked", true, list, ints(&[])),
        case("stuck-deref-int", true, Stmt::Out(deref(int(3))), ints(&[])),
    ]
}
