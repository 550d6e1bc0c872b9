//! Surface syntax: lexer, recursive-descent parser and printer for both
//! dialects, plus the textual formats of states and input streams.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use skelsem_core::{name, Term};
use thiserror::Error;

use crate::domain::{AState, AVal, Bound, Itv, B4};
use crate::value::{Store, Val};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dialect {
    While,
    Ext,
}

const BASE_KEYWORDS: &[&str] = &["skip", "if", "then", "else", "end", "while", "do", "not"];
const EXT_KEYWORDS: &[&str] = &["in", "out", "throw", "try", "catch", "ref"];

impl Dialect {
    pub fn is_keyword(self, w: &str) -> bool {
        BASE_KEYWORDS.contains(&w) || (self == Dialect::Ext && EXT_KEYWORDS.contains(&w))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Kw(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) | Tok::Kw(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: &[&str] = &[":=", "<-", ";", "+", "-", "=", "(", ")", "{", "}", "!"];

fn lex(src: &str, dialect: Dialect) -> Result<Vec<(Tok, usize, usize)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| SyntaxError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, col);
        if c.is_ascii_digit() {
            let j = (i..chars.len())
                .find(|&j| !chars[j].is_ascii_digit())
                .unwrap_or(chars.len());
            let text: String = chars[i..j].iter().collect();
            toks.push((Tok::Int(text.parse().expect("digits")), start.0, start.1));
            col += j - i;
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let j = (i..chars.len())
                .find(|&j| !(chars[j].is_alphanumeric() || chars[j] == '_'))
                .unwrap_or(chars.len());
            let word: String = chars[i..j].iter().collect();
            let tok = if dialect.is_keyword(&word) {
                Tok::Kw(word)
            } else {
                Tok::Ident(word)
            };
            toks.push((tok, start.0, start.1));
            col += j - i;
            i = j;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let sym = SYMBOLS
            .iter()
            .find(|s| rest.starts_with(**s))
            .filter(|s| dialect == Dialect::Ext || !matches!(**s, "<-" | "!"));
        match sym {
            Some(s) => {
                toks.push((Tok::Sym(s), start.0, start.1));
                i += s.len();
                col += s.len();
            }
            None => return Err(err(line, col, format!("unexpected character `{c}`"))),
        }
    }
    toks.push((Tok::Eof, line, col));
    Ok(toks)
}

pub fn lit(n: &BigInt) -> Term {
    Term::base("lit", &n.to_string())
}

pub fn ident(x: &str) -> Term {
    Term::base("ident", x)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        let (_, line, col) = self.toks[self.pos];
        Err(SyntaxError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Kw(w) if w == k)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), SyntaxError> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{k}`, found {}", self.peek()))
        }
    }

    fn seq(&mut self) -> Result<Term, SyntaxError> {
        let s = self.stmt()?;
        if self.is_sym(";") {
            self.bump();
            let rest = self.seq()?;
            return Ok(Term::ctor(";", vec![s, rest]));
        }
        Ok(s)
    }

    fn stmt(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Kw(k) if k == "skip" => {
                self.bump();
                Ok(Term::ctor("skip", vec![]))
            }
            Tok::Kw(k) if k == "throw" => {
                self.bump();
                Ok(Term::ctor("throw", vec![]))
            }
            Tok::Kw(k) if k == "out" => {
                self.bump();
                let e = self.expr()?;
                Ok(Term::ctor("out", vec![e]))
            }
            Tok::Kw(k) if k == "if" => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let a = self.seq()?;
                self.expect_kw("else")?;
                let b = self.seq()?;
                self.expect_kw("end")?;
                Ok(Term::ctor("if", vec![c, a, b]))
            }
            Tok::Kw(k) if k == "while" => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("do")?;
                let body = self.seq()?;
                self.expect_kw("end")?;
                Ok(Term::ctor("while", vec![c, body]))
            }
            Tok::Kw(k) if k == "try" => {
                self.bump();
                let a = self.seq()?;
                self.expect_kw("catch")?;
                let b = self.seq()?;
                self.expect_kw("end")?;
                Ok(Term::ctor("try", vec![a, b]))
            }
            Tok::Sym("{") => {
                self.bump();
                let s = self.seq()?;
                self.expect_sym("}")?;
                Ok(s)
            }
            Tok::Ident(x) if *self.peek2() == Tok::Sym(":=") => {
                self.bump();
                self.bump();
                let e = self.expr()?;
                Ok(Term::ctor(":=", vec![ident(&x), e]))
            }
            Tok::Eof => self.fail("expected a statement, found end of input"),
            _ => {
                let lhs = self.expr()?;
                if !self.is_sym("<-") {
                    return self.fail(format!("expected a statement, found {}", self.peek()));
                }
                self.bump();
                let rhs = self.expr()?;
                Ok(Term::ctor("<-", vec![lhs, rhs]))
            }
        }
    }

    fn expr(&mut self) -> Result<Term, SyntaxError> {
        let a = self.sum()?;
        if self.is_sym("=") {
            self.bump();
            let b = self.sum()?;
            if self.is_sym("=") {
                return self.fail("`=` is not associative; add parentheses");
            }
            return Ok(Term::ctor("=", vec![a, b]));
        }
        Ok(a)
    }

    fn sum(&mut self) -> Result<Term, SyntaxError> {
        let mut a = self.unary()?;
        loop {
            if self.is_sym("+") {
                self.bump();
                let b = self.unary()?;
                a = Term::ctor("+", vec![a, b]);
            } else if self.is_sym("-") {
                self.bump();
                match self.bump() {
                    Tok::Int(k) => {
                        a = Term::ctor("+", vec![a, Term::ctor("const", vec![lit(&-k)])])
                    }
                    _ => {
                        self.pos -= 1;
                        return self.fail("`-` must be followed by an integer literal");
                    }
                }
            } else {
                return Ok(a);
            }
        }
    }

    fn unary(&mut self) -> Result<Term, SyntaxError> {
        for (kw, ctor) in [("not", "not"), ("ref", "ref")] {
            if self.is_kw(kw) {
                self.bump();
                let e = self.unary()?;
                return Ok(Term::ctor(ctor, vec![e]));
            }
        }
        if self.is_sym("!") {
            self.bump();
            let e = self.unary()?;
            return Ok(Term::ctor("!", vec![e]));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::ctor("const", vec![lit(&n)]))
            }
            Tok::Sym("-") => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        Ok(Term::ctor("const", vec![lit(&-n)]))
                    }
                    _ => self.fail("`-` must be followed by an integer literal"),
                }
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(Term::ctor("var", vec![ident(&x)]))
            }
            Tok::Kw(k) if k == "in" => {
                self.bump();
                Ok(Term::ctor("in", vec![]))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            t => self.fail(format!("expected an expression, found {t}")),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.fail(format!("unexpected {t}")),
        }
    }
}

fn parser(src: &str, dialect: Dialect) -> Result<Parser, SyntaxError> {
    Ok(Parser {
        toks: lex(src, dialect)?,
        pos: 0,
    })
}

/// Parses a statement sequence.
pub fn parse_stmt(src: &str, dialect: Dialect) -> Result<Term, SyntaxError> {
    let mut p = parser(src, dialect)?;
    let s = p.seq()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_expr(src: &str, dialect: Dialect) -> Result<Term, SyntaxError> {
    let mut p = parser(src, dialect)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A statement if the text parses as one, otherwise an expression.
pub fn parse_program(src: &str, dialect: Dialect) -> Result<Term, SyntaxError> {
    parse_stmt(src, dialect).or_else(|e| parse_expr(src, dialect).map_err(|_| e))
}

fn base_text(t: &Term) -> &str {
    match t {
        Term::Base(b) => &b.text,
        _ => "?",
    }
}

fn neg_const(t: &Term) -> Option<BigInt> {
    match t {
        Term::Ctor(c, args) if &**c == "const" => {
            let n: BigInt = base_text(&args[0]).parse().ok()?;
            (n.sign() == Sign::Minus).then(|| -n)
        }
        _ => None,
    }
}

const EQ: u8 = 0;
const SUM: u8 = 1;
const UNARY: u8 = 2;

fn expr_at(t: &Term, level: u8) -> String {
    let args = t.args();
    let (s, own) = match t.head().map(|c| &**c) {
        Some("const") => (base_text(&args[0]).to_string(), UNARY),
        Some("var") => (base_text(&args[0]).to_string(), UNARY),
        Some("in") => ("in".to_string(), UNARY),
        Some("+") => {
            let lhs = expr_at(&args[0], SUM);
            match neg_const(&args[1]) {
                Some(k) => (format!("{lhs} - {k}"), SUM),
                None => (format!("{lhs} + {}", expr_at(&args[1], UNARY)), SUM),
            }
        }
        Some("=") => (
            format!("{} = {}", expr_at(&args[0], SUM), expr_at(&args[1], SUM)),
            EQ,
        ),
        Some("not") => (format!("not {}", expr_at(&args[0], UNARY)), UNARY),
        Some("ref") => (format!("ref {}", expr_at(&args[0], UNARY)), UNARY),
        Some("!") => (format!("!{}", expr_at(&args[0], UNARY)), UNARY),
        _ => (t.to_string(), UNARY),
    };
    if own < level {
        format!("({s})")
    } else {
        s
    }
}

fn stmt_at(t: &Term, nested: bool) -> String {
    let args = t.args();
    match t.head().map(|c| &**c) {
        Some("skip") => "skip".into(),
        Some("throw") => "throw".into(),
        Some(":=") => format!("{} := {}", base_text(&args[0]), expr_at(&args[1], EQ)),
        Some("out") => format!("out {}", expr_at(&args[0], EQ)),
        Some("<-") => format!("{} <- {}", expr_at(&args[0], EQ), expr_at(&args[1], EQ)),
        Some(";") => {
            let s = format!("{}; {}", stmt_at(&args[0], true), stmt_at(&args[1], false));
            if nested {
                format!("{{ {s} }}")
            } else {
                s
            }
        }
        Some("if") => format!(
            "if {} then {} else {} end",
            expr_at(&args[0], EQ),
            stmt_at(&args[1], false),
            stmt_at(&args[2], false)
        ),
        Some("while") => format!(
            "while {} do {} end",
            expr_at(&args[0], EQ),
            stmt_at(&args[1], false)
        ),
        Some("try") => format!(
            "try {} catch {} end",
            stmt_at(&args[0], false),
            stmt_at(&args[1], false)
        ),
        _ => expr_at(t, EQ),
    }
}

const STMT_CTORS: &[&str] = &[
    "skip", "throw", ":=", "out", "<-", ";", "if", "while", "try",
];

/// Surface text of a program term, statement or expression.
pub fn print(t: &Term) -> String {
    match t.head() {
        Some(c) if STMT_CTORS.contains(&&**c) => stmt_at(t, false),
        _ => expr_at(t, EQ),
    }
}

fn bad(msg: String) -> SyntaxError {
    SyntaxError {
        line: 1,
        col: 1,
        msg,
    }
}

fn parse_val(s: &str) -> Result<Val, SyntaxError> {
    match s {
        "true" => Ok(Val::Bool(true)),
        "false" => Ok(Val::Bool(false)),
        _ => s
            .parse::<BigInt>()
            .map(Val::Int)
            .map_err(|_| bad(format!("`{s}` is not an integer or boolean"))),
    }
}

fn pairs(src: &str) -> Result<Vec<(&str, &str)>, SyntaxError> {
    let src = src.trim();
    let src = src
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(src);
    src.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .filter(|(k, _)| !k.is_empty())
                .ok_or_else(|| bad(format!("expected `name=value`, found `{p}`")))
        })
        .collect()
}

/// `x=5,flag=true`, optionally in braces.
pub fn parse_state(src: &str) -> Result<Store, SyntaxError> {
    let mut st = BTreeMap::new();
    for (k, v) in pairs(src)? {
        st.insert(name(k), parse_val(v)?);
    }
    Ok(st)
}

/// `1,2,true`.
pub fn parse_input(src: &str) -> Result<Vec<Val>, SyntaxError> {
    src.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_val)
        .collect()
}

fn parse_bound(s: &str) -> Result<Bound, SyntaxError> {
    match s.trim() {
        "-inf" => Ok(Bound::NegInf),
        "+inf" | "inf" => Ok(Bound::PosInf),
        t => t
            .parse()
            .map(Bound::Fin)
            .map_err(|_| bad(format!("bad bound `{t}`"))),
    }
}

/// Abstract value text: `[0,+inf]`, `5`, `true`, `false`, `top`, `bool`.
pub fn parse_aval(s: &str) -> Result<AVal, SyntaxError> {
    match s {
        "true" => return Ok(AVal::boolean(B4::Tt)),
        "false" => return Ok(AVal::boolean(B4::Ff)),
        "bool" => return Ok(AVal::boolean(B4::Top)),
        "top" => return Ok(AVal::int(Itv::top())),
        _ => {}
    }
    if let Some(body) = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let (lo, hi) = body
            .split_once(';')
            .ok_or_else(|| bad(format!("expected `[lo;hi]`, found `{s}`")))?;
        return Ok(AVal::int(Itv::new(parse_bound(lo)?, parse_bound(hi)?)));
    }
    s.parse::<BigInt>()
        .map(|n| AVal::int(Itv::point(n)))
        .map_err(|_| bad(format!("bad abstract value `{s}`")))
}

/// `x=[0;+inf],y=true`; interval bounds are separated by `;` so that `,`
/// can separate bindings.
pub fn parse_astate(src: &str) -> Result<AState, SyntaxError> {
    let mut out = Vec::new();
    for (k, v) in pairs(src)? {
        out.push((name(k), parse_aval(v)?));
    }
    Ok(AState::from_pairs(out))
}
