//! JSON encodings of abstract values, triple files and constraint sets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value as Json};
use skelsem_core::language::{ASlot, ATerm};
use skelsem_core::{name, AbstractTriple, Constraint, ConstraintSet, Solution, Term};
use thiserror::Error;

use crate::domain::{AHeap, AIo, AState, AVal, Abs, Bound, Itv, LocSet, Stream, B4};
use crate::syntax::{parse_program, print, Dialect, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Parse(String),
    #[error("{at}: {msg}")]
    Shape { at: String, msg: String },
    #[error("term `{text}`: {err}")]
    Syntax { text: String, err: SyntaxError },
}

fn shape<T>(at: &str, msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError::Shape {
        at: at.to_string(),
        msg: msg.into(),
    })
}

fn big(n: &BigInt) -> Json {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn bound_json(b: &Bound) -> Json {
    match b {
        Bound::NegInf => json!("-inf"),
        Bound::PosInf => json!("+inf"),
        Bound::Fin(n) => big(n),
    }
}

fn itv_json(i: &Itv) -> Json {
    match i {
        Itv::Bot => Json::Null,
        Itv::Range(a, b) => json!([bound_json(a), bound_json(b)]),
    }
}

fn b4_json(b: B4) -> Json {
    json!(match b {
        B4::Bot => "bot",
        B4::Tt => "tt",
        B4::Ff => "ff",
        B4::Top => "top",
    })
}

fn loc_json(l: &LocSet) -> Json {
    match l {
        LocSet::Top => json!("top"),
        LocSet::Set(s) => json!(s.iter().collect::<Vec<_>>()),
    }
}

pub fn aval_json(v: &AVal) -> Json {
    let mut m = Map::new();
    m.insert("int".into(), itv_json(&v.int));
    m.insert("bool".into(), b4_json(v.bool));
    if !v.loc.is_bot() {
        m.insert("loc".into(), loc_json(&v.loc));
    }
    Json::Object(m)
}

pub fn astate_json(s: &AState) -> Json {
    match s {
        AState::Bot => Json::Null,
        AState::Map(m) => Json::Object(
            m.iter()
                .map(|(k, v)| (k.to_string(), aval_json(v)))
                .collect(),
        ),
    }
}

fn stream_json(s: &Stream) -> Json {
    match s {
        Stream::Bot => Json::Null,
        Stream::Of(v) => aval_json(v),
    }
}

fn heap_json(h: &AHeap) -> Json {
    match h {
        AHeap::Bot => Json::Null,
        AHeap::Top => json!("top"),
        AHeap::Heap { next, cells } => json!({
            "next": next,
            "cells": cells.iter().map(|(k, v)| (k.to_string(), aval_json(v))).collect::<Map<_, _>>(),
        }),
    }
}

fn io_json(s: &AIo) -> Json {
    json!({
        "in": stream_json(&s.input),
        "out": stream_json(&s.output),
        "state": astate_json(&s.state),
        "heap": heap_json(&s.heap),
    })
}

/// Tagged encoding, `{"int": [0, "+inf"]}`.
pub fn abs_json(a: &Abs) -> Json {
    match a {
        Abs::Int(i) => json!({ "int": itv_json(i) }),
        Abs::Bool(b) => json!({ "bool": b4_json(*b) }),
        Abs::Val(v) => json!({ "val": aval_json(v) }),
        Abs::State(s) => json!({ "state": astate_json(s) }),
        Abs::Loc(l) => json!({ "loc": loc_json(l) }),
        Abs::In(s) => json!({ "in": stream_json(s) }),
        Abs::Out(s) => json!({ "out": stream_json(s) }),
        Abs::Heap(h) => json!({ "heap": heap_json(h) }),
        Abs::Io(s) => json!({ "io": io_json(s) }),
        Abs::ValIo(v, s) => json!({ "valio": [aval_json(v), io_json(s)] }),
        Abs::ExcIo(b, s) => json!({ "excio": [b4_json(*b), io_json(s)] }),
    }
}

fn bound_of(j: &Json, at: &str) -> Result<Bound, JsonError> {
    match j {
        Json::String(s) if s == "-inf" => Ok(Bound::NegInf),
        Json::String(s) if s == "+inf" => Ok(Bound::PosInf),
        Json::String(s) => s
            .parse()
            .map(Bound::Fin)
            .or_else(|_| shape(at, format!("bad bound `{s}`"))),
        Json::Number(n) => match n.as_i64() {
            Some(i) => Ok(Bound::Fin(i.into())),
            None => shape(at, "bounds must be integers"),
        },
        _ => shape(at, "bad bound"),
    }
}

fn itv_of(j: &Json, at: &str) -> Result<Itv, JsonError> {
    match j {
        Json::Null => Ok(Itv::Bot),
        Json::Array(a) if a.len() == 2 => {
            let (lo, hi) = (bound_of(&a[0], at)?, bound_of(&a[1], at)?);
            if !(lo <= hi && lo != Bound::PosInf && hi != Bound::NegInf) {
                return shape(at, "empty interval; use null for bottom");
            }
            Ok(Itv::new(lo, hi))
        }
        Json::Number(_) | Json::String(_) => {
            let b = bound_of(j, at)?;
            match b {
                Bound::Fin(_) => Ok(Itv::Range(b.clone(), b)),
                _ => shape(at, "infinite point"),
            }
        }
        _ => shape(at, "expected [lo, hi] or null"),
    }
}

fn b4_of(j: &Json, at: &str) -> Result<B4, JsonError> {
    match j.as_str() {
        Some("bot") => Ok(B4::Bot),
        Some("tt") => Ok(B4::Tt),
        Some("ff") => Ok(B4::Ff),
        Some("top") => Ok(B4::Top),
        _ => match j {
            Json::Null => Ok(B4::Bot),
            Json::Bool(b) => Ok(B4::of(*b)),
            _ => shape(at, "expected bot, tt, ff or top"),
        },
    }
}

fn loc_of(j: &Json, at: &str) -> Result<LocSet, JsonError> {
    match j {
        Json::String(s) if s == "top" => Ok(LocSet::Top),
        Json::Null => Ok(LocSet::default()),
        Json::Array(a) => a
            .iter()
            .map(|x| {
                x.as_u64()
                    .map_or_else(|| shape(at, "locations are naturals"), Ok)
            })
            .collect::<Result<_, _>>()
            .map(LocSet::Set),
        _ => shape(at, "expected a location list or \"top\""),
    }
}

fn obj<'j>(j: &'j Json, at: &str) -> Result<&'j Map<String, Json>, JsonError> {
    j.as_object()
        .map_or_else(|| shape(at, "expected an object"), Ok)
}

/// Missing components are bottom.
pub fn aval_of(j: &Json, at: &str) -> Result<AVal, JsonError> {
    let m = obj(j, at)?;
    for k in m.keys() {
        if !matches!(k.as_str(), "int" | "bool" | "loc") {
            return shape(at, format!("unknown field `{k}`"));
        }
    }
    Ok(AVal {
        int: m.get("int").map_or(Ok(Itv::Bot), |x| itv_of(x, at))?,
        bool: m.get("bool").map_or(Ok(B4::Bot), |x| b4_of(x, at))?,
        loc: m
            .get("loc")
            .map_or(Ok(LocSet::default()), |x| loc_of(x, at))?,
    })
}

pub fn astate_of(j: &Json, at: &str) -> Result<AState, JsonError> {
    if j.is_null() {
        return Ok(AState::Bot);
    }
    let m = obj(j, at)?;
    let mut out = Vec::new();
    for (k, v) in m {
        out.push((name(k), aval_of(v, &format!("{at}.{k}"))?));
    }
    Ok(AState::from_pairs(out))
}

fn stream_of(j: &Json, at: &str) -> Result<Stream, JsonError> {
    if j.is_null() {
        return Ok(Stream::Bot);
    }
    aval_of(j, at).map(Stream::Of)
}

fn heap_of(j: &Json, at: &str) -> Result<AHeap, JsonError> {
    match j {
        Json::Null => Ok(AHeap::Bot),
        Json::String(s) if s == "top" => Ok(AHeap::Top),
        _ => {
            let m = obj(j, at)?;
            let next = m
                .get("next")
                .and_then(Json::as_u64)
                .map_or_else(|| shape(at, "heap needs a natural `next`"), Ok)?;
            let mut cells = BTreeMap::new();
            if let Some(c) = m.get("cells") {
                for (k, v) in obj(c, at)? {
                    let l: u64 = k
                        .parse()
                        .or_else(|_| shape(at, format!("bad location `{k}`")))?;
                    if l >= next {
                        return shape(at, format!("location {l} is not below next"));
                    }
                    cells.insert(l, aval_of(v, at)?);
                }
            }
            Ok(AHeap::Heap { next, cells })
        }
    }
}

fn io_of(j: &Json, at: &str) -> Result<AIo, JsonError> {
    let m = obj(j, at)?;
    let get = |k: &str| m.get(k).unwrap_or(&Json::Null);
    Ok(AIo {
        input: stream_of(get("in"), at)?,
        output: stream_of(get("out"), at)?,
        state: astate_of(get("state"), at)?,
        heap: heap_of(get("heap"), at)?,
    })
}

fn pair<'j>(j: &'j Json, at: &str) -> Result<(&'j Json, &'j Json), JsonError> {
    match j.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => shape(at, "expected a pair"),
    }
}

pub fn abs_of(j: &Json, at: &str) -> Result<Abs, JsonError> {
    let m = obj(j, at)?;
    if m.len() != 1 {
        return shape(at, "expected exactly one tag");
    }
    let (tag, v) = m.iter().next().expect("one entry");
    Ok(match tag.as_str() {
        "int" => Abs::Int(itv_of(v, at)?),
        "bool" => Abs::Bool(b4_of(v, at)?),
        "val" => Abs::Val(aval_of(v, at)?),
        "state" => Abs::State(astate_of(v, at)?),
        "loc" => Abs::Loc(loc_of(v, at)?),
        "in" => Abs::In(stream_of(v, at)?),
        "out" => Abs::Out(stream_of(v, at)?),
        "heap" => Abs::Heap(heap_of(v, at)?),
        "io" => Abs::Io(Box::new(io_of(v, at)?)),
        "valio" => {
            let (a, b) = pair(v, at)?;
            Abs::ValIo(aval_of(a, at)?, Box::new(io_of(b, at)?))
        }
        "excio" => {
            let (a, b) = pair(v, at)?;
            Abs::ExcIo(b4_of(a, at)?, Box::new(io_of(b, at)?))
        }
        t => return shape(at, format!("unknown tag `{t}`")),
    })
}

fn term_json(t: &Term) -> Json {
    json!(print(t))
}

pub fn triple_json(t: &AbstractTriple<Abs>) -> Json {
    json!({
        "state": abs_json(&t.state),
        "term": term_json(&t.term),
        "result": abs_json(&t.result),
    })
}

/// `{"triples": [...]}`.
pub fn triples_json(ts: &[AbstractTriple<Abs>]) -> Json {
    json!({ "triples": ts.iter().map(triple_json).collect::<Vec<_>>() })
}

/// Accepts `{"triples": [...]}` or a bare list. Terms are surface text.
pub fn parse_triples(src: &str, dialect: Dialect) -> Result<Vec<AbstractTriple<Abs>>, JsonError> {
    let j: Json = serde_json::from_str(src).map_err(|e| JsonError::Parse(e.to_string()))?;
    let list = match &j {
        Json::Array(a) => a,
        Json::Object(m) => match m.get("triples") {
            Some(Json::Array(a)) => a,
            _ => return shape("$", "expected a `triples` list"),
        },
        _ => return shape("$", "expected a `triples` list"),
    };
    list.iter()
        .enumerate()
        .map(|(i, t)| {
            let at = format!("triples[{i}]");
            let m = obj(t, &at)?;
            let field = |k: &str| {
                m.get(k)
                    .map_or_else(|| shape(&at, format!("missing `{k}`")), Ok)
            };
            let text = field("term")?
                .as_str()
                .map_or_else(|| shape(&at, "`term` must be a string"), Ok)?;
            let term = parse_program(text, dialect).map_err(|err| JsonError::Syntax {
                text: text.to_string(),
                err,
            })?;
            Ok(AbstractTriple::new(
                abs_of(field("state")?, &format!("{at}.state"))?,
                term,
                abs_of(field("result")?, &format!("{at}.result"))?,
            ))
        })
        .collect()
}

fn slot_json(s: &ASlot<Abs>) -> Json {
    match s {
        ASlot::Flow(a) => abs_json(a),
        ASlot::Term(ATerm::Term(t)) => json!({ "term": term_or_base(t) }),
        ASlot::Term(ATerm::Bot(sort)) => json!({ "term": null, "sort": &**sort }),
    }
}

fn term_or_base(t: &Term) -> String {
    match t {
        Term::Base(b) => b.text.to_string(),
        _ => print(t),
    }
}

fn constraint_json(c: &Constraint<Abs>) -> Option<Json> {
    Some(match c {
        Constraint::SortIs(..) => return None,
        Constraint::Eq(a, b) => json!({ "eq": [a.to_string(), b.to_string()] }),
        Constraint::Leq(a, b) => json!({ "leq": [a.to_string(), b.to_string()] }),
        Constraint::EqTerm(v, t) => json!({ "eqterm": [v.to_string(), term_or_base(t)] }),
        Constraint::FilterApp {
            filter,
            inputs,
            outputs,
        } => json!({
            "filter": &**filter,
            "in": inputs.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "out": outputs.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
        Constraint::Above(a, v) => json!({ "geq": [v.to_string(), abs_json(a)] }),
    })
}

/// `{"vars": {"r#x_s": "State", ..}, "constraints": [..]}`, constraints
/// sorted by their serialized form.
pub fn constraints_json(cs: &ConstraintSet<Abs>) -> Json {
    let vars: Map<String, Json> = cs
        .vars()
        .into_iter()
        .map(|(v, s)| (v.to_string(), json!(&*s)))
        .collect();
    let mut list: Vec<Json> = cs.constraints.iter().filter_map(constraint_json).collect();
    list.sort_by_cached_key(|j| j.to_string());
    json!({ "vars": vars, "constraints": list })
}

pub fn solution_json(sol: &Solution<Abs>) -> Json {
    Json::Object(
        sol.iter()
            .map(|(k, v)| (k.to_string(), slot_json(v)))
            .collect(),
    )
}
