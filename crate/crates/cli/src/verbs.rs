use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value as Json};
use skelsem_core::absint::check_invariant;
use skelsem_core::consistency::check_filter_consistency;
use skelsem_core::constraints::analyze;
use skelsem_core::language::ASlot;
use skelsem_core::wf::check_language;
use skelsem_core::{
    eval, generate, AbsError, ConcreteError, ConstraintError, ConstraintVar, Exec, Language,
    ProgramPoint, Term, Var,
};
use skelsem_lang::domain::{AHeap, AIo, AVal, Itv, Stream};
use skelsem_lang::json::{abs_json, abs_of, constraints_json, parse_triples, triples_json};
use skelsem_lang::sample::Sampler;
use skelsem_lang::syntax::{parse_astate, parse_input, parse_state};
use skelsem_lang::value::IoState;
use skelsem_lang::{by_name, parse_program, Abs, Dialect, Domains, Value};

use crate::{exit, mutate, Cli, Lang, Usage, Verb};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn program(path: &Path, dialect: Dialect) -> Result<Term> {
    let src = read(path)?;
    parse_program(&src, dialect).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, j: &Json) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(j)?)?;
    Ok(())
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let lang_name = match cli.lang {
        Lang::While => "while",
        Lang::WhileExt => "while-ext",
    };
    let (mut lang, dialect) = by_name(lang_name).expect("known pack");
    let ex = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.verb {
        Verb::CheckWf { mutate } => {
            if let Some(m) = mutate {
                m.apply(&mut lang);
            }
            check_wf(cli, &lang, ex, out)
        }
        Verb::Eval {
            program: p,
            state,
            input,
            fuel,
        } => {
            let t = program(p, dialect)?;
            let store = parse_state(state).map_err(|e| usage(format!("--state: {e}")))?;
            let sigma = match cli.lang {
                Lang::While => {
                    if !input.is_empty() {
                        return Err(usage("--input needs --lang while-ext"));
                    }
                    Value::State(store)
                }
                Lang::WhileExt => {
                    let input = parse_input(input).map_err(|e| usage(format!("--input: {e}")))?;
                    Value::Io(Box::new(IoState::new(input, store)))
                }
            };
            run_eval(cli, &lang, &sigma, &t, *fuel, out)
        }
        Verb::CheckTriples { file, split } => {
            let src = read(file)?;
            let triples = parse_triples(&src, dialect)
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let report = check_invariant(&lang, &triples, *split, ex).map_err(|e| match e {
                AbsError::IllSortedQuery(m) => usage(format!("{}: {m}", file.display())),
                e => e.into(),
            })?;
            let failed = report.failures.len();
            if cli.json {
                let mut j = triples_json(&report.failures);
                j["checked"] = json!(report.checked);
                j["passed"] = json!(report.passed());
                j["unsupported_covers"] = json!(report.unsupported_covers);
                emit(out, &j)?;
            } else if report.passed() {
                writeln!(out, "PASS {}/{}", report.checked, report.checked)?;
            } else {
                writeln!(out, "FAIL {failed}/{}", report.checked)?;
                for t in &report.failures {
                    writeln!(
                        out,
                        "  {} {} {}",
                        t.state,
                        skelsem_lang::print(&t.term),
                        t.result
                    )?;
                }
            }
            if report.unsupported_covers > 0 {
                writeln!(
                    err,
                    "warning: {} cover test(s) outside the decidable fragment",
                    report.unsupported_covers
                )?;
            }
            Ok(if report.passed() {
                exit::OK
            } else {
                exit::CHECK_FAILED
            })
        }
        Verb::GenConstraints { program: p, output } => {
            let t = program(p, dialect)?;
            let cs = generate(&lang, &t).map_err(constraint_error)?;
            let text = serde_json::to_string_pretty(&constraints_json(&cs))?;
            match output {
                Some(path) => fs::write(path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => writeln!(out, "{text}")?,
            }
            Ok(exit::OK)
        }
        Verb::Analyze {
            program: p,
            state,
            widen_after,
            triples,
        } => {
            let t = program(p, dialect)?;
            let seed = abstract_seed(cli.lang, state)?;
            let (ts, sol) = match analyze(&lang, &t, seed.clone(), *widen_after, ex) {
                Ok(r) => r,
                Err(ConstraintError::InvariantCheckFailed { failures }) => {
                    writeln!(
                        err,
                        "error: {failures} induced triple(s) fail the invariant check"
                    )?;
                    return Ok(exit::CHECK_FAILED);
                }
                Err(e) => return Err(constraint_error(e)),
            };
            let flow = |v: Var| match sol.get(&ConstraintVar::new(&ProgramPoint::root(), &v)) {
                Some(ASlot::Flow(a)) => a.clone(),
                _ => unreachable!("root flow variables are always assigned"),
            };
            let (st, res) = (flow(Var::sigma()), flow(Var::out()));
            if let Some(path) = triples {
                let text = serde_json::to_string_pretty(&triples_json(&ts))?;
                fs::write(path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if cli.json {
                emit(
                    out,
                    &json!({
                        "seed": abs_json(&seed),
                        "state": abs_json(&st),
                        "result": abs_json(&res),
                        "triples": ts.len(),
                    }),
                )?;
            } else {
                writeln!(out, "state  {st}")?;
                writeln!(out, "result {res}")?;
                writeln!(out, "triples {}", ts.len())?;
            }
            Ok(exit::OK)
        }
        Verb::ShowSkeleton { ctor } => {
            let skels: Vec<_> = match ctor {
                Some(c) => vec![lang.skeleton(c).map_err(|e| usage(e.to_string()))?],
                None => lang.skeletons().iter().collect(),
            };
            if cli.json {
                let list: Vec<Json> = skels
                    .iter()
                    .map(|s| json!({ "name": &*s.name, "ctor": &*s.ctor, "text": s.dump() }))
                    .collect();
                emit(out, &Json::Array(list))?;
            } else {
                let texts: Vec<String> = skels.iter().map(|s| s.dump()).collect();
                write!(out, "{}", texts.join("\n"))?;
            }
            Ok(exit::OK)
        }
        Verb::ProveFilters { trials, mutate } => {
            if let Some(f) = mutate {
                if !mutate::break_filter(&mut lang, f) {
                    return Err(usage(format!("no filter named `{f}`")));
                }
            }
            let report = check_filter_consistency(&lang, &Sampler, *trials, cli.seed, ex);
            if cli.json {
                let list: Vec<Json> = report
                    .filters
                    .iter()
                    .map(|f| {
                        json!({
                            "filter": f.filter,
                            "passed": f.passed(),
                            "trials": f.trials,
                            "related": f.related,
                            "violations": f.violations,
                            "counterexamples": f.counterexamples,
                            "monotonicity_trials": f.monotonicity_trials,
                            "monotonicity_failures": f.monotonicity_failures,
                        })
                    })
                    .collect();
                emit(out, &json!({ "seed": cli.seed, "filters": list }))?;
            } else {
                for f in &report.filters {
                    let tag = if f.passed() { "PASS" } else { "FAIL" };
                    writeln!(
                        out,
                        "{tag} {} trials={} related={} violations={} monotone={}/{}",
                        f.filter,
                        f.trials,
                        f.related,
                        f.violations,
                        f.monotonicity_trials - f.monotonicity_failures,
                        f.monotonicity_trials
                    )?;
                    if let Some(c) = f.counterexamples.first() {
                        writeln!(out, "  {c}")?;
                    }
                }
            }
            Ok(if report.passed() {
                exit::OK
            } else {
                exit::CHECK_FAILED
            })
        }
    }
}

fn check_wf(cli: &Cli, lang: &Language<Domains>, ex: Exec, out: &mut dyn Write) -> Result<i32> {
    let report = check_language(lang, ex);
    if cli.json {
        let list: Vec<Json> = report
            .verdicts
            .iter()
            .map(|v| match &v.result {
                Ok(_) => json!({ "skeleton": &*v.skeleton, "ok": true }),
                Err(e) => json!({
                    "skeleton": &*v.skeleton,
                    "ok": false,
                    "bone": e.bone.to_string(),
                    "reason": e.reason.to_string(),
                    "detail": e.detail,
                }),
            })
            .collect();
        emit(out, &Json::Array(list))?;
    } else {
        for v in &report.verdicts {
            writeln!(out, "{}", v.line())?;
        }
    }
    Ok(if report.is_ok() {
        exit::OK
    } else {
        exit::CHECK_FAILED
    })
}

fn run_eval(
    cli: &Cli,
    lang: &Language<Domains>,
    sigma: &Value,
    t: &Term,
    fuel: u64,
    out: &mut dyn Write,
) -> Result<i32> {
    let (results, code) = match eval(lang, sigma, t, fuel) {
        Ok(r) if r.is_empty() => (r, exit::STUCK),
        Ok(r) => (r, exit::OK),
        Err(ConcreteError::FuelExhausted) => (Default::default(), exit::FUEL),
        Err(ConcreteError::IllSortedQuery(m)) => return Err(usage(m)),
        Err(e) => return Err(e.into()),
    };
    let tag = match code {
        exit::STUCK => "STUCK",
        exit::FUEL => "FUEL",
        _ => "OK",
    };
    if cli.json {
        let list: Vec<String> = results.iter().map(Value::to_string).collect();
        emit(out, &json!({ "outcome": tag, "results": list }))?;
    } else if results.is_empty() {
        writeln!(out, "{tag}")?;
    } else {
        for r in &results {
            writeln!(out, "{r}")?;
        }
    }
    Ok(code)
}

fn constraint_error(e: ConstraintError) -> anyhow::Error {
    match e {
        ConstraintError::IllSortedQuery(m) => usage(m),
        e => e.into(),
    }
}

/// Abstract store text, or any JSON abstract value of the program's input sort.
fn abstract_seed(lang: Lang, text: &str) -> Result<Abs> {
    if let Ok(j) = serde_json::from_str::<Json>(text) {
        return abs_of(&j, "--state").map_err(|e| usage(e.to_string()));
    }
    let state = parse_astate(text).map_err(|e| usage(format!("--state: {e}")))?;
    Ok(match lang {
        Lang::While => Abs::State(state),
        Lang::WhileExt => Abs::Io(Box::new(AIo {
            input: Stream::Of(AVal::int(Itv::top())),
            output: Stream::Of(AVal::bot()),
            state,
            heap: AHeap::empty(),
        })),
    })
}
