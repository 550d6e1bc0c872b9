//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;
use skelsem_core::consistency::check_filter_consistency;
use skelsem_core::constraints::{analyze, verify};
use skelsem_core::language::ASlot;
use skelsem_core::wf::check_language;
use skelsem_core::{
    abstract_immediate_consequence_on, check_invariant, gen_points, generate,
    immediate_consequence_on, solution_to_triples, solve, split_lookup, AbstractTriple, Carriers,
    ConcreteTriple, ConstraintError, ConstraintVar, Exec, Language, ProgramPoint, Term, Var,
};
use skelsem_lang::domain::{AIo, AState, AVal, Itv, Stream};
use skelsem_lang::json::{constraints_json, parse_triples};
use skelsem_lang::sample;
use skelsem_lang::syntax::{parse_astate, parse_aval};
use skelsem_lang::{parse_program, Abs, Dialect, Domains, Value};
use skelsem_testkit::{corpus, gen, Halt, Machine, V};

use common::*;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    let p = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn while_term(src: &str) -> Term {
    parse_program(src, Dialect::While).unwrap()
}

fn st(src: &str) -> Abs {
    Abs::State(parse_astate(src).unwrap())
}

fn val(src: &str) -> Abs {
    Abs::Val(parse_aval(src).unwrap())
}

const LOOP: &str = "while not (x = 0) do x := x - 1 end";

fn wf_reproduction() -> Verdict {
    let base = check_language(&pack(false), Exec::Parallel);
    let ext = check_language(&pack(true), Exec::Parallel);
    ensure(base.verdicts.len() == 10 && base.is_ok(), || {
        format!("{:?}", base.verdicts)
    })?;
    ensure(ext.is_ok(), || format!("{:?}", ext.verdicts))?;
    for m in [
        skelsem::WfMutation::UndefinedVar,
        skelsem::WfMutation::BranchShare,
        skelsem::WfMutation::FilterArity,
    ] {
        for ext in [false, true] {
            let mut lang = pack(ext);
            m.apply(&mut lang);
            let (skel, reason) = m.target();
            let report = check_language(&lang, Exec::Parallel);
            let failed: Vec<_> = report.verdicts.iter().filter(|v| !v.is_ok()).collect();
            ensure(
                failed.len() == 1
                    && &*failed[0].skeleton == skel
                    && failed[0].result.as_ref().err().map(|e| e.reason) == Some(reason),
                || {
                    format!(
                        "{m:?} on ext={ext}: {:?}",
                        failed.iter().map(|v| v.line()).collect::<Vec<_>>()
                    )
                },
            )?;
        }
    }
    Ok(format!(
        "{} + {} skeletons OK; 3 mutations x 2 packs fail as expected",
        base.verdicts.len(),
        ext.verdicts.len()
    ))
}

fn concrete_corpus() -> Verdict {
    let cases = corpus::cases();
    ensure(cases.len() == 20, || format!("{} cases", cases.len()))?;
    let (base, ext) = (pack(false), pack(true));
    let mut stuck = 0;
    for c in &cases {
        let lang = if c.ext { &ext } else { &base };
        agree(lang, &c.program, &c.start, c.ext).map_err(|e| format!("{}: {e}", c.name))?;
        if matches!(
            skelsem_testkit::run(&c.program, c.start.clone(), ORACLE_FUEL),
            Err(Halt::Stuck(_))
        ) {
            stuck += 1;
        }
    }
    let n_ext = cases.iter().filter(|c| c.ext).count();
    Ok(format!(
        "20/20 equal to the direct interpreter ({n_ext} extended, {stuck} stuck)"
    ))
}

fn split_reproduction() -> Verdict {
    let lang = pack(false);
    let a = parse_triples(&fixture("countdown_split.json"), Dialect::While)
        .map_err(|e| e.to_string())?;
    ensure(a.len() == 14, || format!("{} triples", a.len()))?;
    let with = check_invariant(&lang, &a, true, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(with.passed(), || {
        format!("with splitting: {:?}", with.failures)
    })?;
    let lp = while_term(LOOP);
    let pos_loop = AbstractTriple::new(st("x=[1;+inf]"), lp.clone(), st("x=0"));
    let without = check_invariant(&lang, &a, false, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(without.failures == [pos_loop.clone()], || {
        format!("without splitting: {:?}", without.failures)
    })?;
    let goal = st("x=[0;+inf]");
    let found = split_lookup::<Domains>(&a, &goal, &lp).map_err(|e| e.to_string())?;
    ensure(found == [st("x=0")].into(), || {
        format!("split_lookup gave {found:?}")
    })?;

    let mut gap: Vec<_> = a.iter().filter(|t| **t != pos_loop).cloned().collect();
    let lost = split_lookup::<Domains>(&gap, &goal, &lp).map_err(|e| e.to_string())?;
    ensure(lost.is_empty(), || {
        format!("after removal split_lookup gave {lost:?}")
    })?;
    let derived = AbstractTriple::new(goal, lp, st("x=0"));
    gap.push(derived.clone());
    let r = check_invariant(&lang, &gap, true, Exec::Parallel).map_err(|e| e.to_string())?;
    ensure(r.failures == [derived], || {
        format!("after removal: {:?}", r.failures)
    })?;
    Ok(
        "14/14 with splitting, 13/14 without; Sp gives (x=[0;+inf], t, x=0); \
        removing (x=[1;+inf], t, x=0) drops it from Sp and the check fails on it"
            .into(),
    )
}

fn constraint_reproduction() -> Verdict {
    let lang = pack(false);
    let t = while_term(LOOP);
    let pts: Vec<String> = gen_points(&lang, &t)
        .iter()
        .map(ToString::to_string)
        .collect();
    let want = [
        "r", "r.1", "r.1.1", "r.1.1.1", "r.1.1.2", "r.2", "r.2.2", "r.2.2.1", "r.2.2.2",
    ];
    ensure(pts == want, || format!("points {pts:?}"))?;
    let j = constraints_json(&generate(&lang, &t).map_err(|e| e.to_string())?);
    ensure(
        j["vars"]["r#x_s"] == "State" && j["vars"]["r#x_o"] == "State",
        || format!("sorts {} {}", j["vars"]["r#x_s"], j["vars"]["r#x_o"]),
    )?;
    let list: Vec<String> = j["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.to_string())
        .collect();
    let shown = [
        r#"{"eqterm":["r#t1","not (x = 0)"]}"#,
        r#"{"eqterm":["r#t2","x := x - 1"]}"#,
        r#"{"leq":["r#x_s","r.1#x_s"]}"#,
        r#"{"leq":["r.1#x_o","r#f1"]}"#,
    ];
    for c in shown {
        ensure(list.iter().any(|l| l == c), || format!("missing {c}"))?;
    }
    let isbool = json!({"filter": "isBool", "in": ["r#f1"], "out": ["r#f1p"]}).to_string();
    ensure(list.contains(&isbool), || format!("missing {isbool}"))?;
    Ok(format!(
        "9 points; 2 sort + 4 root constraints bit-exact; {} constraints total",
        list.len()
    ))
}

fn widen_state(a: &Abs) -> Abs {
    let top_vars = |s: &AState| match s {
        AState::Map(m) => AState::from_pairs(m.keys().map(|k| (k.clone(), AVal::int(Itv::top())))),
        AState::Bot => AState::Bot,
    };
    match a {
        Abs::State(s) => Abs::State(top_vars(s)),
        Abs::Io(io) => Abs::Io(Box::new(AIo {
            input: Stream::Of(AVal::int(Itv::top())),
            state: top_vars(&io.state),
            ..(**io).clone()
        })),
        other => other.clone(),
    }
}

fn gen_soundness() -> Verdict {
    let (base, ext) = (pack(false), pack(true));
    let mut runs = 0;
    for c in corpus::cases() {
        let lang = if c.ext { &ext } else { &base };
        let t = term(&c.program, c.ext);
        let exact = alpha(&c.start, c.ext);
        for seed in [exact.clone(), widen_state(&exact)] {
            let mut cs = generate(lang, &t).map_err(|e| format!("{}: {e}", c.name))?;
            cs.seed(seed);
            let sol = solve(lang, &cs, 3).map_err(|e| format!("{}: {e}", c.name))?;
            verify(lang, &cs, &sol).map_err(|e| format!("{}: {e}", c.name))?;
            let ts = solution_to_triples(lang, &t, &sol, Exec::Parallel)
                .map_err(|e| format!("{}: {e}", c.name))?;
            let r = check_invariant(lang, &ts, false, Exec::Parallel).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{}: {:?}", c.name, r.failures))?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs}/{runs} solutions verified and closed under A#"
    ))
}

fn filter_consistency() -> Verdict {
    let lang = pack(true);
    let report = check_filter_consistency(&lang, &sample::Sampler, 10_500, 2024, Exec::Parallel);
    ensure(report.filters.len() == 28, || {
        format!("{} filters", report.filters.len())
    })?;
    let fewest = report.filters.iter().map(|f| f.trials).min().unwrap_or(0);
    ensure(fewest >= 10_000, || {
        format!("only {fewest} samples for some filter")
    })?;
    if let Some(f) = report.filters.iter().find(|f| !f.passed()) {
        return Err(format!("{}: {:?}", f.filter, f.counterexamples));
    }
    let base =
        check_filter_consistency(&pack(false), &sample::Sampler, 10_000, 2024, Exec::Parallel);
    ensure(base.passed(), || "base pack filters failed".into())?;
    let mut broken = pack(true);
    skelsem::break_filter(&mut broken, "add");
    let caught = check_filter_consistency(&broken, &sample::Sampler, 2_000, 2024, Exec::Parallel);
    let bad: Vec<&str> = caught
        .filters
        .iter()
        .filter(|f| !f.passed())
        .map(|f| f.filter.as_str())
        .collect();
    ensure(bad == ["add"], || format!("mutant flagged {bad:?}"))?;
    Ok(format!(
        "28 filters x >= {fewest} samples, 0 counterexamples; broken add# caught"
    ))
}

/// A random abstract seed and a concrete machine inside it.
fn seeded_machine(rng: &mut StdRng, ext: bool) -> (Abs, Machine) {
    let mut m = Machine::default();
    let mut pairs = Vec::new();
    for x in gen::INT_VARS {
        let lo: i64 = rng.gen_range(-3..=3);
        let hi = lo + rng.gen_range(0..=4);
        let itv = match rng.gen_range(0..6) {
            0 => Itv::top(),
            1 => Itv::at_least(lo),
            _ => Itv::of(lo, hi),
        };
        let v = rng.gen_range(lo..=hi);
        m.vars.insert(x.to_string(), V::Int(v.into()));
        pairs.push((skelsem_core::name(x), AVal::int(itv)));
    }
    let state = AState::from_pairs(pairs);
    if !ext {
        return (Abs::State(state), m);
    }
    let n = rng.gen_range(0..4);
    m.input = (0..n)
        .map(|_| V::Int(rng.gen_range(0..=5).into()))
        .collect();
    let input = if rng.gen_bool(0.5) {
        Itv::top()
    } else {
        Itv::of(0, 5)
    };
    let seed = Abs::Io(Box::new(AIo {
        input: Stream::Of(AVal::int(input)),
        output: Stream::Of(AVal::bot()),
        state,
        heap: skelsem_lang::domain::AHeap::empty(),
    }));
    (seed, m)
}

fn end_to_end() -> Verdict {
    let (base, ext_lang) = (pack(false), pack(true));
    let mut rng = StdRng::seed_from_u64(7);
    let (mut checked, mut no_solution, mut no_result, mut attempts) = (0, 0, 0, 0);
    while checked < 1000 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {checked} usable cases in 5000 attempts"));
        }
        let ext = attempts % 2 == 0;
        let lang = if ext { &ext_lang } else { &base };
        let cfg = if ext {
            gen::Config::ext(3)
        } else {
            gen::Config::base(3)
        };
        let s = gen::stmt(&mut rng, cfg);
        let (seed, m) = seeded_machine(&mut rng, ext);
        let t = term(&s, ext);
        let sol = match analyze(lang, &t, seed, 3, Exec::Sequential) {
            Ok((_, sol)) => sol,
            Err(ConstraintError::InvariantCheckFailed { .. }) => {
                no_solution += 1;
                continue;
            }
            Err(e) => return Err(format!("{s}: {e}")),
        };
        let root = |v: Var| match sol.get(&ConstraintVar::new(&ProgramPoint::root(), &v)) {
            Some(ASlot::Flow(a)) => a.clone(),
            other => panic!("root variable unassigned: {other:?}"),
        };
        let Ok(o) = skelsem_testkit::run(&s, m.clone(), ORACLE_FUEL) else {
            no_result += 1;
            continue;
        };
        let (sigma, res) = (root(Var::sigma()), root(Var::out()));
        ensure(Domains::member(&start(&m, ext), &sigma), || {
            format!("{s}: start not in {sigma}")
        })?;
        let v = finish(&o, ext);
        ensure(Domains::member(&v, &res), || {
            format!("{s}\nfrom {m:?}\n{v} not in {res}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "1000/1000 concrete results inside the abstract result \
         ({no_result} runs without result and {no_solution} without solution skipped)"
    ))
}

fn next_state(v: &Value) -> Option<Value> {
    match v {
        Value::State(_) => Some(v.clone()),
        Value::ExcIo(true, io) | Value::ValIo(_, io) => Some(Value::Io(io.clone())),
        _ => None,
    }
}

/// Concrete hypotheses for the subterms of a random program, some of them
/// deliberately wrong, plus the queries they answer.
fn concrete_instance(
    lang: &Language<Domains>,
    rng: &mut StdRng,
    ext: bool,
) -> (Vec<(Value, Term)>, BTreeSet<ConcreteTriple<Value>>) {
    let cfg = if ext {
        gen::Config::ext(2)
    } else {
        gen::Config::base(2)
    };
    let t = term(&gen::stmt(rng, cfg), ext);
    let subs = subterms(&t);
    let mut pool = vec![start(&gen::machine(rng, ext), ext)];
    let mut hyps = BTreeSet::new();
    for _ in 0..2 {
        let mut next = Vec::new();
        for sigma in &pool {
            for u in &subs {
                if let Ok(rs) = skelsem_core::eval(lang, sigma, u, 40) {
                    for r in rs {
                        next.extend(next_state(&r));
                        hyps.insert(ConcreteTriple {
                            state: sigma.clone(),
                            term: u.clone(),
                            result: r,
                        });
                    }
                }
            }
        }
        for s in next {
            if pool.len() < 4 && !pool.contains(&s) {
                pool.push(s);
            }
        }
    }
    let all: Vec<_> = hyps.iter().cloned().collect();
    for h in &all {
        if rng.gen_bool(0.2) {
            let other = &all[rng.gen_range(0..all.len())];
            if std::mem::discriminant(&other.result) == std::mem::discriminant(&h.result) {
                hyps.insert(ConcreteTriple {
                    result: other.result.clone(),
                    ..h.clone()
                });
            }
        }
    }
    let queries = pool
        .iter()
        .flat_map(|s| subs.iter().map(move |u| (s.clone(), u.clone())))
        .collect();
    (queries, hyps)
}

fn hooks_of(lang: &Language<Domains>, t: &Term) -> usize {
    fn count(b: &skelsem_core::Body) -> usize {
        b.0.iter()
            .map(|bone| match bone {
                skelsem_core::Bone::Hook { .. } => 1,
                skelsem_core::Bone::Filter { .. } => 0,
                skelsem_core::Bone::Branches { branches, .. } => {
                    branches.iter().map(count).max().unwrap_or(0)
                }
            })
            .sum()
    }
    t.head()
        .and_then(|c| lang.skeleton(c).ok())
        .map_or(0, |s| count(&s.body))
}

fn abstract_instance(
    lang: &Language<Domains>,
    rng: &mut StdRng,
    ext: bool,
) -> (Vec<(Abs, Term)>, Vec<AbstractTriple<Abs>>) {
    let cfg = if ext {
        gen::Config::ext(2)
    } else {
        gen::Config::base(2)
    };
    let t = term(&gen::stmt(rng, cfg), ext);
    let subs = subterms(&t);
    let in_sort = if ext { "IOState" } else { "State" };
    let exact = alpha(&gen::machine(rng, ext), ext);
    let wide = sample::abs(in_sort, rng);
    let pool = [exact.clone(), Domains::join(&exact, &wide), wide];
    let mut hyps = Vec::new();
    for sigma in &pool {
        for u in &subs {
            let sort = lang.check_closed(u).unwrap();
            let out = lang.syntax.out_sort(&sort).unwrap().clone();
            for _ in 0..rng.gen_range(0..3) {
                hyps.push(AbstractTriple::new(
                    sigma.clone(),
                    u.clone(),
                    sample::abs(&out, rng),
                ));
            }
        }
    }
    let queries = pool
        .iter()
        .flat_map(|s| subs.iter().map(move |u| (s.clone(), u.clone())))
        .collect();
    (queries, hyps)
}

fn derived_rules(lang: &Language<Domains>) -> Result<(), String> {
    let sigma = st("x=[1;2],y=[10;20]");
    let hyps = [
        AbstractTriple::new(sigma.clone(), while_term("x"), val("[1;2]")),
        AbstractTriple::new(sigma.clone(), while_term("y"), val("[10;20]")),
    ];
    let q = [(sigma.clone(), while_term("x + y"))];
    let got = abstract_immediate_consequence_on(lang, &q, &hyps).map_err(|e| e.to_string())?;
    ensure(
        got == [AbstractTriple::new(
            sigma,
            while_term("x + y"),
            val("[11;22]"),
        )]
        .into(),
        || format!("addition gave {got:?}"),
    )?;

    let sigma = st("x=[0;5]");
    let prog = "if x = 3 then x := 1 else x := 2 end";
    let hyps = |guard: &str| {
        vec![
            AbstractTriple::new(sigma.clone(), while_term("x = 3"), val(guard)),
            AbstractTriple::new(sigma.clone(), while_term("x := 1"), st("x=1")),
            AbstractTriple::new(sigma.clone(), while_term("x := 2"), st("x=2")),
        ]
    };
    let q = [(sigma.clone(), while_term(prog))];
    let both =
        abstract_immediate_consequence_on(lang, &q, &hyps("bool")).map_err(|e| e.to_string())?;
    let joined = AbstractTriple::new(sigma.clone(), while_term(prog), st("x=[1;2]"));
    ensure(both.contains(&joined), || {
        format!("if with unknown guard gave {both:?}")
    })?;
    let then =
        abstract_immediate_consequence_on(lang, &q, &hyps("true")).map_err(|e| e.to_string())?;
    let only = AbstractTriple::new(sigma.clone(), while_term(prog), st("x=1"));
    ensure(then.contains(&only) && !then.contains(&joined), || {
        format!("if with true guard gave {then:?}")
    })?;

    let inv = st("x=[0;+inf]");
    let tr = |t: &str, r: Abs| AbstractTriple::new(inv.clone(), while_term(t), r);
    let mut a = vec![
        tr("x", val("[0;+inf]")),
        tr("0", val("0")),
        tr("1", val("1")),
        tr("x = 0", val("bool")),
        tr("not (x = 0)", val("bool")),
        tr("x + 1", val("[1;+inf]")),
        tr("x := x + 1", inv.clone()),
        tr("while not (x = 0) do x := x + 1 end", inv.clone()),
    ];
    let r = check_invariant(lang, &a, false, Exec::Sequential).map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        format!("while invariant rule: {:?}", r.failures)
    })?;
    a[6] = tr("x := x + 1", st("x=0"));
    let r = check_invariant(lang, &a, false, Exec::Sequential).map_err(|e| e.to_string())?;
    ensure(!r.passed(), || "a wrong body triple was accepted".into())
}

fn meta_lemmas() -> Verdict {
    let packs = [pack(false), pack(true)];
    let mut rng = StdRng::seed_from_u64(8);
    let (mut c_cases, mut continuity, mut a_cases) = (0, 0, 0);
    for i in 0..1000 {
        let ext = i % 2 == 1;
        let lang = &packs[usize::from(ext)];

        let (queries, hyps) = concrete_instance(lang, &mut rng, ext);
        let full = immediate_consequence_on(lang, &queries, &hyps).map_err(|e| e.to_string())?;
        let part: BTreeSet<_> = hyps.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let sub = immediate_consequence_on(lang, &queries, &part).map_err(|e| e.to_string())?;
        ensure(sub.is_subset(&full), || {
            format!("C is not monotone on {queries:?}")
        })?;
        c_cases += 1;
        for c in &full {
            let mut f: Vec<_> = hyps
                .iter()
                .filter(|h| h.term == c.term || c.term.args().contains(&h.term))
                .cloned()
                .collect();
            let q = [(c.state.clone(), c.term.clone())];
            let derives = |f: &[ConcreteTriple<Value>]| {
                let s: BTreeSet<_> = f.iter().cloned().collect();
                immediate_consequence_on(lang, &q, &s).map(|r| r.contains(c))
            };
            let mut k = 0;
            while k < f.len() {
                let mut smaller = f.clone();
                smaller.remove(k);
                if derives(&smaller).map_err(|e| e.to_string())? {
                    f = smaller;
                } else {
                    k += 1;
                }
            }
            ensure(derives(&f).map_err(|e| e.to_string())?, || {
                format!("{c:?} lost")
            })?;
            let bound = hooks_of(lang, &c.term);
            ensure(f.len() <= bound, || {
                format!("{c:?} needs {} > {bound} hypotheses", f.len())
            })?;
            continuity += 1;
        }

        let (queries, hyps) = abstract_instance(lang, &mut rng, ext);
        let full =
            abstract_immediate_consequence_on(lang, &queries, &hyps).map_err(|e| e.to_string())?;
        let part: Vec<_> = hyps.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let sub =
            abstract_immediate_consequence_on(lang, &queries, &part).map_err(|e| e.to_string())?;
        ensure(sub.is_subset(&full), || "A# is not monotone".into())?;
        a_cases += 1;
    }
    derived_rules(&packs[0])?;
    Ok(format!(
        "C monotone on {c_cases} instances, {continuity} consequences from finite hypothesis sets \
         within the hook count, A# monotone on {a_cases} instances; addition, if-join and while rules exact"
    ))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "WF reproduction",
            Some(Duration::from_secs(1)),
            wf_reproduction,
        ),
        (
            "concrete evaluation vs oracle",
            Some(Duration::from_secs(5)),
            concrete_corpus,
        ),
        (
            "state splitting reproduction",
            Some(Duration::from_secs(1)),
            split_reproduction,
        ),
        (
            "constraint generation reproduction",
            Some(Duration::from_secs(1)),
            constraint_reproduction,
        ),
        ("constraint solution soundness", None, gen_soundness),
        (
            "filter consistency",
            Some(Duration::from_secs(60)),
            filter_consistency,
        ),
        ("end-to-end abstract soundness", None, end_to_end),
        ("meta-level lemma probes", None, meta_lemmas),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = t0.elapsed();
        let slow = limit.is_some_and(|l| took > l);
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        let (tag, detail) = match verdict {
            Ok(d) if slow => ("FAIL", format!("too slow; {d}")),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "{tag} {} {name} [{:.2}s{budget}]: {detail}",
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
