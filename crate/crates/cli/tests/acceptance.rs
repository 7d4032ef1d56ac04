//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use collquery::data::{books_example, gen_join_benchmark};
use collquery::embed::*;
use collquery::generate::{QueryGen, Trigger};
use collquery::optimizer::{self, optimize_traced, renumber_binders};
use collquery::plan::parse_plan_with_roots;
use collquery::{
    interpret, interpret_closed, named_query, optimize, parse_plan, print_plan, CollKind, CostCounters, Expr,
    OptimizeError, Pipeline, Type, TypedVar, Value,
};

const SUITE_SEED: u64 = 20_240_601;
const SUITE_SIZE: usize = 500;
const RULE_INSTANCES: usize = 150;
const JOIN_SIZES: [usize; 3] = [100, 200, 400];
const JOIN_SEED: u64 = 17;
const UNOPT_RATIO: (f64, f64) = (1.0, 1.5);
const OPT_RATIO: (f64, f64) = (1.0, 4.0);
const HOIST_OUTER: i64 = 50;
const HOIST_INNER: i64 = 50;
const HOIST_PASSING: i64 = 5;
const HOIST_BOUND: u64 = 300;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn suite() -> Vec<Expr> {
    let mut gen = QueryGen::new(SUITE_SEED);
    (0..SUITE_SIZE).map(|_| gen.query()).collect()
}

fn c1_hoas_golden() -> Outcome {
    let g = Gensym::new();
    let f = fun(Type::String, |s| concat(s, string("!")), &g).unwrap();
    let text = print_plan(&f);
    let expected = "(fun 1 string (concat (var 1) (const string \"!\")))";
    outcome(text == expected, format!("rendered {text}"))
}

fn c2_semantic_preservation(queries: &[Expr]) -> Outcome {
    let pipeline = Pipeline::default();
    let mut failures = 0;
    let mut first = String::new();
    for (i, q) in queries.iter().enumerate() {
        let expected = interpret_closed(q).map(|r| r.0);
        let actual = optimize(q, &pipeline)
            .map_err(|e| e.to_string())
            .and_then(|o| interpret_closed(&o).map(|r| r.0).map_err(|e| e.to_string()));
        if expected.as_ref().ok() != actual.as_ref().ok() || expected.is_err() {
            failures += 1;
            if first.is_empty() {
                first = format!("; first failure: query {i}");
            }
        }
    }
    outcome(failures == 0, format!("{} queries, {failures} failures{first}", queries.len()))
}

fn c3_rule_oracles() -> Outcome {
    type Rule = fn(&Expr) -> Result<Expr, OptimizeError>;
    let rules: [(&str, Trigger, Rule); 5] = [
        ("simplify", Trigger::Simplify, optimizer::simplify),
        ("fuse", Trigger::Fuse, optimizer::fuse),
        ("unnest", Trigger::Unnest, optimizer::unnest),
        ("hoist_filter", Trigger::HoistFilter, optimizer::hoist_filter),
        ("hash_join", Trigger::HashJoin, optimizer::hash_join),
    ];
    let mut gen = QueryGen::new(SUITE_SEED ^ 0xabc);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, trigger, rule) in rules {
        let mut failures = 0;
        let mut fired = 0;
        for _ in 0..RULE_INSTANCES {
            let q = gen.instance(trigger);
            let before = interpret_closed(&q).map(|r| r.0);
            match rule(&q) {
                Ok(out) => {
                    if out != q {
                        fired += 1;
                    }
                    if before.is_err() || interpret_closed(&out).map(|r| r.0) != before {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
        ok &= failures == 0 && fired > 0;
        parts.push(format!("{name} {RULE_INSTANCES} instances/{fired} rewritten/{failures} failures"));
    }
    outcome(ok, parts.join(", "))
}

fn c4_hash_join_complexity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in JOIN_SIZES {
        let (desc, data) = gen_join_benchmark(n, JOIN_SEED);
        let env = desc.env(&data).unwrap();
        let q = named_query("equijoin", &desc).unwrap();
        let opt = optimize(&q, &Pipeline::default()).unwrap();
        let mut plain = CostCounters::default();
        let mut fast = CostCounters::default();
        let a = interpret(&q, &env, &mut plain).unwrap();
        let b = interpret(&opt, &env, &mut fast).unwrap();
        let nf = n as f64;
        let unopt = plain.elements_visited as f64 / (nf * nf);
        let optr = fast.elements_visited as f64 / nf;
        let good = a == b
            && a.len() == Some(n)
            && (UNOPT_RATIO.0..=UNOPT_RATIO.1).contains(&unopt)
            && (OPT_RATIO.0..=OPT_RATIO.1).contains(&optr)
            && fast.hash_lookups == n as u64;
        ok &= good;
        parts
            .push(format!("N={n}: unopt visits/N^2={unopt:.3}, opt visits/N={optr:.3}, lookups={}", fast.hash_lookups));
    }
    outcome(ok, parts.join("; "))
}

fn ints(range: std::ops::Range<i64>) -> Expr {
    coll_lit(CollKind::Seq, Type::Int, range.map(int).collect()).unwrap()
}

/// flatMap(0..50, x => map(filter(0..50, y => pred(x, y)), y => (x, y)))
fn hoisting_query(pred: impl Fn(Expr, Expr) -> BuildResult) -> Expr {
    let g = Gensym::new();
    query_flat_map(
        ints(0..HOIST_OUTER),
        |x| {
            let inner = query_filter(ints(0..HOIST_INNER), |y| pred(x.clone(), y), &g)?;
            query_map(inner, |y| tuple(vec![x.clone(), y]), &g)
        },
        &g,
    )
    .unwrap()
}

fn c5_filter_hoisting() -> Outcome {
    // Outer-only predicate: x < 5 holds for 10% of the outer elements. After
    // hoisting the predicate runs once per outer element: 50 evaluations.
    // Mixed predicate (x < 5 && y < 5): the outer conjunct runs 50 times and
    // the inner conjunct 50 times for each of the 5 surviving outer elements.
    let cases = [
        ("outer-only", hoisting_query(|x, _y| lt(x, int(HOIST_PASSING))), HOIST_OUTER as u64),
        (
            "mixed",
            hoisting_query(|x, y| and(lt(x, int(HOIST_PASSING))?, lt(y, int(HOIST_PASSING))?)),
            (HOIST_OUTER + HOIST_PASSING * HOIST_INNER) as u64,
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, q, expected) in cases {
        let opt = optimize(&q, &Pipeline::default()).unwrap();
        let (a, before) = interpret_closed(&q).unwrap();
        let (b, after) = interpret_closed(&opt).unwrap();
        let good = a == b
            && before.predicate_evals == (HOIST_OUTER * HOIST_INNER) as u64
            && after.predicate_evals == expected
            && after.predicate_evals <= HOIST_BOUND;
        ok &= good;
        parts.push(format!(
            "{name}: {} -> {} (expected {expected}, bound {HOIST_BOUND})",
            before.predicate_evals, after.predicate_evals
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c6_unnest_side_condition() -> Outcome {
    let g = Gensym::new();
    let seq_of = |xs: Vec<Expr>| coll_lit(CollKind::Seq, Type::Int, xs);
    let set_of = |xs: Vec<Expr>| coll_lit(CollKind::Set, Type::Int, xs);

    // Sequence comprehension over a set comprehension:
    // flatMap(flatMap([1, 2], x => {x, x + 1}), y => [y / 2])
    let inner = |g: &Gensym| {
        query_flat_map(seq_of(vec![int(1), int(2)]).unwrap(), |x| set_of(vec![x.clone(), add(x, int(1))?]), g)
    };
    let halve = |y: Expr| seq_of(vec![div(y, int(2))?]);
    let nested = query_flat_map(inner(&g).unwrap(), halve, &g).unwrap();
    // The rewrite the side condition forbids, built by hand.
    let forced = query_flat_map(
        seq_of(vec![int(1), int(2)]).unwrap(),
        |x| query_flat_map(set_of(vec![x.clone(), add(x, int(1))?])?, halve, &g),
        &g,
    )
    .unwrap();

    // Inner duplicate elimination: flatMap([1, 2], x => toSet([x, x])).
    let dedup =
        query_flat_map(seq_of(vec![int(1), int(2)]).unwrap(), |x| to_set(seq_of(vec![x.clone(), x])?), &g).unwrap();
    let dedup_forced =
        query_flat_map(seq_of(vec![int(1), int(2)]).unwrap(), |x| seq_of(vec![x.clone(), x]), &g).unwrap();

    let ints_of = |xs: &[i64]| Value::seq(xs.iter().map(|i| Value::Int(*i)).collect());
    // {1,2} -> [0,1], {2,3} -> [1,1]; the set elements 1,2,2,3 halve to 0,1,1,1.
    let expected_nested = ints_of(&[0, 1, 1, 1]);
    // Unnested, each inner flatMap over a set dedups: {0,1} then {1}.
    let expected_forced = ints_of(&[0, 1, 1]);

    let untouched = optimizer::unnest(&nested).unwrap() == nested && optimizer::unnest(&dedup).unwrap() == dedup;
    let v_nested = interpret_closed(&nested).unwrap().0;
    let v_forced = interpret_closed(&forced).unwrap().0;
    let v_dedup = interpret_closed(&dedup).unwrap().0;
    let v_dedup_forced = interpret_closed(&dedup_forced).unwrap().0;
    let opt_same = interpret_closed(&optimize(&nested, &Pipeline::default()).unwrap()).unwrap().0 == v_nested
        && interpret_closed(&optimize(&dedup, &Pipeline::default()).unwrap()).unwrap().0 == v_dedup;
    let ok = untouched
        && opt_same
        && v_nested == expected_nested
        && v_forced == expected_forced
        && v_dedup == ints_of(&[1, 2])
        && v_dedup_forced == ints_of(&[1, 1, 2, 2]);
    outcome(
        ok,
        format!(
            "unnest left both unrewritten: {untouched}; kept {v_nested} vs forced {v_forced}; dedup kept {v_dedup} vs forced {v_dedup_forced}"
        ),
    )
}

fn c7_projection_goldens() -> Outcome {
    let (desc, _) = books_example();
    let roots = [TypedVar::new(1, Type::Int), TypedVar::new(2, Type::String)];
    let tuple_case = parse_plan_with_roots("(proj 1 (tuple (var 1) (var 2)))", &desc.registry, &roots).unwrap();
    let t = print_plan(&optimize(&tuple_case, &Pipeline::default()).unwrap());

    let book = [TypedVar::new(1, desc.registry.record_type("Book").unwrap())];
    let text = "(field title (record BookData (field title (var 1)) \
                (concat (field publisher (var 1)) (const string \" \")) (size (field authors (var 1)))))";
    let record_case = parse_plan_with_roots(text, &desc.registry, &book).unwrap();
    let r = print_plan(&optimize(&record_case, &Pipeline::default()).unwrap());
    outcome(t == "(var 1)" && r == "(field title (var 1))", format!("tuple -> {t}; record -> {r}"))
}

fn c8_barendregt_and_typing(queries: &[Expr]) -> Outcome {
    let pipeline = Pipeline::default();
    let mut violations = 0;
    let mut checks = 0;
    for q in queries {
        let ty = q.ty().clone();
        let result = optimize_traced(q, &pipeline, |_, e| {
            checks += 1;
            if !e.has_unique_binders() || e.ty() != &ty || !e.free_vars().is_empty() {
                violations += 1;
            }
        });
        match result {
            Ok(out) if out.has_unique_binders() && out.ty() == &ty => {}
            _ => violations += 1,
        }
    }
    outcome(violations == 0, format!("{checks} phase outputs checked, {violations} violations"))
}

fn data_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn c9_running_example() -> Outcome {
    // Books published by "Pearson Education": only "Compilers", with authors
    // A B and C D; each has one coauthor.
    let expected = "[\n  {\n    \"title\": \"Compilers\",\n    \"authorName\": \"A B\",\n    \"coauthors\": 1\n  },\n  {\n    \"title\": \"Compilers\",\n    \"authorName\": \"C D\",\n    \"coauthors\": 1\n  }\n]\n";
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_collquery"))
        .args(["run", "--schema", &data_file("books.schema.json"), "--data", &data_file("books.data.json")])
        .args(["--query", "records"])
        .output();
    match output {
        Ok(o) => {
            let stdout = String::from_utf8_lossy(&o.stdout);
            outcome(
                o.status.code() == Some(0) && stdout == expected,
                format!("exit {:?}, {} bytes", o.status.code(), stdout.len()),
            )
        }
        Err(e) => outcome(false, format!("cannot run binary: {e}")),
    }
}

fn c10_round_trip(queries: &[Expr]) -> Outcome {
    let gen = QueryGen::new(SUITE_SEED);
    let mut failures = 0;
    for q in queries {
        match parse_plan(&print_plan(q), gen.registry()) {
            Ok(parsed) if parsed == renumber_binders(q) => {}
            _ => failures += 1,
        }
    }
    outcome(failures == 0, format!("{} plans, {failures} failures", queries.len()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let queries = suite();
    let generation = started.elapsed();

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let q = &queries;
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (1, "HOAS reification golden", Duration::from_secs(1), Box::new(c1_hoas_golden)),
        (2, "semantic preservation", Duration::from_secs(60), Box::new(move || c2_semantic_preservation(q))),
        (3, "per-rule oracle equivalence", Duration::from_secs(30), Box::new(c3_rule_oracles)),
        (4, "hash join complexity class", Duration::from_secs(10), Box::new(c4_hash_join_complexity)),
        (5, "filter hoisting predicate counts", Duration::from_secs(5), Box::new(c5_filter_hoisting)),
        (6, "unnesting side condition", Duration::from_secs(1), Box::new(c6_unnest_side_condition)),
        (7, "projection simplification goldens", Duration::from_secs(1), Box::new(c7_projection_goldens)),
        (8, "unique binders and types after every phase", Duration::MAX, Box::new(move || c8_barendregt_and_typing(q))),
        (9, "running example end to end", Duration::from_secs(1), Box::new(c9_running_example)),
        (10, "plan round trip", Duration::MAX, Box::new(move || c10_round_trip(q))),
    ];

    println!("acceptance: {} generated queries (seed {SUITE_SEED}) in {:.2?}", queries.len(), generation);
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let t = Instant::now();
        let result = check();
        let elapsed = t.elapsed();
        let in_time = elapsed < limit;
        let ok = result.ok && in_time;
        if !ok {
            failed += 1;
        }
        let limit_text = if limit == Duration::MAX { String::new() } else { format!(" (limit {limit:?})") };
        println!(
            "{} criterion {n}: {name}: {} [{elapsed:.2?}{limit_text}]",
            if ok { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
