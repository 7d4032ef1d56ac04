use collquery::generate::{QueryGen, Trigger};
use collquery::optimizer::{self, optimize_traced, renumber_binders};
use collquery::{alpha_equivalent, interpret_closed, optimize, parse_plan, print_plan, Expr, Pipeline};

const SUITE_SIZE: usize = 500;
const SUITE_SEED: u64 = 0x5eed;

fn suite() -> Vec<Expr> {
    let mut gen = QueryGen::new(SUITE_SEED);
    (0..SUITE_SIZE).map(|_| gen.query()).collect()
}

#[test]
fn optimization_preserves_semantics() {
    let pipeline = Pipeline::default();
    for (i, q) in suite().iter().enumerate() {
        let (expected, _) = interpret_closed(q).unwrap();
        let opt = optimize(q, &pipeline).unwrap_or_else(|e| panic!("query {i}: {e}\n{q}"));
        let (actual, _) = interpret_closed(&opt).unwrap_or_else(|e| panic!("query {i}: {e}\n{opt}"));
        assert_eq!(actual, expected, "query {i}\nbefore: {q}\nafter: {opt}");
    }
}

#[test]
fn every_phase_keeps_binders_unique_and_types_unchanged() {
    let pipeline = Pipeline::default();
    for (i, q) in suite().iter().enumerate() {
        let ty = q.ty().clone();
        optimize_traced(q, &pipeline, |phase, e| {
            assert!(e.has_unique_binders(), "query {i} after {phase}: {e}");
            assert_eq!(e.ty(), &ty, "query {i} after {phase}");
            assert!(e.free_vars().is_empty(), "query {i} after {phase}");
        })
        .unwrap();
    }
}

#[test]
fn optimization_is_idempotent() {
    let pipeline = Pipeline::default();
    let mut failures = Vec::new();
    for (i, q) in suite().iter().enumerate() {
        let once = optimize(q, &pipeline).unwrap();
        let twice = optimize(&once, &pipeline).unwrap();
        if !alpha_equivalent(&once, &twice) {
            failures.push(format!("query {i}\nonce:  {once}\ntwice: {twice}"));
        }
    }
    assert!(failures.is_empty(), "{} non-idempotent:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn plans_round_trip() {
    let mut gen = QueryGen::new(SUITE_SEED);
    let qs: Vec<Expr> = (0..SUITE_SIZE).map(|_| gen.query()).collect();
    for q in qs {
        let text = print_plan(&q);
        let parsed = parse_plan(&text, gen.registry()).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(parsed, renumber_binders(&q), "{text}");
    }
}

#[test]
fn single_rules_preserve_semantics_on_their_triggers() {
    type Rule = fn(&Expr) -> Result<Expr, collquery::OptimizeError>;
    let rules: [(Trigger, Rule); 5] = [
        (Trigger::Simplify, optimizer::simplify),
        (Trigger::Fuse, optimizer::fuse),
        (Trigger::Unnest, optimizer::unnest),
        (Trigger::HoistFilter, optimizer::hoist_filter),
        (Trigger::HashJoin, optimizer::hash_join),
    ];
    let mut gen = QueryGen::new(99);
    for (trigger, rule) in rules {
        let mut fired = 0;
        for _ in 0..100 {
            let q = gen.instance(trigger);
            let out = rule(&q).unwrap();
            if out != q {
                fired += 1;
            }
            assert_eq!(interpret_closed(&out).unwrap().0, interpret_closed(&q).unwrap().0, "{trigger:?}\n{q}\n{out}");
        }
        assert!(fired >= 50, "{trigger:?} fired only {fired} times");
    }
}
