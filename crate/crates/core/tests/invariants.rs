use collquery::data::{books_example, dataset_to_json, gen_join_benchmark, load_data};
use collquery::embed::*;
use collquery::generate::QueryGen;
use collquery::optimizer::{beta_reduce, substitute};
use collquery::{interpret_closed, optimize, CollKind, Expr, ExprKind, Pipeline, Type, Value};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<i64>().prop_map(Value::Int),
        any::<bool>().prop_map(Value::Bool),
        "[a-c]{0,3}".prop_map(|s| Value::str(&s)),
        any::<f64>().prop_map(Value::Double),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimization_preserves_semantics(seed in any::<u64>()) {
        let q = QueryGen::new(seed).query();
        let opt = optimize(&q, &Pipeline::default()).unwrap();
        prop_assert_eq!(opt.ty(), q.ty());
        prop_assert!(opt.has_unique_binders());
        prop_assert_eq!(interpret_closed(&opt).unwrap().0, interpret_closed(&q).unwrap().0);
    }

    #[test]
    fn interpretation_is_pure(seed in any::<u64>()) {
        let q = QueryGen::new(seed).query();
        prop_assert_eq!(interpret_closed(&q).unwrap(), interpret_closed(&q).unwrap());
    }

    #[test]
    fn sets_hold_distinct_elements(xs in proptest::collection::vec(0i64..5, 0..30)) {
        let lit = coll_lit(CollKind::Seq, Type::Int, xs.iter().copied().map(int).collect()).unwrap();
        let (v, _) = interpret_closed(&to_set(lit).unwrap()).unwrap();
        let mut distinct = xs.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(v.len(), Some(distinct.len()));
    }

    #[test]
    fn value_order_is_total_and_consistent(a in scalar(), b in scalar()) {
        let ab = a.cmp(&b);
        prop_assert_eq!(ab.reverse(), b.cmp(&a));
        prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
    }

    /// Applying a function and substituting its argument agree.
    #[test]
    fn beta_matches_substitution(k in -50i64..50, m in -50i64..50) {
        let g = Gensym::new();
        let f = fun(Type::Int, |x| add(mul(x.clone(), int(m))?, x), &g).unwrap();
        let (v, body) = f.as_lambda().unwrap();
        let applied = app(f.clone(), int(k)).unwrap();
        let substituted = substitute(body, v, &int(k)).unwrap();
        prop_assert_eq!(interpret_closed(&applied).unwrap().0, interpret_closed(&substituted).unwrap().0);
        prop_assert_eq!(beta_reduce(&applied).unwrap(), substituted);
    }

    #[test]
    fn join_benchmark_round_trips(n in 1usize..40, seed in any::<u64>()) {
        let (desc, data) = gen_join_benchmark(n, seed);
        prop_assert_eq!(load_data(&desc, &dataset_to_json(&desc, &data)).unwrap(), data);
    }
}

#[test]
fn short_circuit_avoids_division_by_zero() {
    let e = or(boolean(true), eq(div(int(1), int(0)).unwrap(), int(0)).unwrap()).unwrap();
    assert_eq!(interpret_closed(&e).unwrap().0, Value::Bool(true));
    let e = and(boolean(false), eq(div(int(1), int(0)).unwrap(), int(0)).unwrap()).unwrap();
    assert_eq!(interpret_closed(&e).unwrap().0, Value::Bool(false));
}

#[test]
fn duplicated_function_arguments_get_fresh_binders() {
    // (f => f(1) + f(2))(x => size(map([x], y => y)))
    let g = Gensym::new();
    let user = fun(Type::fun(Type::Int, Type::Int), |f| add(app(f.clone(), int(1))?, app(f, int(2))?), &g).unwrap();
    let arg = fun(Type::Int, |x| size(query_map(coll_lit(CollKind::Seq, Type::Int, vec![x])?, Ok, &g)?), &g).unwrap();
    let e = app(user, arg).unwrap();
    let reduced = beta_reduce(&e).unwrap();
    assert!(reduced.has_unique_binders(), "{reduced}");
    assert!(!reduced.contains_node(&|n: &Expr| matches!(n.kind(), ExprKind::App { .. })));
    assert_eq!(interpret_closed(&reduced).unwrap().0, Value::Int(2));
}

#[test]
fn loaded_values_conform_to_root_types() {
    let (desc, data) = books_example();
    for root in &desc.roots {
        assert!(data[&root.name].conforms(&root.var.ty));
    }
}
