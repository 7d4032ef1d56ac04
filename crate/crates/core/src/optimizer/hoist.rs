//! Filter hoisting.
//!
//! In `flatMap(outer, x => body)`, a filter sitting on the receiver spine of
//! `body` (reached through map/flatMap/filter receivers and kind conversions)
//! empties the whole body whenever its predicate is false. Conjuncts of that
//! predicate that do not mention the filter's own binder are therefore
//! conditions on `x` alone and can filter `outer` instead.

use crate::embed::Gensym;
use crate::expr::{BoolOp, Expr, ExprKind, TypedVar};

use super::subst::substitute_with;
use super::{lambda_parts, rule_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT};

pub fn hoist_filter(e: &Expr) -> Result<Expr, OptimizeError> {
    hoist_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

pub(crate) fn hoist_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    rule_fixpoint(e, "hoist_filter", limit, |g| RewriteRule::new("hoist_filter", move |node| hoist_node(node, g)))
}

/// Splits a top-level `&&` chain into its conjuncts, left to right.
pub fn conjuncts(p: &Expr) -> Vec<Expr> {
    match p.kind() {
        ExprKind::Bool(BoolOp::And, l, r) => {
            let mut out = conjuncts(l);
            out.extend(conjuncts(r));
            out
        }
        _ => vec![p.clone()],
    }
}

fn conjoin(parts: Vec<Expr>) -> Result<Expr, OptimizeError> {
    let mut it = parts.into_iter();
    let first = it.next().expect("non-empty conjunction");
    it.try_fold(first, |acc, c| Ok(Expr::boolean(BoolOp::And, acc, c)?))
}

fn hoist_node(node: &Expr, g: &Gensym) -> Result<Option<Expr>, OptimizeError> {
    let ExprKind::FlatMap(outer, f) = node.kind() else { return Ok(None) };
    let Some((x, body)) = lambda_parts(f) else { return Ok(None) };
    let Some((new_body, hoisted)) = hoist_from_spine(&body)? else { return Ok(None) };
    let new_outer = filter_outer(outer, &x, hoisted, g)?;
    Ok(Some(Expr::flat_map(new_outer, Expr::lambda(x, new_body)?)?))
}

/// Finds the first spine filter with conjuncts independent of its binder and
/// removes them, returning the rebuilt spine and the removed conjuncts.
fn hoist_from_spine(e: &Expr) -> Result<Option<(Expr, Vec<Expr>)>, OptimizeError> {
    use ExprKind::*;
    match e.kind() {
        Filter(inner, p) => {
            if let Some((y, pred)) = lambda_parts(p) {
                let (free, bound): (Vec<_>, Vec<_>) = conjuncts(&pred).into_iter().partition(|c| !c.mentions(y.id));
                if !free.is_empty() {
                    let rebuilt = if bound.is_empty() {
                        inner.clone()
                    } else {
                        Expr::filter(inner.clone(), Expr::lambda(y, conjoin(bound)?)?)?
                    };
                    return Ok(Some((rebuilt, free)));
                }
            }
            respine(e, inner)
        }
        Map(c, _) | FlatMap(c, _) | ToSeq(c) | ToSet(c) => respine(e, c),
        _ => Ok(None),
    }
}

fn respine(e: &Expr, receiver: &Expr) -> Result<Option<(Expr, Vec<Expr>)>, OptimizeError> {
    match hoist_from_spine(receiver)? {
        Some((new_receiver, hoisted)) => {
            let mut children = e.children();
            children[0] = new_receiver;
            Ok(Some((e.rebuild(children)?, hoisted)))
        }
        None => Ok(None),
    }
}

/// `filter(outer, x' => conjuncts[x := x'])`, merged into an existing
/// filter on `outer` when there is one.
fn filter_outer(outer: &Expr, x: &TypedVar, hoisted: Vec<Expr>, g: &Gensym) -> Result<Expr, OptimizeError> {
    if let ExprKind::Filter(c, p) = outer.kind() {
        if let Some((z, existing)) = lambda_parts(p) {
            let zv = Expr::var(z.clone());
            let mut parts = vec![existing];
            for h in &hoisted {
                parts.push(substitute_with(h, x, &zv, g)?);
            }
            return Ok(Expr::filter(c.clone(), Expr::lambda(z, conjoin(parts)?)?)?);
        }
    }
    let z = g.fresh(x.ty.clone());
    let zv = Expr::var(z.clone());
    let parts = hoisted.iter().map(|h| substitute_with(h, x, &zv, g)).collect::<Result<Vec<_>, _>>()?;
    Ok(Expr::filter(outer.clone(), Expr::lambda(z, conjoin(parts)?)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::*;
    use crate::interp::interpret_closed;
    use crate::types::{CollKind, Type};

    fn ints(xs: std::ops::Range<i64>) -> Expr {
        coll_lit(CollKind::Seq, Type::Int, xs.map(int).collect()).unwrap()
    }

    #[test]
    fn outer_only_predicate_moves_out() {
        let g = Gensym::new();
        let e = query_flat_map(
            ints(0..10),
            |x| query_map(query_filter(ints(0..10), |_y| lt(x.clone(), int(2)), &g)?, |y| add(y, x.clone()), &g),
            &g,
        )
        .unwrap();
        let out = hoist_filter(&e).unwrap();
        let ExprKind::FlatMap(src, f) = out.kind() else { panic!("{out}") };
        assert!(matches!(src.kind(), ExprKind::Filter(..)));
        let body = f.as_lambda().unwrap().1;
        assert!(matches!(body.kind(), ExprKind::Map(c, _) if matches!(c.kind(), ExprKind::Lit { .. })));
        let (before, cb) = interpret_closed(&e).unwrap();
        let (after, ca) = interpret_closed(&out).unwrap();
        assert_eq!(before, after);
        assert_eq!(cb.predicate_evals, 100);
        assert_eq!(ca.predicate_evals, 10);
    }

    #[test]
    fn inner_only_predicate_stays() {
        let g = Gensym::new();
        let e = query_flat_map(ints(0..3), |_x| query_filter(ints(0..3), |y| lt(y, int(2)), &g), &g).unwrap();
        assert_eq!(hoist_filter(&e).unwrap(), e);
    }

    #[test]
    fn mixed_conjunction_is_split() {
        let g = Gensym::new();
        let e = query_flat_map(
            ints(0..10),
            |x| {
                query_map(
                    query_filter(ints(0..10), |y| and(lt(x.clone(), int(3))?, gt(y, int(4))?), &g)?,
                    |y| tuple(vec![x.clone(), y]),
                    &g,
                )
            },
            &g,
        )
        .unwrap();
        let out = hoist_filter(&e).unwrap();
        let ExprKind::FlatMap(_, f) = out.kind() else { panic!("{out}") };
        let ExprKind::Map(inner, _) = f.as_lambda().unwrap().1.kind() else { panic!("{out}") };
        assert!(matches!(inner.kind(), ExprKind::Filter(..)));
        let (before, cb) = interpret_closed(&e).unwrap();
        let (after, ca) = interpret_closed(&out).unwrap();
        assert_eq!(before, after);
        assert_eq!(cb.predicate_evals, 100);
        assert_eq!(ca.predicate_evals, 10 + 3 * 10);
        assert!(out.has_unique_binders());
    }

    #[test]
    fn merges_into_existing_outer_filter() {
        let g = Gensym::new();
        let outer = query_filter(ints(0..10), |x| gt(x, int(1)), &g).unwrap();
        let e = query_flat_map(outer, |x| query_filter(ints(0..4), |_y| lt(x.clone(), int(5)), &g), &g).unwrap();
        let out = hoist_filter(&e).unwrap();
        let ExprKind::FlatMap(src, _) = out.kind() else { panic!("{out}") };
        let ExprKind::Filter(base, _) = src.kind() else { panic!("{out}") };
        assert!(matches!(base.kind(), ExprKind::Lit { .. }));
        assert_eq!(interpret_closed(&out).unwrap().0, interpret_closed(&e).unwrap().0);
    }
}
