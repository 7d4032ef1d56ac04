//! Fusion of adjacent bulk operators.

use crate::embed::Gensym;
use crate::expr::{BoolOp, Expr, ExprKind};

use super::subst::substitute_with;
use super::{
    coll_kind, kinds_permit_unnesting, lambda_parts, rule_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT,
};

/// Merges chains of map/filter/flatMap into single passes:
///
/// * `map(map(c, f), g)` becomes `map(c, g . f)`
/// * `filter(filter(c, p), q)` becomes `filter(c, x => p(x) && q(x))`
/// * `flatMap(map(c, f), g)` becomes `flatMap(c, g . f)`
/// * `map(flatMap(c, x => b), g)` becomes `flatMap(c, x => map(b, g))` when the
///   kinds of `c` and `b` permit it
pub fn fuse(e: &Expr) -> Result<Expr, OptimizeError> {
    fuse_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

pub(crate) fn fuse_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    rule_fixpoint(e, "fuse", limit, |g| RewriteRule::new("fuse", move |node| fuse_node(node, g)))
}

/// `x => g(f(x))` with a fresh binder, built by substitution.
pub(crate) fn compose(f: &Expr, g_fn: &Expr, g: &Gensym) -> Result<Option<Expr>, OptimizeError> {
    let (Some((x, bf)), Some((y, bg))) = (lambda_parts(f), lambda_parts(g_fn)) else {
        return Ok(None);
    };
    let z = g.fresh(x.ty.clone());
    let inner = substitute_with(&bf, &x, &Expr::var(z.clone()), g)?;
    let body = substitute_with(&bg, &y, &inner, g)?;
    Ok(Some(Expr::lambda(z, body)?))
}

fn fuse_node(node: &Expr, g: &Gensym) -> Result<Option<Expr>, OptimizeError> {
    use ExprKind::*;
    match node.kind() {
        Map(src, outer_f) => match src.kind() {
            Map(c, inner_f) => match compose(inner_f, outer_f, g)? {
                Some(h) => Ok(Some(Expr::map(c.clone(), h)?)),
                None => Ok(None),
            },
            FlatMap(c, f) => {
                let (Some((x, body)), Some(_)) = (lambda_parts(f), lambda_parts(outer_f)) else {
                    return Ok(None);
                };
                let (Some(outer), Some(inner)) = (coll_kind(c), coll_kind(&body)) else { return Ok(None) };
                if !kinds_permit_unnesting(outer, inner) {
                    return Ok(None);
                }
                let mapped = Expr::map(body, outer_f.clone())?;
                Ok(Some(Expr::flat_map(c.clone(), Expr::lambda(x, mapped)?)?))
            }
            _ => Ok(None),
        },
        Filter(src, q) => {
            let Filter(c, p) = src.kind() else { return Ok(None) };
            let (Some((x, bp)), Some((y, bq))) = (lambda_parts(p), lambda_parts(q)) else {
                return Ok(None);
            };
            let z = g.fresh(x.ty.clone());
            let zv = Expr::var(z.clone());
            let both =
                Expr::boolean(BoolOp::And, substitute_with(&bp, &x, &zv, g)?, substitute_with(&bq, &y, &zv, g)?)?;
            Ok(Some(Expr::filter(c.clone(), Expr::lambda(z, both)?)?))
        }
        FlatMap(src, outer_f) => {
            let Map(c, inner_f) = src.kind() else { return Ok(None) };
            match compose(inner_f, outer_f, g)? {
                Some(h) => Ok(Some(Expr::flat_map(c.clone(), h)?)),
                None => Ok(None),
            }
        }
        _ => Ok(None),
    }
}
