//! Query unnesting.

use crate::expr::{Expr, ExprKind};

use super::{
    coll_kind, kinds_permit_unnesting, lambda_parts, rule_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT,
};

/// Flattens comprehensions nested in generator position:
///
/// * `flatMap(flatMap(c, x => b), g)` becomes `flatMap(c, x => flatMap(b, g))`
/// * `flatMap(c, x => toSet(b))` / `toSeq(b)` becomes `flatMap(c, x => b)`
///
/// A rewrite is skipped when the inner collection is a set and the outer
/// comprehension is a sequence: merging would lose (or add) duplicate
/// elimination and change the result.
pub fn unnest(e: &Expr) -> Result<Expr, OptimizeError> {
    unnest_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

pub(crate) fn unnest_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    rule_fixpoint(e, "unnest", limit, |_| RewriteRule::new("unnest", unnest_node))
}

fn unnest_node(node: &Expr) -> Result<Option<Expr>, OptimizeError> {
    let ExprKind::FlatMap(src, g) = node.kind() else { return Ok(None) };
    let Some(outer) = coll_kind(node) else { return Ok(None) };

    if let ExprKind::FlatMap(c, f) = src.kind() {
        if let (Some((x, body)), Some(_)) = (lambda_parts(f), lambda_parts(g)) {
            let inner = coll_kind(&body).expect("flatMap body is a collection");
            if kinds_permit_unnesting(outer, inner) {
                let nested = Expr::flat_map(body, g.clone())?;
                return Ok(Some(Expr::flat_map(c.clone(), Expr::lambda(x, nested)?)?));
            }
        }
        return Ok(None);
    }

    let Some((x, body)) = lambda_parts(g) else { return Ok(None) };
    let stripped = match body.kind() {
        ExprKind::ToSet(b) | ExprKind::ToSeq(b) => b.clone(),
        _ => return Ok(None),
    };
    let inner = coll_kind(&body).expect("conversion yields a collection");
    if !kinds_permit_unnesting(outer, inner) {
        return Ok(None);
    }
    Ok(Some(Expr::flat_map(src.clone(), Expr::lambda(x, stripped)?)?))
}
