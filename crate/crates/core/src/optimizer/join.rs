//! Nested-loop equi-join to hash join.

use crate::embed::Gensym;
use crate::expr::{CmpOp, Expr, ExprKind, TypedVar};
use crate::types::Type;

use super::subst::substitute_with;
use super::{
    coll_kind, kinds_permit_unnesting, lambda_parts, rule_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT,
};

/// Rewrites
///
/// ```text
/// flatMap(outer, x => map(filter(inner, y => kx == ky), y' => r))
/// ```
///
/// into `hashjoin(outer, inner, x => kx, y => ky, p => r[x := p._1, y' := p._2])`
/// when `kx` only mentions `x`, `ky` only mentions `y`, and `inner` does not
/// depend on `x`. The equality may be written either way round. A bare
/// `filter` body (no trailing map) is handled the same way with `p => p._2`.
pub fn hash_join(e: &Expr) -> Result<Expr, OptimizeError> {
    hash_join_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

pub(crate) fn hash_join_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    rule_fixpoint(e, "hash_join", limit, |g| RewriteRule::new("hash_join", move |node| join_node(node, g)))
}

fn only_mentions(e: &Expr, v: &TypedVar) -> bool {
    e.free_vars().iter().all(|fv| fv.id == v.id)
}

fn join_node(node: &Expr, g: &Gensym) -> Result<Option<Expr>, OptimizeError> {
    let ExprKind::FlatMap(outer, f) = node.kind() else { return Ok(None) };
    let Some((x, body)) = lambda_parts(f) else { return Ok(None) };
    let (filtered, project) = match body.kind() {
        ExprKind::Map(src, m) => match lambda_parts(m) {
            Some(parts) => (src.clone(), Some(parts)),
            None => return Ok(None),
        },
        _ => (body.clone(), None),
    };
    let ExprKind::Filter(inner, p) = filtered.kind() else { return Ok(None) };
    let Some((y, pred)) = lambda_parts(p) else { return Ok(None) };
    let ExprKind::Cmp(CmpOp::Eq, a, b) = pred.kind() else { return Ok(None) };

    let (kx, ky) = if only_mentions(a, &x) && only_mentions(b, &y) {
        (a.clone(), b.clone())
    } else if only_mentions(b, &x) && only_mentions(a, &y) {
        (b.clone(), a.clone())
    } else {
        return Ok(None);
    };
    if inner.mentions(x.id) {
        return Ok(None);
    }
    let (Some(outer_kind), Some(inner_kind)) = (coll_kind(outer), coll_kind(inner)) else {
        return Ok(None);
    };
    if !kinds_permit_unnesting(outer_kind, inner_kind) {
        return Ok(None);
    }

    let pair = g.fresh(Type::Tuple(vec![x.ty.clone(), y.ty.clone()]));
    let left = Expr::proj(Expr::var(pair.clone()), 1)?;
    let right = Expr::proj(Expr::var(pair.clone()), 2)?;
    let result = match project {
        Some((y2, r)) => {
            let r = substitute_with(&r, &x, &left, g)?;
            substitute_with(&r, &y2, &right, g)?
        }
        None => right,
    };
    let joined = Expr::hash_join(
        outer.clone(),
        inner.clone(),
        Expr::lambda(x, kx)?,
        Expr::lambda(y, ky)?,
        Expr::lambda(pair, result)?,
    )?;
    Ok(Some(joined))
}
