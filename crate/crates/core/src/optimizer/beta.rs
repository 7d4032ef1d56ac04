use crate::expr::{Expr, ExprKind};

use super::simplify::simplify_once;
use super::subst::substitute_with;
use super::{rule_fixpoint, to_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT};

/// Replaces every `App(Fun(v, body), arg)` by `body[v := arg]` until none remain.
pub fn beta_reduce(e: &Expr) -> Result<Expr, OptimizeError> {
    beta_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

fn beta_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    rule_fixpoint(e, "beta", limit, |g| {
        RewriteRule::new("beta", move |node| {
            let ExprKind::App { fun, arg } = node.kind() else { return Ok(None) };
            let Some((param, body)) = fun.as_lambda() else { return Ok(None) };
            substitute_with(body, param, arg, g).map(Some)
        })
    })
}

/// Alternates beta-reduction and simplification until the tree is stable.
///
/// The IR has no recursion, so this terminates; hitting the limit means a rule
/// is oscillating.
pub fn beta_simplify_fixpoint(e: &Expr) -> Result<Expr, OptimizeError> {
    beta_simplify_with_limit(e, DEFAULT_ITERATION_LIMIT)
}

pub(crate) fn beta_simplify_with_limit(e: &Expr, limit: usize) -> Result<Expr, OptimizeError> {
    to_fixpoint(e, "beta_simplify", limit, |cur| {
        let reduced = beta_with_limit(cur, limit)?;
        simplify_once(&reduced)
    })
}
