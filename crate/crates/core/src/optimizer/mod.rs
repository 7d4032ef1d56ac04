//! Semantics-preserving rewrite pipeline.
//!
//! Each phase maps a well-typed tree to a well-typed tree of the same type,
//! never introduces free variables, and leaves every binder id distinct.
//! Rules are applied bottom-up; most phases repeat their pass until the tree
//! stops changing.

mod beta;
mod fuse;
mod hoist;
mod join;
mod simplify;
mod subst;
mod unnest;

use std::fmt;

use thiserror::Error;

use crate::embed::Gensym;
use crate::expr::{alpha_equivalent, Expr, ExprError, ExprKind};
use crate::types::CollKind;

pub use beta::{beta_reduce, beta_simplify_fixpoint};
pub use fuse::fuse;
pub use hoist::hoist_filter;
pub use join::hash_join;
pub use simplify::simplify;
pub use subst::{ensure_unique_binders, freshen, renumber_binders, substitute, substitute_with};
pub use unnest::unnest;

pub const DEFAULT_ITERATION_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Typing(#[from] ExprError),
    #[error("rule `{rule}` broke its contract: {reason}")]
    RuleContract { rule: String, reason: String },
    #[error("phase `{phase}` did not reach a fixpoint within {limit} rounds")]
    IterationLimitExceeded { phase: String, limit: usize },
    #[error("unknown phase `{name}`; valid phases: {}", valid.join(", "))]
    UnknownPhase { name: String, valid: Vec<String> },
}

/// A named partial rewrite. `apply` returns `Ok(None)` when the rule does not match.
pub struct RewriteRule<'a> {
    pub name: &'static str,
    #[allow(clippy::type_complexity)]
    pub apply: Box<dyn Fn(&Expr) -> Result<Option<Expr>, OptimizeError> + 'a>,
}

impl<'a> RewriteRule<'a> {
    pub fn new(
        name: &'static str,
        apply: impl Fn(&Expr) -> Result<Option<Expr>, OptimizeError> + 'a,
    ) -> RewriteRule<'a> {
        RewriteRule { name, apply: Box::new(apply) }
    }
}

/// Rewrites children first, then tries `rule` once at the rebuilt node.
pub fn rewrite_bottom_up(e: &Expr, rule: &RewriteRule<'_>) -> Result<Expr, OptimizeError> {
    let children = e.children().iter().map(|c| rewrite_bottom_up(c, rule)).collect::<Result<Vec<_>, _>>()?;
    let node = e.rebuild(children)?;
    match (rule.apply)(&node)? {
        None => Ok(node),
        Some(out) => {
            if out.ty() != node.ty() {
                return Err(OptimizeError::RuleContract {
                    rule: rule.name.to_string(),
                    reason: format!("type changed from {} to {}", node.ty(), out.ty()),
                });
            }
            let before = node.free_vars();
            if let Some(v) = out.free_vars().iter().find(|v| !before.contains(v)) {
                return Err(OptimizeError::RuleContract {
                    rule: rule.name.to_string(),
                    reason: format!("introduced free variable {}", v.id),
                });
            }
            Ok(out)
        }
    }
}

/// Repeats `step` until two successive trees are structurally equal.
pub(crate) fn to_fixpoint(
    e: &Expr,
    phase: &str,
    limit: usize,
    mut step: impl FnMut(&Expr) -> Result<Expr, OptimizeError>,
) -> Result<Expr, OptimizeError> {
    let mut cur = e.clone();
    for _ in 0..limit {
        let next = step(&cur)?;
        if next == cur {
            return Ok(next);
        }
        cur = next;
    }
    Err(OptimizeError::IterationLimitExceeded { phase: phase.to_string(), limit })
}

/// Runs one rule bottom-up to a fixpoint, with fresh ids drawn above the current tree.
pub(crate) fn rule_fixpoint(
    e: &Expr,
    phase: &str,
    limit: usize,
    make_rule: impl for<'g> Fn(&'g Gensym) -> RewriteRule<'g>,
) -> Result<Expr, OptimizeError> {
    to_fixpoint(e, phase, limit, |cur| {
        let g = Gensym::above(cur);
        let rule = make_rule(&g);
        rewrite_bottom_up(cur, &rule)
    })
}

/// Unnesting side condition: merging an inner collection of kind `inner`
/// into an outer comprehension of kind `outer` keeps the result unchanged
/// only if the kinds agree or the inner collection is a sequence.
pub fn kinds_permit_unnesting(outer: CollKind, inner: CollKind) -> bool {
    inner == outer || inner == CollKind::Seq
}

pub(crate) fn coll_kind(e: &Expr) -> Option<CollKind> {
    e.ty().as_coll().map(|(k, _)| k)
}

pub(crate) fn lambda_parts(e: &Expr) -> Option<(crate::expr::TypedVar, Expr)> {
    match e.kind() {
        ExprKind::Fun { param, body } => Some((param.clone(), body.clone())),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub iteration_limit: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { iteration_limit: DEFAULT_ITERATION_LIMIT }
    }
}

type PhaseFn = fn(&Expr, &OptimizerConfig) -> Result<Expr, OptimizeError>;

/// A named whole-tree transformation.
#[derive(Clone, Copy)]
pub struct Phase {
    pub name: &'static str,
    run: PhaseFn,
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Phase").field(&self.name).finish()
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

pub const PHASE_NAMES: [&str; 5] = ["beta_simplify", "fuse", "unnest", "hoist_filter", "hash_join"];

impl Phase {
    pub fn by_name(name: &str) -> Result<Phase, OptimizeError> {
        let run: PhaseFn = match name {
            "beta_simplify" => |e, c| beta::beta_simplify_with_limit(e, c.iteration_limit),
            "fuse" => |e, c| fuse::fuse_with_limit(e, c.iteration_limit),
            "unnest" => |e, c| unnest::unnest_with_limit(e, c.iteration_limit),
            "hoist_filter" => |e, c| hoist::hoist_with_limit(e, c.iteration_limit),
            "hash_join" => |e, c| join::hash_join_with_limit(e, c.iteration_limit),
            _ => {
                return Err(OptimizeError::UnknownPhase {
                    name: name.to_string(),
                    valid: PHASE_NAMES.iter().map(|s| s.to_string()).collect(),
                })
            }
        };
        let name = PHASE_NAMES.iter().find(|n| **n == name).expect("listed phase");
        Ok(Phase { name, run })
    }

    /// Runs the phase and restores unique binders on its output.
    pub fn run(&self, e: &Expr, config: &OptimizerConfig) -> Result<Expr, OptimizeError> {
        let out = (self.run)(e, config)?;
        Ok(ensure_unique_binders(&out))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    pub phases: Vec<Phase>,
    pub config: OptimizerConfig,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline::from_names(&["beta_simplify", "fuse", "unnest", "hoist_filter", "hash_join", "beta_simplify"])
            .expect("default phases exist")
    }
}

impl Pipeline {
    pub fn empty() -> Pipeline {
        Pipeline { phases: Vec::new(), config: OptimizerConfig::default() }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Pipeline, OptimizeError> {
        let phases = names.iter().map(|n| Phase::by_name(n.as_ref())).collect::<Result<_, _>>()?;
        Ok(Pipeline { phases, config: OptimizerConfig::default() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.phases.iter().map(|p| p.name).collect()
    }
}

/// Applies the pipeline's phases in order, repeating the whole sequence
/// until a round leaves the tree unchanged (a later phase can expose work
/// for an earlier one). The result has binders renumbered consecutively so
/// that plan renderings are deterministic.
pub fn optimize(e: &Expr, pipeline: &Pipeline) -> Result<Expr, OptimizeError> {
    optimize_traced(e, pipeline, |_, _| {})
}

/// [`optimize`], reporting the tree after every phase of every round.
pub fn optimize_traced(
    e: &Expr,
    pipeline: &Pipeline,
    mut observe: impl FnMut(&str, &Expr),
) -> Result<Expr, OptimizeError> {
    let mut cur = ensure_unique_binders(e);
    for _ in 0..pipeline.config.iteration_limit {
        let before = cur.clone();
        for phase in &pipeline.phases {
            cur = phase.run(&cur, &pipeline.config)?;
            observe(phase.name, &cur);
        }
        if alpha_equivalent(&before, &cur) {
            return Ok(renumber_binders(&cur));
        }
    }
    Err(OptimizeError::IterationLimitExceeded { phase: "pipeline".to_string(), limit: pipeline.config.iteration_limit })
}
