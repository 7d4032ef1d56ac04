//! Typed expression trees for collection queries, with a rewrite-based
//! optimizer and an instrumented interpreter.

pub mod data;
pub mod embed;
pub mod expr;
pub mod generate;
pub mod interp;
pub mod optimizer;
pub mod plan;
pub mod queries;
pub mod schema;
pub mod types;
pub mod value;

pub use data::{load_data, load_descriptor, DataError, Dataset, Descriptor};
pub use embed::Gensym;
pub use expr::{alpha_equivalent, expr_equal, ArithOp, BoolOp, CmpOp, Expr, ExprError, ExprKind, TypedVar};
pub use interp::{interpret, interpret_closed, CostCounters, EvalError};
pub use optimizer::{optimize, OptimizeError, Pipeline};
pub use plan::{parse_plan, parse_plan_with_roots, print_plan, print_plan_pretty, PlanError};
pub use queries::{named_query, QueryError};
pub use schema::{SchemaError, SchemaRegistry};
pub use types::{CollKind, Schema, Type};
pub use value::{Env, Value};
