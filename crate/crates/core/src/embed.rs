//! Query-authoring front-end.
//!
//! Function arguments are written as host closures over [`Expr`] handles
//! (higher-order abstract syntax). [`fun`] turns such a closure into a
//! first-order function literal by applying it to a freshly generated
//! variable. As long as every `fun` call building one query shares the same
//! [`Gensym`], all binders in the query have distinct ids.
//!
//! Host closures must be pure: the tree they return may depend only on the
//! variable they are given.

use std::cell::Cell;

use crate::expr::{ArithOp, BoolOp, CmpOp, Expr, ExprError, TypedVar};
use crate::schema::SchemaRegistry;
use crate::types::{CollKind, Type};
use crate::value::Value;

pub type BuildResult = Result<Expr, ExprError>;

/// Fresh-variable source. Ids are strictly increasing.
#[derive(Debug)]
pub struct Gensym {
    next: Cell<u32>,
}

impl Default for Gensym {
    fn default() -> Self {
        Gensym::new()
    }
}

impl Gensym {
    pub fn new() -> Gensym {
        Gensym { next: Cell::new(1) }
    }

    /// A source whose first id is `first`.
    pub fn starting_at(first: u32) -> Gensym {
        Gensym { next: Cell::new(first.max(1)) }
    }

    /// A source issuing ids above every variable id in `e`.
    pub fn above(e: &Expr) -> Gensym {
        Gensym::starting_at(e.max_var_id() + 1)
    }

    pub fn fresh(&self, ty: Type) -> TypedVar {
        let id = self.next.get();
        self.next.set(id + 1);
        TypedVar::new(id, ty)
    }

    pub fn peek(&self) -> u32 {
        self.next.get()
    }
}

/// Lifts a constant.
pub fn pure(v: Value, ty: Type) -> BuildResult {
    Expr::constant(v, ty)
}

pub fn int(i: i64) -> Expr {
    Expr::constant(Value::Int(i), Type::Int).expect("int constant")
}

pub fn boolean(b: bool) -> Expr {
    Expr::constant(Value::Bool(b), Type::Bool).expect("bool constant")
}

pub fn string(s: &str) -> Expr {
    Expr::constant(Value::str(s), Type::String).expect("string constant")
}

pub fn double(d: f64) -> Expr {
    Expr::constant(Value::Double(d), Type::Double).expect("double constant")
}

/// Converts a host function over expressions into a function literal.
pub fn fun(arg: Type, body: impl FnOnce(Expr) -> BuildResult, g: &Gensym) -> BuildResult {
    let v = g.fresh(arg);
    let b = body(Expr::var(v.clone()))?;
    Expr::lambda(v, b)
}

pub fn app(f: Expr, arg: Expr) -> BuildResult {
    Expr::app(f, arg)
}

pub fn concat(l: Expr, r: Expr) -> BuildResult {
    Expr::concat(l, r)
}

pub fn add(l: Expr, r: Expr) -> BuildResult {
    Expr::arith(ArithOp::Add, l, r)
}

pub fn sub(l: Expr, r: Expr) -> BuildResult {
    Expr::arith(ArithOp::Sub, l, r)
}

pub fn mul(l: Expr, r: Expr) -> BuildResult {
    Expr::arith(ArithOp::Mul, l, r)
}

pub fn div(l: Expr, r: Expr) -> BuildResult {
    Expr::arith(ArithOp::Div, l, r)
}

pub fn eq(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Eq, l, r)
}

pub fn ne(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Ne, l, r)
}

pub fn lt(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Lt, l, r)
}

pub fn le(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Le, l, r)
}

pub fn gt(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Gt, l, r)
}

pub fn ge(l: Expr, r: Expr) -> BuildResult {
    Expr::cmp(CmpOp::Ge, l, r)
}

pub fn and(l: Expr, r: Expr) -> BuildResult {
    Expr::boolean(BoolOp::And, l, r)
}

pub fn or(l: Expr, r: Expr) -> BuildResult {
    Expr::boolean(BoolOp::Or, l, r)
}

pub fn not(e: Expr) -> BuildResult {
    Expr::negate(e)
}

pub fn tuple(elems: Vec<Expr>) -> BuildResult {
    Expr::tuple(elems)
}

pub fn proj(t: Expr, index: usize) -> BuildResult {
    Expr::proj(t, index)
}

pub fn record(reg: &SchemaRegistry, name: &str, fields: Vec<Expr>) -> BuildResult {
    reg.record(name, fields)
}

pub fn field(rec: Expr, name: &str) -> BuildResult {
    Expr::field(rec, name)
}

pub fn coll_lit(kind: CollKind, elem: Type, elems: Vec<Expr>) -> BuildResult {
    Expr::coll_lit(kind, elem, elems)
}

pub fn size(c: Expr) -> BuildResult {
    Expr::size(c)
}

pub fn union(l: Expr, r: Expr) -> BuildResult {
    Expr::union(l, r)
}

pub fn to_seq(c: Expr) -> BuildResult {
    Expr::to_seq(c)
}

pub fn to_set(c: Expr) -> BuildResult {
    Expr::to_set(c)
}

fn element_type(c: &Expr, op: &str) -> Result<Type, ExprError> {
    c.ty().as_coll().map(|(_, e)| e.clone()).ok_or_else(|| ExprError::Typing {
        path: format!("{op}.coll"),
        expected: "a collection".into(),
        found: c.ty().to_string(),
    })
}

/// `c.map(f)` with `f` given as a host function.
pub fn query_map(c: Expr, f: impl FnOnce(Expr) -> BuildResult, g: &Gensym) -> BuildResult {
    let elem = element_type(&c, "map")?;
    Expr::map(c, fun(elem, f, g)?)
}

/// `c.flatMap(f)`; `f` must return a collection of any kind.
pub fn query_flat_map(c: Expr, f: impl FnOnce(Expr) -> BuildResult, g: &Gensym) -> BuildResult {
    let elem = element_type(&c, "flatmap")?;
    Expr::flat_map(c, fun(elem, f, g)?)
}

/// `c.withFilter(p)`; strict.
pub fn query_filter(c: Expr, p: impl FnOnce(Expr) -> BuildResult, g: &Gensym) -> BuildResult {
    let elem = element_type(&c, "filter")?;
    Expr::filter(c, fun(elem, p, g)?)
}
