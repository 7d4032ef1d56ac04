//! Typed expression trees.
//!
//! Every node caches its [`Type`], computed when the node is built. The
//! checked constructors on [`Expr`] are the only way to obtain a node, so an
//! ill-typed tree cannot exist.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::types::{CollKind, Schema, Type};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("typing error at {path}: expected {expected}, found {found}")]
    Typing { path: String, expected: String, found: String },
    #[error("arity error: {node} takes {expected} children, got {found}")]
    Arity { node: &'static str, expected: usize, found: usize },
    #[error("value {value} does not conform to type {ty}")]
    ValueTagMismatch { value: String, ty: String },
}

fn typing(path: &str, expected: impl fmt::Display, found: impl fmt::Display) -> ExprError {
    ExprError::Typing { path: path.to_string(), expected: expected.to_string(), found: found.to_string() }
}

/// A variable identified by an integer, with its type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedVar {
    pub id: u32,
    pub ty: Type,
}

impl TypedVar {
    pub fn new(id: u32, ty: Type) -> TypedVar {
        TypedVar { id, ty }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolOp {
    And,
    Or,
}

impl ArithOp {
    pub fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
            ArithOp::Div => "div",
        }
    }
}

impl CmpOp {
    pub fn name(self) -> &'static str {
        match self {
            CmpOp::Eq => "eq",
            CmpOp::Ne => "ne",
            CmpOp::Lt => "lt",
            CmpOp::Le => "le",
            CmpOp::Gt => "gt",
            CmpOp::Ge => "ge",
        }
    }
}

impl BoolOp {
    pub fn name(self) -> &'static str {
        match self {
            BoolOp::And => "and",
            BoolOp::Or => "or",
        }
    }
}

/// Node variants. Children are themselves [`Expr`] handles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExprKind {
    Const(Value),
    Var(TypedVar),
    /// Function literal in first-order form.
    Fun {
        param: TypedVar,
        body: Expr,
    },
    App {
        fun: Expr,
        arg: Expr,
    },
    Concat(Expr, Expr),
    Arith(ArithOp, Expr, Expr),
    Cmp(CmpOp, Expr, Expr),
    Bool(BoolOp, Expr, Expr),
    Not(Expr),
    Tuple(Vec<Expr>),
    /// 1-based tuple projection.
    Proj(Expr, usize),
    Record(Arc<Schema>, Vec<Expr>),
    Field {
        rec: Expr,
        name: String,
        index: usize,
    },
    Lit {
        kind: CollKind,
        elem: Type,
        elems: Vec<Expr>,
    },
    Map(Expr, Expr),
    FlatMap(Expr, Expr),
    Filter(Expr, Expr),
    Size(Expr),
    Union(Expr, Expr),
    ToSeq(Expr),
    ToSet(Expr),
    /// Equi-join; only the optimizer builds these.
    HashJoin {
        outer: Expr,
        inner: Expr,
        outer_key: Expr,
        inner_key: Expr,
        combine: Expr,
    },
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ExprData {
    kind: ExprKind,
    ty: Type,
}

/// Immutable, cheaply clonable handle to a typed node.
#[derive(Clone, PartialOrd, Ord)]
pub struct Expr(Arc<ExprData>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Expr {}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::plan::print_plan_raw(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::plan::print_plan_raw(self))
    }
}

fn expect_coll<'a>(path: &str, e: &'a Expr) -> Result<(CollKind, &'a Type), ExprError> {
    e.ty().as_coll().ok_or_else(|| typing(path, "a collection", e.ty()))
}

/// Checks that `f` is a function from `arg`, returning its result type.
fn expect_fun_from<'a>(path: &str, f: &'a Expr, arg: &Type) -> Result<&'a Type, ExprError> {
    match f.ty().as_fun() {
        Some((a, r)) if a == arg => Ok(r),
        _ => Err(typing(path, format!("fun<{arg},_>"), f.ty())),
    }
}

impl Expr {
    fn make(kind: ExprKind, ty: Type) -> Expr {
        Expr(Arc::new(ExprData { kind, ty }))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Parameter and body if this node is a function literal.
    pub fn as_lambda(&self) -> Option<(&TypedVar, &Expr)> {
        match self.kind() {
            ExprKind::Fun { param, body } => Some((param, body)),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Value> {
        match self.kind() {
            ExprKind::Const(v) => Some(v),
            _ => None,
        }
    }

    // ---- checked constructors ----

    pub fn constant(value: Value, ty: Type) -> Result<Expr, ExprError> {
        let mismatch = || ExprError::ValueTagMismatch { value: value.to_string(), ty: ty.to_string() };
        if ty.validate().is_err() || !ty.is_data() || !value.conforms(&ty) {
            return Err(mismatch());
        }
        Ok(Expr::make(ExprKind::Const(value), ty))
    }

    pub fn var(v: TypedVar) -> Expr {
        let ty = v.ty.clone();
        Expr::make(ExprKind::Var(v), ty)
    }

    pub fn lambda(param: TypedVar, body: Expr) -> Result<Expr, ExprError> {
        param.ty.validate().map_err(|e| typing("fun.param", "a valid type", e))?;
        let ty = Type::fun(param.ty.clone(), body.ty().clone());
        Ok(Expr::make(ExprKind::Fun { param, body }, ty))
    }

    pub fn app(fun: Expr, arg: Expr) -> Result<Expr, ExprError> {
        let res = match fun.ty().as_fun() {
            Some((a, r)) if a == arg.ty() => r.clone(),
            Some((a, _)) => return Err(typing("app.arg", a, arg.ty())),
            None => return Err(typing("app.fun", "a function", fun.ty())),
        };
        Ok(Expr::make(ExprKind::App { fun, arg }, res))
    }

    pub fn concat(l: Expr, r: Expr) -> Result<Expr, ExprError> {
        if l.ty() != &Type::String {
            return Err(typing("concat.lhs", Type::String, l.ty()));
        }
        if r.ty() != &Type::String {
            return Err(typing("concat.rhs", Type::String, r.ty()));
        }
        Ok(Expr::make(ExprKind::Concat(l, r), Type::String))
    }

    pub fn arith(op: ArithOp, l: Expr, r: Expr) -> Result<Expr, ExprError> {
        if !matches!(l.ty(), Type::Int | Type::Double) {
            return Err(typing(&format!("{}.lhs", op.name()), "int or double", l.ty()));
        }
        if l.ty() != r.ty() {
            return Err(typing(&format!("{}.rhs", op.name()), l.ty(), r.ty()));
        }
        let ty = l.ty().clone();
        Ok(Expr::make(ExprKind::Arith(op, l, r), ty))
    }

    pub fn cmp(op: CmpOp, l: Expr, r: Expr) -> Result<Expr, ExprError> {
        if l.ty() != r.ty() {
            return Err(typing(&format!("{}.rhs", op.name()), l.ty(), r.ty()));
        }
        match op {
            CmpOp::Eq | CmpOp::Ne if !l.ty().is_data() => {
                return Err(typing(&format!("{}.lhs", op.name()), "a data type", l.ty()));
            }
            CmpOp::Lt | CmpOp::Le | CmpOp::Gt | CmpOp::Ge if !l.ty().is_ordered_scalar() => {
                return Err(typing(&format!("{}.lhs", op.name()), "int, double or string", l.ty()));
            }
            _ => {}
        }
        Ok(Expr::make(ExprKind::Cmp(op, l, r), Type::Bool))
    }

    pub fn boolean(op: BoolOp, l: Expr, r: Expr) -> Result<Expr, ExprError> {
        if l.ty() != &Type::Bool {
            return Err(typing(&format!("{}.lhs", op.name()), Type::Bool, l.ty()));
        }
        if r.ty() != &Type::Bool {
            return Err(typing(&format!("{}.rhs", op.name()), Type::Bool, r.ty()));
        }
        Ok(Expr::make(ExprKind::Bool(op, l, r), Type::Bool))
    }

    pub fn negate(e: Expr) -> Result<Expr, ExprError> {
        if e.ty() != &Type::Bool {
            return Err(typing("not", Type::Bool, e.ty()));
        }
        Ok(Expr::make(ExprKind::Not(e), Type::Bool))
    }

    pub fn tuple(elems: Vec<Expr>) -> Result<Expr, ExprError> {
        if elems.len() < 2 {
            return Err(typing("tuple", "at least 2 components", elems.len()));
        }
        let ty = Type::Tuple(elems.iter().map(|e| e.ty().clone()).collect());
        Ok(Expr::make(ExprKind::Tuple(elems), ty))
    }

    pub fn proj(t: Expr, index: usize) -> Result<Expr, ExprError> {
        let ty = match t.ty() {
            Type::Tuple(es) if index >= 1 && index <= es.len() => es[index - 1].clone(),
            Type::Tuple(es) => {
                return Err(typing("proj.index", format!("1..={}", es.len()), index));
            }
            other => return Err(typing("proj.tuple", "a tuple", other)),
        };
        Ok(Expr::make(ExprKind::Proj(t, index), ty))
    }

    pub fn record(schema: Arc<Schema>, fields: Vec<Expr>) -> Result<Expr, ExprError> {
        if fields.len() != schema.fields.len() {
            return Err(typing(
                &format!("record {}", schema.name),
                format!("{} fields", schema.fields.len()),
                fields.len(),
            ));
        }
        for ((name, fty), e) in schema.fields.iter().zip(&fields) {
            if e.ty() != fty {
                return Err(typing(&format!("record {}.{name}", schema.name), fty, e.ty()));
            }
        }
        let ty = Type::Record(schema.clone());
        Ok(Expr::make(ExprKind::Record(schema, fields), ty))
    }

    pub fn field(rec: Expr, name: &str) -> Result<Expr, ExprError> {
        let (index, ty) = match rec.ty() {
            Type::Record(schema) => match schema.field_index(name) {
                Some(i) => (i, schema.fields[i].1.clone()),
                None => return Err(typing(&format!("field {name}"), format!("a field of {}", schema.name), name)),
            },
            other => return Err(typing(&format!("field {name}"), "a record", other)),
        };
        Ok(Expr::make(ExprKind::Field { rec, name: name.to_string(), index }, ty))
    }

    pub fn coll_lit(kind: CollKind, elem: Type, elems: Vec<Expr>) -> Result<Expr, ExprError> {
        let ty = Type::coll(kind, elem.clone());
        ty.validate().map_err(|e| typing("lit", "a collection of data", e))?;
        for (i, e) in elems.iter().enumerate() {
            if e.ty() != &elem {
                return Err(typing(&format!("lit[{i}]"), &elem, e.ty()));
            }
        }
        Ok(Expr::make(ExprKind::Lit { kind, elem, elems }, ty))
    }

    pub fn map(coll: Expr, f: Expr) -> Result<Expr, ExprError> {
        let (k, a) = expect_coll("map.coll", &coll)?;
        let b = expect_fun_from("map.f", &f, a)?;
        let ty = Type::coll(k, b.clone());
        ty.validate().map_err(|e| typing("map.f", "a data result", e))?;
        Ok(Expr::make(ExprKind::Map(coll, f), ty))
    }

    pub fn flat_map(coll: Expr, f: Expr) -> Result<Expr, ExprError> {
        let (k, a) = expect_coll("flatmap.coll", &coll)?;
        let res = expect_fun_from("flatmap.f", &f, a)?;
        let b = match res.as_coll() {
            Some((_, b)) => b.clone(),
            None => return Err(typing("flatmap.f", "a function returning a collection", f.ty())),
        };
        Ok(Expr::make(ExprKind::FlatMap(coll, f), Type::coll(k, b)))
    }

    pub fn filter(coll: Expr, p: Expr) -> Result<Expr, ExprError> {
        let (_, a) = expect_coll("filter.coll", &coll)?;
        let res = expect_fun_from("filter.p", &p, a)?;
        if res != &Type::Bool {
            return Err(typing("filter.p", Type::fun(a.clone(), Type::Bool), p.ty()));
        }
        let ty = coll.ty().clone();
        Ok(Expr::make(ExprKind::Filter(coll, p), ty))
    }

    pub fn size(coll: Expr) -> Result<Expr, ExprError> {
        expect_coll("size", &coll)?;
        Ok(Expr::make(ExprKind::Size(coll), Type::Int))
    }

    pub fn union(l: Expr, r: Expr) -> Result<Expr, ExprError> {
        expect_coll("union.lhs", &l)?;
        if l.ty() != r.ty() {
            return Err(typing("union.rhs", l.ty(), r.ty()));
        }
        let ty = l.ty().clone();
        Ok(Expr::make(ExprKind::Union(l, r), ty))
    }

    pub fn to_seq(coll: Expr) -> Result<Expr, ExprError> {
        let (_, a) = expect_coll("toseq", &coll)?;
        let ty = Type::seq(a.clone());
        Ok(Expr::make(ExprKind::ToSeq(coll), ty))
    }

    pub fn to_set(coll: Expr) -> Result<Expr, ExprError> {
        let (_, a) = expect_coll("toset", &coll)?;
        let ty = Type::set(a.clone());
        Ok(Expr::make(ExprKind::ToSet(coll), ty))
    }

    /// Builds a join node. Crate-private: joins only arise from optimization
    /// (and from parsing plans that already contain one).
    pub(crate) fn hash_join(
        outer: Expr,
        inner: Expr,
        outer_key: Expr,
        inner_key: Expr,
        combine: Expr,
    ) -> Result<Expr, ExprError> {
        let (k, a) = expect_coll("hashjoin.outer", &outer)?;
        let (_, b) = expect_coll("hashjoin.inner", &inner)?;
        let key = expect_fun_from("hashjoin.outer_key", &outer_key, a)?;
        if !key.is_data() {
            return Err(typing("hashjoin.outer_key", "a data key", key));
        }
        let ikey = expect_fun_from("hashjoin.inner_key", &inner_key, b)?;
        if ikey != key {
            return Err(typing("hashjoin.inner_key", key, ikey));
        }
        let pair = Type::Tuple(vec![a.clone(), b.clone()]);
        let r = expect_fun_from("hashjoin.combine", &combine, &pair)?;
        let ty = Type::coll(k, r.clone());
        ty.validate().map_err(|e| typing("hashjoin.combine", "a data result", e))?;
        Ok(Expr::make(ExprKind::HashJoin { outer, inner, outer_key, inner_key, combine }, ty))
    }

    // ---- generic traversal ----

    /// Direct subexpressions in canonical left-to-right order.
    pub fn children(&self) -> Vec<Expr> {
        use ExprKind::*;
        match self.kind() {
            Const(_) | Var(_) => vec![],
            Fun { body, .. } => vec![body.clone()],
            App { fun, arg } => vec![fun.clone(), arg.clone()],
            Concat(l, r) | Arith(_, l, r) | Cmp(_, l, r) | Bool(_, l, r) | Union(l, r) => {
                vec![l.clone(), r.clone()]
            }
            Map(c, f) | FlatMap(c, f) | Filter(c, f) => vec![c.clone(), f.clone()],
            Not(e) | Proj(e, _) | Size(e) | ToSeq(e) | ToSet(e) => vec![e.clone()],
            Field { rec, .. } => vec![rec.clone()],
            Tuple(es) | Record(_, es) | Lit { elems: es, .. } => es.clone(),
            HashJoin { outer, inner, outer_key, inner_key, combine } => {
                vec![outer.clone(), inner.clone(), outer_key.clone(), inner_key.clone(), combine.clone()]
            }
        }
    }

    pub fn child_count(&self) -> usize {
        use ExprKind::*;
        match self.kind() {
            Const(_) | Var(_) => 0,
            Fun { .. } | Not(_) | Proj(..) | Size(_) | ToSeq(_) | ToSet(_) | Field { .. } => 1,
            App { .. }
            | Concat(..)
            | Arith(..)
            | Cmp(..)
            | Bool(..)
            | Union(..)
            | Map(..)
            | FlatMap(..)
            | Filter(..) => 2,
            Tuple(es) | Record(_, es) | Lit { elems: es, .. } => es.len(),
            HashJoin { .. } => 5,
        }
    }

    /// Same node variant with children replaced, re-typechecked.
    pub fn rebuild(&self, children: Vec<Expr>) -> Result<Expr, ExprError> {
        use ExprKind::*;
        let expected = self.child_count();
        if children.len() != expected {
            return Err(ExprError::Arity { node: self.node_name(), expected, found: children.len() });
        }
        if children.iter().zip(self.children()).all(|(n, o)| n.ptr_eq(&o)) {
            return Ok(self.clone());
        }
        let mut it = children.into_iter();
        let mut next = || it.next().unwrap();
        match self.kind() {
            Const(_) | Var(_) => Ok(self.clone()),
            Fun { param, .. } => Expr::lambda(param.clone(), next()),
            App { .. } => Expr::app(next(), next()),
            Concat(..) => Expr::concat(next(), next()),
            Arith(op, ..) => Expr::arith(*op, next(), next()),
            Cmp(op, ..) => Expr::cmp(*op, next(), next()),
            Bool(op, ..) => Expr::boolean(*op, next(), next()),
            Not(_) => Expr::negate(next()),
            Tuple(es) => Expr::tuple((0..es.len()).map(|_| next()).collect()),
            Proj(_, i) => Expr::proj(next(), *i),
            Record(s, es) => Expr::record(s.clone(), (0..es.len()).map(|_| next()).collect()),
            Field { name, .. } => Expr::field(next(), name),
            Lit { kind, elem, elems } => {
                Expr::coll_lit(*kind, elem.clone(), (0..elems.len()).map(|_| next()).collect())
            }
            Map(..) => Expr::map(next(), next()),
            FlatMap(..) => Expr::flat_map(next(), next()),
            Filter(..) => Expr::filter(next(), next()),
            Size(_) => Expr::size(next()),
            Union(..) => Expr::union(next(), next()),
            ToSeq(_) => Expr::to_seq(next()),
            ToSet(_) => Expr::to_set(next()),
            HashJoin { .. } => Expr::hash_join(next(), next(), next(), next(), next()),
        }
    }

    pub fn node_name(&self) -> &'static str {
        use ExprKind::*;
        match self.kind() {
            Const(_) => "const",
            Var(_) => "var",
            Fun { .. } => "fun",
            App { .. } => "app",
            Concat(..) => "concat",
            Arith(op, ..) => op.name(),
            Cmp(op, ..) => op.name(),
            Bool(op, ..) => op.name(),
            Not(_) => "not",
            Tuple(_) => "tuple",
            Proj(..) => "proj",
            Record(..) => "record",
            Field { .. } => "field",
            Lit { .. } => "lit",
            Map(..) => "map",
            FlatMap(..) => "flatmap",
            Filter(..) => "filter",
            Size(_) => "size",
            Union(..) => "union",
            ToSeq(_) => "toseq",
            ToSet(_) => "toset",
            HashJoin { .. } => "hashjoin",
        }
    }

    /// Pre-order visit of every node.
    pub fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<TypedVar> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn mentions(&self, id: u32) -> bool {
        self.free_vars().iter().any(|v| v.id == id)
    }

    /// Binders in pre-order.
    pub fn binders(&self) -> Vec<TypedVar> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let ExprKind::Fun { param, .. } = e.kind() {
                out.push(param.clone());
            }
        });
        out
    }

    /// Barendregt check: binder ids pairwise distinct and disjoint from free variables.
    pub fn has_unique_binders(&self) -> bool {
        let mut seen: BTreeSet<u32> = self.free_vars().iter().map(|v| v.id).collect();
        self.binders().iter().all(|b| seen.insert(b.id))
    }

    /// Largest variable id occurring anywhere (bound or free), or 0.
    pub fn max_var_id(&self) -> u32 {
        let mut max = 0;
        self.visit(&mut |e| match e.kind() {
            ExprKind::Var(v) | ExprKind::Fun { param: v, .. } => max = max.max(v.id),
            _ => {}
        });
        max
    }

    pub fn contains_node(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= pred(e));
        found
    }
}

fn collect_free(e: &Expr, bound: &mut Vec<u32>, out: &mut BTreeSet<TypedVar>) {
    match e.kind() {
        ExprKind::Var(v) => {
            if !bound.contains(&v.id) {
                out.insert(v.clone());
            }
        }
        ExprKind::Fun { param, body } => {
            bound.push(param.id);
            collect_free(body, bound, out);
            bound.pop();
        }
        _ => {
            for c in e.children() {
                collect_free(&c, bound, out);
            }
        }
    }
}

/// Structural equality; variable ids must match exactly.
pub fn expr_equal(a: &Expr, b: &Expr) -> bool {
    a == b
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_equivalent(a: &Expr, b: &Expr) -> bool {
    fn go(a: &Expr, b: &Expr, env: &mut Vec<(u32, u32)>) -> bool {
        if a.ty() != b.ty() {
            return false;
        }
        match (a.kind(), b.kind()) {
            (ExprKind::Var(x), ExprKind::Var(y)) => match env.iter().rev().find(|(l, r)| *l == x.id || *r == y.id) {
                Some((l, r)) => *l == x.id && *r == y.id,
                None => x == y,
            },
            (ExprKind::Fun { param: p, body: bp }, ExprKind::Fun { param: q, body: bq }) => {
                if p.ty != q.ty {
                    return false;
                }
                env.push((p.id, q.id));
                let ok = go(bp, bq, env);
                env.pop();
                ok
            }
            (ka, kb) => {
                if std::mem::discriminant(ka) != std::mem::discriminant(kb) || !same_shape(ka, kb) {
                    return false;
                }
                let (ca, cb) = (a.children(), b.children());
                ca.len() == cb.len() && ca.iter().zip(&cb).all(|(x, y)| go(x, y, env))
            }
        }
    }
    go(a, b, &mut Vec::new())
}

/// Compares the non-child payload of two nodes of the same variant.
fn same_shape(a: &ExprKind, b: &ExprKind) -> bool {
    use ExprKind::*;
    match (a, b) {
        (Const(x), Const(y)) => x == y,
        (Arith(o, ..), Arith(p, ..)) => o == p,
        (Cmp(o, ..), Cmp(p, ..)) => o == p,
        (Bool(o, ..), Bool(p, ..)) => o == p,
        (Proj(_, i), Proj(_, j)) => i == j,
        (Record(s, _), Record(t, _)) => s == t,
        (Field { name: n, .. }, Field { name: m, .. }) => n == m,
        (Lit { kind: k, elem: e, .. }, Lit { kind: l, elem: f, .. }) => k == l && e == f,
        _ => true,
    }
}
