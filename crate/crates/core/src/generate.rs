//! Random, type-directed generation of closed, well-typed queries.
//!
//! Generated queries never fail at runtime: division only happens by
//! nonzero constants. Collection constants at the top level hold up to
//! `max_root_len` elements; inside a function body they are kept short so
//! nested loops stay cheap to interpret.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::embed::*;
use crate::expr::{Expr, TypedVar};
use crate::schema::SchemaRegistry;
use crate::types::{CollKind, Schema, Type};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    /// Maximum generator nesting depth.
    pub max_depth: usize,
    pub max_root_len: usize,
    pub max_nested_len: usize,
    /// Integer constants are drawn from `-int_bound..=int_bound`.
    pub int_bound: i64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { max_depth: 6, max_root_len: 30, max_nested_len: 5, int_bound: 20 }
    }
}

/// The trigger patterns of the individual rewrite phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    Simplify,
    Fuse,
    Unnest,
    HoistFilter,
    HashJoin,
}

const STRINGS: [&str; 6] = ["", "a", "b", "ab", "x y", "Pearson"];
const DOUBLES: [f64; 7] = [0.0, -0.0, 0.5, 1.5, -2.25, 3.0, 1e10];
const DIVISORS: [f64; 3] = [0.5, -2.0, 4.0];

#[derive(Clone, Default)]
struct Scope {
    vars: Vec<TypedVar>,
    nested: bool,
}

impl Scope {
    fn with(&self, v: &Expr) -> Scope {
        let mut vars = self.vars.clone();
        if let crate::expr::ExprKind::Var(tv) = v.kind() {
            vars.push(tv.clone());
        }
        Scope { vars, nested: true }
    }
}

type R = BuildResult;

pub struct QueryGen {
    rng: StdRng,
    cfg: GenConfig,
    reg: SchemaRegistry,
    item: Arc<Schema>,
}

impl QueryGen {
    pub fn new(seed: u64) -> QueryGen {
        QueryGen::with_config(seed, GenConfig::default())
    }

    pub fn with_config(seed: u64, cfg: GenConfig) -> QueryGen {
        let reg = SchemaRegistry::new()
            .with("Item", vec![("key", Type::Int), ("label", Type::String), ("tags", Type::seq(Type::Int))])
            .expect("generator schema is valid");
        let item = reg.get("Item").expect("Item registered");
        QueryGen { rng: StdRng::seed_from_u64(seed), cfg, reg, item }
    }

    /// Schemas that generated queries may mention.
    pub fn registry(&self) -> &SchemaRegistry {
        &self.reg
    }

    /// A random closed query, usually of collection type.
    pub fn query(&mut self) -> Expr {
        let ty = if self.rng.gen_bool(0.85) { self.coll_type() } else { self.scalar_type() };
        self.query_of(&ty)
    }

    pub fn query_of(&mut self, ty: &Type) -> Expr {
        let g = Gensym::new();
        let depth = self.cfg.max_depth;
        self.expr(&g, ty, depth, &Scope::default()).expect("generator builds well-typed trees")
    }

    /// A closed query whose root is an instance of the trigger pattern.
    pub fn instance(&mut self, trigger: Trigger) -> Expr {
        let g = Gensym::new();
        let d = self.cfg.max_depth.min(3);
        let s = Scope::default();
        let built = match trigger {
            Trigger::Simplify => self.simplify_instance(&g, d),
            Trigger::Fuse => {
                let ty = self.coll_type();
                self.fuse_pattern(&g, &ty, d, &s)
            }
            Trigger::Unnest => {
                let ty = self.coll_type();
                self.unnest_pattern(&g, &ty, d, &s)
            }
            Trigger::HoistFilter => {
                let ty = self.coll_type();
                self.hoist_pattern(&g, &ty, d, &s)
            }
            Trigger::HashJoin => {
                let ty = self.coll_type();
                let outer_kind = ty.as_coll().expect("collection").0;
                let inner_kind = if self.rng.gen_bool(0.8) { outer_kind } else { CollKind::Seq };
                self.join_pattern(&g, &ty, inner_kind, d, &s)
            }
        };
        built.expect("generator builds well-typed trees")
    }

    // ---- types and values ----

    fn kind(&mut self) -> CollKind {
        if self.rng.gen_bool(0.6) {
            CollKind::Seq
        } else {
            CollKind::Set
        }
    }

    fn scalar_type(&mut self) -> Type {
        match self.rng.gen_range(0..10) {
            0..=4 => Type::Int,
            5..=6 => Type::String,
            7..=8 => Type::Bool,
            _ => Type::Double,
        }
    }

    fn elem_type(&mut self) -> Type {
        match self.rng.gen_range(0..12) {
            0..=3 => Type::Int,
            4..=5 => Type::String,
            6 => Type::Bool,
            7 => Type::Double,
            8..=9 => Type::Tuple(vec![Type::Int, Type::String]),
            _ => Type::Record(self.item.clone()),
        }
    }

    fn coll_type(&mut self) -> Type {
        let k = self.kind();
        let e = self.elem_type();
        Type::coll(k, e)
    }

    /// An element type with an integer join key.
    fn keyed_type(&mut self) -> Type {
        match self.rng.gen_range(0..3) {
            0 => Type::Int,
            1 => Type::Tuple(vec![Type::Int, Type::String]),
            _ => Type::Record(self.item.clone()),
        }
    }

    fn small_int(&mut self) -> i64 {
        let b = self.cfg.int_bound;
        self.rng.gen_range(-b..=b)
    }

    fn value(&mut self, ty: &Type, max_len: usize) -> Value {
        match ty {
            Type::Int => Value::Int(self.small_int()),
            Type::Bool => Value::Bool(self.rng.gen()),
            Type::String => Value::str(STRINGS[self.rng.gen_range(0..STRINGS.len())]),
            Type::Double => Value::Double(DOUBLES[self.rng.gen_range(0..DOUBLES.len())]),
            Type::Tuple(ts) => Value::tuple(ts.iter().map(|t| self.value(t, 3)).collect()),
            Type::Record(s) => {
                let s = s.clone();
                Value::record(s.clone(), s.fields.iter().map(|(_, t)| self.value(t, 3)).collect())
            }
            Type::Coll(k, e) => {
                let n = self.rng.gen_range(0..=max_len);
                Value::collection(*k, (0..n).map(|_| self.value(e, 3)).collect())
            }
            Type::Fun(..) => unreachable!("function values are never generated"),
        }
    }

    fn constant(&mut self, ty: &Type, scope: &Scope) -> Expr {
        let len = if scope.nested { self.cfg.max_nested_len } else { self.cfg.max_root_len };
        let v = self.value(ty, len);
        pure(v, ty.clone()).expect("generated value conforms")
    }

    // ---- expressions ----

    fn leaf(&mut self, ty: &Type, scope: &Scope) -> Expr {
        let candidates: Vec<&TypedVar> = scope.vars.iter().filter(|v| &v.ty == ty).collect();
        if !candidates.is_empty() && self.rng.gen_bool(0.7) {
            let v = candidates[self.rng.gen_range(0..candidates.len())];
            return Expr::var(v.clone());
        }
        self.constant(ty, scope)
    }

    fn expr(&mut self, g: &Gensym, ty: &Type, depth: usize, scope: &Scope) -> R {
        let stop = depth == 0 || self.rng.gen_ratio(1, (depth as u32 + 2).max(3));
        if stop {
            return Ok(self.leaf(ty, scope));
        }
        let d = depth - 1;
        match ty {
            Type::Int => self.int_expr(g, d, scope),
            Type::Bool => self.bool_expr(g, d, scope),
            Type::String => self.string_expr(g, d, scope),
            Type::Double => self.double_expr(g, d, scope),
            Type::Tuple(ts) => {
                let ts = ts.clone();
                let parts = ts.iter().map(|t| self.expr(g, t, d, scope)).collect::<Result<Vec<_>, _>>()?;
                tuple(parts)
            }
            Type::Record(s) if s.name == "Item" => {
                let key = self.expr(g, &Type::Int, d, scope)?;
                let label = self.expr(g, &Type::String, d, scope)?;
                let tags = self.expr(g, &Type::seq(Type::Int), d, scope)?;
                record(&self.reg, "Item", vec![key, label, tags])
            }
            Type::Coll(..) => self.coll_expr(g, ty, d, scope),
            _ => Ok(self.leaf(ty, scope)),
        }
    }

    /// `(v => body)(arg)` of type `ty`.
    fn redex(&mut self, g: &Gensym, ty: &Type, d: usize, scope: &Scope) -> R {
        let arg_ty = self.scalar_type();
        let f = fun(arg_ty.clone(), |v| self.expr(g, ty, d, &scope.with(&v)), g)?;
        let arg = self.expr(g, &arg_ty, d, scope)?;
        app(f, arg)
    }

    /// `(f => f(a) + f(b))(v => body)`: the argument is duplicated by beta reduction.
    fn higher_order_redex(&mut self, g: &Gensym, d: usize, scope: &Scope) -> R {
        let a = self.expr(g, &Type::Int, d, scope)?;
        let b = self.expr(g, &Type::Int, d, scope)?;
        let user = fun(Type::fun(Type::Int, Type::Int), |f| add(app(f.clone(), a)?, app(f, b)?), g)?;
        let arg = fun(Type::Int, |v| self.expr(g, &Type::Int, d, &scope.with(&v)), g)?;
        app(user, arg)
    }

    fn int_expr(&mut self, g: &Gensym, d: usize, scope: &Scope) -> R {
        match self.rng.gen_range(0..11) {
            0..=2 => {
                let l = self.expr(g, &Type::Int, d, scope)?;
                let r = self.expr(g, &Type::Int, d, scope)?;
                match self.rng.gen_range(0..3) {
                    0 => add(l, r),
                    1 => sub(l, r),
                    _ => mul(l, r),
                }
            }
            3 => {
                let l = self.expr(g, &Type::Int, d, scope)?;
                let mut c = self.small_int();
                if c == 0 {
                    c = 3;
                }
                div(l, int(c))
            }
            4 => {
                let c = self.coll_type();
                size(self.expr(g, &c, d, scope)?)
            }
            5 => {
                let t = Type::Tuple(vec![Type::Int, Type::String]);
                proj(self.expr(g, &t, d, scope)?, 1)
            }
            6 => {
                let t = Type::Record(self.item.clone());
                field(self.expr(g, &t, d, scope)?, "key")
            }
            7 => self.redex(g, &Type::Int, d, scope),
            8 => self.higher_order_redex(g, d, scope),
            _ => Ok(self.leaf(&Type::Int, scope)),
        }
    }

    fn bool_expr(&mut self, g: &Gensym, d: usize, scope: &Scope) -> R {
        match self.rng.gen_range(0..10) {
            0..=2 => {
                let l = self.expr(g, &Type::Int, d, scope)?;
                let r = self.expr(g, &Type::Int, d, scope)?;
                match self.rng.gen_range(0..6) {
                    0 => eq(l, r),
                    1 => ne(l, r),
                    2 => lt(l, r),
                    3 => le(l, r),
                    4 => gt(l, r),
                    _ => ge(l, r),
                }
            }
            3 => {
                let t = if self.rng.gen() { Type::String } else { self.elem_type() };
                let l = self.expr(g, &t, d, scope)?;
                let r = self.expr(g, &t, d, scope)?;
                eq(l, r)
            }
            4..=5 => {
                let l = self.expr(g, &Type::Bool, d, scope)?;
                let r = self.expr(g, &Type::Bool, d, scope)?;
                if self.rng.gen() {
                    and(l, r)
                } else {
                    or(l, r)
                }
            }
            6 => not(self.expr(g, &Type::Bool, d, scope)?),
            7 => self.redex(g, &Type::Bool, d, scope),
            _ => Ok(self.leaf(&Type::Bool, scope)),
        }
    }

    fn string_expr(&mut self, g: &Gensym, d: usize, scope: &Scope) -> R {
        match self.rng.gen_range(0..8) {
            0..=2 => {
                let l = self.expr(g, &Type::String, d, scope)?;
                let r = self.expr(g, &Type::String, d, scope)?;
                concat(l, r)
            }
            3 => {
                let t = Type::Record(self.item.clone());
                field(self.expr(g, &t, d, scope)?, "label")
            }
            4 => {
                let t = Type::Tuple(vec![Type::Int, Type::String]);
                proj(self.expr(g, &t, d, scope)?, 2)
            }
            5 => self.redex(g, &Type::String, d, scope),
            _ => Ok(self.leaf(&Type::String, scope)),
        }
    }

    fn double_expr(&mut self, g: &Gensym, d: usize, scope: &Scope) -> R {
        match self.rng.gen_range(0..5) {
            0..=1 => {
                let l = self.expr(g, &Type::Double, d, scope)?;
                let r = self.expr(g, &Type::Double, d, scope)?;
                match self.rng.gen_range(0..3) {
                    0 => add(l, r),
                    1 => sub(l, r),
                    _ => mul(l, r),
                }
            }
            2 => {
                let l = self.expr(g, &Type::Double, d, scope)?;
                div(l, double(DIVISORS[self.rng.gen_range(0..DIVISORS.len())]))
            }
            _ => Ok(self.leaf(&Type::Double, scope)),
        }
    }

    fn coll_expr(&mut self, g: &Gensym, ty: &Type, d: usize, scope: &Scope) -> R {
        let (k, e) = ty.as_coll().expect("collection type");
        let e = e.clone();
        match self.rng.gen_range(0..16) {
            0..=2 => {
                let a = self.elem_type();
                let src = self.expr(g, &Type::coll(k, a), d, scope)?;
                query_map(src, |x| self.expr(g, &e, d, &scope.with(&x)), g)
            }
            3..=4 => {
                let src = self.expr(g, ty, d, scope)?;
                query_filter(src, |x| self.expr(g, &Type::Bool, d, &scope.with(&x)), g)
            }
            5..=6 => {
                let a = self.elem_type();
                let k2 = self.kind();
                let src = self.expr(g, &Type::coll(k, a), d, scope)?;
                query_flat_map(src, |x| self.expr(g, &Type::coll(k2, e.clone()), d, &scope.with(&x)), g)
            }
            7 if e == Type::Int => {
                let src = self.expr(g, &Type::coll(k, Type::Record(self.item.clone())), d, scope)?;
                query_flat_map(src, |x| field(x, "tags"), g)
            }
            7 => {
                let l = self.expr(g, ty, d, scope)?;
                let r = self.expr(g, ty, d, scope)?;
                union(l, r)
            }
            8 => match k {
                CollKind::Seq => to_seq(self.expr(g, &Type::set(e), d, scope)?),
                CollKind::Set => to_set(self.expr(g, &Type::seq(e), d, scope)?),
            },
            9 => {
                let n = self.rng.gen_range(0..=3);
                let elems = (0..n).map(|_| self.expr(g, &e, d, scope)).collect::<Result<Vec<_>, _>>()?;
                coll_lit(k, e, elems)
            }
            10 => {
                let inner_kind = if self.rng.gen_bool(0.8) { k } else { self.kind() };
                self.join_pattern(g, ty, inner_kind, d, scope)
            }
            11 => self.hoist_pattern(g, ty, d, scope),
            12 => self.fuse_pattern(g, ty, d, scope),
            13 => self.unnest_pattern(g, ty, d, scope),
            _ => Ok(self.leaf(ty, scope)),
        }
    }

    /// An integer key of `x`.
    fn key_of(&mut self, x: Expr) -> R {
        let base = match x.ty() {
            Type::Int => x,
            Type::Tuple(_) => proj(x, 1)?,
            _ => field(x, "key")?,
        };
        if self.rng.gen_bool(0.3) {
            add(base, int(self.rng.gen_range(-2..=2)))
        } else {
            Ok(base)
        }
    }

    /// `flatMap(outer, x => map(filter(inner, y => kx == ky), y2 => r))`, with
    /// `inner` independent of `x`.
    fn join_pattern(&mut self, g: &Gensym, ty: &Type, inner_kind: CollKind, d: usize, scope: &Scope) -> R {
        let (k, e) = ty.as_coll().expect("collection type");
        let e = e.clone();
        let a = self.keyed_type();
        let b = self.keyed_type();
        let outer = self.expr(g, &Type::coll(k, a), d, scope)?;
        let inner = self.expr(g, &Type::coll(inner_kind, b.clone()), d, scope)?;
        let swap = self.rng.gen::<bool>();
        let bare = e == b && self.rng.gen_bool(0.2);
        query_flat_map(
            outer,
            |x| {
                let inner_scope = scope.with(&x);
                let filtered = query_filter(
                    inner,
                    |y| {
                        let kx = self.key_of(x.clone())?;
                        let ky = self.key_of(y)?;
                        if swap {
                            eq(ky, kx)
                        } else {
                            eq(kx, ky)
                        }
                    },
                    g,
                )?;
                if bare {
                    return Ok(filtered);
                }
                query_map(filtered, |y2| self.expr(g, &e, d, &inner_scope.with(&y2)), g)
            },
            g,
        )
    }

    /// `flatMap(outer, x => map(filter(inner, y => p(x) && q(x, y)), y2 => r))`.
    fn hoist_pattern(&mut self, g: &Gensym, ty: &Type, d: usize, scope: &Scope) -> R {
        let (k, e) = ty.as_coll().expect("collection type");
        let e = e.clone();
        let a = self.elem_type();
        let b = self.elem_type();
        let k2 = self.kind();
        let outer = self.expr(g, &Type::coll(k, a), d, scope)?;
        query_flat_map(
            outer,
            |x| {
                let sx = scope.with(&x);
                let inner = self.expr(g, &Type::coll(k2, b), d, &sx)?;
                let filtered = query_filter(
                    inner,
                    |y| {
                        let p = self.outer_predicate(g, &x, d, &sx)?;
                        if self.rng.gen_bool(0.3) {
                            return Ok(p);
                        }
                        let q = self.expr(g, &Type::Bool, d, &sx.with(&y))?;
                        if self.rng.gen() {
                            and(p, q)
                        } else {
                            and(q, p)
                        }
                    },
                    g,
                )?;
                query_map(filtered, |y2| self.expr(g, &e, d, &sx.with(&y2)), g)
            },
            g,
        )
    }

    /// A predicate that mentions `x`.
    fn outer_predicate(&mut self, g: &Gensym, x: &Expr, d: usize, scope: &Scope) -> R {
        let key = match x.ty() {
            Type::Int => x.clone(),
            Type::Tuple(_) => proj(x.clone(), 1)?,
            Type::Record(_) => field(x.clone(), "key")?,
            Type::String => size(coll_lit(CollKind::Set, Type::String, vec![x.clone(), string("a")])?)?,
            Type::Bool => return Ok(x.clone()),
            _ => {
                let other = self.expr(g, x.ty(), d, scope)?;
                return eq(x.clone(), other);
            }
        };
        let bound = int(self.small_int());
        if self.rng.gen() {
            lt(key, bound)
        } else {
            ge(key, bound)
        }
    }

    fn fuse_pattern(&mut self, g: &Gensym, ty: &Type, d: usize, scope: &Scope) -> R {
        let (k, e) = ty.as_coll().expect("collection type");
        let e = e.clone();
        match self.rng.gen_range(0..4) {
            0 => {
                let a = self.elem_type();
                let b = self.elem_type();
                let src = self.expr(g, &Type::coll(k, a), d, scope)?;
                let mid = query_map(src, |x| self.expr(g, &b, d, &scope.with(&x)), g)?;
                query_map(mid, |y| self.expr(g, &e, d, &scope.with(&y)), g)
            }
            1 => {
                let src = self.expr(g, ty, d, scope)?;
                let mid = query_filter(src, |x| self.expr(g, &Type::Bool, d, &scope.with(&x)), g)?;
                query_filter(mid, |y| self.expr(g, &Type::Bool, d, &scope.with(&y)), g)
            }
            2 => {
                let a = self.elem_type();
                let b = self.elem_type();
                let k2 = self.kind();
                let src = self.expr(g, &Type::coll(k, a), d, scope)?;
                let mid = query_map(src, |x| self.expr(g, &b, d, &scope.with(&x)), g)?;
                query_flat_map(mid, |y| self.expr(g, &Type::coll(k2, e.clone()), d, &scope.with(&y)), g)
            }
            _ => {
                let a = self.elem_type();
                let b = self.elem_type();
                let k2 = if self.rng.gen_bool(0.8) { k } else { self.kind() };
                let src = self.expr(g, &Type::coll(k, a), d, scope)?;
                let mid = query_flat_map(src, |x| self.expr(g, &Type::coll(k2, b.clone()), d, &scope.with(&x)), g)?;
                query_map(mid, |y| self.expr(g, &e, d, &scope.with(&y)), g)
            }
        }
    }

    fn unnest_pattern(&mut self, g: &Gensym, ty: &Type, d: usize, scope: &Scope) -> R {
        let (k, e) = ty.as_coll().expect("collection type");
        let e = e.clone();
        if self.rng.gen() {
            let a = self.elem_type();
            let b = self.elem_type();
            let k2 = if self.rng.gen_bool(0.8) { k } else { self.kind() };
            let k3 = self.kind();
            let src = self.expr(g, &Type::coll(k, a), d, scope)?;
            let mid = query_flat_map(src, |x| self.expr(g, &Type::coll(k2, b.clone()), d, &scope.with(&x)), g)?;
            query_flat_map(mid, |y| self.expr(g, &Type::coll(k3, e.clone()), d, &scope.with(&y)), g)
        } else {
            let a = self.elem_type();
            let src = self.expr(g, &Type::coll(k, a), d, scope)?;
            let convert_to = if self.rng.gen_bool(0.8) { k } else { self.kind() };
            query_flat_map(
                src,
                |x| {
                    let sx = scope.with(&x);
                    match convert_to {
                        CollKind::Set => to_set(self.expr(g, &Type::seq(e.clone()), d, &sx)?),
                        CollKind::Seq => to_seq(self.expr(g, &Type::set(e.clone()), d, &sx)?),
                    }
                },
                g,
            )
        }
    }

    /// `map(c, x => s(x))` where `s` is a simplification redex.
    fn simplify_instance(&mut self, g: &Gensym, d: usize) -> R {
        let a = self.elem_type();
        let src = self.constant(&Type::seq(a), &Scope::default());
        let choice = self.rng.gen_range(0..7);
        let ty = [Type::Int, Type::String, Type::Bool][choice % 3].clone();
        query_map(
            src,
            |x| {
                let s = Scope::default().with(&x);
                match choice {
                    0 => {
                        let other = self.elem_type();
                        let v = self.expr(g, &Type::Int, d, &s)?;
                        let w = self.expr(g, &other, d, &s)?;
                        proj(tuple(vec![v, w])?, 1)
                    }
                    1 => {
                        let key = self.expr(g, &Type::Int, d, &s)?;
                        let label = self.expr(g, &Type::String, d, &s)?;
                        let tags = self.expr(g, &Type::seq(Type::Int), d, &s)?;
                        field(record(&self.reg, "Item", vec![key, label, tags])?, "label")
                    }
                    2 => {
                        let v = self.expr(g, &Type::Bool, d, &s)?;
                        let c = boolean(self.rng.gen());
                        if self.rng.gen() {
                            and(c, not(not(v)?)?)
                        } else {
                            or(v, c)
                        }
                    }
                    3 => {
                        let v = self.expr(g, &Type::Int, d, &s)?;
                        add(add(int(self.small_int()), v)?, int(self.small_int()))
                    }
                    4 => {
                        let v = self.expr(g, &Type::String, d, &s)?;
                        concat(concat(string("a"), string("b"))?, concat(string(""), v)?)
                    }
                    5 => {
                        let v = self.expr(g, &Type::Int, d, &s)?;
                        mul(int(1), mul(v, add(int(2), int(self.small_int()))?)?)
                    }
                    _ => {
                        let v = self.expr(g, &ty, d, &s)?;
                        self.redex_around(g, v)
                    }
                }
            },
            g,
        )
    }

    fn redex_around(&mut self, g: &Gensym, v: Expr) -> R {
        let ty = v.ty().clone();
        let f = fun(ty, Ok, g)?;
        app(f, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::interpret_closed;

    #[test]
    fn generated_queries_are_closed_and_evaluate() {
        let mut gen = QueryGen::new(7);
        for _ in 0..200 {
            let q = gen.query();
            assert!(q.free_vars().is_empty(), "{q}");
            assert!(q.has_unique_binders(), "{q}");
            let (v, _) = interpret_closed(&q).unwrap_or_else(|err| panic!("{err}: {q}"));
            assert!(v.conforms(q.ty()));
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a: Vec<_> = (0..20)
            .map({
                let mut gen = QueryGen::new(3);
                move |_| gen.query()
            })
            .collect();
        let b: Vec<_> = (0..20)
            .map({
                let mut gen = QueryGen::new(3);
                move |_| gen.query()
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn trigger_instances_evaluate() {
        let mut gen = QueryGen::new(11);
        for t in [Trigger::Simplify, Trigger::Fuse, Trigger::Unnest, Trigger::HoistFilter, Trigger::HashJoin] {
            for _ in 0..30 {
                let q = gen.instance(t);
                assert!(q.free_vars().is_empty());
                interpret_closed(&q).unwrap_or_else(|err| panic!("{t:?} {err}: {q}"));
            }
        }
    }
}
