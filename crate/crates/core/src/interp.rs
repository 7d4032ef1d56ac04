//! Environment-based evaluator.
//!
//! Bulk operators report their work through [`CostCounters`]: every element a
//! map, flatMap, filter or join traverses counts as one visit, every filter
//! predicate application as one predicate evaluation, and every probe of a
//! join's hash table as one lookup.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{ArithOp, BoolOp, CmpOp, Expr, ExprKind};
use crate::types::CollKind;
use crate::value::{Closure, Env, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(u32),
    #[error("division by zero")]
    DivisionByZero,
    /// A construction-checked tree produced an ill-typed value. Indicates a bug.
    #[error("internal type mismatch in {0}")]
    TypeMismatch(&'static str),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostCounters {
    pub elements_visited: u64,
    pub predicate_evals: u64,
    pub hash_lookups: u64,
}

pub fn interpret(e: &Expr, env: &Env, counters: &mut CostCounters) -> Result<Value, EvalError> {
    Interpreter { counters }.eval(e, env)
}

/// Evaluates a closed tree with fresh counters.
pub fn interpret_closed(e: &Expr) -> Result<(Value, CostCounters), EvalError> {
    let mut counters = CostCounters::default();
    let v = interpret(e, &Env::empty(), &mut counters)?;
    Ok((v, counters))
}

struct Interpreter<'a> {
    counters: &'a mut CostCounters,
}

fn mismatch(what: &'static str) -> EvalError {
    EvalError::TypeMismatch(what)
}

impl Interpreter<'_> {
    fn eval(&mut self, e: &Expr, env: &Env) -> Result<Value, EvalError> {
        use ExprKind::*;
        match e.kind() {
            Const(v) => Ok(v.clone()),
            Var(v) => env.lookup(v.id).cloned().ok_or(EvalError::UnboundVariable(v.id)),
            Fun { param, body } => {
                Ok(Value::Closure(Closure { param: param.clone(), body: body.clone(), env: env.clone() }))
            }
            App { fun, arg } => {
                let f = self.closure(fun, env)?;
                let a = self.eval(arg, env)?;
                self.apply(&f, a)
            }
            Concat(l, r) => {
                let (l, r) = (self.eval(l, env)?, self.eval(r, env)?);
                match (l, r) {
                    (Value::Str(a), Value::Str(b)) => Ok(Value::Str(Arc::from(format!("{a}{b}")))),
                    _ => Err(mismatch("concat")),
                }
            }
            Arith(op, l, r) => {
                let (l, r) = (self.eval(l, env)?, self.eval(r, env)?);
                arith(*op, &l, &r)
            }
            Cmp(op, l, r) => {
                let (l, r) = (self.eval(l, env)?, self.eval(r, env)?);
                Ok(Value::Bool(compare(*op, &l, &r)))
            }
            Bool(op, l, r) => {
                let l = self.eval(l, env)?.as_bool().ok_or(mismatch("boolean lhs"))?;
                match (op, l) {
                    (BoolOp::And, false) => Ok(Value::Bool(false)),
                    (BoolOp::Or, true) => Ok(Value::Bool(true)),
                    _ => {
                        let r = self.eval(r, env)?.as_bool().ok_or(mismatch("boolean rhs"))?;
                        Ok(Value::Bool(r))
                    }
                }
            }
            Not(x) => {
                let b = self.eval(x, env)?.as_bool().ok_or(mismatch("not"))?;
                Ok(Value::Bool(!b))
            }
            Tuple(es) => {
                let vs = es.iter().map(|x| self.eval(x, env)).collect::<Result<Vec<_>, _>>()?;
                Ok(Value::tuple(vs))
            }
            Proj(t, i) => match self.eval(t, env)? {
                Value::Tuple(vs) => vs.get(i - 1).cloned().ok_or(mismatch("proj")),
                _ => Err(mismatch("proj")),
            },
            Record(schema, es) => {
                let vs = es.iter().map(|x| self.eval(x, env)).collect::<Result<Vec<_>, _>>()?;
                Ok(Value::record(schema.clone(), vs))
            }
            Field { rec, index, .. } => match self.eval(rec, env)? {
                Value::Record(_, vs) => vs.get(*index).cloned().ok_or(mismatch("field")),
                _ => Err(mismatch("field")),
            },
            Lit { kind, elems, .. } => {
                let vs = elems.iter().map(|x| self.eval(x, env)).collect::<Result<Vec<_>, _>>()?;
                Ok(Value::collection(*kind, vs))
            }
            Map(c, f) => {
                let kind = result_kind(e);
                let coll = self.eval(c, env)?;
                let f = self.closure(f, env)?;
                let mut out = Vec::with_capacity(coll.len().unwrap_or(0));
                for x in elements(&coll)? {
                    self.counters.elements_visited += 1;
                    out.push(self.apply(&f, x.clone())?);
                }
                Ok(Value::collection(kind, out))
            }
            FlatMap(c, f) => {
                let kind = result_kind(e);
                let coll = self.eval(c, env)?;
                let f = self.closure(f, env)?;
                let mut out = Vec::new();
                for x in elements(&coll)? {
                    self.counters.elements_visited += 1;
                    let inner = self.apply(&f, x.clone())?;
                    out.extend(elements(&inner)?.cloned());
                }
                Ok(Value::collection(kind, out))
            }
            Filter(c, p) => {
                let coll = self.eval(c, env)?;
                let p = self.closure(p, env)?;
                let mut out = Vec::new();
                for x in elements(&coll)? {
                    self.counters.elements_visited += 1;
                    self.counters.predicate_evals += 1;
                    let keep = self.apply(&p, x.clone())?.as_bool().ok_or(mismatch("filter"))?;
                    if keep {
                        out.push(x.clone());
                    }
                }
                Ok(match coll {
                    Value::Set(_) => Value::Set(Arc::new(out.into_iter().collect())),
                    _ => Value::seq(out),
                })
            }
            Size(c) => {
                let n = self.eval(c, env)?.len().ok_or(mismatch("size"))?;
                Ok(Value::Int(n as i64))
            }
            Union(l, r) => match (self.eval(l, env)?, self.eval(r, env)?) {
                (Value::Seq(a), Value::Seq(b)) => Ok(Value::seq(a.iter().chain(b.iter()).cloned().collect())),
                (Value::Set(a), Value::Set(b)) => {
                    let mut s: BTreeSet<Value> = (*a).clone();
                    s.extend(b.iter().cloned());
                    Ok(Value::Set(Arc::new(s)))
                }
                _ => Err(mismatch("union")),
            },
            ToSeq(c) => match self.eval(c, env)? {
                v @ Value::Seq(_) => Ok(v),
                Value::Set(s) => Ok(Value::seq(s.iter().cloned().collect())),
                _ => Err(mismatch("toseq")),
            },
            ToSet(c) => match self.eval(c, env)? {
                v @ Value::Set(_) => Ok(v),
                Value::Seq(s) => Ok(Value::set(s.iter().cloned())),
                _ => Err(mismatch("toset")),
            },
            HashJoin { outer, inner, outer_key, inner_key, combine } => {
                let kind = result_kind(e);
                let outer = self.eval(outer, env)?;
                let inner = self.eval(inner, env)?;
                let okey = self.closure(outer_key, env)?;
                let ikey = self.closure(inner_key, env)?;
                let combine = self.closure(combine, env)?;
                let mut table: HashMap<Value, Vec<Value>> = HashMap::new();
                for y in elements(&inner)? {
                    self.counters.elements_visited += 1;
                    let k = self.apply(&ikey, y.clone())?;
                    table.entry(k).or_default().push(y.clone());
                }
                let mut out = Vec::new();
                for x in elements(&outer)? {
                    self.counters.elements_visited += 1;
                    let k = self.apply(&okey, x.clone())?;
                    self.counters.hash_lookups += 1;
                    if let Some(matches) = table.get(&k) {
                        for y in matches {
                            out.push(self.apply(&combine, Value::tuple(vec![x.clone(), y.clone()]))?);
                        }
                    }
                }
                Ok(Value::collection(kind, out))
            }
        }
    }

    fn closure(&mut self, f: &Expr, env: &Env) -> Result<Closure, EvalError> {
        match self.eval(f, env)? {
            Value::Closure(c) => Ok(c),
            _ => Err(mismatch("function position")),
        }
    }

    fn apply(&mut self, f: &Closure, arg: Value) -> Result<Value, EvalError> {
        let env = f.env.bind(f.param.id, arg);
        self.eval(&f.body, &env)
    }
}

fn result_kind(e: &Expr) -> CollKind {
    e.ty().as_coll().map(|(k, _)| k).expect("collection node has a collection type")
}

fn elements(v: &Value) -> Result<Box<dyn Iterator<Item = &Value> + '_>, EvalError> {
    v.elements().ok_or(mismatch("collection operand"))
}

/// Scalar arithmetic. Integers wrap on overflow; integer division truncates.
pub fn arith(op: ArithOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => Ok(Value::Int(match op {
            ArithOp::Add => a.wrapping_add(*b),
            ArithOp::Sub => a.wrapping_sub(*b),
            ArithOp::Mul => a.wrapping_mul(*b),
            ArithOp::Div => {
                if *b == 0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.wrapping_div(*b)
            }
        })),
        (Value::Double(a), Value::Double(b)) => Ok(Value::Double(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a / b,
        })),
        _ => Err(mismatch("arithmetic")),
    }
}

/// Comparisons use the canonical value order, so they agree with value
/// equality (and with join key matching) on every input.
pub fn compare(op: CmpOp, l: &Value, r: &Value) -> bool {
    let ord = l.cmp(r);
    match op {
        CmpOp::Eq => ord.is_eq(),
        CmpOp::Ne => ord.is_ne(),
        CmpOp::Lt => ord.is_lt(),
        CmpOp::Le => ord.is_le(),
        CmpOp::Gt => ord.is_gt(),
        CmpOp::Ge => ord.is_ge(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::*;
    use crate::types::Type;

    #[test]
    fn constants_and_arithmetic() {
        assert_eq!(interpret_closed(&int(5)).unwrap().0, Value::Int(5));
        let (v, c) = interpret_closed(&add(int(2), int(3)).unwrap()).unwrap();
        assert_eq!(v, Value::Int(5));
        assert_eq!(c, CostCounters::default());
        assert_eq!(interpret_closed(&div(int(-7), int(2)).unwrap()).unwrap().0, Value::Int(-3));
        assert_eq!(interpret_closed(&add(int(i64::MAX), int(1)).unwrap()).unwrap().0, Value::Int(i64::MIN));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let e = div(int(1), int(0)).unwrap();
        assert_eq!(interpret_closed(&e).unwrap_err(), EvalError::DivisionByZero);
    }

    #[test]
    fn or_short_circuits() {
        let g = Gensym::new();
        let x = g.fresh(Type::Int);
        let guarded = or(boolean(true), eq(div(Expr::var(x.clone()), int(0)).unwrap(), int(1)).unwrap()).unwrap();
        let env = Env::empty().bind(x.id, Value::Int(4));
        let mut c = CostCounters::default();
        assert_eq!(interpret(&guarded, &env, &mut c).unwrap(), Value::Bool(true));
    }

    #[test]
    fn filter_counts_one_predicate_per_element() {
        let g = Gensym::new();
        let c = coll_lit(CollKind::Seq, Type::Int, (0..10).map(int).collect()).unwrap();
        let q = query_filter(c, |x| lt(x, int(3)), &g).unwrap();
        let (v, counters) = interpret_closed(&q).unwrap();
        assert_eq!(v, Value::seq(vec![Value::Int(0), Value::Int(1), Value::Int(2)]));
        assert_eq!(counters.predicate_evals, 10);
    }

    #[test]
    fn to_set_removes_duplicates() {
        let c = coll_lit(CollKind::Seq, Type::Int, vec![int(1), int(2), int(1)]).unwrap();
        let (v, _) = interpret_closed(&to_set(c).unwrap()).unwrap();
        assert_eq!(v.len(), Some(2));
    }

    #[test]
    fn flat_map_coerces_inner_kind() {
        let g = Gensym::new();
        let c = coll_lit(CollKind::Set, Type::Int, vec![int(1), int(2)]).unwrap();
        let q = query_flat_map(c, |x| coll_lit(CollKind::Seq, Type::Int, vec![x, int(0)]), &g).unwrap();
        let (v, _) = interpret_closed(&q).unwrap();
        assert_eq!(v, Value::set(vec![Value::Int(0), Value::Int(1), Value::Int(2)]));
    }

    #[test]
    fn unbound_variable() {
        let e = Expr::var(crate::expr::TypedVar::new(9, Type::Int));
        assert_eq!(interpret_closed(&e).unwrap_err(), EvalError::UnboundVariable(9));
    }

    #[test]
    fn nested_loop_join_counts_quadratic_visits() {
        let g = Gensym::new();
        let n = 20;
        let c = coll_lit(CollKind::Seq, Type::Int, (0..n).map(int).collect()).unwrap();
        let q = query_flat_map(
            c.clone(),
            |x| query_map(query_filter(c.clone(), |y| eq(x.clone(), y), &g)?, |y| add(y, int(0)), &g),
            &g,
        )
        .unwrap();
        let (v, counters) = interpret_closed(&q).unwrap();
        assert_eq!(v.len(), Some(n as usize));
        assert!(counters.elements_visited >= (n * n) as u64);
    }
}
