//! Constant folding, reassociation, projection simplification and a few
//! boolean/arithmetic identities.

use std::sync::Arc;

use crate::expr::{ArithOp, BoolOp, Expr, ExprKind};
use crate::interp::{arith, compare};
use crate::types::Type;
use crate::value::Value;

use super::{rewrite_bottom_up, to_fixpoint, OptimizeError, RewriteRule, DEFAULT_ITERATION_LIMIT};

/// Applies the simplification rules bottom-up until nothing changes.
pub fn simplify(e: &Expr) -> Result<Expr, OptimizeError> {
    to_fixpoint(e, "simplify", DEFAULT_ITERATION_LIMIT, simplify_once)
}

/// One bottom-up simplification pass.
pub(crate) fn simplify_once(e: &Expr) -> Result<Expr, OptimizeError> {
    let rule = RewriteRule::new("simplify", |node| Ok(simplify_node(node)));
    rewrite_bottom_up(e, &rule)
}

fn constant(v: Value, ty: &Type) -> Expr {
    Expr::constant(v, ty.clone()).expect("folded value conforms to node type")
}

fn is_zero(v: &Value) -> bool {
    matches!(v, Value::Int(0)) || matches!(v, Value::Double(d) if *d == 0.0)
}

fn simplify_node(e: &Expr) -> Option<Expr> {
    use ExprKind::*;
    match e.kind() {
        Arith(op, l, r) => {
            if let (Some(a), Some(b)) = (l.as_const(), r.as_const()) {
                if *op == ArithOp::Div && is_zero(b) {
                    return None;
                }
                return arith(*op, a, b).ok().map(|v| constant(v, e.ty()));
            }
            if e.ty() == &Type::Int && matches!(op, ArithOp::Add | ArithOp::Mul) {
                return reassociate_int(e, *op);
            }
            None
        }
        Concat(..) => reassociate_concat(e),
        Cmp(op, l, r) => {
            let (a, b) = (l.as_const()?, r.as_const()?);
            Some(constant(Value::Bool(compare(*op, a, b)), &Type::Bool))
        }
        Bool(op, l, r) => {
            let lb = l.as_const().and_then(Value::as_bool);
            let rb = r.as_const().and_then(Value::as_bool);
            match (op, lb, rb) {
                (BoolOp::And, Some(true), _) => Some(r.clone()),
                (BoolOp::And, Some(false), _) => Some(l.clone()),
                (BoolOp::And, _, Some(true)) => Some(l.clone()),
                (BoolOp::Or, Some(false), _) => Some(r.clone()),
                (BoolOp::Or, Some(true), _) => Some(l.clone()),
                (BoolOp::Or, _, Some(false)) => Some(l.clone()),
                _ => None,
            }
        }
        Not(x) => match x.kind() {
            Const(Value::Bool(b)) => Some(constant(Value::Bool(!b), &Type::Bool)),
            Not(y) => Some(y.clone()),
            _ => None,
        },
        Proj(t, i) => match t.kind() {
            Tuple(es) => Some(es[i - 1].clone()),
            Const(Value::Tuple(vs)) => Some(constant(vs[i - 1].clone(), e.ty())),
            _ => None,
        },
        Field { rec, index, .. } => match rec.kind() {
            Record(_, fs) => Some(fs[*index].clone()),
            Const(Value::Record(_, vs)) => Some(constant(vs[*index].clone(), e.ty())),
            _ => None,
        },
        _ => None,
    }
}

fn flatten<'a>(e: &'a Expr, same: &dyn Fn(&Expr) -> bool, out: &mut Vec<&'a Expr>) {
    match e.kind() {
        ExprKind::Arith(_, l, r) | ExprKind::Concat(l, r) if same(e) => {
            flatten(l, same, out);
            flatten(r, same, out);
        }
        _ => out.push(e),
    }
}

fn left_assoc(operands: Vec<Expr>, combine: impl Fn(Expr, Expr) -> Expr) -> Expr {
    let mut it = operands.into_iter();
    let first = it.next().expect("at least one operand");
    it.fold(first, combine)
}

/// Gathers the constant operands of an integer `+`/`*` chain into one
/// trailing constant, keeping the other operands in their original order.
fn reassociate_int(e: &Expr, op: ArithOp) -> Option<Expr> {
    let mut operands = Vec::new();
    let same = |x: &Expr| matches!(x.kind(), ExprKind::Arith(o, ..) if *o == op);
    flatten(e, &same, &mut operands);
    let identity: i64 = if op == ArithOp::Add { 0 } else { 1 };
    let mut acc = identity;
    let mut others = Vec::new();
    for x in operands {
        match x.as_const() {
            Some(Value::Int(i)) => acc = if op == ArithOp::Add { acc.wrapping_add(*i) } else { acc.wrapping_mul(*i) },
            _ => others.push(x.clone()),
        }
    }
    if acc != identity || others.is_empty() {
        others.push(constant(Value::Int(acc), &Type::Int));
    }
    let out = left_assoc(others, |l, r| Expr::arith(op, l, r).expect("int operands"));
    (out != *e).then_some(out)
}

/// Merges adjacent constant operands of a string concatenation chain and
/// drops empty-string constants.
fn reassociate_concat(e: &Expr) -> Option<Expr> {
    let mut operands = Vec::new();
    let same = |x: &Expr| matches!(x.kind(), ExprKind::Concat(..));
    flatten(e, &same, &mut operands);
    let mut out: Vec<Expr> = Vec::new();
    let mut pending: Option<String> = None;
    let flush = |pending: &mut Option<String>, out: &mut Vec<Expr>| {
        if let Some(s) = pending.take() {
            if !s.is_empty() {
                out.push(constant(Value::Str(Arc::from(s)), &Type::String));
            }
        }
    };
    for x in operands {
        match x.as_const() {
            Some(Value::Str(s)) => pending.get_or_insert_with(String::new).push_str(s),
            _ => {
                flush(&mut pending, &mut out);
                out.push(x.clone());
            }
        }
    }
    flush(&mut pending, &mut out);
    if out.is_empty() {
        out.push(constant(Value::str(""), &Type::String));
    }
    let rebuilt = left_assoc(out, |l, r| Expr::concat(l, r).expect("string operands"));
    (rebuilt != *e).then_some(rebuilt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::*;
    use crate::expr::TypedVar;
    use crate::interp::interpret_closed;
    use crate::schema::SchemaRegistry;

    fn x() -> Expr {
        Expr::var(TypedVar::new(1, Type::Int))
    }

    #[test]
    fn tuple_projection() {
        let y = Expr::var(TypedVar::new(2, Type::String));
        let e = proj(tuple(vec![x(), y]).unwrap(), 1).unwrap();
        assert_eq!(simplify(&e).unwrap(), x());
    }

    #[test]
    fn record_field_projection() {
        let reg = SchemaRegistry::new()
            .with("Book", vec![("title", Type::String)])
            .unwrap()
            .with("BookData", vec![("title", Type::String), ("authorName", Type::String), ("coauthors", Type::Int)])
            .unwrap();
        let book = Expr::var(TypedVar::new(7, reg.record_type("Book").unwrap()));
        let title = field(book, "title").unwrap();
        let data = reg.record("BookData", vec![title.clone(), string("n"), int(1)]).unwrap();
        let e = field(data, "title").unwrap();
        assert_eq!(simplify(&e).unwrap(), title);
    }

    #[test]
    fn string_folding_matches_interpreter() {
        let e = concat(string("foo"), string("bar")).unwrap();
        let s = simplify(&e).unwrap();
        assert_eq!(s, string("foobar"));
        assert_eq!(interpret_closed(&s).unwrap().0, interpret_closed(&e).unwrap().0);
    }

    #[test]
    fn division_by_zero_constant_is_not_folded() {
        let e = div(x(), int(0)).unwrap();
        assert_eq!(simplify(&e).unwrap(), e);
        let c = div(int(4), int(0)).unwrap();
        assert_eq!(simplify(&c).unwrap(), c);
        let d = div(double(1.0), double(0.0)).unwrap();
        assert_eq!(simplify(&d).unwrap(), d);
    }

    #[test]
    fn reassociation_gathers_constants() {
        // (1 + x) + 2  ->  x + 3
        let e = add(add(int(1), x()).unwrap(), int(2)).unwrap();
        assert_eq!(simplify(&e).unwrap(), add(x(), int(3)).unwrap());
        // 2 * (x * 3) -> x * 6
        let m = mul(int(2), mul(x(), int(3)).unwrap()).unwrap();
        assert_eq!(simplify(&m).unwrap(), mul(x(), int(6)).unwrap());
        // x + 0 -> x, x * 1 -> x
        assert_eq!(simplify(&add(x(), int(0)).unwrap()).unwrap(), x());
        assert_eq!(simplify(&mul(int(1), x()).unwrap()).unwrap(), x());
    }

    #[test]
    fn concat_reassociation_keeps_order() {
        let s = Expr::var(TypedVar::new(3, Type::String));
        // ("a" ++ s) ++ ("b" ++ "c") -> ("a" ++ s) ++ "bc"
        let e = concat(concat(string("a"), s.clone()).unwrap(), concat(string("b"), string("c")).unwrap()).unwrap();
        let expected = concat(concat(string("a"), s.clone()).unwrap(), string("bc")).unwrap();
        assert_eq!(simplify(&e).unwrap(), expected);
        assert_eq!(simplify(&concat(s.clone(), string("")).unwrap()).unwrap(), s);
    }

    #[test]
    fn doubles_are_not_reassociated() {
        let d = Expr::var(TypedVar::new(4, Type::Double));
        let e = add(add(double(0.1), d).unwrap(), double(0.2)).unwrap();
        assert_eq!(simplify(&e).unwrap(), e);
    }

    #[test]
    fn boolean_identities() {
        let b = Expr::var(TypedVar::new(5, Type::Bool));
        assert_eq!(simplify(&and(boolean(true), b.clone()).unwrap()).unwrap(), b);
        assert_eq!(simplify(&or(boolean(false), b.clone()).unwrap()).unwrap(), b);
        assert_eq!(simplify(&not(boolean(true)).unwrap()).unwrap(), boolean(false));
        assert_eq!(simplify(&not(not(b.clone()).unwrap()).unwrap()).unwrap(), b);
        assert_eq!(simplify(&lt(int(1), int(2)).unwrap()).unwrap(), boolean(true));
    }
}
