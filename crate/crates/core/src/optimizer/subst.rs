//! Substitution and binder renaming.

use crate::embed::Gensym;
use crate::expr::{Expr, ExprError, ExprKind, TypedVar};

use super::OptimizeError;

/// Replaces every free occurrence of `v` in `e` by `replacement`.
///
/// When `replacement` contains binders and is inserted more than once, every
/// copy after the first has its binders renamed, so a tree that satisfied the
/// Barendregt convention still does afterwards.
pub fn substitute(e: &Expr, v: &TypedVar, replacement: &Expr) -> Result<Expr, OptimizeError> {
    let g = Gensym::starting_at(e.max_var_id().max(replacement.max_var_id()).max(v.id) + 1);
    substitute_with(e, v, replacement, &g)
}

/// [`substitute`] drawing fresh ids from `g`.
pub fn substitute_with(e: &Expr, v: &TypedVar, replacement: &Expr, g: &Gensym) -> Result<Expr, OptimizeError> {
    if replacement.ty() != &v.ty {
        return Err(OptimizeError::Typing(ExprError::Typing {
            path: format!("substitute v{}", v.id),
            expected: v.ty.to_string(),
            found: replacement.ty().to_string(),
        }));
    }
    debug_assert!(
        {
            let fv = replacement.free_vars();
            e.binders().iter().all(|b| !fv.contains(b))
        },
        "substitution would capture a free variable of the replacement"
    );
    let has_binders = !replacement.binders().is_empty();
    let mut uses = 0usize;
    Ok(subst(e, v.id, replacement, has_binders, g, &mut uses)?)
}

fn subst(e: &Expr, id: u32, repl: &Expr, has_binders: bool, g: &Gensym, uses: &mut usize) -> Result<Expr, ExprError> {
    match e.kind() {
        ExprKind::Var(x) if x.id == id => {
            *uses += 1;
            if has_binders && *uses > 1 {
                Ok(freshen(repl, g))
            } else {
                Ok(repl.clone())
            }
        }
        ExprKind::Var(_) | ExprKind::Const(_) => Ok(e.clone()),
        ExprKind::Fun { param, .. } if param.id == id => Ok(e.clone()),
        _ => {
            let children =
                e.children().iter().map(|c| subst(c, id, repl, has_binders, g, uses)).collect::<Result<Vec<_>, _>>()?;
            e.rebuild(children)
        }
    }
}

/// Renames every binder in `e` to a fresh id from `g`.
pub fn freshen(e: &Expr, g: &Gensym) -> Expr {
    rename(e, &mut Vec::new(), &mut |ty| g.fresh(ty))
}

/// Renames binders to consecutive ids in pre-order, starting just above the
/// largest free variable id. Free variables keep their ids.
pub fn renumber_binders(e: &Expr) -> Expr {
    let first = e.free_vars().iter().map(|v| v.id).max().unwrap_or(0) + 1;
    let g = Gensym::starting_at(first);
    freshen(e, &g)
}

/// Restores the Barendregt convention if it does not hold.
pub fn ensure_unique_binders(e: &Expr) -> Expr {
    if e.has_unique_binders() {
        e.clone()
    } else {
        freshen(e, &Gensym::above(e))
    }
}

fn rename(e: &Expr, scope: &mut Vec<(u32, TypedVar)>, fresh: &mut dyn FnMut(crate::types::Type) -> TypedVar) -> Expr {
    match e.kind() {
        ExprKind::Var(x) => match scope.iter().rev().find(|(old, _)| *old == x.id) {
            Some((_, new)) => Expr::var(new.clone()),
            None => e.clone(),
        },
        ExprKind::Const(_) => e.clone(),
        ExprKind::Fun { param, body } => {
            let new = fresh(param.ty.clone());
            scope.push((param.id, new.clone()));
            let body = rename(body, scope, fresh);
            scope.pop();
            Expr::lambda(new, body).expect("renaming preserves typing")
        }
        _ => {
            let children = e.children().iter().map(|c| rename(c, scope, fresh)).collect();
            e.rebuild(children).expect("renaming preserves typing")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::*;
    use crate::types::Type;

    #[test]
    fn substitute_variable() {
        let v1 = TypedVar::new(1, Type::Int);
        let e = substitute(&Expr::var(v1.clone()), &v1, &int(7)).unwrap();
        assert_eq!(e, int(7));
    }

    #[test]
    fn substitute_absent_variable_is_identity() {
        let v1 = TypedVar::new(1, Type::Int);
        let v2 = TypedVar::new(2, Type::Int);
        let f = Expr::lambda(v2.clone(), Expr::var(v2)).unwrap();
        assert_eq!(substitute(&f, &v1, &int(3)).unwrap(), f);
    }

    #[test]
    fn substitute_duplicates() {
        let v1 = TypedVar::new(1, Type::Int);
        let e = add(Expr::var(v1.clone()), Expr::var(v1.clone())).unwrap();
        assert_eq!(substitute(&e, &v1, &int(4)).unwrap(), add(int(4), int(4)).unwrap());
    }

    #[test]
    fn duplicated_binders_are_freshened() {
        let f_ty = Type::fun(Type::Int, Type::Int);
        let v1 = TypedVar::new(1, f_ty);
        let e = tuple(vec![Expr::var(v1.clone()), Expr::var(v1.clone())]).unwrap();
        let id = Expr::lambda(TypedVar::new(2, Type::Int), Expr::var(TypedVar::new(2, Type::Int))).unwrap();
        let out = substitute(&e, &v1, &id).unwrap();
        assert!(out.has_unique_binders());
        assert_eq!(out.binders().len(), 2);
    }

    #[test]
    fn substitute_rejects_type_mismatch() {
        let v1 = TypedVar::new(1, Type::Int);
        assert!(substitute(&Expr::var(v1.clone()), &v1, &string("x")).is_err());
    }

    #[test]
    fn renumbering_starts_above_free_variables() {
        let g = Gensym::starting_at(40);
        let free = Expr::var(TypedVar::new(3, Type::Int));
        let f = fun(Type::Int, |x| add(x, free.clone()), &g).unwrap();
        let r = renumber_binders(&f);
        assert_eq!(r.binders()[0].id, 4);
        assert!(r.mentions(3));
    }
}
