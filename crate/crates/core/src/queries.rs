//! Built-in named queries.

use thiserror::Error;

use crate::data::Descriptor;
use crate::embed::*;
use crate::expr::{Expr, ExprError};
use crate::types::Type;

pub const QUERY_NAMES: [&str; 2] = ["records", "equijoin"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown query `{name}` (valid: {})", QUERY_NAMES.join(", "))]
    UnknownQuery { name: String },
    #[error("query `{query}` needs {what}, which the descriptor does not declare")]
    MissingDeclaration { query: String, what: String },
    #[error(transparent)]
    Typing(#[from] ExprError),
}

/// Builds the named query over the descriptor's roots. Binders are numbered
/// above the root variables.
pub fn named_query(name: &str, desc: &Descriptor) -> Result<Expr, QueryError> {
    match name {
        "records" => records(desc),
        "equijoin" => equijoin(desc),
        _ => Err(QueryError::UnknownQuery { name: name.to_string() }),
    }
}

fn root(desc: &Descriptor, query: &str, name: &str) -> Result<Expr, QueryError> {
    desc.root(name).map(|r| Expr::var(r.var.clone())).ok_or_else(|| QueryError::MissingDeclaration {
        query: query.to_string(),
        what: format!("root collection `{name}`"),
    })
}

fn gensym(desc: &Descriptor) -> Gensym {
    Gensym::starting_at(desc.roots.len() as u32 + 1)
}

/// ```text
/// books.filter(book => book.publisher == "Pearson Education")
///      .flatMap(book => book.authors.map(author =>
///          BookData(book.title, author.firstName + " " + author.lastName, book.authors.size - 1)))
/// ```
fn records(desc: &Descriptor) -> Result<Expr, QueryError> {
    let books = root(desc, "records", "books")?;
    if desc.registry.get("BookData").is_none() {
        return Err(QueryError::MissingDeclaration { query: "records".into(), what: "schema `BookData`".into() });
    }
    let g = gensym(desc);
    let reg = &desc.registry;
    let pearson = query_filter(books, |book| eq(field(book, "publisher")?, string("Pearson Education")), &g)?;
    let q = query_flat_map(
        pearson,
        |book| {
            query_map(
                field(book.clone(), "authors")?,
                |author| {
                    let name =
                        concat(concat(field(author.clone(), "firstName")?, string(" "))?, field(author, "lastName")?)?;
                    let coauthors = sub(size(field(book.clone(), "authors")?)?, int(1))?;
                    record(reg, "BookData", vec![field(book.clone(), "title")?, name, coauthors])
                },
                &g,
            )
        },
        &g,
    )?;
    Ok(q)
}

/// ```text
/// orders.flatMap(o => customers.filter(c => o.customer == c.id).map(c => (o.id, c.name)))
/// ```
fn equijoin(desc: &Descriptor) -> Result<Expr, QueryError> {
    let orders = root(desc, "equijoin", "orders")?;
    let customers = root(desc, "equijoin", "customers")?;
    let g = gensym(desc);
    let q = query_flat_map(
        orders,
        |o| {
            let matching = query_filter(customers, |c| eq(field(o.clone(), "customer")?, field(c, "id")?), &g)?;
            query_map(matching, |c| tuple(vec![field(o.clone(), "id")?, field(c, "name")?]), &g)
        },
        &g,
    )?;
    debug_assert_eq!(q.ty(), &Type::seq(Type::Tuple(vec![Type::Int, Type::String])));
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{books_example, gen_join_benchmark};
    use crate::expr::ExprKind;
    use crate::interp::interpret;
    use crate::interp::CostCounters;
    use crate::optimizer::{optimize, Pipeline};
    use crate::value::Value;

    #[test]
    fn records_on_two_books() {
        let (desc, data) = books_example();
        let q = named_query("records", &desc).unwrap();
        let env = desc.env(&data).unwrap();
        let v = interpret(&q, &env, &mut CostCounters::default()).unwrap();
        let schema = desc.registry.get("BookData").unwrap();
        let row =
            |name: &str| Value::record(schema.clone(), vec![Value::str("Compilers"), Value::str(name), Value::Int(1)]);
        assert_eq!(v, Value::set([row("A B"), row("C D")]));
        let opt = optimize(&q, &Pipeline::default()).unwrap();
        assert_eq!(interpret(&opt, &env, &mut CostCounters::default()).unwrap(), v);
    }

    #[test]
    fn equijoin_becomes_hash_join() {
        let (desc, data) = gen_join_benchmark(30, 1);
        let q = named_query("equijoin", &desc).unwrap();
        let opt = optimize(&q, &Pipeline::default()).unwrap();
        assert!(matches!(opt.kind(), ExprKind::HashJoin { .. }), "{opt}");
        let env = desc.env(&data).unwrap();
        let mut before = CostCounters::default();
        let mut after = CostCounters::default();
        let a = interpret(&q, &env, &mut before).unwrap();
        let b = interpret(&opt, &env, &mut after).unwrap();
        assert_eq!(a, b);
        assert_eq!(before.elements_visited, 30 * 30 + 2 * 30);
        assert_eq!(after.elements_visited, 60);
        assert_eq!(after.hash_lookups, 30);
    }

    #[test]
    fn unknown_and_missing() {
        let (desc, _) = books_example();
        assert!(matches!(named_query("nope", &desc), Err(QueryError::UnknownQuery { .. })));
        assert!(matches!(named_query("equijoin", &desc), Err(QueryError::MissingDeclaration { .. })));
    }
}
