//! Dataset descriptors and JSON data documents.
//!
//! A descriptor declares record schemas and the root collections a query may
//! refer to:
//!
//! ```json
//! {"schemas": [{"name": "Author", "fields": [{"name": "firstName", "type": "string"}]}],
//!  "roots": [{"name": "authors", "kind": "seq", "element": "record<Author>"}]}
//! ```
//!
//! A data document maps each root name to an array of elements. Root `i`
//! (counting from 1 in declaration order) is bound to free variable `i`.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Deserialize;
use serde_json::{Map, Number, Value as Json};
use thiserror::Error;

use crate::expr::TypedVar;
use crate::schema::{SchemaError, SchemaRegistry};
use crate::types::{CollKind, Type};
use crate::value::{Env, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("value at {path} does not conform to {expected}")]
    ValueTagMismatch { path: String, expected: String },
    #[error("record at {path} is missing field `{field}`")]
    MissingField { path: String, field: String },
    #[error("unknown collection `{0}`")]
    UnknownCollection(String),
    #[error("no data for collection `{0}`")]
    MissingCollection(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecl {
    pub name: String,
    pub kind: CollKind,
    pub element: Type,
    pub var: TypedVar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub registry: SchemaRegistry,
    pub roots: Vec<RootDecl>,
}

/// Root collection values keyed by root name.
pub type Dataset = BTreeMap<String, Value>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    #[serde(default)]
    schemas: Vec<RawSchema>,
    #[serde(default)]
    roots: Vec<RawRoot>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchema {
    name: String,
    fields: Vec<RawField>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    name: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoot {
    name: String,
    kind: RawKind,
    element: String,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Seq,
    Set,
}

fn json_error(e: serde_json::Error) -> DataError {
    DataError::Parse { line: e.line(), reason: e.to_string() }
}

/// Line of the first occurrence of `needle` as a JSON string, for errors
/// detected after deserialization.
fn line_of(text: &str, needle: &str) -> usize {
    let quoted = serde_json::to_string(needle).unwrap_or_default();
    text.find(&quoted).map_or(1, |pos| text[..pos].matches('\n').count() + 1)
}

pub fn load_descriptor(text: &str) -> Result<Descriptor, DataError> {
    let raw: RawDescriptor = serde_json::from_str(text).map_err(json_error)?;
    let mut registry = SchemaRegistry::new();
    for s in &raw.schemas {
        let mut fields = Vec::with_capacity(s.fields.len());
        for f in &s.fields {
            let ty = parse_data_type(&registry, &f.ty).map_err(|reason| match reason {
                TypeProblem::UnknownSchema(referenced) => {
                    DataError::Schema(SchemaError::UnknownReferencedSchema { schema: s.name.clone(), referenced })
                }
                TypeProblem::Syntax(reason) => DataError::Parse {
                    line: line_of(text, &f.ty),
                    reason: format!("field `{}.{}`: {reason}", s.name, f.name),
                },
            })?;
            fields.push((f.name.clone(), ty));
        }
        registry.register(&s.name, fields)?;
    }
    let mut roots: Vec<RootDecl> = Vec::with_capacity(raw.roots.len());
    for (i, r) in raw.roots.iter().enumerate() {
        if roots.iter().any(|d| d.name == r.name) {
            return Err(DataError::Parse {
                line: line_of(text, &r.name),
                reason: format!("root `{}` declared more than once", r.name),
            });
        }
        let element = parse_data_type(&registry, &r.element).map_err(|reason| match reason {
            TypeProblem::UnknownSchema(referenced) => {
                DataError::Schema(SchemaError::UnknownReferencedSchema { schema: r.name.clone(), referenced })
            }
            TypeProblem::Syntax(reason) => {
                DataError::Parse { line: line_of(text, &r.element), reason: format!("root `{}`: {reason}", r.name) }
            }
        })?;
        let kind = match r.kind {
            RawKind::Seq => CollKind::Seq,
            RawKind::Set => CollKind::Set,
        };
        let id = u32::try_from(i + 1).expect("root count fits in u32");
        let var = TypedVar::new(id, Type::coll(kind, element.clone()));
        roots.push(RootDecl { name: r.name.clone(), kind, element, var });
    }
    Ok(Descriptor { registry, roots })
}

enum TypeProblem {
    UnknownSchema(String),
    Syntax(String),
}

fn parse_data_type(reg: &SchemaRegistry, text: &str) -> Result<Type, TypeProblem> {
    let missing = std::cell::RefCell::new(None);
    let resolve = |name: &str| {
        let found = reg.get(name);
        if found.is_none() {
            missing.borrow_mut().get_or_insert_with(|| name.to_string());
        }
        found
    };
    let parsed = crate::types::parse_type(text, &resolve, false);
    if let Some(name) = missing.into_inner() {
        return Err(TypeProblem::UnknownSchema(name));
    }
    parsed.map_err(TypeProblem::Syntax)
}

impl Descriptor {
    pub fn root(&self, name: &str) -> Option<&RootDecl> {
        self.roots.iter().find(|r| r.name == name)
    }

    pub fn root_vars(&self) -> Vec<TypedVar> {
        self.roots.iter().map(|r| r.var.clone()).collect()
    }

    /// Environment binding every root variable to its collection.
    pub fn env(&self, data: &Dataset) -> Result<Env, DataError> {
        let mut bindings = Vec::with_capacity(self.roots.len());
        for r in &self.roots {
            let v = data.get(&r.name).ok_or_else(|| DataError::MissingCollection(r.name.clone()))?;
            bindings.push((r.var.id, v.clone()));
        }
        Ok(Env::from_bindings(bindings))
    }
}

pub fn load_data(desc: &Descriptor, text: &str) -> Result<Dataset, DataError> {
    let doc: Json = serde_json::from_str(text).map_err(json_error)?;
    let Json::Object(entries) = doc else {
        return Err(DataError::Parse { line: 1, reason: "data document must be a JSON object".into() });
    };
    let mut out = Dataset::new();
    for (name, items) in &entries {
        let root = desc.root(name).ok_or_else(|| DataError::UnknownCollection(name.clone()))?;
        out.insert(name.clone(), value_from_json(items, &root.var.ty, name)?);
    }
    if let Some(r) = desc.roots.iter().find(|r| !out.contains_key(&r.name)) {
        return Err(DataError::MissingCollection(r.name.clone()));
    }
    Ok(out)
}

/// Decodes `json` as a value of type `ty`. Non-finite doubles are accepted
/// as the strings `"NaN"`, `"inf"` and `"-inf"`.
pub fn value_from_json(json: &Json, ty: &Type, path: &str) -> Result<Value, DataError> {
    let mismatch = || DataError::ValueTagMismatch { path: path.to_string(), expected: ty.to_string() };
    Ok(match ty {
        Type::Int => Value::Int(json.as_i64().ok_or_else(mismatch)?),
        Type::Bool => Value::Bool(json.as_bool().ok_or_else(mismatch)?),
        Type::String => Value::str(json.as_str().ok_or_else(mismatch)?),
        Type::Double => match json {
            Json::Number(n) => Value::Double(n.as_f64().ok_or_else(mismatch)?),
            Json::String(s) => match s.as_str() {
                "NaN" => Value::Double(f64::NAN),
                "inf" => Value::Double(f64::INFINITY),
                "-inf" => Value::Double(f64::NEG_INFINITY),
                _ => return Err(mismatch()),
            },
            _ => return Err(mismatch()),
        },
        Type::Tuple(ts) => {
            let items = json.as_array().filter(|a| a.len() == ts.len()).ok_or_else(mismatch)?;
            let vals = items
                .iter()
                .zip(ts)
                .enumerate()
                .map(|(i, (j, t))| value_from_json(j, t, &format!("{path}[{i}]")))
                .collect::<Result<_, _>>()?;
            Value::tuple(vals)
        }
        Type::Record(schema) => {
            let obj = json.as_object().ok_or_else(mismatch)?;
            if let Some(extra) = obj.keys().find(|k| schema.field_index(k).is_none()) {
                return Err(DataError::ValueTagMismatch {
                    path: format!("{path}.{extra}"),
                    expected: format!("no such field in {}", schema.name),
                });
            }
            let mut vals = Vec::with_capacity(schema.fields.len());
            for (name, fty) in &schema.fields {
                let j = obj
                    .get(name)
                    .ok_or_else(|| DataError::MissingField { path: path.to_string(), field: name.clone() })?;
                vals.push(value_from_json(j, fty, &format!("{path}.{name}"))?);
            }
            Value::record(schema.clone(), vals)
        }
        Type::Coll(kind, elem) => {
            let items = json.as_array().ok_or_else(mismatch)?;
            let vals = items
                .iter()
                .enumerate()
                .map(|(i, j)| value_from_json(j, elem, &format!("{path}[{i}]")))
                .collect::<Result<_, _>>()?;
            Value::collection(*kind, vals)
        }
        Type::Fun(..) => return Err(mismatch()),
    })
}

/// Records become objects with fields in schema order, tuples and
/// collections become arrays, sets in canonical order.
pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(i) => Json::from(*i),
        Value::Bool(b) => Json::Bool(*b),
        Value::Str(s) => Json::String(s.to_string()),
        Value::Double(d) => match Number::from_f64(*d) {
            Some(n) => Json::Number(n),
            None if d.is_nan() => Json::String("NaN".into()),
            None if *d > 0.0 => Json::String("inf".into()),
            None => Json::String("-inf".into()),
        },
        Value::Tuple(vs) | Value::Seq(vs) => Json::Array(vs.iter().map(value_to_json).collect()),
        Value::Set(vs) => Json::Array(vs.iter().map(value_to_json).collect()),
        Value::Record(schema, vs) => {
            let mut obj = Map::new();
            for ((name, _), v) in schema.fields.iter().zip(vs.iter()) {
                obj.insert(name.clone(), value_to_json(v));
            }
            Json::Object(obj)
        }
        Value::Closure(_) => Json::String("<closure>".into()),
    }
}

/// Serializes a dataset as a data document, roots in declaration order.
pub fn dataset_to_json(desc: &Descriptor, data: &Dataset) -> String {
    let mut obj = Map::new();
    for r in &desc.roots {
        if let Some(v) = data.get(&r.name) {
            obj.insert(r.name.clone(), value_to_json(v));
        }
    }
    serde_json::to_string_pretty(&Json::Object(obj)).expect("JSON values serialize")
}

pub const JOIN_DESCRIPTOR: &str = r#"{
  "schemas": [
    {"name": "Order", "fields": [{"name": "id", "type": "int"}, {"name": "customer", "type": "int"}]},
    {"name": "Customer", "fields": [{"name": "id", "type": "int"}, {"name": "name", "type": "string"}]}
  ],
  "roots": [
    {"name": "orders", "kind": "seq", "element": "record<Order>"},
    {"name": "customers", "kind": "seq", "element": "record<Customer>"}
  ]
}
"#;

/// `n` orders and `n` customers in shuffled order; every order's customer
/// key matches exactly one customer id.
pub fn gen_join_benchmark(n: usize, seed: u64) -> (Descriptor, Dataset) {
    assert!(n >= 1, "benchmark size must be positive");
    let desc = load_descriptor(JOIN_DESCRIPTOR).expect("built-in descriptor is valid");
    let order = desc.registry.get("Order").expect("Order schema");
    let customer = desc.registry.get("Customer").expect("Customer schema");
    let mut rng = StdRng::seed_from_u64(seed);
    let n64 = i64::try_from(n).expect("benchmark size fits in i64");

    let mut keys: Vec<i64> = (0..n64).collect();
    keys.shuffle(&mut rng);
    let orders = keys
        .iter()
        .enumerate()
        .map(|(i, k)| Value::record(order.clone(), vec![Value::Int(i as i64), Value::Int(*k)]))
        .collect();

    let mut ids: Vec<i64> = (0..n64).collect();
    ids.shuffle(&mut rng);
    let customers = ids
        .iter()
        .map(|id| Value::record(customer.clone(), vec![Value::Int(*id), Value::str(&format!("customer{id}"))]))
        .collect();

    let mut data = Dataset::new();
    data.insert("orders".into(), Value::seq(orders));
    data.insert("customers".into(), Value::seq(customers));
    (desc, data)
}

pub const BOOKS_DESCRIPTOR: &str = r#"{
  "schemas": [
    {"name": "Author", "fields": [
      {"name": "firstName", "type": "string"},
      {"name": "lastName", "type": "string"}
    ]},
    {"name": "Book", "fields": [
      {"name": "title", "type": "string"},
      {"name": "publisher", "type": "string"},
      {"name": "authors", "type": "seq<record<Author>>"}
    ]},
    {"name": "BookData", "fields": [
      {"name": "title", "type": "string"},
      {"name": "authorName", "type": "string"},
      {"name": "coauthors", "type": "int"}
    ]}
  ],
  "roots": [
    {"name": "books", "kind": "set", "element": "record<Book>"}
  ]
}
"#;

pub const BOOKS_DATA: &str = r#"{
  "books": [
    {
      "title": "Compilers",
      "publisher": "Pearson Education",
      "authors": [
        {"firstName": "A", "lastName": "B"},
        {"firstName": "C", "lastName": "D"}
      ]
    },
    {
      "title": "Type Systems",
      "publisher": "MIT Press",
      "authors": [
        {"firstName": "E", "lastName": "F"}
      ]
    }
  ]
}
"#;

/// The two-book example dataset.
pub fn books_example() -> (Descriptor, Dataset) {
    let desc = load_descriptor(BOOKS_DESCRIPTOR).expect("built-in descriptor is valid");
    let data = load_data(&desc, BOOKS_DATA).expect("built-in data is valid");
    (desc, data)
}
