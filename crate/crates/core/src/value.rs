//! Runtime values produced by the interpreter.
//!
//! Values carry a canonical total order: integers and doubles numerically
//! (doubles via `f64::total_cmp`), strings lexicographically, composites
//! structurally. Sets are stored in that order, which also fixes the
//! iteration order used when a set is converted to a sequence.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::expr::{Expr, TypedVar};
use crate::types::{CollKind, Schema, Type};

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(Arc<str>),
    Double(f64),
    Tuple(Arc<Vec<Value>>),
    Record(Arc<Schema>, Arc<Vec<Value>>),
    Closure(Closure),
    Seq(Arc<Vec<Value>>),
    Set(Arc<BTreeSet<Value>>),
}

/// A function value: a literal's parameter and body plus the captured environment.
///
/// Equality and ordering look at parameter and body only; the captured
/// environment is not compared.
#[derive(Debug, Clone)]
pub struct Closure {
    pub param: TypedVar,
    pub body: Expr,
    pub env: Env,
}

impl Value {
    pub fn str(s: &str) -> Value {
        Value::Str(Arc::from(s))
    }

    pub fn tuple(items: Vec<Value>) -> Value {
        Value::Tuple(Arc::new(items))
    }

    pub fn record(schema: Arc<Schema>, fields: Vec<Value>) -> Value {
        Value::Record(schema, Arc::new(fields))
    }

    pub fn seq(items: Vec<Value>) -> Value {
        Value::Seq(Arc::new(items))
    }

    pub fn set(items: impl IntoIterator<Item = Value>) -> Value {
        Value::Set(Arc::new(items.into_iter().collect()))
    }

    /// Builds a collection of the given kind; sets drop duplicates.
    pub fn collection(kind: CollKind, items: Vec<Value>) -> Value {
        match kind {
            CollKind::Seq => Value::seq(items),
            CollKind::Set => Value::set(items),
        }
    }

    /// Elements of a collection in iteration order.
    pub fn elements(&self) -> Option<Box<dyn Iterator<Item = &Value> + '_>> {
        match self {
            Value::Seq(v) => Some(Box::new(v.iter())),
            Value::Set(s) => Some(Box::new(s.iter())),
            _ => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Value::Seq(v) => Some(v.len()),
            Value::Set(s) => Some(s.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> Option<bool> {
        self.len().map(|n| n == 0)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Bool(_) => 0,
            Value::Int(_) => 1,
            Value::Double(_) => 2,
            Value::Str(_) => 3,
            Value::Tuple(_) => 4,
            Value::Record(..) => 5,
            Value::Seq(_) => 6,
            Value::Set(_) => 7,
            Value::Closure(_) => 8,
        }
    }

    /// Value-typing judgment: does this value inhabit `ty`?
    pub fn conforms(&self, ty: &Type) -> bool {
        match (self, ty) {
            (Value::Int(_), Type::Int)
            | (Value::Bool(_), Type::Bool)
            | (Value::Str(_), Type::String)
            | (Value::Double(_), Type::Double) => true,
            (Value::Tuple(vs), Type::Tuple(ts)) => {
                vs.len() == ts.len() && vs.iter().zip(ts).all(|(v, t)| v.conforms(t))
            }
            (Value::Record(s, vs), Type::Record(schema)) => {
                s.name == schema.name
                    && vs.len() == schema.fields.len()
                    && vs.iter().zip(&schema.fields).all(|(v, (_, t))| v.conforms(t))
            }
            (Value::Closure(c), Type::Fun(a, r)) => c.param.ty == **a && c.body.ty() == &**r,
            (Value::Seq(vs), Type::Coll(CollKind::Seq, e)) => vs.iter().all(|v| v.conforms(e)),
            (Value::Set(vs), Type::Coll(CollKind::Set, e)) => vs.iter().all(|v| v.conforms(e)),
            _ => false,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Str(a), Value::Str(b)) => a.cmp(b),
            (Value::Double(a), Value::Double(b)) => a.total_cmp(b),
            (Value::Tuple(a), Value::Tuple(b)) => a.iter().cmp(b.iter()),
            (Value::Record(sa, a), Value::Record(sb, b)) => sa.name.cmp(&sb.name).then_with(|| a.iter().cmp(b.iter())),
            (Value::Seq(a), Value::Seq(b)) => a.iter().cmp(b.iter()),
            (Value::Set(a), Value::Set(b)) => a.iter().cmp(b.iter()),
            (Value::Closure(a), Value::Closure(b)) => a.param.cmp(&b.param).then_with(|| a.body.cmp(&b.body)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Int(i) => i.hash(state),
            Value::Bool(b) => b.hash(state),
            Value::Str(s) => s.hash(state),
            Value::Double(d) => d.to_bits().hash(state),
            Value::Tuple(vs) | Value::Seq(vs) => vs.hash(state),
            Value::Record(s, vs) => {
                s.name.hash(state);
                vs.hash(state);
            }
            Value::Set(vs) => {
                for v in vs.iter() {
                    v.hash(state);
                }
            }
            Value::Closure(c) => c.param.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(
            f: &mut fmt::Formatter<'_>,
            open: &str,
            items: &mut dyn Iterator<Item = &Value>,
            close: &str,
        ) -> fmt::Result {
            f.write_str(open)?;
            for (i, v) in items.enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(close)
        }
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Double(d) => write!(f, "{d:?}"),
            Value::Tuple(vs) => list(f, "(", &mut vs.iter(), ")"),
            Value::Record(s, vs) => list(f, &format!("{}(", s.name), &mut vs.iter(), ")"),
            Value::Closure(c) => write!(f, "<closure v{}>", c.param.id),
            Value::Seq(vs) => list(f, "Seq(", &mut vs.iter(), ")"),
            Value::Set(vs) => list(f, "Set(", &mut vs.iter(), ")"),
        }
    }
}

impl PartialEq for Closure {
    fn eq(&self, other: &Self) -> bool {
        self.param == other.param && self.body == other.body
    }
}

impl Eq for Closure {}

/// Persistent variable environment; extension shares the parent frames.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<Frame>>);

struct Frame {
    id: u32,
    value: Value,
    parent: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn bind(&self, id: u32, value: Value) -> Env {
        Env(Some(Arc::new(Frame { id, value, parent: self.clone() })))
    }

    pub fn lookup(&self, id: u32) -> Option<&Value> {
        let mut cur = self;
        while let Some(frame) = &cur.0 {
            if frame.id == id {
                return Some(&frame.value);
            }
            cur = &frame.parent;
        }
        None
    }

    pub fn from_bindings(bindings: impl IntoIterator<Item = (u32, Value)>) -> Env {
        bindings.into_iter().fold(Env::empty(), |env, (id, v)| env.bind(id, v))
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ids = Vec::new();
        let mut cur = self;
        while let Some(frame) = &cur.0 {
            ids.push(frame.id);
            cur = &frame.parent;
        }
        f.debug_struct("Env").field("bound", &ids).finish()
    }
}
