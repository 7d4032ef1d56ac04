//! Type tags carried by every expression node.

use std::fmt;
use std::sync::Arc;

/// Collection semantics: ordered with duplicates, or unordered and deduplicated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CollKind {
    Seq,
    Set,
}

impl CollKind {
    pub fn name(self) -> &'static str {
        match self {
            CollKind::Seq => "seq",
            CollKind::Set => "set",
        }
    }

    pub fn from_name(name: &str) -> Option<CollKind> {
        match name {
            "seq" => Some(CollKind::Seq),
            "set" => Some(CollKind::Set),
            _ => None,
        }
    }
}

impl fmt::Display for CollKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A registered record layout. Field order is significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schema {
    pub name: String,
    pub fields: Vec<(String, Type)>,
}

impl Schema {
    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|(n, _)| n == name)
    }

    pub fn field_type(&self, name: &str) -> Option<&Type> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// Semantic type of an expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Int,
    Bool,
    String,
    Double,
    Tuple(Vec<Type>),
    Record(Arc<Schema>),
    Fun(Box<Type>, Box<Type>),
    Coll(CollKind, Box<Type>),
}

impl Type {
    pub fn fun(arg: Type, res: Type) -> Type {
        Type::Fun(Box::new(arg), Box::new(res))
    }

    pub fn coll(kind: CollKind, elem: Type) -> Type {
        Type::Coll(kind, Box::new(elem))
    }

    pub fn seq(elem: Type) -> Type {
        Type::coll(CollKind::Seq, elem)
    }

    pub fn set(elem: Type) -> Type {
        Type::coll(CollKind::Set, elem)
    }

    pub fn as_coll(&self) -> Option<(CollKind, &Type)> {
        match self {
            Type::Coll(k, e) => Some((*k, e)),
            _ => None,
        }
    }

    pub fn as_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Fun(a, r) => Some((a, r)),
            _ => None,
        }
    }

    /// True when the type contains no function component anywhere.
    pub fn is_data(&self) -> bool {
        match self {
            Type::Int | Type::Bool | Type::String | Type::Double => true,
            Type::Tuple(es) => es.iter().all(Type::is_data),
            // Schemas are validated at registration to hold data types only.
            Type::Record(_) => true,
            Type::Fun(..) => false,
            Type::Coll(_, e) => e.is_data(),
        }
    }

    /// Checks structural invariants: tuples have arity >= 2 and collections hold data.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Type::Int | Type::Bool | Type::String | Type::Double | Type::Record(_) => Ok(()),
            Type::Tuple(es) => {
                if es.len() < 2 {
                    return Err(format!("tuple type must have arity >= 2, got {}", es.len()));
                }
                es.iter().try_for_each(Type::validate)
            }
            Type::Fun(a, r) => {
                a.validate()?;
                r.validate()
            }
            Type::Coll(_, e) => {
                if !e.is_data() {
                    return Err(format!("collection element type {e} contains a function"));
                }
                e.validate()
            }
        }
    }

    /// Scalars that admit an ordering comparison.
    pub fn is_ordered_scalar(&self) -> bool {
        matches!(self, Type::Int | Type::Double | Type::String)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => f.write_str("int"),
            Type::Bool => f.write_str("bool"),
            Type::String => f.write_str("string"),
            Type::Double => f.write_str("double"),
            Type::Tuple(es) => {
                f.write_str("tuple<")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(">")
            }
            Type::Record(s) => write!(f, "record<{}>", s.name),
            Type::Fun(a, r) => write!(f, "fun<{a},{r}>"),
            Type::Coll(k, e) => write!(f, "{k}<{e}>"),
        }
    }
}

/// Parses a type name such as `seq<tuple<int,record<Author>>>`.
///
/// `resolve` maps a record name to its schema. `allow_fun` admits `fun<a,b>`,
/// which dataset descriptors do not use but plan text does.
pub fn parse_type(text: &str, resolve: &dyn Fn(&str) -> Option<Arc<Schema>>, allow_fun: bool) -> Result<Type, String> {
    let mut p = TypeParser { src: text.as_bytes(), pos: 0, resolve, allow_fun };
    let ty = p.parse()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(format!("trailing input in type `{text}` at offset {}", p.pos));
    }
    ty.validate()?;
    Ok(ty)
}

struct TypeParser<'a> {
    src: &'a [u8],
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<Arc<Schema>>,
    allow_fun: bool,
}

impl TypeParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a type name at offset {start}"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected `{}` at offset {}", c as char, self.pos))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(&mut self) -> Result<Type, String> {
        let name = self.ident()?;
        match name.as_str() {
            "int" => Ok(Type::Int),
            "bool" => Ok(Type::Bool),
            "string" => Ok(Type::String),
            "double" => Ok(Type::Double),
            "seq" | "set" => {
                self.expect(b'<')?;
                let e = self.parse()?;
                self.expect(b'>')?;
                Ok(Type::coll(CollKind::from_name(&name).unwrap(), e))
            }
            "tuple" => {
                self.expect(b'<')?;
                let mut es = vec![self.parse()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    es.push(self.parse()?);
                }
                self.expect(b'>')?;
                Ok(Type::Tuple(es))
            }
            "record" => {
                self.expect(b'<')?;
                let rec = self.ident()?;
                self.expect(b'>')?;
                (self.resolve)(&rec).map(Type::Record).ok_or_else(|| format!("unknown record schema `{rec}`"))
            }
            "fun" if self.allow_fun => {
                self.expect(b'<')?;
                let a = self.parse()?;
                self.expect(b',')?;
                let r = self.parse()?;
                self.expect(b'>')?;
                Ok(Type::fun(a, r))
            }
            other => Err(format!("unknown type name `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn author() -> Arc<Schema> {
        Arc::new(Schema {
            name: "Author".into(),
            fields: vec![("firstName".into(), Type::String), ("lastName".into(), Type::String)],
        })
    }

    fn resolve(name: &str) -> Option<Arc<Schema>> {
        (name == "Author").then(author)
    }

    #[test]
    fn display_and_parse_agree() {
        let ty = Type::seq(Type::Tuple(vec![Type::Int, Type::Record(author())]));
        let text = ty.to_string();
        assert_eq!(text, "seq<tuple<int,record<Author>>>");
        assert_eq!(parse_type(&text, &resolve, false).unwrap(), ty);
    }

    #[test]
    fn fun_types_only_when_allowed() {
        assert!(parse_type("fun<int,bool>", &resolve, false).is_err());
        assert_eq!(parse_type("fun<int,bool>", &resolve, true).unwrap(), Type::fun(Type::Int, Type::Bool));
    }

    #[test]
    fn rejects_bad_types() {
        assert!(parse_type("tuple<int>", &resolve, false).is_err());
        assert!(parse_type("record<Book>", &resolve, false).is_err());
        assert!(parse_type("seq<fun<int,int>>", &resolve, true).is_err());
        assert!(parse_type("seq<int", &resolve, false).is_err());
        assert!(parse_type("int int", &resolve, false).is_err());
    }
}
