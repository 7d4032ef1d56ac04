//! Record schemas available to queries.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Expr, ExprError};
use crate::types::{Schema, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("schema `{0}` is already registered")]
    DuplicateSchema(String),
    #[error("schema `{schema}` references unknown schema `{referenced}`")]
    UnknownReferencedSchema { schema: String, referenced: String },
    #[error("schema `{schema}` declares field `{field}` more than once")]
    DuplicateField { schema: String, field: String },
    #[error("schema `{schema}` field `{field}` has invalid type: {reason}")]
    InvalidFieldType { schema: String, field: String, reason: String },
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
}

/// Registered schemas, keyed by name. Field types may only reference
/// schemas registered earlier, so recursive schemas cannot be expressed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaRegistry {
    schemas: BTreeMap<String, Arc<Schema>>,
}

impl SchemaRegistry {
    pub fn new() -> SchemaRegistry {
        SchemaRegistry::default()
    }

    pub fn register(&mut self, name: &str, fields: Vec<(String, Type)>) -> Result<Arc<Schema>, SchemaError> {
        if self.schemas.contains_key(name) {
            return Err(SchemaError::DuplicateSchema(name.to_string()));
        }
        let mut seen = BTreeSet::new();
        for (field, ty) in &fields {
            if !seen.insert(field.as_str()) {
                return Err(SchemaError::DuplicateField { schema: name.to_string(), field: field.clone() });
            }
            if let Some(referenced) = self.unknown_reference(ty) {
                return Err(SchemaError::UnknownReferencedSchema { schema: name.to_string(), referenced });
            }
            let invalid = |reason: String| SchemaError::InvalidFieldType {
                schema: name.to_string(),
                field: field.clone(),
                reason,
            };
            ty.validate().map_err(invalid)?;
            if !ty.is_data() {
                return Err(invalid(format!("{ty} contains a function")));
            }
        }
        let schema = Arc::new(Schema { name: name.to_string(), fields });
        self.schemas.insert(name.to_string(), schema.clone());
        Ok(schema)
    }

    /// Builder-style registration.
    pub fn with(mut self, name: &str, fields: Vec<(&str, Type)>) -> Result<SchemaRegistry, SchemaError> {
        self.register(name, fields.into_iter().map(|(n, t)| (n.to_string(), t)).collect())?;
        Ok(self)
    }

    fn unknown_reference(&self, ty: &Type) -> Option<String> {
        match ty {
            Type::Record(s) => match self.schemas.get(&s.name) {
                Some(known) if **known == **s => None,
                _ => Some(s.name.clone()),
            },
            Type::Tuple(es) => es.iter().find_map(|e| self.unknown_reference(e)),
            Type::Fun(a, r) => self.unknown_reference(a).or_else(|| self.unknown_reference(r)),
            Type::Coll(_, e) => self.unknown_reference(e),
            _ => None,
        }
    }

    pub fn get(&self, name: &str) -> Option<Arc<Schema>> {
        self.schemas.get(name).cloned()
    }

    pub fn schema(&self, name: &str) -> Result<Arc<Schema>, SchemaError> {
        self.get(name).ok_or_else(|| SchemaError::UnknownSchema(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.schemas.keys().map(String::as_str)
    }

    pub fn record_type(&self, name: &str) -> Result<Type, SchemaError> {
        self.schema(name).map(Type::Record)
    }

    /// Parses a type name against this registry.
    pub fn parse_type(&self, text: &str, allow_fun: bool) -> Result<Type, String> {
        crate::types::parse_type(text, &|n| self.get(n), allow_fun)
    }

    /// Record construction by schema name.
    pub fn record(&self, name: &str, fields: Vec<Expr>) -> Result<Expr, ExprError> {
        let schema = self.get(name).ok_or_else(|| ExprError::Typing {
            path: format!("record {name}"),
            expected: "a registered schema".into(),
            found: name.to_string(),
        })?;
        Expr::record(schema, fields)
    }
}

/// Functional form of [`SchemaRegistry::register`].
pub fn register_schema(
    reg: &SchemaRegistry,
    name: &str,
    fields: Vec<(String, Type)>,
) -> Result<SchemaRegistry, SchemaError> {
    let mut next = reg.clone();
    next.register(name, fields)?;
    Ok(next)
}
