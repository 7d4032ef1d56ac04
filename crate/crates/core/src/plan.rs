//! S-expression rendering of expression trees.
//!
//! ```text
//! (const <type> <literal>) | (var <id>) | (fun <id> <type> <body>) | (app <f> <a>)
//! (concat <l> <r>) | (add|sub|mul|div <l> <r>) | (eq|ne|lt|le|gt|ge <l> <r>)
//! (and|or <l> <r>) | (not <e>) | (tuple <e>...) | (proj <i> <t>)
//! (record <Name> <e>...) | (field <name> <rec>) | (lit seq|set <type> <e>...)
//! (map <coll> <fun>) | (flatmap <coll> <fun>) | (filter <coll> <fun>)
//! (size <coll>) | (union <l> <r>) | (toseq <c>) | (toset <c>)
//! (hashjoin <outer> <inner> <okey> <ikey> <combine>)
//! ```
//!
//! Literals: integers and booleans as written, doubles in shortest
//! round-trip form (`1.0`, `inf`, `NaN`), strings as JSON strings, and
//! tuples, records and collections as `[v1 v2 ...]` guided by the type.

use thiserror::Error;

use crate::expr::{ArithOp, BoolOp, CmpOp, Expr, ExprError, ExprKind, TypedVar};
use crate::optimizer::renumber_binders;
use crate::schema::SchemaRegistry;
use crate::types::{CollKind, Type};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("parse error at {line}:{col}: {reason}")]
    Parse { line: usize, col: usize, reason: String },
    #[error(transparent)]
    Typing(#[from] ExprError),
}

/// Single-line rendering with binders renumbered from 1 (above any free variable).
pub fn print_plan(e: &Expr) -> String {
    print_plan_raw(&renumber_binders(e))
}

/// Single-line rendering keeping the tree's own variable ids.
pub fn print_plan_raw(e: &Expr) -> String {
    let mut out = String::new();
    compact(e, &mut out);
    out
}

/// One node per line, two spaces of indentation per level, binders renumbered.
pub fn print_plan_pretty(e: &Expr) -> String {
    let mut out = String::new();
    pretty(&renumber_binders(e), 0, &mut out);
    out
}

fn head(e: &Expr) -> String {
    use ExprKind::*;
    match e.kind() {
        Const(v) => format!("const {} {}", e.ty(), literal(v)),
        Var(v) => format!("var {}", v.id),
        Fun { param, .. } => format!("fun {} {}", param.id, param.ty),
        Proj(_, i) => format!("proj {i}"),
        Record(s, _) => format!("record {}", s.name),
        Field { name, .. } => format!("field {name}"),
        Lit { kind, elem, .. } => format!("lit {kind} {elem}"),
        _ => e.node_name().to_string(),
    }
}

fn compact(e: &Expr, out: &mut String) {
    out.push('(');
    out.push_str(&head(e));
    for c in e.children() {
        out.push(' ');
        compact(&c, out);
    }
    out.push(')');
}

fn pretty(e: &Expr, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push('(');
    out.push_str(&head(e));
    for c in e.children() {
        out.push('\n');
        pretty(&c, depth + 1, out);
    }
    out.push(')');
}

fn literal(v: &Value) -> String {
    fn list<'a>(items: impl Iterator<Item = &'a Value>) -> String {
        let mut s = String::from("[");
        for (i, v) in items.enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&literal(v));
        }
        s.push(']');
        s
    }
    match v {
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Double(d) => format!("{d:?}"),
        Value::Str(s) => serde_json::to_string(&**s).expect("strings serialize"),
        Value::Tuple(vs) | Value::Record(_, vs) | Value::Seq(vs) => list(vs.iter()),
        Value::Set(vs) => list(vs.iter()),
        Value::Closure(c) => format!("<closure {}>", c.param.id),
    }
}

// ---- parsing ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    LBrack,
    RBrack,
    Str(String),
    Atom(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, PlanError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '"' {
            let start = i;
            i += 1;
            let mut escaped = false;
            loop {
                match chars.get(i) {
                    None => return Err(PlanError::Parse { line: tl, col: tc, reason: "unterminated string".into() }),
                    Some('\\') if !escaped => escaped = true,
                    Some('"') if !escaped => break,
                    Some('\n') => {
                        return Err(PlanError::Parse { line: tl, col: tc, reason: "newline in string".into() })
                    }
                    _ => escaped = false,
                }
                i += 1;
            }
            i += 1;
            let raw: String = chars[start..i].iter().collect();
            col += i - start;
            let s: String = serde_json::from_str(&raw).map_err(|e| PlanError::Parse {
                line: tl,
                col: tc,
                reason: format!("bad string literal: {e}"),
            })?;
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() && !"()[]\"".contains(chars[i]) {
            i += 1;
        }
        col += i - start;
        out.push(Token { tok: Tok::Atom(chars[start..i].iter().collect()), line: tl, col: tc });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    reg: &'a SchemaRegistry,
    roots: &'a [TypedVar],
    scope: Vec<TypedVar>,
    end: (usize, usize),
}

/// Parses a closed plan.
pub fn parse_plan(text: &str, reg: &SchemaRegistry) -> Result<Expr, PlanError> {
    parse_plan_with_roots(text, reg, &[])
}

/// Parses a plan whose free variables are drawn from `roots`.
pub fn parse_plan_with_roots(text: &str, reg: &SchemaRegistry, roots: &[TypedVar]) -> Result<Expr, PlanError> {
    let toks = tokenize(text)?;
    let lines = text.lines().count().max(1);
    let end = (lines, text.lines().last().map_or(1, |l| l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, reg, roots, scope: Vec::new(), end };
    let e = p.expr()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(PlanError::Parse { line: t.line, col: t.col, reason: "trailing input after plan".into() });
    }
    Ok(e)
}

impl Parser<'_> {
    fn err_at(&self, tok: Option<&Token>, reason: impl Into<String>) -> PlanError {
        let (line, col) = tok.map_or(self.end, |t| (t.line, t.col));
        PlanError::Parse { line, col, reason: reason.into() }
    }

    fn err(&self, reason: impl Into<String>) -> PlanError {
        self.err_at(self.toks.get(self.pos), reason)
    }

    fn next(&mut self) -> Result<Token, PlanError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), PlanError> {
        let t = self.next()?;
        if t.tok == want {
            Ok(())
        } else {
            Err(self.err_at(Some(&t), format!("expected {what}")))
        }
    }

    fn atom(&mut self, what: &str) -> Result<(String, Token), PlanError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Atom(a) => Ok((a.clone(), t.clone())),
            _ => Err(self.err_at(Some(&t), format!("expected {what}"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, PlanError> {
        let (a, t) = self.atom(what)?;
        a.parse().map_err(|_| self.err_at(Some(&t), format!("expected {what}, found `{a}`")))
    }

    fn ty(&mut self) -> Result<Type, PlanError> {
        let (a, t) = self.atom("a type")?;
        self.reg.parse_type(&a, true).map_err(|e| self.err_at(Some(&t), e))
    }

    fn typed<T>(&self, tok: &Token, r: Result<T, ExprError>) -> Result<T, PlanError> {
        r.map_err(|e| match e {
            ExprError::Typing { .. } | ExprError::ValueTagMismatch { .. } => PlanError::Typing(e),
            other => self.err_at(Some(tok), other.to_string()),
        })
    }

    fn exprs_until_close(&mut self) -> Result<Vec<Expr>, PlanError> {
        let mut out = Vec::new();
        while self.peek() != Some(&Tok::Close) {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, PlanError> {
        self.expect(Tok::Open, "`(`")?;
        let (head, htok) = self.atom("a node name")?;
        let e = match head.as_str() {
            "const" => {
                let ty = self.ty()?;
                let v = self.literal(&ty)?;
                self.typed(&htok, Expr::constant(v, ty))?
            }
            "var" => {
                let id: u32 = self.number("a variable id")?;
                let v = self
                    .scope
                    .iter()
                    .rev()
                    .chain(self.roots.iter())
                    .find(|v| v.id == id)
                    .cloned()
                    .ok_or_else(|| self.err_at(Some(&htok), format!("unbound variable {id}")))?;
                Expr::var(v)
            }
            "fun" => {
                let id: u32 = self.number("a binder id")?;
                let ty = self.ty()?;
                let param = TypedVar::new(id, ty);
                self.scope.push(param.clone());
                let body = self.expr();
                self.scope.pop();
                self.typed(&htok, Expr::lambda(param, body?))?
            }
            "proj" => {
                let i: usize = self.number("a tuple index")?;
                let t = self.expr()?;
                self.typed(&htok, Expr::proj(t, i))?
            }
            "field" => {
                let (name, _) = self.atom("a field name")?;
                let rec = self.expr()?;
                self.typed(&htok, Expr::field(rec, &name))?
            }
            "record" => {
                let (name, ntok) = self.atom("a schema name")?;
                let schema =
                    self.reg.get(&name).ok_or_else(|| self.err_at(Some(&ntok), format!("unknown schema `{name}`")))?;
                let fields = self.exprs_until_close()?;
                self.typed(&htok, Expr::record(schema, fields))?
            }
            "lit" => {
                let (k, ktok) = self.atom("a collection kind")?;
                let kind = CollKind::from_name(&k).ok_or_else(|| self.err_at(Some(&ktok), "expected seq or set"))?;
                let elem = self.ty()?;
                let elems = self.exprs_until_close()?;
                self.typed(&htok, Expr::coll_lit(kind, elem, elems))?
            }
            "tuple" => {
                let es = self.exprs_until_close()?;
                self.typed(&htok, Expr::tuple(es))?
            }
            "not" | "size" | "toseq" | "toset" => {
                let a = self.expr()?;
                let r = match head.as_str() {
                    "not" => Expr::negate(a),
                    "size" => Expr::size(a),
                    "toseq" => Expr::to_seq(a),
                    _ => Expr::to_set(a),
                };
                self.typed(&htok, r)?
            }
            "hashjoin" => {
                let args = [self.expr()?, self.expr()?, self.expr()?, self.expr()?, self.expr()?];
                let [o, i, ok, ik, c] = args;
                self.typed(&htok, Expr::hash_join(o, i, ok, ik, c))?
            }
            binary => {
                let build: fn(Expr, Expr) -> Result<Expr, ExprError> = match binary {
                    "app" => Expr::app,
                    "concat" => Expr::concat,
                    "add" => |l, r| Expr::arith(ArithOp::Add, l, r),
                    "sub" => |l, r| Expr::arith(ArithOp::Sub, l, r),
                    "mul" => |l, r| Expr::arith(ArithOp::Mul, l, r),
                    "div" => |l, r| Expr::arith(ArithOp::Div, l, r),
                    "eq" => |l, r| Expr::cmp(CmpOp::Eq, l, r),
                    "ne" => |l, r| Expr::cmp(CmpOp::Ne, l, r),
                    "lt" => |l, r| Expr::cmp(CmpOp::Lt, l, r),
                    "le" => |l, r| Expr::cmp(CmpOp::Le, l, r),
                    "gt" => |l, r| Expr::cmp(CmpOp::Gt, l, r),
                    "ge" => |l, r| Expr::cmp(CmpOp::Ge, l, r),
                    "and" => |l, r| Expr::boolean(BoolOp::And, l, r),
                    "or" => |l, r| Expr::boolean(BoolOp::Or, l, r),
                    "map" => Expr::map,
                    "flatmap" => Expr::flat_map,
                    "filter" => Expr::filter,
                    "union" => Expr::union,
                    other => return Err(self.err_at(Some(&htok), format!("unknown node `{other}`"))),
                };
                let l = self.expr()?;
                let r = self.expr()?;
                self.typed(&htok, build(l, r))?
            }
        };
        self.expect(Tok::Close, "`)`")?;
        Ok(e)
    }

    fn literal(&mut self, ty: &Type) -> Result<Value, PlanError> {
        let t = self.next()?;
        let bad = |p: &Self| p.err_at(Some(&t), format!("bad literal for type {ty}"));
        match (ty, &t.tok) {
            (Type::Int, Tok::Atom(a)) => a.parse().map(Value::Int).map_err(|_| bad(self)),
            (Type::Double, Tok::Atom(a)) => a.parse().map(Value::Double).map_err(|_| bad(self)),
            (Type::Bool, Tok::Atom(a)) => match a.as_str() {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                _ => Err(bad(self)),
            },
            (Type::String, Tok::Str(s)) => Ok(Value::str(s)),
            (Type::Tuple(ts), Tok::LBrack) => {
                let items = ts.iter().map(|t| self.literal(t)).collect::<Result<Vec<_>, _>>()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Value::tuple(items))
            }
            (Type::Record(s), Tok::LBrack) => {
                let items = s.fields.iter().map(|(_, t)| self.literal(t)).collect::<Result<Vec<_>, _>>()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Value::record(s.clone(), items))
            }
            (Type::Coll(kind, elem), Tok::LBrack) => {
                let mut items = Vec::new();
                while self.peek() != Some(&Tok::RBrack) {
                    items.push(self.literal(elem)?);
                }
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Value::collection(*kind, items))
            }
            _ => Err(bad(self)),
        }
    }
}
