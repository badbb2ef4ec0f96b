//! Text formats: the surface DSL, the group DSL, element literals, and a
//! JSON mirror (schema `folia/1`).
//!
//! ```text
//! surface := "(" "strip" pattern ")"
//! pattern := "(" "fin" slot* ")"
//!          | "(" ("nat" | "neg") "(" "pre" slot* ")" "(" "cyc" slot+ ")" ")"
//!          | "(" "int" "(" "cyc" slot+ ")" ")"
//!          | "(" "int" "(" "sup" ("(" integer surface ")")* ")" ")"
//! slot    := "_" | surface
//!
//! group   := "1" | "Z" | "(" "x" gslot gslot+ ")" | "(" "xpat" gpattern ")" | "(" "wr" group ")"
//! gslot   := ("_" | group) ["^" (integer | "w")]
//!
//! elem    := "e" | "(" "p" ("(" integer elem ")")* ")" | "(" "w" "(" ("(" integer elem ")")* ")" integer ")"
//! ```
//!
//! `gpattern` is `pattern` with group slots. In a group slot `_` means `1`.
//! The `^` suffix repeats a factor (`^w` countably often) and is what
//! normal forms print.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::elements::WreathElement;
use crate::groups::{validate_group, GroupExpr, GroupNormalForm, GroupValidationError};
use crate::homeotopy::EtaImage;
use crate::pattern::{IndexPattern, Multiplicity};
use crate::surface::{validate, Slot, SurfaceTree, ValidationError};

pub const SCHEMA_VERSION: &str = "folia/1";

/// A positioned syntax error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct SyntaxError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invalid surface: {}", join(.0))]
    InvalidSurface(Vec<ValidationError>),
    #[error("invalid group: {}", join(.0))]
    InvalidGroup(Vec<GroupValidationError>),
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Source text with byte-offset to line/column mapping.
#[derive(Debug, Clone)]
pub struct SourceText<'a> {
    text: &'a str,
}

impl<'a> SourceText<'a> {
    pub fn new(text: &'a str) -> Self {
        SourceText { text }
    }

    pub fn text(&self) -> &'a str {
        self.text
    }

    /// 1-based line and column (in characters) of a byte offset.
    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        (line, before[line_start..].chars().count() + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Caret,
    Atom(&'a str),
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "'('".into(),
            Tok::Close => "')'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Atom(a) => format!("'{a}'"),
        }
    }
}

struct Parser<'a> {
    src: SourceText<'a>,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        let flush = |toks: &mut Vec<(usize, Tok<'a>)>, start: &mut Option<usize>, end: usize| {
            if let Some(s) = start.take() {
                toks.push((s, Tok::Atom(&text[s..end])));
            }
        };
        for (i, c) in text.char_indices() {
            match c {
                '(' | ')' | '^' => {
                    flush(&mut toks, &mut start, i);
                    toks.push((
                        i,
                        match c {
                            '(' => Tok::Open,
                            ')' => Tok::Close,
                            _ => Tok::Caret,
                        },
                    ));
                }
                c if c.is_whitespace() => flush(&mut toks, &mut start, i),
                _ => {
                    if start.is_none() {
                        start = Some(i);
                    }
                }
            }
        }
        flush(&mut toks, &mut start, text.len());
        Parser {
            src: SourceText::new(text),
            toks,
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn error(&self, expected: &str) -> SyntaxError {
        let (offset, found) = match self.toks.get(self.pos) {
            Some((o, t)) => (*o, t.describe()),
            None => (self.src.text().len(), "end of input".to_string()),
        };
        let (line, column) = self.src.line_col(offset);
        SyntaxError {
            offset,
            line,
            column,
            expected: expected.to_string(),
            found,
        }
    }

    fn open(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("'('")),
        }
    }

    fn close(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("')'")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Atom(a)) if *a == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("'{kw}'"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Atom(a)) if *a == kw)
    }

    fn atom(&mut self, expected: &str) -> Result<&'a str, SyntaxError> {
        match self.peek() {
            Some(Tok::Atom(a)) => {
                let a = *a;
                self.pos += 1;
                Ok(a)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn integer(&mut self) -> Result<i64, SyntaxError> {
        match self.peek() {
            Some(Tok::Atom(a)) => match a.parse::<i64>() {
                Ok(n) => {
                    self.pos += 1;
                    Ok(n)
                }
                Err(_) => Err(self.error("integer")),
            },
            _ => Err(self.error("integer")),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    /// Slots up to (not including) the closing paren.
    fn slots_until_close<T>(
        &mut self,
        slot: &mut dyn FnMut(&mut Self) -> Result<T, SyntaxError>,
    ) -> Result<Vec<T>, SyntaxError> {
        let mut out = Vec::new();
        while !matches!(self.peek(), Some(Tok::Close) | None) {
            out.push(slot(self)?);
        }
        Ok(out)
    }

    /// `pattern` with a caller-supplied slot parser; `sup_value` parses the
    /// value of a `(k value)` support entry.
    fn pattern<T>(
        &mut self,
        slot: &mut dyn FnMut(&mut Self) -> Result<T, SyntaxError>,
        sup_value: &mut dyn FnMut(&mut Self) -> Result<T, SyntaxError>,
    ) -> Result<IndexPattern<T>, SyntaxError> {
        self.open()?;
        let kind = self.atom("'fin', 'nat', 'neg' or 'int'")?;
        let pattern = match kind {
            "fin" => IndexPattern::Fin(self.slots_until_close(slot)?),
            "nat" | "neg" => {
                self.open()?;
                self.keyword("pre")?;
                let prefix = self.slots_until_close(slot)?;
                self.close()?;
                self.open()?;
                self.keyword("cyc")?;
                let cycle = self.slots_until_close(slot)?;
                self.close()?;
                if kind == "nat" {
                    IndexPattern::Nat { prefix, cycle }
                } else {
                    IndexPattern::Neg { prefix, cycle }
                }
            }
            "int" => {
                self.open()?;
                let p = if self.at_keyword("cyc") {
                    self.pos += 1;
                    IndexPattern::IntCyc(self.slots_until_close(slot)?)
                } else if self.at_keyword("sup") {
                    self.pos += 1;
                    let mut support = Vec::new();
                    while matches!(self.peek(), Some(Tok::Open)) {
                        self.open()?;
                        let k = self.integer()?;
                        let v = sup_value(self)?;
                        self.close()?;
                        support.push((k, v));
                    }
                    IndexPattern::IntSup(support)
                } else {
                    return Err(self.error("'cyc' or 'sup'"));
                };
                self.close()?;
                p
            }
            _ => {
                self.pos -= 1;
                return Err(self.error("'fin', 'nat', 'neg' or 'int'"));
            }
        };
        self.close()?;
        Ok(pattern)
    }

    fn surface(&mut self) -> Result<SurfaceTree, SyntaxError> {
        self.open()?;
        self.keyword("strip")?;
        let children = self.pattern(&mut Self::surface_slot, &mut |p| p.surface().map(Some))?;
        self.close()?;
        Ok(SurfaceTree::new(children))
    }

    fn surface_slot(&mut self) -> Result<Slot, SyntaxError> {
        if self.at_keyword("_") {
            self.pos += 1;
            Ok(None)
        } else if matches!(self.peek(), Some(Tok::Open)) {
            self.surface().map(Some)
        } else {
            Err(self.error("'_' or '(strip ...)'"))
        }
    }

    fn group(&mut self) -> Result<GroupExpr, SyntaxError> {
        match self.peek() {
            Some(Tok::Atom("1")) => {
                self.pos += 1;
                Ok(GroupExpr::One)
            }
            Some(Tok::Atom("Z")) => {
                self.pos += 1;
                Ok(GroupExpr::z())
            }
            Some(Tok::Open) => {
                self.open()?;
                let head = self.atom("'x', 'xpat' or 'wr'")?;
                let g = match head {
                    "wr" => GroupExpr::wr(self.group()?),
                    "xpat" => {
                        GroupExpr::Prod(self.pattern(&mut Self::group_slot, &mut Self::group)?)
                    }
                    "x" => self.product_items()?,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("'x', 'xpat' or 'wr'"));
                    }
                };
                self.close()?;
                Ok(g)
            }
            _ => Err(self.error("group ('1', 'Z' or '(...)')")),
        }
    }

    fn group_slot(&mut self) -> Result<GroupExpr, SyntaxError> {
        if self.at_keyword("_") {
            self.pos += 1;
            Ok(GroupExpr::One)
        } else {
            self.group()
        }
    }

    /// Items of `(x ...)`, each optionally suffixed by `^n` or `^w`.
    fn product_items(&mut self) -> Result<GroupExpr, SyntaxError> {
        let mut finite = Vec::new();
        let mut cycle = Vec::new();
        let mut total = Multiplicity::Finite(0);
        while !matches!(self.peek(), Some(Tok::Close) | None) {
            let g = self.group_slot()?;
            let mult = if matches!(self.peek(), Some(Tok::Caret)) {
                self.pos += 1;
                if self.at_keyword("w") {
                    self.pos += 1;
                    Multiplicity::Omega
                } else {
                    match self.integer()? {
                        n if n >= 1 => Multiplicity::Finite(n as u64),
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("positive multiplicity"));
                        }
                    }
                }
            } else {
                Multiplicity::Finite(1)
            };
            total = total + mult;
            match mult {
                Multiplicity::Finite(n) => finite.extend((0..n).map(|_| g.clone())),
                Multiplicity::Omega => cycle.push(g),
            }
        }
        if total < Multiplicity::Finite(2) {
            return Err(self.error("at least two factors"));
        }
        Ok(if cycle.is_empty() {
            GroupExpr::fin(finite)
        } else {
            GroupExpr::Prod(IndexPattern::Nat {
                prefix: finite,
                cycle,
            })
        })
    }

    fn element(&mut self) -> Result<WreathElement, SyntaxError> {
        if self.at_keyword("e") {
            self.pos += 1;
            return Ok(WreathElement::Unit);
        }
        self.open()?;
        let head = self.atom("'p' or 'w'")?;
        let el = match head {
            "p" => WreathElement::Prod(self.indexed_entries()?),
            "w" => {
                self.open()?;
                let support = self.indexed_entries()?;
                self.close()?;
                let shift = self.integer()?;
                WreathElement::Wr { support, shift }
            }
            _ => {
                self.pos -= 1;
                return Err(self.error("'p' or 'w'"));
            }
        };
        self.close()?;
        Ok(el)
    }

    fn indexed_entries(&mut self) -> Result<BTreeMap<i64, WreathElement>, SyntaxError> {
        let mut out = BTreeMap::new();
        while matches!(self.peek(), Some(Tok::Open)) {
            let at = self.pos;
            self.open()?;
            let k = self.integer()?;
            let v = self.element()?;
            self.close()?;
            if out.insert(k, v).is_some() {
                self.pos = at;
                return Err(self.error(&format!("distinct index (duplicate {k})")));
            }
        }
        Ok(out)
    }
}

/// Parses a surface without checking pattern invariants.
pub fn parse_surface_raw(text: &str) -> Result<SurfaceTree, SyntaxError> {
    let mut p = Parser::new(text);
    if matches!(p.peek(), Some(Tok::Open)) && matches!(p.peek2(), Some(Tok::Atom("strip"))) {
        let t = p.surface()?;
        p.finish()?;
        Ok(t)
    } else {
        Err(p.error("'(strip'"))
    }
}

/// Parses and validates a surface.
pub fn parse_surface(text: &str) -> Result<SurfaceTree, TextError> {
    let t = parse_surface_raw(text)?;
    validate(&t).map_err(TextError::InvalidSurface)?;
    Ok(t)
}

pub fn parse_group_raw(text: &str) -> Result<GroupExpr, SyntaxError> {
    let mut p = Parser::new(text);
    let g = p.group()?;
    p.finish()?;
    Ok(g)
}

/// Parses and validates a group expression.
pub fn parse_group(text: &str) -> Result<GroupExpr, TextError> {
    let g = parse_group_raw(text)?;
    validate_group(&g).map_err(TextError::InvalidGroup)?;
    Ok(g)
}

/// Parses an element literal; `e` stays a bare unit (see [`crate::elements::conform`]).
pub fn parse_element(text: &str) -> Result<WreathElement, SyntaxError> {
    let mut p = Parser::new(text);
    let e = p.element()?;
    p.finish()?;
    Ok(e)
}

fn print_pattern<T>(
    out: &mut String,
    p: &IndexPattern<T>,
    slot: &dyn Fn(&mut String, &T),
    sup: &dyn Fn(&mut String, &T),
) {
    let list = |out: &mut String, head: &str, items: &[T]| {
        out.push('(');
        out.push_str(head);
        for s in items {
            out.push(' ');
            slot(out, s);
        }
        out.push(')');
    };
    out.push('(');
    match p {
        IndexPattern::Fin(slots) => {
            out.push_str("fin");
            for s in slots {
                out.push(' ');
                slot(out, s);
            }
        }
        IndexPattern::Nat { prefix, cycle } | IndexPattern::Neg { prefix, cycle } => {
            out.push_str(if matches!(p, IndexPattern::Nat { .. }) {
                "nat "
            } else {
                "neg "
            });
            list(out, "pre", prefix);
            out.push(' ');
            list(out, "cyc", cycle);
        }
        IndexPattern::IntCyc(cycle) => {
            out.push_str("int ");
            list(out, "cyc", cycle);
        }
        IndexPattern::IntSup(support) => {
            out.push_str("int (sup");
            for (k, s) in support {
                let _ = write!(out, " ({k} ");
                sup(out, s);
                out.push(')');
            }
            out.push(')');
        }
    }
    out.push(')');
}

fn write_surface(out: &mut String, t: &SurfaceTree) {
    out.push_str("(strip ");
    print_pattern(out, &t.children, &write_slot, &write_slot);
    out.push(')');
}

fn write_slot(out: &mut String, s: &Slot) {
    match s {
        None => out.push('_'),
        Some(t) => write_surface(out, t),
    }
}

pub fn print_surface(tree: &SurfaceTree) -> String {
    let mut out = String::new();
    write_surface(&mut out, tree);
    out
}

fn write_group(out: &mut String, g: &GroupExpr) {
    match g {
        GroupExpr::One => out.push('1'),
        GroupExpr::Wr(inner) if **inner == GroupExpr::One => out.push('Z'),
        GroupExpr::Wr(inner) => {
            out.push_str("(wr ");
            write_group(out, inner);
            out.push(')');
        }
        GroupExpr::Prod(IndexPattern::Fin(factors)) if factors.len() >= 2 => {
            out.push_str("(x");
            for f in factors {
                out.push(' ');
                write_group(out, f);
            }
            out.push(')');
        }
        GroupExpr::Prod(p) => {
            out.push_str("(xpat ");
            print_pattern(out, p, &write_group, &write_group);
            out.push(')');
        }
    }
}

pub fn print_group(g: &GroupExpr) -> String {
    let mut out = String::new();
    write_group(&mut out, g);
    out
}

fn write_nf(out: &mut String, nf: &GroupNormalForm) {
    match nf {
        GroupNormalForm::One => out.push('1'),
        GroupNormalForm::Wr(inner) if **inner == GroupNormalForm::One => out.push('Z'),
        GroupNormalForm::Wr(inner) => {
            out.push_str("(wr ");
            write_nf(out, inner);
            out.push(')');
        }
        GroupNormalForm::ProdNF(factors) => {
            out.push_str("(x");
            for (f, m) in factors {
                out.push(' ');
                write_nf(out, f);
                if *m != Multiplicity::Finite(1) {
                    let _ = write!(out, "^{m}");
                }
            }
            out.push(')');
        }
    }
}

/// Prints a normal form in the group DSL; `w`-multiplicities print as `^w`.
pub fn print_normal_form(nf: &GroupNormalForm) -> String {
    let mut out = String::new();
    write_nf(&mut out, nf);
    out
}

fn write_entries(out: &mut String, m: &BTreeMap<i64, WreathElement>) {
    let mut first = true;
    for (k, v) in m {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "({k} ");
        write_element(out, v);
        out.push(')');
    }
}

fn write_element(out: &mut String, e: &WreathElement) {
    match e {
        WreathElement::Unit => out.push('e'),
        WreathElement::Prod(m) => {
            out.push_str("(p");
            if !m.is_empty() {
                out.push(' ');
            }
            write_entries(out, m);
            out.push(')');
        }
        WreathElement::Wr { support, shift } => {
            out.push_str("(w (");
            write_entries(out, support);
            let _ = write!(out, ") {shift})");
        }
    }
}

pub fn print_element(e: &WreathElement) -> String {
    let mut out = String::new();
    write_element(&mut out, e);
    out
}

// ---------------------------------------------------------------------------
// JSON mirror

/// Any value with a JSON spelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Surface(SurfaceTree),
    Group(GroupExpr),
    NormalForm(GroupNormalForm),
    Element(WreathElement),
    Eta(EtaImage),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unsupported schema version {0:?}, expected \"folia/1\"")]
    Version(String),
    #[error("shape mismatch at {path}: {msg}")]
    Shape { path: String, msg: String },
}

fn shape_err(path: &str, msg: impl Into<String>) -> SchemaError {
    SchemaError::Shape {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn pattern_json<T>(p: &IndexPattern<T>, slot: &dyn Fn(&T) -> Value) -> Value {
    let list = |items: &[T]| Value::Array(items.iter().map(slot).collect());
    match p {
        IndexPattern::Fin(slots) => json!({ "fin": list(slots) }),
        IndexPattern::Nat { prefix, cycle } => {
            json!({ "nat": { "pre": list(prefix), "cyc": list(cycle) } })
        }
        IndexPattern::Neg { prefix, cycle } => {
            json!({ "neg": { "pre": list(prefix), "cyc": list(cycle) } })
        }
        IndexPattern::IntCyc(cycle) => json!({ "int": { "cyc": list(cycle) } }),
        IndexPattern::IntSup(support) => {
            let entries: Vec<Value> = support.iter().map(|(k, s)| json!([k, slot(s)])).collect();
            json!({ "int": { "sup": entries } })
        }
    }
}

fn single_key<'v>(v: &'v Value, path: &str) -> Result<(&'v str, &'v Value), SchemaError> {
    match v.as_object() {
        Some(o) if o.len() == 1 => {
            let (k, v) = o.iter().next().expect("len 1");
            Ok((k.as_str(), v))
        }
        _ => Err(shape_err(path, "expected an object with exactly one key")),
    }
}

fn array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, SchemaError> {
    v.as_array()
        .ok_or_else(|| shape_err(path, "expected an array"))
}

fn int_of(v: &Value, path: &str) -> Result<i64, SchemaError> {
    v.as_i64()
        .ok_or_else(|| shape_err(path, "expected an integer"))
}

fn pattern_from_json<T>(
    v: &Value,
    path: &str,
    slot: &dyn Fn(&Value, &str) -> Result<T, SchemaError>,
) -> Result<IndexPattern<T>, SchemaError> {
    let list = |v: &Value, path: &str| -> Result<Vec<T>, SchemaError> {
        array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, x)| slot(x, &format!("{path}/{i}")))
            .collect()
    };
    let field = |o: &Value, key: &str, path: &str| -> Result<Value, SchemaError> {
        o.get(key)
            .cloned()
            .ok_or_else(|| shape_err(path, format!("missing \"{key}\"")))
    };
    let (kind, body) = single_key(v, path)?;
    let sub = format!("{path}/{kind}");
    Ok(match kind {
        "fin" => IndexPattern::Fin(list(body, &sub)?),
        "nat" | "neg" => {
            let prefix = list(&field(body, "pre", &sub)?, &format!("{sub}/pre"))?;
            let cycle = list(&field(body, "cyc", &sub)?, &format!("{sub}/cyc"))?;
            if kind == "nat" {
                IndexPattern::Nat { prefix, cycle }
            } else {
                IndexPattern::Neg { prefix, cycle }
            }
        }
        "int" => match single_key(body, &sub)? {
            ("cyc", c) => IndexPattern::IntCyc(list(c, &format!("{sub}/cyc"))?),
            ("sup", s) => {
                let mut support = Vec::new();
                for (i, e) in array(s, &sub)?.iter().enumerate() {
                    let p = format!("{sub}/sup/{i}");
                    match e.as_array().map(Vec::as_slice) {
                        Some([k, x]) => support.push((int_of(k, &p)?, slot(x, &p)?)),
                        _ => return Err(shape_err(&p, "expected [index, value]")),
                    }
                }
                IndexPattern::IntSup(support)
            }
            (other, _) => return Err(shape_err(&sub, format!("unknown int form \"{other}\""))),
        },
        other => return Err(shape_err(path, format!("unknown pattern \"{other}\""))),
    })
}

fn surface_json(t: &SurfaceTree) -> Value {
    pattern_json(&t.children, &|s: &Slot| {
        s.as_ref().map_or(Value::Null, surface_json)
    })
}

fn surface_from(v: &Value, path: &str) -> Result<SurfaceTree, SchemaError> {
    let slot = |v: &Value, path: &str| -> Result<Slot, SchemaError> {
        if v.is_null() {
            Ok(None)
        } else {
            surface_from(v, path).map(Some)
        }
    };
    pattern_from_json(v, path, &slot).map(SurfaceTree::new)
}

fn group_json(g: &GroupExpr) -> Value {
    match g {
        GroupExpr::One => json!("1"),
        GroupExpr::Wr(inner) => json!({ "wr": group_json(inner) }),
        GroupExpr::Prod(p) => json!({ "x": pattern_json(p, &group_json) }),
    }
}

fn group_from(v: &Value, path: &str) -> Result<GroupExpr, SchemaError> {
    if v.as_str() == Some("1") {
        return Ok(GroupExpr::One);
    }
    match single_key(v, path)? {
        ("wr", inner) => Ok(GroupExpr::wr(group_from(inner, &format!("{path}/wr"))?)),
        ("x", p) => Ok(GroupExpr::Prod(pattern_from_json(
            p,
            &format!("{path}/x"),
            &group_from,
        )?)),
        (other, _) => Err(shape_err(path, format!("unknown group form \"{other}\""))),
    }
}

fn nf_json(nf: &GroupNormalForm) -> Value {
    match nf {
        GroupNormalForm::One => json!("1"),
        GroupNormalForm::Wr(inner) => json!({ "wr": nf_json(inner) }),
        GroupNormalForm::ProdNF(factors) => {
            let items: Vec<Value> = factors
                .iter()
                .map(|(f, m)| {
                    let m = match m {
                        Multiplicity::Finite(n) => json!(n),
                        Multiplicity::Omega => json!("w"),
                    };
                    json!([nf_json(f), m])
                })
                .collect();
            json!({ "x": items })
        }
    }
}

fn nf_from(v: &Value, path: &str) -> Result<GroupNormalForm, SchemaError> {
    if v.as_str() == Some("1") {
        return Ok(GroupNormalForm::One);
    }
    match single_key(v, path)? {
        ("wr", inner) => Ok(GroupNormalForm::Wr(Box::new(nf_from(
            inner,
            &format!("{path}/wr"),
        )?))),
        ("x", items) => {
            let mut factors = Vec::new();
            for (i, item) in array(items, path)?.iter().enumerate() {
                let p = format!("{path}/x/{i}");
                let Some([f, m]) = item.as_array().map(Vec::as_slice) else {
                    return Err(shape_err(&p, "expected [factor, multiplicity]"));
                };
                let m = match (m.as_str(), m.as_u64()) {
                    (Some("w"), _) => Multiplicity::Omega,
                    (_, Some(n)) if n >= 1 => Multiplicity::Finite(n),
                    _ => {
                        return Err(shape_err(
                            &p,
                            "multiplicity must be a positive integer or \"w\"",
                        ))
                    }
                };
                factors.push((nf_from(f, &p)?, m));
            }
            Ok(GroupNormalForm::ProdNF(factors))
        }
        (other, _) => Err(shape_err(path, format!("unknown normal form \"{other}\""))),
    }
}

fn entries_json(m: &BTreeMap<i64, WreathElement>) -> Value {
    Value::Array(m.iter().map(|(k, v)| json!([k, element_json(v)])).collect())
}

fn entries_from(v: &Value, path: &str) -> Result<BTreeMap<i64, WreathElement>, SchemaError> {
    let mut out = BTreeMap::new();
    for (i, item) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}/{i}");
        let Some([k, x]) = item.as_array().map(Vec::as_slice) else {
            return Err(shape_err(&p, "expected [index, element]"));
        };
        let k = int_of(k, &p)?;
        if out.insert(k, element_from(x, &p)?).is_some() {
            return Err(shape_err(&p, format!("duplicate index {k}")));
        }
    }
    Ok(out)
}

fn element_json(e: &WreathElement) -> Value {
    match e {
        WreathElement::Unit => json!("e"),
        WreathElement::Prod(m) => json!({ "p": entries_json(m) }),
        WreathElement::Wr { support, shift } => {
            json!({ "w": { "sup": entries_json(support), "shift": shift } })
        }
    }
}

fn element_from(v: &Value, path: &str) -> Result<WreathElement, SchemaError> {
    if v.as_str() == Some("e") {
        return Ok(WreathElement::Unit);
    }
    match single_key(v, path)? {
        ("p", m) => Ok(WreathElement::Prod(entries_from(m, &format!("{path}/p"))?)),
        ("w", body) => {
            let sub = format!("{path}/w");
            let sup = body
                .get("sup")
                .ok_or_else(|| shape_err(&sub, "missing \"sup\""))?;
            let shift = body
                .get("shift")
                .ok_or_else(|| shape_err(&sub, "missing \"shift\""))?;
            Ok(WreathElement::Wr {
                support: entries_from(sup, &sub)?,
                shift: int_of(shift, &sub)?,
            })
        }
        (other, _) => Err(shape_err(path, format!("unknown element form \"{other}\""))),
    }
}

fn eta_json(eta: &EtaImage) -> Value {
    match eta {
        EtaImage::Trivial => json!("trivial"),
        EtaImage::Period(k) => json!({ "period": k }),
    }
}

fn eta_from(v: &Value, path: &str) -> Result<EtaImage, SchemaError> {
    if v.as_str() == Some("trivial") {
        return Ok(EtaImage::Trivial);
    }
    match v.get("period").and_then(Value::as_u64) {
        Some(k) if k >= 1 => Ok(EtaImage::Period(k as usize)),
        _ => Err(shape_err(path, "expected \"trivial\" or {\"period\": k}")),
    }
}

/// The JSON value (with version tag) of a document.
pub fn to_json_value(doc: &Document) -> Value {
    let (key, body) = match doc {
        Document::Surface(t) => ("strip", surface_json(t)),
        Document::Group(g) => ("group", group_json(g)),
        Document::NormalForm(nf) => ("nf", nf_json(nf)),
        Document::Element(e) => ("elem", element_json(e)),
        Document::Eta(eta) => ("eta", eta_json(eta)),
    };
    let mut m = Map::new();
    m.insert("v".into(), json!(SCHEMA_VERSION));
    m.insert(key.into(), body);
    Value::Object(m)
}

pub fn to_json(doc: &Document) -> String {
    to_json_value(doc).to_string()
}

pub fn from_json_value(v: &Value) -> Result<Document, SchemaError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape_err("", "expected a top-level object"))?;
    match obj.get("v").map(|v| v.as_str()) {
        Some(Some(SCHEMA_VERSION)) => {}
        Some(Some(other)) => return Err(SchemaError::Version(other.to_string())),
        Some(None) => return Err(SchemaError::Version(obj["v"].to_string())),
        None => return Err(SchemaError::Version(String::new())),
    }
    if obj.len() != 2 {
        return Err(shape_err("", "expected \"v\" and exactly one payload key"));
    }
    let (key, body) = obj
        .iter()
        .find(|(k, _)| k.as_str() != "v")
        .expect("two keys");
    let path = format!("/{key}");
    Ok(match key.as_str() {
        "strip" => Document::Surface(surface_from(body, &path)?),
        "group" => Document::Group(group_from(body, &path)?),
        "nf" => Document::NormalForm(nf_from(body, &path)?),
        "elem" => Document::Element(element_from(body, &path)?),
        "eta" => Document::Eta(eta_from(body, &path)?),
        other => return Err(shape_err("", format!("unknown payload \"{other}\""))),
    })
}

pub fn from_json(text: &str) -> Result<Document, SchemaError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
    from_json_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_examples() {
        assert_eq!(parse_surface("(strip (fin))").unwrap(), SurfaceTree::leaf());
        assert_eq!(
            parse_surface("(strip (int (cyc _ (strip (fin)))))").unwrap(),
            SurfaceTree::int_cyc(vec![None, Some(SurfaceTree::leaf())])
        );
        assert!(matches!(
            parse_surface("(strip (int (cyc)))"),
            Err(TextError::InvalidSurface(_))
        ));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_surface("(strip\n  (fin _\t(strip (fin)) ))").unwrap();
        assert_eq!(print_surface(&a), "(strip (fin _ (strip (fin))))");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_surface_raw("(strip\n  (fin (strop (fin))))").unwrap_err();
        assert_eq!((err.line, err.column), (2, 9));
        assert_eq!(err.found, "'strop'");
        let err = parse_surface_raw("(strip (fin)").unwrap_err();
        assert_eq!(err.found, "end of input");
        let err = parse_surface_raw("(strip (fin)) extra").unwrap_err();
        assert_eq!(err.expected, "end of input");
        assert!(parse_surface_raw("").is_err());
        assert!(parse_surface_raw("(strip (int (sup (x (strip (fin))))))").is_err());
    }

    #[test]
    fn duplicate_support_key_is_a_validation_error() {
        let err =
            parse_surface("(strip (int (sup (1 (strip (fin))) (1 (strip (fin))))))").unwrap_err();
        assert!(
            matches!(err, TextError::InvalidSurface(v) if matches!(v[0], ValidationError::DuplicateSupportKey { index: 1, .. }))
        );
    }

    #[test]
    fn group_examples() {
        assert_eq!(parse_group("Z").unwrap(), GroupExpr::z());
        assert_eq!(
            parse_group("(x Z Z)").unwrap(),
            GroupExpr::fin(vec![GroupExpr::z(), GroupExpr::z()])
        );
        assert_eq!(
            parse_group("(wr (x 1 1))").unwrap(),
            GroupExpr::wr(GroupExpr::fin(vec![GroupExpr::One, GroupExpr::One]))
        );
        assert_eq!(print_group(&GroupExpr::z()), "Z");
        assert_eq!(
            print_group(&GroupExpr::fin(vec![GroupExpr::z()])),
            "(xpat (fin Z))"
        );
        assert!(parse_group("(x Z)").is_err());
        assert!(parse_group("(x Z^0)").is_err());
    }

    #[test]
    fn normal_form_printing_reparses() {
        let nf = GroupNormalForm::ProdNF(vec![
            (GroupNormalForm::z(), Multiplicity::Finite(3)),
            (
                GroupNormalForm::Wr(Box::new(GroupNormalForm::z())),
                Multiplicity::Omega,
            ),
        ]);
        let text = print_normal_form(&nf);
        assert_eq!(text, "(x Z^3 (wr Z)^w)");
        assert_eq!(crate::groups::normalize(&parse_group(&text).unwrap()), nf);
    }

    #[test]
    fn element_literals() {
        let e = parse_element("(w ((0 (w () 3)) (-2 (w () 1))) 7)").unwrap();
        assert_eq!(print_element(&e), "(w ((-2 (w () 1)) (0 (w () 3))) 7)");
        assert_eq!(parse_element("e").unwrap(), WreathElement::Unit);
        assert_eq!(print_element(&WreathElement::Prod(BTreeMap::new())), "(p)");
        assert!(parse_element("(p (1 e) (1 e))").is_err());
    }

    #[test]
    fn json_trivial_strip() {
        assert_eq!(
            to_json(&Document::Surface(SurfaceTree::leaf())),
            r#"{"v":"folia/1","strip":{"fin":[]}}"#
        );
    }

    #[test]
    fn json_wrong_version() {
        assert!(matches!(
            from_json(r#"{"v":"folia/0","strip":{"fin":[]}}"#),
            Err(SchemaError::Version(_))
        ));
        assert!(matches!(
            from_json(r#"{"strip":{"fin":[]}}"#),
            Err(SchemaError::Version(_))
        ));
        assert!(matches!(
            from_json(r#"{"v":"folia/1","strip":{"fan":[]}}"#),
            Err(SchemaError::Shape { .. })
        ));
        assert!(matches!(from_json("{"), Err(SchemaError::Json(_))));
    }

    #[test]
    fn json_nf_and_eta() {
        let nf = GroupNormalForm::ProdNF(vec![(GroupNormalForm::z(), Multiplicity::Omega)]);
        let text = to_json(&Document::NormalForm(nf.clone()));
        assert_eq!(text, r#"{"v":"folia/1","nf":{"x":[[{"wr":"1"},"w"]]}}"#);
        assert_eq!(from_json(&text).unwrap(), Document::NormalForm(nf));
        let eta = Document::Eta(EtaImage::Period(3));
        assert_eq!(from_json(&to_json(&eta)).unwrap(), eta);
    }
}
