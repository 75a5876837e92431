//! The scenario language.
//!
//! ```text
//! script   := stmt*
//! stmt     := (ringdecl | binddecl | cmd) ";"
//! ringdecl := "ring" id "=" field "[" (vars ";")? vars "]" "local"? ("weights" "(" ints ")")?
//! field    := "Q" | "F(" prime ")"
//! binddecl := ("ideal" | "module" | "family") id "=" item ("," item)*
//! item     := poly | "[" poly ("," poly)* "]"
//! cmd      := name id (key "=" value)*
//! value    := int | id | "(" number ("," number)* ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt;

use regulus::coeff::Field;
use regulus::parse::parse_polynomial_at;
use regulus::{MonomialOrder, Ring, RingRef};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl FieldSpec {
    pub fn field(&self) -> Field {
        match self {
            FieldSpec::Rational => Field::Rational,
            FieldSpec::Prime(p) => Field::Prime(*p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub field: FieldSpec,
    pub base: Vec<String>,
    pub vars: Vec<String>,
    pub local: bool,
    pub weights: Option<Vec<u32>>,
}

impl RingDecl {
    /// Builds the ring, with `field` overriding the declared one.
    pub fn build(&self, field: Option<&FieldSpec>) -> regulus::Result<RingRef> {
        let field = field.unwrap_or(&self.field).field();
        let mut names = self.base.clone();
        names.extend(self.vars.iter().cloned());
        let mut weights = vec![0; self.base.len()];
        match &self.weights {
            Some(w) => weights.extend(w.iter().copied()),
            None => weights.extend(std::iter::repeat_n(1, self.vars.len())),
        }
        Ring::new(field, names, weights, MonomialOrder::Grevlex, self.local)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BindKind {
    Ideal,
    Module,
    Family,
}

impl fmt::Display for BindKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BindKind::Ideal => "ideal",
            BindKind::Module => "module",
            BindKind::Family => "family",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PolyText {
    pub text: String,
    pub pos: Pos,
}

impl PartialEq for PolyText {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for PolyText {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Poly(PolyText),
    Vector(Vec<PolyText>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub kind: BindKind,
    pub name: String,
    pub items: Vec<Item>,
    /// Ring active at the binding.
    pub ring: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptValue {
    Int(i64),
    Ident(String),
    Tuple(Vec<String>),
}

impl fmt::Display for OptValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptValue::Int(v) => write!(f, "{v}"),
            OptValue::Ident(s) => write!(f, "{s}"),
            OptValue::Tuple(v) => write!(f, "({})", v.join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub name: String,
    pub target: String,
    pub options: Vec<(String, OptValue)>,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.target)?;
        for (k, v) in &self.options {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Ring(RingDecl),
    Bind(Binding),
    Command(Command),
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Ring(r) => {
                write!(f, "ring {} = {}[", r.name, r.field)?;
                if !r.base.is_empty() {
                    write!(f, "{}; ", r.base.join(","))?;
                }
                write!(f, "{}]", r.vars.join(","))?;
                if r.local {
                    write!(f, " local")?;
                }
                if let Some(w) = &r.weights {
                    let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                    write!(f, " weights({})", ws.join(","))?;
                }
            }
            StmtKind::Bind(b) => {
                write!(f, "{} {} = ", b.kind, b.name)?;
                let items: Vec<String> = b
                    .items
                    .iter()
                    .map(|i| match i {
                        Item::Poly(p) => p.text.clone(),
                        Item::Vector(v) => {
                            format!("[{}]", v.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(", "))
                        }
                    })
                    .collect();
                write!(f, "{}", items.join(", "))?;
            }
            StmtKind::Command(c) => write!(f, "{c}")?,
        }
        write!(f, ";")
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { chars: src.chars().collect(), pos: 0, line: 1, column: 1, _src: src }
    }

    fn here(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn err(&self, pos: Pos, message: impl Into<String>) -> ScriptError {
        ScriptError { line: pos.line, column: pos.column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ScriptError> {
        self.skip_trivia();
        let start = self.here();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() || s.chars().next().unwrap().is_ascii_digit() {
            return Err(self.err(start, "expected an identifier"));
        }
        Ok((s, start))
    }

    fn expect(&mut self, c: char) -> Result<Pos, ScriptError> {
        self.skip_trivia();
        let p = self.here();
        if self.peek() == Some(c) {
            self.bump();
            Ok(p)
        } else {
            Err(self.err(p, format!("expected '{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword_ahead(&mut self, kw: &str) -> bool {
        self.skip_trivia();
        let rest: String = self.chars[self.pos..].iter().take(kw.len() + 1).collect();
        rest.starts_with(kw) && !rest[kw.len()..].chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_')
    }

    fn uint(&mut self) -> Result<u64, ScriptError> {
        self.skip_trivia();
        let start = self.here();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s.parse().map_err(|_| self.err(start, "expected a non-negative integer"))
    }

    /// A number token inside a tuple: optional sign, digits, optional `/digits`.
    fn number(&mut self) -> Result<String, ScriptError> {
        self.skip_trivia();
        let start = self.here();
        let mut s = String::new();
        if self.peek() == Some('-') {
            s.push('-');
            self.bump();
        }
        let mut digits = 0;
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit() || *c == '/') {
            s.push(c);
            self.bump();
            digits += 1;
        }
        if digits == 0 || s.ends_with('/') {
            return Err(self.err(start, "expected a number"));
        }
        Ok(s)
    }

    fn var_list(&mut self) -> Result<Vec<String>, ScriptError> {
        let mut out = vec![self.ident()?.0];
        while self.eat(',') {
            out.push(self.ident()?.0);
        }
        Ok(out)
    }

    /// Raw text up to a top-level `,`, `;` or closing `]`.
    fn raw_item(&mut self) -> Result<PolyText, ScriptError> {
        self.skip_trivia();
        let pos = self.here();
        let mut depth = 0i32;
        let mut text = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err(self.here(), "unexpected end of input, expected ';'")),
                Some('(') => depth += 1,
                Some(')') => depth -= 1,
                Some(',') | Some(';') | Some(']') if depth == 0 => break,
                Some('#') => {
                    self.skip_trivia();
                    continue;
                }
                _ => {}
            }
            text.push(self.bump().unwrap());
        }
        let text = text.trim_end().to_string();
        if text.is_empty() {
            return Err(self.err(pos, "expected a polynomial"));
        }
        Ok(PolyText { text, pos })
    }
}

fn stmt(sc: &mut Scanner, current_ring: &Option<String>) -> Result<Stmt, ScriptError> {
    let (word, pos) = sc.ident()?;
    let kind = match word.as_str() {
        "ring" => {
            let (name, _) = sc.ident()?;
            sc.expect('=')?;
            sc.skip_trivia();
            let fpos = sc.here();
            let (f, _) = sc.ident()?;
            let field = match f.as_str() {
                "Q" => FieldSpec::Rational,
                "F" => {
                    sc.expect('(')?;
                    let p = sc.uint()?;
                    sc.expect(')')?;
                    FieldSpec::Prime(u32::try_from(p).map_err(|_| sc.err(fpos, "modulus too large"))?)
                }
                _ => return Err(sc.err(fpos, "expected a field, Q or F(p)")),
            };
            sc.expect('[')?;
            let first = sc.var_list()?;
            let (base, vars) = if sc.eat(';') { (first, sc.var_list()?) } else { (Vec::new(), first) };
            sc.expect(']')?;
            let local = if sc.keyword_ahead("local") {
                sc.ident()?;
                true
            } else {
                false
            };
            let weights = if sc.keyword_ahead("weights") {
                sc.ident()?;
                sc.expect('(')?;
                let mut w = vec![sc.uint()? as u32];
                while sc.eat(',') {
                    w.push(sc.uint()? as u32);
                }
                sc.expect(')')?;
                Some(w)
            } else {
                None
            };
            StmtKind::Ring(RingDecl { name, field, base, vars, local, weights })
        }
        "ideal" | "module" | "family" => {
            let kind = match word.as_str() {
                "ideal" => BindKind::Ideal,
                "module" => BindKind::Module,
                _ => BindKind::Family,
            };
            let (name, _) = sc.ident()?;
            sc.expect('=')?;
            let ring = current_ring.clone().ok_or_else(|| sc.err(pos, "no ring declared before this binding"))?;
            let mut items = Vec::new();
            loop {
                if sc.eat('[') {
                    let mut v = vec![sc.raw_item()?];
                    while sc.eat(',') {
                        v.push(sc.raw_item()?);
                    }
                    sc.expect(']')?;
                    items.push(Item::Vector(v));
                } else {
                    items.push(Item::Poly(sc.raw_item()?));
                }
                if !sc.eat(',') {
                    break;
                }
            }
            StmtKind::Bind(Binding { kind, name, items, ring })
        }
        _ => {
            let (target, _) = sc.ident()?;
            let mut options = Vec::new();
            loop {
                sc.skip_trivia();
                if sc.peek() == Some(';') || sc.peek().is_none() {
                    break;
                }
                let (key, _) = sc.ident()?;
                sc.expect('=')?;
                sc.skip_trivia();
                let value = match sc.peek() {
                    Some('(') => {
                        sc.bump();
                        let mut v = vec![sc.number()?];
                        while sc.eat(',') {
                            v.push(sc.number()?);
                        }
                        sc.expect(')')?;
                        OptValue::Tuple(v)
                    }
                    Some(c) if c.is_ascii_digit() || c == '-' => {
                        let p = sc.here();
                        let n = sc.number()?;
                        OptValue::Int(n.parse().map_err(|_| sc.err(p, "expected an integer"))?)
                    }
                    _ => OptValue::Ident(sc.ident()?.0),
                };
                options.push((key, value));
            }
            StmtKind::Command(Command { name: word, target, options })
        }
    };
    sc.expect(';')?;
    Ok(Stmt { kind, pos })
}

/// Parses and checks a script: every identifier is bound before use and
/// every polynomial parses in the ring active at its binding.
pub fn parse_script(src: &str) -> Result<Script, ScriptError> {
    let mut sc = Scanner::new(src);
    let mut stmts = Vec::new();
    let mut current: Option<String> = None;
    loop {
        sc.skip_trivia();
        if sc.peek().is_none() {
            break;
        }
        let s = stmt(&mut sc, &current)?;
        if let StmtKind::Ring(r) = &s.kind {
            current = Some(r.name.clone());
        }
        stmts.push(s);
    }
    let script = Script { stmts };
    check(&script, None)?;
    Ok(script)
}

/// Environment after evaluating bindings: rings by name, and bindings with
/// their rings.
pub struct Checked {
    pub rings: HashMap<String, RingRef>,
}

/// Semantic checks; `field` overrides the declared fields.
pub fn check(script: &Script, field: Option<&FieldSpec>) -> Result<Checked, ScriptError> {
    let mut rings: HashMap<String, RingRef> = HashMap::new();
    let mut bound: HashMap<String, String> = HashMap::new();
    for s in &script.stmts {
        let err = |pos: Pos, m: String| ScriptError { line: pos.line, column: pos.column, message: m };
        match &s.kind {
            StmtKind::Ring(r) => {
                let ring = r.build(field).map_err(|e| err(s.pos, e.to_string()))?;
                rings.insert(r.name.clone(), ring);
            }
            StmtKind::Bind(b) => {
                let ring = rings.get(&b.ring).ok_or_else(|| err(s.pos, format!("unbound ring {}", b.ring)))?;
                let mut width = None;
                for item in &b.items {
                    let polys: Vec<&PolyText> = match item {
                        Item::Poly(p) => vec![p],
                        Item::Vector(v) => v.iter().collect(),
                    };
                    if let Some(w) = width {
                        if w != polys.len() {
                            return Err(err(polys[0].pos, "vectors of different lengths".into()));
                        }
                    }
                    width = Some(polys.len());
                    for p in polys {
                        parse_polynomial_at(ring, &p.text, p.pos.line, p.pos.column).map_err(|e| match e {
                            regulus::Error::Parse { line, column, message } => ScriptError { line, column, message },
                            other => err(p.pos, other.to_string()),
                        })?;
                    }
                }
                bound.insert(b.name.clone(), b.ring.clone());
            }
            StmtKind::Command(c) => {
                let Some(ring) = bound.get(&c.target) else {
                    return Err(err(s.pos, format!("unbound identifier {}", c.target)));
                };
                for (k, v) in &c.options {
                    if let OptValue::Ident(id) = v {
                        if k == "mode" {
                            continue;
                        }
                        match bound.get(id) {
                            None => return Err(err(s.pos, format!("unbound identifier {id}"))),
                            Some(r) if r != ring => {
                                return Err(err(s.pos, format!("ring mismatch: {id} lives in {r}, {} in {ring}", c.target)))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    Ok(Checked { rings })
}
