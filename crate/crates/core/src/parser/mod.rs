//! The textual model format: one constraint term per line.
//!
//! ```text
//! % comment
//! new_int(a, 0, 5)
//! new_bool(x)
//! bool_array_or([x, -y]).
//! bool_eq(p, q)@sym
//! ```

mod lower;

use std::collections::HashMap;
use std::fmt;

pub use lower::lower;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgKind {
    /// An identifier, possibly negated with a leading `-`.
    Ident { name: String, neg: bool },
    Int(i64),
    Bool(bool),
    List(Vec<Arg>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg {
    pub kind: ArgKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub name: String,
    pub args: Vec<Arg>,
    /// Constraint group, written `@label` after the term.
    pub label: Option<String>,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decl {
    Bool,
    Int,
    Binary,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceModel {
    pub terms: Vec<Term>,
    pub symbols: HashMap<String, Decl>,
}

/// Argument shapes of the templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Name being declared.
    New,
    Const,
    Consts,
    Bool,
    Bools,
    Int,
    Ints,
    Bin,
    Bins,
}

const OPS: [&str; 4] = ["or", "and", "xor", "iff"];
const RELS: [&str; 6] = ["leq", "geq", "eq", "lt", "gt", "neq"];
const LIN_RELS: [&str; 5] = ["leq", "geq", "eq", "lt", "gt"];

/// Signature of a template, `None` for unknown names.
pub fn signature(name: &str) -> Option<&'static [Kind]> {
    use Kind::*;
    let sig: &'static [Kind] = match name {
        "new_bool" => &[New],
        "new_int" => &[New, Const, Const],
        "new_binary" => &[New, Const],
        "bool2int" => &[Bool, Int],
        "bool_eq" => &[Bool, Bool],
        "comparator" => &[Bool, Bool, Bool, Bool],
        "int_array_allDiff" => &[Ints],
        "int_abs" => &[Int, Int],
        "bool_array_sum_modK" => &[Bools, Const, Int],
        "int_array_sum_modK" => &[Ints, Const, Int],
        "bool_arrays_lex" | "bool_arrays_lexLt" => &[Bools, Bools],
        "bool_arrays_lex_reif" | "bool_arrays_lexLt_reif" => &[Bools, Bools, Bool],
        "int_arrays_lex" | "int_arrays_lexLt" => &[Ints, Ints],
        "binary_array_sum_eq" => &[Bins, Bin],
        "binary_times" => &[Bin, Bin, Bin],
        "binary_square" => &[Bin, Bin],
        "int2binary" => &[Int, Bin],
        _ => return dynamic_signature(name),
    };
    Some(sig)
}

fn dynamic_signature(name: &str) -> Option<&'static [Kind]> {
    use Kind::*;
    if let Some(rest) = name.strip_prefix("bool_array_") {
        if let Some(op) = rest.strip_suffix("_reif") {
            return OPS.contains(&op).then_some(&[Bools, Bool]);
        }
        if OPS.contains(&rest) {
            return Some(&[Bools]);
        }
        if let Some(rel) = rest.strip_prefix("sum_") {
            return LIN_RELS.contains(&rel).then_some(&[Bools, Int]);
        }
        if let Some(rel) = rest.strip_prefix("pb_") {
            return LIN_RELS.contains(&rel).then_some(&[Consts, Bools, Int]);
        }
        return None;
    }
    if let Some(rest) = name.strip_prefix("bool_") {
        let op = rest.strip_suffix("_reif")?;
        return OPS.contains(&op).then_some(&[Bool, Bool, Bool]);
    }
    if let Some(rest) = name.strip_prefix("int_array_") {
        if let Some(rel) = rest.strip_prefix("sum_") {
            return LIN_RELS.contains(&rel).then_some(&[Ints, Int]);
        }
        if let Some(rel) = rest.strip_prefix("lin_") {
            return LIN_RELS.contains(&rel).then_some(&[Consts, Ints, Int]);
        }
        return ["plus", "times", "max", "min"].contains(&rest).then_some(&[Ints, Int]);
    }
    if let Some(rest) = name.strip_prefix("int_") {
        if let Some(rel) = rest.strip_suffix("_reif") {
            return RELS.contains(&rel).then_some(&[Int, Int, Bool]);
        }
        if RELS.contains(&rest) {
            return Some(&[Int, Int]);
        }
        return ["plus", "times", "div", "mod", "max", "min"]
            .contains(&rest)
            .then_some(&[Int, Int, Int]);
    }
    None
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips spaces and comments; newlines too when `newlines`.
    fn skip(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            if c == '%' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c == '\n' && !newlines {
                return;
            } else if c.is_whitespace() {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip(true);
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected `{want}`, found `{c}`")),
            None => self.err(format!("expected `{want}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        let mut s = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            Some(c) => return self.err(format!("expected identifier, found `{c}`")),
            None => return self.err("expected identifier, found end of input"),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip(true);
        let (line, col) = (self.line, self.col);
        let kind = match self.peek() {
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                self.skip(true);
                if self.peek() == Some(']') {
                    self.bump();
                } else {
                    loop {
                        items.push(self.arg()?);
                        self.skip(true);
                        match self.bump() {
                            Some(',') => continue,
                            Some(']') => break,
                            Some(c) => {
                                return Err(Error::Parse {
                                    line: self.line,
                                    col: self.col - 1,
                                    msg: format!("expected `,` or `]`, found `{c}`"),
                                })
                            }
                            None => return self.err("unterminated list"),
                        }
                    }
                }
                ArgKind::List(items)
            }
            Some(c) if c == '-' || c.is_ascii_digit() => {
                let neg = c == '-';
                if neg {
                    self.bump();
                }
                match self.peek() {
                    Some(d) if d.is_ascii_digit() => {
                        let mut s = String::new();
                        while let Some(d) = self.peek().filter(|d| d.is_ascii_digit()) {
                            s.push(d);
                            self.bump();
                        }
                        let v: i64 = match s.parse() {
                            Ok(v) => v,
                            Err(_) => return self.err(format!("integer `{s}` out of range")),
                        };
                        ArgKind::Int(if neg { -v } else { v })
                    }
                    _ if neg => {
                        let name = self.ident()?;
                        if name == "true" || name == "false" {
                            ArgKind::Bool(name == "false")
                        } else {
                            ArgKind::Ident { name, neg: true }
                        }
                    }
                    _ => unreachable!(),
                }
            }
            Some(_) => {
                let name = self.ident()?;
                match name.as_str() {
                    "true" => ArgKind::Bool(true),
                    "false" => ArgKind::Bool(false),
                    _ => ArgKind::Ident { name, neg: false },
                }
            }
            None => return self.err("expected argument, found end of input"),
        };
        Ok(Arg { kind, line, col })
    }

    fn term(&mut self) -> Result<Term> {
        let (line, col) = (self.line, self.col);
        let name = self.ident()?;
        self.expect('(')?;
        let mut args = Vec::new();
        self.skip(true);
        if self.peek() == Some(')') {
            self.bump();
        } else {
            loop {
                args.push(self.arg()?);
                self.skip(true);
                match self.bump() {
                    Some(',') => continue,
                    Some(')') => break,
                    Some(c) => {
                        return Err(Error::Parse {
                            line: self.line,
                            col: self.col - 1,
                            msg: format!("expected `,` or `)`, found `{c}`"),
                        })
                    }
                    None => return self.err("unterminated term"),
                }
            }
        }
        self.skip(false);
        let mut label = None;
        if self.peek() == Some('@') {
            self.bump();
            label = Some(self.ident()?);
            self.skip(false);
        }
        if self.peek() == Some('.') {
            self.bump();
            self.skip(false);
        }
        match self.peek() {
            None | Some('\n') => {}
            Some(c) => return self.err(format!("expected end of line, found `{c}`")),
        }
        Ok(Term {
            name,
            args,
            label,
            line,
            col,
        })
    }
}

fn err_at<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        col,
        msg: msg.into(),
    })
}

/// Parses and checks template names, arities and identifier scope.
pub fn parse_model(text: &str) -> Result<SourceModel> {
    let mut lx = Lexer::new(text);
    let mut src = SourceModel::default();
    loop {
        lx.skip(true);
        if lx.peek().is_none() {
            break;
        }
        let t = lx.term()?;
        check_term(&t, &mut src.symbols)?;
        src.terms.push(t);
    }
    Ok(src)
}

fn check_term(t: &Term, symbols: &mut HashMap<String, Decl>) -> Result<()> {
    let Some(sig) = signature(&t.name) else {
        return err_at(t.line, t.col, format!("unknown constraint `{}`", t.name));
    };
    if sig.len() != t.args.len() {
        return err_at(
            t.line,
            t.col,
            format!("`{}` takes {} arguments, got {}", t.name, sig.len(), t.args.len()),
        );
    }
    for (a, k) in t.args.iter().zip(sig) {
        if *k == Kind::New {
            continue;
        }
        check_scope(a, symbols)?;
    }
    if sig[0] == Kind::New {
        let a = &t.args[0];
        let ArgKind::Ident { name, neg: false } = &a.kind else {
            return err_at(a.line, a.col, "expected a new identifier");
        };
        if symbols.contains_key(name) {
            return err_at(a.line, a.col, format!("`{name}` is already declared"));
        }
        let d = match t.name.as_str() {
            "new_bool" => Decl::Bool,
            "new_int" => Decl::Int,
            _ => Decl::Binary,
        };
        symbols.insert(name.clone(), d);
    }
    Ok(())
}

fn check_scope(a: &Arg, symbols: &HashMap<String, Decl>) -> Result<()> {
    match &a.kind {
        ArgKind::Ident { name, .. } if !symbols.contains_key(name) => {
            err_at(a.line, a.col, format!("`{name}` is not declared"))
        }
        ArgKind::List(xs) => xs.iter().try_for_each(|x| check_scope(x, symbols)),
        _ => Ok(()),
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ArgKind::Ident { name, neg } => write!(f, "{}{name}", if *neg { "-" } else { "" }),
            ArgKind::Int(v) => write!(f, "{v}"),
            ArgKind::Bool(b) => write!(f, "{b}"),
            ArgKind::List(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")?;
        if let Some(l) = &self.label {
            write!(f, "@{l}")?;
        }
        Ok(())
    }
}

/// Canonical text: one term per line, no trailing period.
pub fn print_model(src: &SourceModel) -> String {
    let mut out = String::new();
    for t in &src.terms {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}
