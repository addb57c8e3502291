use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};

use super::CnfDoc;
use crate::error::{Error, Result};
use crate::int::UnaryInt;
use crate::lit::{Lit, Var};
use crate::model::{Entity, Model};

/// Where a source identifier lives in the CNF. Literals use DIMACS ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapEntry {
    Bool(Lit),
    Int { lo: i64, hi: i64, bits: Vec<Lit> },
    Binary(Vec<Lit>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Binary(u64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Binary(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarMap {
    pub entries: Vec<(String, MapEntry)>,
}

fn lit_token(l: Lit) -> String {
    match l.const_value() {
        Some(true) => "T".into(),
        Some(false) => "F".into(),
        None => l.code().to_string(),
    }
}

fn parse_lit(tok: &str) -> Option<Lit> {
    match tok {
        "T" => Some(Lit::TRUE),
        "F" => Some(Lit::FALSE),
        _ => tok.parse::<i32>().ok().filter(|&v| v != 0).map(Lit::from_dimacs),
    }
}

impl VarMap {
    pub fn build(m: &Model, doc: &CnfDoc) -> VarMap {
        let ids: HashMap<Var, i32> = doc
            .origin
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.map(|v| (v, i as i32 + 1)))
            .collect();
        let map = |l: Lit| -> Lit {
            let r = m.resolve(l);
            match r.var() {
                None => r,
                Some(v) => match ids.get(&v) {
                    Some(&id) => Lit::new(id as Var, r.is_negated()),
                    None => Lit::FALSE,
                },
            }
        };
        let entries = m
            .decls
            .iter()
            .map(|(name, e)| {
                let entry = match e {
                    Entity::Bool(l) => MapEntry::Bool(map(*l)),
                    Entity::Int(x) => MapEntry::Int {
                        lo: x.lo(),
                        hi: x.hi(),
                        bits: x.bits.iter().map(|&b| map(b)).collect(),
                    },
                    Entity::Binary(x) => MapEntry::Binary(x.bits.iter().map(|&b| map(b)).collect()),
                };
                (name.clone(), entry)
            })
            .collect();
        VarMap { entries }
    }

    pub fn write(&self, w: &mut dyn Write) -> io::Result<()> {
        let mut owned: HashSet<Var> = HashSet::new();
        for (name, e) in &self.entries {
            match e {
                MapEntry::Bool(l) => match l.const_value() {
                    Some(b) => writeln!(w, "bool {name} const {}", b as u8)?,
                    None => {
                        let fresh = owned.insert(l.var().unwrap());
                        if fresh && !l.is_negated() {
                            writeln!(w, "bool {name} var {}", l.code())?
                        } else {
                            writeln!(w, "bool {name} alias {}", l.code())?
                        }
                    }
                },
                MapEntry::Int { lo, hi, bits } => {
                    owned.extend(bits.iter().filter_map(|b| b.var()));
                    let x = UnaryInt::new(*lo, bits.clone());
                    match x.fixed_value() {
                        Some(v) => writeln!(w, "int {name} {lo} {hi} const {v}")?,
                        None => {
                            let toks: Vec<String> = bits.iter().map(|&b| lit_token(b)).collect();
                            writeln!(w, "int {name} {lo} {hi} bits {}", toks.join(" "))?
                        }
                    }
                }
                MapEntry::Binary(bits) => {
                    owned.extend(bits.iter().filter_map(|b| b.var()));
                    let toks: Vec<String> = bits.iter().map(|&b| lit_token(b)).collect();
                    writeln!(w, "binary {name} {} bits {}", bits.len(), toks.join(" "))?
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        self.write(&mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    pub fn parse(text: &str) -> Result<VarMap> {
        let mut entries = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let bad = || Error::Dimacs {
                line: no + 1,
                msg: format!("bad varmap line `{line}`"),
            };
            let lits = |ts: &[&str]| -> Result<Vec<Lit>> { ts.iter().map(|t| parse_lit(t).ok_or_else(bad)).collect() };
            let num = |t: &str| -> Result<i64> { t.parse().map_err(|_| bad()) };
            let entry = match (toks[0], toks.len()) {
                ("bool", 4) => {
                    let l = match toks[2] {
                        "const" => Lit::constant(num(toks[3])? != 0),
                        "var" | "alias" => parse_lit(toks[3]).ok_or_else(bad)?,
                        _ => return Err(bad()),
                    };
                    MapEntry::Bool(l)
                }
                ("int", n) if n >= 5 => {
                    let (lo, hi) = (num(toks[2])?, num(toks[3])?);
                    let bits = match toks[4] {
                        "const" if n == 6 => {
                            let v = num(toks[5])?;
                            (lo + 1..=hi).map(|t| Lit::constant(v >= t)).collect()
                        }
                        "bits" => lits(&toks[5..])?,
                        _ => return Err(bad()),
                    };
                    MapEntry::Int { lo, hi, bits }
                }
                ("binary", n) if n >= 4 && toks[3] == "bits" => MapEntry::Binary(lits(&toks[4..])?),
                _ => return Err(bad()),
            };
            entries.push((toks[1].to_string(), entry));
        }
        Ok(VarMap { entries })
    }

    /// Decodes every identifier. `assignment[i]` is the value of DIMACS id `i + 1`.
    pub fn decode(&self, assignment: &[bool]) -> Vec<(String, Value)> {
        let val = |l: Lit| -> bool {
            match l.const_value() {
                Some(b) => b,
                None => {
                    let v = assignment.get(l.var().unwrap() as usize - 1).copied().unwrap_or(false);
                    v != l.is_negated()
                }
            }
        };
        self.entries
            .iter()
            .map(|(name, e)| {
                let v = match e {
                    MapEntry::Bool(l) => Value::Bool(val(*l)),
                    MapEntry::Int { lo, bits, .. } => Value::Int(UnaryInt::new(*lo, bits.clone()).decode(val)),
                    MapEntry::Binary(bits) => Value::Binary(crate::int::BinaryInt::new(bits.clone()).decode(val)),
                };
                (name.clone(), v)
            })
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&MapEntry> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}
