use std::io::{self, Write};

use super::CnfDoc;
use crate::error::{Error, Result};

/// Writes DIMACS CNF. Parity constraints become `x` lines and count toward
/// the header's clause total.
pub fn write_dimacs(doc: &CnfDoc, w: &mut dyn Write, annotate: bool) -> io::Result<()> {
    if doc.unsat {
        writeln!(w, "p cnf 0 1")?;
        return writeln!(w, "0");
    }
    if annotate {
        for p in &doc.provenance {
            if p.clauses.is_empty() && p.xors.is_empty() {
                continue;
            }
            let slot = p.slot.map_or("-".to_string(), |s| s.to_string());
            write!(w, "c {} slot {} clauses {}..{}", p.tag, slot, p.clauses.start + 1, p.clauses.end)?;
            if !p.xors.is_empty() {
                write!(w, " xors {}..{}", p.xors.start + 1, p.xors.end)?;
            }
            writeln!(w)?;
        }
    }
    writeln!(w, "p cnf {} {}", doc.num_vars, doc.clauses.len() + doc.xors.len())?;
    let mut line = String::new();
    for (prefix, list) in [("", &doc.clauses), ("x", &doc.xors)] {
        for c in list.iter() {
            line.clear();
            line.push_str(prefix);
            for l in c {
                line.push_str(&l.to_string());
                line.push(' ');
            }
            line.push('0');
            writeln!(w, "{line}")?;
        }
    }
    Ok(())
}

/// Reads DIMACS CNF, including `x` lines. Clauses may span lines.
pub fn read_dimacs(text: &str) -> Result<CnfDoc> {
    let mut doc = CnfDoc::default();
    let mut header: Option<(u32, usize)> = None;
    let mut cur: Vec<i32> = Vec::new();
    let mut cur_xor = false;
    let err = |line: usize, msg: String| Error::Dimacs { line, msg };
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let mut s = raw.trim();
        if s.is_empty() || s.starts_with('c') || s.starts_with('%') {
            continue;
        }
        if s.starts_with('p') {
            let parts: Vec<&str> = s.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(no, format!("bad header `{s}`")));
            }
            let n = parts[2].parse().map_err(|_| err(no, "bad variable count".into()))?;
            let m = parts[3].parse().map_err(|_| err(no, "bad clause count".into()))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(no, "clause before header".into()));
        };
        if let Some(rest) = s.strip_prefix('x') {
            if !cur.is_empty() {
                return Err(err(no, "xor line inside a clause".into()));
            }
            cur_xor = true;
            s = rest;
        }
        for tok in s.split_whitespace() {
            let v: i32 = tok
                .parse()
                .map_err(|_| err(no, format!("bad literal `{tok}`")))?;
            if v == 0 {
                let c = std::mem::take(&mut cur);
                if cur_xor {
                    doc.xors.push(c);
                } else {
                    if c.is_empty() {
                        doc.unsat = true;
                    }
                    doc.clauses.push(c);
                }
                cur_xor = false;
            } else {
                if v.unsigned_abs() > n {
                    return Err(err(no, format!("literal {v} exceeds {n} variables")));
                }
                cur.push(v);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(err(0, "missing header".into()));
    };
    if !cur.is_empty() {
        return Err(err(text.lines().count(), "unterminated clause".into()));
    }
    if doc.clauses.len() + doc.xors.len() != m {
        return Err(err(0, format!("header says {m} clauses, found {}", doc.clauses.len() + doc.xors.len())));
    }
    doc.num_vars = n;
    doc.origin = (1..=n).map(Some).collect();
    Ok(doc)
}
