//! Clause generation for simplified models.

mod dimacs;
mod varmap;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Range;

pub use dimacs::{read_dimacs, write_dimacs};
pub use varmap::{MapEntry, Value, VarMap};

use crate::cardinality::{adder_clauses, comparator_clauses};
use crate::constraint::{Constraint, Rel};
use crate::error::{Error, Result};
use crate::int::UnaryInt;
use crate::lit::{Lit, Var};
use crate::model::Model;

#[derive(Debug, Clone, Default)]
pub struct EncodeOptions {
    /// Emit parity constraints as extended-DIMACS `x` lines.
    pub xor_lines: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub tag: String,
    pub slot: Option<usize>,
    pub clauses: Range<usize>,
    pub xors: Range<usize>,
}

/// A clause database over dense DIMACS ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfDoc {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// Parity constraints: an odd number of the literals hold.
    pub xors: Vec<Vec<i32>>,
    pub provenance: Vec<Provenance>,
    pub unsat: bool,
    /// Model variable behind each DIMACS id (index `id - 1`); `None` for
    /// encoder auxiliaries.
    pub origin: Vec<Option<Var>>,
}

impl CnfDoc {
    pub fn unsat() -> CnfDoc {
        CnfDoc {
            unsat: true,
            ..CnfDoc::default()
        }
    }

    pub fn num_clauses(&self) -> usize {
        if self.unsat {
            1
        } else {
            self.clauses.len()
        }
    }

    /// Clause counts per provenance tag.
    pub fn clauses_by_tag(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for p in &self.provenance {
            *out.entry(p.tag.clone()).or_insert(0) += p.clauses.len();
        }
        out
    }

    /// DIMACS id of a model variable, if it occurs.
    pub fn id_of(&self, v: Var) -> Option<i32> {
        self.origin
            .iter()
            .position(|&o| o == Some(v))
            .map(|p| p as i32 + 1)
    }
}

/// Accumulates clauses over model literals and local auxiliaries.
pub struct Encoder<'a> {
    m: &'a Model,
    opts: EncodeOptions,
    next_aux: Var,
    clauses: Vec<Vec<Lit>>,
    xors: Vec<Vec<Lit>>,
    seen: HashSet<Vec<Lit>>,
    provenance: Vec<Provenance>,
    unsat: bool,
}

impl<'a> Encoder<'a> {
    pub fn new(m: &'a Model, opts: EncodeOptions) -> Encoder<'a> {
        Encoder {
            m,
            opts,
            next_aux: m.num_vars(),
            clauses: Vec::new(),
            xors: Vec::new(),
            seen: HashSet::new(),
            provenance: Vec::new(),
            unsat: m.is_unsat(),
        }
    }

    fn resolve(&self, l: Lit) -> Lit {
        match l.var() {
            Some(v) if v > self.m.num_vars() => l,
            _ => self.m.resolve(l),
        }
    }

    fn aux(&mut self) -> Lit {
        self.next_aux += 1;
        Lit::pos(self.next_aux)
    }

    pub fn clause(&mut self, lits: &[Lit]) {
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            let l = self.resolve(l);
            if l.is_true() || out.contains(&!l) {
                return;
            }
            if !l.is_false() && !out.contains(&l) {
                out.push(l);
            }
        }
        if out.is_empty() {
            self.unsat = true;
            return;
        }
        let mut key = out.clone();
        key.sort();
        if self.seen.insert(key) {
            self.clauses.push(out);
        }
    }

    fn xor(&mut self, lits: &[Lit]) {
        let mut parity = true;
        let mut vars: Vec<Lit> = Vec::new();
        for &l in lits {
            let l = self.resolve(l);
            if let Some(b) = l.const_value() {
                parity ^= b;
                continue;
            }
            let v = if l.is_negated() { !l } else { l };
            parity ^= l.is_negated();
            match vars.iter().position(|&x| x == v) {
                Some(p) => {
                    vars.remove(p);
                }
                None => vars.push(v),
            }
        }
        if !parity && !vars.is_empty() {
            vars[0] = !vars[0];
        }
        match vars.len() {
            0 => {
                if parity {
                    self.unsat = true;
                }
            }
            1 | 2 => self.xor_clauses(&vars),
            _ if self.opts.xor_lines => self.xors.push(vars),
            _ => {
                // chain t_1 = x_1 ^ x_2, t_i = t_{i-1} ^ x_{i+1}, last one true
                let mut acc = vars[0];
                for (i, &x) in vars.iter().enumerate().skip(1) {
                    if i + 1 == vars.len() {
                        self.xor_clauses(&[acc, x]);
                    } else {
                        let t = self.aux();
                        self.clause(&[!acc, !x, !t]);
                        self.clause(&[acc, x, !t]);
                        self.clause(&[!acc, x, t]);
                        self.clause(&[acc, !x, t]);
                        acc = t;
                    }
                }
            }
        }
    }

    /// Direct clauses for a parity constraint over at most two literals.
    fn xor_clauses(&mut self, xs: &[Lit]) {
        match xs {
            [x] => self.clause(&[*x]),
            [x, y] => {
                self.clause(&[*x, *y]);
                self.clause(&[!*x, !*y]);
            }
            _ => unreachable!(),
        }
    }

    fn begin(&self) -> (usize, usize) {
        (self.clauses.len(), self.xors.len())
    }

    fn record(&mut self, tag: &str, slot: Option<usize>, start: (usize, usize)) {
        self.provenance.push(Provenance {
            tag: tag.to_string(),
            slot,
            clauses: start.0..self.clauses.len(),
            xors: start.1..self.xors.len(),
        });
    }

    /// Monotonicity clauses `x >= t+1 -> x >= t`.
    pub fn monotonicity(&mut self, x: &UnaryInt) {
        let start = self.begin();
        for j in 1..x.width() as i64 {
            self.clause(&[!x.bit(j + 1), x.bit(j)]);
        }
        self.record("monotonicity", None, start);
    }

    pub fn constraint(&mut self, c: &Constraint, slot: Option<usize>) -> Result<()> {
        let start = self.begin();
        self.emit(c)?;
        self.record(c.stat_tag(), slot, start);
        Ok(())
    }

    fn emit(&mut self, c: &Constraint) -> Result<()> {
        use Constraint::*;
        match c {
            BoolEq(a, b) => {
                self.clause(&[!*a, *b]);
                self.clause(&[*a, !*b]);
            }
            Clause(xs) => self.clause(xs),
            And(xs) => {
                for &x in xs {
                    self.clause(&[x]);
                }
            }
            Xor(xs) => self.xor(xs),
            OrReif { xs, r } => {
                let mut big = vec![!*r];
                big.extend_from_slice(xs);
                self.clause(&big);
                for &x in xs {
                    self.clause(&[!x, *r]);
                }
            }
            Comparator { a, b, hi, lo } => {
                let mut out = Vec::new();
                comparator_clauses(*a, *b, *hi, *lo, false, &mut |cl| out.push(cl.to_vec()));
                for cl in out {
                    self.clause(&cl);
                }
            }
            Majority { x, y, z, r } => {
                let (x, y, z, r) = (*x, *y, *z, *r);
                for (p, q) in [(x, y), (x, z), (y, z)] {
                    self.clause(&[!p, !q, r]);
                    self.clause(&[p, q, !r]);
                }
            }
            IntRel { rel, a, b } => self.int_rel(*rel, a, b)?,
            IntRelReif {
                rel: Rel::Leq,
                a,
                b,
                r,
            } => {
                let (lo, hi) = span(&[a, b]);
                for t in lo..=hi + 1 {
                    self.clause(&[!*r, !a.geq(t), b.geq(t)]);
                    self.clause(&[*r, !b.geq(t), a.geq(t + 1)]);
                }
            }
            Plus { a, b, c } => {
                let (a, b, c) = (self.trim(a), self.trim(b), self.trim(c));
                let mut out = Vec::new();
                adder_clauses(&a, &b, &c, &mut |cl| out.push(cl.to_vec()));
                for cl in out {
                    self.clause(&cl);
                }
            }
            Times { a, b, c } => self.times(a, b, c),
            ModConst { x, k, r } => {
                let x = self.trim(x);
                for v in x.lo()..=x.hi() {
                    let q = v.rem_euclid(*k);
                    let (ge, lt) = x.eq_pair(v);
                    self.clause(&[!ge, !lt, r.geq(q)]);
                    self.clause(&[!ge, !lt, !r.geq(q + 1)]);
                }
            }
            other => {
                return Err(Error::Unsupported(format!(
                    "{} reached the encoder undecomposed",
                    other.tag()
                )))
            }
        }
        Ok(())
    }

    fn trim(&self, x: &UnaryInt) -> UnaryInt {
        UnaryInt::new(x.offset, x.bits.iter().map(|&b| self.resolve(b)).collect()).trimmed()
    }

    fn int_rel(&mut self, rel: Rel, a: &UnaryInt, b: &UnaryInt) -> Result<()> {
        let (lo, hi) = span(&[a, b]);
        match rel {
            Rel::Leq => {
                for t in lo..=hi + 1 {
                    self.clause(&[!a.geq(t), b.geq(t)]);
                }
            }
            Rel::Lt => return self.int_rel(Rel::Leq, &a.shifted(1), b),
            Rel::Geq => return self.int_rel(Rel::Leq, b, a),
            Rel::Gt => return self.int_rel(Rel::Leq, &b.shifted(1), a),
            Rel::Eq => {
                for t in lo..=hi + 1 {
                    self.clause(&[!a.geq(t), b.geq(t)]);
                    self.clause(&[a.geq(t), !b.geq(t)]);
                }
            }
            Rel::Neq => {
                for v in lo..=hi {
                    let (a1, a2) = a.eq_pair(v);
                    let (b1, b2) = b.eq_pair(v);
                    self.clause(&[!a1, !a2, !b1, !b2]);
                }
            }
        }
        Ok(())
    }

    /// Value-guarded scaling: for each value `v` of the narrower factor,
    /// `(factor = v) -> c = v * other`.
    fn times(&mut self, a: &UnaryInt, b: &UnaryInt, c: &UnaryInt) {
        let (a, b) = (self.trim(a), self.trim(b));
        let (g, o) = if a.width() <= b.width() { (a, b) } else { (b, a) };
        for v in g.lo()..=g.hi() {
            let (ge, lt) = g.eq_pair(v);
            let s = o.scaled(v);
            let (lo, hi) = span(&[c, &s]);
            for t in lo..=hi + 1 {
                self.clause(&[!ge, !lt, !c.geq(t), s.geq(t)]);
                self.clause(&[!ge, !lt, c.geq(t), !s.geq(t)]);
            }
        }
    }

    /// Renumbers densely: `first` variables keep their order at the front,
    /// the rest follow in order of first appearance.
    pub fn finish(self, first: &[Var]) -> CnfDoc {
        if self.unsat {
            return CnfDoc::unsat();
        }
        let mut ids: HashMap<Var, i32> = HashMap::new();
        let mut origin = Vec::new();
        let base = self.m.num_vars();
        let mut number = |v: Var, ids: &mut HashMap<Var, i32>| -> i32 {
            *ids.entry(v).or_insert_with(|| {
                origin.push((v <= base).then_some(v));
                origin.len() as i32
            })
        };
        for &v in first {
            number(v, &mut ids);
        }
        let mut map = |cl: &Vec<Lit>, ids: &mut HashMap<Var, i32>| -> Vec<i32> {
            cl.iter()
                .map(|l| {
                    let id = number(l.var().unwrap(), ids);
                    if l.is_negated() {
                        -id
                    } else {
                        id
                    }
                })
                .collect()
        };
        let clauses: Vec<Vec<i32>> = self.clauses.iter().map(|c| map(c, &mut ids)).collect();
        let xors: Vec<Vec<i32>> = self.xors.iter().map(|c| map(c, &mut ids)).collect();
        CnfDoc {
            num_vars: ids.len() as u32,
            clauses,
            xors,
            provenance: self.provenance,
            unsat: false,
            origin,
        }
    }
}

/// Smallest and largest syntactic bound over the integers.
fn span(xs: &[&UnaryInt]) -> (i64, i64) {
    let lo = xs.iter().map(|x| x.lo()).min().unwrap();
    let hi = xs.iter().map(|x| x.hi()).max().unwrap();
    (lo, hi)
}

/// Variables behind the declared identifiers, in declaration order.
pub fn declared_vars(m: &Model) -> Vec<Var> {
    use crate::model::Entity;
    let mut out = Vec::new();
    for (_, e) in &m.decls {
        let lits: Vec<Lit> = match e {
            Entity::Bool(l) => vec![*l],
            Entity::Int(x) => x.bits.clone(),
            Entity::Binary(x) => x.bits.clone(),
        };
        out.extend(lits.into_iter().filter_map(|l| m.resolve(l).var()));
    }
    out
}

/// Encodes every live constraint plus monotonicity of registered integers.
pub fn encode(m: &Model, opts: &EncodeOptions) -> Result<CnfDoc> {
    let mut e = Encoder::new(m, opts.clone());
    if !e.unsat {
        for x in m.registered() {
            e.monotonicity(x);
        }
        for (i, c) in m.live() {
            e.constraint(c, Some(i))?;
        }
    }
    Ok(e.finish(&declared_vars(m)))
}

/// Every tag ever posted to the model mapped to the clauses it owns in `doc`.
pub fn clause_stats(m: &Model, doc: &CnfDoc) -> BTreeMap<String, usize> {
    let mut out: BTreeMap<String, usize> = m.slots.iter().map(|s| (s.tag.to_string(), 0)).collect();
    for (k, v) in doc.clauses_by_tag() {
        *out.entry(k).or_insert(0) += v;
    }
    out
}
