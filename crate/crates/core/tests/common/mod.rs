//! Shared oracles: projected model enumeration, a direct evaluator of the
//! constraint templates and a random instance generator.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use unarysat_core::cardinality::Strategy;
use unarysat_core::compile::{compile_text, CompileOptions, Compiled};
use unarysat_core::encode::MapEntry;
use unarysat_core::parser::{parse_model, ArgKind, Arg};
use unarysat_core::sat::{load, CdclSolver, SatBackend, SolveResult, SolverConfig};
use unarysat_core::{CnfDoc, Lit};

/// Every assignment to `ids` that extends to a model of `doc`.
pub fn projected_models(doc: &CnfDoc, ids: &[u32]) -> Vec<Vec<bool>> {
    let mut s = CdclSolver::new(SolverConfig::default());
    load(&mut s, doc).unwrap();
    let mut out = Vec::new();
    while s.solve().unwrap() == SolveResult::Sat {
        let model = s.model().unwrap();
        let proj: Vec<bool> = ids.iter().map(|&v| model[v as usize - 1]).collect();
        if ids.is_empty() {
            out.push(proj);
            break;
        }
        let block: Vec<i32> = ids
            .iter()
            .zip(&proj)
            .map(|(&v, &b)| if b { -(v as i32) } else { v as i32 })
            .collect();
        out.push(proj);
        s.add_clause(&block).unwrap();
    }
    out
}

/// Value tuples (declaration order, Booleans as 0/1) of all CNF models.
/// Fails if a projected model is not the canonical encoding of its values.
pub fn cnf_solutions(c: &Compiled) -> Result<BTreeSet<Vec<i64>>, String> {
    let mut ids: Vec<u32> = Vec::new();
    let lits = |e: &MapEntry| -> Vec<Lit> {
        match e {
            MapEntry::Bool(l) => vec![*l],
            MapEntry::Int { bits, .. } => bits.clone(),
            MapEntry::Binary(bits) => bits.clone(),
        }
    };
    for (_, e) in &c.varmap.entries {
        for l in lits(e) {
            if let Some(v) = l.var() {
                if !ids.contains(&v) {
                    ids.push(v);
                }
            }
        }
    }
    let models = projected_models(&c.doc, &ids);
    let mut out = BTreeSet::new();
    for pm in &models {
        let val = |l: Lit| match l.const_value() {
            Some(b) => b,
            None => pm[ids.iter().position(|&v| v == l.var().unwrap()).unwrap()] != l.is_negated(),
        };
        let mut tuple = Vec::new();
        for (name, e) in &c.varmap.entries {
            let v = match e {
                MapEntry::Bool(l) => val(*l) as i64,
                MapEntry::Int { lo, bits, .. } => {
                    let bs: Vec<bool> = bits.iter().map(|&l| val(l)).collect();
                    let k = bs.iter().take_while(|&&b| b).count();
                    if bs[k..].iter().any(|&b| b) {
                        return Err(format!("`{name}` has non-monotone bits {bs:?}"));
                    }
                    lo + k as i64
                }
                MapEntry::Binary(bits) => bits.iter().enumerate().map(|(i, &l)| (val(l) as i64) << i).sum(),
            };
            tuple.push(v);
        }
        if !out.insert(tuple.clone()) {
            return Err(format!("two projected models decode to {tuple:?}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    pub boolean: bool,
}

/// Values of identifiers, by declaration index.
pub struct Env<'a> {
    pub decls: &'a [Decl],
    pub vals: &'a [i64],
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> i64 {
        let i = self.decls.iter().position(|d| d.name == name).unwrap();
        self.vals[i]
    }

    pub fn value(&self, a: &Arg) -> i64 {
        match &a.kind {
            ArgKind::Int(v) => *v,
            ArgKind::Bool(b) => *b as i64,
            ArgKind::Ident { name, neg } => {
                let v = self.lookup(name);
                if !neg {
                    v
                } else if self.decls.iter().any(|d| &d.name == name && d.boolean) {
                    1 - v
                } else {
                    -v
                }
            }
            ArgKind::List(_) => panic!("list where a scalar was expected"),
        }
    }

    pub fn values(&self, a: &Arg) -> Vec<i64> {
        match &a.kind {
            ArgKind::List(xs) => xs.iter().map(|x| self.value(x)).collect(),
            _ => panic!("scalar where a list was expected"),
        }
    }
}

fn rel(name: &str, a: i64, b: i64) -> bool {
    match name {
        "leq" => a <= b,
        "geq" => a >= b,
        "eq" => a == b,
        "lt" => a < b,
        "gt" => a > b,
        "neq" => a != b,
        _ => panic!("unknown relation {name}"),
    }
}

fn fold(op: &str, xs: &[i64]) -> bool {
    let bs: Vec<bool> = xs.iter().map(|&x| x == 1).collect();
    match op {
        "or" => bs.iter().any(|&b| b),
        "and" => bs.iter().all(|&b| b),
        "xor" => bs.iter().filter(|&&b| b).count() % 2 == 1,
        "iff" => match bs.split_first() {
            None => true,
            Some((&f, rest)) => rest.iter().fold(f, |acc, &b| acc == b),
        },
        _ => panic!("unknown operator {op}"),
    }
}

/// `a` before `b` lexicographically (`strict` for strictly before).
fn lex(a: &[i64], b: &[i64], strict: bool) -> bool {
    match a.cmp(b) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => !strict,
        std::cmp::Ordering::Greater => false,
    }
}

/// Direct reading of a template on values.
pub fn holds(name: &str, args: &[Arg], env: &Env) -> bool {
    let v = |i: usize| env.value(&args[i]);
    let vs = |i: usize| env.values(&args[i]);
    match name {
        "new_bool" | "new_int" => true,
        "bool2int" => v(0) == v(1),
        "bool_eq" => v(0) == v(1),
        "comparator" => v(2) == v(0).max(v(1)) && v(3) == v(0).min(v(1)),
        "int_array_allDiff" => {
            let xs = vs(0);
            xs.iter().collect::<BTreeSet<_>>().len() == xs.len()
        }
        "int_abs" => v(0).abs() == v(1),
        "bool_array_sum_modK" | "int_array_sum_modK" => vs(0).iter().sum::<i64>().rem_euclid(v(1)) == v(2),
        "bool_arrays_lex" => lex(&vs(0), &vs(1), false),
        "bool_arrays_lexLt" => lex(&vs(0), &vs(1), true),
        "bool_arrays_lex_reif" => lex(&vs(0), &vs(1), false) == (v(2) == 1),
        "bool_arrays_lexLt_reif" => lex(&vs(0), &vs(1), true) == (v(2) == 1),
        "int_arrays_lex" => lex(&vs(0), &vs(1), false),
        "int_arrays_lexLt" => lex(&vs(0), &vs(1), true),
        _ => holds_family(name, args, env),
    }
}

fn holds_family(name: &str, args: &[Arg], env: &Env) -> bool {
    let v = |i: usize| env.value(&args[i]);
    let vs = |i: usize| env.values(&args[i]);
    let dot = |cs: Vec<i64>, xs: Vec<i64>| cs.iter().zip(&xs).map(|(c, x)| c * x).sum::<i64>();
    if let Some(rest) = name.strip_prefix("bool_array_") {
        if let Some(r) = rest.strip_prefix("sum_") {
            return rel(r, vs(0).iter().sum(), v(1));
        }
        if let Some(r) = rest.strip_prefix("pb_") {
            return rel(r, dot(vs(0), vs(1)), v(2));
        }
        return match rest.strip_suffix("_reif") {
            Some(op) => fold(op, &vs(0)) == (v(1) == 1),
            None => fold(rest, &vs(0)),
        };
    }
    if let Some(rest) = name.strip_prefix("bool_") {
        let op = rest.strip_suffix("_reif").unwrap();
        return fold(op, &[v(0), v(1)]) == (v(2) == 1);
    }
    if let Some(rest) = name.strip_prefix("int_array_") {
        if let Some(r) = rest.strip_prefix("sum_") {
            return rel(r, vs(0).iter().sum(), v(1));
        }
        if let Some(r) = rest.strip_prefix("lin_") {
            return rel(r, dot(vs(0), vs(1)), v(2));
        }
        let xs = vs(0);
        let r = v(1);
        return match rest {
            "plus" => xs.iter().sum::<i64>() == r,
            "times" => xs.iter().product::<i64>() == r,
            "max" => xs.iter().max() == Some(&r),
            "min" => xs.iter().min() == Some(&r),
            _ => panic!("unknown template {name}"),
        };
    }
    let rest = name.strip_prefix("int_").unwrap();
    if let Some(r) = rest.strip_suffix("_reif") {
        return rel(r, v(0), v(1)) == (v(2) == 1);
    }
    if args.len() == 2 {
        return rel(rest, v(0), v(1));
    }
    let (a, b, c) = (v(0), v(1), v(2));
    match rest {
        "plus" => a + b == c,
        "times" => a * b == c,
        "div" => b > 0 && a.div_euclid(b) == c,
        "mod" => b > 0 && a.rem_euclid(b) == c,
        "max" => a.max(b) == c,
        "min" => a.min(b) == c,
        _ => panic!("unknown template {name}"),
    }
}

/// Declarations and the solution set of a model text by enumeration.
pub fn brute_force(text: &str) -> (Vec<Decl>, BTreeSet<Vec<i64>>) {
    let src = parse_model(text).unwrap();
    let mut decls = Vec::new();
    for t in &src.terms {
        let ArgKind::Ident { name, .. } = &t.args.first().map(|a| a.kind.clone()).unwrap_or(ArgKind::Int(0)) else {
            continue;
        };
        match t.name.as_str() {
            "new_bool" => decls.push(Decl {
                name: name.clone(),
                lo: 0,
                hi: 1,
                boolean: true,
            }),
            "new_int" => {
                let c = |i: usize| match t.args[i].kind {
                    ArgKind::Int(v) => v,
                    _ => unreachable!(),
                };
                decls.push(Decl {
                    name: name.clone(),
                    lo: c(1),
                    hi: c(2),
                    boolean: false,
                });
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    let mut vals: Vec<i64> = decls.iter().map(|d| d.lo).collect();
    if decls.iter().any(|d| d.lo > d.hi) {
        return (decls, out);
    }
    loop {
        let env = Env {
            decls: &decls,
            vals: &vals,
        };
        if src.terms.iter().all(|t| holds(&t.name, &t.args, &env)) {
            out.insert(vals.clone());
        }
        let mut i = 0;
        loop {
            if i == vals.len() {
                return (decls, out);
            }
            if vals[i] < decls[i].hi {
                vals[i] += 1;
                break;
            }
            vals[i] = decls[i].lo;
            i += 1;
        }
    }
}

/// Compiles and compares the CNF solution set with enumeration.
pub fn check_text(text: &str, strategy: Strategy) -> Result<usize, String> {
    let opts = CompileOptions {
        strategy,
        ..CompileOptions::default()
    };
    let c = compile_text(text, &opts).map_err(|e| format!("compile error {e}"))?;
    let got = cnf_solutions(&c)?;
    let (_, want) = brute_force(text);
    if got != want {
        let extra: Vec<_> = got.difference(&want).take(3).collect();
        let missing: Vec<_> = want.difference(&got).take(3).collect();
        return Err(format!("extra {extra:?}, missing {missing:?}"));
    }
    Ok(want.len())
}

pub const TEMPLATES: [&str; 26] = [
    "new_bool",
    "new_int",
    "bool2int",
    "bool_eq",
    "bool_array_op",
    "bool_array_op_reif",
    "bool_op_reif",
    "comparator",
    "int_rel",
    "int_rel_reif",
    "int_array_allDiff",
    "int_abs",
    "int_op",
    "int_array_op",
    "bool_array_sum_rel",
    "bool_array_pb_rel",
    "bool_array_sum_modK",
    "int_array_sum_rel",
    "int_array_lin_rel",
    "int_array_sum_modK",
    "bool_arrays_lex",
    "bool_arrays_lexLt",
    "bool_arrays_lex_reif",
    "bool_arrays_lexLt_reif",
    "int_arrays_lex",
    "int_arrays_lexLt",
];

const OPS: [&str; 4] = ["or", "and", "xor", "iff"];
const RELS: [&str; 6] = ["leq", "geq", "eq", "lt", "gt", "neq"];
const LIN: [&str; 5] = ["leq", "geq", "eq", "lt", "gt"];

/// Random instance builder. Booleans are named `b*`, integers `i*`.
pub struct Gen<'r> {
    rng: &'r mut StdRng,
    decls: Vec<String>,
    bools: Vec<String>,
    ints: Vec<(String, i64, i64)>,
    /// Largest domain width (values minus one).
    pub width: i64,
}

impl<'r> Gen<'r> {
    pub fn new(rng: &'r mut StdRng, width: i64) -> Gen<'r> {
        Gen {
            rng,
            decls: Vec::new(),
            bools: Vec::new(),
            ints: Vec::new(),
            width,
        }
    }

    fn fresh_bool(&mut self) -> String {
        let n = format!("b{}", self.bools.len());
        self.decls.push(format!("new_bool({n})"));
        self.bools.push(n.clone());
        n
    }

    pub fn bool(&mut self) -> String {
        let r: f64 = self.rng.gen();
        if r < 0.08 {
            return if self.rng.gen() { "true" } else { "false" }.into();
        }
        let name = if r < 0.25 && !self.bools.is_empty() {
            self.bools.choose(self.rng).unwrap().clone()
        } else {
            self.fresh_bool()
        };
        if self.rng.gen_bool(0.25) {
            format!("-{name}")
        } else {
            name
        }
    }

    pub fn bools(&mut self, n: usize) -> String {
        let xs: Vec<String> = (0..n).map(|_| self.bool()).collect();
        format!("[{}]", xs.join(","))
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> String {
        let n = format!("i{}", self.ints.len());
        self.decls.push(format!("new_int({n},{lo},{hi})"));
        self.ints.push((n.clone(), lo, hi));
        n
    }

    pub fn int(&mut self) -> String {
        let r: f64 = self.rng.gen();
        if r < 0.08 {
            return self.rng.gen_range(-2..=4).to_string();
        }
        if r < 0.2 && !self.ints.is_empty() {
            return self.ints.choose(self.rng).unwrap().0.clone();
        }
        let lo = self.rng.gen_range(-3..=3);
        let w = self.rng.gen_range(0..=self.width);
        self.int_in(lo, lo + w)
    }

    pub fn ints(&mut self, n: usize) -> String {
        let xs: Vec<String> = (0..n).map(|_| self.int()).collect();
        format!("[{}]", xs.join(","))
    }

    fn consts(&mut self, n: usize) -> String {
        let xs: Vec<String> = (0..n)
            .map(|_| {
                let c = self.rng.gen_range(1..=3);
                if self.rng.gen_bool(0.25) { -c } else { c }.to_string()
            })
            .collect();
        format!("[{}]", xs.join(","))
    }

    fn len(&mut self, min: usize) -> usize {
        self.rng.gen_range(min..=4)
    }

    /// The model text of one random instance of `template`.
    pub fn instance(&mut self, template: &str) -> String {
        let term = match template {
            "new_bool" => {
                self.fresh_bool();
                String::new()
            }
            "new_int" => {
                self.int();
                String::new()
            }
            "bool2int" => {
                let x = self.bool();
                let i = self.int_in(0, 1);
                format!("bool2int({x},{i})")
            }
            "bool_eq" => format!("bool_eq({},{})", self.bool(), self.bool()),
            "bool_array_op" => {
                let op = *OPS.choose(self.rng).unwrap();
                let n = self.len(0);
                format!("bool_array_{op}({})", self.bools(n))
            }
            "bool_array_op_reif" => {
                let op = *OPS.choose(self.rng).unwrap();
                let n = self.len(0);
                format!("bool_array_{op}_reif({},{})", self.bools(n), self.bool())
            }
            "bool_op_reif" => {
                let op = *OPS.choose(self.rng).unwrap();
                format!("bool_{op}_reif({},{},{})", self.bool(), self.bool(), self.bool())
            }
            "comparator" => format!("comparator({},{},{},{})", self.bool(), self.bool(), self.bool(), self.bool()),
            "int_rel" => {
                let r = *RELS.choose(self.rng).unwrap();
                format!("int_{r}({},{})", self.int(), self.int())
            }
            "int_rel_reif" => {
                let r = *RELS.choose(self.rng).unwrap();
                format!("int_{r}_reif({},{},{})", self.int(), self.int(), self.bool())
            }
            "int_array_allDiff" => {
                let n = self.len(1);
                format!("int_array_allDiff({})", self.ints(n))
            }
            "int_abs" => format!("int_abs({},{})", self.int(), self.int()),
            "int_op" => {
                let op = *["plus", "times", "div", "mod", "max", "min"].choose(self.rng).unwrap();
                let a = self.int();
                let b = if op == "div" || op == "mod" {
                    let lo = self.rng.gen_range(1..=3);
                    let w = self.rng.gen_range(0..=self.width.min(3));
                    self.int_in(lo, lo + w)
                } else {
                    self.int()
                };
                format!("int_{op}({a},{b},{})", self.int())
            }
            "int_array_op" => {
                let op = *["plus", "times", "max", "min"].choose(self.rng).unwrap();
                let n = self.len(1);
                format!("int_array_{op}({},{})", self.ints(n), self.int())
            }
            "bool_array_sum_rel" => {
                let r = *LIN.choose(self.rng).unwrap();
                let n = self.len(0);
                format!("bool_array_sum_{r}({},{})", self.bools(n), self.int())
            }
            "bool_array_pb_rel" => {
                let r = *LIN.choose(self.rng).unwrap();
                let n = self.len(1);
                let cs = self.consts(n);
                format!("bool_array_pb_{r}({cs},{},{})", self.bools(n), self.int())
            }
            "bool_array_sum_modK" => {
                let n = self.len(0);
                let k = self.rng.gen_range(1..=4);
                format!("bool_array_sum_modK({},{k},{})", self.bools(n), self.int())
            }
            "int_array_sum_rel" => {
                let r = *LIN.choose(self.rng).unwrap();
                let n = self.len(1);
                format!("int_array_sum_{r}({},{})", self.ints(n), self.int())
            }
            "int_array_lin_rel" => {
                let r = *LIN.choose(self.rng).unwrap();
                let n = self.len(1);
                let cs = self.consts(n);
                format!("int_array_lin_{r}({cs},{},{})", self.ints(n), self.int())
            }
            "int_array_sum_modK" => {
                let n = self.len(1);
                let k = self.rng.gen_range(1..=4);
                format!("int_array_sum_modK({},{k},{})", self.ints(n), self.int())
            }
            "bool_arrays_lex" | "bool_arrays_lexLt" => {
                let n = self.len(0);
                format!("{template}({},{})", self.bools(n), self.bools(n))
            }
            "bool_arrays_lex_reif" | "bool_arrays_lexLt_reif" => {
                let n = self.len(0);
                format!("{template}({},{},{})", self.bools(n), self.bools(n), self.bool())
            }
            "int_arrays_lex" | "int_arrays_lexLt" => {
                let n = self.len(1);
                format!("{template}({},{})", self.ints(n), self.ints(n))
            }
            _ => panic!("unknown template {template}"),
        };
        let mut text = self.decls.join("\n");
        text.push('\n');
        text.push_str(&term);
        text.push('\n');
        text
    }

    /// Number of assignments the brute force enumerates.
    pub fn space(&self) -> u64 {
        let b = 1u64 << self.bools.len().min(40);
        self.ints.iter().fold(b, |acc, (_, lo, hi)| acc.saturating_mul((hi - lo + 1) as u64))
    }
}

/// A random instance of `template` whose enumeration space stays small.
pub fn random_instance(rng: &mut StdRng, template: &str, limit: u64) -> String {
    let mut width = 5;
    loop {
        let mut g = Gen::new(rng, width);
        let text = g.instance(template);
        if g.space() <= limit {
            return text;
        }
        width = (width - 1).max(1);
    }
}

pub fn strategy_for(i: usize) -> Strategy {
    [Strategy::Hybrid, Strategy::Adder, Strategy::Merger][i % 3]
}
