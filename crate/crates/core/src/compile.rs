//! The full pipeline: parse, lower, simplify, optional CEP passes, encode.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::cardinality::Strategy;
use crate::cep::{apply_cep_pass, group_vars, CepPassStats};
use crate::encode::{clause_stats, encode, CnfDoc, EncodeOptions, Value, VarMap};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::parser::{lower, parse_model};
use crate::sat::{solve_doc, SolverConfig};
use crate::simplify::{simplify, SimplifyOptions, SimplifyStats};

#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    pub strategy: Strategy,
    /// Constraint groups to run complete equi-propagation on, in order.
    pub cep_groups: Vec<String>,
    pub xor_lines: bool,
    pub trace: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CompileStats {
    pub vars: u32,
    pub clauses: usize,
    pub compile_time: Duration,
    pub simplify: SimplifyStats,
    pub cep: Vec<(String, CepPassStats)>,
    /// Clauses owned by each constraint tag.
    pub by_tag: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub model: Model,
    pub doc: CnfDoc,
    pub varmap: VarMap,
    pub stats: CompileStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Vec<(String, Value)>),
    Unsat,
}

pub fn compile_text(text: &str, opts: &CompileOptions) -> Result<Compiled> {
    let start = Instant::now();
    let m = lower(&parse_model(text)?)?;
    let mut c = compile_model(m, opts)?;
    c.stats.compile_time = start.elapsed();
    Ok(c)
}

pub fn compile_model(mut m: Model, opts: &CompileOptions) -> Result<Compiled> {
    let start = Instant::now();
    let sopts = SimplifyOptions {
        strategy: opts.strategy,
        trace: opts.trace,
    };
    let mut focus = Vec::new();
    for g in &opts.cep_groups {
        let Some(id) = m.groups.iter().position(|x| x == g) else {
            return Err(Error::Unsupported(format!("no constraint group labelled `{g}`")));
        };
        focus.push((id, group_vars(&m, id)));
    }
    let mut stats = CompileStats {
        simplify: simplify(&mut m, &sopts),
        ..CompileStats::default()
    };
    for (g, (id, vars)) in opts.cep_groups.iter().zip(&focus) {
        let s = apply_cep_pass(&mut m, *id, vars, &sopts)?;
        stats.cep.push((g.clone(), s));
    }
    let doc = encode(&m, &EncodeOptions { xor_lines: opts.xor_lines })?;
    stats.vars = doc.num_vars;
    stats.clauses = doc.num_clauses();
    stats.by_tag = clause_stats(&m, &doc);
    stats.compile_time = start.elapsed();
    let varmap = VarMap::build(&m, &doc);
    Ok(Compiled {
        model: m,
        doc,
        varmap,
        stats,
    })
}

impl Compiled {
    /// Solves with the embedded solver and decodes every identifier.
    pub fn solve(&self, config: SolverConfig) -> Result<Outcome> {
        Ok(match solve_doc(&self.doc, config)? {
            Some(a) => Outcome::Sat(self.varmap.decode(&a)),
            None => Outcome::Unsat,
        })
    }
}

/// Looks up a decoded value by name.
pub fn value_of<'a>(vals: &'a [(String, Value)], name: &str) -> Option<&'a Value> {
    vals.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_example_is_clause_free() {
        let c = compile_text("new_int(a,0,5)\nnew_int(b,0,5)\nint_plus(a,b,5)", &CompileOptions::default()).unwrap();
        assert_eq!(c.stats.by_tag["int_plus"], 0);
        let Outcome::Sat(vals) = c.solve(SolverConfig::default()).unwrap() else { panic!() };
        let (Some(Value::Int(a)), Some(Value::Int(b))) = (value_of(&vals, "a"), value_of(&vals, "b")) else {
            panic!()
        };
        assert_eq!(a + b, 5);
    }

    #[test]
    fn unknown_group() {
        let opts = CompileOptions {
            cep_groups: vec!["nope".into()],
            ..CompileOptions::default()
        };
        assert!(compile_text("new_bool(a)", &opts).is_err());
    }
}
