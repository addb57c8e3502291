use std::io::Write;
use std::process::{Command, Stdio};

use super::{SatBackend, SolveResult};
use crate::error::{Error, Result};

/// Runs a DIMACS solver as a subprocess on every call. The accumulated
/// clause set is sent whole each time; nothing is learned across calls.
pub struct ExternalSolver {
    program: String,
    args: Vec<String>,
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
    occurs: Vec<bool>,
    model: Option<Vec<bool>>,
}

impl ExternalSolver {
    pub fn new(program: &str, args: &[&str]) -> ExternalSolver {
        ExternalSolver {
            program: program.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
            num_vars: 0,
            clauses: Vec::new(),
            occurs: vec![false],
            model: None,
        }
    }
}

impl SatBackend for ExternalSolver {
    fn ensure_vars(&mut self, n: u32) {
        if n > self.num_vars {
            self.num_vars = n;
            self.occurs.resize(n as usize + 1, false);
        }
    }

    fn num_vars(&self) -> u32 {
        self.num_vars
    }

    fn add_clause(&mut self, lits: &[i32]) -> Result<()> {
        for &l in lits {
            if l == 0 || l.unsigned_abs() > self.num_vars {
                return Err(Error::Solver(format!("literal {l} is not an allocated variable")));
            }
            self.occurs[l.unsigned_abs() as usize] = true;
        }
        self.clauses.push(lits.to_vec());
        Ok(())
    }

    fn solve(&mut self) -> Result<SolveResult> {
        self.model = None;
        let mut input = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                input.push_str(&l.to_string());
                input.push(' ');
            }
            input.push_str("0\n");
        }
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Solver(format!("cannot start {}: {e}", self.program)))?;
        child
            .stdin
            .take()
            .unwrap()
            .write_all(input.as_bytes())
            .map_err(|e| Error::Solver(e.to_string()))?;
        let out = child.wait_with_output().map_err(|e| Error::Solver(e.to_string()))?;
        let text = String::from_utf8_lossy(&out.stdout);
        let mut status = None;
        let mut model = vec![false; self.num_vars as usize];
        for line in text.lines() {
            if let Some(s) = line.strip_prefix("s ") {
                status = match s.trim() {
                    "SATISFIABLE" => Some(SolveResult::Sat),
                    "UNSATISFIABLE" => Some(SolveResult::Unsat),
                    other => return Err(Error::Solver(format!("unexpected status `{other}`"))),
                };
            } else if let Some(vs) = line.strip_prefix("v ") {
                for tok in vs.split_whitespace() {
                    let l: i32 = tok.parse().map_err(|_| Error::Solver(format!("bad model token `{tok}`")))?;
                    if l != 0 && l.unsigned_abs() <= self.num_vars {
                        model[l.unsigned_abs() as usize - 1] = l > 0;
                    }
                }
            }
        }
        let status = status.ok_or_else(|| Error::Solver("no status line".into()))?;
        if status == SolveResult::Sat {
            self.model = Some(model);
        }
        Ok(status)
    }

    fn model(&self) -> Option<&[bool]> {
        self.model.as_deref()
    }

    fn occurs(&self, v: u32) -> bool {
        self.occurs.get(v as usize).copied().unwrap_or(false)
    }
}
