//! Incremental SAT interface, the embedded CDCL solver and a subprocess backend.

mod cdcl;
mod external;

pub use cdcl::{CdclSolver, SolverConfig, SolverStats};
pub use external::ExternalSolver;

use crate::encode::CnfDoc;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
}

/// Clauses use DIMACS literals over ids `1..=num_vars()`.
pub trait SatBackend {
    fn ensure_vars(&mut self, n: u32);
    fn num_vars(&self) -> u32;
    fn add_clause(&mut self, lits: &[i32]) -> Result<()>;
    fn solve(&mut self) -> Result<SolveResult>;
    /// Assignment of the last satisfiable call; `model[i]` is id `i + 1`.
    /// Variables in no clause read `false`.
    fn model(&self) -> Option<&[bool]>;
    /// Whether the variable occurs in some added clause.
    fn occurs(&self, v: u32) -> bool;
}

/// Loads a document. Parity constraints are added as clause chains over
/// fresh ids above the document's variables.
pub fn load(s: &mut dyn SatBackend, doc: &CnfDoc) -> Result<()> {
    s.ensure_vars(doc.num_vars);
    if doc.unsat {
        return s.add_clause(&[]);
    }
    for c in &doc.clauses {
        s.add_clause(c)?;
    }
    for x in &doc.xors {
        let mut acc = x[0];
        for (i, &l) in x.iter().enumerate().skip(1) {
            if i + 1 == x.len() {
                s.add_clause(&[acc, l])?;
                s.add_clause(&[-acc, -l])?;
            } else {
                let t = s.num_vars() as i32 + 1;
                s.ensure_vars(t as u32);
                s.add_clause(&[-acc, -l, -t])?;
                s.add_clause(&[acc, l, -t])?;
                s.add_clause(&[-acc, l, t])?;
                s.add_clause(&[acc, -l, t])?;
                acc = t;
            }
        }
        if x.len() == 1 {
            s.add_clause(&[acc])?;
        }
    }
    Ok(())
}

/// Solves a document with a fresh embedded solver; returns the model over
/// the document's ids.
pub fn solve_doc(doc: &CnfDoc, config: SolverConfig) -> Result<Option<Vec<bool>>> {
    let mut s = CdclSolver::new(config);
    load(&mut s, doc)?;
    Ok(match s.solve()? {
        SolveResult::Sat => Some(s.model().unwrap()[..doc.num_vars as usize].to_vec()),
        SolveResult::Unsat => None,
    })
}

/// Checks an assignment against every clause and parity line.
pub fn satisfies(doc: &CnfDoc, model: &[bool]) -> bool {
    let val = |l: i32| model[l.unsigned_abs() as usize - 1] == (l > 0);
    !doc.unsat
        && doc.clauses.iter().all(|c| c.iter().any(|&l| val(l)))
        && doc.xors.iter().all(|x| x.iter().filter(|&&l| val(l)).count() % 2 == 1)
}
