//! Backbones and complete equi-propagation by iterated SAT calls.

use std::collections::{HashMap, HashSet};

use crate::encode::{CnfDoc, Encoder, EncodeOptions};
use crate::error::Result;
use crate::lit::{Lit, Var};
use crate::model::Model;
use crate::sat::{load, CdclSolver, SatBackend, SolveResult, SolverConfig};
use crate::simplify::{simplify, SimplifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackboneValue {
    True,
    False,
    Free,
}

/// An equation between DIMACS variables; `Const(x, b)` means `x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Equation {
    Const(u32, bool),
    Equal(u32, u32),
    Opposite(u32, u32),
}

/// Call counts and the number of partition blocks of `X ∪ {1}` after each
/// satisfiable call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Audit {
    pub tracked: usize,
    pub sat_calls: usize,
    pub unsat_calls: usize,
    pub blocks: Vec<usize>,
}

impl Audit {
    /// Checks the call-count bounds and strict refinement of the partition.
    pub fn verify(&self) -> std::result::Result<(), String> {
        if self.sat_calls > self.tracked + 1 {
            return Err(format!("{} satisfiable calls for {} variables", self.sat_calls, self.tracked));
        }
        if self.unsat_calls != 1 {
            return Err(format!("{} unsatisfiable calls", self.unsat_calls));
        }
        if self.blocks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(format!("partition did not refine: {:?}", self.blocks));
        }
        Ok(())
    }
}

#[derive(Default)]
struct ValueTable {
    seen: HashMap<u32, (bool, bool)>,
}

impl ValueTable {
    fn record(&mut self, v: u32, value: Option<bool>) {
        let e = self.seen.entry(v).or_insert((false, false));
        match value {
            Some(true) => e.0 = true,
            Some(false) => e.1 = true,
            None => *e = (true, true),
        }
    }

    /// The value seen, if only one was.
    fn single(&self, v: u32) -> Option<bool> {
        match self.seen.get(&v) {
            Some((true, false)) => Some(true),
            Some((false, true)) => Some(false),
            _ => None,
        }
    }
}

/// Number of blocks of `{1} ∪ xs` under "same or opposite in every model".
fn count_blocks(models: &[Vec<bool>], xs: &[u32]) -> usize {
    let mut sigs: HashSet<Vec<bool>> = HashSet::from([vec![true; models.len()]]);
    for &x in xs {
        let sig: Vec<bool> = models.iter().map(|m| m[x as usize - 1]).collect();
        let norm: Vec<bool> = if sig.first() == Some(&false) {
            sig.iter().map(|b| !b).collect()
        } else {
            sig
        };
        sigs.insert(norm);
    }
    sigs.len()
}

/// The iterated loop. `first` restricts the second call's blocking clause;
/// `audit_vars` drives the partition trace.
fn iterate(
    s: &mut dyn SatBackend,
    tracked: &[u32],
    first: Option<&[u32]>,
    audit_vars: &[u32],
) -> Result<Option<(ValueTable, Audit)>> {
    let mut table = ValueTable::default();
    let mut audit = Audit {
        tracked: audit_vars.len(),
        ..Audit::default()
    };
    let mut models: Vec<Vec<bool>> = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        match s.solve()? {
            SolveResult::Unsat => {
                audit.unsat_calls += 1;
                if round == 1 {
                    return Ok(None);
                }
                return Ok(Some((table, audit)));
            }
            SolveResult::Sat => {
                audit.sat_calls += 1;
                let model = s.model().unwrap().to_vec();
                for &v in tracked {
                    let val = s.occurs(v).then(|| model[v as usize - 1]);
                    table.record(v, val);
                }
                models.push(model);
                audit.blocks.push(count_blocks(&models, audit_vars));
            }
        }
        let block = |vars: &[u32]| -> Vec<i32> {
            vars.iter()
                .filter_map(|&v| table.single(v).map(|b| if b { -(v as i32) } else { v as i32 }))
                .collect()
        };
        let mut clause = match first {
            Some(xs) if round == 1 => block(xs),
            _ => Vec::new(),
        };
        if clause.is_empty() {
            clause = block(tracked);
        }
        s.add_clause(&clause)?;
    }
}

/// Backbone of `doc` over `tracked`; `None` when unsatisfiable.
pub fn backbone(doc: &CnfDoc, tracked: &[u32]) -> Result<Option<(Vec<(u32, BackboneValue)>, Audit)>> {
    let mut s = CdclSolver::new(SolverConfig::default());
    load(&mut s, doc)?;
    let Some((table, audit)) = iterate(&mut s, tracked, None, tracked)? else {
        return Ok(None);
    };
    let out = tracked
        .iter()
        .map(|&v| {
            let b = match table.single(v) {
                Some(true) => BackboneValue::True,
                Some(false) => BackboneValue::False,
                None => BackboneValue::Free,
            };
            (v, b)
        })
        .collect();
    Ok(Some((out, audit)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CepOutcome {
    /// One equation per non-representative member of each block; the
    /// representative is the constant or the smallest variable.
    pub equations: Vec<Equation>,
    pub audit: Audit,
}

/// Complete equi-propagation over `tracked` with the embedded solver.
pub fn cep(doc: &CnfDoc, tracked: &[u32]) -> Result<Option<CepOutcome>> {
    let mut s = CdclSolver::new(SolverConfig::default());
    cep_with(&mut s, doc, tracked)
}

/// Complete equi-propagation with any backend (fresh, nothing loaded).
pub fn cep_with(s: &mut dyn SatBackend, doc: &CnfDoc, tracked: &[u32]) -> Result<Option<CepOutcome>> {
    load(s, doc)?;
    // variables in no clause are free and take part in no equation
    let xs: Vec<u32> = tracked.iter().copied().filter(|&v| s.occurs(v)).collect();
    let n = xs.len();
    let one = s.num_vars() + 1;
    s.ensure_vars(one);
    s.add_clause(&[one as i32])?;
    let hat: Vec<u32> = std::iter::once(one).chain(xs.iter().copied()).collect();
    let mut sel: Vec<(usize, usize, u32)> = Vec::with_capacity(n * (n + 1) / 2);
    let mut next = one;
    for i in 0..=n {
        for j in i + 1..=n {
            next += 1;
            s.ensure_vars(next);
            let (e, a, b) = (next as i32, hat[i] as i32, hat[j] as i32);
            s.add_clause(&[-e, -a, b])?;
            s.add_clause(&[-e, a, -b])?;
            s.add_clause(&[e, a, b])?;
            s.add_clause(&[e, -a, -b])?;
            sel.push((i, j, next));
        }
    }
    let mut all: Vec<u32> = xs.clone();
    all.extend(sel.iter().map(|&(_, _, e)| e));
    let Some((table, audit)) = iterate(s, &all, Some(&xs), &xs)? else {
        return Ok(None);
    };
    // blocks over hat indices, with sign relative to the representative
    let mut rep: Vec<(usize, bool)> = (0..=n).map(|i| (i, false)).collect();
    for &(i, j, e) in &sel {
        if rep[j].0 != j {
            continue;
        }
        if let Some(same) = table.single(e) {
            if rep[i].0 == i {
                rep[j] = (i, !same);
            }
        }
    }
    let mut equations = Vec::new();
    for j in 1..=n {
        let (r, flip) = rep[j];
        if r == j {
            continue;
        }
        let x = hat[j];
        equations.push(if r == 0 {
            Equation::Const(x, !flip)
        } else if flip {
            Equation::Opposite(hat[r], x)
        } else {
            Equation::Equal(hat[r], x)
        });
    }
    Ok(Some(CepOutcome { equations, audit }))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CepPassStats {
    pub constraints: usize,
    pub tracked: usize,
    pub equations: usize,
    pub audit: Audit,
}

/// Variables of the live constraints of a group.
pub fn group_vars(m: &Model, group: usize) -> HashSet<Var> {
    m.live()
        .filter(|(i, _)| m.slots[*i].group == Some(group))
        .flat_map(|(_, c)| c.lits())
        .filter_map(|l| m.resolve(l).var())
        .collect()
}

/// Runs CEP on the CNF of one constraint group, imports the equations into
/// the model and simplifies again. Equations are sought among the variables
/// of `focus` (after resolution), typically the group's variables before
/// decomposition.
pub fn apply_cep_pass(m: &mut Model, group: usize, focus: &HashSet<Var>, opts: &SimplifyOptions) -> Result<CepPassStats> {
    let slots: Vec<usize> = m
        .live()
        .filter(|(i, _)| m.slots[*i].group == Some(group))
        .map(|(i, _)| i)
        .collect();
    let mut stats = CepPassStats {
        constraints: slots.len(),
        ..CepPassStats::default()
    };
    if slots.is_empty() || m.is_unsat() {
        return Ok(stats);
    }
    let mut vars: HashSet<Var> = HashSet::new();
    for &i in &slots {
        let c = m.slots[i].constraint.as_ref().unwrap();
        vars.extend(c.lits().into_iter().filter_map(|l| m.resolve(l).var()));
    }
    let doc = {
        let mut e = Encoder::new(m, EncodeOptions::default());
        for x in m.registered() {
            if x.bits.iter().any(|&b| m.resolve(b).var().is_some_and(|v| vars.contains(&v))) {
                e.monotonicity(x);
            }
        }
        for &i in &slots {
            e.constraint(m.slots[i].constraint.as_ref().unwrap(), Some(i))?;
        }
        e.finish(&[])
    };
    let focus: HashSet<Var> = focus.iter().filter_map(|&v| m.resolve(Lit::pos(v)).var()).collect();
    let tracked: Vec<u32> = (1..=doc.num_vars)
        .filter(|&id| doc.origin[id as usize - 1].is_some_and(|v| focus.contains(&v)))
        .collect();
    stats.tracked = tracked.len();
    let Some(out) = cep(&doc, &tracked)? else {
        m.set_unsat();
        return Ok(stats);
    };
    let lit = |id: u32| Lit::pos(doc.origin[id as usize - 1].unwrap());
    for eq in &out.equations {
        match *eq {
            Equation::Const(x, b) => m.union(lit(x), Lit::constant(b)),
            Equation::Equal(x, y) => m.union(lit(x), lit(y)),
            Equation::Opposite(x, y) => m.union(lit(x), !lit(y)),
        };
    }
    stats.equations = out.equations.len();
    stats.audit = out.audit;
    simplify(m, opts);
    Ok(stats)
}
