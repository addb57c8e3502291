//! A compact CDCL solver: two watched literals, first-UIP learning with
//! clause minimization, VSIDS, phase saving and LBD-based clause deletion.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{SatBackend, SolveResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverConfig {
    /// Luby restarts with a 100-conflict unit.
    pub restarts: bool,
    /// Seeds the tiny initial activity perturbation used to break ties.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub solves: u64,
}

#[derive(Debug, Clone, Copy)]
struct Watch {
    cref: usize,
    blocker: i32,
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<i32>,
    learnt: bool,
    lbd: u32,
    deleted: bool,
}

const UNDEF: i8 = 0;

#[inline]
fn widx(l: i32) -> usize {
    2 * l.unsigned_abs() as usize + (l < 0) as usize
}

#[inline]
fn var(l: i32) -> usize {
    l.unsigned_abs() as usize
}

pub struct CdclSolver {
    config: SolverConfig,
    rng: StdRng,
    num_vars: usize,
    ok: bool,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<i32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Vec<usize>,
    heap_pos: Vec<Option<usize>>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    occurs: Vec<bool>,
    model: Vec<bool>,
    has_model: bool,
    num_learnts: usize,
    max_learnts: f64,
    pub stats: SolverStats,
}

impl Default for CdclSolver {
    fn default() -> Self {
        CdclSolver::new(SolverConfig::default())
    }
}

impl CdclSolver {
    pub fn new(config: SolverConfig) -> CdclSolver {
        CdclSolver {
            config,
            rng: StdRng::seed_from_u64(config.seed),
            num_vars: 0,
            ok: true,
            clauses: Vec::new(),
            watches: vec![Vec::new(), Vec::new()],
            assigns: vec![UNDEF],
            level: vec![0],
            reason: vec![None],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0],
            var_inc: 1.0,
            heap: Vec::new(),
            heap_pos: vec![None],
            phase: vec![false],
            seen: vec![false],
            occurs: vec![false],
            model: Vec::new(),
            has_model: false,
            num_learnts: 0,
            max_learnts: 2000.0,
            stats: SolverStats::default(),
        }
    }

    #[inline]
    fn value(&self, l: i32) -> i8 {
        let a = self.assigns[var(l)];
        if l < 0 {
            -a
        } else {
            a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: i32, reason: Option<usize>) {
        let v = var(l);
        self.assigns[v] = if l > 0 { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, c: Clause) -> usize {
        let cref = self.clauses.len();
        self.watches[widx(c.lits[0])].push(Watch {
            cref,
            blocker: c.lits[1],
        });
        self.watches[widx(c.lits[1])].push(Watch {
            cref,
            blocker: c.lits[0],
        });
        if c.learnt {
            self.num_learnts += 1;
        }
        self.clauses.push(c);
        cref
    }

    fn propagate(&mut self) -> Option<usize> {
        let mut conflict = None;
        while self.qhead < self.trail.len() && conflict.is_none() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = -p;
            let mut ws = std::mem::take(&mut self.watches[widx(false_lit)]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.clauses[w.cref].deleted {
                    continue;
                }
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = &mut self.clauses[w.cref].lits;
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let fv = {
                    let a = self.assigns[var(first)];
                    if first < 0 {
                        -a
                    } else {
                        a
                    }
                };
                if first != w.blocker && fv == 1 {
                    ws[j] = Watch {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    let a = self.assigns[var(l)];
                    let lv = if l < 0 { -a } else { a };
                    if lv != -1 {
                        c.swap(1, k);
                        let nw = c[1];
                        self.watches[widx(nw)].push(Watch {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if fv == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[widx(false_lit)] = ws;
        }
        conflict
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if let Some(p) = self.heap_pos[v] {
            self.sift_up(p);
        }
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<i32>, u32, u32) {
        let mut learnt = vec![0i32];
        let mut path = 0;
        let mut p: Option<i32> = None;
        let mut idx = self.trail.len();
        let dl = self.decision_level();
        loop {
            let lits = self.clauses[confl].lits.clone();
            for &q in lits.iter().skip(p.is_some() as usize) {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let pl = self.trail[idx];
            p = Some(pl);
            self.seen[var(pl)] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = -pl;
                break;
            }
            confl = self.reason[var(pl)].expect("implied literal without reason");
        }
        // drop literals whose reason is covered by the rest of the clause
        let all = learnt.clone();
        let mut out = vec![learnt[0]];
        for &q in &learnt[1..] {
            let redundant = match self.reason[var(q)] {
                None => false,
                Some(r) => self.clauses[r].lits[1..]
                    .iter()
                    .all(|&x| self.seen[var(x)] || self.level[var(x)] == 0),
            };
            if !redundant {
                out.push(q);
            }
        }
        for &q in &all {
            self.seen[var(q)] = false;
        }
        let mut bt = 0;
        if out.len() > 1 {
            let mut best = 1;
            for k in 2..out.len() {
                if self.level[var(out[k])] > self.level[var(out[best])] {
                    best = k;
                }
            }
            out.swap(1, best);
            bt = self.level[var(out[1])];
        }
        let mut levels: Vec<u32> = out.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        (out, bt, levels.len() as u32)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l > 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            if self.heap_pos[v].is_none() {
                self.heap_insert(v);
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<i32> {
        while let Some(v) = self.heap_pop() {
            if self.assigns[v] == UNDEF {
                let l = v as i32;
                return Some(if self.phase[v] { l } else { -l });
            }
        }
        None
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !c.deleted && c.lbd > 2 && !self.locked(i)
            })
            .collect();
        cands.sort_by_key(|&i| (std::cmp::Reverse(self.clauses[i].lbd), std::cmp::Reverse(self.clauses[i].lits.len())));
        for &i in &cands[..cands.len() / 2] {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.num_learnts -= 1;
        }
        let clauses = &self.clauses;
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !clauses[w.cref].deleted);
        }
        self.max_learnts *= 1.1;
    }

    fn locked(&self, cref: usize) -> bool {
        let l = self.clauses[cref].lits[0];
        self.value(l) == 1 && self.reason[var(l)] == Some(cref)
    }

    fn luby(mut i: u64) -> u64 {
        // i-th element (0-based) of 1,1,2,1,1,2,4,...
        let mut size = 1;
        let mut seq = 0;
        while size < i + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != i {
            size = (size - 1) / 2;
            seq -= 1;
            i %= size;
        }
        1 << seq
    }

    // heap keyed by activity (max at the root)

    fn heap_less(&self, a: usize, b: usize) -> bool {
        self.activity[a] > self.activity[b]
    }

    fn sift_up(&mut self, mut p: usize) {
        let v = self.heap[p];
        while p > 0 {
            let parent = (p - 1) / 2;
            if !self.heap_less(v, self.heap[parent]) {
                break;
            }
            self.heap[p] = self.heap[parent];
            self.heap_pos[self.heap[p]] = Some(p);
            p = parent;
        }
        self.heap[p] = v;
        self.heap_pos[v] = Some(p);
    }

    fn sift_down(&mut self, mut p: usize) {
        let v = self.heap[p];
        let n = self.heap.len();
        loop {
            let l = 2 * p + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && self.heap_less(self.heap[r], self.heap[l]) { r } else { l };
            if !self.heap_less(self.heap[c], v) {
                break;
            }
            self.heap[p] = self.heap[c];
            self.heap_pos[self.heap[p]] = Some(p);
            p = c;
        }
        self.heap[p] = v;
        self.heap_pos[v] = Some(p);
    }

    fn heap_insert(&mut self, v: usize) {
        self.heap.push(v);
        let p = self.heap.len() - 1;
        self.sift_up(p);
    }

    fn heap_pop(&mut self) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.heap_pos[top] = None;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.heap_pos[last] = Some(0);
            self.sift_down(0);
        }
        Some(top)
    }
}

impl SatBackend for CdclSolver {
    fn ensure_vars(&mut self, n: u32) {
        let n = n as usize;
        while self.num_vars < n {
            self.num_vars += 1;
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.assigns.push(UNDEF);
            self.level.push(0);
            self.reason.push(None);
            self.activity.push(self.rng.gen::<f64>() * 1e-5);
            self.heap_pos.push(None);
            self.phase.push(false);
            self.seen.push(false);
            self.occurs.push(false);
            self.heap_insert(self.num_vars);
        }
    }

    fn num_vars(&self) -> u32 {
        self.num_vars as u32
    }

    fn add_clause(&mut self, lits: &[i32]) -> Result<()> {
        for &l in lits {
            if l == 0 || var(l) > self.num_vars {
                return Err(Error::Solver(format!("literal {l} is not an allocated variable")));
            }
        }
        for &l in lits {
            self.occurs[var(l)] = true;
        }
        if !self.ok {
            return Ok(());
        }
        self.cancel_until(0);
        let mut c: Vec<i32> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.value(l) {
                1 => return Ok(()),
                -1 => {}
                _ => {
                    if c.contains(&-l) {
                        return Ok(());
                    }
                    if !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
        }
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(Clause {
                    lits: c,
                    learnt: false,
                    lbd: 0,
                    deleted: false,
                });
            }
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<SolveResult> {
        self.stats.solves += 1;
        self.has_model = false;
        if !self.ok {
            return Ok(SolveResult::Unsat);
        }
        self.cancel_until(0);
        let mut restart_no = 0;
        let mut budget = u64::MAX;
        if self.config.restarts {
            budget = 100 * Self::luby(restart_no);
        }
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Ok(SolveResult::Unsat);
                }
                let (learnt, bt, lbd) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(Clause {
                        lits: learnt,
                        learnt: true,
                        lbd,
                        deleted: false,
                    });
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= 0.95;
            } else {
                if since_restart >= budget {
                    since_restart = 0;
                    restart_no += 1;
                    budget = 100 * Self::luby(restart_no);
                    self.cancel_until(0);
                    continue;
                }
                if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => {
                        self.model = (1..=self.num_vars).map(|v| self.assigns[v] == 1).collect();
                        self.has_model = true;
                        self.cancel_until(0);
                        return Ok(SolveResult::Sat);
                    }
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    fn model(&self) -> Option<&[bool]> {
        self.has_model.then_some(&self.model[..])
    }

    fn occurs(&self, v: u32) -> bool {
        self.occurs.get(v as usize).copied().unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let got: Vec<u64> = (0..15).map(CdclSolver::luby).collect();
        assert_eq!(got, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn unit_contradiction() {
        let mut s = CdclSolver::default();
        s.ensure_vars(1);
        s.add_clause(&[1]).unwrap();
        s.add_clause(&[-1]).unwrap();
        assert_eq!(s.solve().unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn unallocated_variable_is_an_error() {
        let mut s = CdclSolver::default();
        s.ensure_vars(2);
        assert!(s.add_clause(&[3]).is_err());
        assert!(s.add_clause(&[0]).is_err());
    }
}
