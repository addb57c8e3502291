//! Fixpoint driver for the simplification rules.

pub mod rules;

use std::collections::{HashMap, HashSet, VecDeque};

use crate::cardinality::{merge_step, CostModel, Strategy};
use crate::constraint::Constraint;
use crate::lit::Var;
use crate::model::Model;

pub use rules::{tighten, Action};

#[derive(Debug, Clone, Default)]
pub struct SimplifyOptions {
    pub strategy: Strategy,
    /// Record one line per rule firing.
    pub trace: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SimplifyStats {
    pub steps: u64,
    pub firings: u64,
    pub expansions: u64,
    pub trace: Vec<String>,
}

struct Driver<'a> {
    m: &'a mut Model,
    opts: &'a SimplifyOptions,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    watchers: HashMap<Var, Vec<usize>>,
    watching: HashSet<(Var, usize)>,
    stats: SimplifyStats,
}

impl Driver<'_> {
    fn push(&mut self, i: usize) {
        if self.queued.len() <= i {
            self.queued.resize(i + 1, false);
        }
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push_back(i);
        }
    }

    fn watch(&mut self, c: &Constraint, i: usize) {
        for l in c.lits() {
            if let Some(v) = l.var() {
                if self.watching.insert((v, i)) {
                    self.watchers.entry(v).or_default().push(i);
                }
            }
        }
    }

    fn wake(&mut self, v: Var) {
        if let Some(list) = self.watchers.remove(&v) {
            for i in list {
                self.watching.remove(&(v, i));
                self.push(i);
            }
        }
    }

    fn run(&mut self) {
        while let Some(i) = self.queue.pop_front() {
            self.queued[i] = false;
            if self.m.is_unsat() {
                return;
            }
            self.step(i);
            for (root, absorbed) in self.m.take_merges() {
                self.wake(absorbed);
                self.wake(root);
            }
        }
    }

    fn step(&mut self, i: usize) {
        let Some(mut c) = self.m.slots[i].constraint.take() else {
            return;
        };
        self.stats.steps += 1;
        self.m.resolve_constraint(&mut c);
        let before = self.m.merge_count();
        let tag = c.tag();
        let original = self.opts.trace.then(|| format!("{c:?}"));
        let action = rules::apply(self.m, c.clone());
        let merged = self.m.merge_count() != before;
        let fired = match &action {
            Action::Keep(k) => merged || *k != c,
            _ => true,
        };
        if fired {
            self.stats.firings += 1;
        }
        if let (true, Some(orig)) = (fired, original) {
            let what = match &action {
                Action::Keep(_) => "narrowed".to_string(),
                Action::Delete => "deleted".to_string(),
                Action::Replace(v) => {
                    let tags: Vec<&str> = v.iter().map(|c| c.tag()).collect();
                    format!("replaced by [{}]", tags.join(", "))
                }
            };
            self.stats.trace.push(format!("#{i} {tag}: {what} <- {orig}"));
        }
        match action {
            Action::Keep(k) => {
                self.watch(&k, i);
                self.m.slots[i].constraint = Some(k);
            }
            Action::Delete => {}
            Action::Replace(v) => {
                for c in v {
                    let j = self.m.post_derived(c, i);
                    self.push(j);
                }
            }
        }
    }
}

/// Runs the rules to a fixpoint, then expands `int_plus` nodes according to
/// the strategy, repeating until nothing changes.
pub fn simplify(m: &mut Model, opts: &SimplifyOptions) -> SimplifyStats {
    let mut d = Driver {
        m,
        opts,
        queue: VecDeque::new(),
        queued: Vec::new(),
        watchers: HashMap::new(),
        watching: HashSet::new(),
        stats: SimplifyStats::default(),
    };
    d.m.take_merges();
    let live: Vec<usize> = d.m.live().map(|(i, _)| i).collect();
    for i in live {
        d.push(i);
    }
    let mut costs = CostModel::new();
    let mut settled: HashSet<usize> = HashSet::new();
    loop {
        d.run();
        if d.m.is_unsat() {
            break;
        }
        let plus: Vec<usize> = d
            .m
            .live()
            .filter(|(i, c)| matches!(c, Constraint::Plus { .. }) && !settled.contains(i))
            .map(|(i, _)| i)
            .collect();
        let mut expanded = false;
        for i in plus {
            let Some(Constraint::Plus { a, b, c }) = d.m.slots[i].constraint.clone() else {
                continue;
            };
            let a = d.m.resolve_int(&a).trimmed();
            let b = d.m.resolve_int(&b).trimmed();
            let (w1, w2) = (a.width() as u64, b.width() as u64);
            let keep = match d.opts.strategy {
                Strategy::Adder => true,
                Strategy::Merger => false,
                Strategy::Hybrid => costs.hybrid_keeps_adder(w1, w2),
            };
            if keep {
                settled.insert(i);
                continue;
            }
            d.m.slots[i].constraint = None;
            let base = a.lo() + b.lo();
            let top = base + (w1 + w2) as i64;
            d.m.assert_geq(&c, base);
            d.m.assert_lt(&c, top + 1);
            let cs: Vec<_> = (base + 1..=top).map(|t| c.geq(t)).collect();
            let parts = merge_step(d.m, &a.bits, &b.bits, &cs);
            d.stats.expansions += 1;
            if d.opts.trace {
                d.stats
                    .trace
                    .push(format!("#{i} int_plus: expanded ({w1},{w2}) into {} parts", parts.len()));
            }
            for p in parts {
                let j = d.m.post_derived(p, i);
                d.push(j);
            }
            expanded = true;
        }
        if !expanded {
            break;
        }
    }
    d.stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Rel;
    use crate::int::UnaryInt;

    #[test]
    fn plus_with_fixed_argument_unifies() {
        let mut m = Model::new();
        let a = m.new_unary(0, 3).unwrap();
        let b = UnaryInt::constant(2);
        let c = m.new_unary(0, 9).unwrap();
        m.post(Constraint::Plus { a: a.clone(), b, c: c.clone() }, None);
        simplify(&mut m, &SimplifyOptions::default());
        assert_eq!(m.num_live(), 0);
        for t in 1..=3 {
            assert_eq!(m.resolve(a.geq(t)), m.resolve(c.geq(t + 2)));
        }
        assert!(m.resolve(c.geq(2)).is_true());
        assert!(m.resolve(c.geq(6)).is_false());
    }

    #[test]
    fn small_sum_becomes_comparator() {
        let mut m = Model::new();
        let x = m.fresh_lit();
        let y = m.fresh_lit();
        let s = m.new_unary(0, 2).unwrap();
        m.post(
            Constraint::BoolSum {
                rel: Rel::Eq,
                xs: vec![x, y],
                rhs: s,
            },
            None,
        );
        simplify(&mut m, &SimplifyOptions::default());
        let tags: Vec<&str> = m.live().map(|(_, c)| c.tag()).collect();
        assert_eq!(tags, ["comparator"]);
    }

    #[test]
    fn contradiction_is_detected() {
        let mut m = Model::new();
        let x = m.fresh_lit();
        m.post(Constraint::Clause(vec![x]), None);
        m.post(Constraint::Clause(vec![!x]), None);
        simplify(&mut m, &SimplifyOptions::default());
        assert!(m.is_unsat());
    }
}
