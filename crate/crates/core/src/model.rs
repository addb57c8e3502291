//! The model container: variable allocation, equivalences and constraint slots.

use crate::constraint::Constraint;
use crate::equiv::{EquivStore, Merge};
use crate::error::{Error, Result};
use crate::int::{BinaryInt, UnaryInt};
use crate::lit::{Lit, Var};

/// A source-level identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entity {
    Bool(Lit),
    Int(UnaryInt),
    Binary(BinaryInt),
}

#[derive(Debug, Clone)]
pub struct Slot {
    /// `None` once the constraint has been deleted or replaced.
    pub constraint: Option<Constraint>,
    pub group: Option<usize>,
    /// Slot this one was decomposed from (itself for source constraints).
    pub origin: usize,
    /// Tag of the constraint first placed in the slot.
    pub tag: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Open,
    Unsat,
}

#[derive(Debug, Clone)]
pub struct Model {
    store: EquivStore,
    num_vars: Var,
    merges: Vec<(Var, Var)>,
    merge_count: u64,
    pub decls: Vec<(String, Entity)>,
    pub slots: Vec<Slot>,
    pub groups: Vec<String>,
    registered: Vec<UnaryInt>,
    status: Status,
}

impl Default for Model {
    fn default() -> Self {
        Model::new()
    }
}

impl Model {
    pub fn new() -> Model {
        Model {
            store: EquivStore::new(),
            num_vars: 0,
            merges: Vec::new(),
            merge_count: 0,
            decls: Vec::new(),
            slots: Vec::new(),
            groups: Vec::new(),
            registered: Vec::new(),
            status: Status::Open,
        }
    }

    pub fn num_vars(&self) -> Var {
        self.num_vars
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_unsat(&self) -> bool {
        self.status == Status::Unsat
    }

    pub fn set_unsat(&mut self) {
        self.status = Status::Unsat;
    }

    pub fn store(&self) -> &EquivStore {
        &self.store
    }

    pub fn fresh_var(&mut self) -> Var {
        self.num_vars += 1;
        self.store.grow(self.num_vars);
        self.num_vars
    }

    pub fn fresh_lit(&mut self) -> Lit {
        Lit::pos(self.fresh_var())
    }

    fn alloc_int(&mut self, lo: i64, hi: i64) -> UnaryInt {
        let bits = (lo..hi).map(|_| self.fresh_lit()).collect();
        UnaryInt::new(lo, bits)
    }

    /// A fresh integer in `[lo,hi]` whose bits get monotonicity clauses.
    pub fn new_unary(&mut self, lo: i64, hi: i64) -> Result<UnaryInt> {
        if lo > hi {
            return Err(Error::EmptyDomain { lo, hi });
        }
        let x = self.alloc_int(lo, hi);
        if x.width() > 1 {
            self.registered.push(x.clone());
        }
        Ok(x)
    }

    /// A fresh integer that is functionally defined by the constraint that
    /// introduces it (sum outputs, merger halves), so it needs no
    /// monotonicity clauses of its own. An empty domain marks the model unsat.
    pub fn new_defined(&mut self, lo: i64, hi: i64) -> UnaryInt {
        if lo > hi {
            self.set_unsat();
            return UnaryInt::constant(lo);
        }
        self.alloc_int(lo, hi)
    }

    /// Like [`new_unary`](Self::new_unary) but an empty domain marks the model unsat.
    pub fn new_free(&mut self, lo: i64, hi: i64) -> UnaryInt {
        match self.new_unary(lo, hi) {
            Ok(x) => x,
            Err(_) => {
                self.set_unsat();
                UnaryInt::constant(lo)
            }
        }
    }

    pub fn new_binary(&mut self, width: usize) -> BinaryInt {
        BinaryInt::new((0..width).map(|_| self.fresh_lit()).collect())
    }

    /// Integers whose bits need monotonicity clauses.
    pub fn registered(&self) -> &[UnaryInt] {
        &self.registered
    }

    pub fn register(&mut self, x: UnaryInt) {
        if x.width() > 1 {
            self.registered.push(x);
        }
    }

    pub fn resolve(&self, l: Lit) -> Lit {
        self.store.resolve(l)
    }

    pub fn resolve_int(&self, x: &UnaryInt) -> UnaryInt {
        x.resolved(&self.store)
    }

    pub fn resolve_constraint(&self, c: &mut Constraint) {
        let store = &self.store;
        c.for_each_lit_mut(&mut |l| *l = store.resolve(*l));
    }

    /// Records `a = b`. Returns false (and marks the model unsat) on contradiction.
    pub fn union(&mut self, a: Lit, b: Lit) -> bool {
        if self.is_unsat() {
            return false;
        }
        match self.store.union(a, b) {
            Ok(Merge::Same) => true,
            Ok(Merge::Merged { root, absorbed }) => {
                self.merges.push((root, absorbed));
                self.merge_count += 1;
                true
            }
            Err(_) => {
                self.set_unsat();
                false
            }
        }
    }

    pub fn assert_lit(&mut self, l: Lit) -> bool {
        self.union(l, Lit::TRUE)
    }

    /// `x >= v`. Every threshold up to `v` is fixed, as unit propagation
    /// over the monotonicity clauses would.
    pub fn assert_geq(&mut self, x: &UnaryInt, v: i64) -> bool {
        if v > x.hi() {
            return self.assert_lit(Lit::FALSE);
        }
        (x.lo() + 1..=v).all(|t| self.assert_lit(x.geq(t)))
    }

    /// `x < v`, fixing every threshold from `v` up.
    pub fn assert_lt(&mut self, x: &UnaryInt, v: i64) -> bool {
        if v <= x.lo() {
            return self.assert_lit(Lit::FALSE);
        }
        (v.max(x.lo() + 1)..=x.hi()).all(|t| self.assert_lit(!x.geq(t)))
    }

    /// `x != v`: the thresholds on both sides of `v` become equal.
    pub fn remove_value(&mut self, x: &UnaryInt, v: i64) -> bool {
        self.union(x.geq(v), x.geq(v + 1))
    }

    /// Total number of class merges so far.
    pub fn merge_count(&self) -> u64 {
        self.merge_count
    }

    /// Merge events `(root, absorbed)` since the last call.
    pub fn take_merges(&mut self) -> Vec<(Var, Var)> {
        std::mem::take(&mut self.merges)
    }

    pub fn group_id(&mut self, label: &str) -> usize {
        match self.groups.iter().position(|g| g == label) {
            Some(i) => i,
            None => {
                self.groups.push(label.to_string());
                self.groups.len() - 1
            }
        }
    }

    pub fn post(&mut self, c: Constraint, group: Option<usize>) -> usize {
        let idx = self.slots.len();
        let tag = c.stat_tag();
        self.slots.push(Slot {
            constraint: Some(c),
            group,
            origin: idx,
            tag,
        });
        idx
    }

    pub fn post_derived(&mut self, c: Constraint, parent: usize) -> usize {
        let idx = self.slots.len();
        let group = self.slots[parent].group;
        let origin = self.slots[parent].origin;
        let tag = c.stat_tag();
        self.slots.push(Slot {
            constraint: Some(c),
            group,
            origin,
            tag,
        });
        idx
    }

    pub fn live(&self) -> impl Iterator<Item = (usize, &Constraint)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.constraint.as_ref().map(|c| (i, c)))
    }

    pub fn num_live(&self) -> usize {
        self.slots.iter().filter(|s| s.constraint.is_some()).count()
    }

    pub fn declare(&mut self, name: &str, e: Entity) {
        self.decls.push((name.to_string(), e));
    }

    pub fn lookup(&self, name: &str) -> Option<&Entity> {
        self.decls.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: &Model, x: &UnaryInt) -> Vec<String> {
        m.resolve_int(x).bits.iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn bounds_give_three_to_five() {
        let mut m = Model::new();
        let x = m.new_unary(0, 9).unwrap();
        m.assert_geq(&x, 3);
        m.assert_lt(&x, 6);
        assert_eq!(shape(&m, &x), ["T", "T", "T", "4", "5", "F", "F", "F", "F"]);
        let r = m.resolve_int(&x);
        assert_eq!((r.min_value(), r.max_value()), (3, 5));
    }

    #[test]
    fn removals_repeat_bits() {
        let mut m = Model::new();
        let x = m.new_unary(0, 9).unwrap();
        for v in [2, 5, 7] {
            m.remove_value(&x, v);
        }
        let r = m.resolve_int(&x);
        let ids: Vec<i32> = r.bits.iter().map(|b| b.code()).collect();
        let expect = [1, 2, 2, 4, 5, 5, 7, 7, 9];
        // classes must match the pattern, representatives may differ
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(ids[i] == ids[j], expect[i] == expect[j]);
            }
        }
    }

    #[test]
    fn empty_interval_is_unsat() {
        let mut m = Model::new();
        let x = m.new_unary(0, 9).unwrap();
        m.assert_geq(&x, 4);
        m.assert_lt(&x, 4);
        assert!(m.is_unsat());
    }

    #[test]
    fn removing_every_value_is_unsat() {
        let mut m = Model::new();
        let x = m.new_unary(-1, 2).unwrap();
        for v in -1..=2 {
            m.remove_value(&x, v);
        }
        assert!(m.is_unsat());
    }

    #[test]
    fn singleton_and_empty_domains() {
        let mut m = Model::new();
        assert_eq!(m.new_unary(7, 7).unwrap().fixed_value(), Some(7));
        assert_eq!(m.new_unary(3, 1), Err(Error::EmptyDomain { lo: 3, hi: 1 }));
    }
}
