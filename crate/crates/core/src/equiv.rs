//! Polarity-aware union-find over literals.
//!
//! Node 0 stands for the constant `true`; every variable class that gets
//! bound to a constant is rooted there. Each node stores the parity of its
//! edge to the parent, so a class is a set of literals that are all equal
//! (or all equal to the negation of) its representative.

use crate::lit::{Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction;

/// Effect of a successful union.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Merge {
    /// Both literals were already in the same class with matching sign.
    Same,
    /// Two classes were merged; `absorbed` is no longer a root.
    Merged { root: Var, absorbed: Var },
}

#[derive(Debug, Clone, Default)]
pub struct EquivStore {
    parent: Vec<Var>,
    parity: Vec<bool>,
    rank: Vec<u8>,
}

impl EquivStore {
    pub fn new() -> Self {
        EquivStore {
            parent: vec![0],
            parity: vec![false],
            rank: vec![u8::MAX],
        }
    }

    /// Number of variables the store knows about.
    pub fn num_vars(&self) -> u32 {
        (self.parent.len() - 1) as u32
    }

    /// Registers variables up to `v` (inclusive).
    pub fn grow(&mut self, v: Var) {
        while self.parent.len() <= v as usize {
            let id = self.parent.len() as Var;
            self.parent.push(id);
            self.parity.push(false);
            self.rank.push(0);
        }
    }

    fn find(&mut self, v: Var) -> (Var, bool) {
        let mut root = v;
        let mut acc = false;
        while self.parent[root as usize] != root {
            acc ^= self.parity[root as usize];
            root = self.parent[root as usize];
        }
        // path compression, recomputing parities towards the root
        let mut cur = v;
        let mut cur_par = acc;
        while self.parent[cur as usize] != root && cur != root {
            let next = self.parent[cur as usize];
            let next_par = cur_par ^ self.parity[cur as usize];
            self.parent[cur as usize] = root;
            self.parity[cur as usize] = cur_par;
            cur = next;
            cur_par = next_par;
        }
        (root, acc)
    }

    fn find_ro(&self, v: Var) -> (Var, bool) {
        let mut root = v;
        let mut acc = false;
        while self.parent[root as usize] != root {
            acc ^= self.parity[root as usize];
            root = self.parent[root as usize];
        }
        (root, acc)
    }

    fn lit_of_root(root: Var, negated: bool) -> Lit {
        if root == 0 {
            Lit::constant(!negated)
        } else {
            Lit::new(root, negated)
        }
    }

    /// Canonical representative of `l`. Constants resolve to themselves.
    pub fn resolve(&self, l: Lit) -> Lit {
        match l.var() {
            None => l,
            Some(v) if v as usize >= self.parent.len() => l,
            Some(v) => {
                let (root, par) = self.find_ro(v);
                Self::lit_of_root(root, par ^ l.is_negated())
            }
        }
    }

    /// Like [`resolve`](Self::resolve) but compresses paths.
    pub fn resolve_mut(&mut self, l: Lit) -> Lit {
        match l.var() {
            None => l,
            Some(v) => {
                self.grow(v);
                let (root, par) = self.find(v);
                Self::lit_of_root(root, par ^ l.is_negated())
            }
        }
    }

    /// Records `a = b`. Fails if the store already implies `a = !b`.
    pub fn union(&mut self, a: Lit, b: Lit) -> Result<Merge, Contradiction> {
        let (ra, pa) = self.root_of(a);
        let (rb, pb) = self.root_of(b);
        if ra == rb {
            return if pa == pb {
                Ok(Merge::Same)
            } else {
                Err(Contradiction)
            };
        }
        let rel = pa ^ pb;
        let (root, child) = if ra == 0 || (rb != 0 && self.rank[ra as usize] > self.rank[rb as usize])
        {
            (ra, rb)
        } else if rb == 0 || self.rank[rb as usize] > self.rank[ra as usize] {
            (rb, ra)
        } else if ra < rb {
            self.rank[ra as usize] += 1;
            (ra, rb)
        } else {
            self.rank[rb as usize] += 1;
            (rb, ra)
        };
        self.parent[child as usize] = root;
        self.parity[child as usize] = rel;
        Ok(Merge::Merged {
            root,
            absorbed: child,
        })
    }

    fn root_of(&mut self, l: Lit) -> (Var, bool) {
        match l.const_value() {
            Some(b) => (0, !b),
            None => {
                let v = l.var().unwrap();
                self.grow(v);
                let (r, p) = self.find(v);
                (r, p ^ l.is_negated())
            }
        }
    }

    pub fn is_root(&self, v: Var) -> bool {
        (v as usize) < self.parent.len() && self.parent[v as usize] == v
    }
}
