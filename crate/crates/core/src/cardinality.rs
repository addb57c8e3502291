//! Cardinality networks: sum decompositions, the unary adder, the odd-even
//! merger and the cost model that drives the hybrid strategy.

use std::collections::HashMap;

use crate::constraint::{Constraint, Rel};
use crate::int::UnaryInt;
use crate::lit::Lit;
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Every `int_plus` is encoded directly (a totalizer for sums).
    Adder,
    /// Every `int_plus` is decomposed down to comparators.
    Merger,
    /// Decompose only while the merger is predicted to be smaller.
    #[default]
    Hybrid,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "adder" => Some(Strategy::Adder),
            "merger" => Some(Strategy::Merger),
            "hybrid" => Some(Strategy::Hybrid),
            _ => None,
        }
    }
}

/// Decomposes `sum(xs) = y`.
///
/// Bounds `0 <= y <= n` are asserted first; the network then works on the
/// view `[y>=1, ..., y>=n]`, whose constant tail caps the intermediate sums.
pub fn decompose_sum_eq(m: &mut Model, xs: &[Lit], y: &UnaryInt) -> Vec<Constraint> {
    let n = xs.len() as i64;
    m.assert_geq(y, 0);
    m.assert_lt(y, n + 1);
    let ys: Vec<Lit> = (1..=n).map(|t| y.geq(t)).collect();
    sum_into(m, xs, &ys)
}

fn sum_into(m: &mut Model, xs: &[Lit], ys: &[Lit]) -> Vec<Constraint> {
    match xs.len() {
        0 => Vec::new(),
        1 => vec![Constraint::BoolEq(ys[0], xs[0])],
        2 => vec![Constraint::Comparator {
            a: xs[0],
            b: xs[1],
            hi: ys[0],
            lo: ys[1],
        }],
        n => {
            let n1 = n.div_ceil(2);
            let cap = effective_width(m, ys);
            let t1 = m.new_defined(0, n1.min(cap) as i64);
            let t2 = m.new_defined(0, (n - n1).min(cap) as i64);
            vec![
                Constraint::BoolSum {
                    rel: Rel::Eq,
                    xs: xs[..n1].to_vec(),
                    rhs: t1.clone(),
                },
                Constraint::BoolSum {
                    rel: Rel::Eq,
                    xs: xs[n1..].to_vec(),
                    rhs: t2.clone(),
                },
                Constraint::Plus {
                    a: t1,
                    b: t2,
                    c: UnaryInt::new(0, ys.to_vec()),
                },
            ]
        }
    }
}

/// Number of bits before the trailing run of `false`.
fn effective_width(m: &Model, ys: &[Lit]) -> usize {
    let tail = ys
        .iter()
        .rev()
        .take_while(|l| m.resolve(**l).is_false())
        .count();
    ys.len() - tail
}

/// Decomposes `sum(xs) <= k` for `0 <= k < n` and `n >= 2` into
/// `T1 <= T3` and `T3 + T2 = k`, where `T1`, `T2` sum the two halves.
pub fn decompose_sum_leq(m: &mut Model, xs: &[Lit], k: i64) -> Vec<Constraint> {
    let n = xs.len();
    let n1 = n.div_ceil(2);
    let t3 = m.new_defined(0, k);
    let t1 = m.new_defined(0, (n1 as i64).min(k));
    let t2 = m.new_defined(0, ((n - n1) as i64).min(k));
    vec![
        Constraint::BoolSum {
            rel: Rel::Eq,
            xs: xs[..n1].to_vec(),
            rhs: t1.clone(),
        },
        Constraint::BoolSum {
            rel: Rel::Eq,
            xs: xs[n1..].to_vec(),
            rhs: t2.clone(),
        },
        Constraint::Plus {
            a: t3.clone(),
            b: t2,
            c: UnaryInt::constant(k),
        },
        Constraint::IntRel {
            rel: Rel::Leq,
            a: t1,
            b: t3,
        },
    ]
}

/// One level of the odd-even merger for `a + b = c` on sorted bit
/// sequences with `|c| = |a| + |b|`.
pub fn merge_step(m: &mut Model, a: &[Lit], b: &[Lit], c: &[Lit]) -> Vec<Constraint> {
    debug_assert_eq!(a.len() + b.len(), c.len());
    let mut out = Vec::new();
    if a.is_empty() || b.is_empty() {
        let src = if a.is_empty() { b } else { a };
        for (&x, &y) in c.iter().zip(src) {
            out.push(Constraint::BoolEq(x, y));
        }
        return out;
    }
    if a.len() == 1 && b.len() == 1 {
        out.push(Constraint::Comparator {
            a: a[0],
            b: b[0],
            hi: c[0],
            lo: c[1],
        });
        return out;
    }
    let odd = |s: &[Lit]| s.iter().step_by(2).copied().collect::<Vec<_>>();
    let even = |s: &[Lit]| s.iter().skip(1).step_by(2).copied().collect::<Vec<_>>();
    let co = merge_child(m, odd(a), odd(b), &mut out);
    let ce = merge_child(m, even(a), even(b), &mut out);
    combine(&co, &ce, c, &mut out);
    out
}

fn merge_child(m: &mut Model, x: Vec<Lit>, y: Vec<Lit>, out: &mut Vec<Constraint>) -> Vec<Lit> {
    if x.is_empty() {
        return y;
    }
    if y.is_empty() {
        return x;
    }
    let z = m.new_defined(0, (x.len() + y.len()) as i64);
    out.push(Constraint::Plus {
        a: UnaryInt::new(0, x),
        b: UnaryInt::new(0, y),
        c: z.clone(),
    });
    z.bits
}

/// `c1 = co1` and `sort(co_{i+1}, ce_i) = (c_{2i}, c_{2i+1})`.
fn combine(co: &[Lit], ce: &[Lit], c: &[Lit], out: &mut Vec<Constraint>) {
    out.push(Constraint::BoolEq(c[0], co[0]));
    let mut i = 1;
    while 2 * i - 1 < c.len() {
        let hi = c[2 * i - 1];
        match (co.get(i), ce.get(i - 1)) {
            (Some(&x), Some(&y)) => out.push(Constraint::Comparator {
                a: x,
                b: y,
                hi,
                lo: c[2 * i],
            }),
            (Some(&x), None) | (None, Some(&x)) => out.push(Constraint::BoolEq(hi, x)),
            (None, None) => {}
        }
        i += 1;
    }
}

/// Clauses of the unary adder `a + b = c`, for arbitrary offsets.
///
/// Sentinel bits make two corner clauses trivially true when `c` spans
/// exactly `[a.lo + b.lo, a.hi + b.hi]`; the rest are `2(m + p + mp)` clauses.
pub fn adder_clauses(a: &UnaryInt, b: &UnaryInt, c: &UnaryInt, emit: &mut dyn FnMut(&[Lit])) {
    let (m, p) = (a.width() as i64, b.width() as i64);
    let base = a.offset + b.offset;
    for i in 0..=m {
        for j in 0..=p {
            emit(&[!a.bit(i), !b.bit(j), c.geq(base + i + j)]);
            emit(&[a.bit(i + 1), b.bit(j + 1), !c.geq(base + i + j + 1)]);
        }
    }
}

/// The six clauses of `hi = a or b`, `lo = a and b`; the first three when
/// `one_sided` (enough when only upward implications matter).
pub fn comparator_clauses(a: Lit, b: Lit, hi: Lit, lo: Lit, one_sided: bool, emit: &mut dyn FnMut(&[Lit])) {
    emit(&[!a, hi]);
    emit(&[!b, hi]);
    emit(&[!a, !b, lo]);
    if !one_sided {
        emit(&[a, b, !hi]);
        emit(&[a, !lo]);
        emit(&[b, !lo]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Cost {
    pub clauses: u64,
    pub vars: u64,
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost {
            clauses: self.clauses + o.clauses,
            vars: self.vars + o.vars,
        }
    }
}

pub const COMPARATOR_CLAUSES: u64 = 6;

pub fn adder_cost(m: u64, p: u64) -> Cost {
    Cost {
        clauses: 2 * (m + p + m * p),
        vars: 0,
    }
}

/// Predicted size of `int_plus` over widths `m` and `p`, per strategy.
#[derive(Debug, Default)]
pub struct CostModel {
    merger: HashMap<(u64, u64), Cost>,
    hybrid: HashMap<(u64, u64), Cost>,
}

impl CostModel {
    pub fn new() -> CostModel {
        CostModel::default()
    }

    pub fn cost(&mut self, s: Strategy, m: u64, p: u64) -> Cost {
        match s {
            Strategy::Adder => adder_cost(m, p),
            Strategy::Merger => self.merger(m, p),
            Strategy::Hybrid => self.hybrid(m, p),
        }
    }

    pub fn merger(&mut self, m: u64, p: u64) -> Cost {
        if let Some(&c) = self.merger.get(&(m, p)) {
            return c;
        }
        let c = self.expand(m, p, Strategy::Merger);
        self.merger.insert((m, p), c);
        c
    }

    pub fn hybrid(&mut self, m: u64, p: u64) -> Cost {
        if let Some(&c) = self.hybrid.get(&(m, p)) {
            return c;
        }
        let adder = adder_cost(m, p);
        let split = self.expand(m, p, Strategy::Hybrid);
        let c = if adder.clauses <= split.clauses { adder } else { split };
        self.hybrid.insert((m, p), c);
        c
    }

    /// Whether the hybrid strategy keeps a node of these widths as an adder.
    pub fn hybrid_keeps_adder(&mut self, m: u64, p: u64) -> bool {
        adder_cost(m, p).clauses <= self.expand(m, p, Strategy::Hybrid).clauses
    }

    /// Cost of one merger level with children costed by `child`.
    fn expand(&mut self, m: u64, p: u64, child: Strategy) -> Cost {
        if m == 0 || p == 0 {
            return Cost::default();
        }
        if m == 1 && p == 1 {
            return Cost {
                clauses: COMPARATOR_CLAUSES,
                vars: 0,
            };
        }
        let (mo, me) = (m.div_ceil(2), m / 2);
        let (po, pe) = (p.div_ceil(2), p / 2);
        let mut total = Cost::default();
        for (x, y) in [(mo, po), (me, pe)] {
            if x > 0 && y > 0 {
                total = total + self.cost(child, x, y);
                total.vars += x + y;
            }
        }
        let (co, ce) = (mo + po, me + pe);
        let comparators = if co == ce { ce.saturating_sub(1) } else { ce };
        total.clauses += COMPARATOR_CLAUSES * comparators;
        total
    }
}
