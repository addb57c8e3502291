//! Per-constraint equi-propagation, partial evaluation and decomposition.

use crate::binary_ext;
use crate::cardinality::{decompose_sum_eq, decompose_sum_leq};
use crate::constraint::{ArrayOp as Op, Constraint, Rel};
use crate::int::UnaryInt;
use crate::lit::Lit;
use crate::model::Model;

pub enum Action {
    Keep(Constraint),
    Delete,
    Replace(Vec<Constraint>),
}

use Action::{Delete, Keep, Replace};

/// Asserts the bounds implied by constant bits and returns `(min, max)`.
///
/// A `true` bit forces every threshold below it, a `false` bit every one
/// above it.
pub fn tighten(m: &mut Model, x: &UnaryInt) -> (i64, i64) {
    let r = m.resolve_int(x);
    let lo = r
        .bits
        .iter()
        .rposition(|b| b.is_true())
        .map_or(r.offset, |p| r.offset + p as i64 + 1);
    let hi = r
        .bits
        .iter()
        .position(|b| b.is_false())
        .map_or(r.hi(), |p| r.offset + p as i64);
    if lo > hi {
        m.set_unsat();
        return (lo, hi);
    }
    m.assert_geq(x, lo);
    m.assert_lt(x, hi + 1);
    (lo, hi)
}

fn fixed(m: &mut Model, x: &UnaryInt) -> Option<i64> {
    let (lo, hi) = tighten(m, x);
    (lo == hi).then_some(lo)
}

fn product_range(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    let c = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    (*c.iter().min().unwrap(), *c.iter().max().unwrap())
}

pub fn apply(m: &mut Model, c: Constraint) -> Action {
    use Constraint::*;
    match c {
        BoolEq(a, b) => {
            m.union(a, b);
            Delete
        }
        Clause(xs) => clause(m, xs),
        And(xs) => {
            for x in xs {
                m.assert_lit(x);
            }
            Delete
        }
        Xor(xs) => xor(m, xs),
        OrReif { xs, r } => or_reif(m, xs, r),
        Comparator { a, b, hi, lo } => comparator(m, a, b, hi, lo),
        Majority { x, y, z, r } => majority(m, x, y, z, r),
        IntRel { rel, a, b } => int_rel(m, rel, a, b),
        IntRelReif { rel, a, b, r } => int_rel_reif(m, rel, a, b, r),
        AllDiff(xs) => {
            let mut out = Vec::new();
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    out.push(IntRel {
                        rel: Rel::Neq,
                        a: xs[i].clone(),
                        b: xs[j].clone(),
                    });
                }
            }
            Replace(out)
        }
        Abs { a, r } => {
            let n = a.negated();
            Replace(vec![Max { a, b: n, c: r }])
        }
        Max { a, b, c } => Replace(vec![ArrayOp {
            op: Op::Max,
            xs: vec![a, b],
            r: c,
        }]),
        Min { a, b, c } => Replace(vec![ArrayOp {
            op: Op::Min,
            xs: vec![a, b],
            r: c,
        }]),
        ArrayOp { op, xs, r } => array_op(m, op, xs, r),
        Plus { a, b, c } => plus(m, a, b, c),
        Times { a, b, c } => times(m, a, b, c),
        Div { a, b, c } => div(m, a, b, c),
        Mod { a, b, c } => modulo(m, a, b, c),
        ModConst { x, k, r } => mod_const(m, x, k, r),
        BoolSum { rel, xs, rhs } => bool_sum(m, rel, xs, rhs),
        BoolPb { rel, coeffs, xs, rhs } => {
            let views = coeffs
                .iter()
                .zip(&xs)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, &x)| weighted(c, x))
                .collect();
            Replace(vec![IntSum { rel, xs: views, rhs }])
        }
        BoolSumModK { xs, k, r } => {
            let s = m.new_defined(0, xs.len() as i64);
            Replace(vec![
                BoolSum {
                    rel: Rel::Eq,
                    xs,
                    rhs: s.clone(),
                },
                ModConst { x: s, k, r },
            ])
        }
        IntSum { rel, xs, rhs } => int_sum(m, rel, xs, rhs),
        IntLin { rel, coeffs, xs, rhs } => {
            let views = coeffs
                .iter()
                .zip(&xs)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, x)| x.scaled(c))
                .collect();
            Replace(vec![IntSum { rel, xs: views, rhs }])
        }
        IntSumModK { xs, k, r } => {
            let lo = xs.iter().map(|x| x.lo()).sum();
            let hi = xs.iter().map(|x| x.hi()).sum();
            let s = m.new_defined(lo, hi);
            Replace(vec![
                IntSum {
                    rel: Rel::Eq,
                    xs,
                    rhs: s.clone(),
                },
                ModConst { x: s, k, r },
            ])
        }
        BoolLex { strict, a, b, r } => bool_lex(m, strict, a, b, r),
        IntLex { strict, a, b } => int_lex(m, strict, a, b),
        BinarySumEq { xs, sum } => Replace(binary_ext::decompose_sum(m, &xs, &sum)),
        BinaryTimes { a, b, c } => Replace(binary_ext::decompose_times(m, &a, &b, &c)),
        BinarySquare { a, c } => Replace(binary_ext::decompose_square(m, &a, &c)),
    }
}

/// `c * x` as an order-encoded view: `c` copies of `x`, or `c` copies of
/// `!x` above offset `c` when `c` is negative.
pub fn weighted(c: i64, x: Lit) -> UnaryInt {
    if c >= 0 {
        UnaryInt::new(0, vec![x; c as usize])
    } else {
        UnaryInt::new(c, vec![!x; (-c) as usize])
    }
}

fn clause(m: &mut Model, xs: Vec<Lit>) -> Action {
    let mut out: Vec<Lit> = Vec::with_capacity(xs.len());
    for x in xs {
        if x.is_true() || out.contains(&!x) {
            return Delete;
        }
        if !x.is_false() && !out.contains(&x) {
            out.push(x);
        }
    }
    match out.len() {
        0 => {
            m.set_unsat();
            Delete
        }
        1 => {
            m.assert_lit(out[0]);
            Delete
        }
        _ => Keep(Constraint::Clause(out)),
    }
}

fn xor(m: &mut Model, xs: Vec<Lit>) -> Action {
    // xor(vars) must equal `target`
    let mut target = true;
    let mut vars: Vec<Lit> = Vec::new();
    for x in xs {
        match x.const_value() {
            Some(b) => target ^= b,
            None => {
                let v = if x.is_negated() { !x } else { x };
                target ^= x.is_negated();
                match vars.iter().position(|&y| y == v) {
                    Some(p) => {
                        vars.remove(p);
                    }
                    None => vars.push(v),
                }
            }
        }
    }
    match vars.len() {
        0 => {
            if target {
                m.set_unsat();
            }
            Delete
        }
        1 => {
            m.union(vars[0], Lit::constant(target));
            Delete
        }
        2 => {
            m.union(vars[0], vars[1].xor(target));
            Delete
        }
        _ => {
            if !target {
                vars[0] = !vars[0];
            }
            Keep(Constraint::Xor(vars))
        }
    }
}

fn or_reif(m: &mut Model, xs: Vec<Lit>, r: Lit) -> Action {
    if r.is_true() {
        return Replace(vec![Constraint::Clause(xs)]);
    }
    if r.is_false() {
        for x in xs {
            m.assert_lit(!x);
        }
        return Delete;
    }
    let mut out: Vec<Lit> = Vec::with_capacity(xs.len());
    for x in xs {
        if x.is_true() || out.contains(&!x) {
            m.assert_lit(r);
            return Delete;
        }
        if !x.is_false() && !out.contains(&x) {
            out.push(x);
        }
    }
    if out.contains(&!r) {
        m.assert_lit(r);
        return Replace(vec![Constraint::Clause(out)]);
    }
    match out.len() {
        0 => {
            m.assert_lit(!r);
            Delete
        }
        1 => {
            m.union(r, out[0]);
            Delete
        }
        _ => Keep(Constraint::OrReif { xs: out, r }),
    }
}

fn comparator(m: &mut Model, a: Lit, b: Lit, hi: Lit, lo: Lit) -> Action {
    let known = match (a.const_value(), b.const_value()) {
        (Some(v), _) => Some((v, b)),
        (_, Some(v)) => Some((v, a)),
        _ => None,
    };
    if let Some((v, other)) = known {
        if v {
            m.assert_lit(hi);
            m.union(lo, other);
        } else {
            m.union(hi, other);
            m.assert_lit(!lo);
        }
        return Delete;
    }
    if a == b {
        m.union(hi, a);
        m.union(lo, a);
        return Delete;
    }
    if a == !b {
        m.assert_lit(hi);
        m.assert_lit(!lo);
        return Delete;
    }
    if hi.is_false() {
        m.assert_lit(!a);
        m.assert_lit(!b);
        m.assert_lit(!lo);
        return Delete;
    }
    if lo.is_true() {
        m.assert_lit(a);
        m.assert_lit(b);
        m.assert_lit(hi);
        return Delete;
    }
    if hi == lo {
        m.union(a, b);
        m.union(hi, a);
        return Delete;
    }
    if hi.is_true() {
        return Replace(vec![
            Constraint::Clause(vec![a, b]),
            Constraint::OrReif {
                xs: vec![!a, !b],
                r: !lo,
            },
        ]);
    }
    if lo.is_false() {
        return Replace(vec![
            Constraint::Clause(vec![!a, !b]),
            Constraint::OrReif { xs: vec![a, b], r: hi },
        ]);
    }
    Keep(Constraint::Comparator { a, b, hi, lo })
}

fn majority(m: &mut Model, x: Lit, y: Lit, z: Lit, r: Lit) -> Action {
    let ins = [x, y, z];
    for i in 0..3 {
        if let Some(v) = ins[i].const_value() {
            let (p, q) = match i {
                0 => (y, z),
                1 => (x, z),
                _ => (x, y),
            };
            return Replace(vec![if v {
                Constraint::OrReif { xs: vec![p, q], r }
            } else {
                Constraint::OrReif {
                    xs: vec![!p, !q],
                    r: !r,
                }
            }]);
        }
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if ins[i] == ins[j] {
            m.union(r, ins[i]);
            return Delete;
        }
        if ins[i] == !ins[j] {
            m.union(r, ins[k]);
            return Delete;
        }
    }
    match r.const_value() {
        Some(true) => Replace(vec![
            Constraint::Clause(vec![x, y]),
            Constraint::Clause(vec![x, z]),
            Constraint::Clause(vec![y, z]),
        ]),
        Some(false) => Replace(vec![
            Constraint::Clause(vec![!x, !y]),
            Constraint::Clause(vec![!x, !z]),
            Constraint::Clause(vec![!y, !z]),
        ]),
        None => Keep(Constraint::Majority { x, y, z, r }),
    }
}

fn int_rel(m: &mut Model, rel: Rel, a: UnaryInt, b: UnaryInt) -> Action {
    match rel {
        Rel::Geq => int_rel(m, Rel::Leq, b, a),
        Rel::Gt => int_rel(m, Rel::Leq, b.shifted(1), a),
        Rel::Lt => int_rel(m, Rel::Leq, a.shifted(1), b),
        Rel::Eq => {
            let lo = a.lo().min(b.lo());
            let hi = a.hi().max(b.hi());
            for t in lo + 1..=hi {
                m.union(a.geq(t), b.geq(t));
            }
            Delete
        }
        Rel::Neq => {
            let (al, ah) = tighten(m, &a);
            let (bl, bh) = tighten(m, &b);
            if ah < bl || bh < al {
                return Delete;
            }
            if al == ah {
                m.remove_value(&b, al);
                return Delete;
            }
            if bl == bh {
                m.remove_value(&a, bl);
                return Delete;
            }
            Keep(Constraint::IntRel {
                rel,
                a: m.resolve_int(&a),
                b: m.resolve_int(&b),
            })
        }
        Rel::Leq => {
            let (al, _) = tighten(m, &a);
            let (_, bh) = tighten(m, &b);
            m.assert_lt(&a, bh + 1);
            m.assert_geq(&b, al);
            let (_, ah) = tighten(m, &a);
            let (bl, _) = tighten(m, &b);
            if ah <= bl {
                return Delete;
            }
            Keep(Constraint::IntRel {
                rel,
                a: m.resolve_int(&a),
                b: m.resolve_int(&b),
            })
        }
    }
}

fn int_rel_reif(m: &mut Model, rel: Rel, a: UnaryInt, b: UnaryInt, r: Lit) -> Action {
    if let Some(v) = r.const_value() {
        let rel = if v { rel } else { rel.negate() };
        return Replace(vec![Constraint::IntRel { rel, a, b }]);
    }
    match rel {
        Rel::Geq => int_rel_reif(m, Rel::Leq, b, a, r),
        Rel::Gt => int_rel_reif(m, Rel::Leq, b.shifted(1), a, r),
        Rel::Lt => int_rel_reif(m, Rel::Leq, a.shifted(1), b, r),
        Rel::Neq => int_rel_reif(m, Rel::Eq, a, b, !r),
        Rel::Leq => {
            let (al, ah) = tighten(m, &a);
            let (bl, bh) = tighten(m, &b);
            if ah <= bl {
                m.assert_lit(r);
                return Delete;
            }
            if al > bh {
                m.assert_lit(!r);
                return Delete;
            }
            if al == ah {
                m.union(r, b.geq(al));
                return Delete;
            }
            if bl == bh {
                m.union(r, !a.geq(bl + 1));
                return Delete;
            }
            Keep(Constraint::IntRelReif {
                rel,
                a: m.resolve_int(&a),
                b: m.resolve_int(&b),
                r,
            })
        }
        Rel::Eq => {
            let (al, ah) = tighten(m, &a);
            let (bl, bh) = tighten(m, &b);
            if ah < bl || bh < al {
                m.assert_lit(!r);
                return Delete;
            }
            let (v, x) = if al == ah {
                (al, b)
            } else if bl == bh {
                (bl, a)
            } else {
                let r1 = m.fresh_lit();
                let r2 = m.fresh_lit();
                return Replace(vec![
                    Constraint::IntRelReif {
                        rel: Rel::Leq,
                        a: a.clone(),
                        b: b.clone(),
                        r: r1,
                    },
                    Constraint::IntRelReif {
                        rel: Rel::Leq,
                        a: b,
                        b: a,
                        r: r2,
                    },
                    Constraint::OrReif {
                        xs: vec![!r1, !r2],
                        r: !r,
                    },
                ]);
            };
            Replace(vec![Constraint::OrReif {
                xs: vec![!x.geq(v), x.geq(v + 1)],
                r: !r,
            }])
        }
    }
}

fn array_op(m: &mut Model, op: Op, xs: Vec<UnaryInt>, r: UnaryInt) -> Action {
    use Constraint::{IntRel, OrReif, Times};
    if xs.len() == 1 {
        return Replace(vec![IntRel {
            rel: Rel::Eq,
            a: xs[0].clone(),
            b: r,
        }]);
    }
    match op {
        Op::Max | Op::Min => {
            let lo = xs.iter().chain([&r]).map(|x| x.lo()).min().unwrap();
            let hi = xs.iter().chain([&r]).map(|x| x.hi()).max().unwrap();
            let max = op == Op::Max;
            let out = (lo + 1..=hi)
                .map(|t| OrReif {
                    xs: xs.iter().map(|x| x.geq(t).xor(!max)).collect(),
                    r: r.geq(t).xor(!max),
                })
                .collect();
            Replace(out)
        }
        Op::Times => {
            let mut out = Vec::new();
            let mut acc = xs[0].clone();
            for (i, x) in xs.iter().enumerate().skip(1) {
                let target = if i + 1 == xs.len() {
                    r.clone()
                } else {
                    let (lo, hi) = product_range((acc.lo(), acc.hi()), (x.lo(), x.hi()));
                    m.new_free(lo, hi)
                };
                out.push(Times {
                    a: acc,
                    b: x.clone(),
                    c: target.clone(),
                });
                acc = target;
            }
            Replace(out)
        }
    }
}

/// The ad-hoc rules for `a + b = c`: interval propagation in all
/// directions, then unification when one argument is fixed.
fn plus(m: &mut Model, a: UnaryInt, b: UnaryInt, c: UnaryInt) -> Action {
    loop {
        let before = m.merge_count();
        let (al, ah) = tighten(m, &a);
        let (bl, bh) = tighten(m, &b);
        let (cl, ch) = tighten(m, &c);
        m.assert_geq(&c, al + bl);
        m.assert_lt(&c, ah + bh + 1);
        m.assert_geq(&a, cl - bh);
        m.assert_lt(&a, ch - bl + 1);
        m.assert_geq(&b, cl - ah);
        m.assert_lt(&b, ch - al + 1);
        if m.is_unsat() {
            return Delete;
        }
        if m.merge_count() == before {
            break;
        }
    }
    let a = m.resolve_int(&a);
    let b = m.resolve_int(&b);
    let c = m.resolve_int(&c);
    for (x, y) in [(&a, &b), (&b, &a)] {
        if let Some(i) = x.fixed_value() {
            for t in y.lo() + 1..=y.hi() {
                m.union(c.geq(t + i), y.geq(t));
            }
            return Delete;
        }
    }
    if let Some(k) = c.fixed_value() {
        for t in a.lo() + 1..=a.hi() {
            m.union(a.geq(t), !b.geq(k - t + 1));
        }
        return Delete;
    }
    Keep(Constraint::Plus { a, b, c })
}

fn times(m: &mut Model, a: UnaryInt, b: UnaryInt, c: UnaryInt) -> Action {
    let ra = tighten(m, &a);
    let rb = tighten(m, &b);
    for (k, x) in [(ra, &b), (rb, &a)] {
        if k.0 == k.1 {
            return Replace(vec![Constraint::IntRel {
                rel: Rel::Eq,
                a: c,
                b: x.scaled(k.0),
            }]);
        }
    }
    let (lo, hi) = product_range(ra, rb);
    m.assert_geq(&c, lo);
    m.assert_lt(&c, hi + 1);
    Keep(Constraint::Times {
        a: m.resolve_int(&a),
        b: m.resolve_int(&b),
        c: m.resolve_int(&c),
    })
}

fn div(m: &mut Model, a: UnaryInt, b: UnaryInt, c: UnaryInt) -> Action {
    use Constraint::*;
    let (bl, bh) = tighten(m, &b);
    let (al, ah) = tighten(m, &a);
    if bl == bh {
        let k = bl;
        let lo = c.lo().min(al.div_euclid(k));
        let hi = c.hi().max(ah.div_euclid(k));
        for t in lo + 1..=hi {
            m.union(c.geq(t), a.geq(k * t));
        }
        return Delete;
    }
    // a = b*c + r with 0 <= r < b
    let r = m.new_free(0, bh - 1);
    let (pl, ph) = product_range((bl, bh), (c.lo(), c.hi()));
    let p = m.new_free(pl, ph);
    Replace(vec![
        Times {
            a: b.clone(),
            b: c,
            c: p.clone(),
        },
        IntSum {
            rel: Rel::Eq,
            xs: vec![p, r.clone()],
            rhs: a,
        },
        IntRel {
            rel: Rel::Lt,
            a: r,
            b,
        },
    ])
}

fn modulo(m: &mut Model, a: UnaryInt, b: UnaryInt, c: UnaryInt) -> Action {
    use Constraint::*;
    let (bl, bh) = tighten(m, &b);
    let (al, ah) = tighten(m, &a);
    if bl == bh {
        return Replace(vec![ModConst { x: a, k: bl, r: c }]);
    }
    let qs = [
        al.div_euclid(bl),
        al.div_euclid(bh),
        ah.div_euclid(bl),
        ah.div_euclid(bh),
    ];
    let q = m.new_free(*qs.iter().min().unwrap(), *qs.iter().max().unwrap());
    let (pl, ph) = product_range((bl, bh), (q.lo(), q.hi()));
    let p = m.new_free(pl, ph);
    m.assert_geq(&c, 0);
    Replace(vec![
        Times {
            a: b.clone(),
            b: q,
            c: p.clone(),
        },
        IntSum {
            rel: Rel::Eq,
            xs: vec![p, c.clone()],
            rhs: a,
        },
        IntRel {
            rel: Rel::Lt,
            a: c,
            b,
        },
    ])
}

fn mod_const(m: &mut Model, x: UnaryInt, k: i64, r: UnaryInt) -> Action {
    m.assert_geq(&r, 0);
    m.assert_lt(&r, k);
    if k == 1 {
        return Delete;
    }
    if let Some(v) = fixed(m, &x) {
        let v = v.rem_euclid(k);
        m.assert_geq(&r, v);
        m.assert_lt(&r, v + 1);
        return Delete;
    }
    tighten(m, &r);
    Keep(Constraint::ModConst {
        x: m.resolve_int(&x),
        k,
        r: m.resolve_int(&r),
    })
}

fn bool_sum(m: &mut Model, rel: Rel, xs: Vec<Lit>, rhs: UnaryInt) -> Action {
    let ones = xs.iter().filter(|x| x.is_true()).count() as i64;
    let free: Vec<Lit> = xs.into_iter().filter(|x| !x.is_const()).collect();
    let rhs = rhs.shifted(-ones);
    let n = free.len() as i64;
    let k = match fixed(m, &rhs) {
        Some(k) => k,
        None => {
            if rel == Rel::Eq {
                return Replace(decompose_sum_eq(m, &free, &rhs));
            }
            let y = m.new_defined(0, n);
            let mut out = decompose_sum_eq(m, &free, &y);
            out.push(Constraint::IntRel { rel, a: y, b: rhs });
            return Replace(out);
        }
    };
    match rel {
        Rel::Lt => sum_leq(m, free, k - 1),
        Rel::Leq => sum_leq(m, free, k),
        Rel::Gt => sum_leq(m, free.iter().map(|&x| !x).collect(), n - k - 1),
        Rel::Geq => sum_leq(m, free.iter().map(|&x| !x).collect(), n - k),
        Rel::Eq => {
            if k < 0 || k > n {
                m.set_unsat();
                return Delete;
            }
            if k == 0 || k == n {
                for x in free {
                    m.assert_lit(x.xor(k == 0));
                }
                return Delete;
            }
            Replace(decompose_sum_eq(m, &free, &UnaryInt::constant(k)))
        }
        Rel::Neq => unreachable!("sum relations exclude neq"),
    }
}

/// `sum(xs) <= k`, with the special cases that need no network.
fn sum_leq(m: &mut Model, xs: Vec<Lit>, k: i64) -> Action {
    let n = xs.len() as i64;
    if k < 0 {
        m.set_unsat();
        return Delete;
    }
    if k >= n {
        return Delete;
    }
    if k == 0 {
        for x in xs {
            m.assert_lit(!x);
        }
        return Delete;
    }
    if k == n - 1 {
        return Replace(vec![Constraint::Clause(xs.iter().map(|&x| !x).collect())]);
    }
    Replace(decompose_sum_leq(m, &xs, k))
}

fn int_sum(m: &mut Model, rel: Rel, xs: Vec<UnaryInt>, rhs: UnaryInt) -> Action {
    use Constraint::*;
    let mut shift = 0;
    let mut vars = Vec::with_capacity(xs.len());
    for x in xs {
        match fixed(m, &x) {
            Some(v) => shift += v,
            None => vars.push(m.resolve_int(&x)),
        }
    }
    let rhs = rhs.shifted(-shift);
    if rel != Rel::Eq {
        let a = match vars.len() {
            0 => UnaryInt::constant(0),
            1 => vars.pop().unwrap(),
            _ => {
                let lo = vars.iter().map(|x| x.lo()).sum();
                let hi = vars.iter().map(|x| x.hi()).sum();
                let s = m.new_defined(lo, hi);
                return Replace(vec![
                    IntSum {
                        rel: Rel::Eq,
                        xs: vars,
                        rhs: s.clone(),
                    },
                    IntRel { rel, a: s, b: rhs },
                ]);
            }
        };
        return Replace(vec![IntRel { rel, a, b: rhs }]);
    }
    match vars.len() {
        0 => Replace(vec![IntRel {
            rel,
            a: UnaryInt::constant(0),
            b: rhs,
        }]),
        1 => Replace(vec![IntRel {
            rel,
            a: vars.pop().unwrap(),
            b: rhs,
        }]),
        2 => Replace(vec![Plus {
            a: vars[0].clone(),
            b: vars[1].clone(),
            c: rhs,
        }]),
        n => {
            let (rl, rh) = tighten(m, &rhs);
            let (h1, h2) = vars.split_at(n.div_ceil(2));
            let span = |h: &[UnaryInt]| -> (i64, i64) {
                (h.iter().map(|x| x.lo()).sum(), h.iter().map(|x| x.hi()).sum())
            };
            let (l1, u1) = span(h1);
            let (l2, u2) = span(h2);
            let mut out = Vec::new();
            let mut half = |m: &mut Model, h: &[UnaryInt], lo: i64, hi: i64| -> UnaryInt {
                if h.len() == 1 {
                    m.assert_geq(&h[0], lo);
                    m.assert_lt(&h[0], hi + 1);
                    return h[0].clone();
                }
                let t = m.new_defined(lo, hi);
                out.push(IntSum {
                    rel: Rel::Eq,
                    xs: h.to_vec(),
                    rhs: t.clone(),
                });
                t
            };
            let t1 = half(m, h1, l1.max(rl - u2), u1.min(rh - l2));
            let t2 = half(m, h2, l2.max(rl - u1), u2.min(rh - l1));
            out.push(Plus { a: t1, b: t2, c: rhs });
            Replace(out)
        }
    }
}

fn bool_lex(m: &mut Model, strict: bool, a: Vec<Lit>, b: Vec<Lit>, r: Lit) -> Action {
    let n = a.len();
    if n == 0 {
        m.union(r, Lit::constant(!strict));
        return Delete;
    }
    let mut out = Vec::with_capacity(n);
    let mut next = Lit::constant(!strict);
    for i in (0..n).rev() {
        let l = if i == 0 { r } else { m.fresh_lit() };
        out.push(Constraint::Majority {
            x: !a[i],
            y: b[i],
            z: next,
            r: l,
        });
        next = l;
    }
    Replace(out)
}

fn int_lex(m: &mut Model, strict: bool, a: Vec<UnaryInt>, b: Vec<UnaryInt>) -> Action {
    let n = a.len();
    if n == 0 {
        if strict {
            m.set_unsat();
        }
        return Delete;
    }
    let mut out = Vec::new();
    let mut next = Lit::constant(!strict);
    for i in (0..n).rev() {
        let lt = m.fresh_lit();
        let leq = m.fresh_lit();
        out.push(Constraint::IntRelReif {
            rel: Rel::Lt,
            a: a[i].clone(),
            b: b[i].clone(),
            r: lt,
        });
        out.push(Constraint::IntRelReif {
            rel: Rel::Leq,
            a: a[i].clone(),
            b: b[i].clone(),
            r: leq,
        });
        let l = if i == 0 { Lit::TRUE } else { m.fresh_lit() };
        out.push(Constraint::Majority {
            x: lt,
            y: leq,
            z: next,
            r: l,
        });
        next = l;
    }
    Replace(out)
}
