//! Binary arithmetic reduced to the unary kernel: bucket sums, channeling,
//! multiplication by partial products and squaring.

use crate::constraint::{Constraint, Rel};
use crate::error::{Error, Result};
use crate::int::{BinaryInt, UnaryInt};
use crate::lit::Lit;
use crate::model::Model;

/// Bucket `j` collects every bit of weight `2^j`.
pub fn buckets(xs: &[BinaryInt]) -> Vec<Vec<Lit>> {
    let w = xs.iter().map(|x| x.width()).max().unwrap_or(0);
    (0..w)
        .map(|j| xs.iter().map(|x| x.bit(j)).filter(|b| !b.is_false()).collect())
        .collect()
}

/// `sum(xs) = sum` for binary numbers.
pub fn decompose_sum(m: &mut Model, xs: &[BinaryInt], sum: &BinaryInt) -> Vec<Constraint> {
    sum_buckets(m, buckets(xs), sum)
}

/// Counts each bucket in unary, then folds the counts into binary.
pub fn sum_buckets(m: &mut Model, buckets: Vec<Vec<Lit>>, sum: &BinaryInt) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut us = Vec::with_capacity(buckets.len());
    for b in buckets {
        let u = match b.len() {
            0 => UnaryInt::constant(0),
            1 => UnaryInt::from_lit(b[0]),
            n => {
                let u = m.new_defined(0, n as i64);
                out.push(Constraint::BoolSum {
                    rel: Rel::Eq,
                    xs: b,
                    rhs: u.clone(),
                });
                u
            }
        };
        us.push(u);
    }
    buckets_to_binary(m, us, sum, &mut out);
    out
}

/// Unary bucket counts (offset 0, least significant first) to binary bits:
/// `U' = U + C`, bit `= U' mod 2`, `C' = U' div 2`, halving the carry once
/// the buckets run out.
pub fn buckets_to_binary(m: &mut Model, us: Vec<UnaryInt>, sum: &BinaryInt, out: &mut Vec<Constraint>) {
    let mut carry = UnaryInt::constant(0);
    let mut j = 0;
    loop {
        let zero = |x: &UnaryInt| x.fixed_value() == Some(0);
        let u = match us.get(j) {
            Some(u) => u.clone(),
            None if zero(&carry) => break,
            None => UnaryInt::constant(0),
        };
        let up = if zero(&carry) {
            u
        } else if zero(&u) {
            carry
        } else {
            let up = m.new_defined(0, u.hi() + carry.hi());
            out.push(Constraint::Plus {
                a: u,
                b: carry,
                c: up.clone(),
            });
            up
        };
        if j >= sum.width() {
            // no bits left for this weight or above
            m.assert_lt(&up, 1);
            carry = UnaryInt::constant(0);
        } else {
            out.push(Constraint::ModConst {
                x: up.clone(),
                k: 2,
                r: UnaryInt::from_lit(sum.bit(j)),
            });
            carry = div2(&up);
        }
        j += 1;
    }
    for k in j..sum.width() {
        m.assert_lit(!sum.bit(k));
    }
}

/// `u div 2` for `u` with offset 0: the even-positioned bits.
pub fn div2(u: &UnaryInt) -> UnaryInt {
    UnaryInt::new(0, (1..=u.hi() / 2).map(|k| u.geq(2 * k)).collect())
}

/// Channels a non-negative unary integer to binary.
pub fn channel(m: &mut Model, u: &UnaryInt, b: &BinaryInt) -> Result<Vec<Constraint>> {
    if u.lo() < 0 {
        return Err(Error::Unsupported(format!(
            "channeling needs a non-negative domain, got lower bound {}",
            u.lo()
        )));
    }
    let view = UnaryInt::new(0, (1..=u.hi()).map(|t| u.geq(t)).collect());
    let mut out = Vec::new();
    buckets_to_binary(m, vec![view], b, &mut out);
    Ok(out)
}

/// A fresh `z <-> x and y`.
fn and_gate(m: &mut Model, x: Lit, y: Lit, out: &mut Vec<Constraint>) -> Lit {
    let z = m.fresh_lit();
    out.push(Constraint::OrReif { xs: vec![!x, !y], r: !z });
    z
}

/// `a * b = c` as the sum of shifted partial-product rows.
pub fn decompose_times(m: &mut Model, a: &BinaryInt, b: &BinaryInt, c: &BinaryInt) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(b.width());
    for j in 0..b.width() {
        let mut row = vec![Lit::FALSE; j];
        for i in 0..a.width() {
            row.push(and_gate(m, a.bit(i), b.bit(j), &mut out));
        }
        rows.push(BinaryInt::new(row));
    }
    out.push(Constraint::BinarySumEq {
        xs: rows,
        sum: c.clone(),
    });
    out
}

/// Columns of `a * a` after aliasing `z_ji = z_ij`, `z_ii = a_i` and
/// promoting each doubled `z_ij` one column left. Also returns the fresh
/// partial products.
pub fn square_columns(m: &mut Model, a: &BinaryInt, out: &mut Vec<Constraint>) -> (Vec<Vec<Lit>>, Vec<Lit>) {
    let w = a.width();
    let mut cols: Vec<Vec<Lit>> = vec![Vec::new(); 2 * w];
    let mut fresh = Vec::new();
    for v in 0..2 * w {
        if v % 2 == 0 && v / 2 < w {
            cols[v].push(a.bit(v / 2));
        }
        // z_ij with i < j lands in column i + j + 1
        for i in 0..w {
            if v < i + 2 {
                break;
            }
            let j = v - 1 - i;
            if i < j && j < w {
                let z = and_gate(m, a.bit(i), a.bit(j), out);
                fresh.push(z);
                cols[v].push(z);
            }
        }
    }
    for c in cols.iter_mut() {
        c.retain(|l| !l.is_false());
    }
    (cols, fresh)
}

/// `a * a = c` over the optimized columns.
pub fn decompose_square(m: &mut Model, a: &BinaryInt, c: &BinaryInt) -> Vec<Constraint> {
    let mut out = Vec::new();
    let (cols, _) = square_columns(m, a, &mut out);
    out.extend(sum_buckets(m, cols, c));
    out
}
