//! Integer representations: order-encoded (unary) and binary.

use crate::equiv::EquivStore;
use crate::lit::{Lit, Var};

/// An integer in the order encoding.
///
/// `bits[j-1]` stands for `value >= offset + j`. Thresholds left of the
/// vector read `true`, thresholds right of it read `false`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryInt {
    pub offset: i64,
    pub bits: Vec<Lit>,
}

impl UnaryInt {
    pub fn constant(v: i64) -> UnaryInt {
        UnaryInt {
            offset: v,
            bits: Vec::new(),
        }
    }

    pub fn new(offset: i64, bits: Vec<Lit>) -> UnaryInt {
        UnaryInt { offset, bits }
    }

    /// A single-bit integer in `[0,1]` equal to the literal.
    pub fn from_lit(l: Lit) -> UnaryInt {
        UnaryInt::new(0, vec![l])
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// Syntactic lower bound (the offset).
    pub fn lo(&self) -> i64 {
        self.offset
    }

    /// Syntactic upper bound.
    pub fn hi(&self) -> i64 {
        self.offset + self.bits.len() as i64
    }

    /// Bit `j` (1-based) with sentinels on both sides.
    pub fn bit(&self, j: i64) -> Lit {
        if j <= 0 {
            Lit::TRUE
        } else if j as usize > self.bits.len() {
            Lit::FALSE
        } else {
            self.bits[j as usize - 1]
        }
    }

    /// Literal for `self >= v`.
    pub fn geq(&self, v: i64) -> Lit {
        self.bit(v - self.offset)
    }

    /// Literal for `self < v`.
    pub fn lt(&self, v: i64) -> Lit {
        !self.geq(v)
    }

    /// The pair `(self >= v, !(self >= v+1))` whose conjunction means `self == v`.
    pub fn eq_pair(&self, v: i64) -> (Lit, Lit) {
        (self.geq(v), !self.geq(v + 1))
    }

    /// Bits resolved through the store.
    pub fn resolved(&self, store: &EquivStore) -> UnaryInt {
        UnaryInt {
            offset: self.offset,
            bits: self.bits.iter().map(|&b| store.resolve(b)).collect(),
        }
    }

    /// Drops leading `true` bits into the offset and trailing `false` bits.
    pub fn trimmed(&self) -> UnaryInt {
        let lead = self.bits.iter().take_while(|b| b.is_true()).count();
        let tail = self.bits[lead..]
            .iter()
            .rev()
            .take_while(|b| b.is_false())
            .count();
        UnaryInt {
            offset: self.offset + lead as i64,
            bits: self.bits[lead..self.bits.len() - tail].to_vec(),
        }
    }

    /// Lower bound from leading constant bits (call on resolved bits).
    pub fn min_value(&self) -> i64 {
        self.offset + self.bits.iter().take_while(|b| b.is_true()).count() as i64
    }

    /// Upper bound from trailing constant bits (call on resolved bits).
    pub fn max_value(&self) -> i64 {
        let tail = self.bits.iter().rev().take_while(|b| b.is_false()).count();
        self.hi() - tail as i64
    }

    /// Fixed value, if all bits are constants.
    pub fn fixed_value(&self) -> Option<i64> {
        if self.bits.iter().all(|b| b.is_const()) {
            Some(self.offset + self.bits.iter().filter(|b| b.is_true()).count() as i64)
        } else {
            None
        }
    }

    pub fn is_const(&self) -> bool {
        self.fixed_value().is_some()
    }

    /// `-self`: bits reversed and negated, with the offset mirrored.
    pub fn negated(&self) -> UnaryInt {
        UnaryInt {
            offset: -self.hi(),
            bits: self.bits.iter().rev().map(|&b| !b).collect(),
        }
    }

    /// `self + k`.
    pub fn shifted(&self, k: i64) -> UnaryInt {
        UnaryInt {
            offset: self.offset + k,
            bits: self.bits.clone(),
        }
    }

    /// `c * self` for a constant `c`, as a view with repeated literals.
    pub fn scaled(&self, c: i64) -> UnaryInt {
        if c == 0 {
            return UnaryInt::constant(0);
        }
        if c < 0 {
            return self.negated().scaled(-c);
        }
        let mut bits = Vec::with_capacity(self.bits.len() * c as usize);
        for &b in &self.bits {
            for _ in 0..c {
                bits.push(b);
            }
        }
        UnaryInt {
            offset: self.offset * c,
            bits,
        }
    }

    /// Decodes under an assignment: offset plus the index of the last true bit.
    pub fn decode(&self, value: impl Fn(Lit) -> bool) -> i64 {
        let top = self
            .bits
            .iter()
            .rposition(|&b| value(b))
            .map(|p| p as i64 + 1)
            .unwrap_or(0);
        self.offset + top
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bits.iter().filter_map(|b| b.var())
    }
}

/// A binary number, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryInt {
    pub bits: Vec<Lit>,
}

impl BinaryInt {
    pub fn new(bits: Vec<Lit>) -> BinaryInt {
        BinaryInt { bits }
    }

    pub fn constant(mut v: u64) -> BinaryInt {
        let mut bits = Vec::new();
        while v > 0 {
            bits.push(Lit::constant(v & 1 == 1));
            v >>= 1;
        }
        BinaryInt { bits }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// Bit `i` (0-based), `false` beyond the width.
    pub fn bit(&self, i: usize) -> Lit {
        self.bits.get(i).copied().unwrap_or(Lit::FALSE)
    }

    /// Largest value representable given constant bits.
    pub fn max_value(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_false())
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    pub fn resolved(&self, store: &EquivStore) -> BinaryInt {
        BinaryInt {
            bits: self.bits.iter().map(|&b| store.resolve(b)).collect(),
        }
    }

    pub fn decode(&self, value: impl Fn(Lit) -> bool) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| value(b))
            .map(|(i, _)| 1u64 << i)
            .sum()
    }
}

/// Number of bits needed to represent `v` in binary.
pub fn bits_for(v: u64) -> usize {
    (64 - v.leading_zeros()) as usize
}
