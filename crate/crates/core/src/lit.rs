use std::fmt;
use std::ops::Not;

/// Identifier of a Boolean variable. Ids start at 1.
pub type Var = u32;

const TRUE_CODE: i32 = i32::MAX;

/// A Boolean literal: a possibly negated variable or one of the two constants.
///
/// Encoded in DIMACS style: `+v` is the variable, `-v` its negation, and the
/// constants sit at the extreme codes so that negation is plain integer negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub const TRUE: Lit = Lit(TRUE_CODE);
    pub const FALSE: Lit = Lit(-TRUE_CODE);

    #[inline]
    pub fn pos(v: Var) -> Lit {
        debug_assert!(v >= 1 && (v as i64) < TRUE_CODE as i64);
        Lit(v as i32)
    }

    #[inline]
    pub fn neg(v: Var) -> Lit {
        !Lit::pos(v)
    }

    #[inline]
    pub fn new(v: Var, negated: bool) -> Lit {
        if negated {
            Lit::neg(v)
        } else {
            Lit::pos(v)
        }
    }

    #[inline]
    pub fn constant(b: bool) -> Lit {
        if b {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    /// Builds a literal from a nonzero DIMACS integer.
    pub fn from_dimacs(x: i32) -> Lit {
        assert!(x != 0 && x.abs() < TRUE_CODE, "invalid DIMACS literal {x}");
        Lit(x)
    }

    #[inline]
    pub fn is_const(self) -> bool {
        self.0.abs() == TRUE_CODE
    }

    #[inline]
    pub fn is_true(self) -> bool {
        self.0 == TRUE_CODE
    }

    #[inline]
    pub fn is_false(self) -> bool {
        self.0 == -TRUE_CODE
    }

    /// The constant value, if this literal is a constant.
    #[inline]
    pub fn const_value(self) -> Option<bool> {
        match self.0 {
            TRUE_CODE => Some(true),
            x if x == -TRUE_CODE => Some(false),
            _ => None,
        }
    }

    /// Variable of a non-constant literal.
    #[inline]
    pub fn var(self) -> Option<Var> {
        if self.is_const() {
            None
        } else {
            Some(self.0.unsigned_abs())
        }
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 < 0
    }

    /// DIMACS code; only meaningful for non-constant literals.
    #[inline]
    pub fn code(self) -> i32 {
        self.0
    }

    /// Applies a sign: `l.xor(true)` negates.
    #[inline]
    pub fn xor(self, flip: bool) -> Lit {
        if flip {
            !self
        } else {
            self
        }
    }

    /// Value under an assignment indexed by variable id.
    pub fn eval(self, assignment: impl Fn(Var) -> bool) -> bool {
        match self.const_value() {
            Some(b) => b,
            None => assignment(self.0.unsigned_abs()) != self.is_negated(),
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.const_value() {
            Some(true) => f.write_str("T"),
            Some(false) => f.write_str("F"),
            None => write!(f, "{}", self.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_involution() {
        for l in [Lit::TRUE, Lit::FALSE, Lit::pos(3), Lit::neg(7)] {
            assert_eq!(!!l, l);
        }
        assert_eq!(!Lit::FALSE, Lit::TRUE);
        assert_eq!(Lit::neg(4).var(), Some(4));
        assert!(Lit::neg(4).is_negated());
        assert_eq!(Lit::TRUE.var(), None);
    }

    #[test]
    fn eval_respects_sign() {
        let a = |v: Var| v == 2;
        assert!(Lit::pos(2).eval(a));
        assert!(!Lit::neg(2).eval(a));
        assert!(Lit::neg(5).eval(a));
        assert!(Lit::TRUE.eval(a));
    }
}
