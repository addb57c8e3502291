//! Internal constraint forms.
//!
//! Surface templates are lowered into these variants. Several templates share
//! a variant (e.g. `bool_array_and_reif` becomes an [`Constraint::OrReif`] on
//! negated literals, `bool_array_iff` an [`Constraint::Xor`] with a parity
//! constant).

use crate::int::{BinaryInt, UnaryInt};
use crate::lit::Lit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    Or,
    And,
    Xor,
    Iff,
}

impl BoolOp {
    pub fn name(self) -> &'static str {
        match self {
            BoolOp::Or => "or",
            BoolOp::And => "and",
            BoolOp::Xor => "xor",
            BoolOp::Iff => "iff",
        }
    }

    pub fn eval(self, xs: &[bool]) -> bool {
        match self {
            BoolOp::Or => xs.iter().any(|&x| x),
            BoolOp::And => xs.iter().all(|&x| x),
            BoolOp::Xor => xs.iter().filter(|&&x| x).count() % 2 == 1,
            // left fold of <->; the empty fold is true
            BoolOp::Iff => match xs.split_first() {
                None => true,
                Some((&first, rest)) => rest.iter().fold(first, |acc, &x| acc == x),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Leq,
    Geq,
    Eq,
    Lt,
    Gt,
    Neq,
}

impl Rel {
    pub fn name(self) -> &'static str {
        match self {
            Rel::Leq => "leq",
            Rel::Geq => "geq",
            Rel::Eq => "eq",
            Rel::Lt => "lt",
            Rel::Gt => "gt",
            Rel::Neq => "neq",
        }
    }

    pub fn eval(self, a: i64, b: i64) -> bool {
        match self {
            Rel::Leq => a <= b,
            Rel::Geq => a >= b,
            Rel::Eq => a == b,
            Rel::Lt => a < b,
            Rel::Gt => a > b,
            Rel::Neq => a != b,
        }
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Leq => Rel::Gt,
            Rel::Geq => Rel::Lt,
            Rel::Eq => Rel::Neq,
            Rel::Lt => Rel::Geq,
            Rel::Gt => Rel::Leq,
            Rel::Neq => Rel::Eq,
        }
    }

    pub const ALL: [Rel; 6] = [Rel::Leq, Rel::Geq, Rel::Eq, Rel::Lt, Rel::Gt, Rel::Neq];
    pub const LINEAR: [Rel; 5] = [Rel::Leq, Rel::Geq, Rel::Eq, Rel::Lt, Rel::Gt];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrayOp {
    Times,
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    BoolEq(Lit, Lit),
    /// Disjunction of the literals.
    Clause(Vec<Lit>),
    /// Conjunction of the literals.
    And(Vec<Lit>),
    /// Odd number of the literals are true.
    Xor(Vec<Lit>),
    /// `r <-> (x1 or ... or xn)`.
    OrReif { xs: Vec<Lit>, r: Lit },
    /// `[hi, lo]` is `[a, b]` sorted in decreasing order.
    Comparator { a: Lit, b: Lit, hi: Lit, lo: Lit },
    /// `r <-> at least two of x, y, z`.
    Majority { x: Lit, y: Lit, z: Lit, r: Lit },
    IntRel { rel: Rel, a: UnaryInt, b: UnaryInt },
    IntRelReif { rel: Rel, a: UnaryInt, b: UnaryInt, r: Lit },
    AllDiff(Vec<UnaryInt>),
    Abs { a: UnaryInt, r: UnaryInt },
    Plus { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    Times { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    Div { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    Mod { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    Max { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    Min { a: UnaryInt, b: UnaryInt, c: UnaryInt },
    ArrayOp { op: ArrayOp, xs: Vec<UnaryInt>, r: UnaryInt },
    /// `(sum xs) rel rhs`.
    BoolSum { rel: Rel, xs: Vec<Lit>, rhs: UnaryInt },
    BoolPb { rel: Rel, coeffs: Vec<i64>, xs: Vec<Lit>, rhs: UnaryInt },
    BoolSumModK { xs: Vec<Lit>, k: i64, r: UnaryInt },
    IntSum { rel: Rel, xs: Vec<UnaryInt>, rhs: UnaryInt },
    IntLin { rel: Rel, coeffs: Vec<i64>, xs: Vec<UnaryInt>, rhs: UnaryInt },
    IntSumModK { xs: Vec<UnaryInt>, k: i64, r: UnaryInt },
    /// `r <-> a <= b` (or `<` when strict), lexicographic with true > false.
    BoolLex { strict: bool, a: Vec<Lit>, b: Vec<Lit>, r: Lit },
    IntLex { strict: bool, a: Vec<UnaryInt>, b: Vec<UnaryInt> },
    /// `r = x mod k` for a positive constant `k`.
    ModConst { x: UnaryInt, k: i64, r: UnaryInt },
    BinarySumEq { xs: Vec<BinaryInt>, sum: BinaryInt },
    BinaryTimes { a: BinaryInt, b: BinaryInt, c: BinaryInt },
    BinarySquare { a: BinaryInt, c: BinaryInt },
}

impl Constraint {
    pub fn tag(&self) -> &'static str {
        use Constraint::*;
        match self {
            BoolEq(..) => "bool_eq",
            Clause(_) => "bool_array_or",
            And(_) => "bool_array_and",
            Xor(_) => "bool_array_xor",
            OrReif { .. } => "bool_array_or_reif",
            Comparator { .. } => "comparator",
            Majority { .. } => "majority",
            IntRel { .. } => "int_rel",
            IntRelReif { .. } => "int_rel_reif",
            AllDiff(_) => "int_array_allDiff",
            Abs { .. } => "int_abs",
            Plus { .. } => "int_plus",
            Times { .. } => "int_times",
            Div { .. } => "int_div",
            Mod { .. } => "int_mod",
            Max { .. } => "int_max",
            Min { .. } => "int_min",
            ArrayOp { .. } => "int_array_op",
            BoolSum { .. } => "bool_array_sum_rel",
            BoolPb { .. } => "bool_array_pb_rel",
            BoolSumModK { .. } => "bool_array_sum_modK",
            IntSum { .. } => "int_array_sum_rel",
            IntLin { .. } => "int_array_lin_rel",
            IntSumModK { .. } => "int_array_sum_modK",
            BoolLex { .. } => "bool_arrays_lex",
            IntLex { .. } => "int_arrays_lex",
            ModConst { .. } => "mod_const",
            BinarySumEq { .. } => "binary_array_sum_eq",
            BinaryTimes { .. } => "binary_times",
            BinarySquare { .. } => "binary_square",
        }
    }

    /// Tag used for clause statistics; relations are spelled out.
    pub fn stat_tag(&self) -> &'static str {
        use Constraint::*;
        const REL: [&str; 6] = ["int_leq", "int_geq", "int_eq", "int_lt", "int_gt", "int_neq"];
        const REIF: [&str; 6] = [
            "int_leq_reif",
            "int_geq_reif",
            "int_eq_reif",
            "int_lt_reif",
            "int_gt_reif",
            "int_neq_reif",
        ];
        let idx = |r: &Rel| Rel::ALL.iter().position(|x| x == r).unwrap();
        match self {
            IntRel { rel, .. } => REL[idx(rel)],
            IntRelReif { rel, .. } => REIF[idx(rel)],
            _ => self.tag(),
        }
    }

    /// Visits every literal, including integer bits.
    pub fn for_each_lit_mut(&mut self, f: &mut impl FnMut(&mut Lit)) {
        use Constraint::*;
        fn ints(xs: &mut [UnaryInt], f: &mut impl FnMut(&mut Lit)) {
            for x in xs {
                x.bits.iter_mut().for_each(&mut *f);
            }
        }
        fn lits(xs: &mut [Lit], f: &mut impl FnMut(&mut Lit)) {
            xs.iter_mut().for_each(f);
        }
        fn bins(xs: &mut [BinaryInt], f: &mut impl FnMut(&mut Lit)) {
            for x in xs {
                x.bits.iter_mut().for_each(&mut *f);
            }
        }
        match self {
            BoolEq(a, b) => {
                f(a);
                f(b);
            }
            Clause(xs) | And(xs) | Xor(xs) => lits(xs, f),
            OrReif { xs, r } => {
                lits(xs, f);
                f(r);
            }
            Comparator { a, b, hi, lo } => {
                f(a);
                f(b);
                f(hi);
                f(lo);
            }
            Majority { x, y, z, r } => {
                f(x);
                f(y);
                f(z);
                f(r);
            }
            IntRel { a, b, .. } => {
                ints(std::slice::from_mut(a), f);
                ints(std::slice::from_mut(b), f);
            }
            IntRelReif { a, b, r, .. } => {
                ints(std::slice::from_mut(a), f);
                ints(std::slice::from_mut(b), f);
                f(r);
            }
            AllDiff(xs) => ints(xs, f),
            Abs { a, r } => {
                ints(std::slice::from_mut(a), f);
                ints(std::slice::from_mut(r), f);
            }
            Plus { a, b, c } | Times { a, b, c } | Div { a, b, c } | Mod { a, b, c }
            | Max { a, b, c } | Min { a, b, c } => {
                ints(std::slice::from_mut(a), f);
                ints(std::slice::from_mut(b), f);
                ints(std::slice::from_mut(c), f);
            }
            ArrayOp { xs, r, .. } => {
                ints(xs, f);
                ints(std::slice::from_mut(r), f);
            }
            BoolSum { xs, rhs, .. } | BoolPb { xs, rhs, .. } => {
                lits(xs, f);
                ints(std::slice::from_mut(rhs), f);
            }
            BoolSumModK { xs, r, .. } => {
                lits(xs, f);
                ints(std::slice::from_mut(r), f);
            }
            IntSum { xs, rhs, .. } | IntLin { xs, rhs, .. } => {
                ints(xs, f);
                ints(std::slice::from_mut(rhs), f);
            }
            IntSumModK { xs, r, .. } => {
                ints(xs, f);
                ints(std::slice::from_mut(r), f);
            }
            BoolLex { a, b, r, .. } => {
                lits(a, f);
                lits(b, f);
                f(r);
            }
            IntLex { a, b, .. } => {
                ints(a, f);
                ints(b, f);
            }
            ModConst { x, r, .. } => {
                ints(std::slice::from_mut(x), f);
                ints(std::slice::from_mut(r), f);
            }
            BinarySumEq { xs, sum } => {
                bins(xs, f);
                bins(std::slice::from_mut(sum), f);
            }
            BinaryTimes { a, b, c } => {
                bins(std::slice::from_mut(a), f);
                bins(std::slice::from_mut(b), f);
                bins(std::slice::from_mut(c), f);
            }
            BinarySquare { a, c } => {
                bins(std::slice::from_mut(a), f);
                bins(std::slice::from_mut(c), f);
            }
        }
    }

    /// All literals mentioned, in visiting order.
    pub fn lits(&self) -> Vec<Lit> {
        let mut out = Vec::new();
        let mut c = self.clone();
        c.for_each_lit_mut(&mut |l| out.push(*l));
        out
    }
}
