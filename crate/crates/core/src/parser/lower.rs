use std::collections::HashMap;

use super::{Arg, ArgKind, SourceModel, Term};
use crate::binary_ext;
use crate::constraint::{ArrayOp, Constraint, Rel};
use crate::error::{Error, Result};
use crate::int::{BinaryInt, UnaryInt};
use crate::lit::Lit;
use crate::model::{Entity, Model};

fn err<T>(a: &Arg, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: a.line,
        col: a.col,
        msg: msg.into(),
    })
}

struct Lowerer {
    m: Model,
    names: HashMap<String, Entity>,
}

impl Lowerer {
    fn entity(&self, a: &Arg, name: &str) -> &Entity {
        // scope was checked by the parser
        self.names.get(name).unwrap_or_else(|| panic!("undeclared `{name}` at {}:{}", a.line, a.col))
    }

    fn constant(&self, a: &Arg) -> Result<i64> {
        match a.kind {
            ArgKind::Int(v) => Ok(v),
            _ => err(a, format!("expected an integer constant, found `{a}`")),
        }
    }

    fn constants(&self, a: &Arg) -> Result<Vec<i64>> {
        match &a.kind {
            ArgKind::List(xs) => xs.iter().map(|x| self.constant(x)).collect(),
            _ => err(a, format!("expected a list of constants, found `{a}`")),
        }
    }

    fn lit(&self, a: &Arg) -> Result<Lit> {
        match &a.kind {
            ArgKind::Bool(b) => Ok(Lit::constant(*b)),
            ArgKind::Int(v @ (0 | 1)) => Ok(Lit::constant(*v == 1)),
            ArgKind::Ident { name, neg } => match self.entity(a, name) {
                Entity::Bool(l) => Ok(if *neg { !*l } else { *l }),
                _ => err(a, format!("`{name}` is not a Boolean")),
            },
            _ => err(a, format!("expected a Boolean, found `{a}`")),
        }
    }

    fn lits(&self, a: &Arg) -> Result<Vec<Lit>> {
        match &a.kind {
            ArgKind::List(xs) => xs.iter().map(|x| self.lit(x)).collect(),
            _ => err(a, format!("expected a list of Booleans, found `{a}`")),
        }
    }

    fn int(&self, a: &Arg) -> Result<UnaryInt> {
        match &a.kind {
            ArgKind::Int(v) => Ok(UnaryInt::constant(*v)),
            ArgKind::Bool(b) => Ok(UnaryInt::constant(*b as i64)),
            ArgKind::Ident { name, neg } => {
                let x = match self.entity(a, name) {
                    Entity::Int(x) => x.clone(),
                    Entity::Bool(l) => UnaryInt::from_lit(*l),
                    Entity::Binary(_) => return err(a, format!("`{name}` is a binary number, not an integer")),
                };
                Ok(if *neg { x.negated() } else { x })
            }
            ArgKind::List(_) => err(a, format!("expected an integer, found `{a}`")),
        }
    }

    fn ints(&self, a: &Arg) -> Result<Vec<UnaryInt>> {
        match &a.kind {
            ArgKind::List(xs) => xs.iter().map(|x| self.int(x)).collect(),
            _ => err(a, format!("expected a list of integers, found `{a}`")),
        }
    }

    /// A binary number: a declared name, a non-negative constant, or a
    /// list of bits, least significant first.
    fn binary(&self, a: &Arg) -> Result<BinaryInt> {
        match &a.kind {
            ArgKind::Int(v) if *v >= 0 => Ok(BinaryInt::constant(*v as u64)),
            ArgKind::Ident { name, neg: false } => match self.entity(a, name) {
                Entity::Binary(b) => Ok(b.clone()),
                _ => err(a, format!("`{name}` is not a binary number")),
            },
            ArgKind::List(xs) => Ok(BinaryInt::new(xs.iter().map(|x| self.lit(x)).collect::<Result<_>>()?)),
            _ => err(a, format!("expected a binary number, found `{a}`")),
        }
    }

    fn binaries(&self, a: &Arg) -> Result<Vec<BinaryInt>> {
        match &a.kind {
            ArgKind::List(xs) => xs.iter().map(|x| self.binary(x)).collect(),
            _ => err(a, format!("expected a list of binary numbers, found `{a}`")),
        }
    }

    fn declare(&mut self, a: &Arg, e: Entity) {
        let ArgKind::Ident { name, .. } = &a.kind else { unreachable!() };
        self.m.declare(name, e.clone());
        self.names.insert(name.clone(), e);
    }

    fn term(&mut self, t: &Term) -> Result<Vec<Constraint>> {
        use Constraint as C;
        let a = &t.args;
        let name = t.name.as_str();
        let c = match name {
            "new_bool" => {
                let l = self.m.fresh_lit();
                self.declare(&a[0], Entity::Bool(l));
                return Ok(vec![]);
            }
            "new_int" => {
                let (lo, hi) = (self.constant(&a[1])?, self.constant(&a[2])?);
                let x = match self.m.new_unary(lo, hi) {
                    Ok(x) => x,
                    Err(e) => return err(&a[1], e.to_string()),
                };
                self.declare(&a[0], Entity::Int(x));
                return Ok(vec![]);
            }
            "new_binary" => {
                let w = self.constant(&a[1])?;
                if !(0..=62).contains(&w) {
                    return err(&a[1], format!("binary width {w} out of range"));
                }
                let b = self.m.new_binary(w as usize);
                self.declare(&a[0], Entity::Binary(b));
                return Ok(vec![]);
            }
            "bool2int" => {
                let x = self.lit(&a[0])?;
                let i = self.int(&a[1])?;
                if i.lo() != 0 || i.hi() > 1 {
                    return err(&a[1], format!("bool2int needs an integer with domain [0,1], got [{},{}]", i.lo(), i.hi()));
                }
                C::BoolEq(x, i.geq(1))
            }
            "bool_eq" => C::BoolEq(self.lit(&a[0])?, self.lit(&a[1])?),
            "comparator" => C::Comparator {
                a: self.lit(&a[0])?,
                b: self.lit(&a[1])?,
                hi: self.lit(&a[2])?,
                lo: self.lit(&a[3])?,
            },
            "int_array_allDiff" => C::AllDiff(self.ints(&a[0])?),
            "int_abs" => C::Abs {
                a: self.int(&a[0])?,
                r: self.int(&a[1])?,
            },
            "bool_array_sum_modK" | "int_array_sum_modK" => {
                let k = self.constant(&a[1])?;
                if k <= 0 {
                    return err(&a[1], format!("modulus must be positive, got {k}"));
                }
                let r = self.int(&a[2])?;
                if name.starts_with("bool") {
                    C::BoolSumModK { xs: self.lits(&a[0])?, k, r }
                } else {
                    C::IntSumModK { xs: self.ints(&a[0])?, k, r }
                }
            }
            "bool_arrays_lex" | "bool_arrays_lexLt" | "bool_arrays_lex_reif" | "bool_arrays_lexLt_reif" => {
                let (x, y) = (self.lits(&a[0])?, self.lits(&a[1])?);
                if x.len() != y.len() {
                    return err(&a[1], format!("lex arrays differ in length ({} and {})", x.len(), y.len()));
                }
                let r = if a.len() == 3 { self.lit(&a[2])? } else { Lit::TRUE };
                C::BoolLex {
                    strict: name.contains("lexLt"),
                    a: x,
                    b: y,
                    r,
                }
            }
            "int_arrays_lex" | "int_arrays_lexLt" => {
                let (x, y) = (self.ints(&a[0])?, self.ints(&a[1])?);
                if x.len() != y.len() {
                    return err(&a[1], format!("lex arrays differ in length ({} and {})", x.len(), y.len()));
                }
                C::IntLex {
                    strict: name.ends_with("lexLt"),
                    a: x,
                    b: y,
                }
            }
            "binary_array_sum_eq" => C::BinarySumEq {
                xs: self.binaries(&a[0])?,
                sum: self.binary(&a[1])?,
            },
            "binary_times" => C::BinaryTimes {
                a: self.binary(&a[0])?,
                b: self.binary(&a[1])?,
                c: self.binary(&a[2])?,
            },
            "binary_square" => C::BinarySquare {
                a: self.binary(&a[0])?,
                c: self.binary(&a[1])?,
            },
            "int2binary" => {
                let u = self.int(&a[0])?;
                let b = self.binary(&a[1])?;
                return match binary_ext::channel(&mut self.m, &u, &b) {
                    Ok(cs) => Ok(cs),
                    Err(e) => err(&a[0], e.to_string()),
                };
            }
            _ => return self.family(t),
        };
        Ok(vec![c])
    }

    /// Templates whose name carries an operator or relation.
    fn family(&mut self, t: &Term) -> Result<Vec<Constraint>> {
        use Constraint as C;
        let a = &t.args;
        let name = t.name.as_str();
        if let Some(rest) = name.strip_prefix("bool_array_") {
            if let Some(rel) = rest.strip_prefix("sum_") {
                return Ok(vec![C::BoolSum {
                    rel: rel_of(rel),
                    xs: self.lits(&a[0])?,
                    rhs: self.int(&a[1])?,
                }]);
            }
            if let Some(rel) = rest.strip_prefix("pb_") {
                let coeffs = self.constants(&a[0])?;
                let xs = self.lits(&a[1])?;
                if coeffs.len() != xs.len() {
                    return err(&a[1], "coefficient and variable lists differ in length");
                }
                return Ok(vec![C::BoolPb {
                    rel: rel_of(rel),
                    coeffs,
                    xs,
                    rhs: self.int(&a[2])?,
                }]);
            }
            let xs = self.lits(&a[0])?;
            return Ok(vec![match rest.strip_suffix("_reif") {
                Some(op) => bool_reif(op, xs, self.lit(&a[1])?),
                None => bool_op(rest, xs),
            }]);
        }
        if let Some(rest) = name.strip_prefix("bool_") {
            let op = rest.strip_suffix("_reif").unwrap();
            let xs = vec![self.lit(&a[0])?, self.lit(&a[1])?];
            return Ok(vec![bool_reif(op, xs, self.lit(&a[2])?)]);
        }
        if let Some(rest) = name.strip_prefix("int_array_") {
            if let Some(rel) = rest.strip_prefix("sum_") {
                return Ok(vec![C::IntSum {
                    rel: rel_of(rel),
                    xs: self.ints(&a[0])?,
                    rhs: self.int(&a[1])?,
                }]);
            }
            if let Some(rel) = rest.strip_prefix("lin_") {
                let coeffs = self.constants(&a[0])?;
                let xs = self.ints(&a[1])?;
                if coeffs.len() != xs.len() {
                    return err(&a[1], "coefficient and variable lists differ in length");
                }
                return Ok(vec![C::IntLin {
                    rel: rel_of(rel),
                    coeffs,
                    xs,
                    rhs: self.int(&a[2])?,
                }]);
            }
            let xs = self.ints(&a[0])?;
            let r = self.int(&a[1])?;
            if xs.is_empty() && rest != "plus" && rest != "times" {
                return err(&a[0], format!("`{name}` needs a non-empty array"));
            }
            return Ok(vec![match rest {
                "plus" => C::IntSum { rel: Rel::Eq, xs, rhs: r },
                "times" => C::ArrayOp { op: ArrayOp::Times, xs, r },
                "max" => C::ArrayOp { op: ArrayOp::Max, xs, r },
                _ => C::ArrayOp { op: ArrayOp::Min, xs, r },
            }]);
        }
        let rest = name.strip_prefix("int_").unwrap();
        let x = self.int(&a[0])?;
        let y = self.int(&a[1])?;
        if let Some(rel) = rest.strip_suffix("_reif") {
            return Ok(vec![C::IntRelReif {
                rel: rel_of(rel),
                a: x,
                b: y,
                r: self.lit(&a[2])?,
            }]);
        }
        if a.len() == 2 {
            return Ok(vec![C::IntRel { rel: rel_of(rest), a: x, b: y }]);
        }
        let z = self.int(&a[2])?;
        if (rest == "div" || rest == "mod") && y.min_value() <= 0 {
            return err(&a[1], format!("divisor must be positive, its domain starts at {}", y.min_value()));
        }
        Ok(vec![match rest {
            "plus" => C::Plus { a: x, b: y, c: z },
            "times" => C::Times { a: x, b: y, c: z },
            "div" => C::Div { a: x, b: y, c: z },
            "mod" => C::Mod { a: x, b: y, c: z },
            "max" => C::Max { a: x, b: y, c: z },
            _ => C::Min { a: x, b: y, c: z },
        }])
    }
}

fn rel_of(s: &str) -> Rel {
    *Rel::ALL.iter().find(|r| r.name() == s).unwrap()
}

/// `iff` over `n` literals is the parity of the literals plus one more when
/// `n` is even.
fn iff_pad(mut xs: Vec<Lit>) -> Vec<Lit> {
    if xs.len().is_multiple_of(2) {
        xs.push(Lit::TRUE);
    }
    xs
}

fn bool_op(op: &str, xs: Vec<Lit>) -> Constraint {
    match op {
        "or" => Constraint::Clause(xs),
        "and" => Constraint::And(xs),
        "xor" => Constraint::Xor(xs),
        _ => Constraint::Xor(iff_pad(xs)),
    }
}

fn bool_reif(op: &str, xs: Vec<Lit>, r: Lit) -> Constraint {
    match op {
        "or" => Constraint::OrReif { xs, r },
        "and" => Constraint::OrReif {
            xs: xs.into_iter().map(|x| !x).collect(),
            r: !r,
        },
        // r <-> p  is  p xor not r
        "xor" => {
            let mut xs = xs;
            xs.push(!r);
            Constraint::Xor(xs)
        }
        _ => {
            let mut xs = iff_pad(xs);
            xs.push(!r);
            Constraint::Xor(xs)
        }
    }
}

/// Builds a model from checked source.
pub fn lower(src: &SourceModel) -> Result<Model> {
    let mut lw = Lowerer {
        m: Model::new(),
        names: HashMap::new(),
    };
    for t in &src.terms {
        let group = t.label.as_deref().map(|l| lw.m.group_id(l));
        for c in lw.term(t)? {
            lw.m.post(c, group);
        }
    }
    Ok(lw.m)
}
