//! Compiles finite-domain constraint models to CNF through the unary order
//! encoding, with equi-propagation, cardinality networks, complete
//! equi-propagation and a binary arithmetic extension.

pub mod binary_ext;
pub mod cardinality;
pub mod cep;
pub mod compile;
pub mod constraint;
pub mod encode;
pub mod equiv;
pub mod error;
pub mod instances;
pub mod int;
pub mod lit;
pub mod model;
pub mod parser;
pub mod sat;
pub mod simplify;

pub use constraint::{ArrayOp, BoolOp, Constraint, Rel};
pub use encode::{CnfDoc, EncodeOptions, VarMap};
pub use error::{Error, Result};
pub use int::{BinaryInt, UnaryInt};
pub use lit::{Lit, Var};
pub use model::{Entity, Model};
