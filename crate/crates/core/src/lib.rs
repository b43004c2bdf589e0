//! Kazhdan–Lusztig polynomials of boolean elements in Coxeter groups whose
//! graph is a tree, and in affine `Ã_n`.
//!
//! Two independent routes are provided: closed product formulas read off the
//! two-row diagram of a pair (`closed_form`), and Deodhar's recursion on the
//! boolean Bruhat interval (`oracle`).

pub mod boolean;
pub mod closed_form;
pub mod coxeter;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod poincare;
pub mod poly;
pub mod verify;

pub use coxeter::{Coxeter, CoxeterGraph, GeneratorSet, GraphMode, Label, Side, Word};
pub use error::{Error, Result};
pub use poly::Poly;
