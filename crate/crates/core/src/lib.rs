//! Negative Ricci curvature on rank-one solvable extensions of the filiform
//! nilpotent Lie algebras `L_n` and `Q_n`.
//!
//! The crate decides, in exact rational arithmetic, whether a derivation `D`
//! of a filiform algebra `n` makes the extension `g = ℝf ⊕ n` (with
//! `[f, X] = DX`) carry a left-invariant metric of negative Ricci curvature,
//! and when it does, constructs such a metric and certifies it numerically.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod construct;
pub mod criterion;
pub mod error;
pub mod linalg;
pub mod ricci;

pub use error::{Error, Result};
