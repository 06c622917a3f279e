//! Singularities and bifurcations of Poisson structures on R³, computed on
//! exact truncated jets.
//!
//! The crate is layered bottom-up:
//!
//! - [`jet`]: truncated power series in `x, y, z, ε`, coordinate changes and
//!   exterior calculus;
//! - [`poisson`]: bivector families, Jacobi residual, curl, pushforward and
//!   the Pfaffian correspondence;
//! - [`normal_form`]: the formal reductions (z-form, the `(f̂, ĝ)` normal
//!   form, planar V reduction, Casimirs, A and N normal forms);
//! - [`classifier`]: singularity classes and their invariants;
//! - [`bifurcation`]: scenario prediction and numerical verification.

pub mod bifurcation;
pub mod classifier;
pub mod error;
pub mod jet;
pub mod json;
pub mod linalg;
pub mod normal_form;
pub mod poisson;

/// Exact rational number used for every coefficient.
pub type Rational = num_rational::BigRational;

pub use error::{Error, JetError, Result};
pub use jet::{CoordinateChange, DiffKind, DiffObject, Monomial, Series, Trunc, Var};
pub use poisson::PoissonFamily;
