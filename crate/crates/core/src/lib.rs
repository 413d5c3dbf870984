//! Exact construction of covers of rationally parametrized surfaces.
//!
//! Given a parametrization `F: P^2 -> P^n` whose base points are simple and
//! in general position, [`cover3::three_patch`] builds two parametrizations
//! `G`, `H` which together with `F` cover the whole surface, and
//! [`cover2::two_patch`] builds a single Möbius-reparametrized affine patch
//! which together with `F(1:x1:x2)` covers the affine part `y0 != 0`.
//!
//! All arithmetic is exact over the rationals or over one simple algebraic
//! extension.

pub mod arith;
pub mod cover2;
pub mod cover3;
pub mod error;
pub mod groebner;
pub mod hypotheses;
pub mod mpoly;
pub mod srf;
pub mod upoly;
pub mod verify;

pub use arith::{Extension, Field, Rational, Scalar};
pub use cover2::{two_patch, AffineCover, AlphaClass, BetaRule};
pub use cover3::{three_patch, ThreePatch};
pub use error::{AlgebraError, CoverError, ParamError, VerifyError};
pub use groebner::{reduced_groebner, GBasis, ShapeBasis};
pub use mpoly::{MPoly, Param};
pub use upoly::UPoly;
