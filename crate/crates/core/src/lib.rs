//! Numerics for the fractional stochastic wave equation driven by noise that is rough in space:
//! Green's symbols, chaos norms and their explicit bounds, moment growth, Hölder rates, and
//! certificates for the auxiliary integral identities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chaos;
pub mod cli;
pub mod error;
pub mod fit;
pub mod greens;
pub mod lemmas;
pub mod mc;
pub mod moments;
pub mod params;
pub mod quad;
pub mod regularity;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{exponents, validate_params, ExponentSet, ModelParams, Regime, TemporalKind, ValidatedParams};
pub use quad::{Estimate, QuadratureSpec, TailPolicy};
