//! Arithmetic statistics of biquadratic curves over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffpoly`]: finite fields, polynomials, residue symbols, enumeration.
//! * [`lfunc`]: quadratic characters, their L-polynomials and Frobenius traces.
//! * [`biquad`]: the biquadratic family, point counts and zeta numerators.
//! * [`eulerprod`]: exact truncated Euler products and prime sums.
//! * [`moments`]: family averages of traces, error decompositions and densities.

pub mod biquad;
pub mod error;
pub mod eulerprod;
pub mod ffpoly;
pub mod lfunc;
pub mod moments;
pub mod newton;

pub use biquad::{CurveData, CurveTriple, Variant};
pub use error::{Error, Result};
pub use ffpoly::{FiniteField, Poly};
pub use lfunc::{FrobeniusData, LPoly, QuadChar, Sign};
