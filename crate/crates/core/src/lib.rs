//! Exact and high-precision machinery for harmonic-type nested sums.
//!
//! The crate is organized around three layers:
//!
//! * exact rational combinatorics: multiple harmonic (star) numbers,
//!   Stirling numbers of the first kind, complete Bell polynomials, and
//!   hyperharmonic numbers ([`mhn`], [`symmetric`], [`hyperharmonic`]);
//! * certified high-precision numerics: Riemann zeta values by
//!   Euler-Maclaurin summation and height-one multiple zeta values through
//!   the Aomoto-Drinfel'd-Zagier generating function ([`zeta`]);
//! * the Euler-type series built from hyperharmonic numbers, each evaluated
//!   by independent routes (truncation vs closed form), and a verification
//!   harness that certifies every identity the crate relies on
//!   ([`euler_sums`], [`verify`]).
//!
//! All exact values are [`rug::Rational`]; series values carry a
//! high-precision [`rug::Float`] together with an explicit error bound.

pub mod error;
pub mod euler_sums;
pub mod hyperharmonic;
pub mod mhn;
pub mod symmetric;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
pub use euler_sums::{
    harmonic_pole_check, partial_fractions, s_closed, s_partial, s_truncated, split_np, u_closed,
    u_partial, u_truncated, v_partial, v_truncated, EulerSumKey, PartialFractionDecomposition,
    SplitDecomposition, VSumEvaluation,
};
pub use hyperharmonic::{
    gen_hh_closed, gen_hh_direct, gen_hh_recurrence, gen_hh_star, hyperharmonic, HyperharmonicKey,
};
pub use mhn::{harmonic, mhn, mhsn, mixed_mhn, shifted_mhn, CompositionIndex, MixedIndex};
pub use rug::{Float, Integer, Rational};
pub use symmetric::{
    bbar_recurrence, bell_complete, bell_harmonic, binomial_via_stirling, complete_sum,
    elementary_sum, stirling1, StirlingTable, WeightSequence,
};
pub use verify::{
    check_exponent_convolution, random_weights, run_suite, GridLimits, IdentityCase, IdentityId, RunReport,
    Suite, SuiteConfig, ConvolutionExponent, Verdict, VerificationReport,
};
pub use zeta::{
    adz_series, mzsv_truncated, mzv_height_one, mzv_truncated, riemann_zeta, BivariateSeries,
    Method, SeriesValue,
};
