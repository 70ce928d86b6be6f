//! Tools for the class `P_n` of real polynomials `p` with `p(A) ≥ 0`
//! entrywise for every entrywise-nonnegative `n×n` matrix `A`.
//!
//! * [`poly`] and [`residue`]: exact polynomial arithmetic and the
//!   `r mod n` parts of a polynomial.
//! * [`matrix`]: circulant and Jordan matrices, exact evaluation of `p(A)`
//!   and the closed forms of `p(t·C_n)` and `p(J_n(t))`.
//! * [`halfline`] and [`membership`]: the exact order-one decision, the
//!   necessary-condition battery, the exact decision for `deg p < 2n`, and
//!   [`classify`](membership::classify).
//! * [`witness`]: constructive and searched witness matrices, always
//!   verified in exact arithmetic.
//! * [`spectra`]: power sums, trace conditions and the J-LL inequality.

pub mod error;
pub mod halfline;
pub mod matrix;
pub mod membership;
pub mod poly;
pub mod rational;
pub mod residue;
pub mod selftest;
pub mod spectra;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{MatrixF, MatrixQ};
pub use membership::{classify, decide_low_degree, Verdict};
pub use poly::Poly;
pub use rational::Rational;
pub use residue::{residue_decompose, residue_part, ResidueDecomposition};
pub use spectra::SpectrumList;
pub use witness::{SearchConfig, Witness, WitnessResult};
