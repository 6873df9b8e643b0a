//! Exact computation of ratios of critical L-values of Hilbert modular
//! cusp forms over Q(√5) and Q(√13), through the Hecke action on the
//! parabolic second cohomology of PSL(2, O_F).
//!
//! Everything is computed in exact arithmetic: big rationals, quadratic
//! field elements, and quotient rings Q[x]/(g). The pipeline is
//!
//!   relation words  →  symbolic reduction to the two unknown cocycle
//!   values A, B     →  constraint and coboundary spaces Z_A^±, B_A^±  →
//!   Hecke matrix on the quotient  →  characteristic polynomial, exact
//!   eigenvectors, and ζ-vectors encoding the critical-strip periods.

pub mod error;
pub mod exact;
pub mod symrep;
pub mod modgroup;
pub mod relred;
pub mod hecke;
pub mod cohomspace;
// pub mod pcohom;
// pub mod eichler;

pub use error::Error;
