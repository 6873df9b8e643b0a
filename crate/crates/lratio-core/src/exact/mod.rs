//! Exact arithmetic: big rationals, real quadratic fields, dense matrices
//! with fraction-free elimination, polynomials over Q, quotient rings
//! Q[x]/(g), and numeric-assisted but certified factorization over Q.

pub mod rat;
pub mod quad;
pub mod mat;
pub mod poly;
pub mod extfield;
pub mod factor;
pub mod quadext;

pub use extfield::{ExtElt, QuotRing};
pub use factor::factor_over_q;
pub use mat::{Mat, Ring, Subspace};
pub use poly::Poly;
pub use quad::{quad_field, FieldData, FieldRef, QuadElt, QuadField};
pub use quadext::QuadExt;
pub use rat::{rat, rat_int, Rat, RatField};
