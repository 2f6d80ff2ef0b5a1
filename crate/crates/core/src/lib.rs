//! Exact computation of Newton polygons for L-functions of exponential sums
//! of the two-term family `f = x^d + a*x^s` over finite fields.
//!
//! The crate has two independent halves that check each other:
//!
//! * a *predictive* pipeline ([`frobenius`], [`genpoly`], [`gnpredict`],
//!   [`dwork`]) that builds the generating polynomials whose lowest-degree
//!   terms determine the generic Newton polygon for each residue class
//!   `p = r mod d`, together with an effective bound on `p`;
//! * an *oracle* ([`oracle`]) that computes actual L-functions by point
//!   counting over `F_{p^k}` in the cyclotomic ring `Z[zeta_p]` and takes
//!   exact pi-adic valuations.
//!
//! Everything is exact: arbitrary-precision rationals throughout, no
//! floating point anywhere.

pub mod dwork;
pub mod error;
pub mod frobenius;
pub mod genpoly;
pub mod gnpredict;
pub mod oracle;
pub mod poly;
pub mod polygon;
pub mod rational;

mod assignment;

pub use error::{Error, Result};
pub use poly::RatPoly;
pub use polygon::NewtonPolygon;
pub use rational::{Int, Rational, Valuation};
