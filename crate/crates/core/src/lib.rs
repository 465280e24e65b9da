//! Character sums `S(F) = sum_{x in F_q} chi(F(x))` over square-free monic
//! polynomials, exact censuses and Monte Carlo samples of their distribution,
//! and exact-rational predictions from the trinomial model.

pub mod charsum;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod experiments;
pub mod field;
pub mod models;
pub mod poly;

pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
pub use poly::MonicPoly;
