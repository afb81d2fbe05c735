//! Integer polynomials: sparse multivariate, dense univariate, text syntax.

mod multi;
mod parse;
mod uni;

pub use multi::{Magnitude, MultiPoly, PolynomialSystem};
pub use parse::{parse_poly, parse_system, parse_univariate};
pub use uni::UniPoly;
