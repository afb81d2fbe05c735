//! Certified solving of zero-dimensional integer polynomial systems by
//! projection onto separating linear forms.

pub mod error;
pub mod numerics;
pub mod poly;
pub mod roots;
pub mod grid;
pub mod elim;
pub mod slf;
pub mod solver;
pub mod cli;

pub use error::{Error, Result};
