//! Elimination polynomials along linear forms.

mod form;
mod macaulay;
pub mod modular;
mod resultant;

pub use form::{FormFamily, LinearForm};
pub use macaulay::{HiddenForm, MacaulayMatrix};
pub use resultant::{
    certify_strong, check_no_infinity, choose_shear, hidden_var_resultant, shear_system,
    EliminationOracle, EliminationResult, MacaulayOracle, ShearChoice, Strongness,
};
