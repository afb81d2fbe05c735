use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::ComplexBox;
use crate::numerics::Dyadic;

/// `l = sum l_i x_i` with `l_pivot = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
    pivot: usize,
}

impl LinearForm {
    /// Pivot is the lowest index with coefficient 1.
    pub fn new(coeffs: Vec<BigInt>) -> Result<LinearForm> {
        let pivot = coeffs.iter().position(|c| c.is_one()).ok_or(Error::InvalidForm)?;
        Ok(LinearForm { coeffs, pivot })
    }

    pub fn with_pivot(coeffs: Vec<BigInt>, pivot: usize) -> Result<LinearForm> {
        if coeffs.get(pivot).is_some_and(|c| c.is_one()) {
            Ok(LinearForm { coeffs, pivot })
        } else {
            Err(Error::InvalidForm)
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<LinearForm> {
        LinearForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The coordinate form `x_i`.
    pub fn coordinate(num_vars: usize, i: usize) -> LinearForm {
        let mut c = vec![BigInt::zero(); num_vars];
        c[i] = BigInt::one();
        LinearForm { coeffs: c, pivot: i }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest coefficient bit size `mu`.
    pub fn bitsize(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// `self + s * other`; the pivot of `self` is kept.
    pub fn combine(&self, other: &LinearForm, s: &BigInt) -> Result<LinearForm> {
        if self.num_vars() != other.num_vars() {
            return Err(Error::VariableMismatch {
                left: self.num_vars(),
                right: other.num_vars(),
            });
        }
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + s * b)
            .collect();
        LinearForm::with_pivot(coeffs, self.pivot)
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(c, v)| BigRational::from_integer(c.clone()) * v)
            .sum()
    }

    pub fn eval_box(&self, x: &[ComplexBox]) -> ComplexBox {
        self.coeffs
            .iter()
            .zip(x)
            .fold(ComplexBox::real(0), |acc, (c, v)| {
                acc.add(&v.scale(&Dyadic::from_int(c.clone())))
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm{:?}@{}", self.coeffs, self.pivot)
    }
}

/// Parametric form `sum (a0_i + a1_i t) x_i` with a fixed unit pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormFamily {
    pub base: Vec<BigInt>,
    pub slope: Vec<BigInt>,
    pub pivot: usize,
}

impl FormFamily {
    pub fn new(base: Vec<BigInt>, slope: Vec<BigInt>, pivot: usize) -> Result<FormFamily> {
        if base.len() != slope.len()
            || !base.get(pivot).is_some_and(|c| c.is_one())
            || !slope[pivot].is_zero()
        {
            return Err(Error::InvalidForm);
        }
        Ok(FormFamily { base, slope, pivot })
    }

    /// `x_pivot + t x_other`.
    pub fn pencil(num_vars: usize, pivot: usize, other: usize) -> FormFamily {
        let mut base = vec![BigInt::zero(); num_vars];
        base[pivot] = BigInt::one();
        let mut slope = vec![BigInt::zero(); num_vars];
        slope[other] = BigInt::one();
        FormFamily { base, slope, pivot }
    }

    pub fn at(&self, t: &BigInt) -> LinearForm {
        LinearForm {
            coeffs: self.base.iter().zip(&self.slope).map(|(a, b)| a + t * b).collect(),
            pivot: self.pivot,
        }
    }
}
