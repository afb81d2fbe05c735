//! Dense univariate integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, Dyadic, DyadicInterval};

/// Coefficients stored constant term first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly::from_i64(&[0, 1])
    }

    /// `prod (x - r)` over integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(UniPoly::one(), |acc, &r| {
            acc.mul(&UniPoly::from_i64(&[-r, 1]))
        })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: c }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        self.coeffs
            .iter()
            .rev()
            .fold(Dyadic::zero(), |acc, c| &(&acc * x) + &Dyadic::from_int(c.clone()))
    }

    /// Horner evaluation in box arithmetic.
    pub fn eval_box(&self, z: &ComplexBox) -> ComplexBox {
        let mut acc = ComplexBox::real(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexBox::real(c.clone()));
        }
        acc
    }

    pub fn eval_interval(&self, x: &DyadicInterval) -> DyadicInterval {
        let mut acc = DyadicInterval::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&DyadicInterval::from_int(c.clone()));
        }
        acc
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        UniPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn norm_inf(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn norm2_sqr(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Largest coefficient bit length (at least 1).
    pub fn bitsize(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0).max(1)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &UniPoly) -> UniPoly {
        let db = b.degree().expect("pseudo_rem by zero");
        let lb = b.leading();
        let mut r = self.clone();
        let mut steps = match self.degree() {
            Some(da) if da >= db => da - db + 1,
            _ => return self.clone(),
        };
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(dr - db));
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps));
        }
        r
    }

    /// Exact quotient in `Z[x]`, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &UniPoly) -> Option<UniPoly> {
        let db = b.degree()?;
        let lb = b.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (t, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&b.scale(&t).shift(dr - db));
            q[dr - db] = t;
        }
        Some(UniPoly::new(q))
    }

    /// Primitive gcd (positive leading coefficient) via the subresultant
    /// remainder sequence.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) = if self.deg0() >= other.deg0() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.deg0() - b.deg0();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive();
            }
            if r.deg0() == 0 {
                return UniPoly::one();
            }
            let denom = &g * num_traits::pow(h.clone(), delta);
            a = b;
            b = UniPoly::new(r.coeffs.iter().map(|c| c / &denom).collect());
            g = a.leading();
            h = if delta == 0 {
                h
            } else {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h.clone(), delta - 1);
                num / den
            };
        }
    }

    /// `f / gcd(f, f')`, primitive.
    pub fn squarefree_part(&self) -> Result<UniPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.primitive();
        if p.deg0() == 0 {
            return Ok(UniPoly::one());
        }
        let g = p.gcd(&p.derivative());
        Ok(p.div_exact(&g).expect("gcd divides f").primitive())
    }

    /// Yun's decomposition: `(a_i, i)` with `f = c * prod a_i^i`, each `a_i`
    /// squarefree, primitive and pairwise coprime. Trivial factors omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UniPoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.primitive();
        if f.deg0() == 0 {
            return Ok(vec![]);
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let c = fp.div_exact(&a0).expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        while b.deg0() > 0 {
            let a = b.gcd(&d);
            let nb = b.div_exact(&a).expect("gcd divides b");
            let nc = d.div_exact(&a).expect("gcd divides d");
            if a.deg0() > 0 {
                out.push((a.primitive(), i));
            }
            d = nc.sub(&nb.derivative());
            b = nb;
            i += 1;
        }
        Ok(out)
    }

    /// The unique polynomial of degree `< points.len()` through the given
    /// integer samples, if it has integer coefficients.
    pub fn interpolate(points: &[BigInt], values: &[BigInt]) -> Option<UniPoly> {
        assert_eq!(points.len(), values.len());
        let n = points.len();
        if n == 0 {
            return Some(UniPoly::zero());
        }
        // Newton divided differences
        let mut dd: Vec<BigRational> = values
            .iter()
            .map(|v| BigRational::from_integer(v.clone()))
            .collect();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = BigRational::from_integer(&points[i] - &points[i - j]);
                dd[i] = (&dd[i] - &dd[i - 1]) / den;
            }
        }
        // expand sum dd[k] prod_{i<k} (x - p_i)
        let mut coeffs = vec![BigRational::zero(); n];
        for k in (0..n).rev() {
            // coeffs = coeffs * (x - p_k) + dd[k]
            let pk = BigRational::from_integer(points[k].clone());
            let mut next = vec![BigRational::zero(); n];
            for i in 0..n {
                if coeffs[i].is_zero() {
                    continue;
                }
                if i + 1 < n {
                    next[i + 1] += &coeffs[i];
                }
                next[i] -= &coeffs[i] * &pk;
            }
            next[0] += &dd[k];
            coeffs = next;
        }
        let mut out = Vec::with_capacity(n);
        for c in coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(UniPoly::new(out))
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

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Printed in the canonical text syntax with variable `x`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}
