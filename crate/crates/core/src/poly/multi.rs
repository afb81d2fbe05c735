//! Sparse multivariate integer polynomials and square systems.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::numerics::ComplexBox;

/// Degree and coefficient bit size of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Magnitude {
    pub degree: u32,
    pub bitsize: u64,
}

impl Magnitude {
    pub fn join(self, other: Magnitude) -> Magnitude {
        Magnitude {
            degree: self.degree.max(other.degree),
            bitsize: self.bitsize.max(other.bitsize),
        }
    }
}

/// Exponent vectors (0-based variables) mapped to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

/// Product size (in packed slots) above which Kronecker packing is skipped.
const KRONECKER_MAX_SLOTS: u128 = 1 << 20;

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<T: Into<BigInt>>(num_vars: usize, c: T) -> Self {
        MultiPoly::monomial(num_vars, vec![0; num_vars], c)
    }

    pub fn monomial<T: Into<BigInt>>(num_vars: usize, exps: Vec<u32>, c: T) -> Self {
        assert_eq!(exps.len(), num_vars);
        let mut p = MultiPoly::zero(num_vars);
        p.add_term(exps, c.into());
        p
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        MultiPoly::monomial(num_vars, e, 1)
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = MultiPoly::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars);
            p.add_term(e, c);
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_uni(num_vars: usize, var: usize, f: &UniPoly) -> Self {
        MultiPoly::from_terms(
            num_vars,
            f.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; num_vars];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree(&self) -> u32 {
        self.total_degree().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn bitsize(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0).max(1)
    }

    pub fn magnitude(&self) -> Magnitude {
        Magnitude {
            degree: self.degree(),
            bitsize: self.bitsize(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiply by `c * x^exps`.
    pub fn mul_monomial(&self, exps: &[u32], c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(exps).map(|(x, y)| x + y).collect(), a * c))
                .collect(),
        }
    }

    /// Exact product. Dense operands go through Kronecker packing.
    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.num_vars != other.num_vars {
            return Err(Error::VariableMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(self.num_vars));
        }
        let slots = self.kronecker_slots(other);
        let work = (self.len() as u128) * (other.len() as u128);
        if slots <= KRONECKER_MAX_SLOTS && work * 8 >= slots {
            Ok(self.mul_kronecker(other))
        } else {
            Ok(self.mul_sparse(other))
        }
    }

    fn kronecker_slots(&self, other: &MultiPoly) -> u128 {
        (0..self.num_vars)
            .map(|i| (self.degree_in(i) + other.degree_in(i) + 1) as u128)
            .try_fold(1u128, |acc, k| acc.checked_mul(k))
            .unwrap_or(u128::MAX)
    }

    /// Schoolbook convolution over the sparse term maps.
    pub fn mul_sparse(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Product via two Kronecker substitutions: variables to a single
    /// exponent, then the univariate polynomial to an integer at `2^k`.
    pub fn mul_kronecker(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, other.num_vars);
        let n = self.num_vars;
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(n);
        }
        let bases: Vec<u64> = (0..n)
            .map(|i| (self.degree_in(i) + other.degree_in(i) + 1) as u64)
            .collect();
        let max_a = self.terms.values().map(|c| c.magnitude().bits()).max().unwrap_or(0);
        let max_b = other.terms.values().map(|c| c.magnitude().bits()).max().unwrap_or(0);
        let count = self.len().min(other.len()) as u64;
        let raw = max_a + max_b + (64 - count.leading_zeros() as u64) + 2;
        let words = raw.div_ceil(32) as usize;

        let index = |e: &[u32]| -> usize {
            let mut idx = 0u64;
            let mut stride = 1u64;
            for (x, b) in e.iter().zip(&bases) {
                idx += *x as u64 * stride;
                stride *= b;
            }
            idx as usize
        };
        let pack = |p: &MultiPoly| -> BigInt {
            let len = p.terms.keys().map(|e| index(e)).max().unwrap_or(0) + 1;
            let mut pos = vec![0u32; len * words];
            let mut neg = vec![0u32; len * words];
            for (e, c) in &p.terms {
                let slot = index(e) * words;
                let target = if c.is_negative() { &mut neg } else { &mut pos };
                for (k, d) in c.magnitude().to_u32_digits().into_iter().enumerate() {
                    target[slot + k] = d;
                }
            }
            BigInt::from_biguint(Sign::Plus, BigUint::from_slice(&pos))
                - BigInt::from_biguint(Sign::Plus, BigUint::from_slice(&neg))
        };

        let prod = pack(self) * pack(other);
        let (sign, mag) = prod.into_parts();
        let digits = mag.to_u32_digits();
        let slot_bits = 32 * words as u64;
        let half = BigInt::one() << (slot_bits - 1);
        let full = BigInt::one() << slot_bits;
        let mut out = MultiPoly::zero(n);
        let mut carry = BigInt::zero();
        let slots = digits.len().div_ceil(words) + 1;
        for s in 0..slots {
            let lo = (s * words).min(digits.len());
            let hi = ((s + 1) * words).min(digits.len());
            let mut v = BigInt::from_biguint(Sign::Plus, BigUint::from_slice(&digits[lo..hi])) + &carry;
            if v >= half {
                v -= &full;
                carry = BigInt::one();
            } else {
                carry = BigInt::zero();
            }
            if v.is_zero() {
                continue;
            }
            if sign == Sign::Minus {
                v = -v;
            }
            let mut rest = s as u64;
            let mut e = vec![0u32; n];
            for (x, b) in e.iter_mut().zip(&bases) {
                *x = (rest % b) as u32;
                rest /= b;
            }
            out.add_term(e, v);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.num_vars, 1);
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    /// Powers `q^0, ..., q^k`.
    fn powers(q: &MultiPoly, k: u32) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::constant(q.num_vars, 1)];
        for i in 0..k as usize {
            out.push(out[i].mul(q).expect("same variable count"));
        }
        out
    }

    /// Substitutes `x_j -> x_j - sum_{i != j} l_i x_i`. The entry `l[j]` is
    /// ignored.
    pub fn shear(&self, pivot: usize, l: &[BigInt]) -> MultiPoly {
        assert_eq!(l.len(), self.num_vars);
        let n = self.num_vars;
        let mut lin = MultiPoly::var(n, pivot);
        for (i, li) in l.iter().enumerate() {
            if i != pivot && !li.is_zero() {
                lin = lin.sub(&MultiPoly::var(n, i).scale(li));
            }
        }
        let pw = MultiPoly::powers(&lin, self.degree_in(pivot));
        let mut out = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let k = e[pivot] as usize;
            let mut rest = e.clone();
            rest[pivot] = 0;
            out = out.add(&pw[k].mul_monomial(&rest, c));
        }
        out
    }

    /// Homogenizes to degree `d` with a new last variable.
    pub fn homogenize(&self, d: u32) -> Result<MultiPoly> {
        let deg = self.degree();
        if d < deg {
            return Err(Error::DegreeBound { bound: d, degree: deg });
        }
        Ok(MultiPoly {
            num_vars: self.num_vars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.push(d - e.iter().sum::<u32>());
                    (f, c.clone())
                })
                .collect(),
        })
    }

    /// Sets the last variable to zero and drops it.
    pub fn restrict_to_infinity(&self) -> MultiPoly {
        assert!(self.num_vars >= 1);
        MultiPoly {
            num_vars: self.num_vars - 1,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e.last().unwrap() == 0)
                .map(|(e, c)| (e[..e.len() - 1].to_vec(), c.clone()))
                .collect(),
        }
    }

    /// Sets the last variable to `v` and drops it.
    pub fn specialize_last(&self, v: &BigInt) -> MultiPoly {
        assert!(self.num_vars >= 1);
        let mut out = MultiPoly::zero(self.num_vars - 1);
        for (e, c) in &self.terms {
            let k = *e.last().unwrap();
            out.add_term(e[..e.len() - 1].to_vec(), c * num_traits::pow(v.clone(), k as usize));
        }
        out
    }

    /// `sum_a c_a x^a (1 + lambda.x)^(d - |a|)`: the dehomogenization of
    /// `F(x, w + lambda.x)` at `w = 1`, where `F` is the degree-`d`
    /// homogenization.
    pub fn infinity_shift(&self, lambdas: &[BigInt], d: u32) -> Result<MultiPoly> {
        assert_eq!(lambdas.len(), self.num_vars);
        let deg = self.degree();
        if d < deg {
            return Err(Error::DegreeBound { bound: d, degree: deg });
        }
        let n = self.num_vars;
        let mut lin = MultiPoly::constant(n, 1);
        for (i, li) in lambdas.iter().enumerate() {
            lin = lin.add(&MultiPoly::var(n, i).scale(li));
        }
        let pw = MultiPoly::powers(&lin, d);
        let mut out = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let k = (d - e.iter().sum::<u32>()) as usize;
            out = out.add(&pw[k].mul_monomial(e, c));
        }
        Ok(out)
    }

    /// Re-indexes into `num_vars` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, num_vars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.num_vars);
        MultiPoly::from_terms(
            num_vars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; num_vars];
                for (i, x) in e.iter().enumerate() {
                    f[map[i]] += x;
                }
                (f, c.clone())
            }),
        )
    }

    /// Writes the polynomial as `sum_b u_b(x_var) * y^b` where `y` are the
    /// remaining variables in order.
    pub fn split_hidden(&self, var: usize) -> BTreeMap<Vec<u32>, UniPoly> {
        let mut acc: BTreeMap<Vec<u32>, Vec<BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest.remove(var) as usize;
            let v = acc.entry(rest).or_default();
            if v.len() <= k {
                v.resize(k + 1, BigInt::zero());
            }
            v[k] += c;
        }
        acc.into_iter()
            .map(|(e, v)| (e, UniPoly::new(v)))
            .filter(|(_, u)| !u.is_zero())
            .collect()
    }

    /// Univariate view of a polynomial that involves only variable `var`.
    pub fn to_uni(&self, var: usize) -> Option<UniPoly> {
        let mut v = vec![BigInt::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, x)| i != var && *x != 0) {
                return None;
            }
            v[e[var] as usize] = c.clone();
        }
        Some(UniPoly::new(v))
    }

    /// True when some term of total degree `d` has zero exponent at `var`.
    pub fn has_top_term_free_of(&self, var: usize, d: u32) -> bool {
        self.terms
            .keys()
            .any(|e| e[var] == 0 && e.iter().sum::<u32>() == d)
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (k, v)| acc * num_traits::pow(v.clone(), *k as usize))
            })
            .sum()
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(BigRational::from_integer(c.clone()), |acc, (k, v)| {
                    acc * num_traits::pow(v.clone(), *k as usize)
                })
            })
            .sum()
    }

    /// Box enclosing `f(p)` for all `p` in the product of the input boxes.
    pub fn eval_interval(&self, point: &[ComplexBox]) -> ComplexBox {
        assert_eq!(point.len(), self.num_vars);
        let pw: Vec<Vec<ComplexBox>> = point
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let mut v = vec![ComplexBox::real(1)];
                for k in 0..self.degree_in(i) as usize {
                    v.push(v[k].mul(z));
                }
                v
            })
            .collect();
        let mut acc = ComplexBox::real(0);
        for (e, c) in &self.terms {
            let mut t = ComplexBox::real(c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    t = t.mul(&pw[i][*k as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Terms in canonical print order: descending total degree, then
    /// descending exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical text syntax, e.g. `3*x1^2*x2 - 4*x2 + 1`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, x)| {
                    if *x == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, x)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A square system of `n` polynomials in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    polys: Vec<MultiPoly>,
    num_vars: usize,
}

impl PolynomialSystem {
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self> {
        let num_vars = polys.first().map(|p| p.num_vars()).unwrap_or(0);
        for p in &polys {
            if p.num_vars() != num_vars {
                return Err(Error::VariableMismatch {
                    left: num_vars,
                    right: p.num_vars(),
                });
            }
        }
        if polys.len() != num_vars || num_vars == 0 {
            return Err(Error::NonSquare {
                polys: polys.len(),
                vars: num_vars,
            });
        }
        Ok(PolynomialSystem { polys, num_vars })
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn magnitude(&self) -> Magnitude {
        self.polys
            .iter()
            .map(|p| p.magnitude())
            .fold(Magnitude { degree: 0, bitsize: 1 }, Magnitude::join)
    }

    /// Bezout bound `prod d_i`.
    pub fn bezout_bound(&self) -> BigInt {
        self.degrees().into_iter().map(BigInt::from).product()
    }

    pub fn map<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> PolynomialSystem {
        PolynomialSystem {
            polys: self.polys.iter().map(f).collect(),
            num_vars: self.num_vars,
        }
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.num_vars)?;
        for p in &self.polys {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Dyadic, DyadicInterval};
    use proptest::prelude::*;

    fn mp(n: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn multiply_examples() {
        let a = mp(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = mp(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        assert_eq!(a.mul(&b).unwrap(), mp(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert!(MultiPoly::zero(2).mul(&a).unwrap().is_zero());
        let c = mp(1, &[(&[1], 1), (&[0], 1)]).pow(3);
        assert_eq!(c.to_uni(0).unwrap(), UniPoly::from_i64(&[1, 3, 3, 1]));
        assert!(a.mul(&MultiPoly::zero(3)).is_err());
    }

    #[test]
    fn kronecker_handles_signs_and_carries() {
        let a = mp(2, &[(&[0, 0], -7), (&[1, 0], i64::MAX), (&[1, 2], -1), (&[0, 1], 3)]);
        let b = mp(2, &[(&[0, 0], 5), (&[2, 1], -i64::MAX), (&[0, 3], -2)]);
        assert_eq!(a.mul_kronecker(&b), a.mul_sparse(&b));
        assert_eq!(a.neg().mul_kronecker(&b), a.neg().mul_sparse(&b));
    }

    #[test]
    fn shear_examples() {
        let l = big(&[1, 2]);
        assert_eq!(
            mp(2, &[(&[1, 0], 1)]).shear(0, &l),
            mp(2, &[(&[1, 0], 1), (&[0, 1], -2)])
        );
        assert_eq!(
            mp(2, &[(&[2, 0], 1)]).shear(0, &big(&[1, 1])),
            mp(2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)])
        );
        let f = mp(2, &[(&[0, 1], 1)]);
        assert_eq!(f.shear(0, &big(&[1, 7])), f);
    }

    #[test]
    fn homogenize_and_infinity() {
        let f = mp(1, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(f.homogenize(1).unwrap(), mp(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        let g = mp(2, &[(&[2, 0], 1), (&[0, 1], 1), (&[0, 0], -1)]);
        let h = g.homogenize(2).unwrap();
        assert_eq!(h, mp(3, &[(&[2, 0, 0], 1), (&[0, 1, 1], 1), (&[0, 0, 2], -1)]));
        assert_eq!(h.restrict_to_infinity(), mp(2, &[(&[2, 0], 1)]));
        assert!(mp(2, &[(&[0, 3], 1)]).restrict_to_infinity().is_zero());
        assert!(g.homogenize(1).is_err());
        let form = mp(2, &[(&[1, 1], 3), (&[2, 0], -1)]);
        assert_eq!(form.homogenize(2).unwrap().restrict_to_infinity(), form);
    }

    #[test]
    fn infinity_shift_matches_definition() {
        // F(x1, x2, w) = x1 x2 - w^2; F(x, 1 + 2 x1 + 3 x2)
        let f = mp(2, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let lam = big(&[2, 3]);
        let g = f.infinity_shift(&lam, 2).unwrap();
        let w = mp(2, &[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 3)]);
        let expect = mp(2, &[(&[1, 1], 1)]).sub(&w.pow(2));
        assert_eq!(g, expect);
    }

    #[test]
    fn eval_interval_examples() {
        let one = ComplexBox::real(1);
        let zero = ComplexBox::real(0);
        let x1 = mp(2, &[(&[1, 0], 1)]);
        assert_eq!(x1.eval_interval(&[one.clone(), zero.clone()]), one);
        let circle = mp(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]);
        assert!(circle.eval_interval(&[one.clone(), zero.clone()]).contains_zero());
        let unit = DyadicInterval::new(Dyadic::zero(), Dyadic::one());
        let b = ComplexBox::new(unit.clone(), DyadicInterval::from_int(0));
        let r = mp(2, &[(&[1, 1], 1)]).eval_interval(&[b.clone(), b]);
        assert!(r.re.lo() <= &Dyadic::zero() && r.re.hi() >= &Dyadic::one());
    }

    #[test]
    fn display_is_canonical() {
        let f = mp(2, &[(&[2, 1], 3), (&[0, 1], -4), (&[0, 0], 1)]);
        assert_eq!(f.to_string(), "3*x1^2*x2 - 4*x2 + 1");
        assert_eq!(mp(2, &[(&[0, 0], -1), (&[1, 1], -1)]).to_string(), "-x1*x2 - 1");
        assert_eq!(MultiPoly::zero(3).to_string(), "0");
    }

    fn arb_poly(n: usize, d: u32, tau: u32) -> impl Strategy<Value = MultiPoly> {
        let bound = 1i64 << tau.min(62);
        proptest::collection::vec(
            (proptest::collection::vec(0..=d, n), -bound..bound),
            0..12,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(
                n,
                ts.into_iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() <= d)
                    .map(|(e, c)| (e, BigInt::from(c))),
            )
        })
    }

    fn arb_pair() -> impl Strategy<Value = (MultiPoly, MultiPoly)> {
        (1usize..=4, 0u32..=6, 1u32..=16)
            .prop_flat_map(|(n, d, t)| (arb_poly(n, d, t), arb_poly(n, d, t)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn kronecker_agrees_with_sparse((a, b) in arb_pair()) {
            prop_assert_eq!(a.mul_kronecker(&b), a.mul_sparse(&b));
            prop_assert_eq!(a.mul(&b).unwrap(), a.mul_sparse(&b));
        }
    }

    proptest! {
        #[test]
        fn shear_inverse_is_identity(
            f in (2usize..=3).prop_flat_map(|n| arb_poly(n, 4, 8)),
            ls in proptest::collection::vec(-5i64..5, 3),
            pivot in 0usize..2,
        ) {
            let n = f.num_vars();
            let mut l = big(&ls[..n]);
            l[pivot] = BigInt::one();
            let inv: Vec<BigInt> = l.iter().enumerate()
                .map(|(i, c)| if i == pivot { c.clone() } else { -c })
                .collect();
            prop_assert_eq!(f.shear(pivot, &l).shear(pivot, &inv), f);
        }

        #[test]
        fn homogenize_then_specialize(f in (1usize..=3).prop_flat_map(|n| arb_poly(n, 5, 10))) {
            let h = f.homogenize(f.degree()).unwrap();
            prop_assert!(h.is_homogeneous());
            prop_assert_eq!(h.specialize_last(&BigInt::one()), f);
        }
    }
}
