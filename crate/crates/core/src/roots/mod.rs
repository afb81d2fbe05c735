//! Certified isolation of all complex roots of an integer polynomial.
//!
//! Distinct roots are approximated with Aberth-Ehrlich iteration on each
//! squarefree factor and certified with the Weierstrass inclusion theorem:
//! for a degree-`m` polynomial and distinct approximations `z_i`, the disks
//! `D(z_i, m |W_i|)` with `W_i = g(z_i) / (lc prod_{j != i} (z_i - z_j))`
//! cover all roots and each connected component of `k` disks holds exactly
//! `k` roots.

mod aberth;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, Dyadic, DyadicInterval, Rounding};
use crate::poly::UniPoly;

use aberth::Cx;

/// Largest working precision tried before giving up.
pub const MAX_PRECISION: u32 = 1 << 16;

/// Root magnitude bound: every root `z` satisfies `|z| < 2^gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagnitudeBound {
    pub gamma: u32,
}

/// `gamma = max(1, ceil(log2(1 + |f|_inf / |lc f|)))`.
pub fn cauchy_bound(f: &UniPoly) -> Result<MagnitudeBound> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = f.leading().abs();
    let target = &lc + f.norm_inf();
    let mut gamma = 1u32;
    while (&lc << gamma) < target {
        gamma += 1;
    }
    Ok(MagnitudeBound { gamma })
}

/// `ceil(log2 |f|_2)`.
pub fn mahler_bound(f: &UniPoly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = f.norm2_sqr();
    let mut k = 0u32;
    while (BigInt::from(1) << (2 * k)) < s {
        k += 1;
    }
    Ok(k)
}

/// One isolated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub region: ComplexBox,
    pub multiplicity: u32,
    /// Index into the squarefree factors, `None` for the exact root 0.
    factor: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Factor {
    poly: UniPoly,
    multiplicity: u32,
}

/// Isolating boxes for all distinct roots of a polynomial.
///
/// Roots are sorted by center, real part first, with coordinates truncated
/// to the isolation grid `2^-quality`; `refine` keeps the
/// indices stable and nests every new box inside the old one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    polynomial: UniPoly,
    factors: Vec<Factor>,
    roots: Vec<Root>,
    quality: u32,
}

impl RootSet {
    pub fn polynomial(&self) -> &UniPoly {
        &self.polynomial
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn quality(&self) -> u32 {
        self.quality
    }

    pub fn region(&self, i: usize) -> &ComplexBox {
        &self.roots[i].region
    }

    pub fn regions(&self) -> Vec<ComplexBox> {
        self.roots.iter().map(|r| r.region.clone()).collect()
    }

    /// Product of the distinct linear factors, primitive.
    pub fn squarefree(&self) -> UniPoly {
        let mut p = UniPoly::one();
        for f in &self.factors {
            p = p.mul(&f.poly);
        }
        if self.roots.iter().any(|r| r.factor.is_none()) {
            p = p.mul(&UniPoly::x());
        }
        p
    }

    /// Boxes of half-width below `2^-quality`, nested in the current ones.
    pub fn refine(&self, quality: u32) -> Result<RootSet> {
        if quality <= self.quality {
            return Ok(self.clone());
        }
        let mut q = quality;
        loop {
            if q > MAX_PRECISION {
                return Err(Error::NoConvergence {
                    max_precision: MAX_PRECISION,
                });
            }
            if let Some(rs) = self.try_refine(q)? {
                return Ok(rs);
            }
            q *= 2;
        }
    }

    fn try_refine(&self, quality: u32) -> Result<Option<RootSet>> {
        let mut roots = self.roots.clone();
        for (k, fac) in self.factors.iter().enumerate() {
            let idx: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].factor == Some(k)).collect();
            let start: Vec<Cx> = idx
                .iter()
                .map(|&i| {
                    let (re, im) = roots[i].region.center();
                    Cx { re, im }
                })
                .collect();
            let boxes = isolate_squarefree(&fac.poly, quality, Some(start))?;
            // match each new box with the unique old box it meets
            let mut used = vec![false; idx.len()];
            let mut assigned = vec![None; idx.len()];
            for b in boxes {
                let hits: Vec<usize> = (0..idx.len())
                    .filter(|&t| roots[idx[t]].region.intersects(&b))
                    .collect();
                if hits.len() != 1 || used[hits[0]] {
                    return Ok(None);
                }
                used[hits[0]] = true;
                assigned[hits[0]] = Some(b);
            }
            for (t, b) in assigned.into_iter().enumerate() {
                let b = b.expect("bijection");
                let old = &roots[idx[t]].region;
                roots[idx[t]].region = old.intersection(&b).expect("boxes meet");
            }
        }
        Ok(Some(RootSet {
            polynomial: self.polynomial.clone(),
            factors: self.factors.clone(),
            roots,
            quality,
        }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "quality": self.quality,
            "roots": self.roots.iter().map(|r| serde_json::json!({
                "box": r.region.to_json(),
                "multiplicity": r.multiplicity,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Isolates all distinct roots of `f` in boxes of half-width `< 2^-quality`.
pub fn isolate(f: &UniPoly, quality: u32) -> Result<RootSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let quality = quality.max(1);
    let mut factors = Vec::new();
    let mut zero_mult = None;
    for (a, m) in f.squarefree_decomposition()? {
        if a.coeff(0).is_zero() {
            zero_mult = Some(m);
            let b = a.div_exact(&UniPoly::x()).expect("x divides");
            if b.deg0() > 0 {
                factors.push(Factor { poly: b, multiplicity: m });
            }
        } else {
            factors.push(Factor { poly: a, multiplicity: m });
        }
    }
    let mut q = quality;
    loop {
        let mut roots = Vec::new();
        if let Some(m) = zero_mult {
            roots.push(Root {
                region: ComplexBox::real(0),
                multiplicity: m,
                factor: None,
            });
        }
        for (k, fac) in factors.iter().enumerate() {
            for b in isolate_squarefree(&fac.poly, q, None)? {
                roots.push(Root {
                    region: b,
                    multiplicity: fac.multiplicity,
                    factor: Some(k),
                });
            }
        }
        if pairwise_disjoint(roots.iter().map(|r| &r.region)) {
            roots.sort_by_cached_key(|r| order_key(&r.region, q));
            return Ok(RootSet {
                polynomial: f.clone(),
                factors,
                roots,
                quality: q,
            });
        }
        q *= 2;
        if q > MAX_PRECISION {
            return Err(Error::NoConvergence {
                max_precision: MAX_PRECISION,
            });
        }
    }
}

/// Center truncated to `2^-q`, so noise around an exact coordinate does not
/// decide the order; ties fall back to the lower corner.
fn order_key(b: &ComplexBox, q: u32) -> (Dyadic, Dyadic, Dyadic, Dyadic) {
    let (x, y) = b.center();
    let g = -(q as i64);
    (
        x.round_to_grid(g, Rounding::Trunc),
        y.round_to_grid(g, Rounding::Trunc),
        b.re.lo().clone(),
        b.im.lo().clone(),
    )
}

fn pairwise_disjoint<'a>(boxes: impl Iterator<Item = &'a ComplexBox>) -> bool {
    let v: Vec<&ComplexBox> = boxes.collect();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i].intersects(v[j]) {
                return false;
            }
        }
    }
    true
}

/// `ceil(log2)` of Fujiwara's bound `2 max_k |a_(m-k) / a_m|^(1/k)`, at
/// least 1.
fn fujiwara_log2(g: &UniPoly) -> u32 {
    let c = g.coeffs();
    let m = c.len() - 1;
    let top = c[m].bits() as i64;
    let worst = (1..=m)
        .filter(|&k| !c[m - k].is_zero())
        .map(|k| ((c[m - k].bits() as i64 - top + 1).max(0) as u64).div_ceil(k as u64))
        .max()
        .unwrap_or(0);
    (1 + worst) as u32
}

fn reversed(g: &UniPoly) -> UniPoly {
    UniPoly::new(g.coeffs().iter().rev().cloned().collect())
}

/// Certified boxes for the roots of a squarefree `g` with `g(0) != 0`.
fn isolate_squarefree(g: &UniPoly, quality: u32, start: Option<Vec<Cx>>) -> Result<Vec<ComplexBox>> {
    let m = g.deg0();
    let gamma = fujiwara_log2(g).max(fujiwara_log2(&reversed(g)));
    let mbits = usize::BITS - m.leading_zeros();
    let mut p = (quality + gamma + 2 * mbits + 16).max(64);
    let mut z = match start {
        Some(s) => s.into_iter().map(|c| c.round(p)).collect(),
        None => aberth::initial_points(g, gamma, p),
    };
    let mut iters = 64 + 16 * m;
    loop {
        aberth::aberth(g, &mut z, p, -(gamma as i64) - 1, iters);
        if let Some(b) = certify(g, &z, quality, quality + 4) {
            return Ok(b);
        }
        let fine = p.saturating_sub(gamma + 8);
        if fine > quality + 4 {
            if let Some(b) = certify(g, &z, quality, fine) {
                return Ok(b);
            }
        }
        p *= 2;
        iters = 32 + 4 * m;
        if p > MAX_PRECISION {
            return Err(Error::NoConvergence {
                max_precision: MAX_PRECISION,
            });
        }
    }
}

/// Weierstrass inclusion boxes rounded outward to the grid `2^-grid_bits`,
/// if they are pairwise disjoint and of half-width below `2^-quality`.
fn certify(g: &UniPoly, z: &[Cx], quality: u32, grid_bits: u32) -> Option<Vec<ComplexBox>> {
    let m = z.len();
    let lc = Dyadic::from_int(g.leading());
    let lc2 = &lc * &lc;
    let limit = Dyadic::pow2(-(quality as i64) - 1);
    let grid = -(grid_bits as i64);
    let mut boxes = Vec::with_capacity(m);
    for i in 0..m {
        let f = aberth::eval_exact(g, &z[i]);
        let radius = if f.is_zero() {
            Dyadic::zero()
        } else {
            let mut prod = Cx::real(Dyadic::one());
            for j in 0..m {
                if j != i {
                    prod = prod.mul(&z[i].sub(&z[j]));
                }
            }
            if prod.is_zero() {
                return None;
            }
            let den = &lc2 * &prod.norm_sqr();
            let ratio = Dyadic::div_bits(&f.norm_sqr(), &den, 64, Rounding::Ceil).ok()?;
            let e = ratio.floor_log2()? / 2 - 64;
            let r = ratio.sqrt_to_grid(e, Rounding::Ceil).ok()?;
            &r * &Dyadic::from_int(m as u64)
        };
        if radius >= limit {
            return None;
        }
        let span = |c: &Dyadic| {
            DyadicInterval::new(
                (c - &radius).round_to_grid(grid, Rounding::Floor),
                (c + &radius).round_to_grid(grid, Rounding::Ceil),
            )
        };
        boxes.push(ComplexBox::new(span(&z[i].re), span(&z[i].im)));
    }
    if pairwise_disjoint(boxes.iter()) {
        Some(boxes)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64(c)
    }

    fn contains_rational(b: &ComplexBox, re: &BigRational) -> bool {
        let lo = dy_to_q(b.re.lo());
        let hi = dy_to_q(b.re.hi());
        &lo <= re && re <= &hi && b.im.contains_zero()
    }

    fn dy_to_q(d: &Dyadic) -> BigRational {
        let m = BigRational::from_integer(d.mantissa().clone());
        if d.exponent() >= 0 {
            m * BigRational::from_integer(BigInt::from(1) << d.exponent())
        } else {
            m / BigRational::from_integer(BigInt::from(1) << -d.exponent())
        }
    }

    fn check_invariants(f: &UniPoly, rs: &RootSet, quality: u32) {
        assert!(pairwise_disjoint(rs.roots().iter().map(|r| &r.region)));
        let total: u32 = rs.roots().iter().map(|r| r.multiplicity).sum();
        assert_eq!(total as usize, f.deg0());
        let lim = Dyadic::pow2(-(quality as i64));
        for r in rs.roots() {
            assert!(r.region.half_width() < lim);
        }
        for w in rs.roots().windows(2) {
            assert!(order_key(&w[0].region, rs.quality()) < order_key(&w[1].region, rs.quality()));
        }
    }

    #[test]
    fn gaussian_units() {
        let rs = isolate(&p(&[1, 0, 1]), 8).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(rs.region(0).contains_point(&Dyadic::zero(), &Dyadic::from_int(-1)));
        assert!(rs.region(1).contains_point(&Dyadic::zero(), &Dyadic::one()));
        check_invariants(&p(&[1, 0, 1]), &rs, 8);
    }

    #[test]
    fn double_root() {
        let f = p(&[1, -2, 1]);
        let rs = isolate(&f, 8).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.roots()[0].multiplicity, 2);
        assert!(rs.region(0).contains_point(&Dyadic::one(), &Dyadic::zero()));
    }

    #[test]
    fn integer_roots_sorted() {
        let f = p(&[0, -1, 0, 1]);
        let rs = isolate(&f, 8).unwrap();
        check_invariants(&f, &rs, 8);
        for (i, r) in [-1, 0, 1].iter().enumerate() {
            assert!(rs.region(i).contains_point(&Dyadic::from_int(*r), &Dyadic::zero()));
        }
    }

    #[test]
    fn refine_sqrt2() {
        let f = p(&[-2, 0, 1]);
        let rs = isolate(&f, 4).unwrap();
        let fine = rs.refine(64).unwrap();
        check_invariants(&f, &fine, 64);
        // sqrt(2) to 80 bits from integer square root
        let s = (BigInt::from(2) << 160u32).sqrt();
        let lo = Dyadic::new(s.clone(), -80);
        let hi = Dyadic::new(s + 1, -80);
        let b = fine.region(1);
        assert!(b.re.lo() <= &lo && &hi <= b.re.hi());
        let neg = fine.region(0);
        assert!(neg.re.lo() <= &-hi.clone() && &-lo <= neg.re.hi());
        for i in 0..2 {
            assert!(rs.region(i).intersection(fine.region(i)).as_ref() == Some(fine.region(i)));
        }
        assert_eq!(fine.refine(64).unwrap(), fine);
        assert_eq!(rs.refine(rs.quality()).unwrap(), rs);
    }

    #[test]
    fn refine_zero_root() {
        let rs = isolate(&p(&[0, 1]), 4).unwrap().refine(100).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs.region(0).contains_zero());
        assert!(rs.region(0).half_width() < Dyadic::pow2(-100));
    }

    #[test]
    fn clustered_roots() {
        // (x - 1)(x - 1 - 2^-40)(x^2 + 1)
        let a = UniPoly::new(vec![-(BigInt::from(1) << 40u32), BigInt::from(1) << 40u32]);
        let b = UniPoly::new(vec![-((BigInt::from(1) << 40u32) + BigInt::from(1)), BigInt::from(1) << 40u32]);
        let f = a.mul(&b).mul(&p(&[1, 0, 1]));
        let rs = isolate(&f, 8).unwrap();
        assert_eq!(rs.len(), 4);
        check_invariants(&f, &rs, rs.quality());
    }

    #[test]
    fn bounds() {
        assert_eq!(cauchy_bound(&p(&[-4, 1])).unwrap().gamma, 3);
        assert_eq!(cauchy_bound(&p(&[0, 1])).unwrap().gamma, 1);
        assert_eq!(cauchy_bound(&p(&[-1, 0, 2])).unwrap().gamma, 1);
        assert_eq!(mahler_bound(&p(&[1, 0, 1])).unwrap(), 1);
        assert_eq!(mahler_bound(&p(&[1])).unwrap(), 0);
        assert_eq!(mahler_bound(&p(&[0, 3])).unwrap(), 2);
        assert!(cauchy_bound(&UniPoly::zero()).is_err());
        assert!(isolate(&UniPoly::zero(), 4).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_polynomials(
            coeffs in proptest::collection::vec(-(1i64 << 16)..(1i64 << 16), 2..=13)
        ) {
            let f = p(&coeffs);
            prop_assume!(f.deg0() >= 1);
            let rs = isolate(&f, 12).unwrap();
            check_invariants(&f, &rs, 12);
            let finer = rs.refine(40).unwrap();
            prop_assert_eq!(finer.len(), rs.len());
            for (a, b) in rs.roots().iter().zip(finer.roots()) {
                prop_assert_eq!(a.multiplicity, b.multiplicity);
            }
        }

        #[test]
        fn known_rational_roots(
            nums in proptest::collection::vec(-20i64..20, 1..7),
            den in 1i64..5,
        ) {
            let mut f = UniPoly::one();
            for n in &nums {
                f = f.mul(&p(&[-n, den]));
            }
            let rs = isolate(&f, 10).unwrap();
            for n in &nums {
                let q = BigRational::new(BigInt::from(*n), BigInt::from(den));
                let hits = rs.roots().iter().filter(|r| contains_rational(&r.region, &q)).count();
                prop_assert_eq!(hits, 1);
            }
        }
    }
}
