//! Recovering grid preimages of projected points.

use num_bigint::BigInt;

use crate::elim::modular::det_bigint;
use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, Dyadic};
use crate::poly::UniPoly;
use crate::roots::RootSet;

/// Largest `L` tried before a point is declared ambiguous.
pub const MAX_LIFT_PRECISION: u32 = 1 << 13;

/// For each selected index `t` of `z`, the unique `(i, j)` with
/// `z_t = x_i + s y_j`.
///
/// Candidates are filtered at `L = 1, 2, 4, ...` with all boxes refined to
/// `L + log2 s + 3` bits: a pair survives while the enclosure of
/// `|z - s y - x|^2` reaches below `2^-2L`. The true preimage always
/// survives; a point whose candidates run out has no preimage. A point left
/// with a single candidate is confirmed against [`image_mask`].
pub fn lift_indices(
    z: &RootSet,
    x: &RootSet,
    y: &RootSet,
    s: u64,
    select: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (0..x.len())
        .flat_map(|i| (0..y.len()).map(move |j| (i, j)))
        .collect();
    let mut cands: Vec<Vec<(usize, usize)>> = vec![all; select.len()];
    let sd = Dyadic::from_int(s);
    let sbits = 64 - s.max(1).leading_zeros();
    let mut l = 1u32;
    loop {
        let q = l + sbits + 3;
        let (zr, xr, yr) = (z.refine(q)?, x.refine(q)?, y.refine(q)?);
        let bound = Dyadic::pow2(-2 * l as i64);
        for (t, c) in cands.iter_mut().enumerate() {
            let zb = zr.region(select[t]);
            c.retain(|&(i, j)| {
                let w = zb.sub(&yr.region(j).scale(&sd)).sub(xr.region(i));
                w.norm_sqr().lo() < &bound
            });
            if c.is_empty() {
                return Err(Error::NoPreimage { index: select[t] });
            }
        }
        if cands.iter().all(|c| c.len() == 1) {
            let mask = image_mask(z, x, y, s)?;
            if let Some(t) = select.iter().position(|&k| !mask[k]) {
                return Err(Error::NoPreimage { index: select[t] });
            }
            return Ok(cands.into_iter().map(|c| c[0]).collect());
        }
        l *= 2;
        if l > MAX_LIFT_PRECISION {
            let t = cands.iter().position(|c| c.len() > 1).expect("ambiguous point");
            return Err(Error::AmbiguousPreimage { index: select[t] });
        }
    }
}

/// `p(t - s y)` as a polynomial in `y`.
fn shifted(p: &UniPoly, t: &BigInt, s: u64) -> UniPoly {
    let lin = UniPoly::new(vec![t.clone(), -BigInt::from(s)]);
    p.coeffs()
        .iter()
        .rev()
        .fold(UniPoly::zero(), |acc, c| acc.mul(&lin).add(&UniPoly::constant(c.clone())))
}

fn sylvester(f: &UniPoly, g: &UniPoly) -> Vec<Vec<BigInt>> {
    let (m, n) = (f.deg0(), g.deg0());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (p, k, shifts) in [(f, m, n), (g, n, m)] {
        for r in 0..shifts {
            let mut row = vec![BigInt::from(0); size];
            for i in 0..=k {
                row[r + k - i] = p.coeff(i);
            }
            rows.push(row);
        }
    }
    rows
}

/// `Res_y(p(t - s y), q(y))`, whose roots are all sums `x + s y` with
/// `p(x) = q(y) = 0`.
pub fn sum_resultant(p: &UniPoly, q: &UniPoly, s: u64) -> UniPoly {
    let n = p.deg0() * q.deg0() + 1;
    let ts: Vec<BigInt> = (0..n as i64).map(BigInt::from).collect();
    let vals: Vec<BigInt> = ts
        .iter()
        .map(|t| det_bigint(&sylvester(&shifted(p, t, s), q)))
        .collect();
    UniPoly::interpolate(&ts, &vals).expect("integer resultant")
}

/// Which points of `z` are of the form `x + s y` with `x` in `x` and `y` in
/// `y`. The images are exactly the roots of `gcd(h, R)` among `z`, where
/// `h` is the square-free part of `z`'s polynomial and `R` the
/// [`sum_resultant`]; boxes are refined until exactly `deg gcd` of them
/// cannot exclude a root of the gcd.
pub fn image_mask(z: &RootSet, x: &RootSet, y: &RootSet, s: u64) -> Result<Vec<bool>> {
    if x.is_empty() || y.is_empty() {
        return Ok(vec![false; z.len()]);
    }
    let r = sum_resultant(&x.squarefree(), &y.squarefree(), s);
    let g = z.squarefree().gcd(&r);
    let deg = g.deg0();
    if deg == 0 {
        return Ok(vec![false; z.len()]);
    }
    let mut zr = z.clone();
    loop {
        let mask: Vec<bool> = (0..zr.len())
            .map(|k| g.eval_box(zr.region(k)).contains_zero())
            .collect();
        if mask.iter().filter(|&&b| b).count() == deg {
            return Ok(mask);
        }
        let q = zr.quality().max(1) * 2;
        if q > MAX_LIFT_PRECISION {
            let k = mask.iter().position(|&b| b).unwrap_or(0);
            return Err(Error::AmbiguousPreimage { index: k });
        }
        zr = zr.refine(q)?;
    }
}

/// Preimage boxes `(x_z, y_z)` at quality `quality` for every point of `z`.
pub fn lift(
    z: &RootSet,
    x: &RootSet,
    y: &RootSet,
    s: u64,
    quality: u32,
) -> Result<Vec<(ComplexBox, ComplexBox)>> {
    let select: Vec<usize> = (0..z.len()).collect();
    let idx = lift_indices(z, x, y, s, &select)?;
    let (xr, yr) = (x.refine(quality)?, y.refine(quality)?);
    Ok(idx
        .into_iter()
        .map(|(i, j)| (xr.region(i).clone(), yr.region(j).clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UniPoly;
    use crate::roots::isolate;

    fn roots_of(r: &[i64]) -> RootSet {
        isolate(&UniPoly::from_roots(r), 4).unwrap()
    }

    #[test]
    fn unit_grid() {
        let x = roots_of(&[0, 1]);
        let z = roots_of(&[0, 1, 2, 3]);
        let idx = lift_indices(&z, &x, &x, 2, &[0, 1, 2, 3]).unwrap();
        assert_eq!(idx, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        let boxes = lift(&z, &x, &x, 2, 20).unwrap();
        assert!(boxes[2].1.contains_point(&Dyadic::one(), &Dyadic::zero()));
    }

    #[test]
    fn singleton() {
        let x = roots_of(&[0]);
        assert_eq!(lift_indices(&x, &x, &x, 1, &[0]).unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn sum_resultant_roots() {
        // x in {0, 1}, y in {0, 1}, s = 2: sums {0, 1, 2, 3}
        let p = UniPoly::from_roots(&[0, 1]);
        let r = sum_resultant(&p, &p, 2);
        assert_eq!(r.primitive(), UniPoly::from_roots(&[0, 1, 2, 3]).primitive());
    }

    #[test]
    fn near_miss_is_not_an_image() {
        // 3/2 is closest to 1 + 0 but not a sum
        let x = roots_of(&[0, 1]);
        let z = isolate(&UniPoly::from_i64(&[-3, 2]).mul(&UniPoly::from_roots(&[3])), 4).unwrap();
        let mask = image_mask(&z, &x, &x, 2).unwrap();
        let at = |v: i64| {
            (0..z.len())
                .find(|&k| z.region(k).contains_point(&Dyadic::from_int(v), &Dyadic::zero()))
                .unwrap()
        };
        assert!(mask[at(3)]);
        assert!(!mask[1 - at(3)]);
        assert!(lift_indices(&z, &x, &x, 2, &[at(3)]).is_ok());
        assert!(matches!(
            lift_indices(&z, &x, &x, 2, &[0, 1]),
            Err(Error::NoPreimage { .. })
        ));
    }

    #[test]
    fn non_image_point() {
        let x = roots_of(&[0, 1]);
        let z = roots_of(&[0, 5]);
        assert_eq!(
            lift_indices(&z, &x, &x, 2, &[0, 1]),
            Err(Error::NoPreimage { index: 1 })
        );
    }
}
