//! Simultaneous root approximation in multiprecision dyadic arithmetic.

use crate::numerics::{Dyadic, Rounding};
use crate::poly::UniPoly;

/// Complex dyadic number; exact arithmetic unless rounded explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Cx {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl Cx {
    pub fn zero() -> Cx {
        Cx {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    pub fn real(x: Dyadic) -> Cx {
        Cx {
            re: x,
            im: Dyadic::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Rounds both parts to `bits` below the larger one, so a vanishing
    /// part cannot drag the other into huge mantissas.
    pub fn round(&self, bits: u32) -> Cx {
        let Some(top) = self.lg() else {
            return Cx::zero();
        };
        let grid = top - bits as i64;
        Cx {
            re: self.re.round_to_grid(grid, Rounding::Trunc),
            im: self.im.round_to_grid(grid, Rounding::Trunc),
        }
    }

    /// Quotient with about `bits` significant bits; `None` on division by zero.
    pub fn div(&self, o: &Cx, bits: u32) -> Option<Cx> {
        let den = o.norm_sqr();
        if den.is_zero() {
            return None;
        }
        let re = &(&self.re * &o.re) + &(&self.im * &o.im);
        let im = &(&self.im * &o.re) - &(&self.re * &o.im);
        Some(Cx {
            re: Dyadic::div_bits(&re, &den, bits, Rounding::Trunc).ok()?,
            im: Dyadic::div_bits(&im, &den, bits, Rounding::Trunc).ok()?,
        })
    }

    /// `floor(log2 max(|re|, |im|))`.
    pub fn lg(&self) -> Option<i64> {
        match (self.re.floor_log2(), self.im.floor_log2()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        }
    }
}

/// `(g(z), g'(z))` by Horner, rounding intermediates to `bits`.
fn eval_with_derivative(g: &UniPoly, z: &Cx, bits: u32) -> (Cx, Cx) {
    let c = g.coeffs();
    let mut b = Cx::real(Dyadic::from_int(c[c.len() - 1].clone()));
    let mut d = Cx::zero();
    for a in c[..c.len() - 1].iter().rev() {
        d = d.mul(z).add(&b).round(bits);
        b = b.mul(z).add(&Cx::real(Dyadic::from_int(a.clone()))).round(bits);
    }
    (b, d)
}

/// Exact `g(z)`.
pub(crate) fn eval_exact(g: &UniPoly, z: &Cx) -> Cx {
    g.coeffs().iter().rev().fold(Cx::zero(), |acc, a| {
        acc.mul(z).add(&Cx::real(Dyadic::from_int(a.clone())))
    })
}

/// Points on a circle whose radius is the geometric mean of the root
/// moduli, clipped to `[2^-gamma, 2^gamma]`.
pub(crate) fn initial_points(g: &UniPoly, gamma: u32, bits: u32) -> Vec<Cx> {
    let m = g.deg0();
    let c = g.coeffs();
    let lg = |x: &num_bigint::BigInt| {
        let shift = x.bits().saturating_sub(60);
        let top = num_traits::ToPrimitive::to_f64(&(x.magnitude() >> shift)).unwrap_or(1.0);
        top.log2() + shift as f64
    };
    let log_r = ((lg(&c[0]) - lg(&c[m])) / m as f64).clamp(-(gamma as f64), gamma as f64);
    let r = 2f64.powf(log_r);
    (0..m)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4;
            Cx {
                re: Dyadic::from_f64(r * t.cos()),
                im: Dyadic::from_f64(r * t.sin()),
            }
            .round(bits)
        })
        .collect()
}

/// Aberth-Ehrlich iteration at `bits` of precision. Returns true once the
/// corrections fall below the working precision.
pub(crate) fn aberth(g: &UniPoly, z: &mut [Cx], bits: u32, floor_lg: i64, max_iter: usize) -> bool {
    let m = z.len();
    let work = bits + 16;
    for _ in 0..max_iter {
        let mut worst = i64::MIN;
        for i in 0..m {
            let (f, fp) = eval_with_derivative(g, &z[i], work);
            if f.is_zero() {
                continue;
            }
            let newton = match f.div(&fp, work) {
                Some(v) => v,
                None => {
                    // stationary point: nudge
                    let eps = Dyadic::pow2(z[i].lg().unwrap_or(0).max(floor_lg) - bits as i64 / 2);
                    z[i] = z[i].add(&Cx { re: eps.clone(), im: eps }).round(bits);
                    worst = i64::MAX;
                    continue;
                }
            };
            let mut s = Cx::zero();
            let mut clash = false;
            for j in 0..m {
                if j == i {
                    continue;
                }
                match Cx::real(Dyadic::one()).div(&z[i].sub(&z[j]), work) {
                    Some(v) => s = s.add(&v),
                    None => clash = true,
                }
            }
            if clash {
                let eps = Dyadic::pow2(z[i].lg().unwrap_or(0).max(floor_lg) - bits as i64 / 2);
                z[i] = z[i].add(&Cx { re: eps.clone(), im: eps.shift(1) }).round(bits);
                worst = i64::MAX;
                continue;
            }
            let den = Cx::real(Dyadic::one()).sub(&newton.mul(&s).round(work));
            let w = newton.div(&den, work).unwrap_or(newton);
            if let Some(lw) = w.lg() {
                let scale = z[i].lg().unwrap_or(floor_lg).max(floor_lg);
                worst = worst.max(lw - scale);
            }
            z[i] = z[i].sub(&w).round(bits);
        }
        if worst < -(bits as i64) + 8 {
            return true;
        }
    }
    false
}
