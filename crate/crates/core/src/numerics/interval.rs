//! Dyadic intervals and axis-aligned complex boxes.

use std::fmt;

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        DyadicInterval::point(Dyadic::from_int(v))
    }

    /// `[c - r, c + r]`.
    pub fn around(center: &Dyadic, radius: &Dyadic) -> Self {
        DyadicInterval::new(center - radius, center + radius)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).shift(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        let lo = Dyadic::max(&self.lo, &other.lo);
        let hi = Dyadic::min(&self.hi, &other.hi);
        (lo <= hi).then(|| DyadicInterval { lo, hi })
    }

    pub fn hull(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn add(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> DyadicInterval {
        DyadicInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &DyadicInterval) -> DyadicInterval {
        let p = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        DyadicInterval { lo, hi }
    }

    pub fn scale(&self, k: &Dyadic) -> DyadicInterval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            DyadicInterval { lo: a, hi: b }
        } else {
            DyadicInterval { lo: b, hi: a }
        }
    }

    /// Tight enclosure of `{x^2 : x in self}`.
    pub fn sqr(&self) -> DyadicInterval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            DyadicInterval {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&a, &b),
            }
        } else if a <= b {
            DyadicInterval { lo: a, hi: b }
        } else {
            DyadicInterval { lo: b, hi: a }
        }
    }

    /// Enclosure of `1 / x` with endpoints on the grid `2^grid_exp`.
    pub fn recip(&self, grid_exp: i64) -> Result<DyadicInterval> {
        if self.contains_zero() {
            return Err(Error::Nonpositive);
        }
        let one = Dyadic::one();
        let lo = Dyadic::div_to_grid(&one, &self.hi, grid_exp, Rounding::Floor)?;
        let hi = Dyadic::div_to_grid(&one, &self.lo, grid_exp, Rounding::Ceil)?;
        Ok(DyadicInterval { lo, hi })
    }

    /// Enclosure of `sqrt(x)` over the nonnegative part of the interval.
    pub fn sqrt(&self, grid_exp: i64) -> Result<DyadicInterval> {
        if self.hi.is_negative() {
            return Err(Error::Nonpositive);
        }
        let lo = if self.lo.is_positive() {
            self.lo.sqrt_to_grid(grid_exp, Rounding::Floor)?
        } else {
            Dyadic::zero()
        };
        let hi = self.hi.sqrt_to_grid(grid_exp, Rounding::Ceil)?;
        Ok(DyadicInterval { lo, hi })
    }

    /// Widen endpoints outward onto the grid `2^grid_exp`.
    pub fn round_outward(&self, grid_exp: i64) -> DyadicInterval {
        DyadicInterval {
            lo: self.lo.round_to_grid(grid_exp, Rounding::Floor),
            hi: self.hi.round_to_grid(grid_exp, Rounding::Ceil),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.lo.to_string(), self.hi.to_string()])
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Axis-aligned box `re x im` in the complex plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re: DyadicInterval,
    pub im: DyadicInterval,
}

impl ComplexBox {
    pub fn new(re: DyadicInterval, im: DyadicInterval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        ComplexBox {
            re: DyadicInterval::point(re),
            im: DyadicInterval::point(im),
        }
    }

    pub fn real<T: Into<BigInt>>(v: T) -> Self {
        ComplexBox::point(Dyadic::from_int(v), Dyadic::zero())
    }

    /// Square of half-width `radius` around `(re, im)`.
    pub fn around(re: &Dyadic, im: &Dyadic, radius: &Dyadic) -> Self {
        ComplexBox {
            re: DyadicInterval::around(re, radius),
            im: DyadicInterval::around(im, radius),
        }
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        (self.re.midpoint(), self.im.midpoint())
    }

    /// Largest half-width of the two component intervals.
    pub fn half_width(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width()).shift(-1)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersection(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersection(&other.re)?,
            im: self.im.intersection(&other.im)?,
        })
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, k: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    /// Enclosure of `|z|^2` over the box.
    pub fn norm_sqr(&self) -> DyadicInterval {
        self.re.sqr().add(&self.im.sqr())
    }

    /// Enclosure of `1 / z` with endpoints on the grid `2^grid_exp`.
    pub fn recip(&self, grid_exp: i64) -> Result<ComplexBox> {
        let n = self.norm_sqr();
        if !n.lo().is_positive() {
            return Err(Error::Nonpositive);
        }
        let inv = n.recip(grid_exp)?;
        Ok(ComplexBox {
            re: self.re.mul(&inv).round_outward(grid_exp),
            im: self.im.neg().mul(&inv).round_outward(grid_exp),
        })
    }

    pub fn round_outward(&self, grid_exp: i64) -> ComplexBox {
        ComplexBox {
            re: self.re.round_outward(grid_exp),
            im: self.im.round_outward(grid_exp),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"re": self.re.to_json(), "im": self.im.to_json()})
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

/// Number of bits `B_x = ceil(log max(1,x)) + ceil(log max(1,1/x))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitMagnitude(pub u64);

impl BitMagnitude {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// `B_x` for a positive dyadic.
pub fn bit_magnitude(x: &Dyadic) -> Result<BitMagnitude> {
    if !x.is_positive() {
        return Err(Error::Nonpositive);
    }
    let one = Dyadic::one();
    let v = if x >= &one {
        x.ceil_log2().unwrap()
    } else {
        -x.floor_log2().unwrap()
    };
    Ok(BitMagnitude(v as u64))
}

/// `B_x` bound valid for every point of an interval with positive lower end.
pub fn bit_magnitude_interval(x: &DyadicInterval) -> Result<BitMagnitude> {
    let a = bit_magnitude(x.lo())?;
    let b = bit_magnitude(x.hi())?;
    Ok(a.max(b))
}

/// Interval containing `|z|` for every `z` in the box, of width below
/// `2^-quality`. When the box is too wide, `refine` is asked for a better box
/// at a higher absolute quality (doubling each time).
pub fn abs_interval(
    z: &ComplexBox,
    quality: u32,
    mut refine: Option<&mut dyn FnMut(u32) -> Result<ComplexBox>>,
) -> Result<DyadicInterval> {
    let mut current = z.clone();
    let mut request = quality + 2;
    let target = Dyadic::pow2(-(quality as i64));
    for _ in 0..64 {
        let grid = -(quality as i64) - 3;
        let m = current.norm_sqr().sqrt(grid)?;
        if m.width() < target {
            return Ok(m);
        }
        match refine.as_mut() {
            Some(f) => {
                current = f(request)?;
                request = request.saturating_mul(2);
            }
            None => return Err(Error::Unrefinable { quality }),
        }
    }
    Err(Error::Unrefinable { quality })
}
