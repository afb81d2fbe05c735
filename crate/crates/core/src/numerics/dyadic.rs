//! Exact dyadic numbers `mantissa * 2^exponent`.
//!
//! Sums, differences and products of dyadics are dyadic, so those are exact.
//! Everything else (division, square roots, truncation to a working
//! precision) takes an explicit rounding direction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Direction used whenever a result has to be rounded to a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    /// Toward zero.
    Trunc,
}

/// A number `mantissa * 2^exponent`, kept canonical: the mantissa is odd,
/// or zero with exponent 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

pub(crate) fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn shl(x: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    x << (k as usize)
}

/// `x / 2^k` rounded in the requested direction.
fn shr_round(x: &BigInt, k: i64, mode: Rounding) -> BigInt {
    if k <= 0 {
        return shl(x, -k);
    }
    let d = BigInt::one() << (k as usize);
    match mode {
        Rounding::Floor => x.div_floor(&d),
        Rounding::Ceil => -((-x).div_floor(&d)),
        Rounding::Trunc => x / &d,
    }
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0) as i64;
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> (tz as usize),
                exponent: exponent + tz,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), exp - 1075)
        };
        Dyadic::new(BigInt::from(sign * m), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k`.
    pub fn shift(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.is_zero() || self.exponent >= 0
    }

    /// Exact integer value, if the number is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(shl(&self.mantissa, self.exponent.max(0)))
        } else {
            None
        }
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(bit_len(&self.mantissa) - 1 + self.exponent)
        }
    }

    /// `ceil(log2 |x|)`; `None` for zero.
    pub fn ceil_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let m = self.mantissa.abs();
        if m.is_one() {
            Some(self.exponent)
        } else {
            Some(bit_len(&m) + self.exponent)
        }
    }

    /// Round to the grid `2^grid_exp * Z`.
    pub fn round_to_grid(&self, grid_exp: i64, mode: Rounding) -> Dyadic {
        if self.is_zero() || self.exponent >= grid_exp {
            return self.clone();
        }
        let m = shr_round(&self.mantissa, grid_exp - self.exponent, mode);
        Dyadic::new(m, grid_exp)
    }

    /// Keep at most `bits` significant bits.
    pub fn round_to_bits(&self, bits: u32, mode: Rounding) -> Dyadic {
        let len = bit_len(&self.mantissa);
        if len <= bits as i64 {
            return self.clone();
        }
        let drop = len - bits as i64;
        self.round_to_grid(self.exponent + drop, mode)
    }

    /// Floor of the value as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            shl(&self.mantissa, self.exponent)
        } else {
            shr_round(&self.mantissa, -self.exponent, Rounding::Floor)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exponent >= 0 {
            shl(&self.mantissa, self.exponent)
        } else {
            shr_round(&self.mantissa, -self.exponent, Rounding::Ceil)
        }
    }

    /// Bring two dyadics onto a common exponent.
    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        (
            shl(&a.mantissa, a.exponent - e),
            shl(&b.mantissa, b.exponent - e),
            e,
        )
    }

    /// Quotient `a / b` rounded to the grid `2^grid_exp`.
    pub fn div_to_grid(a: &Dyadic, b: &Dyadic, grid_exp: i64, mode: Rounding) -> Result<Dyadic> {
        if b.is_zero() {
            return Err(Error::Nonpositive);
        }
        // a/b = (ma/mb) 2^(ea-eb); want floor(a/b / 2^g) = floor(ma 2^(ea-eb-g) / mb)
        let shift = a.exponent - b.exponent - grid_exp;
        let (num, den) = if shift >= 0 {
            (shl(&a.mantissa, shift), b.mantissa.clone())
        } else {
            (a.mantissa.clone(), shl(&b.mantissa, -shift))
        };
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let q = match mode {
            Rounding::Floor => num.div_floor(&den),
            Rounding::Ceil => -((-num).div_floor(&den)),
            Rounding::Trunc => num / den,
        };
        Ok(Dyadic::new(q, grid_exp))
    }

    /// Quotient with roughly `bits` significant bits.
    pub fn div_bits(a: &Dyadic, b: &Dyadic, bits: u32, mode: Rounding) -> Result<Dyadic> {
        if b.is_zero() {
            return Err(Error::Nonpositive);
        }
        if a.is_zero() {
            return Ok(Dyadic::zero());
        }
        let la = a.floor_log2().unwrap_or(0);
        let lb = b.floor_log2().unwrap_or(0);
        let grid = la - lb - bits as i64 - 1;
        Dyadic::div_to_grid(a, b, grid, mode)
    }

    /// Square root of a nonnegative dyadic rounded to the grid `2^grid_exp`.
    pub fn sqrt_to_grid(&self, grid_exp: i64, mode: Rounding) -> Result<Dyadic> {
        if self.is_negative() {
            return Err(Error::Nonpositive);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        // sqrt(x) / 2^g = sqrt(x * 2^(-2g)); x * 2^(-2g) = m * 2^(e - 2g)
        let sh = self.exponent - 2 * grid_exp;
        let (r, exact) = if sh >= 0 {
            let v = shl(&self.mantissa, sh);
            let r = v.sqrt();
            let exact = &r * &r == v;
            (r, exact)
        } else {
            let v = shr_round(&self.mantissa, -sh, Rounding::Floor);
            let r = v.sqrt();
            // floor(sqrt(floor(y))) == floor(sqrt(y)); exactness needs y integral
            let exact = &r * &r == v && shl(&v, -sh) == self.mantissa;
            (r, exact)
        };
        let r = match mode {
            Rounding::Floor | Rounding::Trunc => r,
            Rounding::Ceil => {
                if exact {
                    r
                } else {
                    r + 1
                }
            }
        };
        Ok(Dyadic::new(r, grid_exp))
    }

    /// Nearest `f64`, for diagnostics and seeding only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = bit_len(&self.mantissa);
        let (m, e) = if len > 60 {
            (
                shr_round(&self.mantissa, len - 60, Rounding::Trunc),
                self.exponent + len - 60,
            )
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mf: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        let h = (e / 2) as i32;
        mf * 2f64.powi(h) * 2f64.powi(e as i32 - h)
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Serialized as `m*2^e`; integers with exponent 0 are still written with
/// the suffix so the form is uniform.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            column: 1,
            message: format!("invalid dyadic literal `{s}`"),
        };
        let s = s.trim();
        match s.split_once("*2^") {
            Some((m, e)) => {
                let m: BigInt = m.trim().parse().map_err(|_| bad())?;
                let e: i64 = e.trim().parse().map_err(|_| bad())?;
                Ok(Dyadic::new(m, e))
            }
            None => {
                let m: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Dyadic::new(m, 0))
            }
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by bit position first
        let la = self.floor_log2().unwrap();
        let lb = other.floor_log2().unwrap();
        if la != lb {
            let ord = la.cmp(&lb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &'a Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Dyadic> for &'a Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        let z = d(0, 17);
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn ordering_and_arith() {
        assert!(d(1, -1) < d(1, 0));
        assert!(d(-3, 0) < d(-1, 1));
        assert_eq!(&d(1, -2) + &d(1, -2), d(1, -1));
        assert_eq!(&d(3, 0) * &d(1, -1), d(3, -1));
        assert_eq!(&d(5, 0) - &d(5, 0), Dyadic::zero());
    }

    #[test]
    fn rounding() {
        let x = d(7, -2); // 1.75
        assert_eq!(x.round_to_grid(0, Rounding::Floor), d(1, 0));
        assert_eq!(x.round_to_grid(0, Rounding::Ceil), d(2, 0));
        assert_eq!((-&x).round_to_grid(0, Rounding::Floor), d(-2, 0));
        assert_eq!((-&x).round_to_grid(0, Rounding::Trunc), d(-1, 0));
    }

    #[test]
    fn division_and_sqrt() {
        let q = Dyadic::div_to_grid(&d(1, 0), &d(3, 0), -4, Rounding::Floor).unwrap();
        assert_eq!(q, d(5, -4)); // floor(16/3)=5
        let q = Dyadic::div_to_grid(&d(1, 0), &d(3, 0), -4, Rounding::Ceil).unwrap();
        assert_eq!(q, d(6, -4));
        let s = d(2, 0).sqrt_to_grid(-10, Rounding::Floor).unwrap();
        assert_eq!(s, d(1448, -10));
        assert_eq!(d(9, 0).sqrt_to_grid(-3, Rounding::Ceil).unwrap(), d(3, 0));
        assert_eq!(d(1, -4).sqrt_to_grid(-1, Rounding::Ceil).unwrap(), d(1, -1));
    }

    #[test]
    fn serialization() {
        let x = d(-3, -5);
        assert_eq!(x.to_string(), "-3*2^-5");
        assert_eq!("-3*2^-5".parse::<Dyadic>().unwrap(), x);
        assert_eq!("12".parse::<Dyadic>().unwrap(), d(3, 2));
    }

    #[test]
    fn f64_roundtrip() {
        for v in [0.5, -3.25, 1e-300, 7.0] {
            assert_eq!(Dyadic::from_f64(v).to_f64(), v);
        }
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(m in any::<i64>(), e in -200i64..200) {
            let x = d(m, e);
            let y = Dyadic::new(x.mantissa().clone(), x.exponent());
            prop_assert_eq!(&x, &y);
            prop_assert!(x.is_zero() || x.mantissa().is_odd());
        }

        #[test]
        fn ordering_matches_f64(a in -1_000_000i64..1_000_000, ea in -20i64..20,
                                b in -1_000_000i64..1_000_000, eb in -20i64..20) {
            let (x, y) = (d(a, ea), d(b, eb));
            let fx = a as f64 * 2f64.powi(ea as i32);
            let fy = b as f64 * 2f64.powi(eb as i32);
            prop_assert_eq!(x.partial_cmp(&y), fx.partial_cmp(&fy));
        }
    }
}
