use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::{FormFamily, LinearForm};
use super::macaulay::{submatrix, HiddenForm, MacaulayMatrix};
use super::modular::{charpoly_bigint, det_bigint};
use crate::error::{Error, Result};
use crate::poly::{PolynomialSystem, UniPoly};

/// Outcome of a strongness check on an elimination polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strongness {
    CertifiedStrong,
    Unknown,
    CertifiedNotStrong,
}

impl Strongness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strongness::CertifiedStrong => "certified-strong",
            Strongness::Unknown => "unknown",
            Strongness::CertifiedNotStrong => "certified-not-strong",
        }
    }
}

/// An elimination polynomial `R^l` along `along`, primitive with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationResult {
    pub polynomial: UniPoly,
    pub along: LinearForm,
    pub strong: Strongness,
    pub shear_lambda: Option<BigInt>,
    /// Bezout bound `prod d_i`.
    pub degree_bound: BigInt,
}

impl EliminationResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coefficients": self.polynomial.to_json(),
            "degree": self.polynomial.deg0(),
            "strong": self.strong.as_str(),
            "form": self.along.to_json(),
        })
    }
}

/// Applies the shear of `form` to every polynomial: afterwards the pivot
/// coordinate of a solution equals `l` of the original solution.
pub fn shear_system(system: &PolynomialSystem, form: &LinearForm) -> Result<PolynomialSystem> {
    if form.num_vars() != system.num_vars() {
        return Err(Error::VariableMismatch {
            left: system.num_vars(),
            right: form.num_vars(),
        });
    }
    Ok(system.map(|p| p.shear(form.pivot(), form.coeffs())))
}

/// `0, 1, -1, 2, -2, ...`
fn sample_point(k: usize) -> BigInt {
    let h = k.div_ceil(2) as i64;
    BigInt::from(if k % 2 == 1 { h } else { -h })
}

/// Value of `det M / det S` at `u`, with `det(tI + M) / det(tI + S)` at
/// `t = 0` when `det S` vanishes there.
fn resultant_at(mac: &MacaulayMatrix, u: &BigInt) -> BigInt {
    let m = mac.eval(u);
    let s = submatrix(&m, mac.reduced_indices());
    let ds = det_bigint(&s);
    if !ds.is_zero() {
        let dm = det_bigint(&m);
        debug_assert!((&dm % &ds).is_zero());
        return dm / ds;
    }
    perturbed_at(&m, &s).coeff(0)
}

/// `det(tI + M) / det(tI + S)` as a polynomial in `t`.
fn perturbed_at(m: &[Vec<BigInt>], s: &[Vec<BigInt>]) -> UniPoly {
    let neg = |a: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
    };
    let pm = charpoly_bigint(&neg(m));
    let ps = charpoly_bigint(&neg(s));
    pm.div_exact(&ps).expect("perturbed resultant divides")
}

/// Interpolates `values` at the first sample points, then checks the
/// result at the extra points.
fn interpolate_checked(
    values: &[BigInt],
    extra: &[(BigInt, BigInt)],
) -> Option<UniPoly> {
    let pts: Vec<BigInt> = (0..values.len()).map(sample_point).collect();
    let p = UniPoly::interpolate(&pts, values)?;
    extra.iter().all(|(x, v)| &p.eval(x) == v).then_some(p)
}

fn normalize(p: UniPoly) -> UniPoly {
    if p.is_zero() {
        p
    } else {
        p.primitive()
    }
}

/// Resultant of the hidden system as a polynomial in the hidden variable.
fn macaulay_resultant(mac: &MacaulayMatrix, bezout: &BigInt, seed: u64) -> Result<UniPoly> {
    let cap = mac.degree_bound() as usize;
    let guess = bezout.to_usize().map_or(cap, |b| b.min(cap));
    let mut values: Vec<BigInt> = (0..=guess)
        .map(|k| resultant_at(mac, &sample_point(k)))
        .collect();
    let r = if guess < cap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reach = 4 * guess as i64 + 8;
        let extra: Vec<(BigInt, BigInt)> = (0..2)
            .map(|_| {
                let x = BigInt::from(rng.gen_range(reach..=8 * reach));
                let x = if rng.gen() { -x } else { x };
                let v = resultant_at(mac, &x);
                (x, v)
            })
            .collect();
        match interpolate_checked(&values, &extra) {
            Some(p) => p,
            None => {
                values.extend((guess + 1..=cap).map(|k| resultant_at(mac, &sample_point(k))));
                interpolate_checked(&values, &[])
                    .ok_or_else(|| Error::Certification("resultant interpolation".into()))?
            }
        }
    } else {
        interpolate_checked(&values, &[])
            .ok_or_else(|| Error::Certification("resultant interpolation".into()))?
    };
    if r.is_zero() {
        return Err(Error::NotZeroDimensional(
            "resultant vanishes identically along this form".into(),
        ));
    }
    Ok(r)
}

/// Hidden-variable resultant along `form`.
///
/// The system is sheared so that the pivot coordinate becomes `l`, the
/// pivot is hidden, and the remaining variables are homogenized. The
/// result has degree at most `prod d_i` and vanishes on every projection
/// `l(x)` of a solution. `strong` is left `Unknown`.
pub fn hidden_var_resultant(
    system: &PolynomialSystem,
    form: &LinearForm,
    seed: u64,
) -> Result<EliminationResult> {
    if system.polys().iter().any(|p| p.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    let sheared = shear_system(system, form)?;
    let pivot = form.pivot();
    let bezout = system.bezout_bound();
    let done = |p: UniPoly| EliminationResult {
        polynomial: normalize(p),
        along: form.clone(),
        strong: Strongness::Unknown,
        shear_lambda: None,
        degree_bound: bezout.clone(),
    };
    if system.num_vars() == 1 {
        let f = sheared.polys()[0].to_uni(0).expect("univariate");
        return Ok(done(f));
    }
    let mut forms = Vec::with_capacity(system.num_vars());
    for g in sheared.polys() {
        let split = g.split_hidden(pivot);
        let deg = split.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0);
        let coeffs = split
            .into_iter()
            .map(|(mut e, c)| {
                let s: u32 = e.iter().sum();
                e.push(deg - s);
                (e, c)
            })
            .collect();
        forms.push(HiddenForm { degree: deg, coeffs });
    }
    let constant: Vec<usize> = (0..forms.len()).filter(|&i| forms[i].degree == 0).collect();
    let hidden_coeff = |i: usize| forms[i].coeffs.values().next().expect("nonzero").clone();
    match constant.len() {
        0 => {
            let mac = MacaulayMatrix::build(&forms)?;
            let r = macaulay_resultant(&mac, &bezout, seed)?;
            Ok(done(r))
        }
        1 => {
            let i = constant[0];
            let e: u32 = (0..forms.len()).filter(|&k| k != i).map(|k| forms[k].degree).product();
            Ok(done(hidden_coeff(i).pow(e)))
        }
        _ => {
            let g = constant
                .iter()
                .fold(UniPoly::zero(), |acc, &i| acc.gcd(&hidden_coeff(i)));
            if g.deg0() > 0 {
                return Err(Error::NotZeroDimensional(
                    "two equations reduce to a common univariate factor".into(),
                ));
            }
            Ok(done(UniPoly::one()))
        }
    }
}

/// Top-degree forms of `system` (the system restricted to infinity).
fn forms_at_infinity(system: &PolynomialSystem) -> Vec<HiddenForm> {
    system
        .polys()
        .iter()
        .map(|p| {
            let d = p.degree();
            HiddenForm {
                degree: d,
                coeffs: p
                    .terms()
                    .iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() == d)
                    .map(|(e, c)| (e.clone(), UniPoly::constant(c.clone())))
                    .collect(),
            }
        })
        .collect()
}

/// True iff the homogenized system has no solution with `w = 0`, decided by
/// the resultant of the top-degree forms.
pub fn check_no_infinity(system: &PolynomialSystem) -> bool {
    if system.polys().iter().any(|p| p.is_zero()) {
        return false;
    }
    let forms = forms_at_infinity(system);
    if forms.iter().any(|f| f.degree == 0) {
        // a nonzero constant equation: no solutions anywhere
        return true;
    }
    let mac = MacaulayMatrix::build(&forms).expect("square forms");
    let zero = BigInt::zero();
    if !resultant_at(&mac, &zero).is_zero() {
        return true;
    }
    false
}

fn has_free_top_terms(system: &PolynomialSystem, pivot: usize) -> bool {
    system
        .polys()
        .iter()
        .all(|p| p.has_top_term_free_of(pivot, p.degree()))
}

/// Certified-strong when the sheared system has no solution at infinity and
/// every sheared equation has a top-degree term free of the pivot.
pub fn certify_strong(result: &EliminationResult, system: &PolynomialSystem) -> Strongness {
    if system.num_vars() == 1 {
        return Strongness::CertifiedStrong;
    }
    let Ok(sheared) = shear_system(system, &result.along) else {
        return Strongness::Unknown;
    };
    if has_free_top_terms(&sheared, result.along.pivot()) && check_no_infinity(&sheared) {
        Strongness::CertifiedStrong
    } else {
        Strongness::Unknown
    }
}

/// A member of a form family whose shear gives every equation a top-degree
/// term free of the pivot.
#[derive(Clone, Debug)]
pub struct ShearChoice {
    pub lambda_star: BigInt,
    pub candidate_set_size: u64,
    pub form: LinearForm,
    pub sheared: PolynomialSystem,
    pub draws: u64,
}

/// Draws `lambda` uniformly from `range` until the shear by
/// `family.at(lambda)` passes the term test, then scans the range
/// deterministically after `64 |range|` failed draws.
pub fn choose_shear(
    system: &PolynomialSystem,
    family: &FormFamily,
    range: Range<i64>,
    seed: u64,
) -> Result<ShearChoice> {
    if range.is_empty() {
        return Err(Error::OutOfRange("empty shear range".into()));
    }
    let size = range.end.abs_diff(range.start);
    let try_one = |lambda: i64, draws: u64| -> Result<Option<ShearChoice>> {
        let l = BigInt::from(lambda);
        let form = family.at(&l);
        let sheared = shear_system(system, &form)?;
        Ok(has_free_top_terms(&sheared, form.pivot()).then(|| ShearChoice {
            lambda_star: l,
            candidate_set_size: size,
            form,
            sheared,
            draws,
        }))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = size.saturating_mul(64);
    for draws in 1..=cap {
        if let Some(c) = try_one(rng.gen_range(range.clone()), draws)? {
            return Ok(c);
        }
    }
    for lambda in range {
        if let Some(c) = try_one(lambda, cap + 1)? {
            return Ok(c);
        }
    }
    Err(Error::Certification("no shear in range gives pivot-free top terms".into()))
}

/// Source of elimination polynomials.
pub trait EliminationOracle {
    fn eliminate(&mut self, system: &PolynomialSystem, form: &LinearForm) -> Result<EliminationResult>;

    /// Number of `eliminate` calls so far.
    fn calls(&self) -> u64;
}

/// Hidden-variable Macaulay resultants with strongness certification.
#[derive(Clone, Debug)]
pub struct MacaulayOracle {
    seed: u64,
    calls: u64,
}

impl MacaulayOracle {
    pub fn new(seed: u64) -> MacaulayOracle {
        MacaulayOracle { seed, calls: 0 }
    }
}

impl EliminationOracle for MacaulayOracle {
    fn eliminate(&mut self, system: &PolynomialSystem, form: &LinearForm) -> Result<EliminationResult> {
        self.calls += 1;
        let seed = self.seed.wrapping_add(self.calls.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut r = hidden_var_resultant(system, form, seed)?;
        r.strong = certify_strong(&r, system);
        Ok(r)
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}
