#![allow(dead_code)]

pub mod schema;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use projsolve::numerics::{ComplexBox, Dyadic};
use projsolve::poly::{MultiPoly, PolynomialSystem, UniPoly};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")
}

pub struct GoldenCase {
    pub name: String,
    pub args: Vec<String>,
    pub input: PathBuf,
    pub expected: PathBuf,
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(data_dir().join("golden.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let name = c["name"].as_str().unwrap().to_string();
            let args: Vec<String> = c["args"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| a.as_str().unwrap().to_string())
                .collect();
            let ext = if args.iter().any(|a| a == "text") { "txt" } else { "json" };
            GoldenCase {
                expected: data_dir().join("expected").join(format!("{name}.{ext}")),
                input: data_dir().join("inputs").join(c["input"].as_str().unwrap()),
                name,
                args,
            }
        })
        .collect()
}

pub struct RunOutput {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn run_bin(args: &[&str]) -> RunOutput {
    let out = Command::new(env!("CARGO_BIN_EXE_projsolve"))
        .args(args)
        .output()
        .expect("binary runs");
    RunOutput {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn run_case(c: &GoldenCase) -> RunOutput {
    let mut args: Vec<&str> = c.args.iter().map(|s| s.as_str()).collect();
    let input = c.input.to_str().unwrap();
    args.push(input);
    run_bin(&args)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn dyadic_to_rational(x: &Dyadic) -> BigRational {
    let m = BigRational::from_integer(x.mantissa().clone());
    let e = x.exponent();
    let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        m * p
    } else {
        m / p
    }
}

/// Whether the box contains the real rational point `x`.
pub fn box_contains_real(b: &ComplexBox, x: &BigRational) -> bool {
    let lo = dyadic_to_rational(b.re.lo());
    let hi = dyadic_to_rational(b.re.hi());
    lo <= *x && *x <= hi && b.im.contains_zero()
}

/// Primitive integer polynomial `prod (den x - num)` over the given roots,
/// with multiplicities.
pub fn poly_from_rational_roots(roots: &[(BigRational, u32)]) -> UniPoly {
    let mut p = UniPoly::one();
    for (r, m) in roots {
        let f = UniPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        for _ in 0..*m {
            p = p.mul(&f);
        }
    }
    p
}

/// Random distinct rational roots `a/b` with small numerators and
/// denominators, multiplicities `1..=max_mult`, total degree `<= max_deg`,
/// and coefficient bit size `<= max_bits`.
pub fn random_rational_roots<R: Rng>(
    rng: &mut R,
    max_deg: u32,
    max_bits: u64,
    max_mult: u32,
) -> (Vec<(BigRational, u32)>, UniPoly) {
    loop {
        let k = rng.gen_range(1..=max_deg);
        let mut roots: Vec<(BigRational, u32)> = Vec::new();
        let mut deg = 0;
        while deg < k {
            let r = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            if roots.iter().any(|(s, _)| *s == r) {
                continue;
            }
            let m = rng.gen_range(1..=max_mult).min(k - deg);
            deg += m;
            roots.push((r, m));
        }
        let p = poly_from_rational_roots(&roots);
        if p.coeffs().iter().all(|c| c.bits() <= max_bits) {
            return (roots, p);
        }
    }
}

/// Determinant over `Q` by Gaussian elimination.
pub fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Newton interpolation through `(x_i, y_i)`; returns rational coefficients,
/// constant first.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += coeffs[k].clone();
            }
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += dd[i].clone();
        coeffs = next;
    }
    coeffs
}

/// Integer polynomial from rational coefficients, made primitive with a
/// positive leading coefficient.
pub fn primitive_from_rationals(c: &[BigRational]) -> UniPoly {
    let lcm = c
        .iter()
        .fold(BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    normalize(&UniPoly::new(ints))
}

pub fn normalize(p: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return p.clone();
    }
    let g = p
        .coeffs()
        .iter()
        .fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c));
    let sign = if p.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
    UniPoly::new(p.coeffs().iter().map(|c| c / &g * &sign).collect())
}

pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let k = rng.gen_range(-2..=2);
            for c in 0..n {
                a[i][c] += k * a[j][c];
            }
        }
    }
    a
}

pub fn linear(n: usize, row: &[i64], c: i64) -> MultiPoly {
    let mut p = MultiPoly::constant(n, -c);
    for (j, &a) in row.iter().enumerate() {
        p = p.add(&MultiPoly::var(n, j).scale(&BigInt::from(a)));
    }
    p
}

/// `g_i(x) = prod_j ((A x)_i - a_ij)` with its integer solutions `A^-1 p`.
pub struct Constructed {
    pub system: PolynomialSystem,
    pub solutions: Vec<Vec<BigInt>>,
}

pub fn construct<R: Rng>(rng: &mut R, n: usize, degs: &[u32], transform: bool) -> Constructed {
    let a = if transform {
        unimodular(rng, n)
    } else {
        (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
    };
    let values: Vec<Vec<i64>> = degs
        .iter()
        .map(|&d| {
            let mut s = BTreeSet::new();
            while s.len() < d as usize {
                s.insert(rng.gen_range(-4..=4));
            }
            s.into_iter().collect()
        })
        .collect();
    let polys = (0..n)
        .map(|i| {
            values[i]
                .iter()
                .fold(MultiPoly::constant(n, 1), |p, &v| p.mul_sparse(&linear(n, &a[i], v)))
        })
        .collect();
    let system = PolynomialSystem::new(polys).unwrap();
    // grid points p, solutions x with A x = p, found by exact solving
    let mut solutions = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let p: Vec<BigRational> = (0..n).map(|i| rat(values[i][idx[i]], 1)).collect();
        let x = solve_linear(&a, &p);
        solutions.push(x.iter().map(|v| v.to_integer()).collect());
        let mut i = 0;
        loop {
            if i == n {
                return Constructed { system, solutions };
            }
            idx[i] += 1;
            if idx[i] < values[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn solve_linear(a: &[Vec<i64>], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = a[i].iter().map(|&x| rat(x, 1)).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("invertible");
        m.swap(p, c);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..=n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    (0..n).map(|i| &m[i][n] / &m[i][i]).collect()
}
