//! Exact determinants and characteristic polynomials of integer matrices by
//! elimination modulo word-sized primes and Chinese remaindering.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::UniPoly;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_BITS: u64 = 62;

/// The first `k` primes below `2^62`, in decreasing order.
pub fn primes(k: usize) -> Vec<u64> {
    static POOL: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let pool = POOL.get_or_init(|| Mutex::new(Vec::new()));
    let mut v = pool.lock().expect("prime pool");
    let mut cand = v.last().map_or((1u64 << PRIME_BITS) - 1, |&p| p - 2);
    while v.len() < k {
        if is_prime(cand) {
            v.push(cand);
        }
        cand -= 2;
    }
    v[..k].to_vec()
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced")
}

fn reduce_matrix(a: &[Vec<BigInt>], p: u64) -> Vec<Vec<u64>> {
    a.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect()
}

/// Determinant over `Z/p` by Gaussian elimination.
pub fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[col][col], p);
        let inv = inv_mod(a[col][col], p);
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let f = mul_mod(a[r][col], inv, p);
            for c in col..n {
                let t = mul_mod(f, a[col][c], p);
                a[r][c] = (a[r][c] + p - t) % p;
            }
        }
    }
    det
}

/// Characteristic polynomial `det(t I - A)` over `Z/p`, constant term first,
/// by reduction to upper Hessenberg form.
pub fn charpoly_mod(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&r| h[r][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p);
        for k in j + 2..n {
            if h[k][j] == 0 {
                continue;
            }
            let u = mul_mod(h[k][j], inv, p);
            // row_k -= u row_{j+1}
            for c in 0..n {
                let t = mul_mod(u, h[j + 1][c], p);
                h[k][c] = (h[k][c] + p - t) % p;
            }
            // col_{j+1} += u col_k
            for row in h.iter_mut() {
                let t = mul_mod(u, row[k], p);
                row[j + 1] = (row[j + 1] + t) % p;
            }
        }
    }
    // p_k(t) = (t - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{m=i+1}^{k} h_{m,m-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - mul_mod(h[k][k], c, p)) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let f = mul_mod(h[i][k], prod, p);
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = (next[t] + p - mul_mod(f, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// Incremental Chinese remaindering with symmetric output.
struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Crt {
    fn new() -> Crt {
        Crt {
            value: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }

    fn push(&mut self, r: u64, p: u64) {
        let pb = BigInt::from(p);
        let cur = reduce(&self.value, p);
        let m = reduce(&self.modulus, p);
        let k = mul_mod((r + p - cur) % p, inv_mod(m, p), p);
        self.value += &self.modulus * BigInt::from(k);
        self.modulus *= pb;
    }

    fn symmetric(&self) -> BigInt {
        let half: BigInt = &self.modulus >> 1u32;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

fn row_norm_bits(row: &[BigInt]) -> u64 {
    let s: BigInt = row.iter().map(|x| x * x).sum();
    // ceil(log2 sqrt(s)) <= ceil(bits(s) / 2)
    s.bits().div_ceil(2)
}

/// Number of primes whose product exceeds `2^(bits + 1)`.
fn prime_count(bits: u64) -> usize {
    (bits + 2).div_ceil(PRIME_BITS - 1) as usize
}

/// Exact determinant; the prime count comes from Hadamard's bound.
pub fn det_bigint(a: &[Vec<BigInt>]) -> BigInt {
    if a.is_empty() {
        return BigInt::one();
    }
    let bits: u64 = a.iter().map(|r| row_norm_bits(r)).sum();
    let mut crt = Crt::new();
    for p in primes(prime_count(bits)) {
        crt.push(det_mod(reduce_matrix(a, p), p), p);
    }
    crt.symmetric()
}

/// Exact `det(t I - A)`; coefficients are bounded by `prod (1 + |row|_2)`.
pub fn charpoly_bigint(a: &[Vec<BigInt>]) -> UniPoly {
    let n = a.len();
    if n == 0 {
        return UniPoly::one();
    }
    let bits: u64 = a.iter().map(|r| row_norm_bits(r) + 1).sum();
    let mut crts: Vec<Crt> = (0..=n).map(|_| Crt::new()).collect();
    for p in primes(prime_count(bits)) {
        let cp = charpoly_mod(reduce_matrix(a, p), p);
        for (c, r) in crts.iter_mut().zip(cp) {
            c.push(r, p);
        }
    }
    UniPoly::new(crts.iter().map(|c| c.symmetric()).collect())
}

/// Fraction-free (Bareiss) determinant, used as an independent check.
pub fn det_bareiss(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn primes_are_prime() {
        let ps = primes(5);
        assert!(ps.iter().all(|&p| is_prime(p) && p < 1 << 62));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime(561) && is_prime(1_000_000_007));
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_bigint(&m(&[&[2, 3], &[5, 7]])), BigInt::from(-1));
        assert_eq!(det_bigint(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_bigint(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]] -> t^2 - 4t + 3
        assert_eq!(charpoly_bigint(&m(&[&[2, 1], &[1, 2]])), UniPoly::from_i64(&[3, -4, 1]));
        // nilpotent shift
        assert_eq!(
            charpoly_bigint(&m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])),
            UniPoly::from_i64(&[0, 0, 0, 1])
        );
    }

    #[test]
    fn modular_matches_bareiss_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=12);
            let a: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen::<i32>())).collect())
                .collect();
            assert_eq!(det_bigint(&a), det_bareiss(&a));
        }
    }

    proptest! {
        #[test]
        fn charpoly_constant_term_is_signed_det(
            v in proptest::collection::vec(-50i64..50, 16)
        ) {
            let a: Vec<Vec<BigInt>> = v.chunks(4).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let cp = charpoly_bigint(&a);
            prop_assert_eq!(cp.coeff(0), det_bareiss(&a));
            prop_assert_eq!(cp.coeff(4), BigInt::one());
            let tr: BigInt = (0..4).map(|i| a[i][i].clone()).sum();
            prop_assert_eq!(cp.coeff(3), -tr);
        }
    }
}
