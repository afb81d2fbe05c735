//! Macaulay matrices of square homogeneous systems whose coefficients are
//! univariate polynomials in a hidden variable.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// A form of degree `degree` in `k` variables with coefficients in `Z[u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenForm {
    pub degree: u32,
    pub coeffs: BTreeMap<Vec<u32>, UniPoly>,
}

impl HiddenForm {
    pub fn new(degree: u32, coeffs: BTreeMap<Vec<u32>, UniPoly>) -> Result<HiddenForm> {
        for (e, c) in &coeffs {
            if e.iter().sum::<u32>() != degree || c.is_zero() {
                return Err(Error::InvalidForm);
            }
        }
        Ok(HiddenForm { degree, coeffs })
    }

    pub fn num_vars(&self) -> Option<usize> {
        self.coeffs.keys().next().map(|e| e.len())
    }
}

#[derive(Clone, Debug)]
pub struct MacaulayMatrix {
    degrees: Vec<u32>,
    degree_param: u32,
    labels: Vec<Vec<u32>>,
    entries: Vec<Vec<UniPoly>>,
    reduced: Vec<usize>,
}

/// Degree-`n` monomials in `k` variables, descending lexicographic order.
fn monomials(k: usize, n: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == k {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=n).rev() {
            cur.push(a);
            rec(k, n - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, n, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

impl MacaulayMatrix {
    /// Rows and columns are labelled by the degree-`N` monomials,
    /// `N = sum (D_i - 1) + 1`. The row of `x^a` is `x^(a - D_i e_i) F_i` for
    /// the smallest `i` with `a_i >= D_i`; the reduced submatrix keeps the
    /// labels with at least two such `i`.
    pub fn build(forms: &[HiddenForm]) -> Result<MacaulayMatrix> {
        let k = forms.len();
        if k == 0 {
            return Err(Error::NonSquare { polys: 0, vars: 0 });
        }
        for f in forms {
            if f.coeffs.is_empty() {
                return Err(Error::ZeroPolynomial);
            }
            let vars = f.num_vars().expect("nonzero form");
            if vars != k {
                return Err(Error::NonSquare { polys: k, vars });
            }
            if f.degree == 0 {
                return Err(Error::InvalidForm);
            }
        }
        let degrees: Vec<u32> = forms.iter().map(|f| f.degree).collect();
        let degree_param = degrees.iter().map(|d| d - 1).sum::<u32>() + 1;
        let labels = monomials(k, degree_param);
        let index: HashMap<&[u32], usize> =
            labels.iter().enumerate().map(|(i, a)| (a.as_slice(), i)).collect();
        let m = labels.len();
        let mut entries = vec![vec![UniPoly::zero(); m]; m];
        let mut reduced = Vec::new();
        for (r, a) in labels.iter().enumerate() {
            let mut divisible = (0..k).filter(|&i| a[i] >= degrees[i]);
            let i = divisible.next().expect("degree parameter covers every label");
            if divisible.next().is_some() {
                reduced.push(r);
            }
            let mut cof = a.clone();
            cof[i] -= degrees[i];
            for (g, c) in &forms[i].coeffs {
                let col: Vec<u32> = cof.iter().zip(g).map(|(x, y)| x + y).collect();
                entries[r][index[col.as_slice()]] = c.clone();
            }
        }
        Ok(MacaulayMatrix {
            degrees,
            degree_param,
            labels,
            entries,
            reduced,
        })
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn degree_param(&self) -> u32 {
        self.degree_param
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<UniPoly>] {
        &self.entries
    }

    /// Row/column indices of the reduced submatrix `S`.
    pub fn reduced_indices(&self) -> &[usize] {
        &self.reduced
    }

    /// `sum_rows max_entry_degree`: bounds the `u`-degree of `det M` and of
    /// every coefficient of `det(M + tI)`.
    pub fn degree_bound(&self) -> u64 {
        self.entries
            .iter()
            .map(|row| row.iter().filter_map(|e| e.degree()).max().unwrap_or(0) as u64)
            .sum()
    }

    pub fn eval(&self, u: &BigInt) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| if e.is_zero() { BigInt::zero() } else { e.eval(u) })
                    .collect()
            })
            .collect()
    }

    pub fn eval_reduced(&self, u: &BigInt) -> Vec<Vec<BigInt>> {
        submatrix(&self.eval(u), &self.reduced)
    }
}

pub fn submatrix(a: &[Vec<BigInt>], idx: &[usize]) -> Vec<Vec<BigInt>> {
    idx.iter()
        .map(|&r| idx.iter().map(|&c| a[r][c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(degree: u32, terms: &[(&[u32], &[i64])]) -> HiddenForm {
        HiddenForm::new(
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), UniPoly::from_i64(c))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(2, 3)[0], vec![3, 0]);
        assert_eq!(monomials(1, 5), vec![vec![5]]);
    }

    #[test]
    fn two_linear_forms() {
        let m = MacaulayMatrix::build(&[
            form(1, &[(&[1, 0], &[2]), (&[0, 1], &[3])]),
            form(1, &[(&[1, 0], &[5]), (&[0, 1], &[7])]),
        ])
        .unwrap();
        let e = m.eval(&BigInt::zero());
        assert_eq!(e, vec![vec![2.into(), 3.into()], vec![5.into(), 7.into()]]);
        assert!(m.reduced_indices().is_empty());
    }

    #[test]
    fn binary_forms_give_sylvester() {
        // a0 y^2 + a1 y w + a2 w^2 and b0 y + b1 w
        let m = MacaulayMatrix::build(&[
            form(2, &[(&[2, 0], &[1]), (&[1, 1], &[2]), (&[0, 2], &[3])]),
            form(1, &[(&[1, 0], &[4]), (&[0, 1], &[5])]),
        ])
        .unwrap();
        assert_eq!(m.dimension(), 3);
        assert!(m.reduced_indices().is_empty());
        let e = m.eval(&BigInt::zero());
        let expect: Vec<Vec<BigInt>> = [[1, 2, 3], [4, 5, 0], [0, 4, 5]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(e, expect);
    }

    #[test]
    fn three_quadrics_shape() {
        let q = |i: usize| {
            let mut e = vec![0u32; 3];
            e[i] = 2;
            form(2, &[(&e, &[1, 1])])
        };
        let m = MacaulayMatrix::build(&[q(0), q(1), q(2)]).unwrap();
        assert_eq!(m.degree_param(), 4);
        assert_eq!(m.dimension(), 15);
        // labels with two squared factors: x^2y^2, x^2z^2, y^2z^2
        assert_eq!(m.reduced_indices().len(), 3);
        assert_eq!(m.degree_bound(), 15);
    }

    #[test]
    fn rejects_non_square() {
        let f = form(1, &[(&[1, 0, 0], &[1])]);
        assert!(matches!(
            MacaulayMatrix::build(&[f.clone(), f]),
            Err(Error::NonSquare { .. })
        ));
    }
}
