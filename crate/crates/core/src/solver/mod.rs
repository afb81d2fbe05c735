//! Isolation of all complex solutions of a square system.
//!
//! The system is first moved into a chart without solutions at infinity by
//! `x_{n+1} -> x_{n+1} + sum lambda_i x_i`. A strong separating form of the
//! transformed system projects its solutions onto the roots of a single
//! univariate polynomial; the points are lifted down the form tree to the
//! coordinate root sets and mapped back, dropping those that were at
//! infinity in the original system.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elim::{check_no_infinity, EliminationOracle, LinearForm, MacaulayOracle};
use crate::error::{Error, Result};
use crate::grid::lift_indices;
use crate::numerics::{ComplexBox, Dyadic};
use crate::poly::PolynomialSystem;
use crate::roots::{cauchy_bound, RootSet, MAX_PRECISION};
use crate::slf::{build_slf_family, select_strong_slf, SlfTree};

/// Cap on infinity-transform draws.
pub const MAX_INFINITY_DRAWS: u32 = 128;

/// Cap on full pipeline restarts after a failed strongness certificate.
pub const MAX_ATTEMPTS: u32 = 8;

/// `x_{n+1} -> x_{n+1} + sum lambda_i x_i`. A transformed solution `x*`
/// is the original projective point `(x* : 1 + lambda . x*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityTransform {
    pub lambdas: Vec<BigInt>,
    /// Number of draws until the transform was verified.
    pub draws: u32,
}

impl InfinityTransform {
    pub fn identity(n: usize) -> InfinityTransform {
        InfinityTransform {
            lambdas: vec![BigInt::zero(); n],
            draws: 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.lambdas.iter().all(|l| l.is_zero())
    }

    pub fn apply(&self, system: &PolynomialSystem) -> Result<PolynomialSystem> {
        let polys = system
            .polys()
            .iter()
            .map(|f| f.infinity_shift(&self.lambdas, f.degree()))
            .collect::<Result<Vec<_>>>()?;
        PolynomialSystem::new(polys)
    }

    /// Enclosure of the homogenizing coordinate `1 + lambda . x`.
    pub fn weight(&self, x: &[ComplexBox]) -> ComplexBox {
        self.lambdas
            .iter()
            .zip(x)
            .fold(ComplexBox::real(1), |acc, (l, v)| {
                acc.add(&v.scale(&Dyadic::from_int(l.clone())))
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambdas": self.lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "draws": self.draws,
        })
    }
}

/// Isolating boxes of one solution, half-width below `2^-quality`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBox {
    pub coordinates: Vec<ComplexBox>,
    pub quality: u32,
}

impl SolutionBox {
    /// `0 in f_i(box)` for every equation.
    pub fn certify(&self, system: &PolynomialSystem) -> bool {
        system
            .polys()
            .iter()
            .all(|f| f.eval_interval(&self.coordinates).contains_zero())
    }

    pub fn intersects(&self, other: &SolutionBox) -> bool {
        self.coordinates
            .iter()
            .zip(&other.coordinates)
            .all(|(a, b)| a.intersects(b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coordinates.iter().map(|b| b.to_json()).collect())
    }
}

fn mix(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn draw_transform(system: &PolynomialSystem, seed: u64, identity_first: bool) -> Result<(PolynomialSystem, InfinityTransform)> {
    let n = system.num_vars();
    if identity_first && check_no_infinity(system) {
        return Ok((system.clone(), InfinityTransform::identity(n)));
    }
    let d = system.max_degree().max(1) as u64;
    let top = d.saturating_pow(n as u32).saturating_mul(2).min(1 << 40);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=MAX_INFINITY_DRAWS {
        let lambdas: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=top))).collect();
        let t = InfinityTransform { lambdas, draws: draw + identity_first as u32 };
        if t.is_identity() {
            continue;
        }
        let transformed = t.apply(system)?;
        if check_no_infinity(&transformed) {
            return Ok((transformed, t));
        }
    }
    Err(Error::NotZeroDimensional(
        "system may not be zero-dimensional in P^n".into(),
    ))
}

/// Finds `lambda` for which the transformed system has no solutions at
/// infinity. The identity is tried first, then `lambda_i` uniform in
/// `[0, 2d^n]`.
pub fn remove_infinity(system: &PolynomialSystem, seed: u64) -> Result<(PolynomialSystem, InfinityTransform)> {
    draw_transform(system, seed, true)
}

/// Solutions of a transformed system as index paths into the coordinate
/// root sets.
#[derive(Clone, Debug)]
pub struct TransformedSolutions {
    pub system: PolynomialSystem,
    /// Root set of the elimination polynomial along each coordinate.
    pub leaves: Vec<RootSet>,
    /// `paths[k][i]` indexes the `i`-th coordinate of solution `k`.
    pub paths: Vec<Vec<usize>>,
}

impl TransformedSolutions {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Coordinate boxes of every solution at quality `q`.
    pub fn boxes(&self, q: u32) -> Result<Vec<Vec<ComplexBox>>> {
        let leaves = self
            .leaves
            .iter()
            .map(|r| r.refine(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .paths
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &k)| leaves[i].region(k).clone()).collect())
            .collect())
    }

    /// Largest Cauchy exponent over the coordinate elimination polynomials.
    pub fn gamma(&self) -> Result<u32> {
        self.leaves
            .iter()
            .map(|r| cauchy_bound(r.polynomial()).map(|b| b.gamma))
            .try_fold(1, |a, g| g.map(|g| a.max(g)))
    }
}

fn lift_paths(tree: &SlfTree, node: usize, select: &[usize]) -> Result<Vec<Vec<usize>>> {
    let nd = &tree.nodes[node];
    let Some((a, b)) = nd.children else {
        return Ok(select.iter().map(|&k| vec![k]).collect());
    };
    let s = nd
        .s
        .as_ref()
        .and_then(|s| s.to_u64())
        .ok_or_else(|| Error::Certification("combining integer out of range".into()))?;
    let roots = |i: usize| {
        tree.nodes[i]
            .roots
            .as_ref()
            .ok_or_else(|| Error::Certification("node without root set".into()))
    };
    let pairs = lift_indices(roots(node)?, roots(a)?, roots(b)?, s, select)?;
    let left: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let right: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let pl = lift_paths(tree, a, &left)?;
    let pr = lift_paths(tree, b, &right)?;
    Ok(pl
        .into_iter()
        .zip(pr)
        .map(|(mut l, r)| {
            l.extend(r);
            l
        })
        .collect())
}

/// Lifts every root of the root elimination polynomial down the tree.
pub fn reconstruct(tree: &SlfTree, system: &PolynomialSystem) -> Result<TransformedSolutions> {
    let root = tree
        .root_node()
        .roots
        .as_ref()
        .ok_or_else(|| Error::Certification("root form was not eliminated".into()))?;
    let select: Vec<usize> = (0..root.len()).collect();
    let paths = lift_paths(tree, tree.root, &select)?;
    let mut leaves: Vec<Option<RootSet>> = vec![None; system.num_vars()];
    for nd in &tree.nodes {
        if nd.children.is_none() {
            leaves[nd.block.start] = nd.roots.clone();
        }
    }
    let leaves = leaves
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Certification("missing coordinate root set".into()))?;
    let out = TransformedSolutions {
        system: system.clone(),
        leaves,
        paths,
    };
    let q = out.leaves.iter().map(|r| r.quality()).max().unwrap_or(1);
    for (k, b) in out.boxes(q)?.into_iter().enumerate() {
        let sb = SolutionBox { coordinates: b, quality: q };
        if !sb.certify(system) {
            return Err(Error::Certification(format!(
                "lifted point {k} fails the interval certificate"
            )));
        }
    }
    Ok(out)
}

/// Finite solutions of the original system and the count dropped at
/// infinity.
#[derive(Clone, Debug)]
pub struct Classification {
    pub finite: Vec<SolutionBox>,
    pub at_infinity: usize,
    /// Quality the transformed solutions were refined to.
    pub transformed_quality: u32,
    /// Extra oracle calls spent on magnitude bounds.
    pub oracle_calls: u64,
}

fn ceil_log2(x: u64) -> u32 {
    64 - x.saturating_sub(1).leading_zeros()
}

/// Lazily computed `|x_i| < 2^gamma_i` for the finite solutions of the
/// original system, from its coordinate elimination polynomials.
struct OriginalBounds<'a> {
    system: &'a PolynomialSystem,
    oracle: &'a mut dyn EliminationOracle,
    gammas: Option<Vec<Option<u32>>>,
    calls: u64,
}

impl OriginalBounds<'_> {
    fn get(&mut self) -> &[Option<u32>] {
        if self.gammas.is_none() {
            let n = self.system.num_vars();
            let mut g = Vec::with_capacity(n);
            for i in 0..n {
                self.calls += 1;
                let r = self.oracle.eliminate(self.system, &LinearForm::coordinate(n, i));
                g.push(r.ok().and_then(|r| cauchy_bound(&r.polynomial).ok()).map(|b| b.gamma));
            }
            self.gammas = Some(g);
        }
        self.gammas.as_deref().expect("computed")
    }
}

enum Kind {
    Finite,
    Infinite,
    Unknown,
}

/// Maps transformed solutions back to the original chart.
///
/// A point is finite once the enclosure of `w = 1 + lambda . x*` excludes
/// zero, and infinite once `|w| 2^gamma_i < |x*_i|` for some coordinate,
/// since a finite point would then have `|x_i| = |x*_i / w| > 2^gamma_i`.
/// Refinement starts at `max(rho + 4, 2 Gamma + log n + n log d)` and
/// doubles until every point is decided and the output boxes are disjoint.
pub fn classify_and_invert(
    solutions: &TransformedSolutions,
    transform: &InfinityTransform,
    original: &PolynomialSystem,
    quality: u32,
    oracle: &mut dyn EliminationOracle,
) -> Result<Classification> {
    let n = original.num_vars() as u64;
    let d = original.max_degree().max(2) as u64;
    let mut q = quality + 4;
    if !transform.is_identity() {
        let gamma = solutions.gamma()? as u64;
        let threshold = 2 * gamma + ceil_log2(n) as u64 + n * ceil_log2(d) as u64 + 1;
        q = q.max(threshold.min(MAX_PRECISION as u64) as u32);
    }
    let mut bounds = OriginalBounds {
        system: original,
        oracle,
        gammas: None,
        calls: 0,
    };
    let target = Dyadic::pow2(-(quality as i64));
    let grid = -(quality as i64) - 4;
    loop {
        let boxes = solutions.boxes(q)?;
        let mut finite = Vec::new();
        let mut at_infinity = 0;
        let mut done = true;
        for xs in &boxes {
            let w = transform.weight(xs);
            let kind = if !w.contains_zero() {
                Kind::Finite
            } else {
                let wmax = w.norm_sqr().hi().clone();
                let gammas = bounds.get();
                let infinite = xs.iter().zip(gammas).any(|(x, g)| {
                    g.is_some_and(|g| &wmax.shift(2 * g as i64) < x.norm_sqr().lo())
                });
                if infinite {
                    Kind::Infinite
                } else {
                    Kind::Unknown
                }
            };
            match kind {
                Kind::Infinite => at_infinity += 1,
                Kind::Unknown => done = false,
                Kind::Finite => {
                    let inv = w.recip(grid - q as i64)?;
                    let coords: Vec<ComplexBox> =
                        xs.iter().map(|x| x.mul(&inv).round_outward(grid)).collect();
                    if coords.iter().any(|c| c.half_width() >= target) {
                        done = false;
                    }
                    finite.push(SolutionBox { coordinates: coords, quality });
                }
            }
        }
        let disjoint = (0..finite.len())
            .all(|i| (i + 1..finite.len()).all(|j| !finite[i].intersects(&finite[j])));
        if done && disjoint {
            for (k, s) in finite.iter().enumerate() {
                if !s.certify(original) {
                    return Err(Error::Certification(format!(
                        "solution {k} fails the interval certificate"
                    )));
                }
            }
            return Ok(Classification {
                finite,
                at_infinity,
                transformed_quality: q,
                oracle_calls: bounds.calls,
            });
        }
        if q >= MAX_PRECISION {
            return Err(Error::Certification(
                "could not separate finite solutions from solutions at infinity".into(),
            ));
        }
        q = (2 * q).min(MAX_PRECISION);
    }
}

/// Output of [`solve`].
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solutions: Vec<SolutionBox>,
    pub at_infinity: usize,
    pub transform: InfinityTransform,
    pub root_form: LinearForm,
    pub root_polynomial_degree: usize,
    pub oracle_calls: u64,
    pub attempts: u32,
    pub transformed_quality: u32,
}

impl SolveReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "solutions": self.solutions.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "count": self.solutions.len(),
            "at_infinity": self.at_infinity,
            "transform": self.transform.to_json(),
            "root_form": self.root_form.to_json(),
            "oracle_calls": self.oracle_calls,
            "attempts": self.attempts,
        })
    }
}

/// Full pipeline: remove infinity, build a strong separating form, lift,
/// classify and invert. A failed strongness certificate restarts with a
/// fresh infinity transform.
pub fn solve(system: &PolynomialSystem, quality: u32, seed: u64) -> Result<SolveReport> {
    if quality == 0 {
        return Err(Error::OutOfRange("quality must be at least 1".into()));
    }
    if system.polys().iter().any(|f| f.is_zero()) {
        return Err(Error::NotZeroDimensional("zero equation".into()));
    }
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let s = mix(seed, attempt as u64);
        let (transformed, transform) = draw_transform(system, s, attempt == 0)?;
        let mut oracle = MacaulayOracle::new(mix(s, 1));
        let tree = build_slf_family(&transformed, &mut oracle)
            .and_then(|f| select_strong_slf(f, &transformed, &mut oracle, mix(s, 2)));
        let tree = match tree {
            Ok(t) => t,
            Err(e @ (Error::Certification(_) | Error::SolutionsAtInfinity)) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let sols = reconstruct(&tree, &transformed)?;
        let c = classify_and_invert(&sols, &transform, system, quality, &mut oracle)?;
        let root = tree.root_node();
        return Ok(SolveReport {
            solutions: c.finite,
            at_infinity: c.at_infinity,
            transform,
            root_form: root.form.clone(),
            root_polynomial_degree: root.roots.as_ref().map_or(0, |r| r.len()),
            oracle_calls: tree.oracle_calls + c.oracle_calls,
            attempts: attempt + 1,
            transformed_quality: c.transformed_quality,
        });
    }
    Err(last.unwrap_or_else(|| Error::Certification("no strong separating form found".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_system, MultiPoly};

    fn sys(src: &str) -> PolynomialSystem {
        parse_system(src).unwrap()
    }

    fn contains_int(b: &ComplexBox, x: i64) -> bool {
        b.contains_point(&Dyadic::from_int(x), &Dyadic::zero())
    }

    fn check(report: &SolveReport, system: &PolynomialSystem, expected: &[Vec<i64>]) {
        assert_eq!(report.solutions.len(), expected.len());
        for e in expected {
            let hits = report
                .solutions
                .iter()
                .filter(|s| {
                    s.coordinates
                        .iter()
                        .zip(e)
                        .all(|(b, &v)| contains_int(b, v))
                })
                .count();
            assert_eq!(hits, 1, "solution {e:?}");
        }
        for s in &report.solutions {
            assert!(s.certify(system));
            assert!(s.coordinates.iter().all(|c| c.half_width() < Dyadic::pow2(-(s.quality as i64))));
        }
    }

    #[test]
    fn unit_square() {
        let s = sys("x1^2 - x1\nx2^2 - x2");
        let r = solve(&s, 20, 0).unwrap();
        assert!(r.transform.is_identity());
        check(&r, &s, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn circle_and_line() {
        let s = sys("x1^2 + x2^2 - 1\nx1 - x2");
        let r = solve(&s, 32, 0).unwrap();
        assert_eq!(r.solutions.len(), 2);
        let half = Dyadic::new(1.into(), -1);
        for sol in &r.solutions {
            for c in &sol.coordinates {
                let sq = c.mul(c);
                assert!(sq.re.contains(&half));
            }
        }
    }

    #[test]
    fn univariate() {
        let s = sys("x1^2 - 2");
        let r = solve(&s, 40, 0).unwrap();
        assert_eq!(r.solutions.len(), 2);
        for sol in &r.solutions {
            let sq = sol.coordinates[0].mul(&sol.coordinates[0]);
            assert!(sq.re.contains(&Dyadic::from_int(2)));
        }
    }

    #[test]
    fn drops_solution_at_infinity() {
        let s = sys("x1*x2 - 1\nx2 - 1");
        assert!(!check_no_infinity(&s));
        let r = solve(&s, 24, 0).unwrap();
        assert!(!r.transform.is_identity());
        assert_eq!(r.at_infinity, 1);
        check(&r, &s, &[vec![1, 1]]);
    }

    #[test]
    fn identity_transform_passes_through() {
        let s = sys("x1 - 1\nx2 - 1");
        let (t, tr) = remove_infinity(&s, 3).unwrap();
        assert!(tr.is_identity() && tr.draws == 1);
        assert_eq!(t, s);
    }

    #[test]
    fn transform_moves_infinite_solution() {
        let s = sys("x1*x2 - 1\nx2 - 1");
        let (t, tr) = remove_infinity(&s, 5).unwrap();
        assert!(!tr.lambdas[0].is_zero());
        assert!(check_no_infinity(&t));
        assert_eq!(t, tr.apply(&s).unwrap());
    }

    #[test]
    fn projective_quadrics_need_no_transform() {
        // x1^2 - x3^2, x2^2 - x3^2 in P^2: the four points all have x3 != 0
        let s = sys("x1^2 - 1\nx2^2 - 1");
        let (_, tr) = remove_infinity(&s, 5).unwrap();
        assert!(tr.draws <= 2);
    }

    #[test]
    fn two_conics() {
        let s = sys("x1^2 + x2^2 - 4\nx1*x2 - 1");
        let r = solve(&s, 32, 0).unwrap();
        assert_eq!(r.solutions.len(), 4);
        for sol in &r.solutions {
            assert!(sol.certify(&s));
            assert!(sol.coordinates.iter().all(|c| c.im.contains_zero()));
        }
    }

    #[test]
    fn product_system_three_vars() {
        let n = 3;
        let lin = |i: usize, c: i64| MultiPoly::var(n, i).sub(&MultiPoly::constant(n, c));
        let roots = [[1, -2], [0, 3], [2, -1]];
        let polys: Vec<MultiPoly> = (0..n)
            .map(|i| lin(i, roots[i][0]).mul_sparse(&lin(i, roots[i][1])))
            .collect();
        let s = PolynomialSystem::new(polys).unwrap();
        let r = solve(&s, 32, 1).unwrap();
        let mut expected = Vec::new();
        for a in roots[0] {
            for b in roots[1] {
                for c in roots[2] {
                    expected.push(vec![a, b, c]);
                }
            }
        }
        check(&r, &s, &expected);
    }

    #[test]
    fn deterministic_under_seed() {
        let s = sys("x1^2 + x2^2 - 4\nx1*x2 - 1");
        let a = solve(&s, 16, 9).unwrap();
        let b = solve(&s, 16, 9).unwrap();
        assert_eq!(a.solutions, b.solutions);
    }

    #[test]
    fn rejects_positive_dimensional() {
        let s = sys("vars 2\nx1 - x2\nx1 - x2");
        assert!(matches!(solve(&s, 8, 0), Err(Error::NotZeroDimensional(_))));
    }
}
