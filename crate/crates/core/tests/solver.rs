mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{box_contains_real, construct, Constructed};
use projsolve::poly::{parse_system, PolynomialSystem};
use projsolve::solver::{solve, SolveReport};

fn contains(report: &SolveReport, x: &[BigInt]) -> usize {
    report
        .solutions
        .iter()
        .filter(|s| {
            s.coordinates
                .iter()
                .zip(x)
                .all(|(b, v)| box_contains_real(b, &BigRational::from_integer(v.clone())))
        })
        .count()
}

fn system(seed: u64, n: usize, degs: &[u32], transform: bool) -> Constructed {
    construct(&mut ChaCha8Rng::seed_from_u64(seed), n, degs, transform)
}

fn bezout(s: &PolynomialSystem) -> usize {
    s.degrees().iter().map(|&d| d as usize).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recovers_constructed_solutions(
        seed in any::<u64>(),
        n in 1usize..=3,
        degs in prop::collection::vec(1u32..=2, 3),
        transform in any::<bool>(),
        q in 8u32..40,
    ) {
        let c = system(seed, n, &degs[..n], transform);
        let r = solve(&c.system, q, seed).unwrap();
        prop_assert_eq!(r.solutions.len(), c.solutions.len());
        prop_assert!(r.solutions.len() <= bezout(&c.system));
        prop_assert_eq!(r.at_infinity, 0);
        for x in &c.solutions {
            prop_assert_eq!(contains(&r, x), 1);
        }
        for s in &r.solutions {
            prop_assert!(s.certify(&c.system));
            prop_assert_eq!(s.quality, q);
        }
        for (i, a) in r.solutions.iter().enumerate() {
            for b in &r.solutions[i + 1..] {
                prop_assert!(!a.intersects(b));
            }
        }
    }

    #[test]
    fn level_identity(seed in any::<u64>(), transform in any::<bool>()) {
        let c = system(seed, 2, &[2, 2], transform);
        let r = solve(&c.system, 16, seed).unwrap();
        prop_assert_eq!(r.solutions.len() + r.at_infinity, r.root_polynomial_degree);
        prop_assert!(r.oracle_calls >= 3);
    }

    #[test]
    fn deterministic_under_seed(seed in any::<u64>()) {
        let c = system(seed, 2, &[2, 1], true);
        let a = solve(&c.system, 20, seed).unwrap().to_json();
        let b = solve(&c.system, 20, seed).unwrap().to_json();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn drops_points_at_infinity_for_every_seed() {
    let s = parse_system("x1*x2 - 1\nx2 - 1").unwrap();
    for seed in 0..10 {
        let r = solve(&s, 24, seed).unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.at_infinity, 1);
        assert_eq!(contains(&r, &[BigInt::from(1), BigInt::from(1)]), 1);
    }
}

#[test]
fn higher_quality_boxes_nest_around_the_same_points() {
    let c = system(11, 3, &[2, 2, 1], true);
    let coarse = solve(&c.system, 10, 1).unwrap();
    let fine = solve(&c.system, 48, 1).unwrap();
    assert_eq!(coarse.solutions.len(), fine.solutions.len());
    for f in &fine.solutions {
        assert_eq!(coarse.solutions.iter().filter(|s| s.intersects(f)).count(), 1);
    }
}
