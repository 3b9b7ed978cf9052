//! Property suites shared by `properties.rs` and the acceptance run.

use std::sync::OnceLock;

use chipsplit::enumeration::{enumerate_fundamental_with, EnumerationOptions};
use chipsplit::linalg::ExactMatrix;
use chipsplit::models::{
    composite, decompose, integral_outcome_to_model, is_fundamental, model_to_outcome, outcome_to_model,
    ParametricModel,
};
use chipsplit::pascal::{is_outcome, outcome_witness, phi_basis, psi_bar_basis, psi_basis};
use chipsplit::{ChipConfiguration, Coord, Game, Perm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 512;
pub const SEED: u64 = 0x5eed_c41b;

fn config() -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(config()).run(&strategy, test).map_err(|e| e.to_string())
}

fn point(d: u32, idx: usize) -> Coord {
    Coord::from_index(idx % ((d as usize + 1) * (d as usize + 2) / 2))
}

fn arb_config(d: u32) -> impl Strategy<Value = ChipConfiguration> {
    prop::collection::vec((any::<usize>(), -5i64..=5), 0..8).prop_map(move |v| {
        ChipConfiguration::from_entries(v.into_iter().map(|(k, x)| (point(d, k), BigInt::from(x))), Some(d)).unwrap()
    })
}

/// Moves strictly below the top degree so that every move stays inside `V_d`.
fn arb_game(d: u32) -> impl Strategy<Value = Game<BigInt>> {
    prop::collection::vec((any::<usize>(), -3i64..=3), 0..8).prop_map(move |v| {
        let mut g = Game::new();
        for (k, x) in v {
            g.add_at(point(d - 1, k), BigInt::from(x));
        }
        g
    })
}

fn arb_outcome() -> impl Strategy<Value = (u32, ChipConfiguration)> {
    (2u32..=7).prop_flat_map(|d| arb_game(d).prop_map(move |g| (d, ChipConfiguration::zero().with_bound(Some(d)).apply_game(&g).unwrap())))
}

fn all_forms(d: u32) -> Vec<chipsplit::pascal::PascalForm> {
    let mut v = psi_basis(d);
    v.extend(psi_bar_basis(d));
    v.extend(phi_basis(d));
    v
}

fn leibniz(m: &[Vec<i64>]) -> i64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.len();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
            let prod: i64 = (0..n).map(|r| m[r][p[r]]).product();
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

/// Largest square submatrix with nonzero determinant.
fn brute_rank(m: &[Vec<i64>], rows: usize, cols: usize) -> usize {
    let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|b| s >> b & 1 == 1).collect()).collect()
    };
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                if leibniz(&sub) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

fn fundamental_pool() -> &'static Vec<ParametricModel> {
    static POOL: OnceLock<Vec<ParametricModel>> = OnceLock::new();
    POOL.get_or_init(|| {
        let r = enumerate_fundamental_with(5, 4, &EnumerationOptions::default()).unwrap();
        r.outcomes.iter().map(|w| integral_outcome_to_model(w).unwrap()).collect()
    })
}

fn arb_composite() -> impl Strategy<Value = ParametricModel> {
    let n = fundamental_pool().len();
    prop::collection::vec((0..n, 1i64..=9), 1..=3).prop_map(|picks| {
        let pool = fundamental_pool();
        let mut it = picks.into_iter();
        let (first, _) = it.next().unwrap();
        let mut m = pool[first].clone();
        for (k, num) in it {
            m = composite(&pool[k], &m, &BigRational::new(BigInt::from(num), BigInt::from(10))).unwrap();
        }
        m
    })
}

pub fn games_are_reversible_and_commute() -> Result<(), String> {
    check((2u32..=7).prop_flat_map(|d| (arb_config(d), arb_game(d), arb_game(d))), |(w, g1, g2)| {
        let there = w.apply_game(&g1).unwrap();
        prop_assert_eq!(there.apply_game(&g1.neg()).unwrap(), w.clone());
        let a = there.apply_game(&g2).unwrap();
        let b = w.apply_game(&g2).unwrap().apply_game(&g1).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, w.apply_game(&g1.merge(&g2)).unwrap());
        Ok(())
    })
}

pub fn pascal_values_are_move_invariant() -> Result<(), String> {
    check((2u32..=7, arb_config(7), arb_game(7)), |(d, w, g)| {
        let w = w.restrict(d);
        let g = {
            let mut h = Game::new();
            for (c, v) in g.iter() {
                if c.deg() < d {
                    h.add_at(*c, v.clone());
                }
            }
            h
        };
        let moved = w.apply_game(&g).unwrap();
        for f in all_forms(d) {
            prop_assert_eq!(f.evaluate(&w).unwrap(), f.evaluate(&moved).unwrap(), "{:?}", f.kind());
        }
        Ok(())
    })
}

pub fn outcome_tests_agree() -> Result<(), String> {
    check((arb_outcome(), arb_config(7), any::<bool>()), |((d, w), noise, perturb)| {
        let w = if perturb { w.add(&noise.restrict(d)) } else { w };
        let by_phi = phi_basis(d).iter().all(|f| f.evaluate(&w).unwrap().is_zero());
        let by_all = all_forms(d).iter().all(|f| f.evaluate(&w).unwrap().is_zero());
        let witness = outcome_witness(&w);
        prop_assert_eq!(by_phi, by_all);
        prop_assert_eq!(by_phi, witness.is_some());
        prop_assert_eq!(by_phi, is_outcome(&w, d).unwrap());
        if let Some(g) = witness {
            prop_assert_eq!(ChipConfiguration::zero().apply_game(&g).unwrap(), w);
        }
        Ok(())
    })
}

pub fn outcomes_are_closed_under_s3() -> Result<(), String> {
    check(arb_outcome(), |(d, w)| {
        for sigma in Perm::ALL {
            let image = w.act(sigma, d).unwrap();
            prop_assert!(is_outcome(&image, d).unwrap(), "{}", sigma);
            prop_assert_eq!(image.support().len(), w.support().len());
        }
        Ok(())
    })
}

pub fn model_outcome_round_trip() -> Result<(), String> {
    check(arb_composite(), |m| {
        let w = model_to_outcome(&m).unwrap();
        prop_assert!(is_outcome(&w, m.degree()).unwrap());
        prop_assert!(w.is_valid());
        prop_assert_eq!(&outcome_to_model(&w).unwrap(), &m);
        let scaled = w.scale(&BigRational::new(BigInt::from(7), BigInt::from(3)));
        prop_assert_eq!(model_to_outcome(&outcome_to_model(&scaled).unwrap()).unwrap(), w);
        Ok(())
    })
}

pub fn decompose_then_fold_is_exact() -> Result<(), String> {
    check(arb_composite(), |m| {
        let dec = decompose(&m).unwrap();
        prop_assert_eq!(dec.fold().unwrap(), m.clone());
        prop_assert_eq!(dec.mus.len() + 1, dec.leaves.len());
        let mut union = std::collections::BTreeSet::new();
        for leaf in &dec.leaves {
            prop_assert!(is_fundamental(&leaf.exponents(), leaf.degree()).unwrap().fundamental);
            union.extend(leaf.exponents());
        }
        prop_assert_eq!(union, m.exponents());
        for mu in &dec.mus {
            prop_assert!(*mu > BigRational::zero() && *mu < BigRational::one());
        }
        Ok(())
    })
}

pub fn determinant_matches_leibniz() -> Result<(), String> {
    check((1usize..=4, prop::collection::vec(-6i64..=6, 16)), |(n, entries)| {
        let rows: Vec<Vec<i64>> = (0..n).map(|r| entries[r * 4..r * 4 + n].to_vec()).collect();
        let det = ExactMatrix::from_i64(&rows).determinant().unwrap();
        prop_assert_eq!(det, BigRational::from(BigInt::from(leibniz(&rows))));
        Ok(())
    })
}

pub fn kernel_matches_rank_oracle() -> Result<(), String> {
    check((1usize..=4, 1usize..=4, prop::collection::vec(-3i64..=3, 16)), |(r, c, entries)| {
        let rows: Vec<Vec<i64>> = (0..r).map(|i| entries[i * 4..i * 4 + c].to_vec()).collect();
        let m = ExactMatrix::from_i64(&rows);
        let rank = brute_rank(&rows, r, c);
        prop_assert_eq!(m.rank(), rank);
        let basis = m.kernel_basis();
        prop_assert_eq!(basis.len(), c - rank);
        for v in basis {
            let v: Vec<BigRational> = v.into_iter().map(BigRational::from).collect();
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
        }
        Ok(())
    })
}

type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("game reversibility and order independence", games_are_reversible_and_commute),
    ("Pascal values invariant under moves", pascal_values_are_move_invariant),
    ("outcome tests agree with retraction", outcome_tests_agree),
    ("outcomes closed under S3", outcomes_are_closed_under_s3),
    ("model and outcome round trip", model_outcome_round_trip),
    ("decompose then fold is exact", decompose_then_fold_is_exact),
    ("determinant matches Leibniz", determinant_matches_leibniz),
    ("kernel matches rank oracle", kernel_matches_rank_oracle),
];
