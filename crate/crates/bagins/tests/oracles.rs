//! Cross-checks of the iterative solvers against independent closed-form
//! and brute-force oracles.

mod common;

use bagins::consistency::{consistency, RandomIndexTable};
use bagins::individualize::{individualize_scale, oracle_grid_search, IndividualizationConfig};
use bagins::pcm::NumericPcm;
use bagins::priority::eigen_priority_default;
use rand::Rng;

use common::{lambda_max_3x3, random_pcm, random_reciprocal_matrix, rng};

#[test]
fn worked_3x3_example_matches_closed_form() {
    // a01 = 2, a02 = 4, a12 = 3; hand arithmetic gives lambda ~ 3.018294.
    let entries = vec![1.0, 2.0, 4.0, 0.5, 1.0, 3.0, 0.25, 1.0 / 3.0, 1.0];
    let m = NumericPcm::new(3, entries).unwrap();
    let oracle = lambda_max_3x3(&m);
    assert!((oracle - 3.018294).abs() < 1e-4);

    let solution = eigen_priority_default(&m).unwrap();
    assert!((solution.lambda_max - oracle).abs() < 1e-8);

    let report = consistency(&m, RandomIndexTable::builtin()).unwrap();
    assert!((report.ci - (oracle - 3.0) / 2.0).abs() < 1e-8);
}

#[test]
fn power_iteration_matches_cubic_oracle_on_random_matrices() {
    let mut rng = rng(0x3353);
    for _ in 0..100 {
        let m = random_reciprocal_matrix(3, &mut rng);
        let solution = eigen_priority_default(&m).unwrap();
        let oracle = lambda_max_3x3(&m);
        assert!(
            (solution.lambda_max - oracle).abs() < 1e-8,
            "power {} vs cubic {}",
            solution.lambda_max,
            oracle
        );
    }
}

#[test]
fn heuristic_objective_tracks_grid_oracle() {
    let cfg = IndividualizationConfig::default();
    let ri = RandomIndexTable::builtin();
    let mut rng = rng(0xB1D);
    for case in 0..15 {
        let n = 3 + (case % 2);
        let pool: Vec<u8> = {
            let mut pool = Vec::new();
            while pool.len() < 3 {
                let g: u8 = rng.random_range(2..=9);
                if !pool.contains(&g) {
                    pool.push(g);
                }
            }
            pool.push(1);
            pool
        };
        let pcm = random_pcm(&format!("case-{case}"), n, &pool, &mut rng);
        let heuristic = individualize_scale(&pcm, &cfg, ri).unwrap();
        let (_, oracle_value) = oracle_grid_search(&pcm, 0.25, &cfg, ri).unwrap();
        let slack = (0.05 * oracle_value).max(1e-3);
        assert!(
            heuristic.objective_value <= oracle_value + slack,
            "case {case}: heuristic {} vs oracle {}",
            heuristic.objective_value,
            oracle_value
        );
    }
}
