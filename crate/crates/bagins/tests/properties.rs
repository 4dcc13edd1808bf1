//! Property tests for the model invariants.

mod common;

use bagins::consistency::RandomIndexTable;
use bagins::eval::{distance_metrics, kendall_tau_b};
use bagins::individualize::{individualize_scale, IndividualizationConfig};
use bagins::io::{parse_pcm, serialize_pcm, PcmFormat};
use bagins::pcm::{
    default_item_names, realize, validate_pcm, Direction, Grade, Judgment, LinguisticPcm,
    NumericPcm,
};
use bagins::priority::{eigen_priority_default, geomean_priority, PriorityVector};
use bagins::scale::ScaleAssignment;
use bagins::study::discretize;
use proptest::prelude::*;

fn arb_scale() -> impl Strategy<Value = ScaleAssignment> {
    proptest::collection::vec(0.02f64..0.9, 8).prop_map(|gaps| {
        let mut values = [1.0; 9];
        for (k, gap) in gaps.into_iter().enumerate() {
            values[k + 1] = values[k] + gap;
        }
        ScaleAssignment::with_bounds(values, 0.01, 9.0).expect("gap construction is feasible")
    })
}

fn arb_pcm(max_n: usize) -> impl Strategy<Value = LinguisticPcm> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec((1u8..=9, proptest::bool::ANY), pairs).prop_map(move |draws| {
            let mut judgments = Vec::with_capacity(pairs);
            let mut idx = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let (grade, flip) = draws[idx];
                    idx += 1;
                    let direction = if flip {
                        Direction::JOverI
                    } else {
                        Direction::IOverJ
                    };
                    judgments
                        .push(Judgment::new(i, j, Grade::new(grade).unwrap(), direction).unwrap());
                }
            }
            LinguisticPcm::new("prop", n, default_item_names(n), judgments)
        })
    })
}

fn arb_weights(max_n: usize) -> impl Strategy<Value = PriorityVector> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0.01f64..1.0, n)
            .prop_map(|raw| PriorityVector::normalized(&raw).unwrap())
    })
}

fn arb_weights_with_permutation() -> impl Strategy<Value = (PriorityVector, Vec<usize>)> {
    (2..=6usize).prop_flat_map(|n| {
        let weights = proptest::collection::vec(0.01f64..1.0, n)
            .prop_map(|raw| PriorityVector::normalized(&raw).unwrap());
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (weights, perm)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realize_always_yields_valid_reciprocal_matrix(pcm in arb_pcm(6), scale in arb_scale()) {
        let m = realize(&pcm, &scale).unwrap();
        // NumericPcm::new validates; re-wrap to exercise the invariants explicitly.
        prop_assert!(NumericPcm::new(m.n(), m.entries().to_vec()).is_ok());
    }

    #[test]
    fn realize_is_permutation_equivariant(pcm in arb_pcm(5), scale in arb_scale(), seed in any::<u64>()) {
        let n = pcm.n;
        let mut perm: Vec<usize> = (0..n).collect();
        // Cheap deterministic shuffle from the seed.
        for i in (1..n).rev() {
            perm.swap(i, (seed as usize).wrapping_mul(31).wrapping_add(i) % (i + 1));
        }
        let m = realize(&pcm, &scale).unwrap();

        // Relabel the PCM by perm: alternative perm[i] becomes i.
        let mut inverse = vec![0; n];
        for (new, old) in perm.iter().enumerate() {
            inverse[*old] = new;
        }
        let relabeled: Vec<Judgment> = pcm
            .judgments
            .iter()
            .map(|j| {
                let (a, b) = (inverse[j.i()], inverse[j.j()]);
                let (i2, j2, dir) = if a < b {
                    (a, b, j.direction())
                } else {
                    (b, a, j.direction().flipped())
                };
                Judgment::new(i2, j2, j.grade(), dir).unwrap()
            })
            .collect();
        let relabeled_pcm = LinguisticPcm::new("perm", n, default_item_names(n), relabeled);
        let m2 = realize(&relabeled_pcm, &scale).unwrap();

        for i in 0..n {
            for j in 0..n {
                prop_assert!((m2.get(inverse[i], inverse[j]) - m.get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn serialize_parse_round_trip(pcm in arb_pcm(6)) {
        let json = serialize_pcm(&pcm, PcmFormat::Json);
        prop_assert_eq!(&parse_pcm(&json, PcmFormat::Json).unwrap(), &pcm);
        // CSV carries no item names; items here are the defaults it reconstructs.
        let csv = serialize_pcm(&pcm, PcmFormat::Csv);
        prop_assert_eq!(&parse_pcm(&csv, PcmFormat::Csv).unwrap(), &pcm);
    }

    #[test]
    fn lambda_max_is_at_least_n(pcm in arb_pcm(6), scale in arb_scale()) {
        let m = realize(&pcm, &scale).unwrap();
        let solution = eigen_priority_default(&m).unwrap();
        prop_assert!(solution.lambda_max >= m.n() as f64 - 1e-9);
    }

    #[test]
    fn eigen_and_geomean_agree_on_consistent_matrices(w in arb_weights(9)) {
        let m = NumericPcm::from_weights(w.weights()).unwrap();
        let eigen = eigen_priority_default(&m).unwrap();
        let gm = geomean_priority(&m);
        for (a, b) in eigen.priorities.weights().iter().zip(gm.weights()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!((eigen.lambda_max - m.n() as f64).abs() < 1e-9);
    }

    #[test]
    fn priorities_are_scale_free(w in arb_weights(7), factor in 0.1f64..100.0) {
        // Rescaling raw weights before normalization cannot change the result.
        let scaled: Vec<f64> = w.weights().iter().map(|x| x * factor).collect();
        let m = NumericPcm::from_weights(w.weights()).unwrap();
        let m2 = NumericPcm::from_weights(&scaled).unwrap();
        let p1 = eigen_priority_default(&m).unwrap().priorities;
        let p2 = eigen_priority_default(&m2).unwrap().priorities;
        for ((a, b), t) in p1.weights().iter().zip(p2.weights()).zip(w.weights()) {
            prop_assert!((a - b).abs() < 1e-9);
            prop_assert!((a - t).abs() < 1e-9);
        }
    }

    #[test]
    fn priorities_are_permutation_equivariant((w, perm) in arb_weights_with_permutation()) {
        let m = NumericPcm::from_weights(w.weights()).unwrap();
        let permuted = m.permuted(&perm).unwrap();
        let base = eigen_priority_default(&m).unwrap().priorities;
        let moved = eigen_priority_default(&permuted).unwrap().priorities;
        for (idx, p) in perm.iter().enumerate() {
            prop_assert!((moved.weights()[idx] - base.weights()[*p]).abs() < 1e-9);
        }
    }

    #[test]
    fn individualization_never_worsens(pcm in arb_pcm(5)) {
        let cfg = IndividualizationConfig::default();
        let result = individualize_scale(&pcm, &cfg, RandomIndexTable::builtin()).unwrap();
        prop_assert!(result.improvement >= 0.0);
        prop_assert!(result.objective_value <= result.baseline_objective);
        let values = result.scale.values();
        prop_assert_eq!(values[0], 1.0);
        for pair in values.windows(2) {
            prop_assert!(pair[1] - pair[0] >= cfg.eps_gap - 1e-12);
        }
        prop_assert!(values[8] <= cfg.v_max + 1e-12);
    }

    #[test]
    fn discretization_of_reversed_weights_flips_directions(w in arb_weights(7)) {
        let scale = ScaleAssignment::saaty();
        let pcm = discretize(&w, &scale);
        prop_assert!(validate_pcm(&pcm).ok());
        let reversed = PriorityVector::new(w.weights().iter().rev().copied().collect()).unwrap();
        let flipped = discretize(&reversed, &scale);
        let n = w.len();
        for judgment in &pcm.judgments {
            let mirrored = flipped
                .judgments
                .iter()
                .find(|m| m.i() == n - 1 - judgment.j() && m.j() == n - 1 - judgment.i())
                .unwrap();
            prop_assert_eq!(mirrored.grade(), judgment.grade());
            if judgment.grade() != Grade::INDIFFERENCE {
                prop_assert_eq!(mirrored.direction(), judgment.direction().flipped());
            }
        }
    }

    #[test]
    fn distance_metrics_identity_and_symmetry(a in arb_weights(9), b in arb_weights(9)) {
        let self_metrics = distance_metrics(&a, &a).unwrap();
        prop_assert_eq!(self_metrics.euclidean, 0.0);
        prop_assert_eq!(self_metrics.mae, 0.0);
        prop_assert_eq!(self_metrics.kendall_tau, 1.0);

        if a.len() == b.len() {
            let ab = distance_metrics(&a, &b).unwrap();
            let ba = distance_metrics(&b, &a).unwrap();
            prop_assert_eq!(ab.euclidean, ba.euclidean);
            prop_assert_eq!(ab.mae, ba.mae);
            prop_assert_eq!(ab.kendall_tau, ba.kendall_tau);
        }
    }

    #[test]
    fn tau_b_bounds(a in proptest::collection::vec(0.0f64..1.0, 2..12), b in proptest::collection::vec(0.0f64..1.0, 2..12)) {
        let n = a.len().min(b.len());
        let tau = kendall_tau_b(&a[..n], &b[..n]);
        prop_assert!((-1.0..=1.0).contains(&tau));
    }
}
