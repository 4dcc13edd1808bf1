//! Shared helpers for integration tests.
#![allow(dead_code)] // each test target uses a different subset

use bagins::pcm::{default_item_names, Direction, Grade, Judgment, LinguisticPcm, NumericPcm};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Closed-form principal eigenvalue of a 3x3 reciprocal matrix, independent
/// of power iteration.
///
/// With a = a01, b = a02, c = a12 the characteristic polynomial reduces to
/// lambda^3 - 3 lambda^2 - d = 0 where d = ac/b + b/(ac) - 2 >= 0, and the
/// largest root is 1 + 2 cosh(acosh(1 + d/2) / 3).
pub fn lambda_max_3x3(m: &NumericPcm) -> f64 {
    assert_eq!(m.n(), 3);
    let a = m.get(0, 1);
    let b = m.get(0, 2);
    let c = m.get(1, 2);
    let t = a * c / b;
    let d = t + 1.0 / t - 2.0;
    1.0 + 2.0 * ((1.0 + d / 2.0).acosh() / 3.0).cosh()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random full PCM: every pair judged, grades drawn from `grade_pool`.
pub fn random_pcm(id: &str, n: usize, grade_pool: &[u8], rng: &mut impl Rng) -> LinguisticPcm {
    let mut judgments = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let grade = grade_pool[rng.random_range(0..grade_pool.len())];
            let direction = if rng.random::<bool>() {
                Direction::IOverJ
            } else {
                Direction::JOverI
            };
            judgments.push(Judgment::new(i, j, Grade::new(grade).unwrap(), direction).unwrap());
        }
    }
    LinguisticPcm::new(id, n, default_item_names(n), judgments)
}

/// A random reciprocal matrix with upper-triangle entries from the 17-value
/// grade/reciprocal set.
pub fn random_reciprocal_matrix(n: usize, rng: &mut impl Rng) -> NumericPcm {
    const CHOICES: [f64; 17] = [
        1.0,
        2.0,
        3.0,
        4.0,
        5.0,
        6.0,
        7.0,
        8.0,
        9.0,
        1.0 / 2.0,
        1.0 / 3.0,
        1.0 / 4.0,
        1.0 / 5.0,
        1.0 / 6.0,
        1.0 / 7.0,
        1.0 / 8.0,
        1.0 / 9.0,
    ];
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let a = CHOICES[rng.random_range(0..CHOICES.len())];
            entries[i * n + j] = a;
            entries[j * n + i] = 1.0 / a;
        }
    }
    NumericPcm::new(n, entries).unwrap()
}
