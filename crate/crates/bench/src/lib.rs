//! Input generators shared by the benchmarks in `benches/`.

use moea_core::ObjectiveVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` objective vectors with `m` components uniform in `[0, 1)`.
pub fn random_objectives(n: usize, m: usize, seed: u64) -> Vec<ObjectiveVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            ObjectiveVector::new((0..m).map(|_| rng.random::<f64>()).collect()).expect("finite")
        })
        .collect()
}

/// `n` points on the quarter circle, a convex stand-in for a trade-off.
pub fn arc_front(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::FRAC_PI_2 * i as f64 / (n.max(2) - 1) as f64;
            vec![1.0 - t.cos(), 1.0 - t.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        assert_eq!(random_objectives(5, 3, 1), random_objectives(5, 3, 1));
        assert_ne!(random_objectives(5, 3, 1), random_objectives(5, 3, 2));
        let f = arc_front(11);
        assert_eq!(f[0], vec![0.0, 1.0]);
        assert!((f[10][1]).abs() < 1e-12);
    }
}
