//! Switching preserved strategy: elitist truncation of the combined pool.

use log::warn;
use rand::Rng;

use crate::sharing::{euclidean, sharing_value};
use crate::types::Individual;

/// Truncates `pool` to exactly `n` members.
///
/// Ranks and niche counts must already be set. When the rank-1 members fit,
/// all of them survive and the rest of the budget goes to the best-ranked
/// dominated members (ties by niche count). Otherwise only rank-1 members are
/// kept and the most crowded one is dropped repeatedly, recomputing niche
/// counts among the survivors each time. Equal counts go to the member
/// nearest to another survivor, then at random.
/// `points` are the sharing-space coordinates of the pool members.
pub fn sps_truncate<R: Rng + ?Sized>(
    pool: Vec<Individual>,
    n: usize,
    points: &[Vec<f64>],
    sigma: f64,
    alpha: f64,
    rng: &mut R,
) -> Vec<Individual> {
    debug_assert_eq!(pool.len(), points.len());
    let front: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].rank == 1).collect();

    let keep: Vec<usize> = if front.len() <= n {
        let mut rest: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].rank != 1).collect();
        rest.sort_by(|&a, &b| {
            pool[a]
                .rank
                .cmp(&pool[b].rank)
                .then(pool[a].niche_count.total_cmp(&pool[b].niche_count))
                .then(a.cmp(&b))
        });
        let mut keep = front;
        keep.extend(rest.into_iter().take(n - keep.len().min(n)));
        keep.sort_unstable();
        keep
    } else {
        prune_crowded(&front, n, points, sigma, alpha, rng)
    };

    let mut pool: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    let mut out: Vec<Individual> = keep.iter().map(|&i| pool[i].take().unwrap()).collect();
    if out.len() < n {
        warn!(
            "pool of {} is smaller than the population size {n}; padding with clones",
            out.len()
        );
        if out.is_empty() {
            return out;
        }
        while out.len() < n {
            let c = out[rng.random_range(0..out.len())].clone();
            out.push(c);
        }
    }
    out
}

fn prune_crowded<R: Rng + ?Sized>(
    front: &[usize],
    n: usize,
    points: &[Vec<f64>],
    sigma: f64,
    alpha: f64,
    rng: &mut R,
) -> Vec<usize> {
    let k = front.len();
    let mut dist = vec![0.0; k * k];
    let mut counts = vec![1.0; k];
    for a in 0..k {
        for b in (a + 1)..k {
            let d = euclidean(&points[front[a]], &points[front[b]]);
            dist[a * k + b] = d;
            dist[b * k + a] = d;
            let sh = sharing_value(d, sigma, alpha);
            counts[a] += sh;
            counts[b] += sh;
        }
    }
    let mut alive = vec![true; k];
    let nearest = |a: usize, alive: &[bool]| {
        (0..k)
            .filter(|&b| b != a && alive[b])
            .map(|b| dist[a * k + b])
            .fold(f64::INFINITY, f64::min)
    };
    let mut remaining = k;
    while remaining > n {
        let top = (0..k)
            .filter(|&a| alive[a])
            .map(|a| counts[a])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut tied: Vec<usize> = (0..k).filter(|&a| alive[a] && counts[a] == top).collect();
        if tied.len() > 1 {
            let gaps: Vec<f64> = tied.iter().map(|&a| nearest(a, &alive)).collect();
            let closest = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
            tied = tied
                .into_iter()
                .zip(gaps)
                .filter(|&(_, g)| g == closest)
                .map(|(a, _)| a)
                .collect();
        }
        let w = tied[rng.random_range(0..tied.len())];
        alive[w] = false;
        remaining -= 1;
        for a in 0..k {
            if alive[a] {
                counts[a] -= sharing_value(dist[a * k + w], sigma, alpha);
            }
        }
    }
    front
        .iter()
        .zip(&alive)
        .filter(|(_, &on)| on)
        .map(|(&i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Chromosome;
    use crate::sharing::niche_counts;
    use crate::types::{DecisionVector, ObjectiveVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ind(tag: u16, rank: usize, niche: f64) -> Individual {
        let mut i = Individual::new(
            Chromosome::from_codes(&[tag]).unwrap(),
            DecisionVector::new(vec![tag as f64]),
            ObjectiveVector::new(vec![0.0, 0.0]).unwrap(),
        );
        i.rank = rank;
        i.niche_count = niche;
        i
    }

    fn tags(v: &[Individual]) -> Vec<u16> {
        v.iter()
            .map(|i| i.chromosome.codes().next().unwrap())
            .collect()
    }

    #[test]
    fn few_nondominated_fill_by_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pool = vec![
            ind(0, 3, 1.0),
            ind(1, 1, 1.0),
            ind(2, 2, 2.0),
            ind(3, 1, 1.0),
            ind(4, 2, 1.0),
            ind(5, 4, 1.0),
        ];
        let pts = vec![vec![0.0, 0.0]; 6];
        let out = sps_truncate(pool, 4, &pts, 0.1, 1.0, &mut rng);
        assert_eq!(tags(&out), vec![1, 2, 3, 4]);
    }

    #[test]
    fn many_nondominated_drop_most_crowded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pts = vec![
            vec![0.0, 1.0],
            vec![0.01, 0.99],
            vec![0.5, 0.5],
            vec![0.51, 0.5],
            vec![1.0, 0.0],
            vec![0.3, 0.7],
        ];
        let counts = niche_counts(&pts, 0.1, 1.0);
        let pool: Vec<Individual> = (0..6).map(|i| ind(i as u16, 1, counts[i])).collect();
        let out = sps_truncate(pool, 4, &pts, 0.1, 1.0, &mut rng);
        let t = tags(&out);
        assert_eq!(t.len(), 4);
        assert!(t.contains(&4) && t.contains(&5));
        assert_eq!(t.iter().filter(|&&x| x < 2).count(), 1);
        assert_eq!(t.iter().filter(|&&x| x == 2 || x == 3).count(), 1);
    }

    #[test]
    fn exact_fit_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pool: Vec<Individual> = (0..4).map(|i| ind(i, 1, 1.0)).collect();
        let pts: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64, 0.0]).collect();
        let out = sps_truncate(pool.clone(), 4, &pts, 0.1, 1.0, &mut rng);
        assert_eq!(out, pool);
    }

    #[test]
    fn small_pool_is_padded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pool: Vec<Individual> = (0..2).map(|i| ind(i, 1, 1.0)).collect();
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let out = sps_truncate(pool, 5, &pts, 0.1, 1.0, &mut rng);
        assert_eq!(out.len(), 5);
    }
}
