//! Fitness sharing in objective space with a sharing distance re-estimated
//! every generation from the extent of the current front.

use crate::error::{Error, Result};

/// Lower bound on the sharing distance when the front collapses to a point.
pub const SIGMA_FLOOR: f64 = 1e-9;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Triangular kernel `1 - (dist/sigma)^alpha` inside `sigma`, zero outside.
pub fn sharing_value(dist: f64, sigma: f64, alpha: f64) -> f64 {
    if dist <= 0.0 {
        return 1.0;
    }
    if dist < sigma {
        1.0 - (dist / sigma).powf(alpha)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameter {
    pub d_min: f64,
    pub d_max: f64,
    pub d: f64,
}

/// Shortest and longest diameter guesses for the curve spanned by the two
/// farthest points: the chord, and the right-angle path through the
/// component-wise minimum corner. `d` is their mean.
pub fn estimate_diameter<P: AsRef<[f64]>>(front: &[P]) -> Result<Diameter> {
    if front.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut best = (0, 0, 0.0);
    for i in 0..front.len() {
        for j in (i + 1)..front.len() {
            let dist = euclidean(front[i].as_ref(), front[j].as_ref());
            if dist > best.2 {
                best = (i, j, dist);
            }
        }
    }
    let (x, y, d_min) = best;
    let fx = front[x].as_ref();
    let fy = front[y].as_ref();
    let corner: Vec<f64> = fx.iter().zip(fy).map(|(a, b)| a.min(*b)).collect();
    let d_max = euclidean(fx, &corner) + euclidean(&corner, fy);
    Ok(Diameter {
        d_min,
        d_max,
        d: 0.5 * (d_min + d_max),
    })
}

/// `N^(1/(1-m)) * d / 2`, floored at [`SIGMA_FLOOR`].
pub fn dynamic_sigma(d: f64, n: usize, m: usize) -> f64 {
    let exponent = 1.0 / (1.0 - m as f64);
    let sigma = (n as f64).powf(exponent) * d / 2.0;
    if sigma < SIGMA_FLOOR {
        SIGMA_FLOOR
    } else {
        sigma
    }
}

/// Sum of kernel values from every point (itself included) to each point.
pub fn niche_counts<P: AsRef<[f64]>>(points: &[P], sigma: f64, alpha: f64) -> Vec<f64> {
    let n = points.len();
    let mut counts = vec![1.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let sh = sharing_value(
                euclidean(points[i].as_ref(), points[j].as_ref()),
                sigma,
                alpha,
            );
            counts[i] += sh;
            counts[j] += sh;
        }
    }
    counts
}

/// Rescale each objective to `[0, 1]` over the given points. Constant
/// objectives map to 0.
pub fn normalize<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<f64>> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let m = first.as_ref().len();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for p in points {
        for (i, &v) in p.as_ref().iter().enumerate() {
            lo[i] = lo[i].min(v);
            hi[i] = hi[i].max(v);
        }
    }
    points
        .iter()
        .map(|p| {
            p.as_ref()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let span = hi[i] - lo[i];
                    if span > 0.0 {
                        (v - lo[i]) / span
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SharingMode {
    /// Sharing distance re-estimated each generation.
    #[default]
    Dynamic,
    Fixed(f64),
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharingState {
    pub d_min: f64,
    pub d_max: f64,
    pub d: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub niche_counts: Vec<f64>,
}

impl SharingState {
    /// Estimates the diameter on `front`, derives the sharing distance for a
    /// population of `pop_size` and computes niche counts over `points`.
    pub fn compute<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
        front: &[P],
        points: &[Q],
        pop_size: usize,
        mode: SharingMode,
        alpha: f64,
    ) -> Result<Self> {
        let m = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or(Error::EmptyPopulation)?;
        let diam = estimate_diameter(front)?;
        let sigma = match mode {
            SharingMode::Dynamic => dynamic_sigma(diam.d, pop_size, m),
            SharingMode::Fixed(s) => s,
            SharingMode::None => 0.0,
        };
        let counts = match mode {
            SharingMode::None => vec![1.0; points.len()],
            _ => niche_counts(points, sigma, alpha),
        };
        Ok(Self {
            d_min: diam.d_min,
            d_max: diam.d_max,
            d: diam.d,
            sigma,
            alpha,
            niche_counts: counts,
        })
    }
}
