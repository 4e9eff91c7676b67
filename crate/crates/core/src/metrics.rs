//! Front quality measures: covered area and distribution uniformity.

use log::warn;

use crate::error::{check_dims, Error, Result};
use crate::sharing::{dynamic_sigma, estimate_diameter, niche_counts};

/// What to do with points lying beyond the reference point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BeyondReference {
    #[default]
    Reject,
    /// Drop them from the sweep with a warning.
    Exclude,
}

/// Area dominated by `front` inside the box bounded by `reference`.
pub fn ssc<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Result<f64> {
    ssc_with(front, reference, BeyondReference::Reject)
}

pub fn ssc_with<P: AsRef<[f64]>>(
    front: &[P],
    reference: &[f64],
    beyond: BeyondReference,
) -> Result<f64> {
    check_dims(2, reference.len())?;
    let mut pts = Vec::with_capacity(front.len());
    let mut dropped = 0;
    for (index, p) in front.iter().enumerate() {
        let p = p.as_ref();
        check_dims(2, p.len())?;
        if p[0] > reference[0] || p[1] > reference[1] {
            match beyond {
                BeyondReference::Reject => return Err(Error::BeyondReference { index }),
                BeyondReference::Exclude => {
                    dropped += 1;
                    continue;
                }
            }
        }
        pts.push((p[0], p[1]));
    }
    if dropped > 0 {
        warn!("{dropped} point(s) beyond the reference point excluded from the covered area");
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(staircase_area(&pts, reference))
}

/// `pts` sorted by the first objective.
fn staircase_area(pts: &[(f64, f64)], reference: &[f64]) -> f64 {
    let mut area = 0.0;
    let mut best = reference[1];
    let mut stairs: Vec<(f64, f64)> = Vec::new();
    for &(x, y) in pts {
        if y < best {
            stairs.push((x, y));
            best = y;
        }
    }
    for (i, &(x, y)) in stairs.iter().enumerate() {
        let right = stairs.get(i + 1).map_or(reference[0], |s| s.0);
        area += (right - x) * (reference[1] - y);
    }
    area
}

/// Standard deviation form used for the niche-count spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deviation {
    #[default]
    Population,
    Sample,
}

pub fn std_dev(values: &[f64], form: Deviation) -> f64 {
    let n = values.len();
    if n < 2 || values.iter().all(|&v| v == values[0]) {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match form {
        Deviation::Population => n as f64,
        Deviation::Sample => (n - 1) as f64,
    };
    (ss / denom).sqrt()
}

/// `1 / (1 + S_nc)` where `S_nc` is the spread of niche counts over `front`.
pub fn ud<P: AsRef<[f64]>>(front: &[P], sigma: f64, alpha: f64) -> Result<f64> {
    ud_with(front, sigma, alpha, Deviation::Population)
}

pub fn ud_with<P: AsRef<[f64]>>(
    front: &[P],
    sigma: f64,
    alpha: f64,
    form: Deviation,
) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    Ok(ud_from_counts(&niche_counts(front, sigma, alpha), form))
}

pub fn ud_from_counts(counts: &[f64], form: Deviation) -> f64 {
    1.0 / (1.0 + std_dev(counts, form))
}

/// The sharing distance the engine would derive for `front` as a population
/// of its own size.
pub fn front_sigma<P: AsRef<[f64]>>(front: &[P]) -> Result<f64> {
    let m = front.first().ok_or(Error::EmptyPopulation)?.as_ref().len();
    let d = estimate_diameter(front)?;
    Ok(dynamic_sigma(d.d, front.len(), m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub ssc: f64,
    pub ud: f64,
    pub neval: u64,
    pub sigma: f64,
    pub reference_point: Vec<f64>,
}

impl MetricReport {
    /// Scores `front` with the UD sharing distance taken from the front itself
    /// unless `sigma` is given.
    pub fn score<P: AsRef<[f64]>>(
        front: &[P],
        reference: &[f64],
        neval: u64,
        sigma: Option<f64>,
        beyond: BeyondReference,
    ) -> Result<Self> {
        let sigma = match sigma {
            Some(s) => s,
            None => front_sigma(front)?,
        };
        Ok(Self {
            ssc: ssc_with(front, reference, beyond)?,
            ud: ud(front, sigma, 1.0)?,
            neval,
            sigma,
            reference_point: reference.to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn ssc_examples() {
        assert_eq!(ssc(&[[0.0, 0.0]], &[1.0, 1.0]).unwrap(), 1.0);
        let f = [[0.2, 0.8], [0.5, 0.5], [0.8, 0.2]];
        assert_abs_diff_eq!(ssc(&f, &[1.0, 1.0]).unwrap(), 0.37, epsilon = 1e-12);
        let g = [[0.2, 0.8], [0.5, 0.5], [0.8, 0.2], [0.6, 0.6]];
        assert_abs_diff_eq!(ssc(&g, &[1.0, 1.0]).unwrap(), 0.37, epsilon = 1e-12);
        assert_eq!(ssc::<[f64; 2]>(&[], &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn ssc_beyond_reference() {
        let f = [[0.5, 0.5], [1.5, 0.0]];
        assert!(matches!(
            ssc(&f, &[1.0, 1.0]),
            Err(Error::BeyondReference { index: 1 })
        ));
        let a = ssc_with(&f, &[1.0, 1.0], BeyondReference::Exclude).unwrap();
        assert_abs_diff_eq!(a, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn ud_examples() {
        let far = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(ud(&far, 0.1, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            std_dev(&[2.0, 2.0, 1.0], Deviation::Population),
            0.471405,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            ud_from_counts(&[2.0, 2.0, 1.0], Deviation::Population),
            1.0 / 1.471405,
            epsilon = 1e-6
        );
        assert_eq!(ud(&[[0.4, 0.4]], 0.1, 1.0).unwrap(), 1.0);
        assert!(ud::<[f64; 2]>(&[], 0.1, 1.0).is_err());
        assert!(std_dev(&[2.0, 2.0, 1.0], Deviation::Sample) > 0.471405);
    }

    #[test]
    fn report_records_sigma() {
        let f = [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]];
        let r = MetricReport::score(&f, &[1.0, 1.0], 42, None, BeyondReference::Reject).unwrap();
        assert_eq!(r.neval, 42);
        assert_abs_diff_eq!(
            r.sigma,
            dynamic_sigma(0.5 * (2f64.sqrt() + 2.0), 3, 2),
            epsilon = 1e-15
        );
        assert!(r.ud > 0.0 && r.ud <= 1.0);
    }

    fn front() -> impl Strategy<Value = Vec<[f64; 2]>> {
        prop::collection::vec((0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| [a, b]), 0..20)
    }

    proptest! {
        #[test]
        fn ssc_monotone(f in front(), p in (0.0..1.0f64, 0.0..1.0f64)) {
            let before = ssc(&f, &[1.0, 1.0]).unwrap();
            let mut g = f.clone();
            g.push([p.0, p.1]);
            let after = ssc(&g, &[1.0, 1.0]).unwrap();
            prop_assert!(after >= before - 1e-12);
            let dominated = f.iter().any(|q| q[0] <= p.0 && q[1] <= p.1);
            if dominated {
                prop_assert!((after - before).abs() < 1e-12);
            }
        }

        #[test]
        fn ssc_bounded_by_box(f in front()) {
            let a = ssc(&f, &[1.0, 1.0]).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        }

        #[test]
        fn ud_in_unit_interval(f in front(), sigma in 0.01..0.5f64) {
            prop_assume!(!f.is_empty());
            let counts = niche_counts(&f, sigma, 1.0);
            let u = ud(&f, sigma, 1.0).unwrap();
            prop_assert!(u > 0.0 && u <= 1.0);
            let spread = counts.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - counts.iter().cloned().fold(f64::INFINITY, f64::min);
            if spread == 0.0 {
                prop_assert_eq!(u, 1.0);
            }
            if u == 1.0 {
                prop_assert!(spread < 1e-9);
            }
        }
    }
}
