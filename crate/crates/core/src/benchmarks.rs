//! Two-objective test problems.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::engine::Problem;
use crate::error::{check_dims, Result};
use crate::sharing::euclidean;
use crate::types::{DecisionVector, ObjectiveVector, ParameterSpace};

pub const FON_VARS: usize = 8;
pub const DEB_VARS: usize = 10;

/// Points on the sampled FON trade-off curve; odd so the midpoint is included.
pub const FON_FRONT_SAMPLES: usize = 10_001;

/// Fonseca and Fleming's problem on `[-2, 2]^8`.
pub fn eval_fon(x: &[f64]) -> Result<ObjectiveVector> {
    check_dims(FON_VARS, x.len())?;
    check_range(x, -2.0, 2.0)?;
    Ok(fon_unchecked(x))
}

fn fon_unchecked(x: &[f64]) -> ObjectiveVector {
    let c = 1.0 / (FON_VARS as f64).sqrt();
    let s1: f64 = x.iter().map(|v| (v - c) * (v - c)).sum();
    let s2: f64 = x.iter().map(|v| (v + c) * (v + c)).sum();
    ObjectiveVector::new(vec![1.0 - (-s1).exp(), 1.0 - (-s2).exp()])
        .expect("FON objectives are finite")
}

/// Deb's discontinuous problem on `[0, 1]^10`.
pub fn eval_deb(x: &[f64]) -> Result<ObjectiveVector> {
    check_dims(DEB_VARS, x.len())?;
    check_range(x, 0.0, 1.0)?;
    let f1 = x[0];
    let g = deb_g(x);
    let r = f1 / g;
    let h = 1.0 - r.powf(0.25) - r * (10.0 * PI * f1).sin();
    ObjectiveVector::new(vec![f1, g * h])
}

/// The distance function `g` of the discontinuous problem.
pub fn deb_g(x: &[f64]) -> f64 {
    1.0 + 10.0 * x[1..].iter().sum::<f64>() / 9.0
}

fn check_range(x: &[f64], lo: f64, hi: f64) -> Result<()> {
    ParameterSpace::uniform(x.len(), lo, hi)?.contains(&DecisionVector::new(x.to_vec()))
}

fn fon_front() -> &'static [[f64; 2]] {
    use std::sync::OnceLock;
    static FRONT: OnceLock<Vec<[f64; 2]>> = OnceLock::new();
    FRONT.get_or_init(|| {
        let c = 1.0 / (FON_VARS as f64).sqrt();
        (0..FON_FRONT_SAMPLES)
            .map(|i| {
                let t = -c + 2.0 * c * i as f64 / (FON_FRONT_SAMPLES - 1) as f64;
                let f = fon_unchecked(&[t; FON_VARS]);
                [f[0], f[1]]
            })
            .collect()
    })
}

/// Distance from `f` to the FON Pareto front, sampled at
/// [`FON_FRONT_SAMPLES`] points along `x_i = c`.
pub fn fon_front_distance(f: &[f64]) -> f64 {
    fon_front()
        .iter()
        .map(|p| euclidean(f, p))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkKind {
    Fon,
    DebDisc,
}

/// A benchmark problem that counts its evaluations.
#[derive(Debug)]
pub struct BenchmarkProblem {
    kind: BenchmarkKind,
    space: ParameterSpace,
    evaluations: AtomicU64,
}

impl BenchmarkProblem {
    pub fn fon() -> Self {
        Self::new(BenchmarkKind::Fon)
    }

    pub fn debdisc() -> Self {
        Self::new(BenchmarkKind::DebDisc)
    }

    pub fn new(kind: BenchmarkKind) -> Self {
        let space = match kind {
            BenchmarkKind::Fon => ParameterSpace::uniform(FON_VARS, -2.0, 2.0),
            BenchmarkKind::DebDisc => ParameterSpace::uniform(DEB_VARS, 0.0, 1.0),
        }
        .expect("static bounds are valid");
        Self {
            kind,
            space,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn reset_evaluations(&self) {
        self.evaluations.store(0, Ordering::Relaxed);
    }
}

impl Problem for BenchmarkProblem {
    fn name(&self) -> &str {
        match self.kind {
            BenchmarkKind::Fon => "FON",
            BenchmarkKind::DebDisc => "DEBDISC",
        }
    }

    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        match self.kind {
            BenchmarkKind::Fon => eval_fon(x),
            BenchmarkKind::DebDisc => eval_deb(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fon_examples() {
        let c = 1.0 / 8f64.sqrt();
        let f = eval_fon(&[c; 8]).unwrap();
        assert_abs_diff_eq!(f[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f[1], 0.981684, epsilon = 1e-6);
        let f = eval_fon(&[0.0; 8]).unwrap();
        assert_abs_diff_eq!(f[0], 0.632121, epsilon = 1e-6);
        assert_abs_diff_eq!(f[1], 0.632121, epsilon = 1e-6);
        let f = eval_fon(&[-c; 8]).unwrap();
        assert_abs_diff_eq!(f[0], 0.981684, epsilon = 1e-6);
        assert_abs_diff_eq!(f[1], 0.0, epsilon = 1e-15);
        assert!(eval_fon(&[0.0; 7]).is_err());
        assert!(eval_fon(&[2.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn deb_examples() {
        let mut x = [0.0; 10];
        let f = eval_deb(&x).unwrap();
        assert_eq!((f[0], f[1]), (0.0, 1.0));
        x[0] = 1.0;
        let f = eval_deb(&x).unwrap();
        assert_eq!(f[0], 1.0);
        assert_abs_diff_eq!(f[1], 0.0, epsilon = 1e-12);
        x[0] = 0.1;
        let f = eval_deb(&x).unwrap();
        assert_abs_diff_eq!(f[1], 0.437659, epsilon = 1e-6);
        assert!(eval_deb(&[0.5; 9]).is_err());
        assert!(eval_deb(&[-0.1; 10]).is_err());
    }

    #[test]
    fn front_distance_examples() {
        assert!(fon_front_distance(&[0.632121, 0.632121]) < 1e-4);
        assert!(fon_front_distance(&[0.9, 0.9]) > 0.1);
        let c = 1.0 / 8f64.sqrt();
        let on = eval_fon(&[0.3 * c; 8]).unwrap();
        assert!(fon_front_distance(&on) < 1e-3);
    }

    #[test]
    fn counter_tracks_evaluations() {
        let p = BenchmarkProblem::fon();
        for _ in 0..5 {
            p.evaluate(&DecisionVector::new(vec![0.0; 8])).unwrap();
        }
        assert_eq!(p.evaluations(), 5);
        p.reset_evaluations();
        assert_eq!(p.evaluations(), 0);
        assert_eq!(BenchmarkProblem::debdisc().space().len(), 10);
    }

    proptest! {
        #[test]
        fn fon_negation_swaps_objectives(x in prop::collection::vec(-2.0..2.0f64, 8)) {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let a = eval_fon(&x).unwrap();
            let b = eval_fon(&neg).unwrap();
            prop_assert_eq!(a[0], b[1]);
            prop_assert_eq!(a[1], b[0]);
        }

        #[test]
        fn deb_g_increases_with_tail(x in prop::collection::vec(0.0..0.9f64, 10), i in 1usize..10, d in 0.01..0.1f64) {
            let mut y = x.clone();
            y[i] += d;
            prop_assert!(deb_g(&y) > deb_g(&x));
        }

        #[test]
        fn deb_zero_tail_has_unit_g(f1 in 0.0..1.0f64) {
            let mut x = vec![0.0; 10];
            x[0] = f1;
            prop_assert_eq!(deb_g(&x), 1.0);
            let f = eval_deb(&x).unwrap();
            let h = 1.0 - f1.powf(0.25) - f1 * (10.0 * PI * f1).sin();
            prop_assert!((f[1] - h).abs() < 1e-12);
        }
    }
}
