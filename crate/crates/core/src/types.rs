//! Value types shared across the crate: decision and objective spaces,
//! individuals, populations and per-generation objective extremes.

use std::ops::Deref;

use crate::engine::Chromosome;
use crate::error::{check_dims, Error, Result};

/// Box-bounded decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpace {
    bounds: Vec<(f64, f64)>,
}

impl ParameterSpace {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidConfig(
                "parameter space needs at least one variable".into(),
            ));
        }
        for (index, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidBounds { index, lo, hi });
            }
        }
        Ok(Self { bounds })
    }

    /// `n` variables sharing the same range.
    pub fn uniform(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi); n])
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, x: &DecisionVector) -> Result<()> {
        check_dims(self.len(), x.len())?;
        for (index, (&value, &(lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            if !(lo..=hi).contains(&value) {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DecisionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Objective values in minimization sense. At least two finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewObjectives(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub decision: DecisionVector,
    pub objective: ObjectiveVector,
    /// Objectives after the hard-constraint transform, when one is active.
    pub transformed: Option<ObjectiveVector>,
    pub rank: usize,
    pub niche_count: f64,
}

impl Individual {
    pub fn new(
        chromosome: Chromosome,
        decision: DecisionVector,
        objective: ObjectiveVector,
    ) -> Self {
        Self {
            chromosome,
            decision,
            objective,
            transformed: None,
            rank: 1,
            niche_count: 0.0,
        }
    }

    /// The objective values ranking operates on.
    pub fn effective_objective(&self) -> &ObjectiveVector {
        self.transformed.as_ref().unwrap_or(&self.objective)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        if let Some(first) = members.first() {
            let m = first.objective.len();
            let n = first.decision.len();
            for ind in &members[1..] {
                check_dims(m, ind.objective.len())?;
                check_dims(n, ind.decision.len())?;
            }
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn effective_objectives(&self) -> Vec<ObjectiveVector> {
        self.members
            .iter()
            .map(|ind| ind.effective_objective().clone())
            .collect()
    }

    /// Members holding rank 1.
    pub fn front(&self) -> impl Iterator<Item = &Individual> {
        self.members.iter().filter(|ind| ind.rank == 1)
    }
}

/// Component-wise minimum and maximum over a population.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveExtremes {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ObjectiveExtremes {
    pub fn len(&self) -> usize {
        self.min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min.is_empty()
    }

    pub fn of<'a, I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(Error::EmptyPopulation)?;
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        for p in iter {
            check_dims(min.len(), p.len())?;
            for (i, &v) in p.iter().enumerate() {
                min[i] = min[i].min(v);
                max[i] = max[i].max(v);
            }
        }
        Ok(Self { min, max })
    }
}

/// Extremes over the members' effective (transformed if present) objectives.
pub fn objective_extremes(pop: &Population) -> Result<ObjectiveExtremes> {
    ObjectiveExtremes::of(
        pop.members
            .iter()
            .map(|ind| ind.effective_objective().as_slice()),
    )
}

/// `F_i <= G_i` for every component; equality counts as satisfied.
pub fn satisfies_goal(f: &[f64], goal: &[f64]) -> Result<bool> {
    check_dims(goal.len(), f.len())?;
    Ok(f.iter().zip(goal).all(|(fi, gi)| fi <= gi))
}

/// Indices of components where `F_i > G_i`.
pub fn violation_set(f: &[f64], goal: &[f64]) -> Result<Vec<usize>> {
    check_dims(goal.len(), f.len())?;
    Ok(f.iter()
        .zip(goal)
        .enumerate()
        .filter(|(_, (fi, gi))| fi > gi)
        .map(|(i, _)| i)
        .collect())
}
