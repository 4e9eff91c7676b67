//! Goal, priority and constraint specifications.
//!
//! A [`LeafSpec`] carries one goal vector with per-component hardness, the
//! goal/objective priority vectors and an optional objective mask. Leaves are
//! combined with AND/OR connectives into a [`SpecTree`]. Each generation a
//! leaf is turned into a [`GoalSequenceMatrix`] from the current population
//! extremes; hard components are clamped with [`transform_hard`] first.

mod grammar;

pub use grammar::parse_spec;

use crate::error::{check_dims, Error, Result};
use crate::types::{ObjectiveExtremes, ObjectiveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hardness {
    #[default]
    Soft,
    Hard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalSpec {
    pub goal: Vec<f64>,
    pub hardness: Vec<Hardness>,
}

impl GoalSpec {
    pub fn new(goal: Vec<f64>, hardness: Vec<Hardness>) -> Result<Self> {
        check_dims(goal.len(), hardness.len())?;
        if let Some((index, &value)) = goal.iter().enumerate().find(|(_, g)| !g.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { goal, hardness })
    }

    /// Every component soft.
    pub fn soft(goal: Vec<f64>) -> Result<Self> {
        let hardness = vec![Hardness::Soft; goal.len()];
        Self::new(goal, hardness)
    }

    pub fn len(&self) -> usize {
        self.goal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goal.is_empty()
    }

    pub fn has_hard(&self) -> bool {
        self.hardness.contains(&Hardness::Hard)
    }
}

/// Goal priorities `pg` and objective priorities `pf`; 0 means don't care,
/// lower numbers are more important.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityVectors {
    pg: Vec<u32>,
    pf: Vec<u32>,
}

impl PriorityVectors {
    pub fn new(pg: Vec<u32>, pf: Vec<u32>) -> Result<Self> {
        check_dims(pg.len(), pf.len())?;
        for (index, (&g, &f)) in pg.iter().zip(&pf).enumerate() {
            if g == f && g != 0 {
                return Err(Error::PriorityContradiction { index, level: g });
            }
        }
        Ok(Self { pg, pf })
    }

    /// All don't care.
    pub fn none(m: usize) -> Self {
        Self {
            pg: vec![0; m],
            pf: vec![0; m],
        }
    }

    pub fn pg(&self) -> &[u32] {
        &self.pg
    }

    pub fn pf(&self) -> &[u32] {
        &self.pf
    }

    pub fn len(&self) -> usize {
        self.pg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pg.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityClass {
    None,
    Soft,
    Hard,
}

pub fn classify_priority(pv: &PriorityVectors) -> PriorityClass {
    let ordered = pv.pg.iter().chain(&pv.pf).any(|&p| p > 1);
    if !ordered {
        return PriorityClass::None;
    }
    let soft = pv.pg.iter().zip(&pv.pf).all(|(&g, &f)| g == 1 || f == 1);
    if soft {
        PriorityClass::Soft
    } else {
        PriorityClass::Hard
    }
}

pub fn last_priority_level(pv: &PriorityVectors) -> u32 {
    pv.pg.iter().chain(&pv.pf).copied().max().unwrap_or(0)
}

/// One goal row per priority level, level 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalSequenceMatrix {
    rows: Vec<Vec<f64>>,
}

impl GoalSequenceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::NoPriorityLevels)?;
        let m = first.len();
        for row in &rows {
            check_dims(m, row.len())?;
            if let Some((index, &value)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { rows })
    }

    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, level: usize) -> &[f64] {
        &self.rows[level]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Row `k` takes `G(i)` where `pg(i) = k`, the population minimum where
/// `pf(i) = k` and the population maximum everywhere else.
pub fn build_goal_sequence(
    gs: &GoalSpec,
    pv: &PriorityVectors,
    ext: &ObjectiveExtremes,
) -> Result<GoalSequenceMatrix> {
    let m = gs.len();
    check_dims(m, pv.len())?;
    check_dims(m, ext.len())?;
    let z = last_priority_level(pv);
    if z == 0 {
        return Err(Error::NoPriorityLevels);
    }
    let rows = (1..=z)
        .map(|k| {
            (0..m)
                .map(|i| {
                    if pv.pg[i] == k {
                        gs.goal[i]
                    } else if pv.pf[i] == k {
                        ext.min[i]
                    } else {
                        ext.max[i]
                    }
                })
                .collect()
        })
        .collect();
    GoalSequenceMatrix::from_rows(rows)
}

/// Clamp satisfied hard components to their goal value.
pub fn transform_hard(f: &ObjectiveVector, gs: &GoalSpec) -> Result<ObjectiveVector> {
    check_dims(gs.len(), f.len())?;
    let values = f
        .iter()
        .zip(gs.goal.iter().zip(&gs.hardness))
        .map(|(&fi, (&gi, &h))| {
            if h == Hardness::Hard && fi < gi {
                gi
            } else {
                fi
            }
        })
        .collect();
    ObjectiveVector::new(values)
}

/// A single goal/priority specification over `m` objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafSpec {
    pub goal: Option<GoalSpec>,
    pub priorities: PriorityVectors,
    /// `true` for objectives this leaf concerns.
    pub mask: Vec<bool>,
}

impl LeafSpec {
    /// Plain Pareto ranking over `m` objectives.
    pub fn pareto(m: usize) -> Self {
        Self {
            goal: None,
            priorities: PriorityVectors::none(m),
            mask: vec![true; m],
        }
    }

    pub fn with_goal(goal: Vec<f64>) -> Result<Self> {
        let m = goal.len();
        Ok(Self {
            goal: Some(GoalSpec::soft(goal)?),
            ..Self::pareto(m)
        })
    }

    pub fn hardness(mut self, hardness: Vec<Hardness>) -> Result<Self> {
        let gs = self
            .goal
            .take()
            .ok_or_else(|| Error::InvalidSpec("hardness given without a goal".into()))?;
        self.goal = Some(GoalSpec::new(gs.goal, hardness)?);
        Ok(self)
    }

    pub fn priorities(mut self, pv: PriorityVectors) -> Result<Self> {
        check_dims(self.dims(), pv.len())?;
        self.priorities = pv;
        Ok(self)
    }

    pub fn mask(mut self, mask: Vec<bool>) -> Result<Self> {
        check_dims(self.dims(), mask.len())?;
        self.mask = mask;
        Ok(self)
    }

    pub fn dims(&self) -> usize {
        self.priorities.len()
    }

    pub fn has_hard(&self) -> bool {
        self.goal.as_ref().is_some_and(GoalSpec::has_hard)
    }

    /// Checks internal consistency; returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let m = self.dims();
        if m < 2 {
            return Err(Error::TooFewObjectives(m));
        }
        check_dims(m, self.mask.len())?;
        if let Some(gs) = &self.goal {
            check_dims(m, gs.len())?;
        }
        if !self.mask.iter().any(|&b| b) {
            return Err(Error::InvalidSpec("mask selects no objective".into()));
        }
        if self.goal.is_none() && self.priorities.pg.iter().any(|&p| p != 0) {
            return Err(Error::InvalidSpec(
                "goal priorities given without a goal vector".into(),
            ));
        }
        let mut warnings = Vec::new();
        let pv = self.effective_priorities();
        for k in 1..=last_priority_level(&pv) {
            if !pv.pg.contains(&k) && !pv.pf.contains(&k) {
                warnings.push(format!(
                    "priority level {k} has no assigned component and cannot refine ranks"
                ));
            }
        }
        Ok(warnings)
    }

    /// Priorities with masked-out components set to don't care.
    pub fn effective_priorities(&self) -> PriorityVectors {
        let keep = |v: &[u32]| -> Vec<u32> {
            v.iter()
                .zip(&self.mask)
                .map(|(&p, &on)| if on { p } else { 0 })
                .collect()
        };
        PriorityVectors {
            pg: keep(&self.priorities.pg),
            pf: keep(&self.priorities.pf),
        }
    }

    /// Goal vector used for ranking. Components without a goal, or masked
    /// out, are relaxed to the population maximum.
    pub fn effective_goal(&self, ext: &ObjectiveExtremes) -> Result<GoalSpec> {
        let m = self.dims();
        check_dims(m, ext.len())?;
        let (goal, hardness) = match &self.goal {
            Some(gs) => (
                (0..m)
                    .map(|i| if self.mask[i] { gs.goal[i] } else { ext.max[i] })
                    .collect(),
                (0..m)
                    .map(|i| {
                        if self.mask[i] {
                            gs.hardness[i]
                        } else {
                            Hardness::Soft
                        }
                    })
                    .collect(),
            ),
            None => (ext.max.clone(), vec![Hardness::Soft; m]),
        };
        GoalSpec::new(goal, hardness)
    }

    /// Hard-constraint transform restricted to unmasked components.
    pub fn transform(&self, f: &ObjectiveVector) -> Result<ObjectiveVector> {
        match &self.goal {
            Some(gs) if gs.has_hard() => {
                let masked = GoalSpec {
                    goal: gs.goal.clone(),
                    hardness: gs
                        .hardness
                        .iter()
                        .zip(&self.mask)
                        .map(|(&h, &on)| if on { h } else { Hardness::Soft })
                        .collect(),
                };
                transform_hard(f, &masked)
            }
            _ => {
                check_dims(self.dims(), f.len())?;
                Ok(f.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecTree {
    Leaf(LeafSpec),
    Node {
        connective: Connective,
        children: Vec<SpecTree>,
    },
}

impl SpecTree {
    pub fn pareto(m: usize) -> Self {
        SpecTree::Leaf(LeafSpec::pareto(m))
    }

    pub fn and(children: Vec<SpecTree>) -> Self {
        SpecTree::Node {
            connective: Connective::And,
            children,
        }
    }

    pub fn or(children: Vec<SpecTree>) -> Self {
        SpecTree::Node {
            connective: Connective::Or,
            children,
        }
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&LeafSpec> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a LeafSpec>) {
        match self {
            SpecTree::Leaf(leaf) => out.push(leaf),
            SpecTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SpecTree::Leaf(_) => 0,
            SpecTree::Node { children, .. } => {
                1 + children.iter().map(SpecTree::depth).max().unwrap_or(0)
            }
        }
    }

    /// The single leaf, when the tree has no connectives.
    pub fn as_leaf(&self) -> Option<&LeafSpec> {
        match self {
            SpecTree::Leaf(leaf) => Some(leaf),
            SpecTree::Node { .. } => None,
        }
    }

    /// Validates every leaf against `m` objectives; collects warnings.
    pub fn validate(&self, m: usize) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        self.validate_into(m, &mut warnings)?;
        Ok(warnings)
    }

    fn validate_into(&self, m: usize, warnings: &mut Vec<String>) -> Result<()> {
        match self {
            SpecTree::Leaf(leaf) => {
                check_dims(m, leaf.dims())?;
                warnings.extend(leaf.validate()?);
            }
            SpecTree::Node { children, .. } => {
                if children.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "a connective needs at least two children".into(),
                    ));
                }
                for c in children {
                    c.validate_into(m, warnings)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(pg: &[u32], pf: &[u32]) -> PriorityVectors {
        PriorityVectors::new(pg.to_vec(), pf.to_vec()).unwrap()
    }

    fn ext() -> ObjectiveExtremes {
        ObjectiveExtremes {
            min: vec![0.1, 0.2],
            max: vec![0.8, 0.9],
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_priority(&pv(&[1, 1, 1, 1], &[2, 2, 3, 3])),
            PriorityClass::Soft
        );
        assert_eq!(
            classify_priority(&pv(&[1, 2], &[0, 0])),
            PriorityClass::Hard
        );
        assert_eq!(
            classify_priority(&pv(&[1, 1], &[0, 0])),
            PriorityClass::None
        );
        assert_eq!(
            classify_priority(&pv(&[0, 0, 0, 0], &[1, 1, 2, 2])),
            PriorityClass::Hard
        );
        assert_eq!(
            classify_priority(&pv(&[1, 1], &[2, 0])),
            PriorityClass::Soft
        );
    }

    #[test]
    fn last_level_examples() {
        assert_eq!(last_priority_level(&pv(&[1, 1], &[2, 0])), 2);
        assert_eq!(last_priority_level(&pv(&[0, 0], &[0, 0])), 0);
        assert_eq!(last_priority_level(&pv(&[1, 2], &[0, 0])), 2);
    }

    #[test]
    fn contradictory_priorities_rejected() {
        assert_eq!(
            PriorityVectors::new(vec![1, 1], vec![1, 0]),
            Err(Error::PriorityContradiction { index: 0, level: 1 })
        );
        assert!(PriorityVectors::new(vec![0, 0], vec![0, 0]).is_ok());
        assert!(PriorityVectors::new(vec![1], vec![0, 0]).is_err());
    }

    #[test]
    fn goal_sequence_soft_example() {
        let gs = GoalSpec::soft(vec![0.5, 0.6]).unwrap();
        let g = build_goal_sequence(&gs, &pv(&[1, 1], &[2, 0]), &ext()).unwrap();
        assert_eq!(g.rows(), &[vec![0.5, 0.6], vec![0.1, 0.9]]);
    }

    #[test]
    fn goal_sequence_hard_example() {
        let gs = GoalSpec::soft(vec![0.5, 0.6]).unwrap();
        let g = build_goal_sequence(&gs, &pv(&[1, 2], &[0, 0]), &ext()).unwrap();
        assert_eq!(g.rows(), &[vec![0.5, 0.9], vec![0.8, 0.6]]);
    }

    #[test]
    fn goal_sequence_objective_priority_only() {
        let gs = GoalSpec::soft(vec![0.5, 0.6]).unwrap();
        let g = build_goal_sequence(&gs, &pv(&[0, 0], &[1, 0]), &ext()).unwrap();
        assert_eq!(g.rows(), &[vec![0.1, 0.9]]);
    }

    #[test]
    fn goal_sequence_without_levels_fails() {
        let gs = GoalSpec::soft(vec![0.5, 0.6]).unwrap();
        assert_eq!(
            build_goal_sequence(&gs, &PriorityVectors::none(2), &ext()),
            Err(Error::NoPriorityLevels)
        );
    }

    #[test]
    fn transform_examples() {
        let f = ObjectiveVector::new(vec![0.3, 0.7]).unwrap();
        let hs = GoalSpec::new(vec![0.5, 0.5], vec![Hardness::Hard, Hardness::Soft]).unwrap();
        assert_eq!(transform_hard(&f, &hs).unwrap().as_slice(), &[0.5, 0.7]);
        let ss = GoalSpec::soft(vec![0.5, 0.5]).unwrap();
        assert_eq!(transform_hard(&f, &ss).unwrap().as_slice(), &[0.3, 0.7]);
        let hh = GoalSpec::new(vec![0.5, 0.5], vec![Hardness::Hard; 2]).unwrap();
        let g = ObjectiveVector::new(vec![0.6, 0.6]).unwrap();
        assert_eq!(transform_hard(&g, &hh).unwrap().as_slice(), &[0.6, 0.6]);
    }

    #[test]
    fn empty_level_warns() {
        let leaf = LeafSpec::with_goal(vec![0.5, 0.5])
            .unwrap()
            .priorities(pv(&[1, 3], &[0, 0]))
            .unwrap();
        let w = leaf.validate().unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("level 2"));
    }

    #[test]
    fn masked_components_are_relaxed() {
        let leaf = LeafSpec::with_goal(vec![0.5, 0.5])
            .unwrap()
            .priorities(pv(&[1, 2], &[0, 0]))
            .unwrap()
            .mask(vec![true, false])
            .unwrap();
        assert_eq!(leaf.effective_priorities(), pv(&[1, 0], &[0, 0]));
        assert_eq!(leaf.effective_goal(&ext()).unwrap().goal, vec![0.5, 0.9]);
    }

    #[test]
    fn tree_validation() {
        let leaf = SpecTree::pareto(2);
        assert!(SpecTree::and(vec![leaf.clone()]).validate(2).is_err());
        assert!(SpecTree::or(vec![leaf.clone(), leaf.clone()])
            .validate(2)
            .is_ok());
        assert!(SpecTree::or(vec![leaf.clone(), SpecTree::pareto(3)])
            .validate(2)
            .is_err());
        let no_goal_pg = LeafSpec::pareto(2)
            .priorities(pv(&[1, 0], &[0, 0]))
            .unwrap();
        assert!(no_goal_pg.validate().is_err());
    }

    fn priorities(m: usize) -> impl Strategy<Value = PriorityVectors> {
        (
            prop::collection::vec(0u32..4, m),
            prop::collection::vec(0u32..4, m),
        )
            .prop_map(|(pg, mut pf)| {
                for i in 0..pg.len() {
                    if pg[i] == pf[i] && pg[i] != 0 {
                        pf[i] = 0;
                    }
                }
                PriorityVectors::new(pg, pf).unwrap()
            })
    }

    proptest! {
        #[test]
        fn transform_is_idempotent_and_monotone(
            f in prop::collection::vec(-1.0..1.0f64, 3),
            g in prop::collection::vec(-1.0..1.0f64, 3),
            hard in prop::collection::vec(any::<bool>(), 3),
        ) {
            let hardness = hard.iter().map(|&h| if h { Hardness::Hard } else { Hardness::Soft }).collect();
            let gs = GoalSpec::new(g.clone(), hardness).unwrap();
            let f = ObjectiveVector::new(f).unwrap();
            let once = transform_hard(&f, &gs).unwrap();
            let twice = transform_hard(&once, &gs).unwrap();
            prop_assert_eq!(&once, &twice);
            for i in 0..3 {
                prop_assert!(once[i] >= f[i]);
                if f[i] < g[i] {
                    prop_assert!(once[i] <= g[i]);
                }
            }
        }

        #[test]
        fn goal_sequence_entries(pv in priorities(3), g in prop::collection::vec(-1.0..1.0f64, 3)) {
            let ext = ObjectiveExtremes { min: vec![-2.0; 3], max: vec![2.0; 3] };
            let gs = GoalSpec::soft(g.clone()).unwrap();
            match build_goal_sequence(&gs, &pv, &ext) {
                Err(e) => prop_assert_eq!(last_priority_level(&pv), 0, "{}", e),
                Ok(gsm) => {
                    prop_assert_eq!(gsm.levels() as u32, last_priority_level(&pv));
                    for (k, row) in gsm.rows().iter().enumerate() {
                        let level = k as u32 + 1;
                        for i in 0..3 {
                            let v = row[i];
                            prop_assert!(v == g[i] || v == -2.0 || v == 2.0);
                            if pv.pg()[i] == level {
                                prop_assert_eq!(v, g[i]);
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn soft_classification_matches_direct_scan(pv in priorities(4)) {
            if classify_priority(&pv) == PriorityClass::Soft {
                for i in 0..4 {
                    prop_assert!(pv.pg()[i] == 1 || pv.pf()[i] == 1);
                }
            }
        }
    }
}
