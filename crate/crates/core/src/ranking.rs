//! Pareto dominance, two-stage goal domination, goal-sequence ranking and
//! logical combination of ranks.
//!
//! Stage one ranks individuals that satisfy the goal by plain Pareto
//! dominance. Stage two ranks the rest by goal domination, starting one above
//! the largest stage-one rank. Comparisons are made only within each group,
//! so the comparison count is `nA(nA-1) + nB(nB-1)`.

use crate::error::{check_dims, Error, Result};
use crate::preference::{
    build_goal_sequence, last_priority_level, Connective, GoalSequenceMatrix, SpecTree,
};
use crate::types::{satisfies_goal, ObjectiveExtremes, ObjectiveVector};

/// Which components the first (plain) term of goal domination uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GoalDomination {
    /// Both terms restricted to the components where the left operand
    /// violates the goal.
    #[default]
    ViolationSet,
    /// The plain term compares full vectors; the distance term stays
    /// restricted.
    FullVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub ranks: Vec<usize>,
    pub comparisons_performed: u64,
    /// `(satisfying, violating)` sizes of the first-level split, one entry
    /// per leaf ranked.
    pub groups: Vec<(usize, usize)>,
}

impl RankResult {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

#[inline]
fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// `a <= b` everywhere and `a < b` somewhere.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a.len(), b.len())?;
    Ok(dominates(a, b))
}

fn goal_dominates_unchecked(
    a: &[f64],
    b: &[f64],
    goal: &[f64],
    reading: GoalDomination,
) -> Option<bool> {
    let mut any_violation = false;
    // restricted plain term
    let mut plain_ok = true;
    let mut plain_strict = false;
    // restricted distance term
    let mut dist_ok = true;
    let mut dist_strict = false;
    for i in 0..a.len() {
        if a[i] <= goal[i] {
            continue;
        }
        any_violation = true;
        if a[i] > b[i] {
            plain_ok = false;
        } else if a[i] < b[i] {
            plain_strict = true;
        }
        let da = (a[i] - goal[i]).abs();
        let db = (b[i] - goal[i]).abs();
        if da > db {
            dist_ok = false;
        } else if da < db {
            dist_strict = true;
        }
    }
    if !any_violation {
        return None;
    }
    let plain = match reading {
        GoalDomination::ViolationSet => plain_ok && plain_strict,
        GoalDomination::FullVector => dominates(a, b),
    };
    Some(plain || (dist_ok && dist_strict))
}

/// Goal domination of `a` over `b`, evaluated on the components where `a`
/// violates `goal`. Fails when `a` satisfies the goal entirely.
pub fn goal_dominates(a: &[f64], b: &[f64], goal: &[f64]) -> Result<bool> {
    goal_dominates_by(a, b, goal, GoalDomination::default())
}

pub fn goal_dominates_by(
    a: &[f64],
    b: &[f64],
    goal: &[f64],
    reading: GoalDomination,
) -> Result<bool> {
    check_dims(goal.len(), a.len())?;
    check_dims(goal.len(), b.len())?;
    goal_dominates_unchecked(a, b, goal, reading).ok_or(Error::NoViolation)
}

/// Compress rank values to `1..=k` preserving order and ties.
pub fn dense_ranks(raw: &[usize]) -> Vec<usize> {
    let mut levels: Vec<usize> = raw.to_vec();
    levels.sort_unstable();
    levels.dedup();
    raw.iter()
        .map(|r| levels.binary_search(r).unwrap() + 1)
        .collect()
}

pub fn rank_two_stage<P: AsRef<[f64]>>(objs: &[P], goal: &[f64]) -> Result<RankResult> {
    rank_two_stage_by(objs, goal, GoalDomination::default())
}

/// Two-stage ranking against `goal`. Raw costs are `1 + #dominators` in the
/// satisfying group and `maxA + 1 + #goal-dominators` in the violating
/// group, then densified.
pub fn rank_two_stage_by<P: AsRef<[f64]>>(
    objs: &[P],
    goal: &[f64],
    reading: GoalDomination,
) -> Result<RankResult> {
    let mut satisfied = Vec::new();
    let mut violating = Vec::new();
    for (i, f) in objs.iter().enumerate() {
        if satisfies_goal(f.as_ref(), goal)? {
            satisfied.push(i);
        } else {
            violating.push(i);
        }
    }

    let mut raw = vec![0usize; objs.len()];
    let mut comparisons = 0u64;

    let mut max_a = 0;
    for &i in &satisfied {
        let mut dominators = 0;
        for &j in &satisfied {
            if i != j {
                comparisons += 1;
                if dominates(objs[j].as_ref(), objs[i].as_ref()) {
                    dominators += 1;
                }
            }
        }
        raw[i] = 1 + dominators;
        max_a = max_a.max(raw[i]);
    }

    let mut counts = Vec::with_capacity(violating.len());
    for &i in &violating {
        let mut dominators = 0;
        for &j in &violating {
            if i != j {
                comparisons += 1;
                let fj = objs[j].as_ref();
                // j violates the goal, so the relation is defined
                if goal_dominates_unchecked(fj, objs[i].as_ref(), goal, reading) == Some(true) {
                    dominators += 1;
                }
            }
        }
        counts.push(dominators);
    }
    // goal domination can be cyclic; anchor the violating group just above
    // the satisfying one
    let floor = counts.iter().copied().min().unwrap_or(0);
    for (&i, &c) in violating.iter().zip(&counts) {
        raw[i] = max_a + 1 + c - floor;
    }

    Ok(RankResult {
        ranks: dense_ranks(&raw),
        comparisons_performed: comparisons,
        groups: vec![(satisfied.len(), violating.len())],
    })
}

pub fn rank_goal_sequence<P: AsRef<[f64]>>(
    objs: &[P],
    gsm: &GoalSequenceMatrix,
) -> Result<RankResult> {
    rank_goal_sequence_by(objs, gsm, GoalDomination::default())
}

/// Ranks against row 1, then refines every group of tied individuals
/// against the following rows until all rank tuples are distinct or the
/// rows run out. Final ranks are the dense order of the tuples.
pub fn rank_goal_sequence_by<P: AsRef<[f64]>>(
    objs: &[P],
    gsm: &GoalSequenceMatrix,
    reading: GoalDomination,
) -> Result<RankResult> {
    if gsm.levels() == 0 {
        return Err(Error::NoPriorityLevels);
    }
    let n = objs.len();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::with_capacity(gsm.levels()); n];
    let mut groups: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut comparisons = 0u64;
    let mut first_split = (0, 0);

    for level in 0..gsm.levels() {
        if level > 0 && groups.iter().all(|g| g.len() <= 1) {
            break;
        }
        let row = gsm.row(level);
        let mut next = Vec::new();
        for group in groups {
            if group.len() == 1 && level > 0 {
                tuples[group[0]].push(1);
                next.push(group);
                continue;
            }
            let sub: Vec<&[f64]> = group.iter().map(|&i| objs[i].as_ref()).collect();
            let res = rank_two_stage_by(&sub, row, reading)?;
            comparisons += res.comparisons_performed;
            if level == 0 {
                first_split = res.groups[0];
            }
            let levels = res.ranks.iter().copied().max().unwrap_or(0);
            let mut split: Vec<Vec<usize>> = vec![Vec::new(); levels];
            for (&i, &r) in group.iter().zip(&res.ranks) {
                tuples[i].push(r);
                split[r - 1].push(i);
            }
            next.extend(split.into_iter().filter(|g| !g.is_empty()));
        }
        groups = next;
    }

    let mut order: Vec<&Vec<usize>> = tuples.iter().collect();
    order.sort();
    order.dedup();
    let ranks = tuples
        .iter()
        .map(|t| order.binary_search(&t).unwrap() + 1)
        .collect();
    Ok(RankResult {
        ranks,
        comparisons_performed: comparisons,
        groups: vec![first_split],
    })
}

/// OR takes the element-wise minimum of its children's ranks, AND the
/// maximum. `leaf_ranks` follow the depth-first leaf order of `tree`.
pub fn combine_ranks(tree: &SpecTree, leaf_ranks: &[RankResult]) -> Result<RankResult> {
    let mut cursor = 0;
    let out = combine_at(tree, leaf_ranks, &mut cursor)?;
    if cursor != leaf_ranks.len() {
        return Err(Error::InvalidSpec(format!(
            "tree has {cursor} leaves but {} rankings were given",
            leaf_ranks.len()
        )));
    }
    Ok(out)
}

fn combine_at(
    tree: &SpecTree,
    leaf_ranks: &[RankResult],
    cursor: &mut usize,
) -> Result<RankResult> {
    match tree {
        SpecTree::Leaf(_) => {
            let r = leaf_ranks
                .get(*cursor)
                .ok_or_else(|| Error::InvalidSpec("fewer rankings than leaves".into()))?;
            *cursor += 1;
            Ok(r.clone())
        }
        SpecTree::Node {
            connective,
            children,
        } => {
            let mut acc: Option<RankResult> = None;
            for child in children {
                let r = combine_at(child, leaf_ranks, cursor)?;
                acc = Some(match acc {
                    None => r,
                    Some(mut a) => {
                        check_dims(a.ranks.len(), r.ranks.len())?;
                        for (x, &y) in a.ranks.iter_mut().zip(&r.ranks) {
                            *x = match connective {
                                Connective::Or => (*x).min(y),
                                Connective::And => (*x).max(y),
                            };
                        }
                        a.comparisons_performed += r.comparisons_performed;
                        a.groups.extend(r.groups);
                        a
                    }
                });
            }
            acc.ok_or_else(|| Error::InvalidSpec("connective without children".into()))
        }
    }
}

/// Ranking of a population under a full specification tree.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecRanking {
    /// Dense combined ranks; rank 1 is the preferred set.
    pub ranks: Vec<usize>,
    /// Combined ranks before densification.
    pub combined: RankResult,
    pub leaves: Vec<RankResult>,
    /// Hard-constraint transformed objectives, for a single-leaf tree with
    /// hard components.
    pub transformed: Option<Vec<ObjectiveVector>>,
}

/// Ranks one leaf: hard transform, extremes, then two-stage ranking
/// (no priority levels) or goal-sequence ranking.
pub fn rank_leaf(
    objs: &[ObjectiveVector],
    leaf: &crate::preference::LeafSpec,
    reading: GoalDomination,
) -> Result<(RankResult, Vec<ObjectiveVector>)> {
    let transformed = objs
        .iter()
        .map(|f| leaf.transform(f))
        .collect::<Result<Vec<_>>>()?;
    let ext = ObjectiveExtremes::of(transformed.iter().map(|f| f.as_slice()))?;
    let goal = leaf.effective_goal(&ext)?;
    let pv = leaf.effective_priorities();
    let res = if last_priority_level(&pv) == 0 {
        rank_two_stage_by(&transformed, &goal.goal, reading)?
    } else {
        let gsm = build_goal_sequence(&goal, &pv, &ext)?;
        rank_goal_sequence_by(&transformed, &gsm, reading)?
    };
    Ok((res, transformed))
}

pub fn rank_with_spec(
    objs: &[ObjectiveVector],
    tree: &SpecTree,
    reading: GoalDomination,
) -> Result<SpecRanking> {
    if objs.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut leaves = Vec::new();
    let mut transformed = None;
    let single = tree.as_leaf().is_some_and(|l| l.has_hard());
    for leaf in tree.leaves() {
        let (res, t) = rank_leaf(objs, leaf, reading)?;
        if single {
            transformed = Some(t);
        }
        leaves.push(res);
    }
    let combined = combine_ranks(tree, &leaves)?;
    Ok(SpecRanking {
        ranks: dense_ranks(&combined.ranks),
        combined,
        leaves,
        transformed,
    })
}
