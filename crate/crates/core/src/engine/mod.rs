//! The generational loop.
//!
//! Each generation: tournament selection on (rank, niche count), two-point
//! crossover between mates closer than the current sharing distance,
//! per-digit mutation, evaluation, merge with the preserved rank-1 members
//! and SPS truncation back to the population size. One seeded generator
//! drives every random decision, so a seed fixes the whole run.

mod operators;
mod sps;

pub use operators::{
    choose_mate, crossover_two_point, decode, mutate, swap_segment, tournament_select, Chromosome,
    DIGITS_PER_PARAM,
};
pub use sps::sps_truncate;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::preference::SpecTree;
use crate::ranking::{rank_with_spec, GoalDomination, SpecRanking};
use crate::sharing::{normalize, SharingMode, SharingState};
use crate::types::{DecisionVector, Individual, ObjectiveVector, ParameterSpace, Population};

/// An objective function over a box-bounded decision space.
pub trait Problem {
    fn name(&self) -> &str;

    fn space(&self) -> &ParameterSpace;

    fn num_objectives(&self) -> usize;

    fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector>;
}

impl<P: Problem + ?Sized> Problem for &P {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn space(&self) -> &ParameterSpace {
        (**self).space()
    }

    fn num_objectives(&self) -> usize {
        (**self).num_objectives()
    }

    fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector> {
        (**self).evaluate(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Elitism {
    /// Switching preserved strategy.
    #[default]
    Sps,
    /// Preserve rank-1 members but truncate on rank alone.
    RankOnly,
    /// Offspring replace the population.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub population_size: usize,
    pub generations: usize,
    pub p_crossover: f64,
    /// Per-digit mutation probability.
    pub p_mutation: f64,
    pub tournament_size: usize,
    pub seed: u64,
    pub sharing: SharingMode,
    /// Kernel exponent.
    pub alpha: f64,
    /// Rescale objectives to the unit box before measuring distances.
    pub normalize: bool,
    pub elitism: Elitism,
    pub mating_restriction: bool,
    pub goal_domination: GoalDomination,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 70,
            p_crossover: 0.7,
            p_mutation: 0.01,
            tournament_size: 2,
            seed: 0,
            sharing: SharingMode::Dynamic,
            alpha: 1.0,
            normalize: false,
            elitism: Elitism::Sps,
            mating_restriction: true,
            goal_domination: GoalDomination::ViolationSet,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 2 {
            return bad(format!("population size {} < 2", self.population_size));
        }
        for (name, p) in [
            ("p_crossover", self.p_crossover),
            ("p_mutation", self.p_mutation),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if self.tournament_size == 0 {
            return bad("tournament size must be at least 1".into());
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            return bad(format!("alpha = {} must be positive", self.alpha));
        }
        if let SharingMode::Fixed(s) = self.sharing {
            if s.is_nan() || s <= 0.0 {
                return bad(format!("fixed sharing distance {s} must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationTrace {
    pub generation: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub d: f64,
    pub sigma: f64,
    /// Members of the ranked population.
    pub ranked: usize,
    pub ranks: Vec<usize>,
    pub comparisons: u64,
    /// First-level (satisfying, violating) split per leaf.
    pub groups: Vec<(usize, usize)>,
    /// Objectives of the rank-1 members.
    pub front: Vec<ObjectiveVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifact {
    pub problem: String,
    pub seed: u64,
    pub population: Population,
    pub traces: Vec<GenerationTrace>,
    /// Objective evaluations performed.
    pub neval: u64,
}

impl RunArtifact {
    pub fn final_sigma(&self) -> f64 {
        self.traces.last().map_or(0.0, |t| t.sigma)
    }

    pub fn front(&self) -> Vec<&Individual> {
        self.population.front().collect()
    }
}

struct Assessment {
    ranking: SpecRanking,
    sharing: SharingState,
    points: Vec<Vec<f64>>,
}

struct Run<'a, P: Problem + ?Sized> {
    problem: &'a P,
    spec: &'a SpecTree,
    cfg: &'a EngineConfig,
    rng: ChaCha8Rng,
    neval: u64,
}

impl<P: Problem + ?Sized> Run<'_, P> {
    fn evaluate(
        &mut self,
        generation: usize,
        chromosomes: Vec<Chromosome>,
    ) -> Result<Vec<Individual>> {
        let space = self.problem.space();
        chromosomes
            .into_iter()
            .enumerate()
            .map(|(index, ch)| {
                let x = decode(&ch, space)?;
                self.neval += 1;
                let f = self.problem.evaluate(&x).map_err(|e| Error::Evaluation {
                    generation,
                    index,
                    message: e.to_string(),
                })?;
                if f.len() != self.problem.num_objectives() {
                    return Err(Error::Evaluation {
                        generation,
                        index,
                        message: format!(
                            "expected {} objectives, got {}",
                            self.problem.num_objectives(),
                            f.len()
                        ),
                    });
                }
                Ok(Individual::new(ch, x, f))
            })
            .collect()
    }

    /// Ranks `members`, stores ranks, transformed objectives and niche counts.
    fn assess(&self, members: &mut [Individual]) -> Result<Assessment> {
        let objs: Vec<ObjectiveVector> = members.iter().map(|m| m.objective.clone()).collect();
        let ranking = rank_with_spec(&objs, self.spec, self.cfg.goal_domination)?;
        for (i, m) in members.iter_mut().enumerate() {
            m.rank = ranking.ranks[i];
            m.transformed = ranking.transformed.as_ref().map(|t| t[i].clone());
        }
        let raw: Vec<&[f64]> = members
            .iter()
            .map(|m| m.effective_objective().as_slice())
            .collect();
        let points = if self.cfg.normalize {
            normalize(&raw)
        } else {
            raw.iter().map(|p| p.to_vec()).collect()
        };
        let front: Vec<&[f64]> = points
            .iter()
            .zip(members.iter())
            .filter(|(_, m)| m.rank == 1)
            .map(|(p, _)| p.as_slice())
            .collect();
        let sharing = SharingState::compute(
            &front,
            &points,
            self.cfg.population_size,
            self.cfg.sharing,
            self.cfg.alpha,
        )?;
        for (m, &c) in members.iter_mut().zip(&sharing.niche_counts) {
            m.niche_count = c;
        }
        Ok(Assessment {
            ranking,
            sharing,
            points,
        })
    }

    fn trace(generation: usize, members: &[Individual], a: &Assessment) -> GenerationTrace {
        GenerationTrace {
            generation,
            d_min: a.sharing.d_min,
            d_max: a.sharing.d_max,
            d: a.sharing.d,
            sigma: a.sharing.sigma,
            ranked: members.len(),
            ranks: members.iter().map(|m| m.rank).collect(),
            comparisons: a.ranking.combined.comparisons_performed,
            groups: a.ranking.combined.groups.clone(),
            front: members
                .iter()
                .filter(|m| m.rank == 1)
                .map(|m| m.objective.clone())
                .collect(),
        }
    }

    fn vary(&mut self, members: &[Individual], a: &Assessment) -> Result<Vec<Chromosome>> {
        let n = self.cfg.population_size;
        let selected: Vec<usize> = (0..n)
            .map(|_| tournament_select(members, self.cfg.tournament_size, &mut self.rng))
            .collect();
        let sel_points: Vec<Vec<f64>> = selected.iter().map(|&i| a.points[i].clone()).collect();
        let mate_sigma = match (self.cfg.mating_restriction, self.cfg.sharing) {
            (true, SharingMode::Dynamic | SharingMode::Fixed(_)) => Some(a.sharing.sigma),
            _ => None,
        };
        let mut offspring = Vec::with_capacity(n + 1);
        for i in (0..n).step_by(2) {
            let mate = choose_mate(i, &sel_points, mate_sigma, &mut self.rng);
            let pa = &members[selected[i]].chromosome;
            let pb = &members[selected[mate]].chromosome;
            let (x, y) = crossover_two_point(pa, pb, self.cfg.p_crossover, &mut self.rng)?;
            offspring.push(mutate(&x, self.cfg.p_mutation, &mut self.rng));
            offspring.push(mutate(&y, self.cfg.p_mutation, &mut self.rng));
        }
        offspring.truncate(n);
        Ok(offspring)
    }
}

/// Runs the algorithm from a random initial population.
pub fn evolve<P: Problem + ?Sized>(
    problem: &P,
    spec: &SpecTree,
    cfg: &EngineConfig,
) -> Result<RunArtifact> {
    evolve_from(problem, spec, cfg, Vec::new())
}

/// Runs the algorithm with `initial` chromosomes injected into the first
/// population; the remainder is random.
pub fn evolve_from<P: Problem + ?Sized>(
    problem: &P,
    spec: &SpecTree,
    cfg: &EngineConfig,
    initial: Vec<Chromosome>,
) -> Result<RunArtifact> {
    cfg.validate()?;
    for w in spec.validate(problem.num_objectives())? {
        log::warn!("{w}");
    }
    let n = cfg.population_size;
    let vars = problem.space().len();
    if initial.len() > n {
        return Err(Error::InvalidConfig(format!(
            "{} initial chromosomes exceed the population size {n}",
            initial.len()
        )));
    }
    let mut run = Run {
        problem,
        spec,
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        neval: 0,
    };

    let mut chromosomes = initial;
    while chromosomes.len() < n {
        chromosomes.push(Chromosome::random(vars, &mut run.rng));
    }
    let mut members = run.evaluate(0, chromosomes)?;
    let mut assessment = run.assess(&mut members)?;
    let mut traces = vec![Run::<P>::trace(0, &members, &assessment)];

    for generation in 1..=cfg.generations {
        let children = run.vary(&members, &assessment)?;
        let offspring = run.evaluate(generation, children)?;

        let mut pool: Vec<Individual> = match cfg.elitism {
            Elitism::None => offspring,
            Elitism::Sps | Elitism::RankOnly => {
                let mut pool = offspring;
                pool.extend(members.iter().filter(|m| m.rank == 1).cloned());
                pool
            }
        };
        let pooled = run.assess(&mut pool)?;
        members = match cfg.elitism {
            Elitism::Sps => sps_truncate(
                pool,
                n,
                &pooled.points,
                pooled.sharing.sigma,
                cfg.alpha,
                &mut run.rng,
            ),
            Elitism::RankOnly => {
                let mut order: Vec<usize> = (0..pool.len()).collect();
                order.sort_by_key(|&i| (pool[i].rank, i));
                order.truncate(n);
                order.sort_unstable();
                let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
                order.iter().map(|&i| slots[i].take().unwrap()).collect()
            }
            Elitism::None => pool,
        };
        debug_assert_eq!(members.len(), n);
        assessment = run.assess(&mut members)?;
        traces.push(Run::<P>::trace(generation, &members, &assessment));
    }

    Ok(RunArtifact {
        problem: problem.name().to_string(),
        seed: cfg.seed,
        population: Population::new(members)?,
        traces,
        neval: run.neval,
    })
}
