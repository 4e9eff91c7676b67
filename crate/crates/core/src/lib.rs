//! Multi-objective evolutionary optimization with goal, priority and
//! constraint preferences.
//!
//! Objectives are minimized. A [`SpecTree`] describes what the decision maker
//! wants: per-objective goals, soft or hard priorities, hard constraints, and
//! AND/OR combinations of several such specifications. [`rank_with_spec`]
//! turns a set of objective vectors into ranks under that tree, and
//! [`evolve`] runs the full algorithm on a [`Problem`].
//!
//! ```
//! use moea_core::{evolve, BenchmarkProblem, EngineConfig, SpecTree};
//!
//! let cfg = EngineConfig { population_size: 20, generations: 5, seed: 1, ..Default::default() };
//! let run = evolve(&BenchmarkProblem::fon(), &SpecTree::pareto(2), &cfg).unwrap();
//! assert_eq!(run.population.len(), 20);
//! assert!(run.front().iter().all(|m| m.rank == 1));
//! ```

pub mod benchmarks;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod preference;
pub mod ranking;
pub mod servo;
pub mod sharing;
pub mod types;

pub use benchmarks::{eval_deb, eval_fon, fon_front_distance, BenchmarkKind, BenchmarkProblem};
pub use engine::{
    evolve, evolve_from, Chromosome, Elitism, EngineConfig, GenerationTrace, Problem, RunArtifact,
};
pub use error::{Error, Result};
pub use metrics::{ssc, ud, MetricReport};
pub use preference::{
    parse_spec, Connective, GoalSequenceMatrix, GoalSpec, Hardness, LeafSpec, PriorityVectors,
    SpecTree,
};
pub use ranking::{
    combine_ranks, goal_dominates, pareto_dominates, rank_goal_sequence, rank_two_stage,
    rank_with_spec, GoalDomination, RankResult, SpecRanking,
};
pub use servo::{ServoGoals, ServoObjectives, ServoProblem};
pub use sharing::{dynamic_sigma, estimate_diameter, niche_counts, SharingMode, SharingState};
pub use types::{
    DecisionVector, Individual, ObjectiveExtremes, ObjectiveVector, ParameterSpace, Population,
};
