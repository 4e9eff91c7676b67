use moea_core::{
    evolve, fon_front_distance, parse_spec, rank_with_spec, BenchmarkProblem, EngineConfig,
    GoalDomination, ObjectiveVector, SpecTree,
};
use proptest::prelude::*;

fn small(seed: u64, generations: usize) -> EngineConfig {
    EngineConfig {
        population_size: 40,
        generations,
        seed,
        ..Default::default()
    }
}

#[test]
fn same_seed_same_run() {
    let fon = BenchmarkProblem::fon();
    let spec = parse_spec("goal=[0.7,0.4]", 2).unwrap();
    let a = evolve(&fon, &spec, &small(3, 15)).unwrap();
    let b = evolve(&fon, &spec, &small(3, 15)).unwrap();
    assert_eq!(a, b);
    let c = evolve(&fon, &spec, &small(4, 15)).unwrap();
    assert_ne!(a.population, c.population);
}

#[test]
fn comparisons_stay_within_bound() {
    let fon = BenchmarkProblem::fon();
    for text in ["", "goal=[0.7,0.4]", "goal=[0.98,0.2]"] {
        let run = evolve(&fon, &parse_spec(text, 2).unwrap(), &small(1, 20)).unwrap();
        for t in &run.traces {
            let n = t.ranked as u64;
            let (a, b) = t.groups[0];
            let (a, b) = (a as u64, b as u64);
            assert_eq!(a + b, n);
            assert_eq!(
                t.comparisons,
                a * a.saturating_sub(1) + b * b.saturating_sub(1)
            );
            assert!(t.comparisons <= n * (n - 1));
        }
    }
}

#[test]
fn evaluations_are_counted() {
    let fon = BenchmarkProblem::fon();
    let run = evolve(&fon, &SpecTree::pareto(2), &small(0, 10)).unwrap();
    assert_eq!(run.neval, 40 * 11);
    assert_eq!(fon.evaluations(), run.neval);
    assert_eq!(run.traces.len(), 11);
}

#[test]
fn fronts_approach_the_trade_off() {
    let fon = BenchmarkProblem::fon();
    let cfg = EngineConfig::default();
    let run = evolve(&fon, &SpecTree::pareto(2), &cfg).unwrap();
    let front = run.front();
    let near = front
        .iter()
        .filter(|m| fon_front_distance(&m.objective) < 0.05)
        .count();
    assert!(near * 10 >= front.len() * 8, "{near} of {}", front.len());
}

#[test]
fn hard_constraint_holds_on_final_front() {
    let fon = BenchmarkProblem::fon();
    let spec = parse_spec("goal=[0.5,1.0]; hard=[hard,soft]", 2).unwrap();
    let run = evolve(&fon, &spec, &small(5, 40)).unwrap();
    assert!(run.front().iter().all(|m| m.objective[0] <= 0.5));
}

#[test]
fn debdisc_tail_goes_to_zero() {
    let deb = BenchmarkProblem::debdisc();
    let run = evolve(&deb, &SpecTree::pareto(2), &small(0, 60)).unwrap();
    let tail: f64 = run
        .front()
        .iter()
        .map(|m| m.decision[1..].iter().sum::<f64>() / 9.0)
        .sum::<f64>()
        / run.front().len() as f64;
    assert!(tail < 0.1, "{tail}");
}

fn population() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| [a, b]), 2..15)
}

proptest! {
    #[test]
    fn satisfied_hard_component_is_irrelevant(
        pop in population(),
        which in any::<prop::sample::Index>(),
        shrink in 0.0..1.0f64,
    ) {
        let spec = parse_spec("goal=[0.5,0.6]; hard=[hard,soft]", 2).unwrap();
        let objs: Vec<ObjectiveVector> = pop.iter().map(|p| ObjectiveVector::new(p.to_vec()).unwrap()).collect();
        let before = rank_with_spec(&objs, &spec, GoalDomination::ViolationSet).unwrap();
        let i = which.index(pop.len());
        if pop[i][0] > 0.5 {
            return Ok(());
        }
        let mut moved = objs.clone();
        moved[i] = ObjectiveVector::new(vec![pop[i][0] * shrink, pop[i][1]]).unwrap();
        let after = rank_with_spec(&moved, &spec, GoalDomination::ViolationSet).unwrap();
        prop_assert_eq!(before.ranks, after.ranks);
    }

    #[test]
    fn and_rank_is_at_least_or_rank(pop in population()) {
        let leaves = "goal=[0.3,0.8], goal=[0.6,0.5], goal=[0.8,0.2]";
        let and = parse_spec(&format!("and({leaves})"), 2).unwrap();
        let or = parse_spec(&format!("or({leaves})"), 2).unwrap();
        let objs: Vec<ObjectiveVector> = pop.iter().map(|p| ObjectiveVector::new(p.to_vec()).unwrap()).collect();
        let a = rank_with_spec(&objs, &and, GoalDomination::ViolationSet).unwrap();
        let o = rank_with_spec(&objs, &or, GoalDomination::ViolationSet).unwrap();
        for k in 0..objs.len() {
            prop_assert!(a.combined.ranks[k] >= o.combined.ranks[k]);
            let leaf: Vec<usize> = a.leaves.iter().map(|l| l.ranks[k]).collect();
            prop_assert_eq!(a.combined.ranks[k], *leaf.iter().max().unwrap());
            prop_assert_eq!(o.combined.ranks[k], *leaf.iter().min().unwrap());
        }
    }
}
