use moea_bench::{arc_front, random_objectives};
use moea_core::{estimate_diameter, rank_two_stage};

#[test]
fn arc_front_is_mutually_non_dominated() {
    let front = arc_front(50);
    let objs: Vec<_> = front
        .iter()
        .map(|f| moea_core::ObjectiveVector::new(f.clone()).unwrap())
        .collect();
    let ranked = rank_two_stage(&objs, &[0.0, 0.0]).unwrap();
    assert!(ranked.ranks.iter().all(|&r| r == 1));
    let d = estimate_diameter(&front).unwrap();
    assert!(d.d_min > 0.0 && d.d_max >= d.d_min);
}

#[test]
fn random_inputs_have_the_requested_shape() {
    let objs = random_objectives(30, 4, 9);
    assert_eq!(objs.len(), 30);
    assert!(objs
        .iter()
        .all(|f| f.len() == 4 && f.iter().all(|v| (0.0..1.0).contains(v))));
}
