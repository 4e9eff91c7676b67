//! Configurations shipped with the binary.

pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: &'static str,
}

macro_rules! demo {
    ($name:literal, $summary:literal) => {
        Demo {
            name: $name,
            summary: $summary,
            config: include_str!(concat!("../configs/", $name, ".conf")),
        }
    };
}

pub const DEMOS: &[Demo] = &[
    demo!("fon_dynamic_sharing", "FON trade-off with dynamic sharing"),
    demo!("fon_no_sharing", "FON trade-off without sharing"),
    demo!(
        "fon_no_elitism",
        "FON trade-off without the preserved strategy"
    ),
    demo!("fon_extreme_goal", "feasible but extreme goal (0.98, 0.2)"),
    demo!("fon_infeasible_goal", "infeasible goal (0.7, 0.4)"),
    demo!(
        "fon_soft_priority",
        "infeasible goal, f1 with soft priority over f2"
    ),
    demo!(
        "fon_hard_priority",
        "infeasible goal, f1 with hard priority over f2"
    ),
    demo!("fon_hard_constraint", "hard constraint on f1"),
    demo!("fon_or_goals", "four goal regions joined by OR"),
    demo!("fon_and_goals", "three goals joined by AND"),
    demo!("debdisc", "discontinuous benchmark, 30 runs"),
    demo!("servo", "two-degree-of-freedom servo controller design"),
];

pub fn find(name: &str) -> Option<&'static Demo> {
    DEMOS.iter().find(|d| d.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::problems::Registry;

    #[test]
    fn every_demo_parses() {
        let reg = Registry::default();
        for d in DEMOS {
            let c = parse_config(d.config, &reg).unwrap_or_else(|e| panic!("{}: {e}", d.name));
            assert!(!c.seeds.is_empty(), "{}", d.name);
        }
        assert!(find("servo").is_some());
        assert!(find("nope").is_none());
    }
}
