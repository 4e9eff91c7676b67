use std::collections::BTreeMap;

use moea_core::{BenchmarkProblem, Problem, ServoProblem};

pub type BoxedProblem = Box<dyn Problem + Send>;
type Factory = Box<dyn Fn() -> BoxedProblem + Send + Sync>;

/// Problems a config may name, keyed by upper-case name. Each run gets a
/// fresh instance.
pub struct Registry {
    factories: BTreeMap<String, (usize, Factory)>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("FON", 2, || Box::new(BenchmarkProblem::fon()));
        r.register("DEBDISC", 2, || Box::new(BenchmarkProblem::debdisc()));
        r.register("SERVO", 6, || Box::new(ServoProblem::default()));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &str, objectives: usize, factory: F)
    where
        F: Fn() -> BoxedProblem + Send + Sync + 'static,
    {
        self.factories
            .insert(name.to_ascii_uppercase(), (objectives, Box::new(factory)));
    }

    pub fn objectives(&self, name: &str) -> Option<usize> {
        self.factories.get(&name.to_ascii_uppercase()).map(|f| f.0)
    }

    pub fn create(&self, name: &str) -> Option<BoxedProblem> {
        self.factories
            .get(&name.to_ascii_uppercase())
            .map(|f| (f.1)())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
