//! Seeded random resolution graphs for property tests and oracle sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{self, ResolutionGraph};

/// Shape of the random graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_vertices: usize,
    pub min_euler: i64,
    pub max_euler: i64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_vertices: 6,
            min_euler: -5,
            max_euler: -1,
        }
    }
}

/// A random tree (each vertex attached to a uniformly chosen earlier one)
/// with uniform Euler numbers; not necessarily negative definite.
pub fn random_tree(rng: &mut impl Rng, n: usize, spec: &CorpusSpec) -> ResolutionGraph {
    let euler: Vec<i64> = (0..n).map(|_| rng.gen_range(spec.min_euler..=spec.max_euler)).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    ResolutionGraph::from_indexed(&euler, &edges).expect("generated ids are distinct")
}

/// `count` valid graphs drawn deterministically from `seed`, rejecting
/// graphs that fail validation.
pub fn random_valid_graphs(seed: u64, count: usize, spec: &CorpusSpec) -> Vec<ResolutionGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=spec.max_vertices);
        let g = random_tree(&mut rng, n, spec);
        if graph::validate(&g).ok {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let spec = CorpusSpec::default();
        let a = random_valid_graphs(7, 30, &spec);
        let b = random_valid_graphs(7, 30, &spec);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| graph::validate(g).ok && g.len() <= 6));
    }
}
