//! Strategies shared by the property tests.

#![allow(dead_code)]

use proptest::prelude::*;
use singlat_core::corpus::{random_valid_graphs, CorpusSpec};
use singlat_core::{IntegralCycle, Lattice, ResolutionGraph, SearchConfig};

pub fn cfg() -> SearchConfig {
    SearchConfig::default()
}

/// A valid random graph (≤ 6 vertices, Euler numbers in [−5, −1]).
pub fn graph() -> impl Strategy<Value = ResolutionGraph> {
    any::<u64>().prop_map(|seed| random_valid_graphs(seed, 1, &CorpusSpec::default()).remove(0))
}

pub fn lattice() -> impl Strategy<Value = Lattice> {
    graph().prop_map(|g| Lattice::new(&g).unwrap())
}

/// A lattice together with `k` integral cycles with coefficients in `range`.
pub fn lattice_with_cycles(
    k: usize,
    range: std::ops::RangeInclusive<i64>,
) -> impl Strategy<Value = (Lattice, Vec<IntegralCycle>)> {
    lattice().prop_flat_map(move |lat| {
        let n = lat.n();
        let cycles = proptest::collection::vec(
            proptest::collection::vec(range.clone(), n).prop_map(IntegralCycle::new),
            k,
        );
        (Just(lat), cycles)
    })
}

/// A lattice, an effective nonzero Z ≤ 2·Z_min-ish, and E*-coefficients
/// (in 0..=2) supported on |Z|.
pub fn abel_input() -> impl Strategy<Value = (Lattice, IntegralCycle, Vec<i64>)> {
    lattice().prop_flat_map(|lat| {
        let n = lat.n();
        let z = proptest::collection::vec(0i64..=2, n);
        let a = proptest::collection::vec(0i64..=2, n);
        (Just(lat), z, a).prop_map(|(lat, mut z, mut a)| {
            if z.iter().all(|&c| c == 0) {
                z[0] = 1;
            }
            for (av, &zv) in a.iter_mut().zip(&z) {
                if zv == 0 {
                    *av = 0;
                }
            }
            (lat, IntegralCycle::new(z), a)
        })
    })
}

/// Non-rational graphs used where the corpus has too few of them.
pub fn nonrational_graphs() -> Vec<ResolutionGraph> {
    vec![
        // −2 center with four −3 legs: pg = 1
        ResolutionGraph::star(-2, &[&[-3], &[-3], &[-3], &[-3]]),
        // −1 center with legs −3, −3, −4: not minimal but negative definite
        ResolutionGraph::star(-1, &[&[-3], &[-3], &[-4]]),
        // −2 center, four −2 legs with a −3 tip: elliptic
        ResolutionGraph::star(-2, &[&[-2], &[-2], &[-2], &[-3]]),
        // −1 center with −2 / −3 / −7 legs: minimally elliptic
        ResolutionGraph::star(-1, &[&[-2], &[-3], &[-7]]),
    ]
}
