mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use singlat_core::abel::AbelQuery;
use singlat_core::tau::{self, TauMode};
use singlat_core::{generic, Error, IntegralCycle, Lattice, ResolutionGraph};

use common::{abel_input, cfg};

/// C(n, k) from Pascal's triangle, independent of the product formula.
fn pascal(n: u64, k: u64) -> BigUint {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(1u32); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn binomial_recurrence(n in 0u64..60, k in 0u64..60) {
        prop_assert_eq!(tau::binomial(n, k), pascal(n, k));
        if k < n {
            prop_assert_eq!(tau::binomial(n, k + 1) * (k + 1), tau::binomial(n, k) * (n - k));
        }
        if k >= 1 && n >= 1 {
            prop_assert_eq!(tau::binomial(n, k), tau::binomial(n - 1, k - 1) + tau::binomial(n - 1, k));
        }
    }

    #[test]
    fn bound_factors_over_components((lat, z, a) in abel_input()) {
        let q = AbelQuery::from_estar(&lat, z.clone(), &a).unwrap();
        match tau::tau_upper_bound(&lat, &q) {
            Ok(r) => {
                let product = r.per_component.iter().fold(BigUint::from(1u32), |acc, c| acc * c.tau_value.clone().unwrap());
                prop_assert_eq!(Some(product), r.tau_value.clone());
                let direct = (0..lat.n())
                    .filter(|&v| a[v] > 0)
                    .fold(BigUint::from(1u32), |acc, v| acc * pascal(r.t[v] as u64, a[v] as u64));
                prop_assert_eq!(Some(direct), r.tau_value);
                prop_assert!(r.cmin_asserted);
            }
            Err(Error::TNegative { .. }) => {
                let t = tau::t_vector(&lat, &z).unwrap();
                prop_assert!((0..lat.n()).any(|v| a[v] > 0 && t[v] < 0));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn generic_and_bound_agree_when_defined((lat, z, a) in abel_input()) {
        let q = AbelQuery::from_estar(&lat, z, &a).unwrap();
        let classified = tau::tau_classify(&lat, &q, &cfg()).unwrap_or_else(|e| panic!("{e}"));
        if classified.mode == TauMode::Equality {
            prop_assert_eq!(classified.tau_value, tau::tau_upper_bound(&lat, &q).unwrap().tau_value);
        } else {
            prop_assert_eq!(classified.mode, TauMode::Undefined);
        }
    }

    #[test]
    fn rational_graphs_reject_equality((lat, z, a) in abel_input()) {
        prop_assume!(a.iter().any(|&x| x > 0));
        prop_assume!(generic::is_rational_graph(&lat, &cfg()).unwrap());
        let q = AbelQuery::from_estar(&lat, z, &a).unwrap();
        let err = tau::tau_generic(&lat, &q, &cfg()).unwrap_err();
        prop_assert_eq!(err.code(), "CMIN_VIOLATION");
    }
}

#[test]
fn empty_support_gives_one() {
    for g in [ResolutionGraph::a_n(3), ResolutionGraph::e_n(6), ResolutionGraph::star(-3, &[&[-2], &[-2], &[-2]])] {
        let lat = Lattice::new(&g).unwrap();
        let z = singlat_core::search::laufer_zmin(&lat);
        let q = AbelQuery::from_estar(&lat, z, &vec![0; lat.n()]).unwrap();
        let r = tau::tau_upper_bound(&lat, &q).unwrap();
        assert_eq!(r.tau_value, Some(BigUint::from(1u32)));
    }
}

#[test]
fn disconnected_support_splits() {
    // Z on the two ends of A5 has two components
    let lat = Lattice::new(&ResolutionGraph::a_n(5)).unwrap();
    let z = IntegralCycle::new(vec![1, 3, 0, 3, 2]);
    let t = tau::t_vector(&lat, &z).unwrap();
    assert_eq!(t, vec![1, -5, 6, -4, -1]);
    let q = AbelQuery::from_estar(&lat, z.clone(), &[1, 0, 0, 0, 0]).unwrap();
    let r = tau::tau_upper_bound(&lat, &q).unwrap();
    assert_eq!(r.per_component.len(), 2);
    assert_eq!(r.per_component[0].vertices, vec![0, 1]);
    assert_eq!(r.tau_value, Some(BigUint::from(1u32)));
    let q = AbelQuery::from_estar(&lat, z, &[1, 0, 0, 0, 1]).unwrap();
    assert_eq!(tau::tau_upper_bound(&lat, &q).unwrap_err().code(), "T_NEGATIVE");
}

#[test]
fn equality_example_on_pg_two_graph() {
    let g = singlat_core::graph::parse_graph(
        r#"{"vertices":[{"id":"v0","euler":-2},{"id":"v1","euler":-2},{"id":"v2","euler":-2},
            {"id":"v3","euler":-2},{"id":"v4","euler":-2},{"id":"v5","euler":-3},{"id":"v6","euler":-4}],
            "edges":[["v0","v1"],["v0","v2"],["v1","v3"],["v3","v4"],["v1","v5"],["v1","v6"]]}"#,
    )
    .unwrap();
    let lat = Lattice::new(&g).unwrap();
    let z = IntegralCycle::new(vec![2, 3, 1, 2, 1, 1, 1]);
    let mut a = vec![0; 7];
    a[5] = 1;
    let q = AbelQuery::from_estar(&lat, z.clone(), &a).unwrap();
    let r = tau::tau_generic(&lat, &q, &cfg()).unwrap();
    let t = tau::t_vector(&lat, &z).unwrap();
    assert_eq!(r.mode, TauMode::Equality);
    assert_eq!(r.tau_value, Some(pascal(t[5] as u64, 1)));
    assert_eq!(r.dual_dim_claim, Some(generic::h1_oz(&lat, &z, &cfg()).unwrap() as i64 - 1));
    assert!(r.certificate.is_some());
}
