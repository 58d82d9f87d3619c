mod common;

use proptest::prelude::*;
use singlat_core::search::{self, boxscan::BoxShape};
use singlat_core::{generic, IntegralCycle, Lattice, RationalCycle};

use common::{abel_input, cfg, lattice, nonrational_graphs};

/// χ(l′) − min_{0≤l≤Z} χ(l′+l) by direct evaluation.
fn natural_by_scan(lat: &Lattice, z: &IntegralCycle, lprime: &IntegralCycle) -> i128 {
    let shape = BoxShape::new(&vec![0; lat.n()], z.coeffs(), u64::MAX).unwrap();
    let base = lat.chi_integral(lprime);
    let min = (0..shape.size())
        .map(|i| lat.chi_integral(&(lprime + &IntegralCycle::new(shape.point(i)))))
        .min()
        .unwrap();
    base - min
}

fn check_pg_consistency(lat: &Lattice) -> Result<(), TestCaseError> {
    let pg = generic::pg(lat, &cfg()).unwrap();
    let n_bound = generic::pg_stabilization_bound(lat, &cfg()).unwrap();
    let zmin = search::laufer_zmin(lat);
    prop_assert_eq!(generic::h1_oz(lat, &zmin.scale(n_bound as i64), &cfg()).unwrap(), pg.pg);
    let mut prev = 0;
    for k in 1..=n_bound {
        let h = generic::h1_oz(lat, &zmin.scale(k as i64), &cfg()).unwrap();
        prop_assert!(prev <= h && h <= pg.pg);
        prev = h;
    }
    let xt = generic::h1_xtilde_natural(lat, &RationalCycle::zero(lat.n()), &cfg()).unwrap();
    prop_assert_eq!(xt, pg.pg);
    prop_assert_eq!(pg.rational, pg.pg == 0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pg_stabilizes_along_multiples_of_zmin(lat in lattice()) {
        check_pg_consistency(&lat)?;
    }

    #[test]
    fn natural_h1_matches_scan((lat, z, a) in abel_input()) {
        // l′ = Z + a is positive on |Z|
        let lprime = &z + &IntegralCycle::new(a);
        let h = generic::h1_natural(&lat, &z, &lprime.to_rational(), &cfg()).unwrap();
        prop_assert_eq!(h as i128, natural_by_scan(&lat, &z, &lprime));
    }

    #[test]
    fn semigroup_element_above((lat, z, _a) in abel_input()) {
        let s = search::minimal_semigroup_element_above(&lat, &z, &cfg()).unwrap();
        prop_assert!(z.le(&s));
        prop_assert!(generic::is_in_san(&lat, &s.to_rational(), &cfg()).unwrap());
        prop_assert!(lat.in_lipman_cone_integral(&s));
    }

    #[test]
    fn hfrak_is_monotone((lat, z, a) in abel_input()) {
        let smaller = IntegralCycle::new(z.coeffs().iter().zip(&a).map(|(&x, &y)| x.min(y)).collect());
        let (hs, hz) = (generic::hfrak(&lat, &smaller, &cfg()).unwrap(), generic::hfrak(&lat, &z, &cfg()).unwrap());
        prop_assert!(hs <= hz);
    }
}

#[test]
fn handpicked_nonrational_consistency() {
    for g in nonrational_graphs() {
        let lat = Lattice::new(&g).unwrap();
        check_pg_consistency(&lat).unwrap();
        let m = generic::maximal_ideal_cycle(&lat, &cfg()).unwrap();
        let min_pos = generic::min_chi_positive(&lat, &cfg()).unwrap();
        assert!(min_pos.minimizers.contains(&m));
        assert!(min_pos.minimizers.iter().all(|x| x.le(&m)));
        assert!(generic::is_in_san(&lat, &RationalCycle::zero(lat.n()), &cfg()).unwrap());
    }
}

#[test]
fn rational_graphs_have_no_maximal_ideal_cycle() {
    let lat = Lattice::new(&singlat_core::ResolutionGraph::e_n(8)).unwrap();
    assert_eq!(generic::maximal_ideal_cycle(&lat, &cfg()).unwrap_err().code(), "RATIONAL_GRAPH");
    let zero = IntegralCycle::zero(8);
    assert_eq!(search::minimal_semigroup_element_above(&lat, &zero, &cfg()).unwrap(), zero);
}
