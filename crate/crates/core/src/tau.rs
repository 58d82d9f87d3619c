//! The τ invariant of the closure of the Abel image: the binomial product
//! Π_{v∈|l′|_*} C(t_v, (l′, E_v)) with t_v = (−Z_K + Z, E_v).

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::abel::{self, AbelQuery};
use crate::config::SearchConfig;
use crate::cycle::IntegralCycle;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TauMode {
    /// Generic structure with Z = C_min(Z, l′): τ equals the product.
    Equality,
    /// Any structure, Z = C_min asserted by the caller: τ is below the product.
    StrictUpperBound,
    /// Z ≠ C_min(Z, l′): the formula says nothing.
    Undefined,
}

/// Attached to equality-mode reports: the accompanying base-point statement
/// about O_Z(K+Z) concerns analytic sections and is not checked here.
pub const BASE_POINT_NOTE: &str =
    "unverified: for the generic structure O_Z(K+Z) has no base points on |Z| (statement about analytic sections, not checked combinatorially)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    /// Vertices covered by this report, in vertex order.
    pub vertices: Vec<usize>,
    pub t: Vec<i64>,
    pub a: Vec<i64>,
    pub tau_value: Option<BigUint>,
    pub mode: TauMode,
    /// h¹(O_Z) − 1, the claimed dimension of the dual variety (equality mode).
    pub dual_dim_claim: Option<i64>,
    pub certificate: Option<&'static str>,
    /// Set when Z = C_min was asserted rather than computed.
    pub cmin_asserted: bool,
    pub per_component: Vec<TauReport>,
}

/// t_v = (−Z_K + Z, E_v) = −(E_v² + 2) + (Z, E_v).
pub fn t_vector(lat: &Lattice, z: &IntegralCycle) -> Result<Vec<i64>> {
    lat.check_cycle(z)?;
    (0..lat.n())
        .map(|v| {
            let t = lat.degree_at(z, v) - lat.canonical_degrees()[v] as i128;
            i64::try_from(t).map_err(|_| Error::Overflow("t_v"))
        })
        .collect()
}

/// C(n, k) for n, k ≥ 0, zero when n < k.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Π over v in `vertices` with a_v > 0 of C(t_v, a_v); T_NEGATIVE when some
/// such t_v is negative.
fn product(lat: &Lattice, vertices: &[usize], t: &[i64], a: &[i64]) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for &v in vertices {
        if a[v] <= 0 {
            continue;
        }
        if t[v] < 0 {
            return Err(Error::TNegative {
                vertex: lat.graph().ids()[v].clone(),
                t: t[v],
            });
        }
        acc *= binomial(t[v] as u64, a[v] as u64);
    }
    Ok(acc)
}

fn report(
    lat: &Lattice,
    q: &AbelQuery,
    mode: TauMode,
    dual_dim_claim: Option<i64>,
    cmin_asserted: bool,
) -> Result<TauReport> {
    let z = q.z();
    let t = t_vector(lat, z)?;
    let a = q.a().to_vec();
    let all: Vec<usize> = (0..lat.n()).collect();
    let whole = product(lat, &all, &t, &a)?;
    let mask: Vec<bool> = z.coeffs().iter().map(|&c| c != 0).collect();
    let mut per_component = Vec::new();
    let mut factored = BigUint::one();
    for comp in lat.components(&mask) {
        let value = product(lat, &comp, &t, &a)?;
        factored *= &value;
        per_component.push(TauReport {
            t: comp.iter().map(|&v| t[v]).collect(),
            a: comp.iter().map(|&v| a[v]).collect(),
            vertices: comp,
            tau_value: Some(value),
            mode,
            dual_dim_claim: None,
            certificate: None,
            cmin_asserted,
            per_component: Vec::new(),
        });
    }
    if factored != whole {
        return Err(Error::Internal(format!(
            "component product {factored} differs from the whole product {whole}"
        )));
    }
    Ok(TauReport {
        vertices: all,
        t,
        a,
        tau_value: Some(whole),
        mode,
        certificate: (mode == TauMode::Equality).then_some(BASE_POINT_NOTE),
        dual_dim_claim,
        cmin_asserted,
        per_component,
    })
}

/// Equality mode for the generic structure; CMIN_VIOLATION unless Z = C_min(Z, l′).
pub fn tau_generic(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<TauReport> {
    let c = abel::d_z(lat, q, cfg)?;
    if !c.z_equals_cmin {
        let spec = c.cmin.to_spec(lat.graph());
        return Err(Error::CminViolation {
            cmin: if spec.is_empty() { "0".into() } else { spec },
        });
    }
    report(lat, q, TauMode::Equality, Some(c.h1_oz as i64 - 1), false)
}

/// The strict upper bound for an arbitrary structure; Z = C_min is taken
/// as asserted by the caller.
pub fn tau_upper_bound(lat: &Lattice, q: &AbelQuery) -> Result<TauReport> {
    report(lat, q, TauMode::StrictUpperBound, None, true)
}

/// Equality mode when Z = C_min, otherwise an UNDEFINED report carrying t
/// and a but no value.
pub fn tau_classify(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<TauReport> {
    match tau_generic(lat, q, cfg) {
        Err(Error::CminViolation { .. }) => Ok(TauReport {
            vertices: (0..lat.n()).collect(),
            t: t_vector(lat, q.z())?,
            a: q.a().to_vec(),
            tau_value: None,
            mode: TauMode::Undefined,
            dual_dim_claim: None,
            certificate: None,
            cmin_asserted: false,
            per_component: Vec::new(),
        }),
        other => other,
    }
}

/// cl = μ + τ.
pub fn class_relation(tau: &BigUint, mu: u64) -> BigUint {
    tau + BigUint::from(mu)
}
