//! Exact JSON encodings. Integers that fit in i64 are JSON numbers, larger
//! ones are decimal strings; rationals are `{"num", "den"}` objects.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use singlat_core::graph::{self, ResolutionGraph};
use singlat_core::{ChernClass, Error, IntegralCycle, Lattice, RationalCycle};

pub fn bigint(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn biguint(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rational(x: &BigRational) -> Value {
    json!({ "num": bigint(x.numer()), "den": bigint(x.denom()) })
}

fn by_vertex<T>(g: &ResolutionGraph, values: impl IntoIterator<Item = T>, f: impl Fn(T) -> Value) -> Value {
    let mut m = Map::new();
    for (id, v) in g.ids().iter().zip(values) {
        m.insert(id.clone(), f(v));
    }
    Value::Object(m)
}

/// Integers keyed by vertex id, in vertex order.
pub fn vertex_ints(g: &ResolutionGraph, values: &[i64]) -> Value {
    by_vertex(g, values, |&v| json!(v))
}

/// A list of vertex ids.
pub fn vertex_ids(g: &ResolutionGraph, vs: &[usize]) -> Value {
    json!(vs.iter().map(|&v| g.ids()[v].clone()).collect::<Vec<_>>())
}

/// An integral cycle in E-coordinates and in E*-coordinates
/// (x = −Σ a_v E*_v with a_v = (x, E_v)).
pub fn cycle(lat: &Lattice, x: &IntegralCycle) -> Value {
    let g = lat.graph();
    let a: Vec<i64> = (0..lat.n()).map(|v| lat.degree_at(x, v) as i64).collect();
    json!({ "e": vertex_ints(g, x.coeffs()), "estar": vertex_ints(g, &a) })
}

/// A rational cycle in E-coordinates (exact rationals).
pub fn rational_cycle(g: &ResolutionGraph, x: &RationalCycle) -> Value {
    by_vertex(g, x.coeffs(), rational)
}

pub fn chern(lat: &Lattice, c: &ChernClass) -> Value {
    let g = lat.graph();
    json!({
        "e": rational_cycle(g, c.as_rational()),
        "estar": vertex_ints(g, c.degrees()),
        "in_minus_lipman_cone": c.is_anti_lipman(),
        "positive_support": vertex_ids(g, &c.positive_support()),
    })
}

pub fn cycles(lat: &Lattice, xs: &[IntegralCycle]) -> Value {
    Value::Array(xs.iter().map(|x| cycle(lat, x)).collect())
}

/// sha256 of the canonical graph serialization, hex encoded.
pub fn graph_digest(g: &ResolutionGraph) -> String {
    let digest = Sha256::digest(graph::serialize_graph(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn error(e: &Error) -> Value {
    let mut body = json!({ "code": e.code(), "message": e.to_string() });
    if let Error::InvalidGraph(report) = e {
        body["failures"] = json!(report.failure_codes());
    }
    json!({ "error": body })
}
