//! Report assembly: the invariant bundle, Abel and τ sections, and the
//! formula-versus-oracle verification suite.

use serde_json::{json, Map, Value};

use singlat_core::abel::{self, AbelQuery, H1Provider};
use singlat_core::generic;
use singlat_core::oracle;
use singlat_core::search::{self, boxscan::BoxTable, objective::Objective, MinimizationResult, Region};
use singlat_core::tau::{self, TauMode, TauReport};
use singlat_core::{ChernClass, Error, IntegralCycle, Lattice, RationalCycle, Result, SearchConfig};

use crate::encode;

pub const FORMULA: &str = "FORMULA";
pub const ORACLE: &str = "ORACLE";
pub const BOTH_AGREE: &str = "BOTH_AGREE";

/// Runs `oracle` and compares with `formula`: BOTH_AGREE on equality,
/// FORMULA when the oracle does not fit the budget, INTERNAL on mismatch.
fn cross_check<T: PartialEq + std::fmt::Debug>(
    what: &str,
    formula: &T,
    oracle: impl FnOnce() -> Result<T>,
) -> Result<&'static str> {
    match oracle() {
        Ok(o) if &o == formula => Ok(BOTH_AGREE),
        Ok(o) => Err(Error::Internal(format!("{what}: formula {formula:?} but oracle {o:?}"))),
        Err(Error::RegionTooLarge { .. }) => Ok(FORMULA),
        Err(e) => Err(e),
    }
}

pub fn lattice_section(lat: &Lattice) -> Value {
    let g = lat.graph();
    let mut estar = Map::new();
    for (id, e) in g.ids().iter().zip(lat.dual_basis()) {
        estar.insert(id.clone(), encode::rational_cycle(g, e));
    }
    json!({
        "det": encode::bigint(lat.det()),
        "zk": encode::rational_cycle(g, lat.canonical_cycle()),
        "canonical_degrees": encode::vertex_ints(g, lat.canonical_degrees()),
        "estar": estar,
    })
}

pub fn minimization(lat: &Lattice, r: &MinimizationResult) -> Value {
    let region = match &r.region {
        Region::Box { lower, upper } => json!({
            "kind": r.region.name(),
            "lower": encode::cycle(lat, lower),
            "upper": encode::cycle(lat, upper),
        }),
        other => json!({ "kind": other.name() }),
    };
    json!({
        "region": region,
        "min_value": encode::rational(&r.min_value),
        "minimizers": encode::cycles(lat, &r.minimizers),
        "certified": r.certified,
    })
}

/// Z_min by Laufer's iteration, with the cone-enumeration provenance tag.
pub fn zmin_with_provenance(lat: &Lattice, cfg: &SearchConfig) -> Result<(IntegralCycle, &'static str)> {
    let z = search::laufer_zmin(lat);
    let tag = cross_check("Z_min", &z, || oracle::zmin_by_cone_enumeration(lat, cfg))?;
    Ok((z, tag))
}

pub struct InvariantInputs {
    pub cycle: Option<IntegralCycle>,
    pub chern: Option<ChernClass>,
    /// l′ for h¹(Z, O_Z(−l′)), in E-coordinates.
    pub natural: Option<RationalCycle>,
}

pub fn invariants(lat: &Lattice, inputs: &InvariantInputs, cfg: &SearchConfig) -> Result<Value> {
    let g = lat.graph();
    let mut prov = Map::new();
    let (zmin, tag) = zmin_with_provenance(lat, cfg)?;
    prov.insert("zmin".into(), json!(tag));
    let pg = generic::pg(lat, cfg)?;
    prov.insert("pg".into(), json!(FORMULA));
    let max_ideal = if pg.rational {
        Value::Null
    } else {
        prov.insert("max_ideal_cycle".into(), json!(FORMULA));
        encode::cycle(lat, &generic::maximal_ideal_cycle(lat, cfg)?)
    };
    let mut gen = Map::new();
    gen.insert("rational".into(), json!(pg.rational));
    gen.insert("pg".into(), json!(pg.pg));
    gen.insert("min_chi_positive".into(), json!(pg.min_chi_positive));
    gen.insert("min_chi_all".into(), json!(pg.min_chi_all));
    gen.insert(
        "pg_stabilization_bound".into(),
        json!(generic::pg_stabilization_bound(lat, cfg)?),
    );
    if let Some(z) = &inputs.cycle {
        let h = generic::h1_oz(lat, z, cfg)?;
        let tag = cross_check("h1(O_Z)", &h, || oracle::h1_oz_by_scan(lat, z, cfg))?;
        prov.insert("h1_oz".into(), json!(tag));
        gen.insert("h1_oz".into(), json!(h));
        gen.insert("hfrak".into(), json!(generic::hfrak(lat, &z.join(&IntegralCycle::zero(lat.n())), cfg)?));
        gen.insert(
            "minimal_semigroup_element_above".into(),
            encode::cycle(lat, &search::minimal_semigroup_element_above(lat, z, cfg)?),
        );
        if let Some(l) = &inputs.natural {
            gen.insert("h1_natural".into(), json!(generic::h1_natural(lat, z, l, cfg)?));
        }
    }
    if let Some(c) = &inputs.chern {
        gen.insert(
            "h1_xtilde_natural".into(),
            json!(generic::h1_xtilde_natural(lat, c.as_rational(), cfg)?),
        );
        gen.insert("is_in_san".into(), json!(generic::is_in_san(lat, c.as_rational(), cfg)?));
    }
    let mut out = Map::new();
    out.insert("command".into(), json!("invariants"));
    out.insert("graph_digest".into(), json!(encode::graph_digest(g)));
    out.insert(
        "inputs".into(),
        json!({
            "cycle": inputs.cycle.as_ref().map(|z| encode::cycle(lat, z)),
            "chern": inputs.chern.as_ref().map(|c| encode::chern(lat, c)),
            "natural": inputs.natural.as_ref().map(|l| encode::rational_cycle(g, l)),
        }),
    );
    out.insert("validation".into(), json!({ "ok": true, "failures": [] }));
    out.insert("lattice".into(), lattice_section(lat));
    out.insert(
        "cycles".into(),
        json!({ "zmin": encode::cycle(lat, &zmin), "max_ideal_cycle": max_ideal }),
    );
    out.insert("generic".into(), Value::Object(gen));
    if let (Some(z), Some(c)) = (&inputs.cycle, &inputs.chern) {
        let q = AbelQuery::new(lat, z.clone(), c.clone())?;
        out.insert("abel".into(), abel_section(lat, &q, None, cfg)?);
        out.insert("tau".into(), tau_section(lat, &tau::tau_classify(lat, &q, cfg)?, None));
        prov.insert("abel".into(), json!(FORMULA));
        prov.insert("tau".into(), json!(FORMULA));
    }
    out.insert("provenance".into(), Value::Object(prov));
    Ok(Value::Object(out))
}

/// Inputs for the relative dominance criterion in the Abel section.
pub struct Relative<'a> {
    pub z1: IntegralCycle,
    pub provider: &'a dyn H1Provider,
}

pub fn abel_section(lat: &Lattice, q: &AbelQuery, relative: Option<&Relative<'_>>, cfg: &SearchConfig) -> Result<Value> {
    let g = lat.graph();
    let dim = abel::dim_eca(q)?;
    let c = abel::d_z(lat, q, cfg)?;
    let support = q.chern().estar_support();
    let e_support = if support.is_empty() {
        Value::Null
    } else {
        json!(abel::e_z(lat, q.z(), &support, cfg)?)
    };
    let pic = abel::h1_generic_pic(lat, q, cfg)?;
    let image = abel::h1_generic_abel_image(lat, q, cfg)?;
    let dom = abel::is_dominant(lat, q, cfg)?;
    let mut out = json!({
        "dim_eca": dim,
        "d": c.d,
        "h1_oz": c.h1_oz,
        "cmin": encode::cycle(lat, &c.cmin),
        "cmax": encode::cycle(lat, &c.cmax),
        "z_equals_cmin": c.z_equals_cmin,
        "minimizer_count": c.minimizers.len(),
        "e_z_support": e_support,
        "support": encode::vertex_ids(g, &support),
        "h1_generic_pic": pic,
        "h1_generic_abel_image": image,
        "fiber_dim_generic_image": abel::fiber_dim(dim, image, c.h1_oz),
        "dominant": dom.dominant,
        "dominance_witness": dom.witness.as_ref().map(|w| encode::cycle(lat, w)),
    });
    if let Some(r) = relative {
        let d = abel::relative_dominance(lat, q, &r.z1, r.provider, cfg)?;
        let h = abel::h1_relative_generic(lat, q, &r.z1, r.provider, cfg)?;
        out["relative"] = json!({
            "provider": r.provider.name(),
            "z1": encode::cycle(lat, &r.z1),
            "dominant": d.dominant,
            "witness": d.witness.as_ref().map(|w| encode::cycle(lat, w)),
            "h1_relative_generic": h,
        });
    }
    Ok(out)
}

fn component_map(lat: &Lattice, vertices: &[usize], values: &[i64]) -> Value {
    let mut m = Map::new();
    for (&v, &x) in vertices.iter().zip(values) {
        m.insert(lat.graph().ids()[v].clone(), json!(x));
    }
    Value::Object(m)
}

pub fn tau_section(lat: &Lattice, r: &TauReport, mu: Option<u64>) -> Value {
    let mode = match r.mode {
        TauMode::Equality => "EQUALITY",
        TauMode::StrictUpperBound => "STRICT_UPPER_BOUND",
        TauMode::Undefined => "UNDEFINED",
    };
    let parts: Vec<Value> = r
        .per_component
        .iter()
        .map(|c| {
            json!({
                "vertices": encode::vertex_ids(lat.graph(), &c.vertices),
                "t": component_map(lat, &c.vertices, &c.t),
                "a": component_map(lat, &c.vertices, &c.a),
                "tau_value": c.tau_value.as_ref().map(encode::biguint),
            })
        })
        .collect();
    let mut out = json!({
        "mode": mode,
        "t": component_map(lat, &r.vertices, &r.t),
        "a": component_map(lat, &r.vertices, &r.a),
        "tau_value": r.tau_value.as_ref().map(encode::biguint),
        "dual_dim_claim": r.dual_dim_claim,
        "certificate": r.certificate,
        "cmin_asserted": r.cmin_asserted,
        "per_component": parts,
    });
    if let Some(mu) = mu {
        out["mu"] = json!(mu);
        out["cl"] = r
            .tau_value
            .as_ref()
            .map(|t| encode::biguint(&tau::class_relation(t, mu)))
            .unwrap_or(Value::Null);
    }
    out
}

/// Names of the verification checks, in run order.
pub const CHECKS: [&str; 5] = ["zmin", "minchi", "d_z", "tau", "dominance"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Agree,
    Disagree(String),
    RegionTooLarge,
    Error(String),
}

impl CheckStatus {
    pub fn code(&self) -> &'static str {
        match self {
            CheckStatus::Agree => "AGREE",
            CheckStatus::Disagree(_) => "DISAGREE",
            CheckStatus::RegionTooLarge => "REGION_TOO_LARGE",
            CheckStatus::Error(_) => "ERROR",
        }
    }
}

pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub notes: Vec<String>,
    pub status: CheckStatus,
}

/// Abel queries used by the checks: Z = Z_min with l′ = 0 and each −E*_v.
fn verify_queries(lat: &Lattice) -> Result<Vec<AbelQuery>> {
    let n = lat.n();
    let z = search::laufer_zmin(lat);
    let mut out = vec![AbelQuery::from_estar(lat, z.clone(), &vec![0; n])?];
    for v in 0..n {
        let mut a = vec![0; n];
        a[v] = 1;
        out.push(AbelQuery::from_estar(lat, z.clone(), &a)?);
    }
    Ok(out)
}

/// The box oracle over [lower, upper], optionally without the origin.
fn box_min(lat: &Lattice, lower: &[i64], upper: &[i64], exclude_zero: bool, cfg: &SearchConfig) -> Result<(i128, Vec<IntegralCycle>)> {
    let table = BoxTable::tabulate(&Objective::chi(lat), lower, upper, exclude_zero, cfg)?;
    let (v, pts) = table.minimum(cfg.mode).ok_or_else(|| Error::Internal("empty box".into()))?;
    Ok((v as i128, pts))
}

/// Number of cases run plus notes on anything skipped, or a failure.
type Check = std::result::Result<(usize, Vec<String>), CheckStatus>;

/// Largest box on which the d_Z check recomputes every h¹ independently.
pub const D_Z_SCAN_MAX: usize = 20_000;

fn disagree<T: std::fmt::Debug>(what: &str, a: T, b: T) -> CheckStatus {
    CheckStatus::Disagree(format!("{what}: formula {a:?}, oracle {b:?}"))
}

fn check_zmin(lat: &Lattice, cfg: &SearchConfig) -> Result<Check> {
    let f = search::laufer_zmin(lat);
    let o = oracle::zmin_by_cone_enumeration(lat, cfg)?;
    Ok(if f == o { Ok((1, vec![])) } else { Err(disagree("Z_min", f, o)) })
}

fn check_minchi(lat: &Lattice, cfg: &SearchConfig) -> Result<Check> {
    let n = lat.n();
    let zero = RationalCycle::zero(n);
    let mut cases = 0;
    for region in [Region::LGt0, Region::LGe0, Region::LAll] {
        let r = search::min_chi_global(lat, &zero, region.clone(), cfg)?;
        let lo = IntegralCycle::meet_all(&r.minimizers).expect("nonempty");
        let hi = IntegralCycle::join_all(&r.minimizers).expect("nonempty");
        let floor = if region == Region::LAll { i64::MIN } else { 0 };
        let lower: Vec<i64> = lo.coeffs().iter().map(|&c| (c - 1).max(floor)).collect();
        let upper: Vec<i64> = hi.coeffs().iter().map(|&c| c + 1).collect();
        let (v, pts) = box_min(lat, &lower, &upper, region == Region::LGt0, cfg)?;
        let formula = (r.min_value.to_integer(), r.minimizers);
        let oracle = (v.into(), pts);
        if formula != oracle {
            return Ok(Err(disagree(region.name(), formula, oracle)));
        }
        cases += 1;
    }
    Ok(Ok((cases, vec![])))
}

fn check_d_z(lat: &Lattice, cfg: &SearchConfig) -> Result<Check> {
    let mut cases = 0;
    let mut notes = Vec::new();
    for q in verify_queries(lat)? {
        let c = abel::d_z(lat, &q, cfg)?;
        let bound = abel::dim_eca(&q)?.min(c.h1_oz);
        if c.d > bound {
            return Ok(Err(CheckStatus::Disagree(format!("d_Z = {} exceeds {bound}", c.d))));
        }
        if !c.closure_checked {
            notes.push(format!("pairwise closure skipped for {} minimizers", c.minimizers.len()));
        }
        let size: usize = q.z().coeffs().iter().map(|&c| c as usize + 1).product();
        if size > D_Z_SCAN_MAX {
            notes.push(format!(
                "independent h1 recomputation skipped for Z with {size} subcycles; closure and bounds checked"
            ));
        } else {
            let (d, mins) = oracle::d_z_by_scan(lat, &q, cfg)?;
            if (c.d, &c.minimizers) != (d, &mins) {
                return Ok(Err(disagree("d_Z", (c.d, c.minimizers), (d, mins))));
            }
        }
        cases += 1;
    }
    notes.dedup();
    Ok(Ok((cases, notes)))
}

fn check_tau(lat: &Lattice, cfg: &SearchConfig) -> Result<Check> {
    let mut cases = 0;
    for q in verify_queries(lat)? {
        let r = match tau::tau_upper_bound(lat, &q) {
            Ok(r) => r,
            Err(Error::TNegative { .. }) => continue,
            Err(e) => return Err(e),
        };
        // the factorization is asserted while the report is built
        for v in q.chern().positive_support() {
            let (t, a) = (r.t[v] as u64, r.a[v] as u64);
            if a < t && tau::binomial(t, a + 1) * (a + 1) != tau::binomial(t, a) * (t - a) {
                return Ok(Err(CheckStatus::Disagree(format!("binomial recurrence fails at ({t}, {a})"))));
            }
        }
        let classified = tau::tau_classify(lat, &q, cfg)?;
        if classified.mode == TauMode::Equality && classified.tau_value != r.tau_value {
            return Ok(Err(disagree("tau", classified.tau_value, r.tau_value)));
        }
        cases += 1;
    }
    Ok(Ok((cases, vec![])))
}

fn check_dominance(lat: &Lattice, cfg: &SearchConfig) -> Result<Check> {
    let mut cases = 0;
    let zero_provider = abel::ConstantProvider(0);
    for q in verify_queries(lat)? {
        let z1 = IntegralCycle::zero(lat.n());
        let rel = abel::relative_dominance(lat, &q, &z1, &zero_provider, cfg)?.dominant;
        let dom = abel::is_dominant(lat, &q, cfg)?.dominant;
        let scan = oracle::is_dominant_by_scan(lat, &q, cfg)?;
        if !(rel == dom && dom == scan) {
            return Ok(Err(disagree("dominance (relative, formula, scan)", (rel, dom), (scan, scan))));
        }
        cases += 1;
    }
    Ok(Ok((cases, vec![])))
}

pub fn run_check(lat: &Lattice, name: &'static str, cfg: &SearchConfig) -> CheckOutcome {
    let result = match name {
        "zmin" => check_zmin(lat, cfg),
        "minchi" => check_minchi(lat, cfg),
        "d_z" => check_d_z(lat, cfg),
        "tau" => check_tau(lat, cfg),
        "dominance" => check_dominance(lat, cfg),
        _ => Err(Error::Internal(format!("unknown check {name}"))),
    };
    let (cases, notes, status) = match result {
        Ok(Ok((cases, notes))) => (cases, notes, CheckStatus::Agree),
        Ok(Err(status)) => (0, vec![], status),
        Err(Error::RegionTooLarge { .. }) => (0, vec![], CheckStatus::RegionTooLarge),
        Err(e) => (0, vec![], CheckStatus::Error(format!("{}: {e}", e.code()))),
    };
    CheckOutcome { name, cases, notes, status }
}

/// Runs the named checks (all of them for `None`).
pub fn verify(lat: &Lattice, only: Option<&str>, cfg: &SearchConfig) -> Result<(Vec<CheckOutcome>, Value)> {
    let names: Vec<&'static str> = match only {
        None => CHECKS.to_vec(),
        Some(s) => vec![*CHECKS
            .iter()
            .find(|&&c| c == s)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("unknown check `{s}`; expected one of {}", CHECKS.join(", ")),
            })?],
    };
    let outcomes: Vec<CheckOutcome> = names.into_iter().map(|n| run_check(lat, n, cfg)).collect();
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            let detail = match &o.status {
                CheckStatus::Disagree(d) | CheckStatus::Error(d) => json!(d),
                _ => Value::Null,
            };
            json!({
                "name": o.name,
                "status": o.status.code(),
                "cases": o.cases,
                "detail": detail,
                "notes": o.notes,
            })
        })
        .collect();
    let all_agree = outcomes.iter().all(|o| o.status == CheckStatus::Agree);
    let value = json!({
        "command": "verify",
        "graph_digest": encode::graph_digest(lat.graph()),
        "checks": checks,
        "all_agree": all_agree,
    });
    Ok((outcomes, value))
}
