//! Cohomological invariants of the generic analytic structure on a graph,
//! all expressed through minima of χ, plus Artin's rationality test.

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::config::SearchConfig;
use crate::cycle::{IntegralCycle, RationalCycle};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::search::boxscan::{BoxShape, BoxTable, EXCLUDED};
use crate::search::ellipsoid::Bounds;
use crate::search::objective::Objective;
use crate::search::{self, MinimizationResult, Region};

pub(crate) fn nonneg(v: i128, what: &'static str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Internal(format!("{what} came out negative ({v})")))
}

fn offset_objective<'a>(lat: &'a Lattice, lprime: &RationalCycle) -> Result<Objective<'a>> {
    let c = lat.to_estar(lprime)?;
    Ok(Objective::shifted(lat, c.degrees()))
}

fn require_effective(z: &IntegralCycle, what: &str) -> Result<()> {
    if !z.is_effective() {
        return Err(Error::Precondition(format!("{what} must be effective, got {z}")));
    }
    Ok(())
}

/// min_{L>0} χ together with its minimizers.
pub fn min_chi_positive(lat: &Lattice, cfg: &SearchConfig) -> Result<MinimizationResult> {
    search::min_chi_global(lat, &RationalCycle::zero(lat.n()), Region::LGt0, cfg)
}

/// Artin's criterion: χ(l) ≥ 1 for every l > 0.
pub fn is_rational_graph(lat: &Lattice, cfg: &SearchConfig) -> Result<bool> {
    let r = min_chi_positive(lat, cfg)?;
    Ok(r.min_value >= BigRational::from_integer(1.into()))
}

/// 1 − min_{0<l≤Z} χ(l) for connected support, summed over the connected
/// components of |Z| otherwise; 0 for Z = 0.
pub fn h1_oz(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<u64> {
    lat.check_cycle(z)?;
    require_effective(z, "Z")?;
    let mut total = 0u64;
    for part in lat.split_by_support(z) {
        let m = search::min_chi_below(lat, &part, cfg)?;
        total += nonneg(1 - m.value, "h1(O_Z)")?;
    }
    Ok(total)
}

/// h¹(O_{Z₁}) for every 0 ≤ Z₁ ≤ Z, from one tabulation of χ over the box.
#[derive(Debug, Clone)]
pub struct H1Table {
    /// min of χ over 0 < l ≤ x, `EXCLUDED` at the origin.
    prefix: BoxTable,
}

impl H1Table {
    pub fn new(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<Self> {
        lat.check_cycle(z)?;
        require_effective(z, "Z")?;
        let obj = Objective::chi(lat);
        let table = BoxTable::tabulate(&obj, &vec![0; lat.n()], z.coeffs(), true, cfg)?;
        Ok(H1Table {
            prefix: table.into_prefix_min(cfg.mode),
        })
    }

    pub fn shape(&self) -> &BoxShape {
        &self.prefix.shape
    }

    /// h¹(O_x) for 0 ≤ x ≤ Z.
    pub fn h1(&self, lat: &Lattice, x: &IntegralCycle) -> Result<u64> {
        let mut total = 0u64;
        for part in lat.split_by_support(x) {
            let m = self
                .prefix
                .get(part.coeffs())
                .ok_or_else(|| Error::Internal(format!("cycle {part} outside the tabulated box")))?;
            if m == EXCLUDED {
                return Err(Error::Internal("nonzero component with no tabulated value".into()));
            }
            total += nonneg(1 - m as i128, "h1(O_Z)")?;
        }
        Ok(total)
    }
}

/// h¹(Z, O_Z(−l′)) = χ(l′) − min_{0≤l≤Z} χ(l′+l), for l′ with positive
/// E-coefficients on |Z|.
pub fn h1_natural(lat: &Lattice, z: &IntegralCycle, lprime: &RationalCycle, cfg: &SearchConfig) -> Result<u64> {
    lat.check_cycle(z)?;
    require_effective(z, "Z")?;
    if lprime.len() != lat.n() {
        return Err(Error::GraphMismatch {
            expected: lat.n(),
            found: lprime.len(),
        });
    }
    if let Some(v) = z.support().into_iter().find(|&v| !lprime.coeffs()[v].is_positive()) {
        return Err(Error::PreconditionSupport(format!(
            "coefficient of l' at `{}` is {}, must be positive on the support of Z",
            lat.graph().ids()[v],
            lprime.coeffs()[v]
        )));
    }
    let obj = offset_objective(lat, lprime)?;
    let bounds = Bounds::boxed(&vec![0; lat.n()], z.coeffs());
    let m = search::minimize_objective(&obj, &bounds, cfg)?;
    nonneg(-m.value, "h1(Z, O_Z(-l'))")
}

/// Geometric genus with both expressions of its χ formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PgReport {
    pub pg: u64,
    pub rational: bool,
    /// min_{L>0} χ
    pub min_chi_positive: i64,
    /// min_L χ
    pub min_chi_all: i64,
}

/// p_g = 1 − min_{L>0} χ, checked against −min_L χ + [non-rational].
pub fn pg(lat: &Lattice, cfg: &SearchConfig) -> Result<PgReport> {
    let zero = RationalCycle::zero(lat.n());
    let pos = min_chi_positive(lat, cfg)?.min_value;
    let all = search::min_chi_global(lat, &zero, Region::LAll, cfg)?.min_value;
    let as_int = |x: &BigRational| -> Result<i64> {
        num_traits::ToPrimitive::to_i64(&x.to_integer())
            .filter(|_| x.is_integer())
            .ok_or_else(|| Error::Internal(format!("χ minimum {x} is not an integer")))
    };
    let (pos, all) = (as_int(&pos)?, as_int(&all)?);
    let rational = pos >= 1;
    let pg = nonneg(1 - pos as i128, "p_g")?;
    let other = -(all as i128) + if rational { 0 } else { 1 };
    if other != pg as i128 {
        return Err(Error::Internal(format!(
            "p_g expressions disagree: 1 - min_(L>0) chi = {pg}, -min_L chi + corr = {other}"
        )));
    }
    Ok(PgReport {
        pg,
        rational,
        min_chi_positive: pos,
        min_chi_all: all,
    })
}

/// Smallest N ≥ 1 such that some minimizer of χ over L_{>0} lies below
/// N·Z_min; from there on h¹(O_{N·Z_min}) = p_g.
pub fn pg_stabilization_bound(lat: &Lattice, cfg: &SearchConfig) -> Result<u64> {
    let zmin = search::laufer_zmin(lat);
    let r = min_chi_positive(lat, cfg)?;
    let need = |m: &IntegralCycle| -> u64 {
        (0..lat.n())
            .map(|v| {
                let (a, b) = (m.coeffs()[v], zmin.coeffs()[v]);
                ((a + b - 1) / b).max(1) as u64
            })
            .max()
            .unwrap_or(1)
    };
    r.minimizers
        .iter()
        .map(need)
        .min()
        .ok_or_else(|| Error::Internal("empty minimizer set".into()))
}

/// l′ ∈ L_{≤0}: integral with every coefficient ≤ 0.
fn is_nonpositive_integral(lprime: &RationalCycle) -> bool {
    lprime.to_integral().is_some_and(|l| l.coeffs().iter().all(|&c| c <= 0))
}

/// h¹(X̃, O(−l′)) = χ(l′) − min_{l≥0} χ(l′+l) + [l′ ∈ L_{≤0} and non-rational].
pub fn h1_xtilde_natural(lat: &Lattice, lprime: &RationalCycle, cfg: &SearchConfig) -> Result<u64> {
    let obj = offset_objective(lat, lprime)?;
    let m = search::minimize_objective(&obj, &Bounds::nonnegative(lat.n()), cfg)?;
    let corr = if is_nonpositive_integral(lprime) && !is_rational_graph(lat, cfg)? {
        1
    } else {
        0
    };
    nonneg(-m.value + corr, "h1(O(-l'))")
}

/// 𝔥(l₀) = dim H⁰(O)/H⁰(O(−l₀)) for l₀ ≥ 0.
pub fn hfrak(lat: &Lattice, l0: &IntegralCycle, cfg: &SearchConfig) -> Result<u64> {
    lat.check_cycle(l0)?;
    require_effective(l0, "l0")?;
    if l0.is_zero() {
        return Ok(0);
    }
    let n = lat.n();
    let shifted = search::min_chi_global(lat, &l0.to_rational(), Region::LGe0, cfg)?.min_value;
    let base = search::min_chi_global(lat, &RationalCycle::zero(n), Region::LGe0, cfg)?.min_value;
    let corr = if is_rational_graph(lat, cfg)? { 0 } else { 1 };
    let v = shifted - base + BigRational::from_integer(corr.into());
    if !v.is_integer() {
        return Err(Error::Internal(format!("hfrak value {v} is not an integer")));
    }
    let v: i128 = num_traits::ToPrimitive::to_i128(&v.to_integer()).ok_or(Error::Overflow("hfrak"))?;
    nonneg(v, "hfrak")
}

/// Membership in S′_an of the generic structure: l′ = 0, or χ(l′) < χ(l′+l)
/// for every l ∈ L_{>0}.
pub fn is_in_san(lat: &Lattice, lprime: &RationalCycle, cfg: &SearchConfig) -> Result<bool> {
    if lprime.len() != lat.n() {
        return Err(Error::GraphMismatch {
            expected: lat.n(),
            found: lprime.len(),
        });
    }
    if lprime.is_zero() {
        return Ok(true);
    }
    Ok(san_witness(lat, lprime, cfg)?.is_none())
}

/// A cycle l > 0 with χ(l′+l) ≤ χ(l′), if one exists.
pub fn san_witness(lat: &Lattice, lprime: &RationalCycle, cfg: &SearchConfig) -> Result<Option<IntegralCycle>> {
    let obj = offset_objective(lat, lprime)?;
    let m = search::minimize_objective(&obj, &Bounds::nonnegative(lat.n()).excluding_zero(), cfg)?;
    Ok((m.value <= 0).then(|| m.points[0].clone()))
}

/// The largest minimizer of χ over L_{>0}; defined for non-rational graphs.
pub fn maximal_ideal_cycle(lat: &Lattice, cfg: &SearchConfig) -> Result<IntegralCycle> {
    let r = min_chi_positive(lat, cfg)?;
    if r.min_value >= BigRational::from_integer(1.into()) {
        return Err(Error::RationalGraph);
    }
    r.max_element()
        .ok_or_else(|| Error::NotALattice("minimizers of χ over L_(>0) have no maximum".into()))
}
