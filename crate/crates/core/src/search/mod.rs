//! χ-minimization over cycle regions, Laufer's algorithm, and the minimal
//! analytic semigroup element above a cycle.

pub mod boxscan;
pub mod ellipsoid;
pub mod objective;

use num_rational::BigRational;

use crate::config::SearchConfig;
use crate::cycle::{IntegralCycle, RationalCycle};
use crate::error::{Error, Result};
use crate::generic;
use crate::lattice::Lattice;
use boxscan::BoxTable;
use ellipsoid::{Bounds, MinSet};
use objective::Objective;

/// The region a minimization ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Box { lower: IntegralCycle, upper: IntegralCycle },
    /// L_{≥0}
    LGe0,
    /// L_{>0}
    LGt0,
    /// all of L
    LAll,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::Box { .. } => "BOX",
            Region::LGe0 => "L_GE0",
            Region::LGt0 => "L_GT0",
            Region::LAll => "L_ALL",
        }
    }

    fn bounds(&self, n: usize) -> Bounds {
        match self {
            Region::Box { lower, upper } => Bounds::boxed(lower.coeffs(), upper.coeffs()),
            Region::LGe0 => Bounds::nonnegative(n),
            Region::LGt0 => Bounds::nonnegative(n).excluding_zero(),
            Region::LAll => Bounds::unbounded(n),
        }
    }
}

/// Exact minimum of χ(l′ + l) over l in a region, with every minimizer l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizationResult {
    pub min_value: BigRational,
    pub minimizers: Vec<IntegralCycle>,
    pub region: Region,
    /// True when the search carries an exhaustiveness proof.
    pub certified: bool,
}

impl MinimizationResult {
    /// Pointwise max of the minimizers, if it is itself a minimizer.
    pub fn max_element(&self) -> Option<IntegralCycle> {
        IntegralCycle::join_all(&self.minimizers).filter(|m| self.minimizers.contains(m))
    }

    /// Pointwise min of the minimizers, if it is itself a minimizer.
    pub fn min_element(&self) -> Option<IntegralCycle> {
        IntegralCycle::meet_all(&self.minimizers).filter(|m| self.minimizers.contains(m))
    }
}

/// Generalized Laufer iteration: from `start`, add E_v while some
/// (x, E_v) > 0. From an effective start this reaches the smallest element
/// of the Lipman cone above it.
pub fn laufer_from(lat: &Lattice, start: &IntegralCycle) -> Result<IntegralCycle> {
    lat.check_cycle(start)?;
    let mut x = start.coeffs().to_vec();
    let n = lat.n();
    loop {
        let cur = IntegralCycle::new(x.clone());
        match (0..n).find(|&v| lat.degree_at(&cur, v) > 0) {
            None => return Ok(cur),
            Some(v) => {
                x[v] += 1;
                if x[v] > crate::lattice::MAX_COEFF {
                    return Err(Error::Overflow("Laufer iteration"));
                }
            }
        }
    }
}

/// Z_min, Artin's fundamental cycle.
pub fn laufer_zmin(lat: &Lattice) -> IntegralCycle {
    laufer_from(lat, &IntegralCycle::reduced(lat.n())).expect("Laufer iteration from E terminates below Z_min")
}

fn offset_degrees(lat: &Lattice, offset: &RationalCycle) -> Result<Vec<i64>> {
    Ok(lat.to_estar(offset)?.degrees().to_vec())
}

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Exhaustive evaluation of χ(l′ + l) over every l in [lower, upper].
pub fn min_chi_box(
    lat: &Lattice,
    offset: &RationalCycle,
    lower: &IntegralCycle,
    upper: &IntegralCycle,
    cfg: &SearchConfig,
) -> Result<MinimizationResult> {
    lat.check_cycle(lower)?;
    lat.check_cycle(upper)?;
    let degrees = offset_degrees(lat, offset)?;
    let obj = Objective::shifted(lat, &degrees);
    let table = BoxTable::tabulate(&obj, lower.coeffs(), upper.coeffs(), false, cfg)?;
    let (best, minimizers) = table
        .minimum(cfg.mode)
        .ok_or_else(|| Error::Internal("empty box".into()))?;
    Ok(MinimizationResult {
        min_value: lat.chi(offset)? + rat(best as i128),
        minimizers,
        region: Region::Box {
            lower: lower.clone(),
            upper: upper.clone(),
        },
        certified: true,
    })
}

/// A feasible starting point for the ellipsoid search: the clamped rounded
/// center, or the best feasible ±E_v.
fn feasible_start(obj: &Objective<'_>, bounds: &Bounds) -> Result<Vec<i64>> {
    let n = obj.lattice().n();
    let center = obj.center();
    let mut cands: Vec<Vec<i64>> = Vec::with_capacity(2 * n + 1);
    let mut rounded = Vec::with_capacity(n);
    for (i, c) in center.iter().enumerate() {
        let r: i64 = num_traits::ToPrimitive::to_i64(&c.round().to_integer())
            .ok_or(Error::Overflow("enumeration center"))?;
        let r = match (bounds.lower[i], bounds.upper[i]) {
            (Some(lo), _) if r < lo => lo,
            (_, Some(hi)) if r > hi => hi,
            _ => r,
        };
        rounded.push(r);
    }
    cands.push(rounded.clone());
    for v in 0..n {
        for s in [1, -1] {
            let mut x = vec![0; n];
            x[v] = s;
            cands.push(x);
            let mut y = rounded.clone();
            y[v] += s;
            cands.push(y);
        }
    }
    cands
        .into_iter()
        .filter(|x| bounds.contains(x))
        .min_by_key(|x| obj.eval(x))
        .ok_or_else(|| Error::Precondition("search region has no feasible point near its center".into()))
}

/// Certified minimization of δ over the lattice points of `bounds`.
pub fn minimize_objective(obj: &Objective<'_>, bounds: &Bounds, cfg: &SearchConfig) -> Result<MinSet> {
    let start = feasible_start(obj, bounds)?;
    ellipsoid::minimize(obj, bounds, &start, cfg)
}

/// Certified minimum of χ(l′ + l) over l ∈ `region`.
pub fn min_chi_global(
    lat: &Lattice,
    offset: &RationalCycle,
    region: Region,
    cfg: &SearchConfig,
) -> Result<MinimizationResult> {
    if let Region::Box { lower, upper } = &region {
        lat.check_cycle(lower)?;
        lat.check_cycle(upper)?;
    }
    let degrees = offset_degrees(lat, offset)?;
    let obj = Objective::shifted(lat, &degrees);
    let set = minimize_objective(&obj, &region.bounds(lat.n()), cfg)?;
    Ok(MinimizationResult {
        min_value: lat.chi(offset)? + rat(set.value),
        minimizers: set.points,
        region,
        certified: true,
    })
}

/// Certified minimum of χ(l) over 0 < l ≤ Z (Z effective, nonzero).
pub fn min_chi_below(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<MinSet> {
    let obj = Objective::chi(lat);
    let bounds = Bounds::boxed(&vec![0; lat.n()], z.coeffs()).excluding_zero();
    minimize_objective(&obj, &bounds, cfg)
}

/// The unique minimal s ∈ S_an (generic structure) with s ≥ l.
pub fn minimal_semigroup_element_above(lat: &Lattice, l: &IntegralCycle, cfg: &SearchConfig) -> Result<IntegralCycle> {
    lat.check_cycle(l)?;
    let n = lat.n();
    let lplus = l.join(&IntegralCycle::zero(n));
    if lplus.is_zero() {
        return Ok(lplus);
    }
    // every nonzero member lies in the Lipman cone, hence above x0
    let x0 = laufer_from(lat, &lplus)?;
    if generic::is_in_san(lat, &x0.to_rational(), cfg)? {
        return Ok(x0);
    }
    // the largest minimizer of χ above l⁺ is a member, so s ≤ m
    let above = min_chi_global(lat, &lplus.to_rational(), Region::LGe0, cfg)?;
    let shift = above
        .max_element()
        .ok_or_else(|| Error::NotALattice("minimizers of χ above l have no maximum".into()))?;
    let m = &lplus + &shift;
    if !x0.le(&m) {
        return Err(Error::Internal("Laufer cycle exceeds the χ-maximal member".into()));
    }
    let shape = boxscan::BoxShape::new(x0.coeffs(), m.coeffs(), cfg.enum_limit)?;
    let mut members = Vec::new();
    for idx in 0..shape.size() {
        let x = IntegralCycle::new(shape.point(idx));
        if lat.in_lipman_cone_integral(&x) && generic::is_in_san(lat, &x.to_rational(), cfg)? {
            members.push(x);
        }
    }
    let s = IntegralCycle::meet_all(&members).ok_or_else(|| Error::Internal("no member in [x0, m]".into()))?;
    if !members.contains(&s) {
        return Err(Error::NotALattice(format!(
            "semigroup members above l have no minimum; meet {s} is not a member"
        )));
    }
    Ok(s)
}
