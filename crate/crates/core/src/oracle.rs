//! Brute-force counterparts of the formula engines. Each oracle scans a box
//! point by point with direct χ evaluation and shares no search code with
//! the certified enumeration.

use crate::abel::AbelQuery;
use crate::config::SearchConfig;
use crate::cycle::IntegralCycle;
use crate::error::{Error, Result};
use crate::generic;
use crate::lattice::Lattice;
use crate::search::boxscan::BoxShape;

fn scan<T>(shape: &BoxShape, mut f: impl FnMut(IntegralCycle) -> Result<Option<T>>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for idx in 0..shape.size() {
        if let Some(t) = f(IntegralCycle::new(shape.point(idx)))? {
            out.push(t);
        }
    }
    Ok(out)
}

/// A box [0, U] known to contain Z_min: U is the meet over v of m_v·E*_v,
/// with m_v the least multiple making E*_v integral (each is a nonzero
/// element of the Lipman cone).
pub fn zmin_search_box(lat: &Lattice) -> Result<IntegralCycle> {
    let mut best: Option<IntegralCycle> = None;
    for e in lat.dual_basis() {
        let m = e.denominator();
        let m: i64 = i64::try_from(m).map_err(|_| Error::Overflow("E* denominator"))?;
        let c = (m * e)
            .to_integral()
            .ok_or_else(|| Error::Internal("m·E* is not integral".into()))?;
        best = Some(match best {
            None => c,
            Some(b) => b.meet(&c),
        });
    }
    best.ok_or_else(|| Error::Internal("empty graph".into()))
}

/// Z_min as the pointwise minimum of all nonzero Lipman-cone cycles in the
/// search box; fails if that minimum is not itself such a cycle.
///
/// When the box is over budget the search walks [0, U] by increasing total
/// degree instead: any other cone cycle lies above Z_min, so the first one
/// met is Z_min. That path does not re-check the minimum property.
pub fn zmin_by_cone_enumeration(lat: &Lattice, cfg: &SearchConfig) -> Result<IntegralCycle> {
    let upper = zmin_search_box(lat)?;
    let shape = match BoxShape::new(&vec![0; lat.n()], upper.coeffs(), cfg.enum_limit) {
        Ok(s) => s,
        Err(Error::RegionTooLarge { .. }) => return zmin_by_degree(lat, &upper, cfg.enum_limit),
        Err(e) => return Err(e),
    };
    let members = scan(&shape, |x| Ok((!x.is_zero() && lat.in_lipman_cone_integral(&x)).then_some(x)))?;
    let m = IntegralCycle::meet_all(&members).ok_or_else(|| Error::Internal("no cone element in the box".into()))?;
    if !members.contains(&m) {
        return Err(Error::NotALattice(format!("cone elements have no minimum; meet {m}")));
    }
    Ok(m)
}

fn zmin_by_degree(lat: &Lattice, upper: &IntegralCycle, limit: u64) -> Result<IntegralCycle> {
    let u = upper.coeffs();
    let mut visited = 0u64;
    for total in 1..=u.iter().sum::<i64>() {
        let mut found = None;
        let mut x = vec![0i64; u.len()];
        compositions(u, total, 0, &mut x, &mut |p| {
            visited += 1;
            if visited > limit {
                return Err(Error::RegionTooLarge { limit });
            }
            let c = IntegralCycle::new(p.to_vec());
            if found.is_none() && lat.in_lipman_cone_integral(&c) {
                found = Some(c);
            }
            Ok(())
        })?;
        if let Some(c) = found {
            return Ok(c);
        }
    }
    Err(Error::Internal("no cone element in the box".into()))
}

/// Calls `f` on every x ≤ u (coordinatewise, from index `i` on) with the
/// remaining coordinates summing to `rest`.
fn compositions(
    u: &[i64],
    rest: i64,
    i: usize,
    x: &mut Vec<i64>,
    f: &mut impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if i == u.len() {
        return if rest == 0 { f(x) } else { Ok(()) };
    }
    let tail: i64 = u[i + 1..].iter().sum();
    for c in (rest - tail).max(0)..=rest.min(u[i]) {
        x[i] = c;
        compositions(u, rest - c, i + 1, x, f)?;
    }
    x[i] = 0;
    Ok(())
}

/// min of χ(l) over the nonzero points of [0, Z], by direct evaluation.
fn min_chi_positive_in_box(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<i128> {
    let shape = BoxShape::new(&vec![0; lat.n()], z.coeffs(), cfg.enum_limit)?;
    let values = scan(&shape, |x| Ok((!x.is_zero()).then(|| lat.chi_integral(&x))))?;
    values.into_iter().min().ok_or_else(|| Error::Internal("empty box".into()))
}

/// h¹(O_Z) by scanning each connected component's box.
pub fn h1_oz_by_scan(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<u64> {
    let mut total = 0u64;
    for part in lat.split_by_support(z) {
        let m = min_chi_positive_in_box(lat, &part, cfg)?;
        total += u64::try_from(1 - m).map_err(|_| Error::Internal("negative h1".into()))?;
    }
    Ok(total)
}

/// d_Z and its minimizers, with every h¹(O_{Z₁}) computed independently by
/// the certified search (not by the prefix table d_Z uses).
pub fn d_z_by_scan(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<(u64, Vec<IntegralCycle>)> {
    let shape = BoxShape::new(&vec![0; lat.n()], q.z().coeffs(), cfg.enum_limit)?;
    let h = generic::h1_oz(lat, q.z(), cfg)? as i128;
    let vals = scan(&shape, |z1| {
        let v = q.pairing(z1.coeffs()) + h - generic::h1_oz(lat, &z1, cfg)? as i128;
        Ok(Some((v, z1)))
    })?;
    let best = vals.iter().map(|(v, _)| *v).min().ok_or_else(|| Error::Internal("empty box".into()))?;
    let d = u64::try_from(best).map_err(|_| Error::Internal("negative d_Z".into()))?;
    Ok((d, vals.into_iter().filter(|(v, _)| *v == best).map(|(_, z)| z).collect()))
}

/// χ(−l′) < χ(−l′+l) for all 0 < l ≤ Z, by direct evaluation.
pub fn is_dominant_by_scan(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<bool> {
    let shape = BoxShape::new(&vec![0; lat.n()], q.z().coeffs(), cfg.enum_limit)?;
    let bad = scan(&shape, |l| {
        Ok((!l.is_zero() && lat.chi_integral(&l) + q.pairing(l.coeffs()) <= 0).then_some(()))
    })?;
    Ok(bad.is_empty())
}
