//! Numerics of the Abel map c^{l′}(Z): dimensions of ECa^{l′}(Z) and of the
//! image, the minimizer family with C_min/C_max, e_Z, dominance, generic
//! h¹ values, and the relative inequalities over a pluggable h¹ source.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::config::SearchConfig;
use crate::cycle::{IntegralCycle, RationalCycle};
use crate::error::{Error, Result};
use crate::generic::{self, nonneg, H1Table};
use crate::lattice::{ChernClass, Lattice};
use crate::par;
use crate::search::boxscan::{BoxShape, BoxTable, EXCLUDED};
use crate::search::ellipsoid::Bounds;
use crate::search::minimize_objective;
use crate::search::objective::Objective;

/// A cycle Z > 0 and a Chern class l′ ∈ −S′ whose positive support lies in |Z|.
#[derive(Debug, Clone)]
pub struct AbelQuery {
    z: IntegralCycle,
    chern: ChernClass,
}

impl AbelQuery {
    pub fn new(lat: &Lattice, z: IntegralCycle, chern: ChernClass) -> Result<Self> {
        lat.check_cycle(&z)?;
        if !z.is_effective() || z.is_zero() {
            return Err(Error::Precondition(format!("Z must be effective and nonzero, got {z}")));
        }
        if chern.degrees().len() != lat.n() {
            return Err(Error::GraphMismatch {
                expected: lat.n(),
                found: chern.degrees().len(),
            });
        }
        if !chern.is_anti_lipman() {
            return Err(Error::Precondition("Chern class is not in -S'".into()));
        }
        if let Some(v) = chern.positive_support().into_iter().find(|&v| z.coeffs()[v] == 0) {
            return Err(Error::PreconditionSupport(format!(
                "vertex `{}` carries the Chern class but lies outside |Z|",
                lat.graph().ids()[v]
            )));
        }
        Ok(AbelQuery { z, chern })
    }

    /// Convenience constructor from E*-coefficients.
    pub fn from_estar(lat: &Lattice, z: IntegralCycle, a: &[i64]) -> Result<Self> {
        let chern = lat.chern_from_estar(a)?;
        Self::new(lat, z, chern)
    }

    pub fn z(&self) -> &IntegralCycle {
        &self.z
    }

    pub fn chern(&self) -> &ChernClass {
        &self.chern
    }

    /// a_v = (l′, E_v).
    pub fn a(&self) -> &[i64] {
        self.chern.degrees()
    }

    /// (l′, x) for integral x.
    pub fn pairing(&self, x: &[i64]) -> i128 {
        self.a().iter().zip(x).map(|(&a, &c)| a as i128 * c as i128).sum()
    }

    /// g(l) = χ(−l′ + l) − χ(−l′) = χ(l) + (l′, l).
    fn objective<'a>(&self, lat: &'a Lattice) -> Objective<'a> {
        Objective::anti_chern(lat, self.a())
    }
}

/// ECa^{l′}(Z) ≠ ∅ ⟺ l′ ∈ −S′.
pub fn eca_nonempty(lat: &Lattice, lprime: &RationalCycle) -> Result<bool> {
    Ok(lat.to_estar(lprime)?.is_anti_lipman())
}

/// dim ECa^{l′}(Z) = (l′, Z).
pub fn dim_eca(q: &AbelQuery) -> Result<u64> {
    nonneg(q.pairing(q.z().coeffs()), "dim ECa")
}

/// Fiber dimension (l′, Z) + h¹(Z, 𝓛) − h¹(O_Z).
pub fn fiber_dim(dim_eca: u64, h1_of_l: u64, h1_oz: u64) -> i64 {
    dim_eca as i64 + h1_of_l as i64 - h1_oz as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CminResult {
    /// d_Z(l′) = min over 0 ≤ Z₁ ≤ Z of (l′, Z₁) + h¹(O_Z) − h¹(O_{Z₁}).
    pub d: u64,
    pub minimizers: Vec<IntegralCycle>,
    pub cmin: IntegralCycle,
    pub cmax: IntegralCycle,
    pub z_equals_cmin: bool,
    pub h1_oz: u64,
    /// Whether closure of the minimizers under pairwise meet and join was
    /// checked exhaustively (skipped only for very large minimizer sets).
    pub closure_checked: bool,
}

const CLOSURE_CHECK_MAX: usize = 4096;

/// Whether a set of distinct cycles is the whole interval between its meet
/// and its join (then it is trivially closed under meet and join).
pub fn fills_interval(set: &[IntegralCycle]) -> bool {
    let (Some(lo), Some(hi)) = (IntegralCycle::meet_all(set), IntegralCycle::join_all(set)) else {
        return true;
    };
    let size = lo
        .coeffs()
        .iter()
        .zip(hi.coeffs())
        .try_fold(1usize, |acc, (a, b)| acc.checked_mul((b - a + 1) as usize));
    size == Some(set.len())
}

/// Verifies that a set of distinct cycles is closed under pointwise meet
/// and join.
pub fn check_lattice_closure(set: &[IntegralCycle]) -> Result<()> {
    if fills_interval(set) {
        return Ok(());
    }
    let members: HashSet<&IntegralCycle> = set.iter().collect();
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            for c in [a.meet(b), a.join(b)] {
                if !members.contains(&c) {
                    return Err(Error::NotALattice(format!("{a} and {b} generate {c}, not a minimizer")));
                }
            }
        }
    }
    Ok(())
}

/// Image dimension of the Abel map with its full minimizer family.
pub fn d_z(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<CminResult> {
    let table = H1Table::new(lat, q.z(), cfg)?;
    let h = table.h1(lat, q.z())?;
    let shape = table.shape().clone();
    let chunk = 1024;
    let pieces = shape.size().div_ceil(chunk);
    let values = par::map_range(cfg.mode, 0..pieces, |p| -> Result<Vec<i128>> {
        let lo = p * chunk;
        let hi = (lo + chunk).min(shape.size());
        (lo..hi)
            .map(|idx| {
                let z1 = IntegralCycle::new(shape.point(idx));
                Ok(q.pairing(z1.coeffs()) + h as i128 - table.h1(lat, &z1)? as i128)
            })
            .collect()
    });
    let mut flat = Vec::with_capacity(shape.size());
    for v in values {
        flat.extend(v?);
    }
    let best = *flat.iter().min().ok_or_else(|| Error::Internal("empty box".into()))?;
    let minimizers: Vec<IntegralCycle> = flat
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best)
        .map(|(i, _)| IntegralCycle::new(shape.point(i)))
        .collect();
    let cmin = IntegralCycle::meet_all(&minimizers).expect("nonempty");
    let cmax = IntegralCycle::join_all(&minimizers).expect("nonempty");
    for (name, c) in [("C_min", &cmin), ("C_max", &cmax)] {
        if !minimizers.contains(c) {
            return Err(Error::NotALattice(format!("{name} candidate {c} does not attain d_Z")));
        }
    }
    let closure_checked = minimizers.len() <= CLOSURE_CHECK_MAX || fills_interval(&minimizers);
    if closure_checked {
        check_lattice_closure(&minimizers)?;
    }
    Ok(CminResult {
        d: nonneg(best, "d_Z")?,
        z_equals_cmin: &cmin == q.z(),
        minimizers,
        cmin,
        cmax,
        h1_oz: h,
        closure_checked,
    })
}

/// e_Z(I) = h¹(O_Z) − h¹(O_{Z|V∖I}) for a nonempty vertex set I.
pub fn e_z(lat: &Lattice, z: &IntegralCycle, set: &[usize], cfg: &SearchConfig) -> Result<u64> {
    if set.is_empty() {
        return Err(Error::Precondition("e_Z needs a nonempty vertex set".into()));
    }
    let mut keep = vec![true; lat.n()];
    for &v in set {
        *keep
            .get_mut(v)
            .ok_or_else(|| Error::Precondition(format!("vertex index {v} out of range")))? = false;
    }
    let whole = generic::h1_oz(lat, z, cfg)?;
    let rest = generic::h1_oz(lat, &z.restrict(&keep), cfg)?;
    whole
        .checked_sub(rest)
        .ok_or_else(|| Error::Internal(format!("h1 not monotone: {whole} < {rest}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub e_single: u64,
    pub meets_single: bool,
    pub e_pair: Option<u64>,
    pub meets_pair: Option<bool>,
    /// Vertices among u, u″ whose Z-coefficient is not 1.
    pub hypothesis_violated: Vec<String>,
}

/// e_Z({u}) and e_Z({u, u″}) against the threshold 3; a coefficient Z_u ≠ 1
/// is reported, not refused.
pub fn hyperelliptic_thresholds(
    lat: &Lattice,
    z: &IntegralCycle,
    u: usize,
    u2: Option<usize>,
    cfg: &SearchConfig,
) -> Result<ThresholdReport> {
    let e_single = e_z(lat, z, &[u], cfg)?;
    let e_pair = u2.map(|w| e_z(lat, z, &[u, w], cfg)).transpose()?;
    let hypothesis_violated = std::iter::once(u)
        .chain(u2)
        .filter(|&v| z.coeffs()[v] != 1)
        .map(|v| lat.graph().ids()[v].clone())
        .collect();
    Ok(ThresholdReport {
        e_single,
        meets_single: e_single >= 3,
        e_pair,
        meets_pair: e_pair.map(|e| e >= 3),
        hypothesis_violated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dominance {
    pub dominant: bool,
    /// A cycle violating the defining inequality, when not dominant.
    pub witness: Option<IntegralCycle>,
}

/// χ(−l′) < χ(−l′ + l) for all 0 < l ≤ Z.
pub fn is_dominant(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<Dominance> {
    dominance_below(lat, q, q.z(), cfg)
}

fn dominance_below(lat: &Lattice, q: &AbelQuery, z: &IntegralCycle, cfg: &SearchConfig) -> Result<Dominance> {
    let obj = q.objective(lat);
    let bounds = Bounds::boxed(&vec![0; lat.n()], z.coeffs()).excluding_zero();
    let m = minimize_objective(&obj, &bounds, cfg)?;
    Ok(if m.value > 0 {
        Dominance {
            dominant: true,
            witness: None,
        }
    } else {
        Dominance {
            dominant: false,
            witness: Some(m.points[0].clone()),
        }
    })
}

/// h¹ of a generic bundle in Pic^{l′}(Z): χ(−l′) − min_{0≤l≤Z} χ(−l′+l).
pub fn h1_generic_pic(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<u64> {
    generic_h1_with_degrees(lat, q.z(), q.a(), cfg)
}

/// max_{0≤k≤Y} (−χ(k) − Σ k_v b_v): generic h¹ on Y for pairings b.
fn generic_h1_with_degrees(lat: &Lattice, y: &IntegralCycle, b: &[i64], cfg: &SearchConfig) -> Result<u64> {
    if y.is_zero() {
        return Ok(0);
    }
    let obj = Objective::anti_chern(lat, b);
    let m = minimize_objective(&obj, &Bounds::boxed(&vec![0; lat.n()], y.coeffs()), cfg)?;
    nonneg(-m.value, "generic h1")
}

/// h¹(O_Z(D)) for a generic divisor D in the image: the maximum over
/// 0 ≤ Z′ ≤ Z of Σ over components Z′_i of χ(−l′) − χ(−l′+Z′_i) + D(Z′_i),
/// with D = 1 exactly when l′ is not dominant on Z′_i.
pub fn h1_generic_abel_image(lat: &Lattice, q: &AbelQuery, cfg: &SearchConfig) -> Result<u64> {
    let obj = q.objective(lat);
    let zero = vec![0; lat.n()];
    let values = BoxTable::tabulate(&obj, &zero, q.z().coeffs(), false, cfg)?;
    let mut prefix = values.clone();
    prefix.values[0] = EXCLUDED;
    let prefix = prefix.into_prefix_min(cfg.mode);
    let shape = values.shape.clone();
    let chunk = 1024;
    let pieces = shape.size().div_ceil(chunk);
    let partial = par::map_range(cfg.mode, 0..pieces, |p| {
        let lo = p * chunk;
        let hi = (lo + chunk).min(shape.size());
        (lo..hi)
            .map(|idx| {
                let z1 = IntegralCycle::new(shape.point(idx));
                lat.split_by_support(&z1)
                    .iter()
                    .map(|part| {
                        let i = shape.index(part.coeffs()).expect("component lies in the box");
                        let d = if prefix.values[i] <= 0 { 1 } else { 0 };
                        d - values.values[i] as i128
                    })
                    .sum::<i128>()
            })
            .max()
            .unwrap_or(0)
    });
    let best = partial.into_iter().max().unwrap_or(0);
    nonneg(best, "h1 of the image divisor")
}

fn shape_of(lat: &Lattice, z: &IntegralCycle, cfg: &SearchConfig) -> Result<BoxShape> {
    BoxShape::new(&vec![0; lat.n()], z.coeffs(), cfg.enum_limit)
}

/// A source of h¹ values for line bundles on subcycles, for the relative
/// statements that the graph alone does not determine.
pub trait H1Provider: Sync {
    /// h¹(Y, 𝓛) for a bundle on Y whose Chern class pairs to `degrees` with
    /// the E_v. Must be 0 on Y = 0.
    fn h1(&self, lat: &Lattice, y: &IntegralCycle, degrees: &[i64], cfg: &SearchConfig) -> Result<u64>;

    fn name(&self) -> String;
}

/// h¹ of a generic bundle of the given Chern class (generic analytic structure).
#[derive(Debug, Clone, Copy, Default)]
pub struct GenericProvider;

impl H1Provider for GenericProvider {
    fn h1(&self, lat: &Lattice, y: &IntegralCycle, degrees: &[i64], cfg: &SearchConfig) -> Result<u64> {
        generic_h1_with_degrees(lat, y, degrees, cfg)
    }

    fn name(&self) -> String {
        "GENERIC".into()
    }
}

/// The same value on every cycle, including Y = 0.
#[derive(Debug, Clone, Copy)]
pub struct ConstantProvider(pub u64);

impl H1Provider for ConstantProvider {
    fn h1(&self, _: &Lattice, _: &IntegralCycle, _: &[i64], _: &SearchConfig) -> Result<u64> {
        Ok(self.0)
    }

    fn name(&self) -> String {
        format!("CONSTANT({})", self.0)
    }
}

/// Values looked up by cycle; Y = 0 defaults to 0, other missing cycles fail.
#[derive(Debug, Clone, Default)]
pub struct TableProvider {
    values: HashMap<IntegralCycle, u64>,
}

impl TableProvider {
    pub fn new(values: HashMap<IntegralCycle, u64>) -> Self {
        TableProvider { values }
    }

    /// Parses a JSON object mapping cycle specs (`v1=1,v2=2`) to integers.
    pub fn from_json(lat: &Lattice, text: &str) -> Result<Self> {
        let raw: HashMap<String, u64> =
            serde_json::from_str(text).map_err(|e| Error::Provider(format!("bad h1 table: {e}")))?;
        let mut values = HashMap::new();
        for (spec, v) in raw {
            let c = crate::cycle::parse_cycle(lat.graph(), &spec)?;
            if values.insert(c, v).is_some() {
                return Err(Error::Provider(format!("cycle `{spec}` listed twice")));
            }
        }
        Ok(TableProvider { values })
    }
}

impl H1Provider for TableProvider {
    fn h1(&self, lat: &Lattice, y: &IntegralCycle, _: &[i64], _: &SearchConfig) -> Result<u64> {
        match self.values.get(y) {
            Some(&v) => Ok(v),
            None if y.is_zero() => Ok(0),
            None => Err(Error::Provider(format!("no h1 value for cycle `{}`", y.to_spec(lat.graph())))),
        }
    }

    fn name(&self) -> String {
        "TABLE".into()
    }
}

fn check_z1(lat: &Lattice, q: &AbelQuery, z1: &IntegralCycle) -> Result<()> {
    lat.check_cycle(z1)?;
    if !z1.is_effective() || !z1.le(q.z()) {
        return Err(Error::Precondition(format!("Z_1 = {z1} must satisfy 0 <= Z_1 <= Z")));
    }
    Ok(())
}

/// For l in [0, Z]: g(l) − h¹((Z−l)₁, 𝔏(−l)), with (Z−l)₁ = min(Z−l, Z₁).
fn relative_terms(
    lat: &Lattice,
    q: &AbelQuery,
    z1: &IntegralCycle,
    h1p: &dyn H1Provider,
    cfg: &SearchConfig,
) -> Result<(BoxShape, Vec<i128>)> {
    let shape = shape_of(lat, q.z(), cfg)?;
    let obj = q.objective(lat);
    let terms = par::map_range(cfg.mode, 0..shape.size(), |idx| -> Result<i128> {
        let l = IntegralCycle::new(shape.point(idx));
        let rest = (q.z() - &l).meet(z1);
        let degrees: Vec<i64> = (0..lat.n())
            .map(|v| {
                i64::try_from(q.a()[v] as i128 - lat.degree_at(&l, v)).map_err(|_| Error::Overflow("bundle degree"))
            })
            .collect::<Result<_>>()?;
        let h = h1p.h1(lat, &rest, &degrees, cfg)?;
        Ok(obj.eval(l.coeffs()) - h as i128)
    });
    let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((shape, terms))
}

/// χ(−l′) − h¹(Z₁, 𝔏) < χ(−l′+l) − h¹((Z−l)₁, 𝔏(−l)) for every 0 < l ≤ Z;
/// the witness is the first violating l in lexicographic order.
pub fn relative_dominance(
    lat: &Lattice,
    q: &AbelQuery,
    z1: &IntegralCycle,
    h1p: &dyn H1Provider,
    cfg: &SearchConfig,
) -> Result<Dominance> {
    check_z1(lat, q, z1)?;
    let base = h1p.h1(lat, z1, q.a(), cfg)? as i128;
    let (shape, terms) = relative_terms(lat, q, z1, h1p, cfg)?;
    // index 0 is l = 0
    let witness = terms
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &t)| t + base <= 0)
        .map(|(i, _)| IntegralCycle::new(shape.point(i)));
    Ok(Dominance {
        dominant: witness.is_none(),
        witness,
    })
}

/// h¹(Z, 𝓛) = χ(−l′) − min_{0≤l≤Z} (χ(−l′+l) − h¹((Z−l)₁, 𝔏(−l))) for
/// a bundle generic relative to its restriction 𝔏 to Z₁.
pub fn h1_relative_generic(
    lat: &Lattice,
    q: &AbelQuery,
    z1: &IntegralCycle,
    h1p: &dyn H1Provider,
    cfg: &SearchConfig,
) -> Result<u64> {
    check_z1(lat, q, z1)?;
    let (_, terms) = relative_terms(lat, q, z1, h1p, cfg)?;
    let m = terms.into_iter().min().ok_or_else(|| Error::Internal("empty box".into()))?;
    nonneg(-m, "relative generic h1")
}
