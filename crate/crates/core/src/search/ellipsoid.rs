//! Exact Fincke–Pohst enumeration of the integer points of an ellipsoid
//! {l : (l − c)ᵀ Q (l − c) ≤ R}, intersected with coordinate bounds.
//!
//! The radius is derived from a feasible point and shrinks whenever a better
//! point is met, so the final answer is the full set of minimizers of the
//! objective over the bounded region. All arithmetic is exact.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::objective::Objective;
use crate::config::SearchConfig;
use crate::cycle::IntegralCycle;
use crate::error::{Error, Result};
use crate::par;

/// Coordinate bounds (inclusive, `None` = unbounded) and an optional
/// exclusion of the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
    pub exclude_zero: bool,
}

impl Bounds {
    pub fn unbounded(n: usize) -> Self {
        Bounds {
            lower: vec![None; n],
            upper: vec![None; n],
            exclude_zero: false,
        }
    }

    pub fn nonnegative(n: usize) -> Self {
        Bounds {
            lower: vec![Some(0); n],
            upper: vec![None; n],
            exclude_zero: false,
        }
    }

    pub fn boxed(lower: &[i64], upper: &[i64]) -> Self {
        Bounds {
            lower: lower.iter().map(|&x| Some(x)).collect(),
            upper: upper.iter().map(|&x| Some(x)).collect(),
            exclude_zero: false,
        }
    }

    pub fn excluding_zero(mut self) -> Self {
        self.exclude_zero = true;
        self
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if self.exclude_zero && x.iter().all(|&c| c == 0) {
            return false;
        }
        x.iter().enumerate().all(|(i, &c)| {
            self.lower[i].is_none_or(|lo| c >= lo) && self.upper[i].is_none_or(|hi| c <= hi)
        })
    }

    fn clamp(&self, i: usize, x: i64) -> i64 {
        let mut x = x;
        if let Some(lo) = self.lower[i] {
            x = x.max(lo);
        }
        if let Some(hi) = self.upper[i] {
            x = x.min(hi);
        }
        x
    }

    fn is_empty(&self) -> bool {
        (0..self.lower.len()).any(|i| matches!((self.lower[i], self.upper[i]), (Some(a), Some(b)) if a > b))
    }
}

/// Minimum value of δ and every point attaining it, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSet {
    pub value: i128,
    pub points: Vec<IntegralCycle>,
}

struct Shared<'a> {
    obj: &'a Objective<'a>,
    bounds: &'a Bounds,
    center: Vec<BigRational>,
    d: &'a [BigRational],
    mu: &'a [Vec<BigRational>],
    /// cᵀQc, so that (l−c)ᵀQ(l−c) = 2δ(l) + cQc.
    cqc: BigRational,
    visited: AtomicU64,
    limit: u64,
    aborted: AtomicBool,
}

struct Local {
    best: i128,
    radius: BigRational,
    points: Vec<Vec<i64>>,
}

impl Local {
    fn new(best: i128, cqc: &BigRational) -> Self {
        Local {
            best,
            radius: BigRational::from_integer(BigInt::from(2 * best)) + cqc,
            points: Vec::new(),
        }
    }

    fn offer(&mut self, value: i128, x: &[i64], cqc: &BigRational) {
        if value < self.best {
            self.best = value;
            self.radius = BigRational::from_integer(BigInt::from(2 * value)) + cqc;
            self.points.clear();
        }
        if value == self.best {
            self.points.push(x.to_vec());
        }
    }
}

fn round_to_i64(x: &BigRational) -> Result<i64> {
    x.round()
        .to_integer()
        .to_i64()
        .ok_or(Error::Overflow("enumeration center"))
}

impl Shared<'_> {
    fn tick(&self) -> Result<()> {
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::RegionTooLarge { limit: self.limit });
        }
        let seen = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > self.limit {
            self.aborted.store(true, Ordering::Relaxed);
            return Err(Error::RegionTooLarge { limit: self.limit });
        }
        Ok(())
    }

    /// Center of coordinate `i` given the coordinates above it.
    fn level_center(&self, i: usize, x: &[i64]) -> BigRational {
        let mut s = self.center[i].clone();
        for (j, &xj) in x.iter().enumerate().skip(i + 1) {
            if self.mu[i][j].is_zero() {
                continue;
            }
            let y = BigRational::from_integer(xj.into()) - &self.center[j];
            s -= &self.mu[i][j] * y;
        }
        s
    }

    fn term(&self, i: usize, xi: i64, ctr: &BigRational) -> BigRational {
        let t = BigRational::from_integer(xi.into()) - ctr;
        &self.d[i] * &t * &t
    }

    /// Integer candidates for coordinate `i` whose partial norm stays within
    /// the radius, as (value, new partial norm); nearest to the center first.
    fn candidates(&self, i: usize, x: &[i64], partial: &BigRational, radius: &BigRational) -> Result<Vec<(i64, BigRational)>> {
        let ctr = self.level_center(i, x);
        let start = self.bounds.clamp(i, round_to_i64(&ctr)?);
        let mut out = Vec::new();
        let within = |xi: i64| -> Option<BigRational> {
            let p = partial + self.term(i, xi, &ctr);
            (p <= *radius).then_some(p)
        };
        let Some(p0) = within(start) else {
            return Ok(out);
        };
        out.push((start, p0));
        let hi = self.bounds.upper[i];
        let mut xi = start;
        while hi.is_none_or(|h| xi < h) {
            xi += 1;
            match within(xi) {
                Some(p) => out.push((xi, p)),
                None => break,
            }
        }
        let lo = self.bounds.lower[i];
        let mut xi = start;
        while lo.is_none_or(|l| xi > l) {
            xi -= 1;
            match within(xi) {
                Some(p) => out.push((xi, p)),
                None => break,
            }
        }
        Ok(out)
    }

    fn descend(&self, i: usize, x: &mut Vec<i64>, partial: &BigRational, local: &mut Local) -> Result<()> {
        let radius = local.radius.clone();
        for (xi, p) in self.candidates(i, x, partial, &radius)? {
            // the radius may have shrunk since the candidates were listed
            if p > local.radius {
                continue;
            }
            self.tick()?;
            x[i] = xi;
            if i == 0 {
                if self.bounds.contains(x) {
                    let value = self.obj.eval(x);
                    local.offer(value, x, &self.cqc);
                }
            } else {
                self.descend(i - 1, x, &p, local)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

/// Minimizes δ over the integer points of `bounds`, starting from the
/// feasible point `start`. Returns every minimizer.
pub fn minimize(obj: &Objective<'_>, bounds: &Bounds, start: &[i64], cfg: &SearchConfig) -> Result<MinSet> {
    let lat = obj.lattice();
    let n = lat.n();
    if bounds.is_empty() || !bounds.contains(start) {
        return Err(Error::Internal("enumeration started from an infeasible point".into()));
    }
    let (d, mu) = lat.ldl();
    let center = obj.center();
    let mut cqc = BigRational::zero();
    for (i, ci) in center.iter().enumerate() {
        for (j, cj) in center.iter().enumerate() {
            let q = -lat.form()[i][j];
            if q != 0 {
                cqc += ci * cj * BigRational::from_integer(q.into());
            }
        }
    }
    let shared = Shared {
        obj,
        bounds,
        center,
        d,
        mu,
        cqc,
        visited: AtomicU64::new(0),
        limit: cfg.enum_limit,
        aborted: AtomicBool::new(false),
    };
    let best0 = obj.eval(start);
    let top = n - 1;
    let root = Local::new(best0, &shared.cqc);
    let firsts = shared.candidates(top, &vec![0i64; n], &BigRational::zero(), &root.radius)?;
    for _ in &firsts {
        shared.tick()?;
    }

    let subtrees = par::map_slice(cfg.mode, &firsts, |(xt, p)| -> Result<Local> {
        let mut local = Local::new(best0, &shared.cqc);
        let mut x = vec![0i64; n];
        x[top] = *xt;
        if top == 0 {
            if bounds.contains(&x) {
                local.offer(obj.eval(&x), &x, &shared.cqc);
            }
        } else {
            shared.descend(top - 1, &mut x, p, &mut local)?;
        }
        Ok(local)
    });

    let mut best = best0;
    let mut locals = Vec::with_capacity(subtrees.len());
    for r in subtrees {
        let local = r?;
        best = best.min(local.best);
        locals.push(local);
    }
    let mut points: Vec<IntegralCycle> = locals
        .into_iter()
        .filter(|l| l.best == best)
        .flat_map(|l| l.points)
        .map(IntegralCycle::new)
        .collect();
    points.sort();
    points.dedup();
    if points.is_empty() {
        return Err(Error::Internal("enumeration lost the feasible start point".into()));
    }
    Ok(MinSet { value: best, points })
}
