//! Exhaustive tabulation of an objective over an integer box, plus
//! downward prefix minima (the minimum over every sub-box [lower, x]).
//!
//! Points are stored row-major with vertex 0 varying slowest, so index order
//! is the lexicographic order of coefficient vectors.

use super::objective::Objective;
use crate::config::SearchConfig;
use crate::cycle::IntegralCycle;
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};

/// Sentinel for excluded points in a table.
pub const EXCLUDED: i64 = i64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxShape {
    lower: Vec<i64>,
    extent: Vec<usize>,
    stride: Vec<usize>,
    size: usize,
}

impl BoxShape {
    /// The box [lower, upper]; fails with REGION_TOO_LARGE when it has more
    /// than `limit` points.
    pub fn new(lower: &[i64], upper: &[i64], limit: u64) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::GraphMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if let Some(v) = (0..lower.len()).find(|&v| lower[v] > upper[v]) {
            return Err(Error::Precondition(format!(
                "box lower bound exceeds upper bound at vertex {v}"
            )));
        }
        let n = lower.len();
        let mut extent = Vec::with_capacity(n);
        let mut size: u64 = 1;
        for v in 0..n {
            let e = (upper[v] as i128 - lower[v] as i128 + 1) as u128;
            let e = u64::try_from(e).map_err(|_| Error::RegionTooLarge { limit })?;
            size = size.checked_mul(e).ok_or(Error::RegionTooLarge { limit })?;
            if size > limit {
                return Err(Error::RegionTooLarge { limit });
            }
            extent.push(e as usize);
        }
        let mut stride = vec![1usize; n];
        for v in (0..n.saturating_sub(1)).rev() {
            stride[v] = stride[v + 1] * extent[v + 1];
        }
        Ok(BoxShape {
            lower: lower.to_vec(),
            extent,
            stride,
            size: size as usize,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> Vec<i64> {
        self.lower
            .iter()
            .zip(&self.extent)
            .map(|(&l, &e)| l + e as i64 - 1)
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && (0..self.dim()).all(|v| x[v] >= self.lower[v] && x[v] - self.lower[v] < self.extent[v] as i64)
    }

    pub fn index(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        Some((0..self.dim()).map(|v| (x[v] - self.lower[v]) as usize * self.stride[v]).sum())
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut x = self.lower.clone();
        for (xv, &s) in x.iter_mut().zip(&self.stride) {
            *xv += (idx / s) as i64;
            idx %= s;
        }
        x
    }
}

/// Objective values over a box, `EXCLUDED` where a point was left out.
#[derive(Debug, Clone)]
pub struct BoxTable {
    pub shape: BoxShape,
    pub values: Vec<i64>,
}

impl BoxTable {
    /// Tabulates δ over [lower, upper]; the origin is excluded when
    /// `exclude_zero` is set.
    pub fn tabulate(
        obj: &Objective<'_>,
        lower: &[i64],
        upper: &[i64],
        exclude_zero: bool,
        cfg: &SearchConfig,
    ) -> Result<Self> {
        let shape = BoxShape::new(lower, upper, cfg.enum_limit)?;
        let chunk = 4096;
        let pieces = shape.size().div_ceil(chunk);
        let parts = par::map_range(cfg.mode, 0..pieces, |p| -> Result<Vec<i64>> {
            let lo = p * chunk;
            let hi = (lo + chunk).min(shape.size());
            (lo..hi)
                .map(|idx| {
                    let x = shape.point(idx);
                    if exclude_zero && x.iter().all(|&c| c == 0) {
                        return Ok(EXCLUDED);
                    }
                    i64::try_from(obj.eval(&x)).map_err(|_| Error::Overflow("box table value"))
                })
                .collect()
        });
        let mut values = Vec::with_capacity(shape.size());
        for part in parts {
            values.extend(part?);
        }
        Ok(BoxTable { shape, values })
    }

    pub fn get(&self, x: &[i64]) -> Option<i64> {
        self.shape.index(x).map(|i| self.values[i])
    }

    /// Minimum over the table and all points attaining it (sorted); `None`
    /// if every point is excluded.
    pub fn minimum(&self, mode: ExecMode) -> Option<(i64, Vec<IntegralCycle>)> {
        let best = par::fold_range(
            mode,
            0..self.values.len(),
            4096,
            EXCLUDED,
            |a, i| a.min(self.values[i]),
            |a, b| a.min(b),
        );
        if best == EXCLUDED {
            return None;
        }
        let points = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == best)
            .map(|(i, _)| IntegralCycle::new(self.shape.point(i)))
            .collect();
        Some((best, points))
    }

    /// Replaces every entry by the minimum over the sub-box [lower, x].
    pub fn into_prefix_min(mut self, mode: ExecMode) -> Self {
        prefix_min(&self.shape, &mut self.values, mode);
        self
    }
}

/// In-place downward prefix minimum along every axis.
pub fn prefix_min(shape: &BoxShape, values: &mut [i64], mode: ExecMode) {
    for axis in 0..shape.dim() {
        let stride = shape.stride[axis];
        let extent = shape.extent[axis];
        if extent < 2 {
            continue;
        }
        let block = stride * extent;
        par::for_each_chunk_mut(mode, values, block, |chunk| {
            for k in 1..extent {
                let (prev, cur) = chunk.split_at_mut(k * stride);
                let prev = &prev[(k - 1) * stride..];
                for off in 0..stride {
                    if prev[off] < cur[off] {
                        cur[off] = prev[off];
                    }
                }
            }
        });
    }
}
