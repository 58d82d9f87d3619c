//! Cycles in L (integer coefficients) and L ⊗ Q (exact rational coefficients),
//! both indexed by the vertex order of the graph they live on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralCycle(Vec<i64>);

impl IntegralCycle {
    pub fn new(coeffs: Vec<i64>) -> Self {
        IntegralCycle(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        IntegralCycle(vec![0; n])
    }

    /// The reduced exceptional cycle E = Σ E_v.
    pub fn reduced(n: usize) -> Self {
        IntegralCycle(vec![1; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut c = vec![0; n];
        c[v] = 1;
        IntegralCycle(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// l ≥ 0.
    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn meet(&self, other: &Self) -> Self {
        IntegralCycle(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn join(&self, other: &Self) -> Self {
        IntegralCycle(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// Keeps the coefficients on `keep` and zeroes the rest.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        IntegralCycle(
            self.0
                .iter()
                .zip(keep)
                .map(|(&x, &k)| if k { x } else { 0 })
                .collect(),
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        IntegralCycle(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn to_rational(&self) -> RationalCycle {
        RationalCycle(self.0.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Pointwise minimum of a nonempty family.
    pub fn meet_all<'a>(items: impl IntoIterator<Item = &'a IntegralCycle>) -> Option<Self> {
        items.into_iter().fold(None, |acc, c| {
            Some(match acc {
                None => c.clone(),
                Some(a) => a.meet(c),
            })
        })
    }

    /// Pointwise maximum of a nonempty family.
    pub fn join_all<'a>(items: impl IntoIterator<Item = &'a IntegralCycle>) -> Option<Self> {
        items.into_iter().fold(None, |acc, c| {
            Some(match acc {
                None => c.clone(),
                Some(a) => a.join(c),
            })
        })
    }

    /// Serializes as `id=coeff,...` listing only nonzero coefficients.
    pub fn to_spec(&self, g: &ResolutionGraph) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(v, x)| format!("{}={}", g.ids()[v], x))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for IntegralCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for &IntegralCycle {
    type Output = IntegralCycle;
    fn add(self, rhs: &IntegralCycle) -> IntegralCycle {
        IntegralCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntegralCycle {
    type Output = IntegralCycle;
    fn sub(self, rhs: &IntegralCycle) -> IntegralCycle {
        IntegralCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntegralCycle {
    type Output = IntegralCycle;
    fn neg(self) -> IntegralCycle {
        IntegralCycle(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalCycle(Vec<BigRational>);

impl RationalCycle {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        RationalCycle(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        RationalCycle(vec![BigRational::zero(); n])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        IntegralCycle::new(coeffs.to_vec()).to_rational()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Returns the integral cycle when every coefficient is an integer.
    pub fn to_integral(&self) -> Option<IntegralCycle> {
        self.0
            .iter()
            .map(|x| {
                if x.is_integer() {
                    i64::try_from(x.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(IntegralCycle)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RationalCycle(self.0.iter().map(|x| x * k).collect())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        })
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }
}

impl Add for &RationalCycle {
    type Output = RationalCycle;
    fn add(self, rhs: &RationalCycle) -> RationalCycle {
        RationalCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalCycle {
    type Output = RationalCycle;
    fn sub(self, rhs: &RationalCycle) -> RationalCycle {
        RationalCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalCycle {
    type Output = RationalCycle;
    fn neg(self) -> RationalCycle {
        RationalCycle(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&RationalCycle> for i64 {
    type Output = RationalCycle;
    fn mul(self, rhs: &RationalCycle) -> RationalCycle {
        rhs.scale(&BigRational::from_integer(self.into()))
    }
}

fn parse_assignments(g: &ResolutionGraph, spec: &str) -> Result<Vec<i64>> {
    let mut coeffs = vec![0i64; g.len()];
    let mut seen = vec![false; g.len()];
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(coeffs);
    }
    for (k, item) in spec.split(',').enumerate() {
        let parse_err = |message: String| Error::Parse {
            line: 1,
            column: k + 1,
            message,
        };
        let (id, value) = item
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `id=value`, got `{item}`")))?;
        let id = id.trim();
        let v = g.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
        if seen[v] {
            return Err(parse_err(format!("vertex `{id}` assigned twice")));
        }
        seen[v] = true;
        coeffs[v] = value
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("bad integer `{}` for `{id}`: {e}", value.trim())))?;
    }
    Ok(coeffs)
}

/// Parses `v1=2,v2=1` (E-coordinates); absent vertices get coefficient 0.
pub fn parse_cycle(g: &ResolutionGraph, spec: &str) -> Result<IntegralCycle> {
    parse_assignments(g, spec).map(IntegralCycle)
}

/// Parses `v1=1` as E*-coordinates a_v ≥ 0, meaning l' = −Σ a_v E*_v.
pub fn parse_estar_coeffs(g: &ResolutionGraph, spec: &str) -> Result<Vec<i64>> {
    let coeffs = parse_assignments(g, spec)?;
    if let Some(v) = coeffs.iter().position(|&a| a < 0) {
        return Err(Error::Parse {
            line: 1,
            column: v + 1,
            message: format!("E*-coefficient of `{}` must be nonnegative", g.ids()[v]),
        });
    }
    Ok(coeffs)
}
