//! Exact arithmetic on L and L′ for a fixed negative definite plumbing tree.
//!
//! [`Lattice`] owns the intersection form, its exact inverse, the anti-dual
//! basis E*_v, the canonical cycle Z_K and an LDLᵀ factorization of the
//! positive definite form Q = −I used by the enumeration code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cycle::{IntegralCycle, RationalCycle};
use crate::error::{Error, Result};
use crate::graph::{self, ResolutionGraph};

/// Input magnitudes are capped so that every integer pairing fits in i128.
pub const MAX_COEFF: i64 = 1_000_000_000;

#[derive(Debug, Clone)]
pub struct Lattice {
    graph: ResolutionGraph,
    form: Vec<Vec<i64>>,
    neighbors: Vec<Vec<usize>>,
    inverse: Vec<Vec<BigRational>>,
    dual: Vec<RationalCycle>,
    zk: RationalCycle,
    canonical_degrees: Vec<i64>,
    det: BigInt,
    ldl_d: Vec<BigRational>,
    ldl_mu: Vec<Vec<BigRational>>,
}

/// An element of L′ with its integral pairings a_v = (l′, E_v), so that
/// l′ = −Σ a_v E*_v. The E*-coefficients are kept only when every a_v ≥ 0,
/// which certifies l′ ∈ −S′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernClass {
    as_rational: RationalCycle,
    degrees: Vec<i64>,
    estar_coeffs: Option<Vec<i64>>,
}

impl ChernClass {
    pub fn as_rational(&self) -> &RationalCycle {
        &self.as_rational
    }

    /// (l′, E_v) for every vertex.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn estar_coeffs(&self) -> Option<&[i64]> {
        self.estar_coeffs.as_deref()
    }

    pub fn is_anti_lipman(&self) -> bool {
        self.estar_coeffs.is_some()
    }

    /// I(l′): vertices with a_v ≠ 0.
    pub fn estar_support(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&v| self.degrees[v] != 0).collect()
    }

    /// |l′|_*: vertices with (l′, E_v) > 0.
    ///
    /// The positive sign is the one under which the binomial product
    /// C(t_v, (l′, E_v)) has nonnegative lower arguments; for l′ ∈ −S′ this
    /// set coincides with the E*-support.
    pub fn positive_support(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&v| self.degrees[v] > 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|&a| a == 0)
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - t;
                    let t = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - t;
                }
            }
        }
    }
    Some(inv)
}

/// Q = Mᵀ·diag(d)·M with M unit upper triangular; `mu[i][j]` holds M_ij (j > i).
fn ldl(q: &[Vec<i64>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = q.len();
    let mut d = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut di = rat(q[i][i]);
        for k in 0..i {
            di -= &d[k] * &mu[k][i] * &mu[k][i];
        }
        for j in i + 1..n {
            let mut s = rat(q[i][j]);
            for k in 0..i {
                s -= &d[k] * &mu[k][i] * &mu[k][j];
            }
            mu[i][j] = s / &di;
        }
        mu[i][i] = BigRational::one();
        d[i] = di;
    }
    (d, mu)
}

impl Lattice {
    /// Fails with `INVALID_GRAPH` unless the graph is a negative definite tree.
    pub fn new(graph: &ResolutionGraph) -> Result<Self> {
        let report = graph::validate(graph);
        if !report.ok {
            return Err(Error::InvalidGraph(report));
        }
        if let Some(v) = graph.euler().iter().position(|e| e.abs() > MAX_COEFF) {
            return Err(Error::Precondition(format!(
                "Euler number of `{}` exceeds {MAX_COEFF} in magnitude",
                graph.ids()[v]
            )));
        }
        let n = graph.len();
        let form = graph.intersection_matrix();
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in graph.edges() {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        let inverse = invert(&form).ok_or_else(|| Error::Internal("singular definite form".into()))?;
        let dual: Vec<RationalCycle> = (0..n)
            .map(|u| RationalCycle::new((0..n).map(|w| -&inverse[w][u]).collect()))
            .collect();
        let canonical_degrees: Vec<i64> = graph.euler().iter().map(|e| e + 2).collect();
        let zk = RationalCycle::new(
            (0..n)
                .map(|i| (0..n).map(|j| &inverse[i][j] * rat(canonical_degrees[j])).sum())
                .collect(),
        );
        let q: Vec<Vec<i64>> = form.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let (ldl_d, ldl_mu) = ldl(&q);
        let lat = Lattice {
            graph: graph.clone(),
            det: graph::determinant(&form),
            form,
            neighbors,
            inverse,
            dual,
            zk,
            canonical_degrees,
            ldl_d,
            ldl_mu,
        };
        lat.check_adjunction()?;
        Ok(lat)
    }

    fn check_adjunction(&self) -> Result<()> {
        for v in 0..self.n() {
            let ev = IntegralCycle::unit(self.n(), v).to_rational();
            let lhs = self.intersect(&(&ev - &self.zk), &ev)? + rat(2);
            if !lhs.is_zero() {
                return Err(Error::Internal(format!("adjunction residual {lhs} at vertex {v}")));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &ResolutionGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.len()
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// det of the intersection form I.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// E*_v for every vertex: (E*_u, E_w) = −δ_uw.
    pub fn dual_basis(&self) -> &[RationalCycle] {
        &self.dual
    }

    pub fn e_star(&self, v: usize) -> &RationalCycle {
        &self.dual[v]
    }

    /// Z_K, the solution of (−Z_K + E_v, E_v) + 2 = 0.
    pub fn canonical_cycle(&self) -> &RationalCycle {
        &self.zk
    }

    /// (Z_K, E_v) = E_v² + 2.
    pub fn canonical_degrees(&self) -> &[i64] {
        &self.canonical_degrees
    }

    pub fn ldl(&self) -> (&[BigRational], &[Vec<BigRational>]) {
        (&self.ldl_d, &self.ldl_mu)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.n() {
            return Err(Error::GraphMismatch {
                expected: self.n(),
                found,
            });
        }
        Ok(())
    }

    pub fn check_cycle(&self, x: &IntegralCycle) -> Result<()> {
        self.check_len(x.len())?;
        if let Some(v) = x.coeffs().iter().position(|c| c.abs() > MAX_COEFF) {
            return Err(Error::Precondition(format!(
                "coefficient of `{}` exceeds {MAX_COEFF} in magnitude",
                self.graph.ids()[v]
            )));
        }
        Ok(())
    }

    pub fn intersect(&self, a: &RationalCycle, b: &RationalCycle) -> Result<BigRational> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        let (a, b) = (a.coeffs(), b.coeffs());
        let mut s = BigRational::zero();
        for (i, row) in self.form.iter().enumerate() {
            if a[i].is_zero() {
                continue;
            }
            let mut t = b[i].clone() * rat(row[i]);
            for &j in &self.neighbors[i] {
                t += &b[j];
            }
            s += &a[i] * t;
        }
        Ok(s)
    }

    /// (x, E_v) for integral x.
    pub fn degree_at(&self, x: &IntegralCycle, v: usize) -> i128 {
        let c = x.coeffs();
        let mut s = self.form[v][v] as i128 * c[v] as i128;
        for &w in &self.neighbors[v] {
            s += c[w] as i128;
        }
        s
    }

    pub fn intersect_integral(&self, a: &IntegralCycle, b: &IntegralCycle) -> i128 {
        (0..self.n())
            .map(|v| a.coeffs()[v] as i128 * self.degree_at(b, v))
            .sum()
    }

    /// χ(x) = −(x, x − Z_K)/2.
    pub fn chi(&self, x: &RationalCycle) -> Result<BigRational> {
        let y = x - &self.zk;
        Ok(-self.intersect(x, &y)? / rat(2))
    }

    /// χ on L, in integer arithmetic: χ(l) = (−(l,l) + Σ l_v (Z_K, E_v)) / 2.
    pub fn chi_integral(&self, l: &IntegralCycle) -> i128 {
        let lin: i128 = l
            .coeffs()
            .iter()
            .zip(&self.canonical_degrees)
            .map(|(&x, &k)| x as i128 * k as i128)
            .sum();
        (lin - self.intersect_integral(l, l)) / 2
    }

    /// The pairings (x, E_v) of a rational cycle.
    pub fn pairings(&self, x: &RationalCycle) -> Result<Vec<BigRational>> {
        self.check_len(x.len())?;
        let c = x.coeffs();
        Ok((0..self.n())
            .map(|v| {
                let mut s = &c[v] * rat(self.form[v][v]);
                for &w in &self.neighbors[v] {
                    s += &c[w];
                }
                s
            })
            .collect())
    }

    /// Writes x = −Σ a_v E*_v with a_v = (x, E_v); fails unless every a_v is
    /// an integer.
    pub fn to_estar(&self, x: &RationalCycle) -> Result<ChernClass> {
        let pairings = self.pairings(x)?;
        let mut degrees = Vec::with_capacity(self.n());
        for (v, p) in pairings.iter().enumerate() {
            if !p.is_integer() {
                return Err(Error::NotInLPrime {
                    vertex: self.graph.ids()[v].clone(),
                    pairing: p.to_string(),
                });
            }
            let a = p
                .to_integer()
                .to_i64()
                .filter(|a| a.abs() <= MAX_COEFF * 64)
                .ok_or(Error::Overflow("Chern class degree"))?;
            degrees.push(a);
        }
        let estar_coeffs = degrees.iter().all(|&a| a >= 0).then(|| degrees.clone());
        Ok(ChernClass {
            as_rational: x.clone(),
            degrees,
            estar_coeffs,
        })
    }

    /// l′ = −Σ a_v E*_v from nonnegative E*-coefficients.
    pub fn chern_from_estar(&self, a: &[i64]) -> Result<ChernClass> {
        self.check_len(a.len())?;
        if let Some(v) = a.iter().position(|&x| !(0..=MAX_COEFF).contains(&x)) {
            return Err(Error::Precondition(format!(
                "E*-coefficient of `{}` must lie in [0, {MAX_COEFF}]",
                self.graph.ids()[v]
            )));
        }
        let mut x = RationalCycle::zero(self.n());
        for (v, &av) in a.iter().enumerate() {
            if av != 0 {
                x = &x - &self.dual[v].scale(&rat(av));
            }
        }
        Ok(ChernClass {
            as_rational: x,
            degrees: a.to_vec(),
            estar_coeffs: Some(a.to_vec()),
        })
    }

    /// The class of an integral cycle viewed in L′.
    pub fn chern_of_cycle(&self, l: &IntegralCycle) -> Result<ChernClass> {
        self.check_cycle(l)?;
        self.to_estar(&l.to_rational())
    }

    /// Lipman cone membership: (x, E_v) ≤ 0 for all v.
    pub fn in_lipman_cone(&self, x: &RationalCycle) -> Result<bool> {
        Ok(self.pairings(x)?.iter().all(|p| !p.is_positive()))
    }

    pub fn in_lipman_cone_integral(&self, x: &IntegralCycle) -> bool {
        (0..self.n()).all(|v| self.degree_at(x, v) <= 0)
    }

    /// Connected components (in vertex order) of the subgraph induced on `mask`.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if !mask[start] || comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.neighbors[v] {
                    if mask[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The restrictions of `x` to the connected components of its support.
    pub fn split_by_support(&self, x: &IntegralCycle) -> Vec<IntegralCycle> {
        let mask: Vec<bool> = x.coeffs().iter().map(|&c| c != 0).collect();
        self.components(&mask)
            .into_iter()
            .map(|comp| {
                let mut keep = vec![false; self.n()];
                for v in comp {
                    keep[v] = true;
                }
                x.restrict(&keep)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a1_basics() {
        let lat = Lattice::new(&ResolutionGraph::a_n(1)).unwrap();
        let e = RationalCycle::from_ints(&[1]);
        assert_eq!(lat.intersect(&e, &e).unwrap(), rat(-2));
        assert_eq!(lat.e_star(0).coeffs(), &[q(1, 2)]);
        assert!(lat.canonical_cycle().is_zero());
        assert_eq!(lat.chi(&e).unwrap(), rat(1));
        assert_eq!(lat.chi(&RationalCycle::zero(1)).unwrap(), rat(0));
        assert!(lat.in_lipman_cone(&e).unwrap());
    }

    #[test]
    fn a2_dual_basis() {
        let lat = Lattice::new(&ResolutionGraph::a_n(2)).unwrap();
        let e1 = RationalCycle::from_ints(&[1, 0]);
        let e2 = RationalCycle::from_ints(&[0, 1]);
        assert_eq!(lat.intersect(&e1, &e2).unwrap(), rat(1));
        // I⁻¹ of [[-2,1],[1,-2]] is -(1/3)[[2,1],[1,2]]
        assert_eq!(lat.e_star(0).coeffs(), &[q(2, 3), q(1, 3)]);
        assert_eq!(lat.intersect(lat.e_star(0), &e1).unwrap(), rat(-1));

        let x = &(-lat.e_star(0)) - &lat.e_star(1).scale(&rat(2));
        let c = lat.to_estar(&x).unwrap();
        assert_eq!(c.estar_coeffs(), Some(&[1, 2][..]));
        assert_eq!(c.positive_support(), vec![0, 1]);
    }

    #[test]
    fn star_canonical_cycle() {
        let lat = Lattice::new(&ResolutionGraph::star(-3, &[&[-2], &[-2], &[-2]])).unwrap();
        assert_eq!(lat.canonical_cycle().coeffs(), &[q(2, 3), q(1, 3), q(1, 3), q(1, 3)]);
    }

    #[test]
    fn estar_of_dual_vectors() {
        let lat = Lattice::new(&ResolutionGraph::d_n(5)).unwrap();
        for v in 0..5 {
            let c = lat.to_estar(&(-lat.e_star(v))).unwrap();
            let mut unit = [0; 5];
            unit[v] = 1;
            assert_eq!(c.estar_coeffs(), Some(&unit[..]));
            assert_eq!(c.positive_support(), vec![v]);
            assert!(lat.in_lipman_cone(lat.e_star(v)).unwrap());
            assert!(!lat.in_lipman_cone(&(-lat.e_star(v))).unwrap());
            assert!(lat.e_star(v).all_positive());
        }
        let zero = lat.to_estar(&RationalCycle::zero(5)).unwrap();
        assert!(zero.positive_support().is_empty());
        assert_eq!(zero.estar_coeffs(), Some(&[0; 5][..]));
    }

    #[test]
    fn non_dual_class_is_rejected() {
        let lat = Lattice::new(&ResolutionGraph::a_n(1)).unwrap();
        let err = lat.to_estar(&RationalCycle::new(vec![q(1, 3)])).unwrap_err();
        assert_eq!(err.code(), "NOT_IN_LPRIME");
    }

    #[test]
    fn integral_chi_matches_rational() {
        let lat = Lattice::new(&ResolutionGraph::star(-3, &[&[-2], &[-4, -2], &[-3]])).unwrap();
        let l = IntegralCycle::new(vec![2, 1, 3, 0, -1]);
        assert_eq!(BigRational::from_integer(lat.chi_integral(&l).into()), lat.chi(&l.to_rational()).unwrap());
    }

    #[test]
    fn graph_mismatch() {
        let lat = Lattice::new(&ResolutionGraph::a_n(2)).unwrap();
        let err = lat.intersect(&RationalCycle::zero(3), &RationalCycle::zero(2)).unwrap_err();
        assert_eq!(err.code(), "GRAPH_MISMATCH");
    }

    #[test]
    fn invalid_graph_is_refused() {
        let g = ResolutionGraph::from_indexed(&[-1, -1], &[(0, 1)]).unwrap();
        assert_eq!(Lattice::new(&g).unwrap_err().code(), "INVALID_GRAPH");
    }
}
