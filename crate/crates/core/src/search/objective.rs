use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::lattice::Lattice;

/// The integer-valued quadratic δ(l) = χ(x + l) − χ(x) for a fixed x ∈ L′,
/// written as 2δ(l) = −(l, l) + Σ_v w_v l_v with w_v = (Z_K, E_v) − 2 (x, E_v).
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    lat: &'a Lattice,
    linear2: Vec<i64>,
}

impl<'a> Objective<'a> {
    /// δ for the shift x whose pairings (x, E_v) are `degrees`.
    pub fn shifted(lat: &'a Lattice, degrees: &[i64]) -> Self {
        let linear2 = lat
            .canonical_degrees()
            .iter()
            .zip(degrees)
            .map(|(&k, &p)| k - 2 * p)
            .collect();
        Objective { lat, linear2 }
    }

    /// δ = χ itself.
    pub fn chi(lat: &'a Lattice) -> Self {
        Self::shifted(lat, &vec![0; lat.n()])
    }

    /// l ↦ χ(−l′ + l) − χ(−l′) for a Chern class with degrees a_v = (l′, E_v).
    pub fn anti_chern(lat: &'a Lattice, degrees: &[i64]) -> Self {
        let neg: Vec<i64> = degrees.iter().map(|a| -a).collect();
        Self::shifted(lat, &neg)
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lat
    }

    pub fn linear2(&self) -> &[i64] {
        &self.linear2
    }

    /// 2δ(l), exact.
    pub fn eval2(&self, l: &[i64]) -> i128 {
        let form = self.lat.form();
        let mut s: i128 = 0;
        for (v, &x) in l.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as i128;
            s += x * (self.linear2[v] as i128 - form[v][v] as i128 * x);
        }
        for &(a, b) in self.lat.graph().edges() {
            s -= 2 * l[a] as i128 * l[b] as i128;
        }
        s
    }

    /// δ(l), exact; 2δ is always even on L.
    pub fn eval(&self, l: &[i64]) -> i128 {
        let s = self.eval2(l);
        debug_assert!(s % 2 == 0, "2δ must be even");
        s / 2
    }

    /// The real minimizer c of δ: c = I⁻¹ w / 2.
    pub fn center(&self) -> Vec<BigRational> {
        let inv = self.lat.inverse();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        (0..self.lat.n())
            .map(|i| {
                let s: BigRational = inv[i]
                    .iter()
                    .zip(&self.linear2)
                    .map(|(m, &w)| m * BigRational::from_integer(w.into()))
                    .fold(BigRational::zero(), |a, b| a + b);
                s * &half
            })
            .collect()
    }
}
