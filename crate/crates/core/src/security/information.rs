//! Binary joint distributions and Shannon mutual information.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// p(a, b) for a, b ∈ {0, 1}, stored as `p[a][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution<T> {
    pub p: [[T; 2]; 2],
}

impl<T: Real> JointDistribution<T> {
    /// Entries must be non-negative and sum to one within 1e-9.
    pub fn new(p: [[T; 2]; 2]) -> Result<Self> {
        let slack = T::lit(1e-9);
        let flat = [p[0][0], p[0][1], p[1][0], p[1][1]];
        if flat.iter().any(|v| !v.is_finite() || *v < -slack) {
            return Err(invalid(format!(
                "joint distribution has a negative entry: {flat:?}"
            )));
        }
        let total: T = flat.iter().copied().sum();
        if (total - T::one()).abs() > slack {
            return Err(invalid(format!("joint distribution sums to {total}")));
        }
        Ok(Self {
            p: p.map(|row| row.map(|v| v.max(T::zero()))),
        })
    }

    /// Accumulates weighted (a, b) events, then normalizes.
    pub fn from_weights(w: [[T; 2]; 2]) -> Result<Self> {
        let total = w[0][0] + w[0][1] + w[1][0] + w[1][1];
        if !(total > T::zero()) {
            return Err(invalid("joint distribution has no weight"));
        }
        Self::new(w.map(|row| row.map(|v| v / total)))
    }

    pub fn product(pa0: T, pb0: T) -> Result<Self> {
        let (pa1, pb1) = (T::one() - pa0, T::one() - pb0);
        Self::new([[pa0 * pb0, pa0 * pb1], [pa1 * pb0, pa1 * pb1]])
    }

    pub fn marginal_a(&self) -> [T; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    pub fn marginal_b(&self) -> [T; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }

    /// Swaps the roles of the two variables.
    pub fn transposed(&self) -> Self {
        Self {
            p: [[self.p[0][0], self.p[1][0]], [self.p[0][1], self.p[1][1]]],
        }
    }
}

/// H(p) in bits.
pub fn binary_entropy<T: Real>(p: T) -> T {
    entropy(&[p, T::one() - p])
}

fn entropy<T: Real>(ps: &[T]) -> T {
    ps.iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| -p * p.log2())
        .sum()
}

/// I(A:B) = Σ p(a,b) log₂[p(a,b) / p(a)p(b)] in bits, with 0·log 0 = 0.
pub fn mutual_information<T: Real>(j: &JointDistribution<T>) -> T {
    let (pa, pb) = (j.marginal_a(), j.marginal_b());
    let mut total = T::zero();
    for a in 0..2 {
        for b in 0..2 {
            let pab = j.p[a][b];
            if pab > T::zero() {
                total = total + pab * (pab / (pa[a] * pb[b])).log2();
            }
        }
    }
    total.max(T::zero())
}
