//! Quantum strategies: Alice's nine preparations and Bob's eight binary
//! measurements, and the Born-rule correlations they produce.

use serde::Serialize;

use crate::contextuality::graph::Vertex;
use crate::contextuality::table::{CorrelationTable, NUM_MEASUREMENTS, NUM_PREPARATIONS};
use crate::error::{invalid, Result};
use crate::linalg3::{Matrix3, Vector3};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// States ρ_x (x = 0..=8) and outcome-0 effects M_{0|y} (y = 1..=8). The
/// outcome-1 effect is I - M_{0|y}.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Strategy<T> {
    pub preparations: [Matrix3<T>; NUM_PREPARATIONS],
    pub measurements: [Matrix3<T>; NUM_MEASUREMENTS],
}

impl<T: Real> Strategy<T> {
    pub fn state(&self, x: Vertex) -> &Matrix3<T> {
        &self.preparations[x as usize]
    }

    /// M_{0|y}, for y in 1..=8.
    pub fn effect(&self, y: Vertex) -> &Matrix3<T> {
        &self.measurements[y as usize - 1]
    }

    pub fn effect_mut(&mut self, y: Vertex) -> &mut Matrix3<T> {
        &mut self.measurements[y as usize - 1]
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        for (x, rho) in self.preparations.iter().enumerate() {
            rho.validate_density(tol)
                .map_err(|e| invalid(format!("preparation {x}: {e}")))?;
        }
        for (i, m) in self.measurements.iter().enumerate() {
            m.validate_effect(tol)
                .map_err(|e| invalid(format!("measurement {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    /// Applies `channel` to every preparation, giving the states Bob receives.
    pub fn map_states(&self, channel: impl Fn(&Matrix3<T>) -> Matrix3<T>) -> Self {
        Self {
            preparations: self.preparations.map(|r| channel(&r)),
            measurements: self.measurements,
        }
    }
}

/// The five KCBS vectors on the pentagon, v_k for k = 0..5, assigned to
/// vertices 1..=5. Cyclic neighbors are orthogonal and each has overlap
/// |⟨0|v_k⟩|² = 1/√5 with the symmetry axis |0⟩.
pub fn kcbs_vectors<T: Real>() -> [Vector3<T>; 5] {
    let pi = T::PI();
    let cos36 = (pi / T::lit(5.0)).cos();
    let cos_theta = (cos36 / (T::one() + cos36)).sqrt();
    let sin_theta = (T::one() - cos_theta * cos_theta).sqrt();
    std::array::from_fn(|k| {
        let phi = T::lit(4.0) * pi * T::lit(k as f64) / T::lit(5.0);
        Vector3::real(cos_theta, sin_theta * phi.cos(), sin_theta * phi.sin())
    })
}

/// Unit vectors for detector labels 1..=10 in the ideal realization: the
/// pentagon, then 6, 7, 8 completing the contexts {2,3,6}, {4,5,7}, {1,5,8},
/// then the auxiliary 9 and 10 completing {1,2,9} and {3,4,10}. Index 0 of
/// the result is the symmetry axis |0⟩ used as preparation 0.
pub fn ideal_vectors<T: Real>() -> [Vector3<T>; 11] {
    let k = kcbs_vectors::<T>();
    let v = |i: usize| k[i - 1];
    [
        Vector3::basis(0),
        v(1),
        v(2),
        v(3),
        v(4),
        v(5),
        v(2).orthogonal_complement(&v(3)),
        v(4).orthogonal_complement(&v(5)),
        v(1).orthogonal_complement(&v(5)),
        v(1).orthogonal_complement(&v(2)),
        v(3).orthogonal_complement(&v(4)),
    ]
}

/// ρ_0 = |0⟩⟨0|, ρ_x the projector on vertex x's ideal vector, and
/// M_{0|y} = ρ_y. Reaches 30 on the orthogonality part and √5 on the KCBS part.
pub fn ideal_strategy<T: Real>() -> Strategy<T> {
    let v = ideal_vectors::<T>();
    Strategy {
        preparations: std::array::from_fn(|x| v[x].projector()),
        measurements: std::array::from_fn(|i| v[i + 1].projector()),
    }
}

/// p(0|x,y) = tr(ρ_x M_{0|y}) after validating the strategy at default tolerances.
pub fn born_correlations<T: Real>(strategy: &Strategy<T>) -> Result<CorrelationTable<T>> {
    born_correlations_with(strategy, &Tolerances::default())
}

pub fn born_correlations_with<T: Real>(
    strategy: &Strategy<T>,
    tol: &Tolerances,
) -> Result<CorrelationTable<T>> {
    strategy.validate(tol)?;
    Ok(born_unchecked(strategy))
}

/// Born probabilities clamped into [0, 1], without validation.
pub(crate) fn born_unchecked<T: Real>(strategy: &Strategy<T>) -> CorrelationTable<T> {
    CorrelationTable::from_fn(|x, y| {
        strategy
            .state(x)
            .trace_product(strategy.effect(y))
            .max(T::zero())
            .min(T::one())
    })
}
