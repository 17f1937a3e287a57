//! Eve's probabilistic cloning attack as a channel on Bob's qutrit.
//!
//! With probability q Eve applies U|i⟩|j⟩ = |i⟩|i+j mod 3⟩ to the signal and
//! a fresh ancilla |0⟩; tracing out her copy dephases the signal in the
//! computational basis. Both the closed form and the explicit 9-dimensional
//! route are provided.

use crate::error::{invalid, Result};
use crate::linalg3::{kron, partial_trace_second, Matrix3, Matrix9};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

fn check_q<T: Real>(q: T) -> Result<()> {
    if q >= T::zero() && q <= T::one() {
        Ok(())
    } else {
        Err(invalid(format!(
            "attack probability q = {q} outside [0, 1]"
        )))
    }
}

/// q·Δ(ρ) + (1-q)·ρ, with input checks.
pub fn eve_channel<T: Real>(rho: &Matrix3<T>, q: T) -> Result<Matrix3<T>> {
    check_q(q)?;
    rho.validate_density(&Tolerances::default())?;
    Ok(dephase_mix(rho, q))
}

/// The same channel through U(ρ ⊗ |0⟩⟨0|)U† and a partial trace.
pub fn eve_channel_unitary<T: Real>(rho: &Matrix3<T>, q: T) -> Result<Matrix3<T>> {
    check_q(q)?;
    rho.validate_density(&Tolerances::default())?;
    let u = Matrix9::cloning_unitary();
    let joint = u.conjugate(&kron(rho, &Matrix3::basis_projector(0)));
    Ok(partial_trace_second(&joint).scale(q) + rho.scale(T::one() - q))
}

/// Unchecked closed form. The channel is self-adjoint, so this is also Φ*.
pub fn dephase_mix<T: Real>(m: &Matrix3<T>, q: T) -> Matrix3<T> {
    m.dephased().scale(q) + m.scale(T::one() - q)
}

/// Eve's joint state after a successful attack, for inspection.
pub fn cloned_state<T: Real>(rho: &Matrix3<T>) -> Matrix9<T> {
    Matrix9::cloning_unitary().conjugate(&kron(rho, &Matrix3::basis_projector(0)))
}
