//! Simulation and security analysis for prepare-and-measure QKD certified by
//! contextuality on the extended KCBS graph.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the protocol simulator, the source
//! models and the command-line tool use.

pub mod contextuality;
pub mod data;
pub mod error;
pub mod linalg3;
pub mod protocol;
pub mod scalar;
pub mod security;
pub mod seeding;
pub mod source;
pub mod tolerance;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerance::Tolerances;

pub type Complex = num_complex::Complex<f64>;
pub type ComplexVector3 = linalg3::Vector3<f64>;
pub type ComplexMatrix3 = linalg3::Matrix3<f64>;
pub type ComplexMatrix9 = linalg3::Matrix9<f64>;
pub type Strategy = contextuality::Strategy<f64>;
pub type CorrelationTable = contextuality::CorrelationTable<f64>;
pub type WitnessReport = contextuality::WitnessReport<f64>;
pub type JointDistribution2x2 = security::JointDistribution<f64>;
pub type KeyRateReport = security::KeyRateReport<f64>;
