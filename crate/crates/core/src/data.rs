//! Bundled data files.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Measured context tables of the single-photon source (orthogonality and KCBS blocks).
pub const MEASURED_CONTEXTS_CSV: &str = include_str!("../data/measured_contexts.csv");

/// Weak-coherent KCBS values against average photon number.
pub const COHERENT_KCBS_CSV: &str = include_str!("../data/coherent_kcbs.csv");

/// Born probabilities of the ideal strategy in the context schema.
pub const IDEAL_TABLE_CSV: &str = include_str!("../data/ideal_table.csv");

/// Every detector at probability 1/2.
pub const UNIFORM_TABLE_CSV: &str = include_str!("../data/uniform_table.csv");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentKcbsPoint {
    pub average_photon_number: f64,
    pub kcbs: f64,
}

pub fn coherent_kcbs_points() -> Result<Vec<CoherentKcbsPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(COHERENT_KCBS_CSV.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// The ideal-strategy context table, regenerated from the ideal vectors.
pub fn ideal_table_text() -> String {
    let v = crate::contextuality::ideal_vectors::<f64>();
    crate::contextuality::write_context_csv(
        "Born probabilities |<v_y|v_x>|^2 of the ideal KCBS realization.\nPreparation 0 is the symmetry axis |0>.",
        |x, y| v[y as usize].inner(&v[x as usize]).norm_sqr(),
    )
}
