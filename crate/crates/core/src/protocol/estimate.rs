//! Monte Carlo error bars for the witness from outcome counts.

use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contextuality::{evaluate_witness, StandardErrors};
use crate::error::{invalid, Result};
use crate::seeding;
use crate::{CorrelationTable, WitnessReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResampleMode {
    /// Each outcome count redrawn from Poisson(n).
    #[default]
    Poisson,
    /// n₀ redrawn from Binomial(n₀ + n₁, n₀/(n₀ + n₁)).
    Multinomial,
}

fn resample(
    table: &CorrelationTable,
    mode: ResampleMode,
    rng: &mut seeding::StreamRng,
) -> Result<CorrelationTable> {
    let mut out = table.clone();
    for (x, y, p) in table.entries() {
        let Some([n0, n1]) = table.counts(x, y) else {
            continue;
        };
        let (m0, m1) = match mode {
            ResampleMode::Poisson => {
                let draw = |n: u64, rng: &mut seeding::StreamRng| -> u64 {
                    if n == 0 {
                        0
                    } else {
                        Poisson::new(n as f64).expect("positive mean").sample(rng) as u64
                    }
                };
                let m0 = draw(n0, rng);
                (m0, draw(n1, rng))
            }
            ResampleMode::Multinomial => {
                let n = n0 + n1;
                let m0 = Binomial::new(n, p.clamp(0.0, 1.0))
                    .map_err(|e| invalid(e.to_string()))?
                    .sample(rng);
                (m0, n - m0)
            }
        };
        if m0 + m1 > 0 {
            out.set_counts(x, y, m0, m1)?;
        }
    }
    Ok(out)
}

fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// The witness of `table` with standard deviations over `resamples`
/// redraws of its counts. Entries without counts are held fixed, and fewer
/// than two resamples give zero error bars.
pub fn estimate_witness_errors(
    table: &CorrelationTable,
    resamples: usize,
    seed: u64,
    mode: ResampleMode,
) -> Result<WitnessReport> {
    let mut report = evaluate_witness(table)?;
    let zero = StandardErrors {
        s1: 0.0,
        s2: 0.0,
        s: 0.0,
        resamples,
    };
    if resamples < 2 {
        report.errors = Some(zero);
        return Ok(report);
    }
    let values: Vec<(f64, f64)> = (0..resamples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeding::stream(seed, "resampling", i);
            let w = evaluate_witness(&resample(table, mode, &mut rng)?)?;
            Ok((w.s1, w.s2))
        })
        .collect::<Result<_>>()?;
    let s1: Vec<f64> = values.iter().map(|v| v.0).collect();
    let s2: Vec<f64> = values.iter().map(|v| v.1).collect();
    let s: Vec<f64> = values.iter().map(|v| v.0 + v.1).collect();
    report.errors = Some(StandardErrors {
        s1: sample_sd(&s1),
        s2: sample_sd(&s2),
        s: sample_sd(&s),
        ..zero
    });
    Ok(report)
}
