//! Photon-number statistics of the light source and their effect on the
//! observed correlations.
//!
//! A round with n signal photons routes each photon independently to the
//! preferred detector of measurement y with the single-photon probability
//! q₀ = p(0|x,y), and to one of the other two detectors otherwise. Dark
//! counts fire each of the three detectors independently. The round reads
//! outcome 0 only when the preferred detector is the *only* one to click;
//! rounds without any click are discarded. Photons do not interfere with
//! each other in this model.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::contextuality::evaluate_witness;
use crate::error::{Error, Result};
use crate::CorrelationTable;

pub const DEFAULT_N_MAX: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    /// On-demand single photons with a residual two-photon probability.
    Deterministic,
    /// Attenuated laser, Poissonian photon number.
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    pub kind: SourceKind,
    /// Mean photon number per window; only used by the coherent kind.
    pub mu: f64,
    /// P(n = 2) of the deterministic kind.
    pub two_photon_prob: f64,
    /// Per-detector, per-window dark click probability.
    pub dark_count_prob: f64,
    /// Photon-number truncation.
    pub n_max: usize,
}

impl SourceModel {
    pub fn deterministic(two_photon_prob: f64) -> Self {
        Self {
            kind: SourceKind::Deterministic,
            mu: 1.0,
            two_photon_prob,
            dark_count_prob: 0.0,
            n_max: DEFAULT_N_MAX,
        }
    }

    /// A perfect single-photon source.
    pub fn single_photon() -> Self {
        Self::deterministic(0.0)
    }

    pub fn coherent(mu: f64) -> Self {
        Self {
            kind: SourceKind::Coherent,
            mu,
            two_photon_prob: 0.0,
            dark_count_prob: 0.0,
            n_max: DEFAULT_N_MAX,
        }
    }

    pub fn with_dark_counts(mut self, p: f64) -> Self {
        self.dark_count_prob = p;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!(
                    "{name} = {p} is not a probability"
                )))
            }
        };
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "mean photon number {} must be finite and ≥ 0",
                self.mu
            )));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidModel(format!(
                "n_max = {} must be at least 2",
                self.n_max
            )));
        }
        prob("two_photon_prob", self.two_photon_prob)?;
        prob("dark_count_prob", self.dark_count_prob)
    }

    /// P(n) for n = 0..=n_max, summing to one.
    pub fn photon_number_pmf(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let mut pmf = vec![0.0; self.n_max + 1];
        match self.kind {
            SourceKind::Deterministic => {
                pmf[1] = 1.0 - self.two_photon_prob;
                pmf[2] = self.two_photon_prob;
            }
            SourceKind::Coherent => {
                let mut term = (-self.mu).exp();
                pmf[0] = term;
                for (n, slot) in pmf.iter_mut().enumerate().skip(1) {
                    term *= self.mu / n as f64;
                    *slot = term;
                }
                let total: f64 = pmf.iter().sum();
                pmf.iter_mut().for_each(|p| *p /= total);
            }
        }
        Ok(pmf)
    }

    /// Mean photon number of the (truncated) distribution.
    pub fn mean_photon_number(&self) -> Result<f64> {
        Ok(self
            .photon_number_pmf()?
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum())
    }

    /// g²(0) = ⟨n(n-1)⟩ / ⟨n⟩².
    pub fn g2(&self) -> Result<f64> {
        let pmf = self.photon_number_pmf()?;
        let mean: f64 = pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        if mean <= 0.0 {
            return Err(Error::InvalidModel(
                "g2 undefined at zero mean photon number".into(),
            ));
        }
        let pairs: f64 = pmf
            .iter()
            .enumerate()
            .map(|(n, p)| (n * n.saturating_sub(1)) as f64 * p)
            .sum();
        Ok(pairs / (mean * mean))
    }

    /// Probability that at least one of the three detectors clicks in a round.
    pub fn click_probability(&self) -> Result<f64> {
        let pmf = self.photon_number_pmf()?;
        let d = self.dark_count_prob;
        let signal: f64 = pmf[1..].iter().sum();
        Ok(signal + pmf[0] * d * (3.0 - 3.0 * d + d * d))
    }

    /// Post-selected probability of outcome 0 given the single-photon value q₀.
    pub fn effective_p0(&self, q0: f64) -> Result<f64> {
        let pmf = self.photon_number_pmf()?;
        Ok(effective_p0_with(&pmf, self.dark_count_prob, q0))
    }
}

fn effective_p0_with(pmf: &[f64], d: f64, q0: f64) -> f64 {
    let quiet_others = (1.0 - d) * (1.0 - d);
    let mut all_preferred = 0.0;
    let mut signal = 0.0;
    let mut qn = 1.0;
    for &p in &pmf[1..] {
        qn *= q0;
        all_preferred += p * qn;
        signal += p;
    }
    let numerator = quiet_others * (all_preferred + pmf[0] * d);
    let clicks = signal + pmf[0] * d * (3.0 - 3.0 * d + d * d);
    if clicks <= 0.0 {
        // μ → 0 without dark counts: conditioned on a click, one photon
        return q0;
    }
    (numerator / clicks).clamp(0.0, 1.0)
}

/// Solves 2p/(1+p)² = g² for the smaller root p, the two-photon probability
/// of a deterministic source with the given g²(0).
pub fn two_photon_prob_for_g2(g2: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&g2) {
        return Err(Error::InvalidModel(format!(
            "g2 = {g2} is not reachable by a one/two-photon mixture (0 ≤ g2 ≤ 0.5)"
        )));
    }
    if g2 == 0.0 {
        return Ok(0.0);
    }
    // g p² + (2g - 2) p + g = 0, smaller root in the stable form 2c / (-b + √disc)
    let b = 2.0 * g2 - 2.0;
    let disc = b * b - 4.0 * g2 * g2;
    Ok(2.0 * g2 / (-b + disc.sqrt()))
}

/// Applies the photon-number model to every entry of a single-photon table.
pub fn degrade_correlations(
    ideal: &CorrelationTable,
    model: &SourceModel,
) -> Result<CorrelationTable> {
    let pmf = model.photon_number_pmf()?;
    let d = model.dark_count_prob;
    Ok(ideal.map(|_, _, q0| effective_p0_with(&pmf, d, q0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub mu: f64,
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// Witness values of `ideal` degraded by `template` at each mean photon number.
pub fn sweep_mu(
    ideal: &CorrelationTable,
    mu_grid: &[f64],
    template: &SourceModel,
) -> Result<Vec<SweepPoint>> {
    if mu_grid.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(Error::InvalidModel(
            "every grid point must be a positive mean photon number".into(),
        ));
    }
    if mu_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidModel(
            "mean photon number grid must be strictly increasing".into(),
        ));
    }
    mu_grid
        .iter()
        .map(|&mu| {
            let model = SourceModel {
                kind: SourceKind::Coherent,
                mu,
                ..*template
            };
            let r = evaluate_witness(&degrade_correlations(ideal, &model)?)?;
            Ok(SweepPoint {
                mu,
                s1: r.s1,
                s2: r.s2,
                s: r.s,
            })
        })
        .collect()
}

/// Linear interpolation of the μ where S₂ first drops to `level`.
pub fn s2_crossing(points: &[SweepPoint], level: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (a.s2 >= level && b.s2 < level)
            .then(|| a.mu + (a.s2 - level) * (b.mu - a.mu) / (a.s2 - b.s2))
    })
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("mu,S1,S2,S\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p.mu, p.s1, p.s2, p.s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_pmf() {
        let pmf = SourceModel::coherent(1.0).photon_number_pmf().unwrap();
        assert!((pmf[1] - (-1f64).exp()).abs() < 1e-12);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let tiny = SourceModel::coherent(1e-9).photon_number_pmf().unwrap();
        assert!((tiny[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn deterministic_pmf() {
        let pmf = SourceModel::single_photon().photon_number_pmf().unwrap();
        assert_eq!(pmf[1], 1.0);
        assert_eq!(pmf.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn invalid_models() {
        assert!(SourceModel::coherent(-0.1).photon_number_pmf().is_err());
        assert!(SourceModel::coherent(0.1)
            .with_n_max(1)
            .photon_number_pmf()
            .is_err());
        assert!(SourceModel::coherent(0.1)
            .with_dark_counts(1.5)
            .validate()
            .is_err());
        assert!(SourceModel::coherent(0.0).g2().is_err());
    }

    #[test]
    fn g2_values() {
        assert!((SourceModel::coherent(0.3).g2().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(SourceModel::single_photon().g2().unwrap(), 0.0);
    }

    #[test]
    fn g2_root_matches_bisection() {
        let closed = |p: f64| 2.0 * p / ((1.0 + p) * (1.0 + p));
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if closed(mid) < 0.036 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let p2 = two_photon_prob_for_g2(0.036).unwrap();
        assert!((p2 - lo).abs() < 1e-12);
        assert!((p2 - 0.0187).abs() < 1e-4);
        let g2 = SourceModel::deterministic(p2).g2().unwrap();
        assert!((g2 - 0.036).abs() < 1e-12);
        assert!(two_photon_prob_for_g2(0.7).is_err());
    }

    #[test]
    fn effective_probability_closed_form() {
        let q0 = 1.0 / 5f64.sqrt();
        for mu in [0.05, 0.129, 0.5, 1.0] {
            let closed = ((mu * (q0 - 1.0)).exp() - (-mu).exp()) / (1.0 - (-mu).exp());
            let got = SourceModel::coherent(mu).effective_p0(q0).unwrap();
            assert!((got - closed).abs() < 1e-12, "mu = {mu}");
        }
    }

    #[test]
    fn dark_counts_without_signal() {
        // μ = 0: only dark clicks, outcome 0 needs the preferred detector alone
        let m = SourceModel::coherent(0.0).with_dark_counts(0.1);
        let d: f64 = 0.1;
        let want = d * (1.0 - d).powi(2) / (1.0 - (1.0 - d).powi(3));
        assert!((m.effective_p0(0.7).unwrap() - want).abs() < 1e-12);
        assert!((m.click_probability().unwrap() - (1.0 - (1.0 - d).powi(3))).abs() < 1e-12);
    }

    #[test]
    fn zero_mu_limit_without_dark_counts() {
        assert_eq!(SourceModel::coherent(0.0).effective_p0(0.3).unwrap(), 0.3);
    }

    #[test]
    fn grid_validation() {
        let t = CorrelationTable::uniform(0.4);
        assert!(sweep_mu(&t, &[0.2, 0.1], &SourceModel::coherent(0.1)).is_err());
        assert!(sweep_mu(&t, &[0.0, 0.1], &SourceModel::coherent(0.1)).is_err());
    }
}
