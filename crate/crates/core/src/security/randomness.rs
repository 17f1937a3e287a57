//! Randomness certified by the KCBS preparation.
//!
//! The guessing probability p* = max_{z, y≤5} p(z|0,y) bounds the randomness
//! R = -log₂ p*. When S₁ = 30 the states and measurements are pinned to the
//! ideal pentagon up to a unitary, so S₂ ≤ √5 and every p(0|0,y) equals
//! 1/√5, giving p* = 1 - 1/√5. Away from that point only a search result is
//! reported: the largest p* found among strategies meeting (S₁, S₂), which
//! is a lower bound on the true p*.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contextuality::graph::ExtendedGraph;
use crate::contextuality::strategy::ideal_strategy;
use crate::contextuality::witness::witness_from_operators;
use crate::contextuality::Strategy;
use crate::error::{invalid, Error, Result};
use crate::linalg3::{positive_eigenspace_projector, random_state, top_eigenvector, Matrix3};
use crate::scalar::Real;
use crate::seeding;
use crate::tolerance::Tolerances;

/// How close S₁ must be to 30 for the exact self-testing bound.
pub const SELF_TEST_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomnessConfig {
    /// Random starting points per target, on top of the ideal strategy.
    pub restarts: usize,
    /// Multiplier updates.
    pub outer_iterations: usize,
    /// Block sweeps between multiplier updates.
    pub inner_iterations: usize,
    /// A strategy meets the targets when S₁ ≥ S₁ᵗ - slack and S₂ ≥ S₂ᵗ - slack.
    pub feasibility_slack: f64,
    pub seed: u64,
}

impl Default for RandomnessConfig {
    fn default() -> Self {
        Self {
            restarts: 3,
            outer_iterations: 150,
            inner_iterations: 10,
            feasibility_slack: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomnessReport<T> {
    #[serde(rename = "S1")]
    pub s1: T,
    #[serde(rename = "S2")]
    pub s2: T,
    /// Whether the exact bound applies.
    pub certified: bool,
    pub ideal_pstar: Option<T>,
    #[serde(rename = "ideal_R")]
    pub ideal_r_bits: Option<T>,
    /// Largest guessing probability found among strategies meeting the targets.
    pub achievable_pstar: Option<T>,
    /// -log₂ of the above, an upper bound on the certifiable randomness.
    pub randomness_upper_bound_bits: Option<T>,
    /// (z, y) of the guess reaching `achievable_pstar`.
    pub achieving_guess: Option<(u8, u8)>,
    pub note: String,
}

/// 1 - 1/√5.
pub fn ideal_guessing_probability<T: Real>() -> T {
    T::one() - T::one() / T::lit(5.0).sqrt()
}

/// Exact bound when it applies, then the achievability search.
pub fn randomness_bounds<T: Real>(
    s1: T,
    s2: T,
    config: &RandomnessConfig,
) -> Result<RandomnessReport<T>> {
    if !(s1.is_finite() && s2.is_finite()) || s1 < T::zero() || s2 < T::zero() {
        return Err(invalid(format!(
            "witness values must be finite and non-negative, got ({s1}, {s2})"
        )));
    }
    if s1 > T::lit(30.0) || s2 > T::lit(5.0) {
        return Err(invalid(format!(
            "need S1 ≤ 30 and S2 ≤ 5, got ({s1}, {s2})"
        )));
    }
    let sqrt5 = T::lit(5.0).sqrt();
    let self_tested = s1 >= T::lit(30.0 - SELF_TEST_SLACK);
    if self_tested && s2 > sqrt5 + T::lit(SELF_TEST_SLACK) {
        return Err(Error::Infeasible(format!(
            "S1 = 30 forces S2 ≤ √5 = {sqrt5:.7}, but S2 = {s2} was requested"
        )));
    }

    let (ideal_pstar, ideal_r) = if self_tested && s2 >= sqrt5 - T::lit(SELF_TEST_SLACK) {
        let p = ideal_guessing_probability::<T>();
        (Some(p), Some(-p.log2()))
    } else {
        (None, None)
    };

    let found = search(s1, s2, config);
    let note = match (ideal_pstar.is_some(), found.is_some()) {
        (true, _) => "S1 = 30 and S2 ≥ √5: exact bound p* = 1 - 1/√5".to_string(),
        (false, true) => {
            "no exact bound away from S1 = 30, S2 = √5; only the search lower bound on p* is given"
                .into()
        }
        (false, false) => {
            "no exact bound, and the search found no strategy meeting the targets".into()
        }
    };
    Ok(RandomnessReport {
        s1,
        s2,
        certified: ideal_pstar.is_some(),
        ideal_pstar,
        ideal_r_bits: ideal_r,
        achievable_pstar: found.map(|f| f.0),
        randomness_upper_bound_bits: found.map(|f| -f.0.log2()),
        achieving_guess: found.map(|f| f.1),
        note,
    })
}

/// max over (z, y ≤ 5) of p(z|0,y), with its argmax.
fn guessing<T: Real>(s: &Strategy<T>) -> (T, (u8, u8)) {
    let mut best = (T::neg_infinity(), (0, 1));
    for y in 1..=5u8 {
        let p0 = s
            .state(0)
            .trace_product(s.effect(y))
            .max(T::zero())
            .min(T::one());
        for (z, p) in [(0u8, p0), (1, T::one() - p0)] {
            if p > best.0 {
                best = (p, (z, y));
            }
        }
    }
    best
}

struct Search<'a, T> {
    graph: ExtendedGraph,
    targets: (T, T),
    guess: (u8, u8),
    config: &'a RandomnessConfig,
    tol: Tolerances,
}

impl<T: Real> Search<'_, T> {
    fn feasible(&self, s: &Strategy<T>) -> Option<(T, (u8, u8))> {
        let (s1, s2) = witness_from_operators(&s.preparations, &s.measurements);
        let slack = T::lit(self.config.feasibility_slack);
        (s1 >= self.targets.0 - slack && s2 >= self.targets.1 - slack).then(|| guessing(s))
    }

    /// One sweep of exact block updates of w·p(z*|0,y*) + λ₁S₁ + λ₂S₂.
    fn sweep(&self, s: &mut Strategy<T>, l1: T, l2: T) {
        let (z, ys) = self.guess;
        let sign = if z == 0 { T::one() } else { -T::one() };
        for y in 1..=8u8 {
            let rho = &s.preparations;
            let mut a = self
                .graph
                .neighbors(y)
                .fold(rho[y as usize], |acc, x| acc - rho[x as usize])
                .scale(l1);
            if y <= 5 {
                a += rho[0].scale(l2);
            }
            if y == ys {
                a += rho[0].scale(sign);
            }
            *s.effect_mut(y) = positive_eigenspace_projector(&a, &self.tol);
        }
        for x in 1..=8u8 {
            let b = self
                .graph
                .neighbors(x)
                .fold(*s.effect(x), |acc, y| acc - *s.effect(y));
            s.preparations[x as usize] = top_eigenvector(&b).projector();
        }
        let mut b = (1..=5u8)
            .fold(Matrix3::zeros(), |acc, y| acc + *s.effect(y))
            .scale(l2);
        b += s.effect(ys).scale(sign);
        s.preparations[0] = top_eigenvector(&b).projector();
    }

    fn run(&self, mut s: Strategy<T>) -> Option<(T, (u8, u8))> {
        let mut best = self.feasible(&s);
        let (mut l1, mut l2) = (T::one(), T::one());
        let (grow, shrink) = (T::lit(1.5), T::lit(0.9));
        for _ in 0..self.config.outer_iterations {
            for _ in 0..self.config.inner_iterations {
                self.sweep(&mut s, l1, l2);
            }
            if let Some(found) = self.feasible(&s) {
                if best.is_none_or(|b| found.0 > b.0) {
                    best = Some(found);
                }
            }
            let (s1, s2) = witness_from_operators(&s.preparations, &s.measurements);
            l1 = if s1 < self.targets.0 {
                l1 * grow
            } else {
                l1 * shrink
            };
            l2 = if s2 < self.targets.1 {
                l2 * grow
            } else {
                l2 * shrink
            };
        }
        best
    }
}

fn random_strategy<T: Real>(rng: &mut seeding::StreamRng) -> Strategy<T> {
    Strategy {
        preparations: std::array::from_fn(|_| random_state::<T, _>(rng).projector()),
        measurements: std::array::from_fn(|_| random_state::<T, _>(rng).projector()),
    }
}

/// Best feasible guessing probability over all ten (z, y) targets, each
/// started from the ideal strategy and `restarts` random strategies.
fn search<T: Real>(s1: T, s2: T, config: &RandomnessConfig) -> Option<(T, (u8, u8))> {
    let jobs: Vec<(u8, u8, usize)> = (1..=5u8)
        .flat_map(|y| [0u8, 1].into_iter().map(move |z| (z, y)))
        .flat_map(|(z, y)| (0..=config.restarts).map(move |r| (z, y, r)))
        .collect();
    jobs.into_par_iter()
        .map(|(z, y, r)| {
            let search = Search {
                graph: ExtendedGraph::new(),
                targets: (s1, s2),
                guess: (z, y),
                config,
                tol: Tolerances::default(),
            };
            let start = if r == 0 {
                ideal_strategy()
            } else {
                let index = ((y as u64) << 40) | ((z as u64) << 32) | r as u64;
                random_strategy(&mut seeding::stream(config.seed, "randomness", index))
            };
            search.run(start)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RandomnessConfig {
        RandomnessConfig {
            restarts: 1,
            outer_iterations: 40,
            ..RandomnessConfig::default()
        }
    }

    #[test]
    fn self_tested_point() {
        let r = randomness_bounds(30.0, 5f64.sqrt(), &quick()).unwrap();
        assert!(r.certified);
        let bits = -(1.0 - 1.0 / 5f64.sqrt()).log2();
        assert!((r.ideal_r_bits.unwrap() - bits).abs() < 1e-12);
        assert!((bits - 0.855_206).abs() < 1e-6);
        assert!(r.achievable_pstar.unwrap() >= 1.0 - 1.0 / 5f64.sqrt() - 1e-9);
    }

    #[test]
    fn measured_point_is_not_certified() {
        let r = randomness_bounds(29.8238, 2.2463, &quick()).unwrap();
        assert!(!r.certified);
        assert!(r.ideal_r_bits.is_none());
    }

    #[test]
    fn beyond_the_pentagon_bound() {
        assert!(matches!(
            randomness_bounds(30.0, 2.2463, &quick()),
            Err(Error::Infeasible(_))
        ));
        assert!(randomness_bounds(30.5, 2.0, &quick()).is_err());
        assert!(randomness_bounds(29.0, 5.5, &quick()).is_err());
    }

    #[test]
    fn loose_targets_allow_deterministic_guess() {
        let r = randomness_bounds(22.0, 0.0, &quick()).unwrap();
        assert!(r.achievable_pstar.unwrap() > 1.0 - 1e-9);
    }
}
