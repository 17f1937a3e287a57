//! Exhaustive search over deterministic classical strategies for the witness.
//!
//! A classical qutrit strategy sends a message m ∈ {0,1,2} per preparation
//! and, per measurement y, answers 0 on a fixed subset A_y ⊆ {0,1,2}. Given
//! the 8 subsets, each preparation independently picks its best message, so
//! the search is over 8⁸ subset assignments only.

use rayon::prelude::*;
use serde::Serialize;

use crate::contextuality::graph::{ExtendedGraph, NUM_VERTICES};

/// All eight outcome-0 subsets of {0,1,2}, as bitmasks.
pub const ALL_SUBSETS: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalOptimum {
    pub total: u32,
    pub s1: u32,
    pub s2: u32,
    /// Outcome-0 subset bitmask for measurements 1..=8.
    pub subsets: [u8; NUM_VERTICES],
    /// Message sent for preparations 0..=8.
    pub messages: [u8; NUM_VERTICES + 1],
}

/// Per-vertex neighbor lists, precomputed for the inner loop.
struct Scorer {
    neighbors: [Vec<usize>; NUM_VERTICES + 1],
}

impl Scorer {
    fn new(graph: &ExtendedGraph) -> Self {
        Self {
            neighbors: std::array::from_fn(|x| {
                graph.neighbors(x as u8).map(|y| y as usize).collect()
            }),
        }
    }

    /// Best value for one subset assignment (`subsets[y-1]` for measurement y).
    fn evaluate(&self, subsets: &[u8; NUM_VERTICES]) -> ClassicalOptimum {
        let zero = |y: usize, m: u8| (subsets[y - 1] >> m) & 1;
        let mut messages = [0u8; NUM_VERTICES + 1];
        let mut s1 = 0u32;

        for x in 1..=NUM_VERTICES {
            let (best_m, best) = (0..3u8)
                .map(|m| {
                    let edges: u8 = self.neighbors[x].iter().map(|&y| 1 - zero(y, m)).sum();
                    (m, (zero(x, m) + edges) as u32)
                })
                .fold((0, 0), |acc, c| if c.1 > acc.1 { c } else { acc });
            messages[x] = best_m;
            s1 += best;
        }

        let (m0, s2) = (0..3u8)
            .map(|m| (m, (1..=5).map(|y| zero(y, m) as u32).sum::<u32>()))
            .fold((0, 0), |acc, c| if c.1 > acc.1 { c } else { acc });
        messages[0] = m0;

        ClassicalOptimum {
            total: s1 + s2,
            s1,
            s2,
            subsets: *subsets,
            messages,
        }
    }
}

fn decode(index: u32, allowed: &[u8]) -> [u8; NUM_VERTICES] {
    let base = allowed.len() as u32;
    let mut i = index;
    std::array::from_fn(|_| {
        let d = allowed[(i % base) as usize];
        i /= base;
        d
    })
}

/// Value of a single deterministic assignment of outcome-0 subsets.
pub fn classical_value(subsets: &[u8; NUM_VERTICES]) -> ClassicalOptimum {
    Scorer::new(&ExtendedGraph::new()).evaluate(subsets)
}

/// Maximum over every assignment drawing each measurement's subset from
/// `allowed`. Ties resolve to the first assignment in enumeration order, so
/// the result is independent of the worker count.
pub fn classical_optimum(allowed: &[u8]) -> ClassicalOptimum {
    assert!(!allowed.is_empty() && allowed.iter().all(|&s| s < 8));
    let scorer = Scorer::new(&ExtendedGraph::new());
    let count = (allowed.len() as u32).pow(NUM_VERTICES as u32);

    (0..count)
        .into_par_iter()
        .map(|i| (i, scorer.evaluate(&decode(i, allowed))))
        .reduce_with(|a, b| {
            if b.1.total > a.1.total || (b.1.total == a.1.total && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .map(|(_, best)| best)
        .expect("non-empty enumeration")
}

/// The noncontextual bound of the witness over all 8⁸ assignments.
pub fn classical_bound_bruteforce() -> u32 {
    classical_optimum(&ALL_SUBSETS).total
}
