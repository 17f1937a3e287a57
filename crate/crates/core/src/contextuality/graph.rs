//! The 5-cycle KCBS graph extended by vertices 6, 7 and 8 so that every
//! vertex sits in a three-element orthogonal basis.

use crate::error::{invalid, Result};

pub type Vertex = u8;

/// Orthogonality edges. The first five form the KCBS pentagon.
pub const EDGES: [(Vertex, Vertex); 11] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 1),
    (2, 6),
    (3, 6),
    (4, 7),
    (5, 7),
    (1, 8),
    (5, 8),
];

/// The five measured contexts, as detector triples. Labels 9 and 10 complete
/// the bases of edges (1,2) and (3,4) and never enter the witness.
pub const MEASURED_CONTEXTS: [[Vertex; 3]; 5] =
    [[1, 2, 9], [1, 5, 8], [3, 4, 10], [5, 4, 7], [3, 2, 6]];

/// Detector labels outside the graph.
pub const AUXILIARY_DETECTORS: [Vertex; 2] = [9, 10];

pub const NUM_VERTICES: usize = 8;

/// Number of terms in the orthogonality part of the witness.
pub const S1_TERMS: usize = 30;

/// Predecessor of `y` on the pentagon, `y - 1 mod 5` in 1-based labels.
pub fn pentagon_predecessor(y: Vertex) -> Vertex {
    debug_assert!((1..=5).contains(&y));
    if y == 1 {
        5
    } else {
        y - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtendedGraph {
    /// Bitmask of neighbors per vertex, bit `v` set for neighbor `v`.
    adjacency: [u16; NUM_VERTICES + 1],
}

impl Default for ExtendedGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl ExtendedGraph {
    pub fn new() -> Self {
        let mut adjacency = [0u16; NUM_VERTICES + 1];
        for (a, b) in EDGES {
            adjacency[a as usize] |= 1 << b;
            adjacency[b as usize] |= 1 << a;
        }
        Self { adjacency }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=NUM_VERTICES as Vertex
    }

    pub fn edges(&self) -> &'static [(Vertex, Vertex)] {
        &EDGES
    }

    pub fn pentagon(&self) -> &'static [(Vertex, Vertex)] {
        &EDGES[..5]
    }

    pub fn is_adjacent(&self, x: Vertex, y: Vertex) -> bool {
        (x as usize) <= NUM_VERTICES
            && (y as usize) <= NUM_VERTICES
            && self.adjacency[x as usize] & (1 << y) != 0
    }

    /// N_x in increasing order.
    pub fn neighbors(&self, x: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let mask = self.adjacency.get(x as usize).copied().unwrap_or(0);
        (1..=NUM_VERTICES as Vertex).filter(move |v| mask & (1 << v) != 0)
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.neighbors(x).count()
    }

    /// Whether round (x, y) can contribute a key bit: x ≥ 1 and y ∈ N_x ∪ {x}.
    pub fn is_key_pair(&self, x: Vertex, y: Vertex) -> bool {
        x >= 1 && (x == y || self.is_adjacent(x, y))
    }

    /// The 30 key-eligible pairs: the 8 diagonal pairs, then the 22 directed edges.
    pub fn key_pairs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self.vertices().map(|x| (x, x)).collect();
        for x in self.vertices() {
            out.extend(self.neighbors(x).map(|y| (x, y)));
        }
        out
    }

    /// Alice's raw key bit f(x, y): 0 on the diagonal, 1 on an edge.
    pub fn key_bit(&self, x: Vertex, y: Vertex) -> Option<u8> {
        if !self.is_key_pair(x, y) {
            None
        } else if x == y {
            Some(0)
        } else {
            Some(1)
        }
    }

    /// Verifies the structural facts everything downstream relies on: the
    /// term count of the orthogonality sum, the key-round fraction 30/72, and
    /// that each measured context is a clique covering its edges exactly once.
    pub fn self_check(&self) -> Result<()> {
        let degree_sum: usize = self.vertices().map(|x| self.degree(x)).sum();
        if NUM_VERTICES + degree_sum != S1_TERMS {
            return Err(invalid(format!(
                "graph yields {} orthogonality terms, expected {S1_TERMS}",
                NUM_VERTICES + degree_sum
            )));
        }
        let key_pairs = (0..=NUM_VERTICES as Vertex)
            .flat_map(|x| self.vertices().map(move |y| (x, y)))
            .filter(|&(x, y)| self.is_key_pair(x, y))
            .count();
        // uniform inputs, half of the eligible rounds kept for key: P_k = key_pairs / 144
        if key_pairs != S1_TERMS {
            return Err(invalid(format!(
                "{key_pairs} of 72 input pairs are key-eligible, so P_k = {key_pairs}/144, expected 30/144"
            )));
        }
        for (i, (a, b)) in EDGES.iter().copied().enumerate() {
            let covering = MEASURED_CONTEXTS
                .iter()
                .filter(|ctx| ctx.contains(&a) && ctx.contains(&b))
                .count();
            // only the pentagon edges and the edges to 6, 7, 8 are measured
            if covering > 1 {
                return Err(invalid(format!(
                    "edge {i} ({a},{b}) lies in {covering} measured contexts"
                )));
            }
        }
        for ctx in MEASURED_CONTEXTS {
            for i in 0..3 {
                for j in i + 1..3 {
                    let (a, b) = (ctx[i], ctx[j]);
                    let aux = AUXILIARY_DETECTORS.contains(&a) || AUXILIARY_DETECTORS.contains(&b);
                    if !aux && !self.is_adjacent(a, b) {
                        return Err(invalid(format!(
                            "context {ctx:?} pairs non-adjacent {a} and {b}"
                        )));
                    }
                }
            }
        }
        for (a, b) in self.pentagon() {
            if !MEASURED_CONTEXTS
                .iter()
                .any(|c| c.contains(a) && c.contains(b))
            {
                return Err(invalid(format!(
                    "pentagon edge ({a},{b}) has no measured context"
                )));
            }
        }
        Ok(())
    }

    /// Whether `colors[v - 1]` assigns distinct colors across every edge.
    pub fn is_proper_coloring(&self, colors: &[u8; NUM_VERTICES]) -> bool {
        EDGES
            .iter()
            .all(|&(a, b)| colors[a as usize - 1] != colors[b as usize - 1])
    }
}
