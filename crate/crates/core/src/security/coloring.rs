//! Proper 3-colorings of the extended graph.
//!
//! A coloring assigns each vertex a computational basis state. Preparing and
//! measuring along the color gives every orthogonality term its ideal value
//! and lets the cloning ancilla reveal the key bit.

use crate::contextuality::graph::{ExtendedGraph, Vertex, NUM_VERTICES};

/// `colors[v - 1]` is the color of vertex v.
pub type Coloring = [u8; NUM_VERTICES];

/// (1,3,7) → 0, (2,4,8) → 1, (5,6) → 2.
pub const REFERENCE_COLORING: Coloring = [0, 1, 0, 1, 2, 2, 0, 1];

pub fn color_of(c: &Coloring, v: Vertex) -> u8 {
    c[v as usize - 1]
}

/// All proper colorings, in lexicographic order of (c₁, …, c₈).
pub fn enumerate_colorings(graph: &ExtendedGraph) -> Vec<Coloring> {
    fn extend(graph: &ExtendedGraph, partial: &mut Coloring, v: usize, out: &mut Vec<Coloring>) {
        if v > NUM_VERTICES {
            out.push(*partial);
            return;
        }
        for c in 0..3 {
            let clash =
                (1..v).any(|u| graph.is_adjacent(u as Vertex, v as Vertex) && partial[u - 1] == c);
            if !clash {
                partial[v - 1] = c;
                extend(graph, partial, v + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    extend(graph, &mut [0; NUM_VERTICES], 1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backtracking_matches_exhaustive_filter() {
        let g = ExtendedGraph::new();
        let fast = enumerate_colorings(&g);
        let slow: Vec<Coloring> = (0..3u32.pow(8))
            .map(|mut i| {
                let mut c = [0u8; 8];
                for slot in c.iter_mut().rev() {
                    *slot = (i % 3) as u8;
                    i /= 3;
                }
                c
            })
            .filter(|c| {
                g.edges()
                    .iter()
                    .all(|&(a, b)| color_of(c, a) != color_of(c, b))
            })
            .collect();
        assert_eq!(fast, slow);
        assert_eq!(fast.len(), 30);
        assert!(fast.contains(&REFERENCE_COLORING));
    }

    #[test]
    fn reference_is_proper_and_clash_is_not() {
        let g = ExtendedGraph::new();
        assert!(g.is_proper_coloring(&REFERENCE_COLORING));
        let mut bad = REFERENCE_COLORING;
        bad[1] = bad[0];
        assert!(!g.is_proper_coloring(&bad));
    }
}
