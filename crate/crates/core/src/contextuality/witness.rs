//! The dimension witness S = S₁ + S₂ on the extended graph.
//!
//! S₁ = Σ_x p(0|x,x) + Σ_x Σ_{y∈N_x} p(1|x,y) (30 terms, at most 30) and
//! S₂ = Σ_{y=1..5} p(0|0,y), the KCBS sum. Noncontextual models reach at
//! most 32; the value is kept unnormalized with S/35 reported alongside.

use serde::Serialize;

use crate::contextuality::graph::{ExtendedGraph, Vertex};
use crate::contextuality::table::CorrelationTable;
use crate::error::{Error, Result};
use crate::linalg3::Matrix3;
use crate::scalar::Real;

pub const CLASSICAL_BOUND: u32 = 32;
pub const NORMALIZATION: f64 = 35.0;

/// 30 + √5, reached by the ideal KCBS realization.
pub fn quantum_reference<T: Real>() -> T {
    T::lit(30.0) + T::lit(5.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    /// p(0|x,x)
    Diagonal,
    /// p(1|x,y), y ∈ N_x
    Edge,
    /// p(0|0,y), y ∈ 1..=5
    Kcbs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessTerm<T> {
    pub kind: TermKind,
    pub x: Vertex,
    pub y: Vertex,
    pub z: u8,
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardErrors<T> {
    pub s1: T,
    pub s2: T,
    pub s: T,
    pub resamples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct WitnessReport<T> {
    pub s1: T,
    pub s2: T,
    pub s: T,
    pub s_normalized: T,
    pub classical_bound: u32,
    pub quantum_reference: T,
    pub violation: bool,
    pub terms: Vec<WitnessTerm<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<StandardErrors<T>>,
}

/// The 35 (kind, x, y, z) terms in evaluation order.
pub fn witness_terms(graph: &ExtendedGraph) -> Vec<(TermKind, Vertex, Vertex, u8)> {
    let mut terms: Vec<_> = graph
        .vertices()
        .map(|x| (TermKind::Diagonal, x, x, 0))
        .collect();
    for x in graph.vertices() {
        terms.extend(graph.neighbors(x).map(|y| (TermKind::Edge, x, y, 1)));
    }
    terms.extend((1..=5).map(|y| (TermKind::Kcbs, 0, y, 0)));
    terms
}

pub fn evaluate_witness<T: Real>(table: &CorrelationTable<T>) -> Result<WitnessReport<T>> {
    let graph = ExtendedGraph::new();
    let layout = witness_terms(&graph);

    let missing: Vec<_> = layout
        .iter()
        .filter(|(_, x, y, _)| table.p0(*x, *y).is_none())
        .map(|&(_, x, y, _)| (x, y))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPairs(missing));
    }

    let terms: Vec<WitnessTerm<T>> = layout
        .into_iter()
        .map(|(kind, x, y, z)| WitnessTerm {
            kind,
            x,
            y,
            z,
            value: table.p(z, x, y).expect("checked above"),
        })
        .collect();

    let s1: T = terms
        .iter()
        .filter(|t| t.kind != TermKind::Kcbs)
        .map(|t| t.value)
        .sum();
    let s2: T = terms
        .iter()
        .filter(|t| t.kind == TermKind::Kcbs)
        .map(|t| t.value)
        .sum();
    Ok(WitnessReport::from_parts(s1, s2, terms))
}

/// (S₁, S₂) straight from states ρ_0..ρ_8 and outcome-0 effects M_1..M_8,
/// without clamping or building a table.
pub fn witness_from_operators<T: Real>(
    states: &[Matrix3<T>; 9],
    effects: &[Matrix3<T>; 8],
) -> (T, T) {
    let graph = ExtendedGraph::new();
    let p0 = |x: Vertex, y: Vertex| states[x as usize].trace_product(&effects[y as usize - 1]);
    let mut s1 = T::zero();
    for x in graph.vertices() {
        s1 = s1 + p0(x, x);
        for y in graph.neighbors(x) {
            s1 = s1 + T::one() - p0(x, y);
        }
    }
    let s2 = (1..=5).map(|y| p0(0, y)).sum();
    (s1, s2)
}

impl<T: Real> WitnessReport<T> {
    pub fn from_parts(s1: T, s2: T, terms: Vec<WitnessTerm<T>>) -> Self {
        let s = s1 + s2;
        Self {
            s1,
            s2,
            s,
            s_normalized: s / T::lit(NORMALIZATION),
            classical_bound: CLASSICAL_BOUND,
            quantum_reference: quantum_reference(),
            violation: s > T::lit(CLASSICAL_BOUND as f64),
            terms,
            errors: None,
        }
    }
}
