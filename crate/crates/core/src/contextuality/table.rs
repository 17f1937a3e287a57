use serde::Serialize;

use crate::contextuality::graph::Vertex;
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub const NUM_PREPARATIONS: usize = 9;
pub const NUM_MEASUREMENTS: usize = 8;

/// Observed or predicted p(z | x, y) for x ∈ 0..=8, y ∈ 1..=8, z ∈ {0, 1}.
///
/// Only p(0|x,y) is stored; p(1|x,y) is its complement, so the pair always
/// sums to one. Raw counts n(z|x,y) can ride along for error estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable<T> {
    p0: [[Option<T>; NUM_MEASUREMENTS]; NUM_PREPARATIONS],
    counts: [[Option<[u64; 2]>; NUM_MEASUREMENTS]; NUM_PREPARATIONS],
}

impl<T: Real> Default for CorrelationTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn slot(x: Vertex, y: Vertex) -> Option<(usize, usize)> {
    ((x as usize) < NUM_PREPARATIONS && (1..=NUM_MEASUREMENTS as Vertex).contains(&y))
        .then(|| (x as usize, y as usize - 1))
}

impl<T: Real> CorrelationTable<T> {
    pub fn new() -> Self {
        Self {
            p0: [[None; NUM_MEASUREMENTS]; NUM_PREPARATIONS],
            counts: [[None; NUM_MEASUREMENTS]; NUM_PREPARATIONS],
        }
    }

    /// Every (x, y) entry set to p(0|x,y) = `p0`.
    pub fn uniform(p0: T) -> Self {
        Self::from_fn(|_, _| p0)
    }

    pub fn from_fn(mut f: impl FnMut(Vertex, Vertex) -> T) -> Self {
        let mut t = Self::new();
        for x in 0..NUM_PREPARATIONS as Vertex {
            for y in 1..=NUM_MEASUREMENTS as Vertex {
                t.p0[x as usize][y as usize - 1] = Some(f(x, y));
            }
        }
        t
    }

    /// Sets p(0|x,y). Values a rounding error outside [0, 1] are clamped.
    pub fn set(&mut self, x: Vertex, y: Vertex, p0: T) -> Result<()> {
        let (i, j) =
            slot(x, y).ok_or_else(|| invalid(format!("input pair (x={x}, y={y}) out of range")))?;
        let slack = T::lit(1e-9);
        if !(p0 >= -slack && p0 <= T::one() + slack) {
            return Err(invalid(format!("p(0|{x},{y}) = {p0} is not a probability")));
        }
        self.p0[i][j] = Some(p0.max(T::zero()).min(T::one()));
        Ok(())
    }

    /// Records counts and sets p(0|x,y) to their ratio. A pair with no
    /// counts at all keeps its probability unset.
    pub fn set_counts(&mut self, x: Vertex, y: Vertex, n0: u64, n1: u64) -> Result<()> {
        let (i, j) =
            slot(x, y).ok_or_else(|| invalid(format!("input pair (x={x}, y={y}) out of range")))?;
        self.counts[i][j] = Some([n0, n1]);
        let n = n0 + n1;
        self.p0[i][j] = (n > 0).then(|| T::lit(n0 as f64 / n as f64));
        Ok(())
    }

    /// Attaches counts without touching the stored probability.
    pub fn attach_counts(&mut self, x: Vertex, y: Vertex, n0: u64, n1: u64) -> Result<()> {
        let (i, j) =
            slot(x, y).ok_or_else(|| invalid(format!("input pair (x={x}, y={y}) out of range")))?;
        self.counts[i][j] = Some([n0, n1]);
        Ok(())
    }

    pub fn p0(&self, x: Vertex, y: Vertex) -> Option<T> {
        slot(x, y).and_then(|(i, j)| self.p0[i][j])
    }

    pub fn p(&self, z: u8, x: Vertex, y: Vertex) -> Option<T> {
        self.p0(x, y).map(|p| if z == 0 { p } else { T::one() - p })
    }

    pub fn counts(&self, x: Vertex, y: Vertex) -> Option<[u64; 2]> {
        slot(x, y).and_then(|(i, j)| self.counts[i][j])
    }

    pub fn has_counts(&self) -> bool {
        self.counts.iter().flatten().any(Option::is_some)
    }

    /// All (x, y) pairs carrying a probability.
    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Vertex, T)> + '_ {
        (0..NUM_PREPARATIONS as Vertex).flat_map(move |x| {
            (1..=NUM_MEASUREMENTS as Vertex).filter_map(move |y| self.p0(x, y).map(|p| (x, y, p)))
        })
    }

    /// Entry-wise p(0|x,y) ↦ f(x, y, p), keeping counts.
    pub fn map(&self, mut f: impl FnMut(Vertex, Vertex, T) -> T) -> Self {
        let mut out = self.clone();
        for x in 0..NUM_PREPARATIONS as Vertex {
            for y in 1..=NUM_MEASUREMENTS as Vertex {
                if let Some(p) = self.p0(x, y) {
                    out.p0[x as usize][y as usize - 1] = Some(f(x, y, p));
                }
            }
        }
        out
    }

    /// (1 - w)·self + w·other on the entries both tables define.
    pub fn mix(&self, other: &Self, w: T) -> Self {
        let mut out = Self::new();
        for (x, y, a) in self.entries() {
            if let Some(b) = other.p0(x, y) {
                out.p0[x as usize][y as usize - 1] = Some((T::one() - w) * a + w * b);
            }
        }
        out
    }
}

/// Serializable row view, one line per (x, y).
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub x: Vertex,
    pub y: Vertex,
    pub p0: f64,
    pub p1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<[u64; 2]>,
}

impl<T: Real> CorrelationTable<T> {
    pub fn rows(&self) -> Vec<TableRow> {
        self.entries()
            .map(|(x, y, p)| TableRow {
                x,
                y,
                p0: p.as_f64(),
                p1: (T::one() - p).as_f64(),
                counts: self.counts(x, y),
            })
            .collect()
    }
}
