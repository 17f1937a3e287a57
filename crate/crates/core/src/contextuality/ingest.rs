//! Reading measured context tables into a [`CorrelationTable`].
//!
//! Schema, one row per (context, prepared x, detector y):
//!
//! ```text
//! # comment
//! context,prepare_x,detector_y,probability[,clicks]
//! 1-2-9,1,1,0.989465
//! ```
//!
//! A click at detector y is outcome 0 of measurement y, so the probability is
//! p(0|x,y). The optional `clicks` column carries raw detector counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::contextuality::graph::{pentagon_predecessor, Vertex, MEASURED_CONTEXTS, NUM_VERTICES};
use crate::contextuality::table::CorrelationTable;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "context,prepare_x,detector_y,probability";

/// Highest label accepted in a table (8 graph vertices plus auxiliary 9, 10).
const MAX_LABEL: Vertex = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub context: String,
    pub prepare_x: Vertex,
    pub detector_y: Vertex,
    pub probability: f64,
    #[serde(default)]
    pub clicks: Option<u64>,
}

/// How repeated (x, y) measurements from different contexts are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DuplicateRule {
    #[default]
    Average,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextData {
    pub records: Vec<ContextRecord>,
}

pub fn parse_context_csv(text: &str) -> Result<ContextData> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = reader.headers()?.clone();
    let expected: Vec<_> = CSV_HEADER.split(',').collect();
    let got: Vec<_> = headers.iter().collect();
    if got.len() < 4
        || got[..4] != expected[..]
        || (got.len() == 5 && got[4] != "clicks")
        || got.len() > 5
    {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `{CSV_HEADER}[,clicks]`, found `{}`",
                got.join(",")
            ),
        });
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        if row.len() != headers.len() {
            return Err(bad(format!(
                "expected {} fields, found {}",
                headers.len(),
                row.len()
            )));
        }
        let label = |i: usize, name: &str| -> Result<Vertex> {
            row[i]
                .parse::<Vertex>()
                .map_err(|e| bad(format!("{name} `{}`: {e}", &row[i])))
        };
        let x = label(1, "prepare_x")?;
        let y = label(2, "detector_y")?;
        if x > MAX_LABEL || y == 0 || y > MAX_LABEL {
            return Err(bad(format!("labels out of range: x={x}, y={y}")));
        }
        let probability: f64 = row[3]
            .parse()
            .map_err(|e| bad(format!("probability `{}`: {e}", &row[3])))?;
        if !(0.0..=1.0).contains(&probability) {
            return Err(bad(format!("probability {probability} outside [0, 1]")));
        }
        let clicks = match row.get(4) {
            Some(s) if !s.is_empty() => Some(
                s.parse::<u64>()
                    .map_err(|e| bad(format!("clicks `{s}`: {e}")))?,
            ),
            _ => None,
        };
        if row[0].is_empty() {
            return Err(bad("empty context label".into()));
        }
        records.push(ContextRecord {
            context: row[0].to_string(),
            prepare_x: x,
            detector_y: y,
            probability,
            clicks,
        });
    }

    let data = ContextData { records };
    for (ctx, detectors) in data.detectors_by_context() {
        if detectors.len() != 3 {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "context `{ctx}` has {} detector columns, expected 3",
                    detectors.len()
                ),
            });
        }
    }
    Ok(data)
}

/// Parses and converts with the default duplicate rule.
pub fn ingest_tables(text: &str) -> Result<CorrelationTable<f64>> {
    parse_context_csv(text)?.to_table(DuplicateRule::Average)
}

impl ContextData {
    pub fn detectors_by_context(&self) -> BTreeMap<&str, BTreeSet<Vertex>> {
        let mut map: BTreeMap<&str, BTreeSet<Vertex>> = BTreeMap::new();
        for r in &self.records {
            map.entry(&r.context).or_default().insert(r.detector_y);
        }
        map
    }

    /// Builds p(0|x,y) for the witness.
    ///
    /// Graph pairs measured in more than one context are combined by `rule`.
    /// For x = 0 and y on the pentagon, the value comes from the context that
    /// also holds the pentagon predecessor of y, i.e. the edge (y-1, y).
    /// Auxiliary labels 9 and 10 are dropped.
    pub fn to_table(&self, rule: DuplicateRule) -> Result<CorrelationTable<f64>> {
        let contexts = self.detectors_by_context();
        let in_graph = |v: Vertex| (v as usize) <= NUM_VERTICES;

        let mut grouped: BTreeMap<(Vertex, Vertex), Vec<&ContextRecord>> = BTreeMap::new();
        for r in &self.records {
            if in_graph(r.prepare_x) && in_graph(r.detector_y) {
                grouped
                    .entry((r.prepare_x, r.detector_y))
                    .or_default()
                    .push(r);
            }
        }

        let mut table = CorrelationTable::new();
        let mut counts: Vec<((Vertex, Vertex), [u64; 2])> = Vec::new();
        let all_clicks = self.records.iter().all(|r| r.clicks.is_some());

        for (&(x, y), rows) in &grouped {
            let mut chosen: Vec<&ContextRecord> = rows.clone();
            if x == 0 && (1..=5).contains(&y) {
                let pred = pentagon_predecessor(y);
                let on_edge: Vec<_> = rows
                    .iter()
                    .copied()
                    .filter(|r| {
                        contexts
                            .get(r.context.as_str())
                            .is_some_and(|d| d.contains(&pred))
                    })
                    .collect();
                if !on_edge.is_empty() {
                    chosen = on_edge;
                }
            }
            let values = chosen.iter().map(|r| r.probability);
            let p = match rule {
                DuplicateRule::Average => values.clone().sum::<f64>() / chosen.len() as f64,
                DuplicateRule::Max => values.fold(f64::NEG_INFINITY, f64::max),
            };
            table.set(x, y, p)?;

            if all_clicks {
                let mut n = [0u64; 2];
                for r in &chosen {
                    n[0] += r.clicks.unwrap_or(0);
                    n[1] += self
                        .records
                        .iter()
                        .filter(|o| o.context == r.context && o.prepare_x == x && o.detector_y != y)
                        .filter_map(|o| o.clicks)
                        .sum::<u64>();
                }
                counts.push(((x, y), n));
            }
        }
        for ((x, y), [n0, n1]) in counts {
            table.attach_counts(x, y, n0, n1)?;
        }
        Ok(table)
    }
}

/// Writes a context table in the ingestion schema for the five measured
/// contexts, preparing x = 0 and each member of the context.
/// `probability(x, y)` gives the click probability of detector y for preparation x.
pub fn write_context_csv(comment: &str, probability: impl Fn(Vertex, Vertex) -> f64) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{CSV_HEADER}");
    for ctx in MEASURED_CONTEXTS {
        let label = format!("{}-{}-{}", ctx[0], ctx[1], ctx[2]);
        for x in std::iter::once(0).chain(ctx) {
            for y in ctx {
                let mut p = probability(x, y).clamp(0.0, 1.0);
                if p < 1e-15 {
                    p = 0.0;
                }
                let _ = writeln!(out, "{label},{x},{y},{p}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::witness::evaluate_witness;

    const SNIPPET: &str = "\
# two contexts
context,prepare_x,detector_y,probability
1-2-9,1,1,0.989465
1-2-9,1,2,0.005566
1-2-9,1,9,0.00497
1-5-8,1,1,0.973752
1-5-8,1,5,0.016821
1-5-8,1,8,0.009427
";

    #[test]
    fn first_block_of_orthogonality_table() {
        let t = parse_context_csv(SNIPPET)
            .unwrap()
            .to_table(DuplicateRule::Average)
            .unwrap();
        assert!((t.p(1, 1, 2).unwrap() - 0.994434).abs() < 1e-12);
        assert!((t.p0(1, 1).unwrap() - (0.989465 + 0.973752) / 2.0).abs() < 1e-12);

        let t = parse_context_csv(SNIPPET)
            .unwrap()
            .to_table(DuplicateRule::Max)
            .unwrap();
        assert_eq!(t.p0(1, 1), Some(0.989465));
    }

    #[test]
    fn malformed_inputs() {
        let bad_header = "ctx,x,y,p\n1-2-9,1,1,0.5\n";
        assert!(matches!(
            parse_context_csv(bad_header),
            Err(Error::Parse { .. })
        ));

        let bad_prob =
            "context,prepare_x,detector_y,probability\n1-2-9,1,1,1.5\n1-2-9,1,2,0\n1-2-9,1,9,0\n";
        assert!(matches!(
            parse_context_csv(bad_prob),
            Err(Error::Parse { line: 2, .. })
        ));

        let bad_number = "context,prepare_x,detector_y,probability\n1-2-9,one,1,0.5\n";
        assert!(parse_context_csv(bad_number).is_err());

        let two_columns =
            "context,prepare_x,detector_y,probability\n1-2-9,1,1,0.5\n1-2-9,1,2,0.5\n";
        assert!(parse_context_csv(two_columns).is_err());

        let short_row = "context,prepare_x,detector_y,probability\n1-2-9,1,1\n";
        assert!(parse_context_csv(short_row).is_err());
    }

    #[test]
    fn indicator_table_scores_thirty() {
        // exact 0/1 clicks: the prepared vertex always fires its own detector
        let csv = write_context_csv("indicator", |x, y| if x == y { 1.0 } else { 0.0 });
        let mut t = ingest_tables(&csv).unwrap();
        for y in 1..=5 {
            t.set(0, y, 0.5).unwrap();
        }
        let r = evaluate_witness(&t).unwrap();
        assert_eq!(r.s1, 30.0);
    }

    #[test]
    fn clicks_become_counts() {
        let csv = "context,prepare_x,detector_y,probability,clicks\n\
                   1-2-9,1,1,0.9,90\n1-2-9,1,2,0.06,6\n1-2-9,1,9,0.04,4\n";
        let t = ingest_tables(csv).unwrap();
        assert_eq!(t.counts(1, 1), Some([90, 10]));
        assert_eq!(t.counts(1, 2), Some([6, 94]));
    }
}
