//! Splitting rounds into verification and key pools.

use rand::Rng;
use serde::Serialize;

use crate::contextuality::evaluate_witness;
use crate::contextuality::graph::ExtendedGraph;
use crate::error::{Error, Result};
use crate::protocol::{Phase, RoundRecord};
use crate::seeding;
use crate::{CorrelationTable, WitnessReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiftedResult {
    pub records: Vec<RoundRecord>,
    pub alice_key: Vec<u8>,
    pub bob_key: Vec<u8>,
    /// Key rounds over all rounds, discarded ones included.
    #[serde(rename = "empirical_Pk")]
    pub empirical_pk: f64,
    pub agreement_rate: f64,
    pub key_rounds: u64,
    pub verification_rounds: u64,
    pub discarded_rounds: u64,
    /// Outcome counts of the verification pool, with p(0|x,y) their ratio.
    #[serde(skip)]
    pub verification_table: CorrelationTable,
    /// `None` when some witness pair never occurred in the verification pool.
    pub witness_estimate: Option<WitnessReport>,
}

/// Rounds with x = 0 or y ∉ N_x ∪ {x} go to verification. Key-eligible
/// rounds go to verification with probability `verification_fraction` and
/// to the key otherwise. Alice's bit is 0 for y = x and 1 for y ∈ N_x;
/// Bob's bit is z.
pub fn sift(
    records: &[RoundRecord],
    graph: &ExtendedGraph,
    verification_fraction: f64,
    seed: u64,
) -> Result<SiftedResult> {
    if !(verification_fraction > 0.0 && verification_fraction < 1.0) {
        return Err(crate::error::invalid(format!(
            "verification_fraction {verification_fraction} must lie strictly between 0 and 1"
        )));
    }
    let mut rng = seeding::stream(seed, "sifting", 0);
    let mut out = Vec::with_capacity(records.len());
    let (mut alice_key, mut bob_key) = (Vec::new(), Vec::new());
    let mut counts = [[[0u64; 2]; 8]; 9];
    let mut discarded = 0u64;

    for r in records {
        let Some(z) = r.z else {
            discarded += 1;
            out.push(RoundRecord {
                phase: Phase::Discarded,
                ..*r
            });
            continue;
        };
        let key_bit = graph.key_bit(r.x, r.y);
        let phase = match key_bit {
            Some(_) if rng.random::<f64>() >= verification_fraction => Phase::Key,
            _ => Phase::Verification,
        };
        match phase {
            Phase::Key => {
                alice_key.push(key_bit.expect("key-eligible"));
                bob_key.push(z);
            }
            _ => counts[r.x as usize][r.y as usize - 1][z as usize] += 1,
        }
        out.push(RoundRecord { phase, ..*r });
    }

    if alice_key.is_empty() {
        return Err(Error::EmptyKeyPool);
    }

    let mut table = CorrelationTable::new();
    let mut verification = 0;
    for x in 0..9u8 {
        for y in 1..=8u8 {
            let [n0, n1] = counts[x as usize][y as usize - 1];
            verification += n0 + n1;
            if n0 + n1 > 0 {
                table.set_counts(x, y, n0, n1)?;
            }
        }
    }
    let witness_estimate = match evaluate_witness(&table) {
        Ok(w) => Some(w),
        Err(Error::MissingPairs(_)) => None,
        Err(e) => return Err(e),
    };

    let agree = alice_key
        .iter()
        .zip(&bob_key)
        .filter(|(a, b)| a == b)
        .count();
    let key_rounds = alice_key.len() as u64;
    Ok(SiftedResult {
        empirical_pk: key_rounds as f64 / records.len() as f64,
        agreement_rate: agree as f64 / key_rounds as f64,
        records: out,
        alice_key,
        bob_key,
        key_rounds,
        verification_rounds: verification,
        discarded_rounds: discarded,
        verification_table: table,
        witness_estimate,
    })
}
