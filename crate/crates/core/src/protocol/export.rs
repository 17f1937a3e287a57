//! Round logs and key files.
//!
//! Both formats open with a single `# {json}` line carrying the run's
//! configuration.

use std::fmt::Write as _;

use crate::error::{invalid, Result};
use crate::protocol::RoundRecord;

pub const RECORDS_CSV_HEADER: &str = "x,y,z,phase";

/// `header_json` must be a single line.
pub fn records_csv(records: &[RoundRecord], header_json: &str) -> String {
    let mut out = String::with_capacity(records.len() * 20 + header_json.len() + 32);
    let _ = writeln!(out, "# {header_json}");
    let _ = writeln!(out, "{RECORDS_CSV_HEADER}");
    for r in records {
        let z = r.z.map(|z| z.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", r.x, r.y, z, r.phase.as_str());
    }
    out
}

/// Bits packed most-significant first, zero-padded to whole bytes, as hex.
pub fn pack_key_hex(bits: &[u8]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))
        })
        .collect();
    hex::encode(bytes)
}

/// Inverse of [`pack_key_hex`] for a key of `len` bits.
pub fn unpack_key_hex(text: &str, len: usize) -> Result<Vec<u8>> {
    let bytes = hex::decode(text.trim()).map_err(|e| invalid(format!("key file: {e}")))?;
    if bytes.len() * 8 < len {
        return Err(invalid(format!(
            "{} key bytes cannot hold {len} bits",
            bytes.len()
        )));
    }
    Ok((0..len)
        .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Phase;

    #[test]
    fn hex_round_trip() {
        let bits = [1, 0, 1, 1, 0, 0, 0, 1, 1, 1];
        let hex = pack_key_hex(&bits);
        assert_eq!(hex, "b1c0");
        assert_eq!(unpack_key_hex(&hex, bits.len()).unwrap(), bits);
    }

    #[test]
    fn csv_layout() {
        let r = [
            RoundRecord {
                x: 3,
                y: 3,
                z: Some(0),
                phase: Phase::Key,
            },
            RoundRecord {
                x: 0,
                y: 2,
                z: None,
                phase: Phase::Discarded,
            },
        ];
        let text = records_csv(&r, "{\"seed\":1}");
        assert_eq!(
            text,
            "# {\"seed\":1}\nx,y,z,phase\n3,3,0,key\n0,2,,discarded\n"
        );
    }
}
