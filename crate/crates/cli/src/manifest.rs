//! Run manifests.
//!
//! Every output file starts with (or, for JSON, embeds) the manifest header:
//! command, parameters, seed, tool version and input digests. The wall-clock
//! timestamp lives only in the `<command>.manifest.json` sidecar, so two runs
//! with the same header write byte-identical outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub input_digests: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    #[serde(skip)]
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: &impl Serialize,
        seed: Option<u64>,
        dir: &Path,
    ) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters)?,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: BTreeMap::new(),
            outputs: Vec::new(),
            timestamp: timestamp(),
            dir: dir.to_path_buf(),
        })
    }

    pub fn add_input(&mut self, name: &str, bytes: &[u8]) {
        self.input_digests
            .insert(name.to_string(), sha256_hex(bytes));
    }

    /// Everything but the timestamp and output list.
    pub fn header(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "input_digests": self.input_digests,
        })
    }

    pub fn header_line(&self) -> String {
        self.header().to_string()
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes `{"manifest": header, "result": value}` as pretty JSON.
    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let doc = json!({ "manifest": self.header(), "result": value });
        self.write(name, &(serde_json::to_string_pretty(&doc)? + "\n"))
    }

    /// Writes the sidecar and returns the paths of all outputs.
    pub fn finish(self) -> Result<()> {
        let name = format!("{}.manifest.json", self.command);
        let path = self.dir.join(&name);
        fs::write(&path, serde_json::to_string_pretty(&self)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        for out in &self.outputs {
            println!("wrote {}", self.dir.join(out).display());
        }
        println!("wrote {}", path.display());
        Ok(())
    }
}
