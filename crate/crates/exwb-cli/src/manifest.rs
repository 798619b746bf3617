//! Run manifests: enough provenance to replay a command and reproduce its
//! outputs byte for byte.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub struct ManifestBuilder {
    command: Vec<String>,
    inputs: BTreeMap<String, String>,
    seeds: BTreeMap<String, u64>,
    tolerances: BTreeMap<String, f64>,
    outputs: Vec<PathBuf>,
}

impl ManifestBuilder {
    pub fn new() -> Self {
        ManifestBuilder {
            command: std::env::args().collect(),
            inputs: BTreeMap::new(),
            seeds: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        self.inputs.insert(path.display().to_string(), format!("{digest:x}"));
        Ok(())
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    fn value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "seeds": self.seeds,
            "tolerances": self.tolerances,
            "version": env!("CARGO_PKG_VERSION"),
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        })
    }

    /// Write `<primary>.manifest.json` next to the primary output.
    pub fn write(&self, primary: &Path) -> anyhow::Result<()> {
        let path = primary.with_extension(format!(
            "{}manifest.json",
            primary
                .extension()
                .map(|e| format!("{}.", e.to_string_lossy()))
                .unwrap_or_default()
        ));
        fs::write(&path, serde_json::to_string_pretty(&self.value())?)?;
        Ok(())
    }
}
