//! Atomic output files and the per-run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes via a temporary sibling and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move {} into place", path.display()))
}

pub fn read_input(path: &Path) -> Result<(PathBuf, Vec<u8>)> {
    let resolved =
        fs::canonicalize(path).with_context(|| format!("cannot open {}", path.display()))?;
    let bytes =
        fs::read(&resolved).with_context(|| format!("cannot read {}", resolved.display()))?;
    Ok((resolved, bytes))
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    argv: &'a [String],
    config: &'a C,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    timings_seconds: BTreeMap<String, f64>,
}

/// Collects inputs, outputs and stage timings of one command.
pub struct Run {
    command: &'static str,
    out_dir: PathBuf,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    timings: BTreeMap<String, f64>,
    stage: Option<(String, Instant)>,
}

impl Run {
    /// Creates (if needed) and resolves the output directory.
    pub fn start(command: &'static str, out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir)
            .with_context(|| format!("cannot create {}", out_dir.display()))?;
        let out_dir = fs::canonicalize(out_dir)?;
        Ok(Run {
            command,
            out_dir,
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings: BTreeMap::new(),
            stage: None,
        })
    }

    pub fn stage(&mut self, name: &str) {
        self.finish_stage();
        self.stage = Some((name.to_string(), Instant::now()));
    }

    fn finish_stage(&mut self) {
        if let Some((name, t)) = self.stage.take() {
            self.timings.insert(name, t.elapsed().as_secs_f64());
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let (resolved, bytes) = read_input(path)?;
        self.inputs.push(FileDigest {
            path: resolved.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    pub fn output(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.out_dir.join(name), bytes)?;
        self.outputs.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes `config.json` and, last, `manifest.json`.
    pub fn finish<C: Serialize>(mut self, config: &C, argv: &[String]) -> Result<()> {
        self.finish_stage();
        let echo = serde_json::to_string_pretty(config)? + "\n";
        self.output("config.json", echo.as_bytes())?;
        let manifest = Manifest {
            tool: "snn",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            argv,
            config,
            inputs: std::mem::take(&mut self.inputs),
            outputs: std::mem::take(&mut self.outputs),
            timings_seconds: std::mem::take(&mut self.timings),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        write_atomic(&self.out_dir.join("manifest.json"), text.as_bytes())
    }
}
