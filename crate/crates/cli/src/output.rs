//! Atomic artifact writes and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    /// File name relative to the output directory.
    pub path: String,
    pub format: String,
    pub bytes: usize,
    /// Command line that regenerates the artifact.
    pub command: Vec<String>,
    /// Fully resolved parameters.
    pub params: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifacts: Vec<ArtifactEntry>,
}

/// Writes `bytes` to `dir/name` through a temporary file in the same directory and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    let dest = dir.join(name);
    tmp.persist(&dest).with_context(|| format!("renaming into {}", dest.display()))?;
    Ok(dest)
}

/// Collects a run's artifacts and records them in the directory's manifest.
pub struct Outputs {
    dir: PathBuf,
    command: Vec<String>,
    params: Value,
    written: Vec<ArtifactEntry>,
}

impl Outputs {
    pub fn new(dir: PathBuf, command: Vec<String>, params: Value) -> Self {
        Self {
            dir,
            command,
            params,
            written: Vec::new(),
        }
    }

    pub fn write(&mut self, name: &str, format: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = write_atomic(&self.dir, name, bytes)?;
        self.written.push(ArtifactEntry {
            path: name.into(),
            format: format.into(),
            bytes: bytes.len(),
            command: self.command.clone(),
            params: self.params.clone(),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, "JSON", text.as_bytes())
    }

    /// Merges this run's entries into `manifest.json`, replacing entries for the same paths.
    pub fn finish(self) -> Result<()> {
        let path = self.dir.join(MANIFEST);
        let mut manifest: Manifest = match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(_) => Manifest::default(),
        };
        manifest
            .artifacts
            .retain(|a| !self.written.iter().any(|w| w.path == a.path));
        manifest.artifacts.extend(self.written);
        manifest.artifacts.sort_by(|a, b| a.path.cmp(&b.path));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        write_atomic(&self.dir, MANIFEST, text.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn manifest_merges_by_path() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = Outputs::new(dir.path().into(), vec!["x".into()], json!({"run": 1}));
        a.write("a.txt", "TEXT", b"1").unwrap();
        a.write("b.txt", "TEXT", b"22").unwrap();
        a.finish().unwrap();
        let mut b = Outputs::new(dir.path().into(), vec!["y".into()], json!({"run": 2}));
        b.write("a.txt", "TEXT", b"333").unwrap();
        b.finish().unwrap();
        let m: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.path().join(MANIFEST)).unwrap()).unwrap();
        assert_eq!(m.artifacts.len(), 2);
        assert_eq!(m.artifacts[0].bytes, 3);
        assert_eq!(m.artifacts[0].params, json!({"run": 2}));
        assert_eq!(std::fs::read(dir.path().join("a.txt")).unwrap(), b"333");
        // no temporary files left behind
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
    }
}
