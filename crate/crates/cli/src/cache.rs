//! On-disk cache of matrix records.
//!
//! Each entry is one file: a hex SHA-256 of the payload on the first line,
//! then the JSON payload. Entries are written to a temporary file in the
//! cache directory and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::record::MatrixRecord;
use nakajima::bv_ring::SurfaceModel;

pub struct Cache {
    dir: PathBuf,
}

/// Outcome of a lookup.
#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(MatrixRecord),
    Miss,
    /// The file existed but failed its checksum or did not parse.
    Corrupt,
}

fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Digest of (model, canonical expression, n, mode).
    pub fn key(model: &SurfaceModel, expr: &str, n: u32) -> String {
        let mode = format!("{:?}", model.mode()).to_lowercase();
        let material = format!("{}\n{expr}\n{n}\n{mode}", model.canonical_json());
        sha256_hex(material.as_bytes())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Lookup {
        let Ok(text) = fs::read_to_string(self.path(key)) else {
            return Lookup::Miss;
        };
        let Some((sum, payload)) = text.split_once('\n') else {
            return Lookup::Corrupt;
        };
        if sum != sha256_hex(payload.as_bytes()) {
            return Lookup::Corrupt;
        }
        match serde_json::from_str(payload) {
            Ok(r) => Lookup::Hit(r),
            Err(_) => Lookup::Corrupt,
        }
    }

    pub fn store(&self, key: &str, record: &MatrixRecord) -> std::io::Result<()> {
        let payload = serde_json::to_string(record).expect("serializable record");
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        writeln!(tmp, "{}", sha256_hex(payload.as_bytes()))?;
        tmp.write_all(payload.as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
