//! Result cache: one NDJSON file per format version, each line carrying its
//! own checksum so a torn or edited line only loses that record.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumping this orphans every existing entry: the file name changes too.
pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Record {
    version: u32,
    key: String,
    value: Value,
    checksum: String,
}

fn checksum(version: u32, key: &str, value: &Value) -> String {
    let mut h = Sha256::new();
    h.update(version.to_string().as_bytes());
    h.update(b"\n");
    h.update(key.as_bytes());
    h.update(b"\n");
    h.update(value.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub struct CacheStore {
    path: PathBuf,
    entries: BTreeMap<String, Value>,
    pending: Vec<String>,
    skipped: usize,
}

impl CacheStore {
    pub fn file_name() -> String {
        format!("springer-cache-v{CACHE_VERSION}.ndjson")
    }

    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(Self::file_name());
        let mut entries = BTreeMap::new();
        let mut skipped = 0;
        if path.exists() {
            for line in BufReader::new(fs::File::open(&path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<Record>(&line) {
                    Ok(r) if r.version == CACHE_VERSION && r.checksum == checksum(r.version, &r.key, &r.value) => {
                        entries.insert(r.key, r.value);
                    }
                    _ => skipped += 1,
                }
            }
        }
        Ok(CacheStore {
            path,
            entries,
            pending: Vec::new(),
            skipped,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lines dropped on load for a bad checksum, bad JSON or a foreign version.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn insert(&mut self, key: String, value: Value) {
        if self.entries.insert(key.clone(), value).is_none() {
            self.pending.push(key);
        }
    }

    /// Writes the surviving records plus new ones to a temporary file and
    /// renames it over the old file, so readers never see a partial write.
    pub fn flush(&mut self) -> io::Result<()> {
        if self.pending.is_empty() && self.skipped == 0 {
            return Ok(());
        }
        let tmp = self.path.with_extension(format!("ndjson.tmp{}", std::process::id()));
        {
            let mut f = io::BufWriter::new(fs::File::create(&tmp)?);
            for (key, value) in &self.entries {
                let rec = Record {
                    version: CACHE_VERSION,
                    key: key.clone(),
                    value: value.clone(),
                    checksum: checksum(CACHE_VERSION, key, value),
                };
                serde_json::to_writer(&mut f, &rec)?;
                f.write_all(b"\n")?;
            }
            f.flush()?;
            f.get_ref().sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        self.pending.clear();
        self.skipped = 0;
        Ok(())
    }
}
