//! Line-delimited JSON count cache: one record per line, append-only
//! write-through. Corrupt lines are skipped with a warning, never fatal.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use num::bigint::BigUint;
use serde::{Deserialize, Serialize};

use swilf::count::CountTable;
use swilf::perm::Permutation;

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheRecord {
    pub pattern: String,
    pub n: usize,
    /// Exact count as decimal text.
    pub count: String,
    pub engine_version: String,
}

pub struct CacheFile {
    path: PathBuf,
    loaded_keys: BTreeSet<(String, usize)>,
}

impl CacheFile {
    pub fn new(path: PathBuf) -> Self {
        CacheFile { path, loaded_keys: BTreeSet::new() }
    }

    /// Reads every well-formed record into a [`CountTable`]. A missing file
    /// yields an empty table.
    pub fn load(&mut self) -> CountTable {
        let mut table = CountTable::new();
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(_) => return table,
        };
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("warning: cache read stopped at line {}: {e}", lineno + 1);
                    break;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let record: CacheRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("warning: skipping corrupt cache line {}: {e}", lineno + 1);
                    continue;
                }
            };
            let pattern = match Permutation::from_str(&record.pattern) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!(
                        "warning: skipping cache line {} with bad pattern '{}': {e}",
                        lineno + 1,
                        record.pattern
                    );
                    continue;
                }
            };
            let count = match record.count.parse::<BigUint>() {
                Ok(c) => c,
                Err(e) => {
                    eprintln!(
                        "warning: skipping cache line {} with bad count '{}': {e}",
                        lineno + 1,
                        record.count
                    );
                    continue;
                }
            };
            self.loaded_keys.insert((pattern.canonical_string(), record.n));
            table.insert(&pattern, record.n, count);
        }
        table
    }

    /// Appends every entry of `table` that was not present at load time.
    pub fn append_new(&self, table: &CountTable, engine_version: &str) -> std::io::Result<usize> {
        let fresh: Vec<CacheRecord> = table
            .iter()
            .filter(|(key, _)| !self.loaded_keys.contains(key))
            .map(|((pattern, n), count)| CacheRecord {
                pattern: pattern.clone(),
                n: *n,
                count: count.to_string(),
                engine_version: engine_version.to_string(),
            })
            .collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        for record in &fresh {
            let line = serde_json::to_string(record).expect("record serializes");
            writeln!(file, "{line}")?;
        }
        Ok(fresh.len())
    }
}
