//! File writers. Every file is rendered in memory first so its checksum is
//! known before it lands on disk.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One written file, recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the output root, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Writes files below `root/<dir>` and remembers their checksums.
pub struct ScenarioWriter {
    root: PathBuf,
    dir: String,
    pub files: Vec<FileEntry>,
}

impl ScenarioWriter {
    pub fn new(root: &Path, dir: &str) -> Result<Self> {
        let full = root.join(dir);
        std::fs::create_dir_all(&full).with_context(|| format!("cannot create {}", full.display()))?;
        Ok(ScenarioWriter { root: root.to_path_buf(), dir: dir.to_string(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let rel = format!("{}/{}", self.dir, name);
        let path = self.root.join(&self.dir).join(name);
        std::fs::write(&path, data).with_context(|| format!("cannot write {}", path.display()))?;
        self.files.push(FileEntry { path: rel, sha256: sha256_hex(data), bytes: data.len() as u64 });
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, table: Table) -> Result<()> {
        let data = table.render()?;
        self.write(name, &data)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut data = serde_json::to_vec_pretty(value)?;
        data.push(b'\n');
        self.write(name, &data)
    }
}

/// A CSV table of optional numbers; `None` is written as an empty field.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(Option<f64>),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(Some(v)) => format!("{v:e}"),
                Cell::Num(None) => String::new(),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        Ok(w.into_inner()?)
    }
}

/// Magic bytes opening a binary field table.
pub const FIELD_MAGIC: &[u8; 4] = b"CQFT";
pub const FIELD_VERSION: u32 = 1;

/// Photon occupation on a (time × site) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub times: Vec<f64>,
    pub first_site: i64,
    pub n_sites: usize,
    /// Row-major, `values[i * n_sites + j]` is site `first_site + j` at `times[i]`.
    pub values: Vec<f64>,
}

impl FieldTable {
    /// Layout (all little-endian): magic `CQFT`, `u32` version, `u32` time
    /// count, `u32` site count, `i32` first site, then the times as `f64`,
    /// then the values as `f64`, row-major by time.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 8 * (self.times.len() + self.values.len()));
        out.extend_from_slice(FIELD_MAGIC);
        out.extend_from_slice(&FIELD_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.times.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.n_sites as u32).to_le_bytes());
        out.extend_from_slice(&(self.first_site as i32).to_le_bytes());
        for v in self.times.iter().chain(&self.values) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(data: &[u8]) -> Result<Self> {
        if data.len() < 20 || &data[..4] != FIELD_MAGIC {
            bail!("not a field table");
        }
        let u32_at = |i: usize| u32::from_le_bytes(data[i..i + 4].try_into().expect("4 bytes"));
        if u32_at(4) != FIELD_VERSION {
            bail!("unsupported field table version {}", u32_at(4));
        }
        let n_t = u32_at(8) as usize;
        let n_sites = u32_at(12) as usize;
        let first_site = i32::from_le_bytes(data[16..20].try_into().expect("4 bytes")) as i64;
        let count = n_t + n_t * n_sites;
        if data.len() != 20 + 8 * count {
            bail!("field table length does not match its header");
        }
        let mut nums = data[20..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")));
        let times = nums.by_ref().take(n_t).collect();
        let values = nums.collect();
        Ok(FieldTable { times, first_site, n_sites, values })
    }

    /// Long-format CSV: `t, n, occupation`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["t", "n", "occupation"]);
        for (i, &time) in self.times.iter().enumerate() {
            for j in 0..self.n_sites {
                t.push(vec![time.into(), (self.first_site + j as i64).into(), self.values[i * self.n_sites + j].into()]);
            }
        }
        t
    }
}
