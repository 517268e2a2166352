//! Side-by-side comparison of two output directories (or two CSV files).
//!
//! Rows are matched by their key columns (`t`, `n`, `value`), which must
//! agree exactly up to round-off; otherwise the grids differ and the
//! comparison is refused. Every other numeric column gets max and mean
//! absolute deviations. Populations, occupations and entropies are judged
//! against the tolerance. The remaining columns are reported only, since
//! phases and rates are not bounded by the population agreement.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

/// Default pass threshold on judged columns.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

const KEY_COLUMNS: &[&str] = &["t", "n", "value", "index", "y", "omega"];
const JUDGED_COLUMNS: &[&str] = &["abs2_alpha", "occupation", "rho_ee", "entropy"];
const COMPARED_FILES: &[&str] = &["trace.csv", "field.csv", "master_eq.csv", "sweep.csv"];

#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub column: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub samples: usize,
    pub judged: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileReport {
    pub file: String,
    pub rows: usize,
    pub quantities: Vec<Quantity>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub pass: bool,
    pub tolerance: f64,
    pub files: Vec<FileReport>,
    /// Scenarios or files present on one side only.
    pub unmatched: Vec<String>,
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn read_csv(path: &Path) -> Result<Csv> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| if f.is_empty() { Ok(None) } else { f.parse::<f64>().map(Some) })
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("non-numeric field in {}", path.display()))?;
        rows.push(row);
    }
    Ok(Csv { header, rows })
}

pub fn compare_files(a: &Path, b: &Path, label: &str, tolerance: f64) -> Result<FileReport> {
    let (x, y) = (read_csv(a)?, read_csv(b)?);
    if x.header != y.header {
        bail!("{label}: column sets differ");
    }
    if x.rows.len() != y.rows.len() {
        bail!("{label}: mismatched grids ({} vs {} rows)", x.rows.len(), y.rows.len());
    }
    let keys: Vec<usize> = (0..x.header.len()).filter(|&i| KEY_COLUMNS.contains(&x.header[i].as_str())).collect();
    for (r, (u, v)) in x.rows.iter().zip(&y.rows).enumerate() {
        for &k in &keys {
            let (p, q) = (u[k].unwrap_or(f64::NAN), v[k].unwrap_or(f64::NAN));
            if !((p - q).abs() <= 1e-9 * (1.0 + p.abs())) {
                bail!("{label}: mismatched grids at row {} column '{}' ({p} vs {q})", r + 1, x.header[k]);
            }
        }
    }
    let mut quantities = Vec::new();
    for (i, col) in x.header.iter().enumerate() {
        if keys.contains(&i) {
            continue;
        }
        let devs: Vec<f64> = x
            .rows
            .iter()
            .zip(&y.rows)
            .filter_map(|(u, v)| Some((u[i]? - v[i]?).abs()))
            .collect();
        if devs.is_empty() {
            continue;
        }
        let max_abs = devs.iter().fold(0.0f64, |m, &d| if d.is_nan() { f64::INFINITY } else { m.max(d) });
        let mean_abs = devs.iter().sum::<f64>() / devs.len() as f64;
        let judged = JUDGED_COLUMNS.contains(&col.as_str());
        quantities.push(Quantity {
            column: col.clone(),
            max_abs,
            mean_abs,
            samples: devs.len(),
            judged,
            pass: !judged || max_abs < tolerance,
        });
    }
    Ok(FileReport { file: label.to_string(), rows: x.rows.len(), quantities })
}

fn scenario_dirs(root: &Path) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for e in std::fs::read_dir(root).with_context(|| format!("cannot read {}", root.display()))? {
        let e = e?;
        if e.file_type()?.is_dir() {
            out.insert(e.file_name().to_string_lossy().into_owned());
        }
    }
    Ok(out)
}

/// Compare two outputs: directories from `simulate`, or two CSV files.
pub fn compare(a: &Path, b: &Path, tolerance: f64) -> Result<Report> {
    let mut files = Vec::new();
    let mut unmatched = Vec::new();
    if a.is_file() && b.is_file() {
        let label = a.file_name().map_or_else(|| "file".into(), |n| n.to_string_lossy().into_owned());
        files.push(compare_files(a, b, &label, tolerance)?);
    } else if a.is_dir() && b.is_dir() {
        let (da, db) = (scenario_dirs(a)?, scenario_dirs(b)?);
        unmatched.extend(da.symmetric_difference(&db).cloned());
        for name in da.intersection(&db) {
            for f in COMPARED_FILES {
                let (pa, pb) = (a.join(name).join(f), b.join(name).join(f));
                match (pa.is_file(), pb.is_file()) {
                    (true, true) => files.push(compare_files(&pa, &pb, &format!("{name}/{f}"), tolerance)?),
                    (false, false) => {}
                    _ => unmatched.push(format!("{name}/{f}")),
                }
            }
        }
        if files.is_empty() && unmatched.is_empty() {
            bail!("nothing to compare: no scenario outputs found");
        }
    } else {
        bail!("compare needs two directories or two files");
    }
    let pass = unmatched.is_empty() && files.iter().all(|f| f.quantities.iter().all(|q| q.pass));
    Ok(Report { pass, tolerance, files, unmatched })
}
