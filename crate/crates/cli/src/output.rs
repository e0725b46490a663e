use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct EigenfunctionSample {
    pub x: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRecord {
    #[serde(rename = "N")]
    pub overtone: usize,
    pub resolution: usize,
    pub eigenvalue: f64,
    /// Relative change of the eigenvalue across the resolution ladder.
    pub residual: f64,
    /// Physical eigenvalue, tensor problem only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<Vec<EigenfunctionSample>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub problem: &'static str,
    pub n: i64,
    pub k: i64,
    pub units: String,
    pub resolutions: Vec<usize>,
    pub eigenvalues: Vec<EigenRecord>,
}

impl SpectrumReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let tensor = self.eigenvalues.iter().any(|r| r.lambda.is_some());
        let mut s = String::from("problem,n,k,N,resolution,eigenvalue,residual");
        if tensor {
            s.push_str(",lambda");
        }
        s.push_str(",units\n");
        for r in &self.eigenvalues {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}",
                self.problem,
                self.n,
                self.k,
                r.overtone,
                r.resolution,
                num(r.eigenvalue),
                num(r.residual)
            ));
            if let Some(l) = r.lambda {
                s.push_str(&format!(",{}", num(l)));
            }
            s.push_str(&format!(",{}\n", self.units));
        }
        s
    }

    /// Long-format eigenfunction table, one row per grid point.
    pub fn eigenfunctions_csv(&self) -> String {
        let mut s = String::from("N,x,u\n");
        for r in &self.eigenvalues {
            for p in r.eigenfunction.iter().flatten() {
                s.push_str(&format!("{},{},{}\n", r.overtone, num(p.x), num(p.u)));
            }
        }
        s
    }
}

/// Shortest round-trip form, in exponent notation outside [1e-4, 1e16).
pub fn num(v: f64) -> String {
    if v != 0.0 && v.is_finite() && !(1e-4..1e16).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Companion path for CSV eigenfunctions: `run.csv` → `run.eigenfunctions.csv`.
pub fn eigenfunction_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.eigenfunctions.csv"))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
