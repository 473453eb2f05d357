//! CSV report emission and the companion plotting script.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Column order of every emitted table.
pub const HEADER: [&str; 17] = [
    "experiment",
    "R",
    "L",
    "d",
    "n_modes",
    "nz",
    "nt",
    "Zmax",
    "horizon",
    "seed",
    "sample",
    "norm_name",
    "lhs",
    "rhs",
    "ratio",
    "lower_or_upper",
    "refine_level",
];

/// One row of a report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub experiment: String,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub d: usize,
    pub n_modes: usize,
    pub nz: usize,
    pub nt: usize,
    #[serde(rename = "Zmax")]
    pub zmax: f64,
    pub horizon: f64,
    pub seed: u64,
    pub sample: usize,
    pub norm_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub lower_or_upper: String,
    pub refine_level: usize,
}

/// Path of the plotting script written next to `csv`.
pub fn plot_script_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    csv.with_file_name(format!("{stem}_plot.py"))
}

const PLOT_SCRIPT: &str = r#"# Plots the ensemble-max ratio against R, one curve per refinement level.
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "__CSV__"
best = defaultdict(float)
with open(path) as fh:
    for row in csv.DictReader(fh):
        if row["norm_name"] != "total":
            continue
        key = (int(row["refine_level"]), float(row["R"]))
        best[key] = max(best[key], float(row["ratio"]))
levels = sorted({lvl for lvl, _ in best})
for lvl in levels:
    rs = sorted(r for l, r in best if l == lvl)
    plt.loglog(rs, [best[(lvl, r)] for r in rs], marker="o", label=f"level {lvl}")
plt.xlabel("R")
plt.ylabel("max ratio (LHS upper / RHS lower)")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + "_ratio_vs_R.png", dpi=150)
"#;

/// Write `records` as CSV to `path` and the plotting script beside it.
pub fn emit_reports(records: &[Record], path: &Path) -> Result<PathBuf> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(io)?;
    w.write_record(HEADER).map_err(io)?;
    for r in records {
        w.serialize(r).map_err(io)?;
    }
    w.flush()?;
    let script = plot_script_path(path);
    let name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("report.csv");
    std::fs::write(&script, PLOT_SCRIPT.replace("__CSV__", name))?;
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> Record {
        Record {
            experiment: "mre".into(),
            r: 0.5,
            l: std::f64::consts::TAU,
            d: 2,
            n_modes: 5,
            nz: 32,
            nt: 16,
            zmax: 1.0,
            horizon: 1.0,
            seed: 1,
            sample: 0,
            norm_name: "total".into(),
            lhs: 2.5,
            rhs: 1.25,
            ratio: 2.0,
            lower_or_upper: "upper".into(),
            refine_level: 0,
        }
    }

    #[test]
    fn empty_and_single_tables() {
        let dir = std::env::temp_dir().join(format!("stokesband-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("empty.csv");
        emit_reports(&[], &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, format!("{}\n", HEADER.join(",")));
        let q = dir.join("one.csv");
        let script = emit_reports(&[record()], &q).unwrap();
        let text = std::fs::read_to_string(&q).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("mre,0.5,6.283185307179586,2,5,32,16,1.0,1.0,1,0,total,2.5"));
        assert!(std::fs::read_to_string(script).unwrap().contains("one.csv"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let p = Path::new("/nonexistent-dir/for/sure/report.csv");
        assert!(matches!(emit_reports(&[], p), Err(Error::Io(_))));
    }
}
