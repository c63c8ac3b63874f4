use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// A pass/fail comparison of a measured value against a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

/// Full-precision scientific notation, 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }
}

pub struct Report {
    pub results: Vec<Value>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub svg: Option<String>,
}

impl Report {
    pub fn new() -> Report {
        Report {
            results: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            svg: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn json(&self, cfg: &RunConfig) -> String {
        let doc = json!({
            "config": cfg,
            "results": self.results,
            "checks": self.checks,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }

    /// Writes the requested formats into the output directory and returns
    /// the written paths.
    pub fn write(&self, cfg: &RunConfig) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(&cfg.out)?;
        let mut written = Vec::new();
        if cfg.wants(Format::Csv) {
            for t in &self.tables {
                let p = cfg.out.join(format!("{}.csv", t.name));
                t.write(&p)?;
                written.push(p);
            }
        }
        if cfg.wants(Format::Json) {
            let p = cfg.out.join(format!("{}.json", cfg.command));
            fs::write(&p, self.json(cfg))?;
            written.push(p);
        }
        if let (true, Some(svg)) = (cfg.wants(Format::Svg), &self.svg) {
            let p = cfg.out.join(format!("{}.svg", cfg.command));
            fs::write(&p, svg)?;
            written.push(p);
        }
        Ok(written)
    }
}
