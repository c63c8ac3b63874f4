use std::path::PathBuf;

use clap::{Args, ValueEnum};
use inversive_core::centers::SUPPORTED_CENTERS;
use inversive_core::invariants::MIN_GRID;
use inversive_core::tables::{FIRST_N, LAST_N};
use inversive_core::{CenterId, EllipseSpec, Family, Focus, InversiveConfig};
use serde::Serialize;

#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    /// Billiard semi-major axis.
    #[arg(long, default_value_t = 1.5)]
    pub a: f64,
    /// Billiard semi-minor axis.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Inversion circle radius.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Number of orbit vertices.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Number of equispaced starting parameters in a sweep.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Starting boundary parameter of a single orbit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t1: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Directory receiving the output files.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated output formats.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json,svg")]
    pub format: Vec<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct ToleranceArgs {
    /// Relative tolerance for invariants with a closed form.
    #[arg(long, env = "INVERSIVE_TOL_INVARIANT", default_value_t = 1e-9)]
    pub tol_invariant: f64,
    /// Relative spread tolerance for invariants without a closed form.
    #[arg(long, env = "INVERSIVE_TOL_CONJECTURE", default_value_t = 1e-6)]
    pub tol_conjecture: f64,
    /// Circle fit rms/R threshold and closed-form circle tolerance.
    #[arg(long, env = "INVERSIVE_TOL_CIRCLE", default_value_t = 1e-6)]
    pub tol_circle: f64,
    /// Conic fit rms/scale threshold.
    #[arg(long, env = "INVERSIVE_TOL_CONIC", default_value_t = 1e-6)]
    pub tol_conic: f64,
}

#[derive(Args, Debug, Clone)]
pub struct LociArgs {
    /// Comma-separated triangle center indices.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub ids: Vec<u32>,
    /// billiard, inversive (focus-inversive) or center-inversive.
    #[arg(long, default_value = "inversive")]
    pub family: String,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub invariant: f64,
    pub conjecture: f64,
    pub circle: f64,
    pub conic: f64,
}

/// Validated settings shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub n: usize,
    pub grid: usize,
    pub t1: f64,
    pub family: Option<Family>,
    pub ids: Vec<u32>,
    pub max_n: Option<usize>,
    #[serde(skip)]
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub tolerances: Tolerances,
}

fn positive(name: &str, x: f64) -> Result<(), String> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(format!("{name} must be finite and > 0, got {x}"))
    }
}

impl RunConfig {
    pub fn new(
        command: &'static str,
        g: &GeometryArgs,
        o: &OutputArgs,
        t: &ToleranceArgs,
    ) -> Result<RunConfig, String> {
        if !(g.a.is_finite() && g.b.is_finite() && g.b > 0.0 && g.a >= g.b) {
            return Err(format!("need a >= b > 0, got a={}, b={}", g.a, g.b));
        }
        positive("rho", g.rho)?;
        if g.n < 3 {
            return Err(format!("n must be at least 3, got {}", g.n));
        }
        if g.grid < MIN_GRID {
            return Err(format!("grid must be at least {MIN_GRID}, got {}", g.grid));
        }
        if !g.t1.is_finite() {
            return Err(format!("t1 must be finite, got {}", g.t1));
        }
        positive("tol-invariant", t.tol_invariant)?;
        positive("tol-conjecture", t.tol_conjecture)?;
        positive("tol-circle", t.tol_circle)?;
        positive("tol-conic", t.tol_conic)?;
        let mut formats = o.format.clone();
        formats.dedup();
        Ok(RunConfig {
            command,
            a: g.a,
            b: g.b,
            rho: g.rho,
            n: g.n,
            grid: g.grid,
            t1: g.t1,
            family: None,
            ids: Vec::new(),
            max_n: None,
            out: o.out.clone(),
            formats,
            tolerances: Tolerances {
                invariant: t.tol_invariant,
                conjecture: t.tol_conjecture,
                circle: t.tol_circle,
                conic: t.tol_conic,
            },
        })
    }

    pub fn with_loci(mut self, l: &LociArgs) -> Result<RunConfig, String> {
        let family: Family = l.family.parse()?;
        if l.ids.is_empty() {
            return Err("no center ids given".into());
        }
        for &k in &l.ids {
            if !CenterId::is_supported(k) {
                let list: Vec<String> = SUPPORTED_CENTERS.iter().map(|k| k.to_string()).collect();
                return Err(format!("unsupported center X{k}; supported: {}", list.join(",")));
            }
        }
        self.family = Some(family);
        self.ids = l.ids.clone();
        Ok(self)
    }

    pub fn with_max_n(mut self, max_n: usize) -> Result<RunConfig, String> {
        if !(FIRST_N..=LAST_N).contains(&max_n) {
            return Err(format!("max-n must lie in {FIRST_N}..={LAST_N}, got {max_n}"));
        }
        self.max_n = Some(max_n);
        Ok(self)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn ellipse(&self) -> EllipseSpec {
        EllipseSpec::new(self.a, self.b).expect("semiaxes validated")
    }

    pub fn inversive(&self) -> InversiveConfig {
        InversiveConfig::new(Focus::F1, self.rho).expect("radius validated")
    }
}
