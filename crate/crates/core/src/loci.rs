//! Triangle-center loci over the billiard, focus-inversive and
//! center-inversive 3-periodic families: sweeping, fitting, classification
//! and comparison with closed forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centers::{center_point, CenterId, Triangle};
use crate::error::{Error, Result};
use crate::fit::{fit_circle, fit_conic, CircleFit, ConicFit, ConicKind, EllipseParams};
use crate::geometry::{EllipseSpec, Point2};
use crate::invariants::{closed_form_refs, match_mirror, Branch, MIN_GRID};
use crate::inversive::{center_inversive, focus_inversive, InversiveConfig};
use crate::orbit::{confocal_caustic_n3, three_periodic, CausticSpec};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Billiard,
    FocusInversive,
    CenterInversive,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Billiard, Family::FocusInversive, Family::CenterInversive];

    pub fn name(self) -> &'static str {
        match self {
            Family::Billiard => "billiard",
            Family::FocusInversive => "focus-inversive",
            Family::CenterInversive => "center-inversive",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "billiard" => Ok(Family::Billiard),
            "inversive" | "focus-inversive" => Ok(Family::FocusInversive),
            "center-inversive" => Ok(Family::CenterInversive),
            _ => Err(format!(
                "unknown family '{s}' (expected billiard, focus-inversive or center-inversive)"
            )),
        }
    }
}

/// Center positions swept over a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusSample {
    pub center_id: u32,
    pub family: Family,
    pub params: Vec<f64>,
    pub points: Vec<Point2>,
    pub grid: usize,
    /// Billiard major semiaxis, the reference length for point loci.
    pub scale: f64,
}

/// The triangle of family `family` at parameter `t1`.
pub fn family_triangle(e: &EllipseSpec, cfg: InversiveConfig, family: Family, t1: f64) -> Result<Triangle> {
    let o = three_periodic(e, t1)?;
    match family {
        Family::Billiard => Triangle::from_slice(&o.vertices),
        Family::FocusInversive => Triangle::from_slice(&focus_inversive(e, &o, cfg)?.vertices),
        Family::CenterInversive => Triangle::from_slice(center_inversive(&o, cfg.rho)?.vertices()),
    }
}

pub fn sweep_locus(
    e: &EllipseSpec,
    cfg: InversiveConfig,
    id: CenterId,
    family: Family,
    grid: usize,
) -> Result<LocusSample> {
    if grid < MIN_GRID {
        return Err(Error::GridTooSmall {
            got: grid,
            min: MIN_GRID,
        });
    }
    e.require_non_circular()?;
    let params = par::grid_params(grid);
    let points = par::try_map(&params, |&t1| {
        family_triangle(e, cfg, family, t1)
            .and_then(|t| center_point(&t, id))
            .map_err(|err| err.at(t1))
    })?;
    Ok(LocusSample {
        center_id: id.index(),
        family,
        params,
        points,
        grid,
        scale: e.a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusTolerances {
    pub point: f64,
    pub circle: f64,
    pub conic: f64,
    pub non_conic: f64,
}

impl Default for LocusTolerances {
    fn default() -> Self {
        LocusTolerances {
            point: 1e-9,
            circle: 1e-6,
            conic: 1e-6,
            non_conic: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Point,
    Circle,
    Ellipse,
    NonConic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Point => "point",
            Verdict::Circle => "circle",
            Verdict::Ellipse => "ellipse",
            Verdict::NonConic => "non-conic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusClass {
    pub verdict: Verdict,
    pub tolerances: LocusTolerances,
    /// Largest distance between two locus points.
    pub diameter: f64,
    /// RMS distance of the locus points from their mean.
    pub locus_scale: f64,
    pub circle: Option<CircleFit>,
    pub conic: Option<ConicFit>,
    /// Conic RMS over `locus_scale`, when a conic fit exists.
    pub conic_rel_rms: Option<f64>,
    /// For non-conic verdicts: whether the conic residual clears the
    /// non-conic threshold rather than sitting between the two thresholds.
    pub confident: bool,
}

fn diameter(points: &[Point2]) -> f64 {
    let mut d = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.dist(*q));
        }
    }
    d
}

/// Point, then circle, then ellipse, else non-conic.
pub fn classify_locus(s: &LocusSample, tols: &LocusTolerances) -> LocusClass {
    let pts = &s.points;
    let diameter = diameter(pts);
    let n = pts.len().max(1) as f64;
    let mean = pts.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) / n;
    let locus_scale = (pts.iter().map(|p| (*p - mean).norm_sq()).sum::<f64>() / n).sqrt();
    let mut class = LocusClass {
        verdict: Verdict::NonConic,
        tolerances: *tols,
        diameter,
        locus_scale,
        circle: None,
        conic: None,
        conic_rel_rms: None,
        confident: false,
    };
    if diameter < tols.point * s.scale {
        class.verdict = Verdict::Point;
        class.confident = true;
        return class;
    }
    class.circle = fit_circle(pts).ok();
    class.conic = fit_conic(pts).ok();
    class.conic_rel_rms = class.conic.map(|c| c.rms / locus_scale);
    if let Some(c) = class.circle {
        if c.rms < tols.circle * c.radius {
            class.verdict = Verdict::Circle;
            class.confident = true;
            return class;
        }
    }
    if let (Some(c), Some(rel)) = (class.conic, class.conic_rel_rms) {
        if c.kind == ConicKind::Ellipse && rel < tols.conic {
            class.verdict = Verdict::Ellipse;
            class.confident = true;
            return class;
        }
    }
    class.confident = class.conic_rel_rms.is_none_or(|r| r > tols.non_conic);
    class
}

/// Ids with closed-form circular loci over the focus-inversive family.
pub const REFERENCE_CIRCLE_IDS: [u32; 8] = [1, 2, 3, 4, 5, 9, 11, 100];

/// Closed-form center and radius of the focus-inversive locus of `X_id`.
pub fn circle_locus_reference(e: &EllipseSpec, rho: f64, id: u32) -> Result<(Point2, f64)> {
    e.require_non_circular()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidRadius(rho));
    }
    let (a, b, c, d) = (e.a, e.b, e.c, e.delta);
    let (a2, b2) = (a * a, b * b);
    let b4 = b2 * b2;
    let r2 = rho * rho;
    let (x, r) = match id {
        1 => (
            c * (-1.0 + r2 * (-2.0 * a2 + b2 + 2.0 * d) / (2.0 * b4)),
            r2 * (-2.0 * d * d + b4 + (2.0 * a2 - b2) * d) / (2.0 * a * b4),
        ),
        2 => (
            -c * (1.0 + r2 * (2.0 * a2 - b2 - d) / (3.0 * a2 * b2)),
            r2 * (2.0 * a2 - b2 - d) / (3.0 * a * b2),
        ),
        3 => (
            -c * (1.0 + r2 * (a2 + b2) / (2.0 * b4)),
            r2 * a * (-b2 + d) / (2.0 * b4),
        ),
        4 => (
            c * (-1.0 + r2 * (b2 + d) * d / (a2 * b4)),
            r2 * c * c * (b2 + d) / (a * b4),
        ),
        5 => (
            c * (-1.0 + r2 * (a2 * a2 - 3.0 * a2 * b2 + 2.0 * b4 + 2.0 * b2 * d) / (4.0 * a2 * b4)),
            r2 * ((3.0 * a2 - 2.0 * b2) * b2 + (a2 - 2.0 * b2) * d) / (4.0 * a * b2),
        ),
        9 => {
            let refs = closed_form_refs(e, rho)?;
            (refs.c9_dagger.x, refs.r9_dagger)
        }
        11 => (
            c * (-1.0 + r2 * (-a2 + b2 + d) / (2.0 * a2 * b2)),
            r2 * (-a2 + b2 + d) / (2.0 * a * b2),
        ),
        100 => (-c * (1.0 + r2 / b2), r2 * a / b2),
        _ => return Err(Error::UnsupportedCenter(id)),
    };
    Ok((Point2::new(x, 0.0), r))
}

/// A fitted circle compared against a reference, modulo the mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMatch {
    pub branch: Branch,
    pub reference_center: Point2,
    pub reference_radius: f64,
    pub center_rel_error: f64,
    pub radius_rel_error: f64,
}

impl CircleMatch {
    pub fn within(&self, tol: f64) -> bool {
        self.center_rel_error < tol && self.radius_rel_error < tol
    }
}

pub fn compare_circle(fit: &CircleFit, center: Point2, radius: f64) -> CircleMatch {
    let (branch, c) = match_mirror(fit.center, center);
    CircleMatch {
        branch,
        reference_center: c,
        reference_radius: radius,
        center_rel_error: fit.center.dist(c) / c.norm().max(radius),
        radius_rel_error: (fit.radius - radius).abs() / radius,
    }
}

/// Semiaxes along x and y of an ellipse whose axes are (nearly) aligned with
/// the coordinate axes, plus the misalignment angle.
fn axis_aligned(p: &EllipseParams) -> (f64, f64, f64) {
    let quarter = std::f64::consts::FRAC_PI_2;
    let tilt = p.angle.abs();
    if tilt <= quarter / 2.0 {
        (p.semi_major, p.semi_minor, tilt)
    } else {
        (p.semi_minor, p.semi_major, (quarter - tilt).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct X3Report {
    pub billiard_fit: ConicFit,
    pub inversive_fit: ConicFit,
    pub billiard_axes: (f64, f64),
    pub inversive_axes: (f64, f64),
    /// Largest distance of either fitted center from the origin.
    pub center_offset: f64,
    /// Largest misalignment of either fitted ellipse, radians.
    pub tilt: f64,
    /// `semi(X3⊙)·δ / semi(X3) − 1` for the x and y semiaxes.
    pub ratio_errors: (f64, f64),
    pub caustic: CausticSpec,
    /// `(x/y aspect of the X3⊙ locus) · (x/y aspect of the caustic) − 1`.
    pub aspect_product_error: f64,
    /// Largest `| |OX₃|² − R² + δ |` over the sweep.
    pub max_power_error: f64,
    pub delta: f64,
}

fn require_ellipse(fit: &ConicFit, which: &'static str) -> Result<EllipseParams> {
    fit.ellipse.ok_or(Error::NotAnEllipse(which))
}

/// Compares the circumcenter locus over billiard 3-periodics with the
/// circumcenter locus over their center-inversive (unit circle) images.
pub fn center_inversive_x3_check(e: &EllipseSpec, grid: usize) -> Result<X3Report> {
    let cfg = InversiveConfig::default();
    let x3 = CenterId::new(3)?;
    let bil = sweep_locus(e, cfg, x3, Family::Billiard, grid)?;
    let inv = sweep_locus(e, cfg, x3, Family::CenterInversive, grid)?;
    let billiard_fit = fit_conic(&bil.points)?;
    let inversive_fit = fit_conic(&inv.points)?;
    let pb = require_ellipse(&billiard_fit, "billiard circumcenter locus")?;
    let pi = require_ellipse(&inversive_fit, "center-inversive circumcenter locus")?;
    let (bx, by, tb) = axis_aligned(&pb);
    let (ix, iy, ti) = axis_aligned(&pi);
    let d = e.delta;
    let caustic = confocal_caustic_n3(e)?;

    let powers = par::try_map(&bil.params, |&t1| {
        let o = three_periodic(e, t1)?;
        let t = Triangle::from_slice(&o.vertices)?;
        let c = center_point(&t, x3)?;
        let r = c.dist(o.vertices[0]);
        Ok((c.norm_sq() - r * r + d).abs())
    })?;

    Ok(X3Report {
        center_offset: pb.center.norm().max(pi.center.norm()),
        tilt: tb.max(ti),
        ratio_errors: (ix * d / bx - 1.0, iy * d / by - 1.0),
        aspect_product_error: (ix / iy) * (caustic.a2 / caustic.b2) - 1.0,
        max_power_error: powers.into_iter().fold(0.0, f64::max),
        billiard_axes: (bx, by),
        inversive_axes: (ix, iy),
        billiard_fit,
        inversive_fit,
        caustic,
        delta: d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwanReport {
    pub center_id: u32,
    /// Largest `|f(P) − 1|` over the billiard-family locus.
    pub max_boundary_error: f64,
    pub inversive: LocusClass,
}

/// Checks that the billiard-family locus of `id` is the billiard itself and
/// classifies its focus-inversive locus.
pub fn swan_check(
    e: &EllipseSpec,
    cfg: InversiveConfig,
    id: CenterId,
    grid: usize,
    tols: &LocusTolerances,
) -> Result<SwanReport> {
    let bil = sweep_locus(e, cfg, id, Family::Billiard, grid)?;
    let inv = sweep_locus(e, cfg, id, Family::FocusInversive, grid)?;
    Ok(SwanReport {
        center_id: id.index(),
        max_boundary_error: bil
            .points
            .iter()
            .map(|p| (e.implicit(*p) - 1.0).abs())
            .fold(0.0, f64::max),
        inversive: classify_locus(&inv, tols),
    })
}
