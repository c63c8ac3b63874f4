//! Sweeps of the focus-inversive family, measured invariants and their
//! closed forms.

use serde::{Deserialize, Serialize};

use crate::centers::{center_by_index, Triangle};
use crate::error::{Error, Result};
use crate::fit::{centered_conic_through, fit_circle, CircleFit, EllipseParams};
use crate::geometry::{EllipseSpec, Focus, Point2, Polygon};
use crate::inversive::{focus_inversive, pedal_polygon, signed_area_of, InversiveConfig, InversivePolygon};
use crate::orbit::{orbit, reflection_residual, Orbit};
use crate::par;

/// Smallest accepted sweep grid.
pub const MIN_GRID: usize = 16;

/// Which of `(x, y)` and its mirror `(−x, y)` a reference matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Direct,
    Mirrored,
}

/// Picks the branch of `reference` closest to `measured`; returns the
/// branch and the matched reference point.
pub fn match_mirror(measured: Point2, reference: Point2) -> (Branch, Point2) {
    let m = reference.mirrored();
    if measured.dist(reference) <= measured.dist(m) {
        (Branch::Direct, reference)
    } else {
        (Branch::Mirrored, m)
    }
}

/// Relative-spread thresholds for declaring a trace invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceThresholds {
    /// Quantities with a closed form.
    pub closed_form: f64,
    /// Quantities without one.
    pub conjecture: f64,
}

impl Default for InvarianceThresholds {
    fn default() -> Self {
        InvarianceThresholds {
            closed_form: 1e-9,
            conjecture: 1e-6,
        }
    }
}

/// A named quantity sampled over the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantTrace {
    pub name: String,
    pub samples: Vec<(f64, f64)>,
    pub mean: f64,
    pub std: f64,
    pub max_abs_dev: f64,
    /// Magnitude used to make `std` and the closed-form gap relative.
    pub scale: f64,
    pub closed_form: Option<f64>,
    pub branch: Option<Branch>,
}

impl InvariantTrace {
    pub fn new(name: &str, samples: Vec<(f64, f64)>, closed_form: Option<f64>) -> InvariantTrace {
        Self::with_scale(name, samples, closed_form, None)
    }

    /// `scale` defaults to `|mean|`; traces that should vanish pass the
    /// magnitude of the quantities they compare.
    pub fn with_scale(
        name: &str,
        samples: Vec<(f64, f64)>,
        closed_form: Option<f64>,
        scale: Option<f64>,
    ) -> InvariantTrace {
        assert!(!samples.is_empty(), "trace {name} has no samples");
        let n = samples.len() as f64;
        let mean = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let var = samples.iter().map(|s| (s.1 - mean).powi(2)).sum::<f64>() / n;
        let max_abs_dev = samples.iter().fold(0.0f64, |m, s| m.max((s.1 - mean).abs()));
        InvariantTrace {
            name: name.to_string(),
            samples,
            mean,
            std: var.sqrt(),
            max_abs_dev,
            scale: scale.unwrap_or(mean.abs()),
            closed_form,
            branch: None,
        }
    }

    pub fn rel_std(&self) -> f64 {
        self.std / self.scale
    }

    pub fn rel_max_dev(&self) -> f64 {
        self.max_abs_dev / self.scale
    }

    /// `|mean − closed_form| / scale`, when a closed form exists.
    pub fn rel_error(&self) -> Option<f64> {
        self.closed_form
            .map(|c| (self.mean - c).abs() / self.scale.max(c.abs()))
    }

    pub fn is_invariant(&self, th: &InvarianceThresholds) -> bool {
        let limit = if self.closed_form.is_some() {
            th.closed_form
        } else {
            th.conjecture
        };
        self.rel_std() < limit
    }
}

/// Closed forms for the 3-periodic family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRefs {
    pub l_dagger: f64,
    pub sum_inv_spokes: f64,
    pub sum_cosines: f64,
    pub area_product: f64,
    pub x7_dagger: Point2,
    pub x7_ddagger: Point2,
    pub c9_dagger: Point2,
    pub r9_dagger: f64,
    pub c9_ddagger: Point2,
    /// Circumbilliard semiaxes, scaled by `ρ²` like every other length of
    /// the family.
    pub a_dagger: f64,
    pub b_dagger: f64,
    /// The same with the single factor `ρ` of the printed statement; equal
    /// to the above only at `ρ = 1`.
    pub a_dagger_printed: f64,
    pub b_dagger_printed: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

pub fn closed_form_refs(e: &EllipseSpec, rho: f64) -> Result<ClosedFormRefs> {
    e.require_non_circular()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidRadius(rho));
    }
    let (a, b, c, d) = (e.a, e.b, e.c, e.delta);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let (a4, b4) = (a2 * a2, b2 * b2);
    let (a6, b6) = (a4 * a2, b4 * b2);
    let r2 = rho * rho;
    let radicand = (8.0 * a4 + 4.0 * a2 * b2 + 2.0 * b4) * d + 8.0 * a6 + 3.0 * a2 * b4 + 2.0 * b6;
    let k2 = 2.0 * a2 - b2 - d;
    assert!(k2 > 0.0, "2a² − b² − δ must be positive for a > b");
    let k3 = 2.0 * a * b2 * ((2.0 * a2 - b2) * d + 2.0 * a4 - 2.0 * a2 * b2 - b4);
    let k1 = c * 2f64.sqrt() / k3 * radicand.sqrt();
    let ra = k1 * (k2 * (d + a * c)).sqrt();
    let rb = k1 * (k2 * (d - a * c)).sqrt();
    Ok(ClosedFormRefs {
        l_dagger: r2 * radicand.sqrt() / (a2 * b2),
        sum_inv_spokes: (a2 + b2 + d) / (a * b2),
        sum_cosines: d * (a2 + c2 - d) / (a2 * c2),
        area_product: r2.powi(4) / (8.0 * a4 * a4 * b2)
            * ((a4 + 2.0 * a2 * b2 + 4.0 * b4) * d + a6 + 1.5 * a4 * b2 + 4.0 * b6),
        x7_dagger: Point2::new(c * (1.0 - r2 / (d + c2)), 0.0),
        x7_ddagger: Point2::new(d / c, 0.0),
        c9_dagger: Point2::new(-c * (1.0 + r2 / (2.0 * b2)), 0.0),
        r9_dagger: r2 * k2 / (2.0 * a * b2),
        c9_ddagger: Point2::new(-(a2 + b2) / c, 0.0),
        a_dagger: r2 * ra,
        b_dagger: r2 * rb,
        a_dagger_printed: rho * ra,
        b_dagger_printed: rho * rb,
        k1,
        k2,
        k3,
    })
}

/// The `X₉`-centered circumconic of a triangle.
pub fn circumbilliard(t: &Triangle) -> Result<EllipseParams> {
    let x9 = center_by_index(t, 9)?;
    centered_conic_through(x9, t.vertices)
}

/// Everything measured on one member of the family.
#[derive(Debug, Clone, PartialEq)]
struct Sample {
    t1: f64,
    perimeter: f64,
    sum_inv_spokes: f64,
    spoke_distance_sum: f64,
    sum_cosines: f64,
    area_product: f64,
    pedal_gap: f64,
    pedal_scale: f64,
    triangle: Option<TriangleSample>,
}

#[derive(Debug, Clone, PartialEq)]
struct TriangleSample {
    x7: Point2,
    x9: Point2,
    circumbilliard: EllipseParams,
}

fn inversive_pair(e: &EllipseSpec, o: &Orbit, rho: f64) -> Result<(InversivePolygon, InversivePolygon)> {
    Ok((
        focus_inversive(e, o, InversiveConfig::new(Focus::F1, rho)?)?,
        focus_inversive(e, o, InversiveConfig::new(Focus::F2, rho)?)?,
    ))
}

fn pedal_area(inv: &InversivePolygon) -> Result<f64> {
    Ok(signed_area_of(&pedal_polygon(&inv.vertices, inv.center)?))
}

fn measure(e: &EllipseSpec, cfg: InversiveConfig, n: usize, t1: f64) -> Result<Sample> {
    let o = orbit(e, n, t1)?;
    let (inv1, inv2) = inversive_pair(e, &o, cfg.rho)?;
    let (own, other) = match cfg.focus {
        Focus::F1 => (&inv1, &inv2),
        Focus::F2 => (&inv2, &inv1),
    };
    let poly = own.polygon()?;
    let (p1, p2) = (pedal_area(&inv1)?, pedal_area(&inv2)?);
    let triangle = if n == 3 {
        let t = Triangle::from_slice(&own.vertices)?;
        Some(TriangleSample {
            x7: center_by_index(&t, 7)?,
            x9: center_by_index(&t, 9)?,
            circumbilliard: circumbilliard(&t)?,
        })
    } else {
        None
    };
    Ok(Sample {
        t1,
        perimeter: own.perimeter(),
        sum_inv_spokes: own.spokes.iter().map(|d| 1.0 / d).sum(),
        spoke_distance_sum: own.spoke_sum(),
        sum_cosines: poly.interior_cosines().iter().sum(),
        area_product: poly.signed_area().abs() * Polygon::new(other.vertices.clone())?.signed_area().abs(),
        pedal_gap: p1 - p2,
        pedal_scale: p1.abs().max(p2.abs()),
        triangle,
    })
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(Error::GridTooSmall {
            got: grid,
            min: MIN_GRID,
        });
    }
    Ok(())
}

fn sweep_samples(e: &EllipseSpec, cfg: InversiveConfig, n: usize, grid: usize) -> Result<Vec<Sample>> {
    check_grid(grid)?;
    e.require_non_circular()?;
    let ts = par::grid_params(grid);
    par::try_map(&ts, |&t1| measure(e, cfg, n, t1).map_err(|err| err.at(t1)))
}

fn trace_of(name: &str, s: &[Sample], f: impl Fn(&Sample) -> f64, cf: Option<f64>) -> InvariantTrace {
    InvariantTrace::new(name, s.iter().map(|x| (x.t1, f(x))).collect(), cf)
}

/// Sweeps `grid` equispaced `t1` and measures the family invariants. For
/// `n = 3` each trace carries its closed form.
pub fn sweep_family(
    e: &EllipseSpec,
    cfg: InversiveConfig,
    n: usize,
    grid: usize,
) -> Result<Vec<InvariantTrace>> {
    let samples = sweep_samples(e, cfg, n, grid)?;
    let refs = if n == 3 {
        Some(closed_form_refs(e, cfg.rho)?)
    } else {
        None
    };
    let r2 = cfg.rho * cfg.rho;
    let cf = |f: fn(&ClosedFormRefs) -> f64| refs.as_ref().map(f);
    let mut traces = vec![
        trace_of("perimeter", &samples, |s| s.perimeter, cf(|r| r.l_dagger)),
        trace_of(
            "sum_inv_spokes",
            &samples,
            |s| s.sum_inv_spokes,
            cf(|r| r.sum_inv_spokes),
        ),
        trace_of(
            "spoke_distance_sum",
            &samples,
            |s| s.spoke_distance_sum,
            refs.map(|r| r2 * r.sum_inv_spokes),
        ),
        trace_of("sum_cosines", &samples, |s| s.sum_cosines, cf(|r| r.sum_cosines)),
        trace_of(
            "area_product",
            &samples,
            |s| s.area_product,
            cf(|r| r.area_product),
        ),
    ];
    let pedal_scale = samples.iter().map(|s| s.pedal_scale).sum::<f64>() / samples.len() as f64;
    traces.push(InvariantTrace::with_scale(
        "pedal_area_gap",
        samples.iter().map(|s| (s.t1, s.pedal_gap)).collect(),
        (n == 3).then_some(0.0),
        Some(pedal_scale),
    ));

    if let Some(r) = refs {
        let tri: Vec<(f64, &TriangleSample)> = samples
            .iter()
            .map(|s| (s.t1, s.triangle.as_ref().expect("triangle sample")))
            .collect();
        let n = tri.len() as f64;
        let x7_mean = tri.iter().fold(Point2::ORIGIN, |acc, t| acc + t.1.x7) / n;
        let (b7, x7_ref) = match_mirror(x7_mean, r.x7_dagger);
        let mut x7 = InvariantTrace::with_scale(
            "x7_x",
            tri.iter().map(|t| (t.0, t.1.x7.x)).collect(),
            Some(x7_ref.x),
            Some(e.a),
        );
        x7.branch = Some(b7);
        traces.push(x7);
        traces.push(InvariantTrace::with_scale(
            "x7_y",
            tri.iter().map(|t| (t.0, t.1.x7.y)).collect(),
            Some(0.0),
            Some(e.a),
        ));

        let x9_mean = tri.iter().fold(Point2::ORIGIN, |acc, t| acc + t.1.x9) / n;
        let (b9, c9) = match_mirror(x9_mean, r.c9_dagger);
        let mut x9 = trace_of_tri("x9_center_distance", &tri, |t| t.x9.dist(c9), Some(r.r9_dagger));
        x9.branch = Some(b9);
        traces.push(x9);
        traces.push(trace_of_tri(
            "a_dagger",
            &tri,
            |t| t.circumbilliard.semi_major,
            Some(r.a_dagger),
        ));
        traces.push(trace_of_tri(
            "b_dagger",
            &tri,
            |t| t.circumbilliard.semi_minor,
            Some(r.b_dagger),
        ));
    }
    Ok(traces)
}

fn trace_of_tri(
    name: &str,
    tri: &[(f64, &TriangleSample)],
    f: impl Fn(&TriangleSample) -> f64,
    cf: Option<f64>,
) -> InvariantTrace {
    InvariantTrace::new(name, tri.iter().map(|t| (t.0, f(t.1))).collect(), cf)
}

/// Result of checking that the inversive triangles are 3-periodics of their
/// circumbilliard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotatingBilliardReport {
    pub grid: usize,
    /// Largest per-sample relative spread of the three Joachimsthal values.
    pub max_vertex_j_spread: f64,
    pub j_mean: f64,
    /// Relative spread of the per-sample mean J across the sweep.
    pub sweep_j_spread: f64,
    pub max_reflection_residual: f64,
    pub semi_major: InvariantTrace,
    pub semi_minor: InvariantTrace,
    /// Largest relative gap between the frame perimeter and the perimeter of
    /// the original inversive triangle.
    pub max_perimeter_gap: f64,
    pub center_fit: CircleFit,
    pub center_branch: Branch,
    pub c9_reference: Point2,
    pub r9_reference: f64,
}

impl RotatingBilliardReport {
    pub fn center_rel_error(&self) -> f64 {
        self.center_fit.center.dist(self.c9_reference) / self.c9_reference.norm()
    }

    pub fn radius_rel_error(&self) -> f64 {
        (self.center_fit.radius - self.r9_reference).abs() / self.r9_reference
    }
}

fn rel_spread(v: &[f64]) -> f64 {
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (hi - lo) / mean.abs()
}

struct FrameSample {
    t1: f64,
    j: [f64; 3],
    residual: f64,
    conic: EllipseParams,
    perimeter_gap: f64,
    x9: Point2,
}

fn frame_sample(e: &EllipseSpec, rho: f64, t1: f64) -> Result<FrameSample> {
    let o = orbit(e, 3, t1)?;
    let inv = focus_inversive(e, &o, InversiveConfig::new(Focus::F1, rho)?)?;
    let t = Triangle::from_slice(&inv.vertices)?;
    let conic = circumbilliard(&t)?;
    let frame = EllipseSpec::new(conic.semi_major, conic.semi_minor)?;
    let v: Vec<Point2> = inv.vertices.iter().map(|&p| conic.to_frame(p)).collect();
    let mut j = [0.0; 3];
    for i in 0..3 {
        let incoming = (v[i] - v[(i + 2) % 3]).normalized();
        j[i] = 0.5 * frame.gradient(v[i]).dot(incoming);
    }
    let params: Vec<f64> = v.iter().map(|&p| frame.param_of(p)).collect();
    let mut residual = 0.0f64;
    for i in 0..3 {
        let r = reflection_residual(&frame, params[(i + 2) % 3], params[i], params[(i + 1) % 3])?;
        residual = residual.max(r.abs());
    }
    let frame_perimeter: f64 = (0..3).map(|i| v[i].dist(v[(i + 1) % 3])).sum();
    let perimeter = inv.perimeter();
    Ok(FrameSample {
        t1,
        j,
        residual,
        conic,
        perimeter_gap: (frame_perimeter - perimeter).abs() / perimeter,
        x9: conic.center,
    })
}

/// Expresses each focus-inversive triangle in the frame of its
/// circumbilliard and checks that it is a billiard 3-periodic there.
pub fn verify_rotating_billiard(e: &EllipseSpec, rho: f64, grid: usize) -> Result<RotatingBilliardReport> {
    check_grid(grid)?;
    let refs = closed_form_refs(e, rho)?;
    let ts = par::grid_params(grid);
    let samples = par::try_map(&ts, |&t1| frame_sample(e, rho, t1).map_err(|err| err.at(t1)))?;
    let means: Vec<f64> = samples.iter().map(|s| s.j.iter().sum::<f64>() / 3.0).collect();
    let centers: Vec<Point2> = samples.iter().map(|s| s.x9).collect();
    let center_fit = fit_circle(&centers)?;
    let (center_branch, c9) = match_mirror(center_fit.center, refs.c9_dagger);
    Ok(RotatingBilliardReport {
        grid,
        max_vertex_j_spread: samples.iter().map(|s| rel_spread(&s.j)).fold(0.0, f64::max),
        j_mean: means.iter().sum::<f64>() / means.len() as f64,
        sweep_j_spread: rel_spread(&means),
        max_reflection_residual: samples.iter().map(|s| s.residual).fold(0.0, f64::max),
        semi_major: InvariantTrace::new(
            "a_dagger",
            samples.iter().map(|s| (s.t1, s.conic.semi_major)).collect(),
            Some(refs.a_dagger),
        ),
        semi_minor: InvariantTrace::new(
            "b_dagger",
            samples.iter().map(|s| (s.t1, s.conic.semi_minor)).collect(),
            Some(refs.b_dagger),
        ),
        max_perimeter_gap: samples.iter().map(|s| s.perimeter_gap).fold(0.0, f64::max),
        center_fit,
        center_branch,
        c9_reference: c9,
        r9_reference: refs.r9_dagger,
    })
}
