//! Focus-inversive, center-inversive and pedal polygons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircleSpec, EllipseSpec, Focus, Point2, Polygon};
use crate::orbit::Orbit;

/// Inversion circle of radius `rho` centered on a focus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversiveConfig {
    pub focus: Focus,
    pub rho: f64,
}

impl InversiveConfig {
    pub fn new(focus: Focus, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidRadius(rho));
        }
        Ok(InversiveConfig { focus, rho })
    }

    pub fn circle(&self, e: &EllipseSpec) -> CircleSpec {
        CircleSpec {
            center: e.focus(self.focus),
            radius: self.rho,
        }
    }
}

impl Default for InversiveConfig {
    fn default() -> Self {
        InversiveConfig {
            focus: Focus::F1,
            rho: 1.0,
        }
    }
}

/// Orbit vertices inverted about a focus, with the spokes `d_i = |P_i − f|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversivePolygon {
    pub config: InversiveConfig,
    pub center: Point2,
    pub vertices: Vec<Point2>,
    pub spokes: Vec<f64>,
}

impl InversivePolygon {
    pub fn polygon(&self) -> Result<Polygon> {
        Polygon::new(self.vertices.clone())
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .sum()
    }

    /// `Σ |P†_i − f| = ρ² Σ 1/d_i`.
    pub fn spoke_sum(&self) -> f64 {
        self.vertices.iter().map(|p| p.dist(self.center)).sum()
    }
}

pub fn focus_inversive(e: &EllipseSpec, o: &Orbit, cfg: InversiveConfig) -> Result<InversivePolygon> {
    e.require_non_circular()?;
    let k = cfg.circle(e);
    let vertices = o
        .vertices
        .iter()
        .map(|&p| k.invert(p))
        .collect::<Result<Vec<_>>>()?;
    let spokes = o.vertices.iter().map(|p| p.dist(k.center)).collect();
    Ok(InversivePolygon {
        config: cfg,
        center: k.center,
        vertices,
        spokes,
    })
}

/// Orbit vertices inverted about the circle of radius `rho` centered on the
/// billiard center.
pub fn center_inversive(o: &Orbit, rho: f64) -> Result<Polygon> {
    let k = CircleSpec::new(Point2::ORIGIN, rho)?;
    let vertices = o
        .vertices
        .iter()
        .map(|&p| k.invert(p))
        .collect::<Result<Vec<_>>>()?;
    Polygon::new(vertices)
}

/// Foot of the perpendicular from `p` onto the line through `u` and `v`.
pub fn foot(p: Point2, u: Point2, v: Point2) -> Result<Point2> {
    let d = v - u;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return Err(Error::ZeroLengthSide(0));
    }
    Ok(u + d * ((p - u).dot(d) / len2))
}

/// Feet of the perpendiculars from `pivot` onto the side lines; side `i`
/// joins vertex `i` to vertex `i + 1`. Feet may coincide, so the result is
/// a vertex list rather than a validated [`Polygon`].
pub fn pedal_polygon(q: &[Point2], pivot: Point2) -> Result<Vec<Point2>> {
    let n = q.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    (0..n)
        .map(|i| foot(pivot, q[i], q[(i + 1) % n]).map_err(|_| Error::ZeroLengthSide(i)))
        .collect()
}

/// Shoelace area of a vertex list, sign by orientation.
pub fn signed_area_of(v: &[Point2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

/// Spokes `d_i = |P_i − f|` and `Σ 1/d_i`.
pub fn spoke_stats(e: &EllipseSpec, o: &Orbit, focus: Focus) -> (Vec<f64>, f64) {
    let f = e.focus(focus);
    let d: Vec<f64> = o.vertices.iter().map(|p| p.dist(f)).collect();
    let s = d.iter().map(|x| 1.0 / x).sum();
    (d, s)
}
