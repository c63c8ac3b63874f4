//! Primitive types and exact-formula geometry: the billiard ellipse, circle
//! inversion, the inverse curves of the ellipse, and polygon metrics.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point2 {
        self / self.norm()
    }

    /// Counterclockwise rotation by a quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Reflection across the y axis, `(x, y) -> (-x, y)`.
    #[inline]
    pub fn mirrored(self) -> Point2 {
        Point2::new(-self.x, self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    #[inline]
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn div(self, s: f64) -> Point2 {
        Point2::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Which focus of the billiard: `F1 = (-c, 0)`, `F2 = (+c, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Focus {
    F1,
    F2,
}

impl Focus {
    pub fn index(self) -> usize {
        match self {
            Focus::F1 => 1,
            Focus::F2 => 2,
        }
    }

    pub fn other(self) -> Focus {
        match self {
            Focus::F1 => Focus::F2,
            Focus::F2 => Focus::F1,
        }
    }
}

/// The billiard table `(x/a)² + (y/b)² = 1` with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub a: f64,
    pub b: f64,
    /// Focal half-distance `√(a² − b²)`.
    pub c: f64,
    /// `√(a⁴ − a²b² + b⁴)`.
    pub delta: f64,
    /// Eccentricity `c / a`.
    pub eps: f64,
}

impl EllipseSpec {
    /// Builds the table; the caller orients it so that `a >= b`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
            return Err(Error::InvalidSemiaxes { a, b });
        }
        let (a2, b2) = (a * a, b * b);
        let c = ((a - b) * (a + b)).sqrt();
        let delta = (a2 * a2 - a2 * b2 + b2 * b2).sqrt();
        Ok(EllipseSpec {
            a,
            b,
            c,
            delta,
            eps: c / a,
        })
    }

    pub fn is_circle(&self) -> bool {
        self.c == 0.0
    }

    /// Fails for circles, where the focal constructions degenerate.
    pub fn require_non_circular(&self) -> Result<()> {
        if self.a > self.b && self.c > 0.0 {
            Ok(())
        } else {
            Err(Error::CircularBilliard { a: self.a, b: self.b })
        }
    }

    #[inline]
    pub fn point(&self, t: f64) -> Point2 {
        let (s, c) = t.sin_cos();
        Point2::new(self.a * c, self.b * s)
    }

    /// Left-hand side of the implicit equation, `(x/a)² + (y/b)²`.
    #[inline]
    pub fn implicit(&self, p: Point2) -> f64 {
        let (u, v) = (p.x / self.a, p.y / self.b);
        u * u + v * v
    }

    /// Gradient of the implicit function, `2(x/a², y/b²)`.
    #[inline]
    pub fn gradient(&self, p: Point2) -> Point2 {
        Point2::new(2.0 * p.x / (self.a * self.a), 2.0 * p.y / (self.b * self.b))
    }

    /// Unit outward normal at a boundary point.
    #[inline]
    pub fn unit_normal(&self, p: Point2) -> Point2 {
        self.gradient(p).normalized()
    }

    /// Eccentric-anomaly parameter of a boundary point.
    #[inline]
    pub fn param_of(&self, p: Point2) -> f64 {
        (p.y / self.b).atan2(p.x / self.a)
    }

    pub fn focus(&self, which: Focus) -> Point2 {
        match which {
            Focus::F1 => Point2::new(-self.c, 0.0),
            Focus::F2 => Point2::new(self.c, 0.0),
        }
    }
}

/// Shorthand for [`EllipseSpec::new`].
pub fn make_ellipse(a: f64, b: f64) -> Result<EllipseSpec> {
    EllipseSpec::new(a, b)
}

pub fn ellipse_point(e: &EllipseSpec, t: f64) -> Point2 {
    e.point(t)
}

pub fn ellipse_gradient(e: &EllipseSpec, p: Point2) -> Point2 {
    e.gradient(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub center: Point2,
    pub radius: f64,
}

impl CircleSpec {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(CircleSpec { center, radius })
    }

    /// Inversion of `p`: the point on the ray from the center through `p`
    /// at distance `ρ² / |p − center|`.
    pub fn invert(&self, p: Point2) -> Result<Point2> {
        let d = p - self.center;
        let d2 = d.norm_sq();
        if d2 == 0.0 {
            return Err(Error::SingularInversion);
        }
        Ok(self.center + d * (self.radius * self.radius / d2))
    }
}

pub fn invert_point(p: Point2, k: &CircleSpec) -> Result<Point2> {
    k.invert(p)
}

/// Point of the inverse of the billiard about an arbitrary circle.
pub fn inverse_curve_point(e: &EllipseSpec, k: &CircleSpec, t: f64) -> Result<Point2> {
    k.invert(e.point(t))
}

/// Pascal's limaçon: the billiard inverted about the circle of radius `rho`
/// centered on `F1 = (−c, 0)`. For circles the focus is the center and the
/// curve is again a circle.
pub fn limacon_point(e: &EllipseSpec, rho: f64, t: f64) -> Result<Point2> {
    limacon_point_about(e, Focus::F1, rho, t)
}

pub fn limacon_point_about(e: &EllipseSpec, focus: Focus, rho: f64, t: f64) -> Result<Point2> {
    let k = CircleSpec::new(e.focus(focus), rho)?;
    inverse_curve_point(e, &k, t)
}

/// Booth's curve: the billiard inverted about a concentric circle.
pub fn booth_point(e: &EllipseSpec, rho: f64, t: f64) -> Result<Point2> {
    let k = CircleSpec::new(Point2::ORIGIN, rho)?;
    inverse_curve_point(e, &k, t)
}

/// A closed polygon with at least three vertices and no repeated
/// consecutive vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = vertices
            .iter()
            .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) <= 1e-12 * scale {
                return Err(Error::CoincidentVertices(i));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<Point2> {
        self.vertices
    }

    /// Side `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area; positive for counterclockwise vertex order.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(p, q)| p.cross(q)).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(p, q)| p.dist(q)).sum()
    }

    /// Cosine of the angle at each vertex between the two sides meeting
    /// there. No convexity is assumed.
    pub fn interior_cosines(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let p = self.vertices[i];
                let u = self.vertices[(i + n - 1) % n] - p;
                let v = self.vertices[(i + 1) % n] - p;
                (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0)
            })
            .collect()
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        self.vertices.iter().fold(Point2::ORIGIN, |s, &p| s + p) / n
    }
}

pub fn signed_area(q: &Polygon) -> f64 {
    q.signed_area()
}

pub fn perimeter(q: &Polygon) -> f64 {
    q.perimeter()
}

pub fn interior_cosines(q: &Polygon) -> Vec<f64> {
    q.interior_cosines()
}
