//! Least-squares circle and conic fits.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub center: Point2,
    pub radius: f64,
    /// Root mean square of `|dist − radius|`.
    pub rms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

/// Center, semiaxes (major first) and major-axis angle of an ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseParams {
    pub center: Point2,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

impl EllipseParams {
    pub fn aspect(&self) -> f64 {
        self.semi_minor / self.semi_major
    }

    /// Position vector `p` in the frame centered on the ellipse and aligned
    /// with its axes.
    pub fn to_frame(&self, p: Point2) -> Point2 {
        (p - self.center).rotated(-self.angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicFit {
    /// `(A, B, C, D, E, F)` of `Ax² + Bxy + Cy² + Dx + Ey + F = 0`, unit norm.
    pub coeffs: [f64; 6],
    pub kind: ConicKind,
    pub ellipse: Option<EllipseParams>,
    /// Root mean square Sampson distance.
    pub rms: f64,
}

fn mean_and_scale(points: &[Point2]) -> (Point2, f64) {
    let n = points.len() as f64;
    let m = points.iter().fold(Point2::ORIGIN, |s, &p| s + p) / n;
    let s = (points.iter().map(|p| (*p - m).norm_sq()).sum::<f64>() / n).sqrt();
    (m, s)
}

fn require_finite(points: &[Point2]) -> Result<()> {
    if points.iter().all(|p| p.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn circle_rms(points: &[Point2], center: Point2, radius: f64) -> f64 {
    let ss: f64 = points.iter().map(|p| (p.dist(center) - radius).powi(2)).sum();
    (ss / points.len() as f64).sqrt()
}

/// Algebraic circle fit refined by one geometric Gauss–Newton step.
pub fn fit_circle(points: &[Point2]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    require_finite(points)?;
    let (m, s) = mean_and_scale(points);
    if s == 0.0 {
        return Err(Error::CollinearPoints);
    }
    let q: Vec<Point2> = points.iter().map(|p| (*p - m) / s).collect();
    let n = q.len();
    let design = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => q[i].x,
        1 => q[i].y,
        _ => 1.0,
    });
    let rhs = DVector::from_fn(n, |i, _| -q[i].norm_sq());
    let svd = design.svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= 1e-10 * smax {
        return Err(Error::CollinearPoints);
    }
    let sol = svd.solve(&rhs, 0.0).map_err(|_| Error::CollinearPoints)?;
    let mut c = Point2::new(-0.5 * sol[0], -0.5 * sol[1]);
    let mut r = (c.norm_sq() - sol[2]).max(0.0).sqrt();

    // one Gauss–Newton step on the geometric residuals dist − r
    let mut jac = DMatrix::<f64>::zeros(n, 3);
    let mut res = DVector::<f64>::zeros(n);
    for (i, p) in q.iter().enumerate() {
        let d = *p - c;
        let dist = d.norm();
        if dist == 0.0 {
            continue;
        }
        jac[(i, 0)] = -d.x / dist;
        jac[(i, 1)] = -d.y / dist;
        jac[(i, 2)] = -1.0;
        res[i] = dist - r;
    }
    if let Ok(step) = jac.svd(true, true).solve(&res, 1e-15) {
        let c2 = Point2::new(c.x - step[0], c.y - step[1]);
        let r2 = r - step[2];
        if r2.is_finite() && r2 > 0.0 && circle_rms(&q, c2, r2) <= circle_rms(&q, c, r) {
            c = c2;
            r = r2;
        }
    }
    let center = m + c * s;
    let radius = r * s;
    Ok(CircleFit {
        center,
        radius,
        rms: circle_rms(points, center, radius),
    })
}

fn eval(k: &[f64; 6], p: Point2) -> f64 {
    k[0] * p.x * p.x + k[1] * p.x * p.y + k[2] * p.y * p.y + k[3] * p.x + k[4] * p.y + k[5]
}

fn sampson(k: &[f64; 6], p: Point2) -> f64 {
    let gx = 2.0 * k[0] * p.x + k[1] * p.y + k[3];
    let gy = k[1] * p.x + 2.0 * k[2] * p.y + k[4];
    let g = (gx * gx + gy * gy).sqrt();
    eval(k, p) / g
}

/// Classifies `Ax² + Bxy + Cy² + Dx + Ey + F = 0` and extracts ellipse
/// parameters for real ellipses.
pub fn conic_kind(k: &[f64; 6]) -> (ConicKind, Option<EllipseParams>) {
    let [a, b, c, d, e, f] = *k;
    let quad = a * a + b * b + c * c;
    let norm = (quad + d * d + e * e + f * f).sqrt();
    let full = Matrix3::new(a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f);
    if full.determinant().abs() <= 1e-14 * norm.powi(3) {
        return (ConicKind::Degenerate, None);
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= 1e-12 * quad {
        return (ConicKind::Parabola, None);
    }
    if disc > 0.0 {
        return (ConicKind::Hyperbola, None);
    }
    let m = Matrix2::new(a, b / 2.0, b / 2.0, c);
    let x0 = match Matrix2::new(2.0 * a, b, b, 2.0 * c)
        .lu()
        .solve(&nalgebra::Vector2::new(-d, -e))
    {
        Some(v) => Point2::new(v[0], v[1]),
        None => return (ConicKind::Degenerate, None),
    };
    let f0 = f + 0.5 * (d * x0.x + e * x0.y);
    let eig = m.symmetric_eigen();
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let (s0, s1) = (-f0 / l0, -f0 / l1);
    if !(s0 > 0.0 && s1 > 0.0) {
        // imaginary ellipse
        return (ConicKind::Degenerate, None);
    }
    let (major, minor, v) = if s0 >= s1 {
        (s0.sqrt(), s1.sqrt(), eig.eigenvectors.column(0))
    } else {
        (s1.sqrt(), s0.sqrt(), eig.eigenvectors.column(1))
    };
    let mut angle = v[1].atan2(v[0]);
    if angle <= -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    } else if angle > std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    }
    (
        ConicKind::Ellipse,
        Some(EllipseParams {
            center: x0,
            semi_major: major,
            semi_minor: minor,
            angle,
        }),
    )
}

/// Least-squares conic: smallest right singular vector of the design matrix
/// in normalized coordinates.
pub fn fit_conic(points: &[Point2]) -> Result<ConicFit> {
    if points.len() < 6 {
        return Err(Error::TooFewPoints {
            needed: 6,
            got: points.len(),
        });
    }
    require_finite(points)?;
    let (m, s) = mean_and_scale(points);
    if s == 0.0 {
        return Err(Error::RankDeficient);
    }
    let q: Vec<Point2> = points.iter().map(|p| (*p - m) / s).collect();
    let design = DMatrix::from_fn(q.len(), 6, |i, j| {
        let p = q[i];
        match j {
            0 => p.x * p.x,
            1 => p.x * p.y,
            2 => p.y * p.y,
            3 => p.x,
            4 => p.y,
            _ => 1.0,
        }
    });
    let svd = design.svd(false, true);
    let vt = svd.v_t.as_ref().ok_or(Error::RankDeficient)?;
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    if sv[order[1]] <= 1e-10 * sv[order[5]] {
        return Err(Error::RankDeficient);
    }
    let v = vt.row(order[0]);
    let (a, b, c, d, e, f) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let (mx, my) = (m.x, m.y);
    let mut k = [
        a,
        b,
        c,
        -2.0 * a * mx - b * my + d * s,
        -b * mx - 2.0 * c * my + e * s,
        a * mx * mx + b * mx * my + c * my * my - d * s * mx - e * s * my + f * s * s,
    ];
    let norm = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sign = if k[0] + k[2] < 0.0 { -1.0 } else { 1.0 };
    for x in k.iter_mut() {
        *x *= sign / norm;
    }
    let rms = (points.iter().map(|p| sampson(&k, *p).powi(2)).sum::<f64>() / points.len() as f64).sqrt();
    let (kind, ellipse) = conic_kind(&k);
    Ok(ConicFit {
        coeffs: k,
        kind,
        ellipse,
        rms,
    })
}

/// The conic `A x² + B xy + C y² = 1` centered at `center` through three
/// points.
pub fn centered_conic_through(center: Point2, p: [Point2; 3]) -> Result<EllipseParams> {
    let rows: Vec<Point2> = p.iter().map(|&q| q - center).collect();
    let m = Matrix3::from_fn(|i, j| {
        let r = rows[i];
        match j {
            0 => r.x * r.x,
            1 => r.x * r.y,
            _ => r.y * r.y,
        }
    });
    let sol = m
        .lu()
        .solve(&Vector3::new(1.0, 1.0, 1.0))
        .ok_or(Error::NotAnEllipse("singular system"))?;
    let (a, b, c) = (sol[0], sol[1], sol[2]);
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::NotAnEllipse("singular system"));
    }
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        return Err(Error::NotAnEllipse(if disc == 0.0 {
            "parabola"
        } else {
            "hyperbola"
        }));
    }
    if a + c <= 0.0 {
        return Err(Error::NotAnEllipse("imaginary ellipse"));
    }
    match conic_kind(&[a, b, c, 0.0, 0.0, -1.0]) {
        (ConicKind::Ellipse, Some(e)) => Ok(EllipseParams { center, ..e }),
        _ => Err(Error::NotAnEllipse("degenerate")),
    }
}
