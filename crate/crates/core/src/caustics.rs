//! Envelopes of moving side-line families and tangency to confocal
//! caustics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EllipseSpec, Point2};
use crate::inversive::{center_inversive, focus_inversive, InversiveConfig};
use crate::loci::Family;
use crate::orbit::{orbit, CausticSpec};
use crate::par;

/// Directions closer to parallel than this (unit-vector cross product)
/// produce a gap instead of an envelope point.
pub const PARALLEL_EPS: f64 = 1e-10;

/// The line through `point` with direction `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: Point2,
    pub dir: Point2,
}

impl Line {
    pub fn through(p: Point2, q: Point2) -> Result<Line> {
        let d = q - p;
        if d.norm_sq() == 0.0 {
            return Err(Error::ZeroLengthSide(0));
        }
        Ok(Line {
            point: p,
            dir: d.normalized(),
        })
    }

    /// Coefficients `(u, v)` of `ux + vy = 1`.
    pub fn normalized_coeffs(&self) -> Result<(f64, f64)> {
        let n = self.dir.perp();
        let k = n.dot(self.point);
        let scale = self.point.norm().max(1.0);
        if k.abs() <= 1e-14 * scale * n.norm() {
            return Err(Error::LineThroughCenter);
        }
        Ok((n.x / k, n.y / k))
    }

    /// Intersection with `other`, `None` when nearly parallel.
    pub fn intersect(&self, other: &Line) -> Option<Point2> {
        let (d1, d2) = (self.dir.normalized(), other.dir.normalized());
        let cross = d1.cross(d2);
        if cross.abs() < PARALLEL_EPS {
            return None;
        }
        let s = (other.point - self.point).cross(d2) / cross;
        Some(self.point + d1 * s)
    }
}

/// For each parameter `t1`, the side lines of the family polygon; side `k`
/// joins vertex `k` to vertex `k + 1`. The grid is periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFamily {
    pub params: Vec<f64>,
    pub lines: Vec<Vec<Line>>,
}

impl LineFamily {
    pub fn sides(&self) -> usize {
        self.lines.first().map_or(0, |l| l.len())
    }

    fn side(&self, k: usize) -> Vec<Line> {
        self.lines.iter().map(|l| l[k]).collect()
    }
}

/// `a″²u² + b″²v² − 1` for the line `ux + vy = 1`; zero iff tangent.
pub fn tangency_residual(line: (f64, f64), c: &CausticSpec) -> f64 {
    let (u, v) = line;
    c.a2 * c.a2 * u * u + c.b2 * c.b2 * v * v - 1.0
}

/// The confocal ellipse of `e` tangent to `line`.
pub fn confocal_caustic_tangent_to(e: &EllipseSpec, line: &Line) -> Result<CausticSpec> {
    let (u, v) = line.normalized_coeffs()?;
    let c2 = e.c * e.c;
    let a2sq = (1.0 + c2 * v * v) / (u * u + v * v);
    Ok(CausticSpec {
        a2: a2sq.sqrt(),
        b2: (a2sq - c2).max(0.0).sqrt(),
    })
}

fn polygon_lines(v: &[Point2]) -> Result<Vec<Line>> {
    let n = v.len();
    (0..n)
        .map(|i| Line::through(v[i], v[(i + 1) % n]).map_err(|_| Error::ZeroLengthSide(i)))
        .collect()
}

/// Side lines of the N-periodic family, or of its focus- or center-inversive
/// image, over `grid` equispaced `t1`.
pub fn side_family(
    e: &EllipseSpec,
    cfg: InversiveConfig,
    family: Family,
    n: usize,
    grid: usize,
) -> Result<LineFamily> {
    let params = par::grid_params(grid);
    let lines = par::try_map(&params, |&t1| {
        let run = || -> Result<Vec<Line>> {
            let o = orbit(e, n, t1)?;
            match family {
                Family::Billiard => polygon_lines(&o.vertices),
                Family::FocusInversive => polygon_lines(&focus_inversive(e, &o, cfg)?.vertices),
                Family::CenterInversive => polygon_lines(center_inversive(&o, cfg.rho)?.vertices()),
            }
        };
        run().map_err(|err| err.at(t1))
    })?;
    Ok(LineFamily { params, lines })
}

fn wrap(i: isize, m: usize) -> usize {
    i.rem_euclid(m as isize) as usize
}

/// Raw secant envelope of one periodic line sequence: the intersection of
/// lines `i` and `i + 1`, an `O(h²)` approximation of the characteristic
/// point at the midpoint parameter.
pub fn secant_envelope(lines: &[Line]) -> Vec<Option<Point2>> {
    let m = lines.len();
    (0..m).map(|i| lines[i].intersect(&lines[(i + 1) % m])).collect()
}

/// Envelope point at each grid parameter from the centered intersections
/// `L[i−1] ∩ L[i+1]` and `L[i−2] ∩ L[i+2]`, combined by Richardson
/// extrapolation so the error is `O(h⁴)`. Near-parallel pairs give `None`.
pub fn envelope_of(lines: &[Line]) -> Vec<Option<Point2>> {
    let m = lines.len();
    if m < 5 {
        return vec![None; m];
    }
    let at = |i: isize| &lines[wrap(i, m)];
    par::map(&(0..m as isize).collect::<Vec<_>>(), |&i| {
        let near = at(i - 1).intersect(at(i + 1))?;
        let far = at(i - 2).intersect(at(i + 2))?;
        Some((near * 4.0 - far) / 3.0)
    })
}

/// Envelope polyline of each side index of the family.
pub fn envelope_sample(f: &LineFamily) -> Vec<Vec<Option<Point2>>> {
    (0..f.sides()).map(|k| envelope_of(&f.side(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_conic;
    use crate::geometry::make_ellipse;
    use crate::orbit::{confocal_caustic_n3, joachimsthal, solve_nperiodic, stachel_j, three_periodic};
    use std::f64::consts::TAU;

    fn tangent_family(m: usize) -> Vec<Line> {
        (0..m)
            .map(|k| {
                let t = TAU * k as f64 / m as f64;
                let p = Point2::new(t.cos(), t.sin());
                Line {
                    point: p,
                    dir: p.perp(),
                }
            })
            .collect()
    }

    #[test]
    fn circle_envelope() {
        let env = envelope_of(&tangent_family(512));
        for p in env.iter().map(|p| p.unwrap()) {
            assert!((p.norm() - 1.0).abs() < 1e-6);
        }
        let raw = secant_envelope(&tangent_family(512));
        assert!(raw.iter().all(|p| (p.unwrap().norm() - 1.0).abs() < 1e-4));
    }

    #[test]
    fn refinement_is_stable() {
        let err = |m: usize| {
            envelope_of(&tangent_family(m))
                .iter()
                .map(|p| (p.unwrap().norm() - 1.0).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (err(64), err(128), err(256));
        assert!(e2 < e1 && e3 < e2);
    }

    #[test]
    fn parallel_lines_are_gaps() {
        let l = Line {
            point: Point2::new(0.0, 1.0),
            dir: Point2::new(1.0, 0.0),
        };
        let m = Line {
            point: Point2::new(0.0, 2.0),
            dir: Point2::new(-1.0, 0.0),
        };
        assert_eq!(l.intersect(&m), None);
    }

    #[test]
    fn residual_examples() {
        let unit = CausticSpec { a2: 1.0, b2: 1.0 };
        let x1 = Line {
            point: Point2::new(1.0, 0.0),
            dir: Point2::new(0.0, 1.0),
        };
        assert!(tangency_residual(x1.normalized_coeffs().unwrap(), &unit).abs() < 1e-15);
        let x2 = Line {
            point: Point2::new(2.0, 5.0),
            dir: Point2::new(0.0, -3.0),
        };
        assert!((tangency_residual(x2.normalized_coeffs().unwrap(), &unit) + 0.75).abs() < 1e-15);
        let diag = Line {
            point: Point2::new(1.0, 1.0),
            dir: Point2::new(1.0, 1.0),
        };
        assert_eq!(diag.normalized_coeffs(), Err(Error::LineThroughCenter));
    }

    #[test]
    fn three_periodic_sides_touch_the_caustic() {
        let e = make_ellipse(2.0, 1.0).unwrap();
        let c = confocal_caustic_n3(&e).unwrap();
        for k in 0..50 {
            let o = three_periodic(&e, 0.13 * k as f64).unwrap();
            for l in polygon_lines(&o.vertices).unwrap() {
                if let Ok(uv) = l.normalized_coeffs() {
                    assert!(tangency_residual(uv, &c).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn billiard_envelope_is_the_caustic() {
        let e = make_ellipse(1.5, 1.0).unwrap();
        let f = side_family(&e, InversiveConfig::default(), Family::Billiard, 3, 512).unwrap();
        let c = confocal_caustic_n3(&e).unwrap();
        for p in envelope_sample(&f)[0].iter().map(|p| p.unwrap()) {
            let g = Point2::new(p.x / (c.a2 * c.a2), p.y / (c.b2 * c.b2)) * 2.0;
            assert!((c.implicit(p) - 1.0).abs() / g.norm() < 1e-6);
        }
    }

    #[test]
    fn stachel_from_envelope() {
        let e = make_ellipse(1.5, 1.0).unwrap();
        for n in [3, 4, 5] {
            let f = side_family(&e, InversiveConfig::default(), Family::Billiard, n, 512).unwrap();
            let pts: Vec<Point2> = envelope_sample(&f)[0].iter().flatten().copied().collect();
            let ell = fit_conic(&pts).unwrap().ellipse.unwrap();
            let j = joachimsthal(&e, &solve_nperiodic(&e, n, 0.4).unwrap()).unwrap();
            assert!((stachel_j(&e, ell.semi_major).unwrap() - j).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn caustic_from_side() {
        let e = make_ellipse(1.5, 1.0).unwrap();
        let o = solve_nperiodic(&e, 5, 0.3).unwrap();
        let lines = polygon_lines(&o.vertices).unwrap();
        let c = confocal_caustic_tangent_to(&e, &lines[0]).unwrap();
        for l in &lines[1..] {
            assert!(tangency_residual(l.normalized_coeffs().unwrap(), &c).abs() < 1e-9);
        }
        let j = joachimsthal(&e, &o).unwrap();
        assert!((stachel_j(&e, c.a2).unwrap() - j).abs() < 1e-9);
    }

    #[test]
    fn focus_inversive_envelope_is_not_a_conic() {
        let e = make_ellipse(1.25, 1.0).unwrap();
        let f = side_family(&e, InversiveConfig::default(), Family::FocusInversive, 3, 512).unwrap();
        let pts: Vec<Point2> = envelope_sample(&f)[0].iter().flatten().copied().collect();
        let n = pts.len() as f64;
        let m = pts.iter().fold(Point2::ORIGIN, |s, &p| s + p) / n;
        let scale = (pts.iter().map(|p| (*p - m).norm_sq()).sum::<f64>() / n).sqrt();
        let fit = fit_conic(&pts).unwrap();
        assert!(fit.rms / scale > 1e-3, "{}", fit.rms / scale);
    }
}
