//! N-periodic billiard orbits (winding number one): the closed-form
//! 3-periodic, a general-N solver, Joachimsthal's constant and the confocal
//! caustic.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EllipseSpec, Point2, Polygon};

/// Spread of per-vertex Joachimsthal values above which an input is not
/// accepted as a billiard orbit.
pub const ORBIT_J_SPREAD_LIMIT: f64 = 1e-8;

/// An N-periodic of the billiard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub n: usize,
    /// Boundary parameters, strictly increasing, within `[t1, t1 + 2π)`.
    pub params: Vec<f64>,
    pub vertices: Vec<Point2>,
    /// `½ ∇f(P_i) · v̂_i` with `v̂_i` the unit incoming direction.
    pub j_values: Vec<f64>,
    /// Largest |reflection residual| over all vertices.
    pub max_residual: f64,
}

impl Orbit {
    fn from_params(e: &EllipseSpec, params: Vec<f64>) -> Result<Orbit> {
        let n = params.len();
        let vertices: Vec<Point2> = params.iter().map(|&t| e.point(t)).collect();
        let j_values = joachimsthal_values(e, &vertices);
        let mut max_residual = 0.0f64;
        for i in 0..n {
            let r = reflection_residual(e, params[(i + n - 1) % n], params[i], params[(i + 1) % n])?;
            max_residual = max_residual.max(r.abs());
        }
        Ok(Orbit {
            n,
            params,
            vertices,
            j_values,
            max_residual,
        })
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::new(self.vertices.clone()).expect("orbit vertices form a valid polygon")
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn j_mean(&self) -> f64 {
        self.j_values.iter().sum::<f64>() / self.n as f64
    }

    /// `(max − min) / mean` of the per-vertex Joachimsthal values.
    pub fn j_spread(&self) -> f64 {
        let (lo, hi) = self
            .j_values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &j| {
                (lo.min(j), hi.max(j))
            });
        (hi - lo) / self.j_mean().abs()
    }
}

fn joachimsthal_values(e: &EllipseSpec, v: &[Point2]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let incoming = (v[i] - v[(i + n - 1) % n]).normalized();
            0.5 * e.gradient(v[i]).dot(incoming)
        })
        .collect()
}

/// Confocal caustic `x²/a″² + y²/b″² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausticSpec {
    pub a2: f64,
    pub b2: f64,
}

impl CausticSpec {
    /// Confocal caustic with Joachimsthal constant `j`, obtained by
    /// inverting `J = √(a² − a″²)/(ab)`.
    pub fn from_joachimsthal(e: &EllipseSpec, j: f64) -> CausticSpec {
        let a2sq = e.a * e.a * (1.0 - j * j * e.b * e.b);
        let b2sq = a2sq - e.c * e.c;
        CausticSpec {
            a2: a2sq.sqrt(),
            b2: b2sq.max(0.0).sqrt(),
        }
    }

    pub fn implicit(&self, p: Point2) -> f64 {
        (p.x / self.a2).powi(2) + (p.y / self.b2).powi(2)
    }
}

/// Signed reflection defect at `ellipse_point(t)`: the sum of the
/// tangential components of the unit chords towards the previous and the
/// next vertex. Zero exactly when both chords make equal angles with the
/// tangent.
pub fn reflection_residual(e: &EllipseSpec, t_prev: f64, t: f64, t_next: f64) -> Result<f64> {
    let same = |x: f64, y: f64| (x - y).rem_euclid(TAU).min((y - x).rem_euclid(TAU)) < 1e-15;
    if same(t_prev, t) || same(t, t_next) {
        return Err(Error::CoincidentParameters);
    }
    let p = e.point(t);
    let tangent = e.unit_normal(p).perp();
    let u = e.point(t_prev) - p;
    let v = e.point(t_next) - p;
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::CoincidentParameters);
    }
    Ok(u.dot(tangent) / nu + v.dot(tangent) / nv)
}

/// Closed-form 3-periodic with first vertex `ellipse_point(t1)`, vertices
/// in counterclockwise order.
pub fn three_periodic(e: &EllipseSpec, t1: f64) -> Result<Orbit> {
    e.require_non_circular()?;
    if !t1.is_finite() {
        return Err(Error::NonFinite);
    }
    let (a, b) = (e.a, e.b);
    let (a2, b2) = (a * a, b * b);
    let (a4, b4) = (a2 * a2, b2 * b2);
    let c2 = e.c * e.c;
    let d1 = a2 * b2 / c2;
    let delta1 = (2.0 * e.delta - a2 - b2).sqrt();
    let p1 = e.point(t1);
    let (x1, y1) = (p1.x, p1.y);
    let d2 = b4 * x1 * x1 + a4 * y1 * y1;
    // cos²α and sinα·cosα, α the angle of the sides at P1 with the normal
    let k1 = d1 * d1 * delta1 * delta1 / d2;
    let k2 = (k1 * (1.0 - k1)).max(0.0).sqrt();

    let vertex = |k2: f64| -> Point2 {
        let x = -b4 * ((a2 + b2) * k1 - a2) * x1.powi(3) - 2.0 * a4 * b2 * k2 * x1 * x1 * y1
            + a4 * ((a2 - 3.0 * b2) * k1 + b2) * x1 * y1 * y1
            - 2.0 * a4 * a2 * k2 * y1.powi(3);
        let y = 2.0 * b4 * b2 * k2 * x1.powi(3)
            + b4 * ((b2 - 3.0 * a2) * k1 + a2) * x1 * x1 * y1
            + 2.0 * a2 * b4 * k2 * x1 * y1 * y1
            - a4 * ((a2 + b2) * k1 - b2) * y1.powi(3);
        let q =
            b4 * (a2 - c2 * k1) * x1 * x1 + a4 * (b2 + c2 * k1) * y1 * y1 - 2.0 * a2 * b2 * c2 * k2 * x1 * y1;
        Point2::new(x / q, y / q)
    };
    let (mut p2, mut p3) = (vertex(k2), vertex(-k2));
    if (p2 - p1).cross(p3 - p1) < 0.0 {
        std::mem::swap(&mut p2, &mut p3);
    }
    let t2 = t1 + (e.param_of(p2) - t1).rem_euclid(TAU);
    let t3 = t1 + (e.param_of(p3) - t1).rem_euclid(TAU);
    let orbit = Orbit::from_params(e, vec![t1, t2, t3])?;
    // the parameters are re-evaluated from the exact vertices
    Ok(Orbit {
        vertices: vec![p1, p2, p3],
        j_values: joachimsthal_values(e, &[p1, p2, p3]),
        ..orbit
    })
}

/// Caustic of the 3-periodic family.
pub fn confocal_caustic_n3(e: &EllipseSpec) -> Result<CausticSpec> {
    e.require_non_circular()?;
    let (a2, b2) = (e.a * e.a, e.b * e.b);
    let c2 = e.c * e.c;
    Ok(CausticSpec {
        a2: e.a * (e.delta - b2) / c2,
        b2: e.b * (a2 - e.delta) / c2,
    })
}

/// Mean Joachimsthal value of an orbit; rejects inputs whose per-vertex
/// values disagree.
pub fn joachimsthal(e: &EllipseSpec, o: &Orbit) -> Result<f64> {
    let fresh = Orbit {
        j_values: joachimsthal_values(e, &o.vertices),
        ..o.clone()
    };
    let spread = fresh.j_spread();
    if !(spread <= ORBIT_J_SPREAD_LIMIT) {
        return Err(Error::NotAnOrbit {
            spread,
            limit: ORBIT_J_SPREAD_LIMIT,
        });
    }
    Ok(fresh.j_mean())
}

/// Closed-form Joachimsthal constant and perimeter of 3-periodics.
pub fn n3_closed_form_jl(e: &EllipseSpec) -> Result<(f64, f64)> {
    e.require_non_circular()?;
    let (a2, b2) = (e.a * e.a, e.b * e.b);
    let j = (2.0 * e.delta - a2 - b2).sqrt() / (e.c * e.c);
    Ok((j, 2.0 * (e.delta + a2 + b2) * j))
}

/// Joachimsthal constant from the caustic's major semiaxis.
pub fn stachel_j(e: &EllipseSpec, caustic_a: f64) -> Result<f64> {
    if !(caustic_a > 0.0 && caustic_a < e.a) {
        return Err(Error::InvalidCaustic { caustic_a, a: e.a });
    }
    Ok(((e.a - caustic_a) * (e.a + caustic_a)).sqrt() / (e.a * e.b))
}

/// Settings of the general-N solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub fd_step: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub bisection_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            fd_step: 1e-7,
            tolerance: 1e-12,
            max_iterations: 50,
            bisection_steps: 200,
        }
    }
}

/// Next boundary hit of the ray `p + s·d`, `s > 0`, from a boundary point.
fn next_hit(e: &EllipseSpec, p: Point2, d: Point2) -> Point2 {
    let (ia2, ib2) = (1.0 / (e.a * e.a), 1.0 / (e.b * e.b));
    let qa = d.x * d.x * ia2 + d.y * d.y * ib2;
    let qb = 2.0 * (p.x * d.x * ia2 + p.y * d.y * ib2);
    p + d * (-qb / qa)
}

fn reflect(e: &EllipseSpec, p: Point2, d: Point2) -> Point2 {
    let n = e.unit_normal(p);
    d - n * (2.0 * d.dot(n))
}

/// Traces `n` chords starting with `P(t1) → P(t1 + s)` and returns the
/// parameters of the first `n` vertices plus the total counterclockwise
/// parametric advance minus `2π`.
fn shoot(e: &EllipseSpec, n: usize, t1: f64, s: f64) -> (Vec<f64>, f64) {
    let mut params = Vec::with_capacity(n + 1);
    params.push(t1);
    params.push(t1 + s);
    let mut prev = e.point(t1);
    let mut cur = e.point(t1 + s);
    let mut total = s;
    let mut t_cur = t1 + s;
    for _ in 1..n {
        let d = reflect(e, cur, cur - prev);
        let next = next_hit(e, cur, d);
        let step = (e.param_of(next) - t_cur).rem_euclid(TAU);
        total += step;
        t_cur += step;
        params.push(t_cur);
        prev = cur;
        cur = next;
    }
    params.truncate(n);
    (params, total - TAU)
}

fn residuals(e: &EllipseSpec, t1: f64, free: &[f64]) -> Result<Vec<f64>> {
    let n = free.len() + 1;
    let t = |i: usize| if i.is_multiple_of(n) { t1 } else { free[i % n - 1] };
    (1..n)
        .map(|i| reflection_residual(e, t(i + n - 1), t(i), t(i + 1)))
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// N-periodic with winding number one through `ellipse_point(t1)`.
pub fn solve_nperiodic(e: &EllipseSpec, n: usize, t1: f64) -> Result<Orbit> {
    solve_nperiodic_with(e, n, t1, &SolverOptions::default())
}

pub fn solve_nperiodic_with(e: &EllipseSpec, n: usize, t1: f64, opts: &SolverOptions) -> Result<Orbit> {
    if n < 3 {
        return Err(Error::InvalidVertexCount(n));
    }
    if !t1.is_finite() {
        return Err(Error::NonFinite);
    }
    // The N-bounce advance grows monotonically with the launch angle; the
    // first chord of a winding-one orbit spans less than 3π/2.
    let scan = 200;
    let upper = 1.5 * std::f64::consts::PI;
    let at = |k: usize| 1e-9 + (upper - 1e-9) * k as f64 / scan as f64;
    let mut bracket = None;
    let mut prev = shoot(e, n, t1, at(0)).1;
    for k in 1..=scan {
        let cur = shoot(e, n, t1, at(k)).1;
        if prev < 0.0 && cur >= 0.0 {
            bracket = Some((at(k - 1), at(k)));
            break;
        }
        prev = cur;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoBracket { n, t1 })?;
    for _ in 0..opts.bisection_steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shoot(e, n, t1, mid).1 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (seed, _) = shoot(e, n, t1, 0.5 * (lo + hi));

    // Newton polish on the free parameters t2..tN.
    let m = n - 1;
    let mut x: Vec<f64> = seed[1..].to_vec();
    let mut r = residuals(e, t1, &x)?;
    let mut iterations = 0;
    while max_abs(&r) >= opts.tolerance {
        if iterations == opts.max_iterations {
            return Err(Error::NonConvergence {
                iterations,
                residual: max_abs(&r),
            });
        }
        let mut jac = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            let mut xp = x.clone();
            xp[k] += opts.fd_step;
            let rp = residuals(e, t1, &xp)?;
            for i in 0..m {
                jac[(i, k)] = (rp[i] - r[i]) / opts.fd_step;
            }
        }
        let step = jac
            .lu()
            .solve(&DVector::from_column_slice(&r))
            .ok_or(Error::NonConvergence {
                iterations,
                residual: max_abs(&r),
            })?;
        for k in 0..m {
            x[k] -= step[k];
        }
        r = residuals(e, t1, &x)?;
        iterations += 1;
    }

    let mut params = Vec::with_capacity(n);
    params.push(t1);
    params.extend_from_slice(&x);
    for i in 1..n {
        if params[i] - params[i - 1] < 1e-9 {
            return Err(Error::CollapsedOrbit(i));
        }
    }
    if params[n - 1] - t1 >= TAU - 1e-9 {
        return Err(Error::CollapsedOrbit(n - 1));
    }
    let orbit = Orbit::from_params(e, params)?;
    // closure: the residual at the fixed vertex is not part of the system
    if orbit.max_residual > opts.tolerance.max(1e-10) {
        return Err(Error::NonConvergence {
            iterations,
            residual: orbit.max_residual,
        });
    }
    Ok(orbit)
}

/// 3-periodics use the closed form when available, otherwise the solver.
pub fn orbit(e: &EllipseSpec, n: usize, t1: f64) -> Result<Orbit> {
    if n == 3 && !e.is_circle() {
        three_periodic(e, t1)
    } else {
        solve_nperiodic(e, n, t1)
    }
}
