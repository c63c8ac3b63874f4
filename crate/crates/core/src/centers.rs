//! Kimberling triangle centers from a triangle's vertices.
//!
//! Each center is stored as a barycentric weight `w(a, b, c)` for the first
//! vertex (`a` the opposite side, `b`, `c` the others in cyclic order); the
//! other two weights follow by cyclic permutation. Weights are kept
//! polynomial where possible, with denominators such as `b − c` cleared
//! across all three weights, so right and isosceles triangles stay finite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// A nondegenerate triangle with side lengths opposite each vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Point2; 3],
    pub sides: [f64; 3],
}

impl Triangle {
    pub fn new(p1: Point2, p2: Point2, p3: Point2) -> Result<Triangle> {
        if !(p1.is_finite() && p2.is_finite() && p3.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sides = [p2.dist(p3), p3.dist(p1), p1.dist(p2)];
        let scale = sides.iter().fold(0.0f64, |m, &s| m.max(s));
        let area = 0.5 * (p2 - p1).cross(p3 - p1);
        if !(area.abs() > 1e-14 * scale * scale) {
            return Err(Error::DegenerateTriangle { area });
        }
        Ok(Triangle {
            vertices: [p1, p2, p3],
            sides,
        })
    }

    pub fn from_slice(v: &[Point2]) -> Result<Triangle> {
        if v.len() != 3 {
            return Err(Error::TooFewVertices(v.len()));
        }
        Triangle::new(v[0], v[1], v[2])
    }

    pub fn area(&self) -> f64 {
        let [p1, p2, p3] = self.vertices;
        0.5 * (p2 - p1).cross(p3 - p1)
    }

    pub fn centroid(&self) -> Point2 {
        let [p1, p2, p3] = self.vertices;
        (p1 + p2 + p3) / 3.0
    }

    /// Combination `Σ w_i P_i / Σ w_i`.
    pub fn barycentric(&self, w: [f64; 3]) -> Result<Point2> {
        let sum: f64 = w.iter().sum();
        let mag: f64 = w.iter().map(|x| x.abs()).sum();
        if !(sum.is_finite() && mag.is_finite()) || sum.abs() <= 1e-14 * mag || mag == 0.0 {
            return Err(Error::PointAtInfinity);
        }
        let [p1, p2, p3] = self.vertices;
        Ok((p1 * w[0] + p2 * w[1] + p3 * w[2]) / sum)
    }
}

/// Side lengths and derived angle data seen from one vertex.
#[derive(Debug, Clone, Copy)]
struct Sides {
    a: f64,
    b: f64,
    c: f64,
    cos_a: f64,
    cos_b: f64,
    cos_c: f64,
    sin_b: f64,
    sin_c: f64,
}

impl Sides {
    fn new(a: f64, b: f64, c: f64, area: f64) -> Sides {
        let (a2, b2, c2) = (a * a, b * b, c * c);
        Sides {
            a,
            b,
            c,
            cos_a: (b2 + c2 - a2) / (2.0 * b * c),
            cos_b: (c2 + a2 - b2) / (2.0 * c * a),
            cos_c: (a2 + b2 - c2) / (2.0 * a * b),
            sin_b: 2.0 * area / (c * a),
            sin_c: 2.0 * area / (a * b),
        }
    }

    fn cos_b_minus_c(&self) -> f64 {
        self.cos_b * self.cos_c + self.sin_b * self.sin_c
    }
}

type Weight = fn(&Sides) -> f64;

fn w1(s: &Sides) -> f64 {
    s.a
}
fn w2(_: &Sides) -> f64 {
    1.0
}
fn w3(s: &Sides) -> f64 {
    s.a * s.a * (s.b * s.b + s.c * s.c - s.a * s.a)
}
fn w4(s: &Sides) -> f64 {
    let (a2, b2, c2) = (s.a * s.a, s.b * s.b, s.c * s.c);
    (a2 + b2 - c2) * (a2 - b2 + c2)
}
fn w5(s: &Sides) -> f64 {
    s.a * s.cos_b_minus_c()
}
fn w7(s: &Sides) -> f64 {
    1.0 / (s.b + s.c - s.a)
}
fn w8(s: &Sides) -> f64 {
    s.b + s.c - s.a
}
fn w9(s: &Sides) -> f64 {
    s.a * (s.b + s.c - s.a)
}
fn w10(s: &Sides) -> f64 {
    s.b + s.c
}
fn w11(s: &Sides) -> f64 {
    s.a * (1.0 - s.cos_b_minus_c())
}
fn w12(s: &Sides) -> f64 {
    s.a * (1.0 + s.cos_b_minus_c())
}
fn w20(s: &Sides) -> f64 {
    s.a * (s.cos_a - s.cos_b * s.cos_c)
}
fn w21(s: &Sides) -> f64 {
    s.a / (s.cos_b + s.cos_c)
}
fn w35(s: &Sides) -> f64 {
    s.a * (1.0 + 2.0 * s.cos_a)
}
fn w36(s: &Sides) -> f64 {
    s.a * (1.0 - 2.0 * s.cos_a)
}
fn w40(s: &Sides) -> f64 {
    s.a * (s.cos_b + s.cos_c - s.cos_a - 1.0)
}
fn w46(s: &Sides) -> f64 {
    s.a * (s.cos_b + s.cos_c - s.cos_a)
}
fn w55(s: &Sides) -> f64 {
    s.a * s.a * (s.b + s.c - s.a)
}
fn w56(s: &Sides) -> f64 {
    s.a * s.a / (s.b + s.c - s.a)
}
fn w57(s: &Sides) -> f64 {
    s.a / (s.b + s.c - s.a)
}
fn w63(s: &Sides) -> f64 {
    s.a * (s.b * s.b + s.c * s.c - s.a * s.a)
}
fn w65(s: &Sides) -> f64 {
    s.a * (s.cos_b + s.cos_c)
}
fn w72(s: &Sides) -> f64 {
    s.a * (s.b + s.c) * (s.b * s.b + s.c * s.c - s.a * s.a)
}
fn w78(s: &Sides) -> f64 {
    s.a * s.cos_a / (s.cos_a - 1.0)
}
fn w79(s: &Sides) -> f64 {
    s.a / (1.0 + 2.0 * s.cos_a)
}
fn w80(s: &Sides) -> f64 {
    s.a / (1.0 - 2.0 * s.cos_a)
}
fn w84(s: &Sides) -> f64 {
    s.a / (s.cos_b + s.cos_c - s.cos_a - 1.0)
}
fn w88(s: &Sides) -> f64 {
    s.a * (s.c + s.a - 2.0 * s.b) * (s.a + s.b - 2.0 * s.c)
}
fn w90(s: &Sides) -> f64 {
    s.a / (s.cos_b + s.cos_c - s.cos_a)
}
fn w100(s: &Sides) -> f64 {
    s.a * (s.c - s.a) * (s.a - s.b)
}
fn w101(s: &Sides) -> f64 {
    s.a * s.a * (s.c - s.a) * (s.a - s.b)
}
fn w162(s: &Sides) -> f64 {
    let (a2, b2, c2) = (s.a * s.a, s.b * s.b, s.c * s.c);
    s.a * (c2 + a2 - b2) * (a2 + b2 - c2) * (c2 - a2) * (a2 - b2)
}
fn w934(s: &Sides) -> f64 {
    let (ub, uc) = (s.c + s.a - s.b, s.a + s.b - s.c);
    s.a * (s.c - s.a) * (s.a - s.b) * ub * ub * uc * uc
}

/// How a center is obtained from its table entry.
#[derive(Debug, Clone, Copy)]
enum Rule {
    Weight(Weight),
    /// `3·X2 − 2·X(k)` of a weight-defined center.
    Anticomplement(Weight),
}

fn rule(k: u32) -> Option<Rule> {
    use Rule::*;
    Some(match k {
        1 => Weight(w1),
        2 => Weight(w2),
        3 => Weight(w3),
        4 => Weight(w4),
        5 => Weight(w5),
        7 => Weight(w7),
        8 => Weight(w8),
        9 => Weight(w9),
        10 => Weight(w10),
        11 => Weight(w11),
        12 => Weight(w12),
        20 => Weight(w20),
        21 => Weight(w21),
        35 => Weight(w35),
        36 => Weight(w36),
        40 => Weight(w40),
        46 => Weight(w46),
        55 => Weight(w55),
        56 => Weight(w56),
        57 => Weight(w57),
        63 => Weight(w63),
        65 => Weight(w65),
        72 => Weight(w72),
        78 => Weight(w78),
        79 => Weight(w79),
        80 => Weight(w80),
        84 => Weight(w84),
        88 => Weight(w88),
        90 => Weight(w90),
        100 => Weight(w100),
        101 => Weight(w101),
        150 => Anticomplement(w101),
        162 => Weight(w162),
        934 => Weight(w934),
        _ => return None,
    })
}

/// Ids with a table entry, ascending.
pub const SUPPORTED_CENTERS: [u32; 34] = [
    1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 20, 21, 35, 36, 40, 46, 55, 56, 57, 63, 65, 72, 78, 79, 80, 84, 88,
    90, 100, 101, 150, 162, 934,
];

/// The 28 centers listed as sweeping circular loci over focus-inversive
/// 3-periodics. X73 has no table entry.
pub const CIRCULAR_LOCUS_CENTERS: [u32; 28] = [
    1, 2, 3, 4, 5, 8, 9, 10, 11, 12, 20, 21, 35, 36, 40, 46, 55, 56, 57, 63, 65, 73, 78, 79, 80, 84, 90, 100,
];

/// A Kimberling index known to the center table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CenterId(u32);

impl CenterId {
    pub fn new(k: u32) -> Result<CenterId> {
        if rule(k).is_some() {
            Ok(CenterId(k))
        } else {
            Err(Error::UnsupportedCenter(k))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_supported(k: u32) -> bool {
        rule(k).is_some()
    }
}

impl std::fmt::Display for CenterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X{}", self.0)
    }
}

fn weights(t: &Triangle, w: Weight) -> [f64; 3] {
    let [sa, sb, sc] = t.sides;
    let area = t.area().abs();
    [
        w(&Sides::new(sa, sb, sc, area)),
        w(&Sides::new(sb, sc, sa, area)),
        w(&Sides::new(sc, sa, sb, area)),
    ]
}

/// Cartesian position of a center.
pub fn center_point(t: &Triangle, id: CenterId) -> Result<Point2> {
    match rule(id.0).ok_or(Error::UnsupportedCenter(id.0))? {
        Rule::Weight(w) => t.barycentric(weights(t, w)),
        Rule::Anticomplement(w) => {
            let p = t.barycentric(weights(t, w))?;
            Ok(t.centroid() * 3.0 - p * 2.0)
        }
    }
}

/// Convenience wrapper taking a raw index.
pub fn center_by_index(t: &Triangle, k: u32) -> Result<Point2> {
    center_point(t, CenterId::new(k)?)
}

/// Trilinears `(α : β : γ)` to Cartesian via barycentrics `(aα : bβ : cγ)`.
pub fn trilinear_to_cartesian(t: &Triangle, tri: [f64; 3]) -> Result<Point2> {
    let [sa, sb, sc] = t.sides;
    t.barycentric([sa * tri[0], sb * tri[1], sc * tri[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn t345() -> Triangle {
        Triangle::new(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0)).unwrap()
    }

    fn scalene() -> Triangle {
        Triangle::new(p(0.3, -0.2), p(5.1, 0.4), p(1.2, 3.7)).unwrap()
    }

    fn x(t: &Triangle, k: u32) -> Point2 {
        center_by_index(t, k).unwrap()
    }

    fn close(u: Point2, v: Point2, tol: f64) -> bool {
        u.dist(v) < tol
    }

    fn line_intersection(p1: Point2, d1: Point2, p2: Point2, d2: Point2) -> Point2 {
        let s = (p2 - p1).cross(d2) / d1.cross(d2);
        p1 + d1 * s
    }

    /// Signed distances to the side lines, positive towards the interior.
    fn measured_trilinears(t: &Triangle, q: Point2) -> [f64; 3] {
        let v = t.vertices;
        let mut out = [0.0; 3];
        for i in 0..3 {
            let (u, w) = (v[(i + 1) % 3], v[(i + 2) % 3]);
            let n = (w - u).perp().normalized();
            let s = (v[i] - u).dot(n).signum();
            out[i] = s * (q - u).dot(n);
        }
        out
    }

    fn proportional(x: [f64; 3], y: [f64; 3], tol: f64) -> bool {
        let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let ny = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let dot = (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) / (nx * ny);
        (dot.abs() - 1.0).abs() < tol
    }

    fn angles(t: &Triangle) -> [f64; 3] {
        let [a, b, c] = t.sides;
        [
            ((b * b + c * c - a * a) / (2.0 * b * c)).acos(),
            ((c * c + a * a - b * b) / (2.0 * c * a)).acos(),
            ((a * a + b * b - c * c) / (2.0 * a * b)).acos(),
        ]
    }

    fn circumcircle(t: &Triangle) -> (Point2, f64) {
        let [p1, p2, p3] = t.vertices;
        let o = line_intersection(
            (p1 + p2) * 0.5,
            (p2 - p1).perp(),
            (p2 + p3) * 0.5,
            (p3 - p2).perp(),
        );
        (o, o.dist(p1))
    }

    fn incircle(t: &Triangle) -> (Point2, f64) {
        let [p1, p2, p3] = t.vertices;
        let bis = |v: Point2, u: Point2, w: Point2| (u - v).normalized() + (w - v).normalized();
        let i = line_intersection(p1, bis(p1, p2, p3), p2, bis(p2, p3, p1));
        (i, 2.0 * t.area().abs() / t.sides.iter().sum::<f64>())
    }

    fn orthocenter(t: &Triangle) -> Point2 {
        let [p1, p2, p3] = t.vertices;
        line_intersection(p1, (p3 - p2).perp(), p2, (p1 - p3).perp())
    }

    #[test]
    fn spec_examples() {
        let t = Triangle::new(p(0.0, 0.0), p(3.0, 0.0), p(0.0, 3.0)).unwrap();
        assert!(close(x(&t, 2), p(1.0, 1.0), 1e-15));
        assert!(close(x(&t345(), 1), p(1.0, 1.0), 1e-15));
        assert!(close(x(&t345(), 3), p(2.0, 1.5), 1e-15));
    }

    #[test]
    fn classical_centers_by_construction() {
        for t in [t345(), scalene()] {
            let (o, _) = circumcircle(&t);
            let (i, _) = incircle(&t);
            let h = orthocenter(&t);
            let g = t.centroid();
            let tol = 1e-12;
            assert!(close(x(&t, 1), i, tol));
            assert!(close(x(&t, 2), g, tol));
            assert!(close(x(&t, 3), o, tol));
            assert!(close(x(&t, 4), h, tol));
            assert!(close(x(&t, 5), (o + h) * 0.5, tol));
            assert!(close(x(&t, 20), o * 2.0 - h, tol));
            assert!(close(x(&t, 40), o * 2.0 - i, tol));
            assert!(close(x(&t, 8), g * 3.0 - i * 2.0, tol));
            assert!(close(x(&t, 10), (g * 3.0 - i) * 0.5, tol));
            assert!(close(x(&t, 80), x(&t, 11) * 2.0 - i, tol));
        }
    }

    #[test]
    fn gergonne_and_mittenpunkt_by_construction() {
        for t in [t345(), scalene()] {
            let [p1, p2, p3] = t.vertices;
            let [a, b, c] = t.sides;
            let s = 0.5 * (a + b + c);
            // incircle touch points
            let touch1 = p2 + (p3 - p2).normalized() * (s - b);
            let touch2 = p3 + (p1 - p3).normalized() * (s - c);
            let ge = line_intersection(p1, touch1 - p1, p2, touch2 - p2);
            assert!(close(x(&t, 7), ge, 1e-12));
            // excenters joined to side midpoints
            let ex = |w: [f64; 3]| t.barycentric(w).unwrap();
            let e1 = ex([-a, b, c]);
            let e2 = ex([a, -b, c]);
            let mi = line_intersection(e1, (p2 + p3) * 0.5 - e1, e2, (p3 + p1) * 0.5 - e2);
            assert!(close(x(&t, 9), mi, 1e-12));
            // orthocenter of the intouch triangle
            let touch3 = p1 + (p2 - p1).normalized() * (s - a);
            let it = Triangle::new(touch1, touch2, touch3).unwrap();
            assert!(close(x(&t, 65), orthocenter(&it), 1e-12));
        }
    }

    #[test]
    fn similitude_centers_and_feuerbach() {
        for t in [t345(), scalene()] {
            let (o, rr) = circumcircle(&t);
            let (i, r) = incircle(&t);
            assert!(close(x(&t, 55), (o * r + i * rr) / (rr + r), 1e-12));
            assert!(close(x(&t, 56), (i * rr - o * r) / (rr - r), 1e-12));
            // X36 is the inverse of the incenter in the circumcircle
            let d = i - o;
            assert!(close(x(&t, 36), o + d * (rr * rr / d.norm_sq()), 1e-12));
            // Feuerbach point: on the incircle and on the nine-point circle
            let f = x(&t, 11);
            let n = (o + orthocenter(&t)) * 0.5;
            assert!((f.dist(i) - r).abs() < 1e-12);
            assert!((f.dist(n) - 0.5 * rr).abs() < 1e-12);
            // X12 is the harmonic conjugate of X11 with respect to X1, X5
            let x12 = x(&t, 12);
            let (u, v) = (f - i, f - n);
            let (su, sv) = (x12 - i, x12 - n);
            let ratio = |p: Point2, q: Point2| p.norm() / q.norm();
            assert!((ratio(u, v) - ratio(su, sv)).abs() < 1e-10);
            assert!(u.cross(su).abs() < 1e-10 && v.cross(sv).abs() < 1e-10);
        }
    }

    #[test]
    fn circumcircle_points() {
        let t = scalene();
        let (o, rr) = circumcircle(&t);
        for k in [100, 101, 934] {
            assert!((x(&t, k).dist(o) - rr).abs() < 1e-10 * rr, "X{k}");
        }
    }

    #[test]
    fn isogonal_pairs() {
        let t = scalene();
        for (u, v) in [
            (7, 55),
            (8, 56),
            (9, 57),
            (21, 65),
            (35, 79),
            (36, 80),
            (40, 84),
            (46, 90),
        ] {
            let (p, q) = (
                measured_trilinears(&t, x(&t, u)),
                measured_trilinears(&t, x(&t, v)),
            );
            let prod = [p[0] * q[0], p[1] * q[1], p[2] * q[2]];
            assert!(proportional(prod, [1.0, 1.0, 1.0], 1e-12), "X{u} X{v}");
        }
    }

    #[test]
    fn angle_form_trilinears() {
        let t = scalene();
        let [aa, bb, cc] = angles(&t);
        let ang = [aa, bb, cc];
        let cyc = |f: &dyn Fn(f64, f64, f64) -> f64| {
            [
                f(ang[0], ang[1], ang[2]),
                f(ang[1], ang[2], ang[0]),
                f(ang[2], ang[0], ang[1]),
            ]
        };
        let cases: Vec<(u32, [f64; 3])> = vec![
            (5, cyc(&|_, b, c| (b - c).cos())),
            (20, cyc(&|a, b, c| a.cos() - b.cos() * c.cos())),
            (21, cyc(&|_, b, c| 1.0 / (b.cos() + c.cos()))),
            (35, cyc(&|a, _, _| 1.0 + 2.0 * a.cos())),
            (46, cyc(&|a, b, c| b.cos() + c.cos() - a.cos())),
            (55, cyc(&|a, _, _| 1.0 + a.cos())),
            (56, cyc(&|a, _, _| 1.0 - a.cos())),
            (57, cyc(&|a, _, _| (a / 2.0).tan())),
            (63, cyc(&|a, _, _| 1.0 / a.tan())),
            (78, cyc(&|a, _, _| 1.0 / (1.0 - 1.0 / a.cos()))),
            (162, cyc(&|a, b, c| a.tan() / (b.sin().powi(2) - c.sin().powi(2)))),
        ];
        for (k, tri) in cases {
            assert!(
                proportional(measured_trilinears(&t, x(&t, k)), tri, 1e-12),
                "X{k}"
            );
        }
        let [a, b, c] = t.sides;
        let cot = |z: f64| 1.0 / z.tan();
        let tri72 = [(b + c) * cot(aa), (c + a) * cot(bb), (a + b) * cot(cc)];
        assert!(proportional(measured_trilinears(&t, x(&t, 72)), tri72, 1e-12));
        let tri934 = [
            1.0 / ((b - c) * (b + c - a).powi(2)),
            1.0 / ((c - a) * (c + a - b).powi(2)),
            1.0 / ((a - b) * (a + b - c).powi(2)),
        ];
        assert!(proportional(measured_trilinears(&t, x(&t, 934)), tri934, 1e-12));
    }

    #[test]
    fn x150_is_anticomplement_of_x101() {
        let t = scalene();
        let g = t.centroid();
        let q = x(&t, 150);
        // the complement of X150 is X101
        assert!(close((g * 3.0 - q) * 0.5, x(&t, 101), 1e-12));
    }

    #[test]
    fn right_triangle_stays_finite() {
        let t = t345();
        for &k in SUPPORTED_CENTERS.iter() {
            if let Ok(q) = center_by_index(&t, k) {
                assert!(q.is_finite(), "X{k}");
            }
        }
        assert!(close(x(&t, 4), p(0.0, 0.0), 1e-15));
    }

    #[test]
    fn isosceles_limits_are_vertices() {
        let t = Triangle::new(p(0.0, 2.0), p(-1.0, 0.0), p(1.0, 0.0)).unwrap();
        for k in [100, 162, 934] {
            assert!(close(x(&t, k), p(0.0, 2.0), 1e-15), "X{k}");
        }
    }

    #[test]
    fn trilinear_examples() {
        let t = scalene();
        let [a, b, c] = t.sides;
        assert!(close(
            trilinear_to_cartesian(&t, [1.0, 1.0, 1.0]).unwrap(),
            x(&t, 1),
            1e-14
        ));
        let g = trilinear_to_cartesian(&t, [1.0 / a, 1.0 / b, 1.0 / c]).unwrap();
        assert!(close(g, t.centroid(), 1e-14));
        assert_eq!(
            trilinear_to_cartesian(&t, [1.0 / a, -1.0 / b, 0.0]),
            Err(Error::PointAtInfinity)
        );
    }

    #[test]
    fn equilateral_centers_coincide() {
        let s3 = 3f64.sqrt();
        let t = Triangle::new(p(1.0, 0.0), p(-0.5, s3 / 2.0), p(-0.5, -s3 / 2.0)).unwrap();
        let mut defined = 0;
        for &k in SUPPORTED_CENTERS.iter() {
            if let Ok(q) = center_by_index(&t, k) {
                if q.is_finite() {
                    assert!(q.norm() < 1e-9, "X{k} at {q:?}");
                    defined += 1;
                }
            }
        }
        assert!(defined >= 20);
    }

    #[test]
    fn errors() {
        assert_eq!(CenterId::new(73), Err(Error::UnsupportedCenter(73)));
        assert!(matches!(
            Triangle::new(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)),
            Err(Error::DegenerateTriangle { .. })
        ));
    }

    #[test]
    fn mittenpunkt_of_3_periodics_is_stationary() {
        let e = crate::geometry::make_ellipse(1.8, 1.0).unwrap();
        for k in 0..24 {
            let o = crate::orbit::three_periodic(&e, 0.26 * k as f64).unwrap();
            let t = Triangle::from_slice(&o.vertices).unwrap();
            assert!(x(&t, 9).norm() < 1e-9 * e.a);
        }
    }
}
