//! Planar polygon primitives: construction with validation, measures, inner
//! angles and rigid motions.
//!
//! Every [`Polygon`] is simple, counterclockwise and free of collinear
//! vertices, so its vertex count equals its side count `N`. Degeneracy tests
//! use a tolerance of `1e-9` times the bounding-box extent.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for degeneracy tests; multiplied by the bounding-box scale.
pub const EPS_REL: f64 = 1e-9;

/// Sine threshold below which three consecutive vertices count as collinear.
const COLLINEAR_SIN: f64 = 1e-9;

/// A point (or vector) in the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise rotation by `theta`.
    #[inline]
    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Closest point to `p` on segment `[a, b]`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    a + d * t
}

/// Euclidean distance from `p` to segment `[a, b]`.
#[inline]
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    p.dist(closest_on_segment(p, a, b))
}

/// Closest pair of points between segments `[a, b]` and `[c, d]`, with the
/// distance between them. Crossing segments return the crossing point twice.
pub fn segment_segment_closest(a: Point, b: Point, c: Point, d: Point) -> (f64, Point, Point) {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom != 0.0 {
        let t = (c - a).cross(s) / denom;
        let u = (c - a).cross(r) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            let x = a + r * t;
            return (0.0, x, x);
        }
    }
    let candidates = [
        (a, closest_on_segment(a, c, d)),
        (b, closest_on_segment(b, c, d)),
        (closest_on_segment(c, a, b), c),
        (closest_on_segment(d, a, b), d),
    ];
    candidates
        .into_iter()
        .map(|(p, q)| (p.dist(q), p, q))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("four candidates")
}

#[inline]
fn two_diff(a: f64, b: f64) -> (f64, f64) {
    let s = a - b;
    let bb = s - a;
    (s, (a - (s - bb)) - (b + bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `(a - o) × (b - o)`, evaluated with error-free transforms so that the
/// result keeps full relative precision for nearly collinear points.
pub fn orient(o: Point, a: Point, b: Point) -> f64 {
    let (ux, eux) = two_diff(a.x, o.x);
    let (uy, euy) = two_diff(a.y, o.y);
    let (wx, ewx) = two_diff(b.x, o.x);
    let (wy, ewy) = two_diff(b.y, o.y);
    let (p1, e1) = two_prod(ux, wy);
    let (p2, e2) = two_prod(uy, wx);
    let (s, es) = two_diff(p1, p2);
    let tail =
        (e1 - e2 + es) + (ux * ewy + eux * wy) - (uy * ewx + euy * wx) + (eux * ewy - euy * ewx);
    s + tail
}

/// Signed area of a closed vertex loop (positive when counterclockwise).
pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let o = vertices[0];
    let mut s = 0.0;
    let mut c = 0.0;
    for i in 1..n - 1 {
        // Neumaier summation of the fan triangles.
        let x = orient(o, vertices[i], vertices[i + 1]);
        let t = s + x;
        c += if s.abs() >= x.abs() {
            (s - t) + x
        } else {
            (x - t) + s
        };
        s = t;
    }
    0.5 * (s + c)
}

/// Sum of edge lengths of a closed vertex loop.
pub fn loop_perimeter(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 2 {
        return 0.0;
    }
    (0..n)
        .map(|i| vertices[i].dist(vertices[(i + 1) % n]))
        .sum()
}

/// Largest extent of the axis-aligned bounding box.
pub fn bbox_scale(vertices: &[Point]) -> f64 {
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        x0 = x0.min(v.x);
        y0 = y0.min(v.y);
        x1 = x1.max(v.x);
        y1 = y1.max(v.y);
    }
    (x1 - x0).max(y1 - y0)
}

/// A simple, counterclockwise planar polygon without collinear vertices.
///
/// Construct through [`Polygon::new`] (or [`make_polygon`]); the vertex list is
/// closed implicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// Wire form of a polygon: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<Point>,
}

impl TryFrom<PolygonJson> for Polygon {
    type Error = Error;
    fn try_from(raw: PolygonJson) -> Result<Self> {
        Polygon::new(raw.vertices)
    }
}

impl From<Polygon> for PolygonJson {
    fn from(p: Polygon) -> Self {
        PolygonJson {
            vertices: p.vertices,
        }
    }
}

/// Validates `points` and builds a [`Polygon`]. Clockwise input is reversed;
/// error indices refer to the input order.
pub fn make_polygon(points: &[Point]) -> Result<Polygon> {
    Polygon::new(points.to_vec())
}

impl Polygon {
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if let Some(index) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let eps = EPS_REL * bbox_scale(&vertices);

        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) <= eps {
                return Err(Error::DegenerateEdge { index: i });
            }
        }

        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e_in = cur - prev;
            let e_out = next - cur;
            let sin = e_in.cross(e_out) / (e_in.norm() * e_out.norm());
            if sin.abs() <= COLLINEAR_SIN {
                if e_in.dot(e_out) > 0.0 {
                    return Err(Error::CollinearVertex { index: i });
                }
                // Edge folds back onto its predecessor.
                return Err(Error::NonSimple {
                    first: (i + n - 1) % n,
                    second: i,
                });
            }
        }

        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (d, _, _) = segment_segment_closest(
                    vertices[i],
                    vertices[(i + 1) % n],
                    vertices[j],
                    vertices[(j + 1) % n],
                );
                if d <= eps {
                    return Err(Error::NonSimple {
                        first: i,
                        second: j,
                    });
                }
            }
        }

        if signed_area(&vertices) < 0.0 {
            log::debug!("reversing clockwise polygon with {n} vertices");
            vertices.reverse();
        }
        Ok(Polygon { vertices })
    }

    /// Builds a polygon from vertices already known to satisfy every invariant.
    pub(crate) fn from_trusted(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        debug_assert!(signed_area(&vertices) > 0.0);
        Polygon { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of vertices, equal to the number of sides.
    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edges as `(start, end)` pairs; edge `i` runs from vertex `i` to `i + 1`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        loop_perimeter(&self.vertices)
    }

    /// Bounding-box extent; the length scale for tolerances.
    pub fn scale(&self) -> f64 {
        bbox_scale(&self.vertices)
    }

    /// Degeneracy tolerance `1e-9 * scale`.
    pub fn eps_geom(&self) -> f64 {
        EPS_REL * self.scale()
    }

    /// Interior angles in `(0, 2π)`.
    pub fn inner_angles(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let v = self.vertex(i);
                let (next, prev) = (self.vertex(i + 1), self.vertex(i + n - 1));
                let g = orient(v, next, prev).atan2((next - v).dot(prev - v));
                if g < 0.0 {
                    g + 2.0 * PI
                } else {
                    g
                }
            })
            .collect()
    }

    /// Index of the first reflex vertex, if any.
    pub fn reflex_vertex(&self) -> Option<usize> {
        let n = self.len();
        let tol = self.eps_geom() * self.scale();
        (0..n).find(|&i| {
            let e_in = self.vertex(i) - self.vertex(i + n - 1);
            let e_out = self.vertex(i + 1) - self.vertex(i);
            e_in.cross(e_out) < -tol
        })
    }

    pub fn is_convex(&self) -> bool {
        self.reflex_vertex().is_none()
    }

    /// Returns `NonConvex` naming the first reflex vertex.
    pub fn require_convex(&self) -> Result<()> {
        match self.reflex_vertex() {
            Some(index) => Err(Error::NonConvex { index }),
            None => Ok(()),
        }
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                d = d.max(v[i].dist(v[j]));
            }
        }
        d
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a2 += w;
        }
        Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    /// Angle functional `Σ [tan((π-γ)/2) - (π-γ)/2]` over the inner angles.
    pub fn tau(&self) -> Result<f64> {
        self.require_convex()?;
        Ok(self
            .inner_angles()
            .into_iter()
            .map(|g| {
                // tan((π-γ)/2) as cot(γ/2) keeps precision at sharp vertices.
                1.0 / (0.5 * g).tan() - 0.5 * (PI - g)
            })
            .sum())
    }

    /// `P²/(4|Ω|) - (τ + π)`, nonnegative for every convex polygon and zero
    /// exactly for circumscribed ones.
    pub fn isoperimetric_gap(&self) -> Result<f64> {
        let tau = self.tau()?;
        let p = self.perimeter();
        Ok(p * p / (4.0 * self.area()) - (tau + PI))
    }

    /// Image under the homothety `x ↦ λx` about the origin (`λ > 0`).
    pub fn scaled(&self, lambda: f64) -> Polygon {
        assert!(
            lambda > 0.0 && lambda.is_finite(),
            "scale factor must be positive"
        );
        Polygon::from_trusted(self.vertices.iter().map(|&v| v * lambda).collect())
    }

    /// Similar copy with unit area, scaled about the origin by `1/√|Ω|`.
    pub fn normalize_area(&self) -> Polygon {
        self.scaled(1.0 / self.area().sqrt())
    }

    pub fn translated(&self, t: Point) -> Polygon {
        Polygon::from_trusted(self.vertices.iter().map(|&v| v + t).collect())
    }

    /// Isometric image. Reflections reverse the vertex order to stay counterclockwise.
    pub fn apply_motion(&self, m: &RigidMotion) -> Polygon {
        let mut v: Vec<Point> = self.vertices.iter().map(|&p| m.apply(p)).collect();
        if m.reflect {
            v.reverse();
        }
        Polygon::from_trusted(v)
    }

    /// Winding number of the boundary around `p` (1 inside, 0 outside).
    pub fn winding_number(&self, p: Point) -> i32 {
        let mut wn = 0;
        for (a, b) in self.edges() {
            if a.y <= p.y {
                if b.y > p.y && (b - a).cross(p - a) > 0.0 {
                    wn += 1;
                }
            } else if b.y <= p.y && (b - a).cross(p - a) < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn contains(&self, p: Point) -> bool {
        self.winding_number(p) != 0
    }

    /// Distance from `p` to the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance to the boundary, positive inside and negative outside.
    pub fn signed_boundary_distance(&self, p: Point) -> f64 {
        let d = self.boundary_distance(p);
        if self.contains(p) {
            d
        } else {
            -d
        }
    }
}

/// Unit-area regular `n`-gon centered at the origin with a vertex on the
/// positive x-axis.
pub fn regular_ngon(n: usize) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "regular polygon needs n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let circumradius = (2.0 / (nf * (2.0 * PI / nf).sin())).sqrt();
    let vertices = (0..n)
        .map(|k| Point::polar(2.0 * PI * k as f64 / nf) * circumradius)
        .collect();
    Ok(Polygon::from_trusted(vertices))
}

/// Perimeter of the unit-area regular `n`-gon, `2√(n tan(π/n))`.
pub fn regular_perimeter(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (nf * (PI / nf).tan()).sqrt()
}

/// Rotation by `angle` (after an optional reflection across the x-axis)
/// followed by a translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub angle: f64,
    pub translation: Point,
    pub reflect: bool,
}

impl Default for RigidMotion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl RigidMotion {
    pub const IDENTITY: RigidMotion = RigidMotion {
        angle: 0.0,
        translation: Point::ORIGIN,
        reflect: false,
    };

    pub fn new(angle: f64, translation: Point, reflect: bool) -> Self {
        RigidMotion {
            angle,
            translation,
            reflect,
        }
    }

    pub fn rotation(angle: f64) -> Self {
        RigidMotion::new(angle, Point::ORIGIN, false)
    }

    pub fn translation(t: Point) -> Self {
        RigidMotion::new(0.0, t, false)
    }

    /// Linear part only.
    #[inline]
    pub fn apply_vector(&self, v: Point) -> Point {
        let v = if self.reflect {
            Point::new(v.x, -v.y)
        } else {
            v
        };
        v.rotate(self.angle)
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.apply_vector(p) + self.translation
    }

    pub fn inverse(&self) -> RigidMotion {
        if self.reflect {
            // (R F)^{-1} = F R^{-1} = R F
            let t = -self.apply_vector(self.translation);
            RigidMotion::new(self.angle, t, true)
        } else {
            let t = -self.translation.rotate(-self.angle);
            RigidMotion::new(-self.angle, t, false)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        let angle = if self.reflect {
            self.angle - other.angle
        } else {
            self.angle + other.angle
        };
        RigidMotion::new(
            angle,
            self.apply(other.translation),
            self.reflect != other.reflect,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn unit_square() -> Polygon {
        Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap()
    }

    #[test]
    fn square_measures() {
        let s = unit_square();
        assert_eq!(s.len(), 4);
        assert_eq!(s.area(), 1.0);
        assert_eq!(s.perimeter(), 4.0);
        assert!((s.diameter() - 2f64.sqrt()).abs() < 1e-15);
        for g in s.inner_angles() {
            assert!((g - PI / 2.0).abs() < 1e-15);
        }
        assert!(s.is_convex());
    }

    #[test]
    fn bowtie_is_rejected() {
        let err = Polygon::new(pts(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])).unwrap_err();
        assert!(matches!(err, Error::NonSimple { .. }), "{err:?}");
    }

    #[test]
    fn collinear_vertex_is_rejected() {
        let err = Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)])).unwrap_err();
        assert_eq!(err, Error::CollinearVertex { index: 1 });
    }

    #[test]
    fn degenerate_edge_and_too_few() {
        let err = Polygon::new(pts(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap_err();
        assert_eq!(err, Error::DegenerateEdge { index: 0 });
        let err = Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0)])).unwrap_err();
        assert_eq!(err, Error::TooFewVertices(2));
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = Polygon::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])).unwrap();
        assert!(p.area() > 0.0);
        assert_eq!(p.vertices()[0], Point::new(1.0, 0.0));
    }

    #[test]
    fn triangle_area() {
        let t = Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        assert_eq!(t.area(), 0.5);
    }

    #[test]
    fn regular_ngon_shape() {
        let sq = regular_ngon(4).unwrap();
        assert!((sq.vertices()[0].x - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((sq.area() - 1.0).abs() < 1e-12);
        let tri = regular_ngon(3).unwrap();
        let side = 2.0 / 3f64.powf(0.25);
        for (a, b) in tri.edges() {
            assert!((a.dist(b) - side).abs() < 1e-12);
        }
        let hex = regular_ngon(6).unwrap();
        assert!((hex.area() - 1.0).abs() < 1e-12);
        assert!((hex.perimeter() - 3.7224194364083982).abs() < 1e-12);
        for g in hex.inner_angles() {
            assert!((g - 2.0 * PI / 3.0).abs() < 1e-12);
        }
        for n in 3..=16 {
            let p = regular_ngon(n).unwrap();
            assert!((p.area() - 1.0).abs() < 1e-12);
            assert!((p.perimeter() - regular_perimeter(n)).abs() < 1e-12);
            assert!(p.centroid().norm() < 1e-12);
        }
        assert!(regular_ngon(2).is_err());
    }

    #[test]
    fn tau_values() {
        assert!((unit_square().tau().unwrap() - (4.0 - PI)).abs() < 1e-14);
        let hex = regular_ngon(6).unwrap();
        let expect = 6.0 * ((PI / 6.0).tan() - PI / 6.0);
        assert!((hex.tau().unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.32251).abs() < 1e-5);
    }

    #[test]
    fn isoperimetric_gap_values() {
        for n in 3..=12 {
            assert!(regular_ngon(n).unwrap().isoperimetric_gap().unwrap().abs() < 1e-10);
        }
        assert!(unit_square().isoperimetric_gap().unwrap().abs() < 1e-10);
        let rect = Polygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 0.5), (0.0, 0.5)])).unwrap();
        assert!((rect.isoperimetric_gap().unwrap() - 2.25).abs() < 1e-12);
    }

    #[test]
    fn nonconvex_tau_fails() {
        let dart = Polygon::new(pts(&[(0.0, 0.0), (2.0, 1.0), (0.0, 2.0), (0.5, 1.0)])).unwrap();
        assert!(!dart.is_convex());
        assert_eq!(dart.tau().unwrap_err(), Error::NonConvex { index: 3 });
        assert!(dart.inner_angles()[3] > PI);
    }

    #[test]
    fn thin_rectangle_diameter() {
        let r = Polygon::new(pts(&[(0.0, 0.0), (10.0, 0.0), (10.0, 0.1), (0.0, 0.1)])).unwrap();
        assert!((r.diameter() - 100.01f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalize_area_scales() {
        let s2 = unit_square().scaled(2.0);
        let n = s2.normalize_area();
        assert!((n.area() - 1.0).abs() < 1e-15);
        assert_eq!(n.vertices(), unit_square().vertices());
        assert_eq!(unit_square().normalize_area(), unit_square());
    }

    #[test]
    fn motion_inverse_and_symmetry() {
        let m = RigidMotion::new(0.7, Point::new(1.5, -2.0), true);
        let p = Point::new(0.3, 0.9);
        let back = m.inverse().apply(m.apply(p));
        assert!(back.dist(p) < 1e-12);
        let id = m.compose(&m.inverse());
        assert!(id.apply(p).dist(p) < 1e-12);

        let hex = regular_ngon(6).unwrap();
        let rot = hex.apply_motion(&RigidMotion::rotation(PI / 3.0));
        for v in rot.vertices() {
            assert!(hex.vertices().iter().any(|w| w.dist(*v) < 1e-12));
        }
        let refl = hex.apply_motion(&RigidMotion::new(0.2, Point::new(1.0, 1.0), true));
        assert!((refl.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let s = unit_square();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(
            js,
            r#"{"vertices":[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]}"#
        );
        let bad: std::result::Result<Polygon, _> =
            serde_json::from_str(r#"{"vertices":[[0,0],[1,1],[1,0],[0,1]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn winding_and_signed_distance() {
        let s = unit_square();
        assert!(s.contains(Point::new(0.5, 0.5)));
        assert!(!s.contains(Point::new(1.5, 0.5)));
        assert!((s.signed_boundary_distance(Point::new(0.5, 0.4)) - 0.4).abs() < 1e-15);
        assert!((s.signed_boundary_distance(Point::new(1.5, 0.5)) + 0.5).abs() < 1e-15);
    }
}
