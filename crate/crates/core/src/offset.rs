//! Inner parallel sets of convex polygons and their dilation by a disk.
//!
//! Erosion by `r` is the intersection of the `N` halfplanes bounded by the
//! edge lines moved inward by `r`. Each edge of the clipped region remembers
//! which original edge line supports it, which is what the Cheeger regularity
//! test needs.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bbox_scale, signed_area, Point, Polygon, EPS_REL};
use crate::roots::bisect_predicate;

/// Default clearance tolerance for [`contains_arc_polygon`].
pub const DEFAULT_CONTAINMENT_MARGIN: f64 = 1e-6;

/// Outward unit normal of the edge `a -> b` of a counterclockwise loop.
#[inline]
pub(crate) fn outward_normal(a: Point, b: Point) -> Point {
    let d = b - a;
    Point::new(d.y, -d.x) * (1.0 / d.norm())
}

/// Raw result of clipping a convex polygon by its inward-shifted edge lines.
/// `labels[k]` is the index of the original edge whose line supports the edge
/// from `vertices[k]` to `vertices[k + 1]`.
#[derive(Debug, Clone)]
pub(crate) struct Clipped {
    pub vertices: Vec<Point>,
    pub labels: Vec<usize>,
}

impl Clipped {
    /// Total length contributed by each original edge line.
    pub fn label_lengths(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        let m = self.vertices.len();
        for k in 0..m {
            out[self.labels[k]] += self.vertices[k].dist(self.vertices[(k + 1) % m]);
        }
        out
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).max(0.0)
    }
}

fn clip_halfplane(
    input: &[(Point, usize)],
    normal: Point,
    offset: f64,
    label: usize,
) -> Vec<(Point, usize)> {
    let m = input.len();
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..m {
        let (a, la) = input[k];
        let (b, _) = input[(k + 1) % m];
        let sa = offset - normal.dot(a);
        let sb = offset - normal.dot(b);
        if sa >= 0.0 {
            out.push((a, la));
            if sb < 0.0 {
                out.push((a + (b - a) * (sa / (sa - sb)), label));
            }
        } else if sb >= 0.0 {
            out.push((a + (b - a) * (sa / (sa - sb)), la));
        }
    }
    out
}

/// Intersection of the inward-shifted halfplanes, without cleanup. `None` when empty.
pub(crate) fn clip_inward(p: &Polygon, r: f64) -> Option<Clipped> {
    let n = p.len();
    let mut poly: Vec<(Point, usize)> = p.vertices().iter().copied().zip(0..n).collect();
    if r > 0.0 {
        for (i, (a, b)) in p.edges().enumerate() {
            let normal = outward_normal(a, b);
            poly = clip_halfplane(&poly, normal, normal.dot(a) - r, i);
            if poly.len() < 3 {
                return None;
            }
        }
    }
    let (vertices, labels) = poly.into_iter().unzip();
    Some(Clipped { vertices, labels })
}

/// Removes near-duplicate and collinear vertices from a convex loop and
/// validates the result. `None` if what remains has no interior.
pub(crate) fn clean_convex_loop(vertices: &[Point], eps: f64) -> Option<Polygon> {
    let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
    for &p in vertices {
        if v.last().is_none_or(|q: &Point| q.dist(p) > eps) {
            v.push(p);
        }
    }
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= eps {
        v.pop();
    }
    loop {
        let m = v.len();
        if m < 3 {
            return None;
        }
        let drop = (0..m).find(|&i| {
            let e_in = v[i] - v[(i + m - 1) % m];
            let e_out = v[(i + 1) % m] - v[i];
            let sin = e_in.cross(e_out) / (e_in.norm() * e_out.norm());
            sin.abs() <= 1e-9
        });
        match drop {
            Some(i) => {
                v.remove(i);
            }
            None => break,
        }
    }
    if signed_area(&v) <= eps * eps {
        return None;
    }
    Polygon::new(v).ok()
}

/// Inner parallel set at distance `r` (closed), or `None` when it has no
/// interior (`r` at or beyond the inradius).
pub fn inner_parallel(p: &Polygon, r: f64) -> Result<Option<Polygon>> {
    p.require_convex()?;
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "offset distance must be >= 0, got {r}"
        )));
    }
    if r == 0.0 {
        return Ok(Some(p.clone()));
    }
    Ok(clip_inward(p, r).and_then(|c| clean_convex_loop(&c.vertices, p.eps_geom())))
}

/// Area of the inner parallel set at distance `r`; zero when empty.
pub fn inner_area(p: &Polygon, r: f64) -> Result<f64> {
    p.require_convex()?;
    Ok(inner_area_unchecked(p, r))
}

pub(crate) fn inner_area_unchecked(p: &Polygon, r: f64) -> f64 {
    if r <= 0.0 {
        return p.area();
    }
    clip_inward(p, r).map_or(0.0, |c| c.area())
}

/// Largest `r` with a nonempty inner parallel set, to about `1e-12 * scale`.
pub fn inradius(p: &Polygon) -> Result<f64> {
    p.require_convex()?;
    Ok(inradius_unchecked(p))
}

pub(crate) fn inradius_unchecked(p: &Polygon) -> f64 {
    let scale = p.scale();
    let floor = (1e-13 * scale) * (1e-13 * scale);
    // Area >= inradius * perimeter / 2 for convex sets.
    let hi = 2.0 * p.area() / p.perimeter() * (1.0 + 1e-9) + 1e-12 * scale;
    bisect_predicate(
        |r| inner_area_unchecked(p, r) > floor,
        0.0,
        hi,
        1e-12 * scale,
    )
}

/// A piece of an [`ArcPolygon`] boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Segment {
        start: Point,
        end: Point,
    },
    /// Counterclockwise arc from `start_angle` through `extent` radians.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        extent: f64,
    },
}

impl Element {
    pub fn length(&self) -> f64 {
        match *self {
            Element::Segment { start, end } => start.dist(end),
            Element::Arc { radius, extent, .. } => radius * extent,
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    /// Point at parameter `t ∈ [0, 1]`, uniform in arc length.
    pub fn point_at(&self, t: f64) -> Point {
        match *self {
            Element::Segment { start, end } => start + (end - start) * t,
            Element::Arc {
                center,
                radius,
                start_angle,
                extent,
            } => center + Point::polar(start_angle + t * extent) * radius,
        }
    }

    /// Contribution to `½∮(x dy - y dx)`.
    fn green_area(&self) -> f64 {
        match *self {
            Element::Segment { start, end } => 0.5 * start.cross(end),
            Element::Arc {
                center,
                radius,
                start_angle,
                extent,
            } => {
                let du = Point::polar(start_angle + extent) - Point::polar(start_angle);
                0.5 * (radius * center.cross(du) + radius * radius * extent)
            }
        }
    }
}

/// Convex closed curve of segments and circular arcs of one radius: the
/// Minkowski sum of a convex polygon (possibly degenerate) with a disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcPolygonJson", into = "ArcPolygonJson")]
pub struct ArcPolygon {
    radius: f64,
    inner: Vec<Point>,
    elements: Vec<Element>,
}

/// Wire form: `{"radius": R, "inner_vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcPolygonJson {
    pub radius: f64,
    pub inner_vertices: Vec<Point>,
}

impl TryFrom<ArcPolygonJson> for ArcPolygon {
    type Error = Error;
    fn try_from(j: ArcPolygonJson) -> Result<Self> {
        ArcPolygon::new(j.inner_vertices, j.radius)
    }
}

impl From<ArcPolygon> for ArcPolygonJson {
    fn from(a: ArcPolygon) -> Self {
        ArcPolygonJson {
            radius: a.radius,
            inner_vertices: a.inner,
        }
    }
}

impl ArcPolygon {
    /// `inner` is a counterclockwise convex vertex loop (one point gives a
    /// disk, two points a stadium).
    pub fn new(inner: Vec<Point>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius must be finite and >= 0, got {radius}"
            )));
        }
        let n = inner.len();
        if n == 0 || (radius == 0.0 && n < 3) {
            return Err(Error::TooFewVertices(n));
        }
        if let Some(index) = inner.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let scale = bbox_scale(&inner).max(radius);
        let eps = EPS_REL * scale;
        if n >= 2 {
            for i in 0..n {
                if inner[i].dist(inner[(i + 1) % n]) <= eps {
                    return Err(Error::DegenerateEdge { index: i });
                }
            }
        }
        if n >= 3 {
            for i in 0..n {
                let e_in = inner[i] - inner[(i + n - 1) % n];
                let e_out = inner[(i + 1) % n] - inner[i];
                if e_in.cross(e_out) < -eps * scale {
                    return Err(Error::NonConvex { index: i });
                }
            }
        }

        let mut elements = Vec::with_capacity(2 * n);
        if n == 1 {
            elements.push(Element::Arc {
                center: inner[0],
                radius,
                start_angle: 0.0,
                extent: TAU,
            });
        } else {
            let normals: Vec<Point> = (0..n)
                .map(|i| outward_normal(inner[i], inner[(i + 1) % n]))
                .collect();
            for i in 0..n {
                let n_in = normals[(i + n - 1) % n];
                let n_out = normals[i];
                if radius > 0.0 {
                    let mut extent = n_in.cross(n_out).atan2(n_in.dot(n_out));
                    if extent < 0.0 {
                        extent += TAU;
                    }
                    let start_angle = n_in.y.atan2(n_in.x);
                    elements.push(Element::Arc {
                        center: inner[i],
                        radius,
                        start_angle,
                        extent,
                    });
                }
                let j = (i + 1) % n;
                elements.push(Element::Segment {
                    start: inner[i] + n_out * radius,
                    end: inner[j] + n_out * radius,
                });
            }
        }
        Ok(ArcPolygon {
            radius,
            inner,
            elements,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Arc centers; the vertices of the polygon that was dilated.
    pub fn inner_vertices(&self) -> &[Point] {
        &self.inner
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Sum of arc extents (2π for a nondegenerate radius).
    pub fn total_arc_extent(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                Element::Arc { extent, .. } => *extent,
                Element::Segment { .. } => 0.0,
            })
            .sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.elements.iter().map(Element::length).sum()
    }

    /// Enclosed area, integrated element by element with Green's theorem.
    pub fn area(&self) -> f64 {
        self.elements.iter().map(Element::green_area).sum()
    }

    /// Perimeter-to-area ratio.
    pub fn ratio(&self) -> f64 {
        self.perimeter() / self.area()
    }

    pub fn translated(&self, t: Point) -> ArcPolygon {
        ArcPolygon::new(self.inner.iter().map(|&v| v + t).collect(), self.radius)
            .expect("translation preserves validity")
    }
}

/// `(perimeter, area)` of an arc-polygon.
pub fn arc_polygon_measures(a: &ArcPolygon) -> (f64, f64) {
    (a.perimeter(), a.area())
}

/// Steiner's formula for a convex polygon `q` dilated by `r`:
/// `(P + 2πr, |q| + P r + π r²)`.
pub fn steiner_measures(q: &Polygon, r: f64) -> (f64, f64) {
    let p = q.perimeter();
    (p + TAU * r, q.area() + p * r + PI * r * r)
}

/// Minkowski sum of a convex polygon with the closed disk of radius `r`.
pub fn minkowski_disk(p: &Polygon, r: f64) -> Result<ArcPolygon> {
    p.require_convex()?;
    ArcPolygon::new(p.vertices().to_vec(), r)
}

/// Certified containment test: `true` guarantees every boundary point of `a`
/// has signed clearance at least `-margin` from `outer`; `false` means some
/// boundary point is farther outside than `margin`. Uses the 1-Lipschitz
/// bound on the distance to `∂outer` with adaptive subdivision, which is
/// never coarser than uniform sampling at spacing `margin`.
pub fn contains_arc_polygon(outer: &Polygon, a: &ArcPolygon, margin: f64) -> bool {
    assert!(margin > 0.0, "margin must be positive");
    let clearance = |p: Point| outer.signed_boundary_distance(p);
    let min_len = margin * 1e-6;
    for e in a.elements() {
        let len = e.length();
        let mut stack = vec![(0.0f64, 1.0f64)];
        while let Some((t0, t1)) = stack.pop() {
            let sub_len = len * (t1 - t0);
            let d = clearance(e.point_at(0.5 * (t0 + t1)));
            if d < -margin {
                return false;
            }
            if d - 0.5 * sub_len >= -margin || sub_len <= min_len {
                continue;
            }
            let tm = 0.5 * (t0 + t1);
            stack.push((t0, tm));
            stack.push((tm, t1));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{loop_perimeter, regular_ngon};

    fn square(side: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(side, 0.0),
            Point::new(side, side),
            Point::new(0.0, side),
        ])
        .unwrap()
    }

    #[test]
    fn erode_square() {
        let q = inner_parallel(&square(1.0), 0.1).unwrap().unwrap();
        assert_eq!(q.len(), 4);
        assert!((q.area() - 0.64).abs() < 1e-14);
        assert!(q.centroid().dist(Point::new(0.5, 0.5)) < 1e-14);
        assert!(inner_parallel(&square(1.0), 0.5).unwrap().is_none());
        assert!(inner_parallel(&square(1.0), 0.7).unwrap().is_none());
        assert_eq!(inner_area(&square(1.0), 0.0).unwrap(), 1.0);
        for r in [0.01, 0.2, 0.37, 0.49] {
            let a = inner_area(&square(1.0), r).unwrap();
            assert!((a - (1.0 - 2.0 * r).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn erode_hexagon_is_similar() {
        let hex = regular_ngon(6).unwrap();
        let apothem = (1.0 / (6.0 * (PI / 6.0).tan())).sqrt();
        let q = inner_parallel(&hex, 0.2).unwrap().unwrap();
        assert_eq!(q.len(), 6);
        let ratio = (apothem - 0.2) / apothem;
        assert!((q.area() - ratio * ratio).abs() < 1e-12);
        assert!(q.centroid().norm() < 1e-12);
        let lens: Vec<f64> = q.edges().map(|(a, b)| a.dist(b)).collect();
        for l in &lens {
            assert!((l - lens[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn inradius_values() {
        assert!((inradius(&square(1.0)).unwrap() - 0.5).abs() < 1e-11);
        for n in 3..=10 {
            let apothem = (1.0 / (n as f64 * (PI / n as f64).tan())).sqrt();
            assert!((inradius(&regular_ngon(n).unwrap()).unwrap() - apothem).abs() < 1e-11);
        }
        let rect = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 0.5),
            Point::new(0.0, 0.5),
        ])
        .unwrap();
        assert!((inradius(&rect).unwrap() - 0.25).abs() < 1e-11);
    }

    #[test]
    fn nonconvex_rejected() {
        let dart = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 2.0),
            Point::new(0.5, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            inner_parallel(&dart, 0.1),
            Err(Error::NonConvex { .. })
        ));
        assert!(minkowski_disk(&dart, 0.1).is_err());
    }

    #[test]
    fn rounded_square() {
        let a = minkowski_disk(&square(1.0), 0.1).unwrap();
        let (p, area) = arc_polygon_measures(&a);
        assert!((p - (4.0 + 0.2 * PI)).abs() < 1e-13);
        assert!((area - (1.0 + 0.4 + 0.01 * PI)).abs() < 1e-13);
        let s = 2.5;
        let b = minkowski_disk(&square(s), 0.3).unwrap();
        assert!((b.perimeter() - (4.0 * s + TAU * 0.3)).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_is_polygon() {
        let a = minkowski_disk(&square(1.0), 0.0).unwrap();
        assert!(a
            .elements()
            .iter()
            .all(|e| matches!(e, Element::Segment { .. })));
        assert_eq!(a.elements().len(), 4);
        assert!((a.perimeter() - 4.0).abs() < 1e-15);
        assert!((a.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hexagon_arcs() {
        let a = minkowski_disk(&regular_ngon(6).unwrap(), 0.17).unwrap();
        let arcs: Vec<f64> = a
            .elements()
            .iter()
            .filter_map(|e| match e {
                Element::Arc { extent, .. } => Some(*extent),
                _ => None,
            })
            .collect();
        assert_eq!(arcs.len(), 6);
        for x in arcs {
            assert!((x - PI / 3.0).abs() < 1e-12);
        }
        assert!((a.total_arc_extent() - TAU).abs() < 1e-12);
    }

    #[test]
    fn elements_are_chained() {
        let a = minkowski_disk(&regular_ngon(7).unwrap(), 0.21).unwrap();
        let m = a.elements().len();
        for i in 0..m {
            let e = a.elements()[i];
            let f = a.elements()[(i + 1) % m];
            assert!(e.end().dist(f.start()) < 1e-12);
        }
    }

    #[test]
    fn degenerate_inner_sets() {
        let disk = ArcPolygon::new(vec![Point::new(1.0, 2.0)], 0.5).unwrap();
        assert!((disk.area() - PI * 0.25).abs() < 1e-14);
        assert!((disk.perimeter() - PI).abs() < 1e-14);
        let stadium =
            ArcPolygon::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0)], 0.5).unwrap();
        assert!((stadium.area() - (2.0 + PI * 0.25)).abs() < 1e-14);
        assert!((stadium.perimeter() - (4.0 + PI)).abs() < 1e-14);
    }

    #[test]
    fn containment() {
        let sq = square(1.0);
        let inner = inner_parallel(&sq, 0.25).unwrap().unwrap();
        let c = minkowski_disk(&inner, 0.25).unwrap();
        assert!(contains_arc_polygon(&sq, &c, DEFAULT_CONTAINMENT_MARGIN));
        let far = c.translated(Point::new(5.0, 0.0));
        assert!(!contains_arc_polygon(&sq, &far, DEFAULT_CONTAINMENT_MARGIN));
        let slight = c.translated(Point::new(1e-3, 0.0));
        assert!(!contains_arc_polygon(
            &sq,
            &slight,
            DEFAULT_CONTAINMENT_MARGIN
        ));
        assert!(contains_arc_polygon(&sq, &slight, 2e-3));
    }

    #[test]
    fn label_lengths_track_edges() {
        let hex = regular_ngon(6).unwrap();
        let c = clip_inward(&hex, 0.3).unwrap();
        let lens = c.label_lengths(6);
        assert!(lens.iter().all(|&l| l > 0.1));
        assert!((lens.iter().sum::<f64>() - loop_perimeter(&c.vertices)).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let a = minkowski_disk(&square(1.0), 0.1).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(
            s.starts_with(r#"{"radius":0.1,"inner_vertices":[[0.0,0.0]"#),
            "{s}"
        );
        let b: ArcPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
