//! Distances between polygons: certified Hausdorff distance between
//! boundaries and exact symmetric-difference area.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    segment_distance, segment_segment_closest, signed_area, Point, Polygon, RigidMotion,
};

/// Default Hausdorff tolerance relative to the polygon scale.
pub const DEFAULT_ERR_TOL_REL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Hausdorff distance between the boundaries.
    Hausdorff,
    /// Area of the symmetric difference.
    L1,
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hausdorff" => Ok(Metric::Hausdorff),
            "l1" => Ok(Metric::L1),
            other => Err(Error::InvalidArgument(format!("unknown metric `{other}`"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hausdorff => "hausdorff",
            Metric::L1 => "l1",
        })
    }
}

/// A distance known to lie in `[estimate - error_bound, estimate + error_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedDistance {
    pub estimate: f64,
    pub error_bound: f64,
}

struct Interval {
    upper: f64,
    edge: usize,
    t0: f64,
    t1: f64,
    g0: usize,
    g1: usize,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.edge.cmp(&self.edge))
            .then_with(|| other.t0.total_cmp(&self.t0))
    }
}

/// Directed Hausdorff distance `sup_{x ∈ ∂a} dist(x, ∂b)` as `(lower, upper)`
/// with `upper - lower <= tol`.
fn directed_hausdorff(a: &Polygon, b: &Polygon, tol: f64) -> (f64, f64) {
    let (lower, upper, _) = directed_hausdorff_witness(a, b, tol);
    (lower, upper)
}

/// [`directed_hausdorff`] together with a point of `∂a` realizing the lower bound.
///
/// Branch and bound over sub-segments of `∂a`. Along a segment each
/// `x ↦ dist(x, edge_j)` is convex, so on `[s, t]` the pointwise minimum is
/// bounded by `min_j max(g_j(s), g_j(t))`. Realized values at evaluated
/// points give the lower bound.
pub(crate) fn directed_hausdorff_witness(a: &Polygon, b: &Polygon, tol: f64) -> (f64, f64, Point) {
    let edges_b: Vec<(Point, Point)> = b.edges().collect();
    let m = edges_b.len();
    let mut store: Vec<f64> = Vec::with_capacity(m * 64);
    let eval = |p: Point, store: &mut Vec<f64>| -> (usize, f64) {
        let idx = store.len() / m;
        let mut best = f64::INFINITY;
        for &(s, e) in &edges_b {
            let d = segment_distance(p, s, e);
            best = best.min(d);
            store.push(d);
        }
        (idx, best)
    };
    let bound = |store: &[f64], i: usize, j: usize| -> f64 {
        let gi = &store[i * m..(i + 1) * m];
        let gj = &store[j * m..(j + 1) * m];
        gi.iter()
            .zip(gj)
            .map(|(x, y)| x.max(*y))
            .fold(f64::INFINITY, f64::min)
    };

    let n = a.len();
    let mut lower: f64 = 0.0;
    let mut witness = a.vertex(0);
    let mut vertex_idx = Vec::with_capacity(n);
    for &v in a.vertices() {
        let (idx, f) = eval(v, &mut store);
        if f > lower {
            lower = f;
            witness = v;
        }
        vertex_idx.push(idx);
    }
    let mut heap = BinaryHeap::with_capacity(4 * n);
    for i in 0..n {
        let (g0, g1) = (vertex_idx[i], vertex_idx[(i + 1) % n]);
        heap.push(Interval {
            upper: bound(&store, g0, g1),
            edge: i,
            t0: 0.0,
            t1: 1.0,
            g0,
            g1,
        });
    }

    let min_dt = 1e-14;
    let mut stuck: f64 = 0.0;
    while let Some(iv) = heap.pop() {
        if iv.upper <= lower + tol {
            return (lower, iv.upper.max(lower).max(stuck), witness);
        }
        if iv.t1 - iv.t0 <= min_dt {
            stuck = stuck.max(iv.upper);
            continue;
        }
        let (s, e) = (a.vertex(iv.edge), a.vertex(iv.edge + 1));
        let tm = 0.5 * (iv.t0 + iv.t1);
        let x = s + (e - s) * tm;
        let (gm, f) = eval(x, &mut store);
        if f > lower {
            lower = f;
            witness = x;
        }
        heap.push(Interval {
            upper: bound(&store, iv.g0, gm),
            edge: iv.edge,
            t0: iv.t0,
            t1: tm,
            g0: iv.g0,
            g1: gm,
        });
        heap.push(Interval {
            upper: bound(&store, gm, iv.g1),
            edge: iv.edge,
            t0: tm,
            t1: iv.t1,
            g0: gm,
            g1: iv.g1,
        });
    }
    (lower, lower.max(stuck), witness)
}

/// Symmetric Hausdorff distance between the boundaries of `a` and `b`,
/// certified to within `err_tol`.
pub fn hausdorff_boundary(a: &Polygon, b: &Polygon, err_tol: f64) -> CertifiedDistance {
    assert!(err_tol > 0.0, "err_tol must be positive");
    let (lo_ab, up_ab) = directed_hausdorff(a, b, err_tol);
    let (lo_ba, up_ba) = directed_hausdorff(b, a, err_tol);
    let estimate = lo_ab.max(lo_ba);
    let upper = up_ab.max(up_ba);
    CertifiedDistance {
        estimate,
        error_bound: (upper - estimate).max(0.0),
    }
}

/// Hausdorff distance with the default tolerance `1e-7 * scale`.
pub fn hausdorff_default(a: &Polygon, b: &Polygon) -> CertifiedDistance {
    hausdorff_boundary(a, b, DEFAULT_ERR_TOL_REL * a.scale().max(b.scale()))
}

/// Clips the convex loop `subject` by the counterclockwise convex loop `clip`.
fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    let k = clip.len();
    for i in 0..k {
        if out.len() < 3 {
            return Vec::new();
        }
        let a = clip[i];
        let d = clip[(i + 1) % k] - a;
        let input = std::mem::take(&mut out);
        let m = input.len();
        for j in 0..m {
            let p = input[j];
            let q = input[(j + 1) % m];
            let sp = d.cross(p - a);
            let sq = d.cross(q - a);
            if sp >= 0.0 {
                out.push(p);
                if sq < 0.0 {
                    out.push(p + (q - p) * (sp / (sp - sq)));
                }
            } else if sq >= 0.0 {
                out.push(p + (q - p) * (sp / (sp - sq)));
            }
        }
    }
    out
}

fn convex_intersection_area(a: &[Point], b: &[Point]) -> f64 {
    signed_area(&clip_convex(a, b)).max(0.0)
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
pub fn triangulate(p: &Polygon) -> Vec<[Point; 3]> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    let v = p.vertices();
    let mut tris = Vec::with_capacity(p.len().saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (v[idx[(i + m - 1) % m]], v[idx[i]], v[idx[(i + 1) % m]]);
            if (b - a).cross(c - b) <= 0.0 {
                return false;
            }
            idx.iter().all(|&k| {
                let q = v[k];
                if q == a || q == b || q == c {
                    return true;
                }
                !((b - a).cross(q - a) >= 0.0
                    && (c - b).cross(q - b) >= 0.0
                    && (a - c).cross(q - c) >= 0.0)
            })
        });
        // A simple polygon always has an ear; fall back to the most convex
        // vertex if rounding hides it.
        let i = ear.unwrap_or_else(|| {
            (0..m)
                .max_by(|&i, &j| {
                    let turn = |i: usize| {
                        let (a, b, c) = (v[idx[(i + m - 1) % m]], v[idx[i]], v[idx[(i + 1) % m]]);
                        (b - a).cross(c - b)
                    };
                    turn(i).total_cmp(&turn(j))
                })
                .expect("nonempty")
        });
        tris.push([v[idx[(i + m - 1) % m]], v[idx[i]], v[idx[(i + 1) % m]]]);
        idx.remove(i);
    }
    tris.push([v[idx[0]], v[idx[1]], v[idx[2]]]);
    tris
}

fn convex_pieces(p: &Polygon) -> Vec<Vec<Point>> {
    if p.is_convex() {
        vec![p.vertices().to_vec()]
    } else {
        triangulate(p).into_iter().map(|t| t.to_vec()).collect()
    }
}

/// Area of `a ∩ b`, exact up to rounding.
pub fn intersection_area(a: &Polygon, b: &Polygon) -> f64 {
    let pa = convex_pieces(a);
    let pb = convex_pieces(b);
    let mut total = 0.0;
    for x in &pa {
        for y in &pb {
            total += convex_intersection_area(x, y);
        }
    }
    total
}

/// `|a Δ b| = |a| + |b| - 2|a ∩ b|`.
pub fn symmetric_difference_area(a: &Polygon, b: &Polygon) -> f64 {
    (a.area() + b.area() - 2.0 * intersection_area(a, b)).max(0.0)
}

/// Distance between the two boundaries together with the closest points
/// (`0` when they meet).
pub fn boundary_gap(a: &Polygon, b: &Polygon) -> (f64, Point, Point) {
    let mut best = (f64::INFINITY, Point::ORIGIN, Point::ORIGIN);
    for (s, e) in a.edges() {
        for (u, w) in b.edges() {
            let c = segment_segment_closest(s, e, u, w);
            if c.0 < best.0 {
                best = c;
            }
        }
    }
    best
}

/// Translation of `b` that brings its boundary into contact with `∂a`;
/// identity when the boundaries already meet.
pub fn boundary_touch_normalize(a: &Polygon, b: &Polygon) -> RigidMotion {
    let (gap, pa, pb) = boundary_gap(a, b);
    let eps = a.eps_geom().max(b.eps_geom());
    if gap <= eps {
        RigidMotion::IDENTITY
    } else {
        RigidMotion::translation(pa - pb)
    }
}

/// Distance between two polygons in the given metric; Hausdorff uses `err_tol`.
pub fn distance(a: &Polygon, b: &Polygon, metric: Metric, err_tol: f64) -> CertifiedDistance {
    match metric {
        Metric::Hausdorff => hausdorff_boundary(a, b, err_tol),
        Metric::L1 => CertifiedDistance {
            estimate: symmetric_difference_area(a, b),
            error_bound: 0.0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_ngon;

    fn square_at(x: f64, y: f64, side: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(x, y),
            Point::new(x + side, y),
            Point::new(x + side, y + side),
            Point::new(x, y + side),
        ])
        .unwrap()
    }

    #[test]
    fn identical_squares() {
        let s = square_at(0.0, 0.0, 1.0);
        let d = hausdorff_boundary(&s, &s, 1e-7);
        assert_eq!(d.estimate, 0.0);
        assert!(d.error_bound <= 1e-7);
        assert_eq!(symmetric_difference_area(&s, &s), 0.0);
    }

    #[test]
    fn translated_square() {
        let s = square_at(0.0, 0.0, 1.0);
        let t = square_at(0.1, 0.0, 1.0);
        let d = hausdorff_boundary(&s, &t, 1e-9);
        assert!((d.estimate - 0.1).abs() <= d.error_bound + 1e-15);
        for tt in [0.0, 0.25, 0.5, 1.0] {
            let u = square_at(tt, 0.0, 1.0);
            assert!((symmetric_difference_area(&s, &u) - 2.0 * tt).abs() < 1e-12);
        }
    }

    #[test]
    fn concentric_squares() {
        let s = square_at(0.0, 0.0, 1.0);
        let big = square_at(-0.2, -0.2, 1.4);
        let d = hausdorff_boundary(&s, &big, 1e-9);
        // Edges are 0.2 apart but the outer corners sit 0.2√2 from the inner ones.
        assert!((d.estimate - 0.2 * 2f64.sqrt()).abs() <= 1e-9);
    }

    #[test]
    fn disjoint_squares() {
        let s = square_at(0.0, 0.0, 1.0);
        let far = square_at(5.0, 5.0, 1.0);
        assert!((symmetric_difference_area(&s, &far) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn nonconvex_intersection() {
        // L-shape: unit square with the top-right quarter removed.
        let l = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(0.5, 0.5),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(triangulate(&l).len(), 4);
        let s = square_at(0.0, 0.0, 1.0);
        assert!((intersection_area(&l, &s) - 0.75).abs() < 1e-14);
        assert!((symmetric_difference_area(&l, &s) - 0.25).abs() < 1e-14);
        assert!((intersection_area(&l, &l) - 0.75).abs() < 1e-14);
    }

    #[test]
    fn touch_normalization() {
        let a = square_at(0.0, 0.0, 1.0);
        let b = square_at(0.5, 0.5, 1.0);
        assert_eq!(boundary_touch_normalize(&a, &b), RigidMotion::IDENTITY);
        let far = square_at(4.0, 0.0, 1.0);
        let m = boundary_touch_normalize(&a, &far);
        assert!((m.translation.norm() - 3.0).abs() < 1e-14);
        let moved = far.apply_motion(&m);
        assert!(boundary_gap(&a, &moved).0 < 1e-12);
        let hd = hausdorff_default(&a, &moved).estimate;
        assert!(hd <= a.diameter() + moved.diameter());
    }

    #[test]
    fn hexagon_vs_rotated() {
        let h = regular_ngon(6).unwrap();
        let r = h.apply_motion(&RigidMotion::rotation(std::f64::consts::PI / 6.0));
        let d = hausdorff_boundary(&h, &r, 1e-10);
        // Vertex of one at circumradius, other boundary at apothem in that direction.
        let circ = h.vertices()[0].norm();
        let apothem = circ * (std::f64::consts::PI / 6.0).cos();
        assert!((d.estimate - (circ - apothem)).abs() <= 1e-9);
    }

    #[test]
    fn metric_parse() {
        assert_eq!("hausdorff".parse::<Metric>().unwrap(), Metric::Hausdorff);
        assert_eq!("l1".parse::<Metric>().unwrap(), Metric::L1);
        assert!("linf".parse::<Metric>().is_err());
    }
}
