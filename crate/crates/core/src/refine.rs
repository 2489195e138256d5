//! Local minimization of the boundary Hausdorff distance over rigid motions.
//!
//! The distance is a supremum over boundary points of a distance to the other
//! boundary. It is replaced by a maximum over a finite set of boundary points
//! (edge samples plus the maximizers found by the certified evaluation), which
//! is minimized by steepest descent along the least-norm element of the
//! convex hull of the nearly active gradients. Maximizers of the true distance
//! at each new pose are added to the set until the two agree.

use crate::geometry::{closest_on_segment, Point, Polygon, RigidMotion};
use crate::metrics::directed_hausdorff_witness;

const EDGE_SAMPLES: usize = 7;
const MAX_EXCHANGES: usize = 40;
const MAX_DESCENT_STEPS: usize = 400;

type Vec3 = [f64; 3];

fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Point of least norm in the convex hull of `pts` (Wolfe's algorithm).
fn min_norm_hull(pts: &[Vec3]) -> Vec3 {
    let combine = |idx: &[usize], w: &[f64]| -> Vec3 {
        let mut x = [0.0; 3];
        for (&i, &wi) in idx.iter().zip(w) {
            for k in 0..3 {
                x[k] += wi * pts[i][k];
            }
        }
        x
    };
    let first = (0..pts.len())
        .min_by(|&i, &j| dot3(pts[i], pts[i]).total_cmp(&dot3(pts[j], pts[j])))
        .expect("nonempty point set");
    let max_sq = pts.iter().map(|p| dot3(*p, *p)).fold(0.0, f64::max);
    let mut set = vec![first];
    let mut weights = vec![1.0];
    let mut x = pts[first];
    for _ in 0..100 {
        let (j, xj) = (0..pts.len())
            .map(|j| (j, dot3(x, pts[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty point set");
        if dot3(x, x) - xj <= 1e-14 * max_sq || set.contains(&j) || set.len() == 4 {
            break;
        }
        set.push(j);
        weights.push(0.0);
        loop {
            let mu = affine_minimizer(pts, &set);
            if mu.iter().all(|&m| m > 0.0) {
                weights = mu;
                x = combine(&set, &weights);
                break;
            }
            let mut theta: f64 = 1.0;
            for (w, m) in weights.iter().zip(&mu) {
                if *m <= 0.0 && w - m > 0.0 {
                    theta = theta.min(w / (w - m));
                }
            }
            for (w, m) in weights.iter_mut().zip(&mu) {
                *w += theta * (m - *w);
            }
            let mut k = 0;
            while k < set.len() {
                if weights[k] <= 1e-15 {
                    set.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            x = combine(&set, &weights);
            if set.len() <= 1 {
                break;
            }
        }
    }
    x
}

/// Weights summing to one that minimize `|Σ μ_i p_i|` over the affine hull.
fn affine_minimizer(pts: &[Vec3], set: &[usize]) -> Vec<f64> {
    let k = set.len();
    let dim = k + 1;
    let mut m = vec![vec![0.0; dim + 1]; dim];
    for r in 0..k {
        for c in 0..k {
            m[r][c] = dot3(pts[set[r]], pts[set[c]]);
        }
        m[r][r] += 1e-15;
        m[r][k] = 1.0;
        m[k][r] = 1.0;
    }
    m[k][dim] = 1.0;
    for col in 0..dim {
        let piv = (col..dim)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        if d.abs() < 1e-300 {
            continue;
        }
        for r in 0..dim {
            if r != col {
                let f = m[r][col] / d;
                if f != 0.0 {
                    let pivot_row = m[col].clone();
                    for (x, p) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    (0..k).map(|r| m[r][dim] / m[r][r]).collect()
}

struct Problem<'a> {
    /// Moving polygon in its own coordinates.
    moving: &'a Polygon,
    fixed_edges: Vec<(Point, Point)>,
    /// Sample points on the moving boundary, in moving coordinates.
    material: Vec<Point>,
    /// Sample points on the fixed boundary.
    anchors: Vec<Point>,
    reflect: bool,
    /// Length used to make the angle commensurate with translations.
    length: f64,
}

fn nearest(p: Point, edges: &[(Point, Point)]) -> (f64, Point) {
    let mut best = (f64::INFINITY, p);
    for &(a, b) in edges {
        let q = closest_on_segment(p, a, b);
        let d = p.dist(q);
        if d < best.0 {
            best = (d, q);
        }
    }
    best
}

impl Problem<'_> {
    fn motion(&self, z: Vec3) -> RigidMotion {
        RigidMotion::new(z[0] / self.length, Point::new(z[1], z[2]), self.reflect)
    }

    fn max_value(&self, z: Vec3) -> f64 {
        self.pieces(z, f64::INFINITY).0
    }

    /// Largest sampled distance, and the gradients of every sample within
    /// `delta` of it.
    fn pieces(&self, z: Vec3, delta: f64) -> (f64, Vec<(f64, Vec3)>) {
        let m = self.motion(z);
        let t = m.translation;
        let moved_edges: Vec<(Point, Point)> = self
            .moving
            .edges()
            .map(|(a, b)| (m.apply(a), m.apply(b)))
            .collect();
        let mut out: Vec<(f64, Vec3)> = Vec::new();
        let mut best = 0.0f64;
        let mut push = |f: f64, g: Option<Vec3>, out: &mut Vec<(f64, Vec3)>| {
            best = best.max(f);
            if let Some(g) = g {
                out.push((f, g));
            }
        };
        let want = delta.is_finite();
        for &mp in &self.material {
            let y = m.apply(mp);
            let (f, q) = nearest(y, &self.fixed_edges);
            let g = (want && f > 0.0).then(|| {
                let u = (y - q) * (1.0 / f);
                let v = Point::new(-(y.y - t.y), y.x - t.x);
                [u.dot(v) / self.length, u.x, u.y]
            });
            push(f, g, &mut out);
        }
        for &b in &self.anchors {
            let (f, q) = nearest(b, &moved_edges);
            let g = (want && f > 0.0).then(|| {
                let u = (b - q) * (1.0 / f);
                let v = Point::new(-(q.y - t.y), q.x - t.x);
                [-u.dot(v) / self.length, -u.x, -u.y]
            });
            push(f, g, &mut out);
        }
        if want {
            out.retain(|(f, _)| *f >= best - delta);
        }
        (best, out)
    }

    /// Local minimizer of the sampled objective from `z`.
    fn descend(&self, mut z: Vec3, delta0: f64, delta_min: f64) -> Vec3 {
        let mut delta = delta0;
        let negligible = 1e-3 * delta_min;
        for _ in 0..MAX_DESCENT_STEPS {
            let (f, active) = self.pieces(z, delta);
            let grads: Vec<Vec3> = active.iter().map(|p| p.1).collect();
            if grads.is_empty() {
                break;
            }
            let g = min_norm_hull(&grads);
            let gn = dot3(g, g).sqrt();
            if gn <= 1e-6 {
                if delta <= delta_min {
                    break;
                }
                delta *= 0.1;
                continue;
            }
            // Step so the linear model of every inactive sample stays below the maximum.
            let mut alpha = (delta / gn)
                .max(1e-3 * self.length / gn)
                .min(0.1 * self.length / gn);
            let mut moved = false;
            while alpha * gn > negligible {
                let trial = [
                    z[0] - alpha * g[0],
                    z[1] - alpha * g[1],
                    z[2] - alpha * g[2],
                ];
                let value = self.max_value(trial);
                if value <= f - 0.25 * alpha * gn * gn && f - value > negligible {
                    z = trial;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                if delta <= delta_min {
                    break;
                }
                delta *= 0.1;
            }
        }
        z
    }
}

fn boundary_samples(p: &Polygon) -> Vec<Point> {
    let mut out = Vec::with_capacity(p.len() * (EDGE_SAMPLES + 1));
    for (a, b) in p.edges() {
        out.push(a);
        for k in 1..=EDGE_SAMPLES {
            out.push(a + (b - a) * (k as f64 / (EDGE_SAMPLES + 1) as f64));
        }
    }
    out
}

/// Polishes `start` (a motion of `moving`) towards a local minimizer of the
/// boundary Hausdorff distance to `fixed`. Returns the best motion seen with
/// its distance, evaluated to within `err_tol`.
pub(crate) fn refine_hausdorff(
    moving: &Polygon,
    fixed: &Polygon,
    start: RigidMotion,
    err_tol: f64,
) -> (RigidMotion, f64) {
    let length = moving.scale().max(fixed.scale());
    let mut prob = Problem {
        moving,
        fixed_edges: fixed.edges().collect(),
        material: boundary_samples(moving),
        anchors: boundary_samples(fixed),
        reflect: start.reflect,
        length,
    };
    let true_value = |m: &RigidMotion| -> (f64, Point, Point) {
        let moved = moving.apply_motion(m);
        let (ab, _, wa) = directed_hausdorff_witness(&moved, fixed, err_tol);
        let (ba, _, wb) = directed_hausdorff_witness(fixed, &moved, err_tol);
        (ab.max(ba), m.inverse().apply(wa), wb)
    };
    let mut z = [
        start.angle * length,
        start.translation.x,
        start.translation.y,
    ];
    let (mut best_value, wa, wb) = true_value(&start);
    let mut best = start;
    prob.material.push(wa);
    prob.anchors.push(wb);
    for _ in 0..MAX_EXCHANGES {
        let sampled_before = prob.max_value(z);
        let next = prob.descend(z, 1e-2 * length, 1e-2 * err_tol.max(1e-12 * length));
        let m = prob.motion(next);
        let (value, wa, wb) = true_value(&m);
        if value < best_value {
            best_value = value;
            best = m;
        }
        let sampled = prob.max_value(next);
        let step = (0..3).map(|k| (next[k] - z[k]).abs()).fold(0.0, f64::max);
        z = next;
        // Sampled and true maxima agree and the pose no longer moves.
        if value - sampled <= 2.0 * err_tol
            && step <= err_tol
            && sampled_before - sampled <= err_tol
        {
            break;
        }
        prob.material.push(wa);
        prob.anchors.push(wb);
    }
    (best, best_value)
}
