use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{regular_ngon, signed_area, Point, Polygon};
use crate::roots::bisect_predicate;

const MAX_ATTEMPTS: usize = 1_000_000;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of ensemble item `index`: `splitmix64(seed ^ splitmix64(index))`.
/// Items are independent of evaluation order.
pub fn item_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Convex hull by the monotone chain, counterclockwise, collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Random convex polygon with exactly `n` sides and unit area, centered at its
/// centroid. Direction angles are uniform on the circle and radii uniform in
/// `[0.5, 1]`; draws whose hull loses a vertex are rejected.
pub fn random_convex_ngon(n: usize, seed: u64) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon needs n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = (0..n)
            .map(|i| {
                let next = if i + 1 == n {
                    angles[0] + TAU
                } else {
                    angles[i + 1]
                };
                next - angles[i]
            })
            .fold(f64::INFINITY, f64::min);
        let points: Vec<Point> = angles
            .iter()
            .map(|&a| Point::polar(a) * rng.gen_range(0.5..1.0))
            .collect();
        if min_gap <= 1e-6 {
            continue;
        }
        let hull = convex_hull(&points);
        if hull.len() != n {
            continue;
        }
        let Ok(p) = Polygon::new(hull) else { continue };
        if !p.is_convex() {
            continue;
        }
        let p = p.translated(-p.centroid());
        return Ok(p.normalize_area());
    }
    Err(Error::InvalidArgument(format!(
        "no convex {n}-gon found in {MAX_ATTEMPTS} attempts"
    )))
}

fn perturbed_vertices(n: usize, eps: f64) -> Vec<Point> {
    let base = regular_ngon(n).expect("n >= 3");
    let mut v = base.vertices().to_vec();
    let out_dir = v[0] * (1.0 / v[0].norm());
    v[0] = v[0] + out_dir * eps;
    let m = n / 2;
    let in_dir = v[m] * (1.0 / v[m].norm());
    let original = v[m];
    // Area is affine in the position of a single vertex.
    let area_at = |s: f64, v: &mut Vec<Point>| {
        v[m] = original - in_dir * s;
        signed_area(v)
    };
    let a0 = area_at(0.0, &mut v);
    let a1 = area_at(1.0, &mut v);
    let mut s = (1.0 - a0) / (a1 - a0);
    let a = area_at(s, &mut v);
    s += (1.0 - a) / (a1 - a0);
    area_at(s, &mut v);
    v
}

fn perturbed_is_convex(n: usize, eps: f64) -> bool {
    Polygon::new(perturbed_vertices(n, eps)).is_ok_and(|p| p.len() == n && p.is_convex())
}

/// Largest perturbation for which [`perturb_ngon`] stays convex (to 1e-12).
pub fn perturb_eps_max(n: usize) -> Result<f64> {
    let base = regular_ngon(n)?;
    let circumradius = base.vertices()[0].norm();
    let hi = 4.0 * circumradius;
    if perturbed_is_convex(n, hi) {
        return Ok(hi);
    }
    Ok(bisect_predicate(
        |e| perturbed_is_convex(n, e),
        0.0,
        hi,
        1e-12,
    ))
}

/// Area-preserving perturbation of the unit-area regular `n`-gon: vertex 0
/// moves radially outward by `eps` and vertex `n/2` radially inward by the
/// amount that restores unit area.
pub fn perturb_ngon(n: usize, eps: f64) -> Result<Polygon> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eps must be finite and >= 0, got {eps}"
        )));
    }
    if eps == 0.0 {
        return regular_ngon(n);
    }
    regular_ngon(n)?;
    let max = perturb_eps_max(n)?;
    if eps >= max || !perturbed_is_convex(n, eps) {
        return Err(Error::EpsTooLarge { eps, max });
    }
    Polygon::new(perturbed_vertices(n, eps))
}

/// Area of the tentacle polygon of parameter `k`: `3/2 - 1/(4k²)`.
pub fn tentacle_area(k: f64) -> f64 {
    1.5 - 0.25 / (k * k)
}

/// Unit square with the corner `(1, 1)` replaced by a spike: a triangle of
/// base `1/k` (cut at distance `1/(√2 k)` from the corner along both edges)
/// is removed and a triangle on the same base with height `k`, pointing along
/// the diagonal, is added. Six vertices, simple, not convex.
pub fn tentacle_polygon(k: f64) -> Result<Polygon> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tentacle parameter must be >= 1, got {k}"
        )));
    }
    let cut = FRAC_1_SQRT_2 / k;
    let mid = Point::new(1.0 - 0.5 * cut, 1.0 - 0.5 * cut);
    let apex = mid + Point::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * k;
    Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0 - cut),
        apex,
        Point::new(1.0 - cut, 1.0),
        Point::new(0.0, 1.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_ngon_contract() {
        for n in 3..=10 {
            for seed in 0..20 {
                let p = random_convex_ngon(n, seed).unwrap();
                assert_eq!(p.len(), n);
                assert!(p.is_convex());
                assert!((p.area() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn random_ngon_is_deterministic() {
        let a = random_convex_ngon(7, 42).unwrap();
        let b = random_convex_ngon(7, 42).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        let c = random_convex_ngon(7, 43).unwrap();
        assert_ne!(a.vertices(), c.vertices());
    }

    #[test]
    fn seeds_differ_by_index() {
        let s: Vec<u64> = (0..100).map(|i| item_seed(7, i)).collect();
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), s.len());
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(signed_area(&h) > 0.0);
    }

    #[test]
    fn perturbation_keeps_area() {
        assert_eq!(perturb_ngon(6, 0.0).unwrap(), regular_ngon(6).unwrap());
        for n in 3..=9 {
            for eps in [0.01, 0.05] {
                let p = perturb_ngon(n, eps).unwrap();
                assert!((p.area() - 1.0).abs() < 1e-12, "n={n} eps={eps}");
                assert!(p.is_convex());
                assert_eq!(p.len(), n);
            }
        }
    }

    #[test]
    fn perturbation_limit() {
        let max = perturb_eps_max(6).unwrap();
        assert!(max > 0.05);
        assert!(matches!(
            perturb_ngon(6, max * 1.01),
            Err(Error::EpsTooLarge { .. })
        ));
        assert!(perturb_ngon(6, max * 0.99).is_ok());
        assert!(perturb_ngon(6, -0.1).is_err());
    }

    #[test]
    fn tentacle_shape() {
        let t = tentacle_polygon(10.0).unwrap();
        assert_eq!(t.len(), 6);
        assert!(!t.is_convex());
        assert!((t.area() - tentacle_area(10.0)).abs() < 1e-12);
        assert!((t.area() - 1.4975).abs() < 1e-12);
        assert!(t.diameter() >= 10.0);
        assert!(t.inner_angles().iter().any(|&g| g > std::f64::consts::PI));
        assert!(t.tau().is_err());
        for k in [2.0, 3.0, 50.0, 1e3, 1e4] {
            let t = tentacle_polygon(k).unwrap();
            assert!((t.area() - tentacle_area(k)).abs() < 1e-12 * k);
        }
    }
}
