//! Cheeger constant and Cheeger set of convex polygons.
//!
//! For a convex polygon the Cheeger set is the inner parallel set at distance
//! `R` dilated by a disk of radius `R`, with `R = 1/h`. Since the dilated set
//! has area `|Ω_R| + P(Ω_R) R + π R²` and perimeter `P(Ω_R) + 2πR`, the ratio
//! equals `1/R` exactly when `|Ω_R| = π R²`. That scalar equation is solved
//! by bracketed root finding (the radius-root method). When the polygon is
//! Cheeger regular the closed form
//! `h = (P + √(P² - 4τ|Ω|)) / (2|Ω|)` gives an independent second route.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{regular_perimeter, Polygon};
use crate::offset::{
    clean_convex_loop, clip_inward, contains_arc_polygon, inner_area_unchecked, inradius_unchecked,
    minkowski_disk, ArcPolygon, DEFAULT_CONTAINMENT_MARGIN,
};
use crate::roots::brent;

/// Cheeger constant of the unit-area disk, `2√π`.
pub fn h_ball() -> f64 {
    2.0 * PI.sqrt()
}

/// Cheeger constant of the unit-area regular `n`-gon, `(P₀ + 2√π)/2`.
pub fn regular_cheeger_constant(n: usize) -> f64 {
    0.5 * (regular_perimeter(n) + h_ball())
}

/// Which computation `cheeger_constant` should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Radius root always, closed form as a cross-check when it applies.
    #[default]
    Auto,
    /// Closed form only; fails on polygons that are not Cheeger regular.
    Formula,
    /// Radius root only.
    Root,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "formula" => Ok(Method::Formula),
            "root" => Ok(Method::Root),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// The computation that produced a report's `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodUsed {
    Formula,
    RadiusRoot,
    Both,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodUsed::Formula => "formula",
            MethodUsed::RadiusRoot => "radius-root",
            MethodUsed::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerReport {
    pub h: f64,
    pub radius: f64,
    /// Inner parallel set at `radius`; the arc centers of the Cheeger set.
    #[serde(skip)]
    pub inner_polygon: Polygon,
    pub cheeger_regular: bool,
    pub method: MethodUsed,
    /// `| |Ω_R| - πR² |` at the computed radius (radius-root only).
    pub residual: Option<f64>,
    /// `|h_formula - h_root|` when both routes ran.
    pub cross_error: Option<f64>,
}

struct RootSolution {
    radius: f64,
    residual: f64,
    regular: bool,
    inner: Polygon,
}

fn solve_radius(p: &Polygon) -> Result<RootSolution> {
    p.require_convex()?;
    let eps = p.eps_geom();
    let rho = inradius_unchecked(p);
    let f = |r: f64| inner_area_unchecked(p, r) - PI * r * r;
    let lo = eps.min(0.5 * rho);
    let mut hi = rho - eps;
    if !(f(hi) < 0.0) {
        hi = rho;
    }
    // The root lies in [ρ/2, ρ), so a tolerance relative to ρ is relative to the root.
    let radius = brent(f, lo, hi, 1e-15 * rho)?;
    let residual = f(radius).abs();
    let clipped = clip_inward(p, radius).ok_or_else(|| {
        Error::RootFinding("empty inner parallel set at the Cheeger radius".into())
    })?;
    let regular = clipped.label_lengths(p.len()).iter().all(|&l| l > eps);
    let inner = clean_convex_loop(&clipped.vertices, eps).ok_or_else(|| {
        Error::RootFinding("degenerate inner parallel set at the Cheeger radius".into())
    })?;
    Ok(RootSolution {
        radius,
        residual,
        regular,
        inner,
    })
}

/// The radius `R = 1/h` of the arcs of the Cheeger set: the unique root of
/// `|Ω_r| = π r²` in `(0, inradius)`.
pub fn cheeger_radius(p: &Polygon) -> Result<f64> {
    solve_radius(p).map(|s| s.radius)
}

/// True when every side of `p` survives erosion by the Cheeger radius, i.e.
/// the Cheeger set touches all sides.
pub fn is_cheeger_regular(p: &Polygon) -> Result<bool> {
    solve_radius(p).map(|s| s.regular)
}

/// Closed-form Cheeger constant for convex, Cheeger-regular polygons. No
/// regularity check; see [`cheeger_constant`] with [`Method::Formula`].
pub fn cheeger_formula(p: &Polygon) -> Result<f64> {
    let tau = p.tau()?;
    let per = p.perimeter();
    let area = p.area();
    let disc = (per * per - 4.0 * tau * area).max(0.0);
    Ok((per + disc.sqrt()) / (2.0 * area))
}

pub fn cheeger_constant(p: &Polygon, method: Method) -> Result<CheegerReport> {
    let sol = solve_radius(p)?;
    match method {
        Method::Root => Ok(CheegerReport {
            h: 1.0 / sol.radius,
            radius: sol.radius,
            inner_polygon: sol.inner,
            cheeger_regular: sol.regular,
            method: MethodUsed::RadiusRoot,
            residual: Some(sol.residual),
            cross_error: None,
        }),
        Method::Formula => {
            if !sol.regular {
                return Err(Error::NotCheegerRegular);
            }
            let h = cheeger_formula(p)?;
            Ok(CheegerReport {
                h,
                radius: 1.0 / h,
                inner_polygon: sol.inner,
                cheeger_regular: true,
                method: MethodUsed::Formula,
                residual: None,
                cross_error: None,
            })
        }
        Method::Auto => {
            let h = 1.0 / sol.radius;
            let (method, cross_error) = if sol.regular {
                (MethodUsed::Both, Some((cheeger_formula(p)? - h).abs()))
            } else {
                (MethodUsed::RadiusRoot, None)
            };
            Ok(CheegerReport {
                h,
                radius: sol.radius,
                inner_polygon: sol.inner,
                cheeger_regular: sol.regular,
                method,
                residual: Some(sol.residual),
                cross_error,
            })
        }
    }
}

/// The Cheeger set as an arc-polygon.
pub fn cheeger_set(p: &Polygon) -> Result<ArcPolygon> {
    let sol = solve_radius(p)?;
    minkowski_disk(&sol.inner, sol.radius)
}

/// `P(E)/|E|` for a test set `E` inside `outer`; an upper bound on the Cheeger
/// constant of `outer`, convex or not.
pub fn cheeger_upper_bound(outer: &Polygon, test_set: &ArcPolygon) -> Result<f64> {
    if !contains_arc_polygon(outer, test_set, DEFAULT_CONTAINMENT_MARGIN * outer.scale()) {
        return Err(Error::NotContained);
    }
    Ok(test_set.ratio())
}

/// Scale-invariant deficit `√|Ω| h(Ω) - h(Ω₀)` against the unit-area regular
/// polygon with the same number of sides.
pub fn cheeger_deficit(p: &Polygon) -> Result<f64> {
    let h = cheeger_constant(p, Method::Root)?.h;
    Ok(p.area().sqrt() * h - regular_cheeger_constant(p.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{regular_ngon, Point};
    use crate::roots::bisect_predicate;

    fn rect(w: f64, h: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(w, 0.0),
            Point::new(w, h),
            Point::new(0.0, h),
        ])
        .unwrap()
    }

    /// Independent oracle: bisection on the closed-form eroded rectangle area.
    fn rect_radius_oracle(w: f64, h: f64) -> f64 {
        bisect_predicate(
            |r| (w - 2.0 * r) * (h - 2.0 * r) - PI * r * r > 0.0,
            0.0,
            0.5 * w.min(h),
            1e-15,
        )
    }

    #[test]
    fn unit_square_radius() {
        let r = cheeger_radius(&rect(1.0, 1.0)).unwrap();
        let oracle = rect_radius_oracle(1.0, 1.0);
        assert!((r - oracle).abs() < 1e-13);
        assert!((r - 1.0 / (2.0 + PI.sqrt())).abs() < 1e-13);
        assert!((r - 0.265079).abs() < 1e-6);
    }

    #[test]
    fn rectangle_radius() {
        let p = rect(2.0, 0.5);
        let r = cheeger_radius(&p).unwrap();
        let oracle = rect_radius_oracle(2.0, 0.5);
        assert!((r - oracle).abs() < 1e-13, "{r} vs {oracle}");
        // (4 - π) r² - 5 r + 1 = 0
        let closed = (5.0 - (25.0 - 4.0 * (4.0 - PI)).sqrt()) / (2.0 * (4.0 - PI));
        assert!((r - closed).abs() < 1e-13);
        assert!((r - 0.2074).abs() < 1e-4);
    }

    #[test]
    fn regular_polygons_both_routes() {
        for n in 3..=12 {
            let p = regular_ngon(n).unwrap();
            let rep = cheeger_constant(&p, Method::Auto).unwrap();
            assert!(rep.cheeger_regular);
            assert_eq!(rep.method, MethodUsed::Both);
            assert!((rep.h - regular_cheeger_constant(n)).abs() < 1e-9);
            assert!(rep.cross_error.unwrap() < 1e-9);
            assert!(rep.residual.unwrap() < 1e-10);
            assert!((rep.h * rep.radius - 1.0).abs() < 1e-12);
        }
        let tri = (6.0 / 3f64.powf(0.25) + 2.0 * PI.sqrt()) / 2.0;
        assert!((regular_cheeger_constant(3) - tri).abs() < 1e-12);
        assert!((tri - 4.05196).abs() < 1e-5);
    }

    #[test]
    fn square_methods() {
        let s = rect(1.0, 1.0);
        let expect = 2.0 + PI.sqrt();
        for m in [Method::Auto, Method::Formula, Method::Root] {
            let rep = cheeger_constant(&s, m).unwrap();
            assert!((rep.h - expect).abs() < 1e-9, "{m:?}");
        }
        assert!((expect - 3.772453).abs() < 1e-6);
    }

    fn clipped_square(depth: f64) -> Polygon {
        // Unit square with the corner (1, 1) cut by a short edge.
        Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0 - depth),
            Point::new(1.0 - depth, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn clipped_corner_is_not_regular() {
        let p = clipped_square(1e-3);
        assert!(!is_cheeger_regular(&p).unwrap());
        assert_eq!(
            cheeger_constant(&p, Method::Formula).unwrap_err(),
            Error::NotCheegerRegular
        );
        let rep = cheeger_constant(&p, Method::Auto).unwrap();
        assert_eq!(rep.method, MethodUsed::RadiusRoot);
        assert!(rep.cross_error.is_none());
        // The cut lies outside the square's Cheeger set, so h is unchanged.
        assert!((rep.h - (2.0 + PI.sqrt())).abs() < 1e-9);
        assert_eq!(rep.inner_polygon.len(), 4);
    }

    #[test]
    fn thin_rectangle() {
        let p = rect(10.0, 0.1).normalize_area();
        let rep = cheeger_constant(&p, Method::Auto).unwrap();
        assert!(rep.h.is_finite() && rep.h > 0.0);
        if rep.cheeger_regular {
            assert!(rep.cross_error.unwrap() < 1e-8 * rep.h);
        }
    }

    #[test]
    fn cheeger_set_of_square() {
        let s = rect(1.0, 1.0);
        let c = cheeger_set(&s).unwrap();
        assert!((c.ratio() - (2.0 + PI.sqrt())).abs() < 1e-8);
        let r = c.radius();
        assert_eq!(c.inner_vertices().len(), 4);
        let side = c.inner_vertices()[0].dist(c.inner_vertices()[1]);
        assert!((side - (1.0 - 2.0 * r)).abs() < 1e-12);
        assert!(contains_arc_polygon(&s, &c, 1e-6));
    }

    #[test]
    fn upper_bound_and_containment() {
        let s = rect(1.0, 1.0);
        let c = cheeger_set(&s).unwrap();
        assert!((cheeger_upper_bound(&s, &c).unwrap() - (2.0 + PI.sqrt())).abs() < 1e-9);
        let moved = c.translated(Point::new(3.0, 0.0));
        assert_eq!(
            cheeger_upper_bound(&s, &moved).unwrap_err(),
            Error::NotContained
        );
    }

    #[test]
    fn deficits() {
        for n in 3..=9 {
            assert!(cheeger_deficit(&regular_ngon(n).unwrap()).unwrap().abs() < 1e-9);
        }
        assert!(cheeger_deficit(&rect(1.0, 1.0)).unwrap().abs() < 1e-9);
        let d = cheeger_deficit(&rect(2.0, 0.5)).unwrap();
        let r = rect_radius_oracle(2.0, 0.5);
        assert!((d - (1.0 / r - (2.0 + PI.sqrt()))).abs() < 1e-9);
        assert!(d > 0.0);
    }

    #[test]
    fn ball_constant() {
        assert!((h_ball() - 3.544908).abs() < 1e-6);
        let mut last = f64::INFINITY;
        for n in 3..=12 {
            let gap = regular_cheeger_constant(n) - h_ball();
            assert!(gap > 0.0 && gap < last);
            last = gap;
        }
    }

    #[test]
    fn nonconvex_refused() {
        let dart = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 2.0),
            Point::new(0.5, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            cheeger_constant(&dart, Method::Auto),
            Err(Error::NonConvex { .. })
        ));
    }

    #[test]
    fn report_json_fields() {
        let rep = cheeger_constant(&rect(1.0, 1.0), Method::Root).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in [
            "h",
            "radius",
            "cheeger_regular",
            "method",
            "residual",
            "cross_error",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(v["method"], "radius-root");
        assert!(v["cross_error"].is_null());
    }
}
