//! Rigid registration of one polygon onto another under a chosen metric.
//!
//! Centroids are matched first. A coarse sweep over rotation angles (with and
//! without reflection) picks a few seeds, and a compass pattern search over
//! angle and translation refines each of them.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cheeger::{cheeger_constant, regular_cheeger_constant, Method};
use crate::error::Result;
use crate::geometry::{regular_ngon, Point, Polygon, RigidMotion};
use crate::lab::{Ratio, StabilityRecord};
use crate::metrics::{distance, Metric, DEFAULT_ERR_TOL_REL};
use crate::refine::refine_hausdorff;

const RANDOM_POLLS: usize = 16;
const POLL_SEED: u64 = 0x5eed_a11e;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignOptions {
    /// Rotation samples in `[0, 2π)` for the coarse sweep.
    pub coarse_steps: usize,
    /// Number of coarse seeds refined by pattern search.
    pub keep: usize,
    pub reflections: bool,
    /// Pattern search stops when the angle step and the translation step
    /// (relative to scale) fall below this.
    pub step_tol: f64,
    /// Hausdorff tolerance (relative to scale) during the search.
    pub search_err_tol: f64,
    /// Hausdorff tolerance (relative to scale) for the reported distance.
    pub final_err_tol: f64,
    pub max_evals: usize,
}

impl Default for AlignOptions {
    fn default() -> Self {
        AlignOptions {
            coarse_steps: 512,
            keep: 5,
            reflections: true,
            step_tol: 1e-9,
            search_err_tol: 1e-10,
            final_err_tol: DEFAULT_ERR_TOL_REL,
            max_evals: 20_000,
        }
    }
}

/// Result of [`align`]: `distance` is `metric(apply_motion(moving, motion), fixed)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub motion: RigidMotion,
    pub distance: f64,
    /// Certified error of `distance` (zero for the area metric).
    pub error_bound: f64,
    /// Distance after centroid matching alone.
    pub baseline: f64,
}

struct Objective<'a> {
    moving: &'a Polygon,
    fixed: &'a Polygon,
    metric: Metric,
    c_moving: Point,
    c_fixed: Point,
    err_tol: f64,
}

impl Objective<'_> {
    fn motion(&self, angle: f64, reflect: bool, shift: Point) -> RigidMotion {
        let linear = RigidMotion::new(angle, Point::ORIGIN, reflect);
        let t = self.c_fixed - linear.apply_vector(self.c_moving) + shift;
        RigidMotion::new(angle, t, reflect)
    }

    fn eval(&self, angle: f64, reflect: bool, shift: Point) -> f64 {
        let m = self.motion(angle, reflect, shift);
        distance(
            &self.moving.apply_motion(&m),
            self.fixed,
            self.metric,
            self.err_tol,
        )
        .estimate
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    angle: f64,
    reflect: bool,
    shift: Point,
    value: f64,
}

fn pattern_search(
    obj: &Objective<'_>,
    start: Candidate,
    scale: f64,
    opts: &AlignOptions,
) -> Candidate {
    let mut cur = start;
    let mut step_angle = TAU / opts.coarse_steps as f64;
    let mut step_shift = 0.02 * scale;
    let mut evals = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(POLL_SEED);
    // Moves must beat the certified error of the estimates they compare.
    let noise = 2.0 * obj.err_tol;
    // All 26 neighbours of the lattice cube; axis moves alone stall on the
    // diagonal ridges of a max-type objective.
    let dirs: Vec<(f64, f64, f64)> = (0..27)
        .filter(|&k| k != 13)
        .map(|k| {
            (
                (k / 9) as f64 - 1.0,
                ((k / 3) % 3) as f64 - 1.0,
                (k % 3) as f64 - 1.0,
            )
        })
        .collect();
    while (step_angle >= opts.step_tol || step_shift >= opts.step_tol * scale)
        && evals < opts.max_evals
    {
        let mut moved = false;
        for &(da, dx, dy) in &dirs {
            let angle = cur.angle + da * step_angle;
            let shift = cur.shift + Point::new(dx, dy) * step_shift;
            let value = obj.eval(angle, cur.reflect, shift);
            evals += 1;
            if value < cur.value - noise {
                cur = Candidate {
                    angle,
                    reflect: cur.reflect,
                    shift,
                    value,
                };
                moved = true;
                break;
            }
        }
        if !moved {
            // Random directions before shrinking; in the limit they are dense,
            // which lets the search leave ridges no lattice direction follows.
            for _ in 0..RANDOM_POLLS {
                let d = Point::polar(rng.gen::<f64>() * TAU);
                let z: f64 = rng.gen_range(-1.0..1.0);
                let w = (1.0 - z * z).sqrt();
                let angle = cur.angle + z * step_angle;
                let shift = cur.shift + d * (w * step_shift);
                let value = obj.eval(angle, cur.reflect, shift);
                evals += 1;
                if value < cur.value - noise {
                    cur = Candidate {
                        angle,
                        reflect: cur.reflect,
                        shift,
                        value,
                    };
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step_angle *= 0.5;
            step_shift *= 0.5;
        }
    }
    cur
}

/// Searches for a rigid motion of `moving` minimizing its distance to `fixed`.
pub fn align(moving: &Polygon, fixed: &Polygon, metric: Metric) -> Alignment {
    align_with(moving, fixed, metric, &AlignOptions::default())
}

/// Motion taking `p` to its principal frame: centroid at the origin, major
/// axis of the second moment of area along the x-axis, and the third moments
/// along both axes nonnegative.
fn principal_frame(p: &Polygon) -> RigidMotion {
    let c = p.centroid();
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in p.edges() {
        let (a, b) = (a - c, b - c);
        let w = a.cross(b);
        sxx += w * (a.x * a.x + a.x * b.x + b.x * b.x);
        syy += w * (a.y * a.y + a.y * b.y + b.y * b.y);
        sxy += w * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y);
    }
    // Common positive factors (1/12 and 1/24) cancel in the angle.
    let theta = 0.5 * sxy.atan2(sxx - syy);
    let frame = RigidMotion::new(-theta, (-c).rotate(-theta), false);
    let (mut mx, mut my) = (0.0, 0.0);
    for (a, b) in p.edges() {
        let (a, b) = (frame.apply(a), frame.apply(b));
        let w = a.cross(b);
        mx += w * (a.x + b.x) * (a.x * a.x + b.x * b.x);
        my += w * (a.y + b.y) * (a.y * a.y + b.y * b.y);
    }
    let flip_x = if mx < 0.0 {
        RigidMotion::rotation(std::f64::consts::PI)
    } else {
        RigidMotion::IDENTITY
    };
    let flip_y = if (my < 0.0) != (mx < 0.0) {
        RigidMotion::new(0.0, Point::ORIGIN, true)
    } else {
        RigidMotion::IDENTITY
    };
    flip_y.compose(&flip_x).compose(&frame)
}

/// `p` with its vertex list starting at the lexicographically largest vertex.
fn canonical_start(p: &Polygon) -> Polygon {
    let v = p.vertices();
    let k = (0..v.len())
        .max_by(|&i, &j| v[i].x.total_cmp(&v[j].x).then(v[i].y.total_cmp(&v[j].y)))
        .expect("nonempty polygon");
    Polygon::from_trusted(v[k..].iter().chain(&v[..k]).copied().collect())
}

pub fn align_with(
    moving: &Polygon,
    fixed: &Polygon,
    metric: Metric,
    opts: &AlignOptions,
) -> Alignment {
    let scale = moving.scale().max(fixed.scale());
    // Searching from a pose-independent frame makes the result equivariant
    // under rigid motions of the input.
    let frame = principal_frame(moving);
    let original = moving;
    let canonical = canonical_start(&moving.apply_motion(&frame));
    let moving = &canonical;
    let obj = Objective {
        moving,
        fixed,
        metric,
        c_moving: moving.centroid(),
        c_fixed: fixed.centroid(),
        err_tol: opts.search_err_tol * scale,
    };
    let reflections: &[bool] = if opts.reflections {
        &[false, true]
    } else {
        &[false]
    };
    let grid: Vec<(usize, bool)> = reflections
        .iter()
        .flat_map(|&r| (0..opts.coarse_steps).map(move |k| (k, r)))
        .collect();
    let mut coarse: Vec<(usize, Candidate)> = grid
        .par_iter()
        .map(|&(k, reflect)| {
            let angle = TAU * k as f64 / opts.coarse_steps as f64;
            let value = obj.eval(angle, reflect, Point::ORIGIN);
            (
                k,
                Candidate {
                    angle,
                    reflect,
                    shift: Point::ORIGIN,
                    value,
                },
            )
        })
        .collect();
    // Lowest angle index wins ties so the result does not depend on scheduling.
    coarse.sort_by(|a, b| {
        a.1.value
            .total_cmp(&b.1.value)
            .then(a.0.cmp(&b.0))
            .then(a.1.reflect.cmp(&b.1.reflect))
    });
    let seeds: Vec<Candidate> = coarse.iter().take(opts.keep.max(1)).map(|c| c.1).collect();
    let refined: Vec<(RigidMotion, f64)> = seeds
        .par_iter()
        .map(|&s| {
            let c = pattern_search(&obj, s, scale, opts);
            let m = obj.motion(c.angle, c.reflect, c.shift);
            match metric {
                Metric::Hausdorff => refine_hausdorff(moving, fixed, m, obj.err_tol),
                Metric::L1 => (m, c.value),
            }
        })
        .collect();
    let best = refined
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one seed");

    let err_tol = opts.final_err_tol * scale;
    let identity = RigidMotion::translation(obj.c_fixed - original.centroid());
    let base = distance(&original.apply_motion(&identity), fixed, metric, err_tol);
    let mut motion = best.0.compose(&frame);
    motion.angle = motion.angle.rem_euclid(TAU);
    let fin = distance(&original.apply_motion(&motion), fixed, metric, err_tol);
    let (motion, fin) = if fin.estimate <= base.estimate {
        (motion, fin)
    } else {
        (identity, base)
    };
    Alignment {
        motion,
        distance: fin.estimate,
        error_bound: fin.error_bound,
        baseline: base.estimate,
    }
}

/// Deficit and aligned distances of `p` (rescaled to unit area) against the
/// unit-area regular polygon with the same number of sides.
pub fn aligned_deficit_record(p: &Polygon) -> Result<StabilityRecord> {
    aligned_deficit_record_with(p, "input", &AlignOptions::default())
}

pub fn aligned_deficit_record_with(
    p: &Polygon,
    id: &str,
    opts: &AlignOptions,
) -> Result<StabilityRecord> {
    let p = p.normalize_area();
    let n = p.len();
    let report = cheeger_constant(&p, Method::Auto)?;
    let deficit = p.area().sqrt() * report.h - regular_cheeger_constant(n);
    let reference = regular_ngon(n)?;
    let hd = align_with(&p, &reference, Metric::Hausdorff, opts).distance;
    let l1 = align_with(&p, &reference, Metric::L1, opts).distance;
    Ok(StabilityRecord {
        id: id.to_string(),
        n,
        deficit,
        hd_aligned: hd,
        l1_aligned: l1,
        diameter: p.diameter(),
        ratio_hd: Ratio::of(hd * hd, deficit),
        ratio_l1: Ratio::of(l1 * l1, deficit),
        cheeger_regular: report.cheeger_regular,
    })
}
