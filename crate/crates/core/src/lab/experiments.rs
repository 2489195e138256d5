use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{item_seed, perturb_ngon, random_convex_ngon, tentacle_polygon};
use super::{Ratio, StabilityRecord, DEGENERATE_DEFICIT};
use crate::alignment::{align_with, aligned_deficit_record_with, AlignOptions};
use crate::cheeger::{
    cheeger_constant, cheeger_set, cheeger_upper_bound, h_ball, regular_cheeger_constant, Method,
};
use crate::error::Result;
use crate::geometry::{regular_ngon, regular_perimeter, Point, Polygon};
use crate::metrics::Metric;

/// Slack allowed on every inequality check.
const INEQ_TOL: f64 = 1e-9;

/// One row of the perturbation sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub record: StabilityRecord,
    /// `log(d_prev/d) / log(eps_prev/eps)` against the previous row.
    pub order_estimate: Option<f64>,
}

/// Stability records along a list of perturbation sizes, with the observed
/// order of decay of the deficit.
pub fn sweep_perturbation(n: usize, eps_list: &[f64]) -> Result<Vec<SweepRow>> {
    sweep_perturbation_with(n, eps_list, &AlignOptions::default())
}

pub fn sweep_perturbation_with(
    n: usize,
    eps_list: &[f64],
    opts: &AlignOptions,
) -> Result<Vec<SweepRow>> {
    let records: Vec<StabilityRecord> = eps_list
        .iter()
        .map(|&eps| {
            let p = perturb_ngon(n, eps)?;
            aligned_deficit_record_with(&p, &format!("perturb-n{n}-eps{eps}"), opts)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = Vec::with_capacity(records.len());
    for (i, (record, &eps)) in records.into_iter().zip(eps_list).enumerate() {
        let order_estimate = (i > 0)
            .then(|| {
                let prev = &rows[i - 1];
                let ok = prev.record.deficit > DEGENERATE_DEFICIT
                    && record.deficit > DEGENERATE_DEFICIT
                    && prev.eps != eps
                    && eps > 0.0;
                ok.then(|| (prev.record.deficit / record.deficit).ln() / (prev.eps / eps).ln())
            })
            .flatten();
        rows.push(SweepRow {
            eps,
            record,
            order_estimate,
        });
    }
    Ok(rows)
}

/// Relative spread `|a - b| / min(a, b)` of `deficit / hd²` over the last two rows.
pub fn ratio_variation(rows: &[SweepRow]) -> Option<f64> {
    let m = rows.len();
    if m < 2 {
        return None;
    }
    let inv = |r: &SweepRow| r.record.ratio_hd.value().map(|v| 1.0 / v);
    let a = inv(&rows[m - 2])?;
    let b = inv(&rows[m - 1])?;
    Some((a - b).abs() / a.min(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// How many of the samples (the first ones) also get aligned distances.
    pub aligned_samples: usize,
}

/// Inequality violation counts; all zero on a passing run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    /// `√|Ω| h(Ω) >= 2√π`.
    pub cheeger: usize,
    /// `√|Ω| h(Ω) >= h(Ω₀)`.
    pub bucur_fragala: usize,
    /// `P²/(4|Ω|) >= τ + π`.
    pub polygonal_isoperimetric: usize,
    /// `2(h - h₀) >= P - P₀` on Cheeger-regular samples.
    pub bound1: usize,
    /// `P - P₀ >= (P² - P₀²)/(3P₀)` when `P < 2P₀`.
    pub bound2: usize,
    /// `P² >= P₀²` (the quantity controlling the Hausdorff distance).
    pub isoperimetric_deficit: usize,
    /// Closed form and radius root disagree by more than `1e-8 h`.
    pub cross_validation: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.cheeger
            + self.bucur_fragala
            + self.polygonal_isoperimetric
            + self.bound1
            + self.bound2
            + self.isoperimetric_deficit
            + self.cross_validation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub aligned_samples: usize,
    pub regular_count: usize,
    pub bound1_checked: usize,
    pub bound2_checked: usize,
    pub deficit_min: f64,
    pub deficit_max: f64,
    pub deficit_mean: f64,
    /// Largest `hd²/deficit` over aligned, non-degenerate samples.
    pub c_emp: Option<f64>,
    /// Largest `|Δ|²/deficit` over aligned, non-degenerate samples.
    pub c_emp_l1: Option<f64>,
    /// Largest `hd²/(P² - P₀²)` over aligned samples.
    pub c_iso: Option<f64>,
    pub violations: Violations,
}

impl EnsembleReport {
    pub fn passed(&self) -> bool {
        self.violations.total() == 0
    }
}

#[derive(Debug, Clone, Copy)]
struct SampleOutcome {
    deficit: f64,
    regular: bool,
    bound2_applies: bool,
    violations: Violations,
    hd: Option<f64>,
    l1: Option<f64>,
    iso_gap: f64,
}

fn evaluate_sample(
    p: &Polygon,
    n: usize,
    aligned: bool,
    opts: &AlignOptions,
) -> Result<SampleOutcome> {
    let mut v = Violations::default();
    let report = cheeger_constant(p, Method::Auto)?;
    let area = p.area();
    let scaled_h = area.sqrt() * report.h;
    let h0 = regular_cheeger_constant(n);
    let deficit = scaled_h - h0;
    let per = p.perimeter() / area.sqrt();
    let per0 = regular_perimeter(n);

    if scaled_h < h_ball() - INEQ_TOL {
        v.cheeger += 1;
    }
    if deficit < -INEQ_TOL {
        v.bucur_fragala += 1;
    }
    if p.isoperimetric_gap()? < -1e-10 {
        v.polygonal_isoperimetric += 1;
    }
    if report.cheeger_regular && 2.0 * deficit < per - per0 - INEQ_TOL {
        v.bound1 += 1;
    }
    let bound2_applies = per < 2.0 * per0;
    if bound2_applies && per - per0 < (per * per - per0 * per0) / (3.0 * per0) - INEQ_TOL {
        v.bound2 += 1;
    }
    let iso_gap = per * per - per0 * per0;
    if iso_gap < -INEQ_TOL {
        v.isoperimetric_deficit += 1;
    }
    if let Some(e) = report.cross_error {
        if e > 1e-8 * report.h {
            v.cross_validation += 1;
        }
    }

    let (hd, l1) = if aligned {
        let unit = p.normalize_area();
        let reference = regular_ngon(n)?;
        (
            Some(align_with(&unit, &reference, Metric::Hausdorff, opts).distance),
            Some(align_with(&unit, &reference, Metric::L1, opts).distance),
        )
    } else {
        (None, None)
    };
    Ok(SampleOutcome {
        deficit,
        regular: report.cheeger_regular,
        bound2_applies,
        violations: v,
        hd,
        l1,
        iso_gap,
    })
}

fn fold_max(acc: Option<f64>, x: Option<f64>) -> Option<f64> {
    match (acc, x) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// Checks the inequality chain on random convex unit-area `n`-gons and
/// estimates the empirical stability constants. Deterministic in the seed.
pub fn verify_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleReport> {
    verify_ensemble_with(cfg, &AlignOptions::default())
}

pub fn verify_ensemble_with(cfg: &EnsembleConfig, opts: &AlignOptions) -> Result<EnsembleReport> {
    let n = cfg.n;
    let outcomes: Vec<SampleOutcome> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let p = random_convex_ngon(n, item_seed(cfg.seed, i as u64))?;
            evaluate_sample(&p, n, i < cfg.aligned_samples, opts)
        })
        .collect::<Result<_>>()?;

    let mut v = Violations::default();
    let (mut dmin, mut dmax, mut dsum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    let (mut c_emp, mut c_emp_l1, mut c_iso) = (None, None, None);
    let (mut regular_count, mut bound2_checked) = (0, 0);
    for o in &outcomes {
        v.cheeger += o.violations.cheeger;
        v.bucur_fragala += o.violations.bucur_fragala;
        v.polygonal_isoperimetric += o.violations.polygonal_isoperimetric;
        v.bound1 += o.violations.bound1;
        v.bound2 += o.violations.bound2;
        v.isoperimetric_deficit += o.violations.isoperimetric_deficit;
        v.cross_validation += o.violations.cross_validation;
        dmin = dmin.min(o.deficit);
        dmax = dmax.max(o.deficit);
        dsum += o.deficit;
        regular_count += o.regular as usize;
        bound2_checked += o.bound2_applies as usize;
        if let Some(hd) = o.hd {
            c_emp = fold_max(c_emp, Ratio::of(hd * hd, o.deficit).value());
            if o.iso_gap > DEGENERATE_DEFICIT {
                c_iso = fold_max(c_iso, Some(hd * hd / o.iso_gap));
            }
        }
        if let Some(l1) = o.l1 {
            c_emp_l1 = fold_max(c_emp_l1, Ratio::of(l1 * l1, o.deficit).value());
        }
    }
    let count = outcomes.len().max(1) as f64;
    Ok(EnsembleReport {
        n,
        samples: cfg.samples,
        seed: cfg.seed,
        aligned_samples: cfg.aligned_samples.min(cfg.samples),
        regular_count,
        bound1_checked: regular_count,
        bound2_checked,
        deficit_min: dmin,
        deficit_max: dmax,
        deficit_mean: dsum / count,
        c_emp,
        c_emp_l1,
        c_iso,
        violations: v,
    })
}

/// `√(3/2) (2 + √π)`: the bound on the scaled Cheeger constants of the
/// normalized tentacle polygons.
pub const TENTACLE_BOUND_LIMIT: f64 = 1.224_744_871_391_589 * (2.0 + 1.772_453_850_905_516);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TentacleRow {
    pub k: f64,
    /// Area of the unnormalized tentacle polygon.
    pub raw_area: f64,
    /// `P(C₀)/|C₀|` for the Cheeger set `C₀` of the unit square, certified to
    /// lie inside the tentacle polygon.
    pub upper_bound_raw: f64,
    /// `√|Ω̃_k| P(C₀)/|C₀|`: bound on `h` of the unit-area rescaling.
    pub scaled_bound: f64,
    /// Aligned Hausdorff distance of the unit-area rescaling to the regular hexagon.
    pub hd_aligned: f64,
    /// `(diam(Ω_k) - diam(Ω₀))/2`, a lower bound for any alignment.
    pub hd_lower_bound: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TentacleSeries {
    pub rows: Vec<TentacleRow>,
    pub bound_limit: f64,
    pub bounds_ok: bool,
    pub hd_increasing: bool,
}

/// Bounded scaled Cheeger constant with unbounded Hausdorff distance, for the
/// tentacle polygons of each `k`.
pub fn tentacle_series(k_list: &[f64]) -> Result<TentacleSeries> {
    tentacle_series_with(k_list, &AlignOptions::default())
}

pub fn tentacle_series_with(k_list: &[f64], opts: &AlignOptions) -> Result<TentacleSeries> {
    let square = Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])?;
    let c0 = cheeger_set(&square)?;
    let hexagon = regular_ngon(6)?;
    let hex_diam = hexagon.diameter();
    let rows: Vec<TentacleRow> = k_list
        .iter()
        .map(|&k| {
            let raw = tentacle_polygon(k)?;
            let upper = cheeger_upper_bound(&raw, &c0)?;
            let raw_area = raw.area();
            let unit = raw.normalize_area();
            let hd = align_with(&unit, &hexagon, Metric::Hausdorff, opts).distance;
            let diameter = unit.diameter();
            Ok(TentacleRow {
                k,
                raw_area,
                upper_bound_raw: upper,
                scaled_bound: raw_area.sqrt() * upper,
                hd_aligned: hd,
                hd_lower_bound: 0.5 * (diameter - hex_diam),
                diameter,
            })
        })
        .collect::<Result<_>>()?;
    let bounds_ok = rows
        .iter()
        .all(|r| r.scaled_bound <= TENTACLE_BOUND_LIMIT + INEQ_TOL);
    let hd_increasing = rows.windows(2).all(|w| w[1].hd_aligned > w[0].hd_aligned);
    Ok(TentacleSeries {
        rows,
        bound_limit: TENTACLE_BOUND_LIMIT,
        bounds_ok,
        hd_increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bound_limit_constant() {
        assert!((TENTACLE_BOUND_LIMIT - 1.5f64.sqrt() * (2.0 + PI.sqrt())).abs() < 1e-14);
        assert!((TENTACLE_BOUND_LIMIT - 4.6203).abs() < 1e-4);
    }

    #[test]
    fn small_ensemble_is_clean_and_deterministic() {
        let cfg = EnsembleConfig {
            n: 5,
            samples: 200,
            seed: 11,
            aligned_samples: 3,
        };
        let a = verify_ensemble(&cfg).unwrap();
        assert!(a.passed(), "{:?}", a.violations);
        assert!(a.deficit_min >= -1e-9);
        assert!(a.c_emp.is_some() && a.c_iso.is_some());
        let b = verify_ensemble(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_zero_row_is_degenerate() {
        let rows = sweep_perturbation(6, &[0.0, 0.04]).unwrap();
        assert_eq!(rows[0].record.ratio_hd, Ratio::Degenerate);
        assert!(rows[1].order_estimate.is_none());
        assert!(rows[1].record.deficit > 0.0);
    }
}
