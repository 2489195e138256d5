mod plot;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cheeger_core::lab::{
    sweep_perturbation, tentacle_polygon, tentacle_series, verify_ensemble, EnsembleConfig,
    SweepRow, TentacleSeries,
};
use cheeger_core::metrics::{distance, DEFAULT_ERR_TOL_REL};
use cheeger_core::{
    align, aligned_deficit_record, cheeger_constant, cheeger_set, regular_ngon, Method, Metric,
    Polygon,
};
use clap::{Parser, Subcommand};
use serde::Serialize;

const EXIT_VALIDATION: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cheeger",
    version,
    about = "Cheeger constants, polygon distances and stability experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regular N-gon of unit area.
    Ngon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cheeger constant of a convex polygon.
    Compute {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        method: Method,
    },
    /// Cheeger set as an arc-polygon.
    CheegerSet {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between two polygons as given.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "hausdorff")]
        metric: Metric,
        /// Absolute error tolerance; defaults to 1e-7 times the larger diameter.
        #[arg(long)]
        err_tol: Option<f64>,
    },
    /// Rigid motion of `moving` minimizing the distance to `fixed`.
    Align {
        #[arg(long)]
        moving: PathBuf,
        #[arg(long)]
        fixed: PathBuf,
        #[arg(long, default_value = "hausdorff")]
        metric: Metric,
    },
    /// Deficit and aligned distances to the regular polygon with as many sides.
    Deficit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Area-preserving perturbations of the regular N-gon.
    Sweep {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02,0.01")]
        eps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Square with a tentacle of length k.
    Tentacle {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    TentacleSeries {
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        ks: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the inequalities on random convex N-gons. Exits with 3 on any violation.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of samples that also get aligned distances.
        #[arg(long, default_value_t = 50)]
        aligned: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG plot of a sweep CSV.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct AlignOutput {
    angle: f64,
    translation: [f64; 2],
    reflect: bool,
    distance: f64,
}

fn read_polygon(path: &Path) -> Result<Polygon> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing polygon {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, &s)
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "eps",
        "deficit",
        "hd",
        "l1",
        "ratio_hd",
        "ratio_l1",
        "order_estimate",
    ])?;
    for r in rows {
        w.write_record([
            fmt_f64(r.eps),
            fmt_f64(r.record.deficit),
            fmt_f64(r.record.hd_aligned),
            fmt_f64(r.record.l1_aligned),
            r.record.ratio_hd.to_string(),
            r.record.ratio_l1.to_string(),
            r.order_estimate.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn tentacle_csv(series: &TentacleSeries) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "k",
        "raw_area",
        "upper_bound_raw",
        "scaled_bound",
        "hd_aligned",
        "hd_lower_bound",
        "diameter",
    ])?;
    for r in &series.rows {
        w.write_record(
            [
                r.k,
                r.raw_area,
                r.upper_bound_raw,
                r.scaled_bound,
                r.hd_aligned,
                r.hd_lower_bound,
                r.diameter,
            ]
            .map(fmt_f64),
        )?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ngon { n, out } => emit_json(out.as_deref(), &regular_ngon(n)?)?,
        Command::Compute { input, method } => {
            let p = read_polygon(&input)?;
            emit_json(None, &cheeger_constant(&p, method)?)?;
        }
        Command::CheegerSet { input, out } => {
            let p = read_polygon(&input)?;
            emit_json(out.as_deref(), &cheeger_set(&p)?)?;
        }
        Command::Distance {
            a,
            b,
            metric,
            err_tol,
        } => {
            let (a, b) = (read_polygon(&a)?, read_polygon(&b)?);
            let tol = err_tol.unwrap_or(DEFAULT_ERR_TOL_REL * a.diameter().max(b.diameter()));
            if !(tol > 0.0 && tol.is_finite()) {
                anyhow::bail!(cheeger_core::Error::InvalidArgument(format!(
                    "--err-tol must be positive, got {tol}"
                )));
            }
            emit_json(None, &distance(&a, &b, metric, tol))?;
        }
        Command::Align {
            moving,
            fixed,
            metric,
        } => {
            let (m, f) = (read_polygon(&moving)?, read_polygon(&fixed)?);
            let a = align(&m, &f, metric);
            let t = a.motion.translation;
            emit_json(
                None,
                &AlignOutput {
                    angle: a.motion.angle,
                    translation: [t.x, t.y],
                    reflect: a.motion.reflect,
                    distance: a.distance,
                },
            )?;
        }
        Command::Deficit { input } => {
            let p = read_polygon(&input)?;
            let mut record = aligned_deficit_record(&p)?;
            if let Some(stem) = input.file_stem() {
                record.id = stem.to_string_lossy().into_owned();
            }
            emit_json(None, &record)?;
        }
        Command::Sweep { n, eps, out } => {
            let rows = sweep_perturbation(n, &eps)?;
            emit(out.as_deref(), &sweep_csv(&rows)?)?;
        }
        Command::Tentacle { k, out } => emit_json(out.as_deref(), &tentacle_polygon(k)?)?,
        Command::TentacleSeries { ks, out } => {
            let series = tentacle_series(&ks)?;
            if !series.bounds_ok {
                log::warn!("scaled Cheeger bound exceeds {}", series.bound_limit);
            }
            emit(out.as_deref(), &tentacle_csv(&series)?)?;
        }
        Command::Verify {
            n,
            samples,
            seed,
            aligned,
            out,
        } => {
            let cfg = EnsembleConfig {
                n,
                samples,
                seed,
                aligned_samples: aligned.min(samples),
            };
            let report = verify_ensemble(&cfg)?;
            emit_json(out.as_deref(), &report)?;
            if !report.passed() {
                eprintln!("{} inequality violations", report.violations.total());
                return Ok(ExitCode::from(EXIT_VIOLATION));
            }
        }
        Command::Plot { input, out } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let rows = plot::parse_sweep_csv(&text)?;
            emit(out.as_deref(), &plot::render(&rows))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
