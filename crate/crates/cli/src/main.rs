//! `gmrd` experiment driver: bound sweeps, codec simulations, and the
//! acceptance verifier, each emitting deterministic CSV (and optional SVG).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use gmrd_cli::config::ExperimentConfig;
use gmrd_cli::csvio::CsvDoc;
use gmrd_cli::svg::{write_heatmap, write_line_chart, Series};
use gmrd_cli::sweeps;
use gmrd_cli::verify;

#[derive(Parser)]
#[command(
    name = "gmrd",
    about = "Semantic-aware multi-terminal rate-distortion bounds and codec experiments",
    version
)]
struct Cli {
    /// TOML experiment configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/SVG artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread count override (also: GMRD_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also render an SVG preview next to each CSV.
    #[arg(long, global = true)]
    emit_svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outer-bound surface over the (D_S, D_X) box of the three-component example.
    Surface,
    /// Fixed-D_S and fixed-D_X1 slices of the outer bound.
    Contours,
    /// Region classification map over (D_S, total D_X).
    Regions,
    /// Bounds plus simulated scheme/baseline points for the symmetric binary setup.
    RdSweep,
    /// Per-agent rate allocation boundary and a simulated operating point.
    Alloc,
    /// Bound gap and fixed-rate measured distortions across SNR.
    SnrSweep,
    /// Run every acceptance check; exits 2 when any fails.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let threads = cli
        .threads
        .or_else(|| std::env::var("GMRD_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    match cli.command {
        Command::Surface => {
            let doc = sweeps::run_surface(&cfg)?;
            emit(&cli, &doc, "surface", |doc| {
                let points = cfg.surface.d_x.points;
                let values: Vec<f64> = doc
                    .rows()
                    .iter()
                    .map(|r| float_cell(doc, r, "outer"))
                    .collect();
                write_heatmap(
                    &cli.out.join("surface.svg"),
                    "outer bound over (D_S, D_X)",
                    &values,
                    points,
                )
            })?;
        }
        Command::Contours => {
            let doc = sweeps::run_contours(&cfg)?;
            emit(&cli, &doc, "contours", |doc| {
                let mut series: Vec<Series> = Vec::new();
                for row in doc.rows() {
                    let family = str_cell(doc, row, "family");
                    let fixed = float_cell(doc, row, "fixed");
                    let label = format!("{family}={fixed:.3}");
                    let x = if family == "fixed-ds" {
                        float_cell(doc, row, "d_x1")
                    } else {
                        float_cell(doc, row, "d_s")
                    };
                    let y = float_cell(doc, row, "outer");
                    match series.iter_mut().find(|s| s.label == label) {
                        Some(s) => s.points.push((x, y)),
                        None => series.push(Series { label, points: vec![(x, y)] }),
                    }
                }
                write_line_chart(
                    &cli.out.join("contours.svg"),
                    "outer-bound slices",
                    "swept budget",
                    "rate (bits)",
                    &series,
                )
            })?;
        }
        Command::Regions => {
            let doc = sweeps::run_regions(&cfg)?;
            emit(&cli, &doc, "regions", |doc| {
                let points = cfg.regions.sum_d_x.points;
                let values: Vec<f64> = doc
                    .rows()
                    .iter()
                    .map(|r| match str_cell(doc, r, "region").as_str() {
                        "A" => 0.0,
                        "Bstar" => 1.0,
                        _ => 2.0,
                    })
                    .collect();
                write_heatmap(
                    &cli.out.join("regions.svg"),
                    "region classification over (D_S, sum D_X)",
                    &values,
                    points,
                )
            })?;
        }
        Command::RdSweep => {
            let doc = sweeps::run_rd_sweep(&cfg)?;
            emit(&cli, &doc, "rd_sweep", |doc| {
                let mut series = vec![
                    Series { label: "outer".into(), points: vec![] },
                    Series { label: "inner".into(), points: vec![] },
                    Series { label: "scheme".into(), points: vec![] },
                    Series { label: "baseline".into(), points: vec![] },
                ];
                for row in doc.rows() {
                    if str_cell(doc, row, "sweep") != "ds" {
                        continue;
                    }
                    let x = float_cell(doc, row, "d_s_target");
                    series[0].points.push((x, float_cell(doc, row, "outer")));
                    series[1].points.push((x, float_cell(doc, row, "inner")));
                    let sim = float_cell(doc, row, "sim_r_sum");
                    if sim.is_finite() {
                        series[2].points.push((x, sim));
                        series[3].points.push((x, float_cell(doc, row, "base_r_sum")));
                    }
                }
                write_line_chart(
                    &cli.out.join("rd_sweep.svg"),
                    "bounds and simulated rates vs D_S",
                    "D_S (bits)",
                    "sum rate (bits)",
                    &series,
                )
            })?;
        }
        Command::Alloc => {
            let doc = sweeps::run_alloc(&cfg)?;
            emit(&cli, &doc, "alloc", |doc| {
                let mut curve = Series { label: "boundary".into(), points: vec![] };
                let mut sim = Series { label: "simulated".into(), points: vec![] };
                for row in doc.rows() {
                    let p = (float_cell(doc, row, "r1"), float_cell(doc, row, "r2"));
                    if str_cell(doc, row, "kind") == "curve" {
                        curve.points.push(p);
                    } else {
                        // draw the point as a short cross
                        sim.points.push((p.0 - 0.01, p.1));
                        sim.points.push((p.0 + 0.01, p.1));
                        sim.points.push((p.0, p.1));
                        sim.points.push((p.0, p.1 - 0.01));
                        sim.points.push((p.0, p.1 + 0.01));
                    }
                }
                write_line_chart(
                    &cli.out.join("alloc.svg"),
                    "per-agent rate allocation",
                    "R1 (bits)",
                    "R2 (bits)",
                    &[curve, sim],
                )
            })?;
        }
        Command::SnrSweep => {
            let doc = sweeps::run_snr_sweep(&cfg)?;
            emit(&cli, &doc, "snr_sweep", |doc| {
                let mut gap = Series { label: "inner - outer".into(), points: vec![] };
                for row in doc.rows() {
                    if str_cell(doc, row, "part") == "bounds" {
                        gap.points
                            .push((float_cell(doc, row, "snr_db"), float_cell(doc, row, "gap")));
                    }
                }
                write_line_chart(
                    &cli.out.join("snr_sweep.svg"),
                    "bound gap vs SNR",
                    "SNR (dB)",
                    "gap (bits)",
                    &[gap],
                )
            })?;
        }
        Command::Verify => {
            let (checks, all) = verify::run_all(cfg.seed);
            for c in &checks {
                println!("{}", c.line());
            }
            return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(
    cli: &Cli,
    doc: &CsvDoc,
    stem: &str,
    render: impl FnOnce(&CsvDoc) -> Result<()>,
) -> Result<()> {
    let path = cli.out.join(format!("{stem}.csv"));
    doc.write(&path)?;
    println!("wrote {}", path.display());
    if cli.emit_svg {
        render(doc)?;
        println!("wrote {}", cli.out.join(format!("{stem}.svg")).display());
    }
    Ok(())
}

fn col(doc: &CsvDoc, name: &str) -> usize {
    doc.header()
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"))
}

fn float_cell(doc: &CsvDoc, row: &[gmrd_cli::csvio::Field], name: &str) -> f64 {
    match &row[col(doc, name)] {
        gmrd_cli::csvio::Field::Float(v) => *v,
        gmrd_cli::csvio::Field::Int(v) => *v as f64,
        _ => f64::NAN,
    }
}

fn str_cell(doc: &CsvDoc, row: &[gmrd_cli::csvio::Field], name: &str) -> String {
    match &row[col(doc, name)] {
        gmrd_cli::csvio::Field::Str(s) => s.clone(),
        _ => String::new(),
    }
}
