use anyonlab::anyon::EngineOptions;
use anyonlab::boundary::{solve_gauge_operators, SolveOptions, Truncation};
use anyonlab::catalog::{builtin, bb, parse_code_file, to_json, validate, Side, StabilizerCodeSpec, TruncationGeometry};
use anyonlab::constructor::{construct, Analysis, ConstructOptions};
use anyonlab::lagrangian::{count_lagrangians, count_lagrangians_z2n, enumerate_lagrangians, AnyonGroup};
use anyonlab::render::{operators_from_report, render_ascii, render_svg, Region};
use anyonlab::report::{analysis_json, construction_json, to_canonical_string, GaugeCache};
use anyonlab::{par, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "anyonlab", version, about = "Boundary anyons and gapped boundaries of Pauli stabilizer codes")]
struct Cli {
    /// Worker threads for the data-parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a code file or builtin is a valid stabilizer code.
    Validate { code: String },
    /// Print a builtin code as a code file.
    Export { code: String },
    /// Gauge operators and boundary anyon theory of one truncation.
    Analyze {
        code: String,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Analyze the defect between two copies of the code instead of a boundary.
        #[arg(long)]
        defect: bool,
        #[arg(long)]
        orientation_reverse: bool,
    },
    /// Enumerate Lagrangian subgroups of a boundary theory and build each boundary.
    Boundaries {
        code: String,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Enumerate Lagrangian subgroups of a defect theory and build each defect.
    Defects {
        left: String,
        right: String,
        /// Reverse the orientation of the right code before gluing.
        #[arg(long)]
        orientation_reverse: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Number of Lagrangian subgroups of n copies of the Z_2 toric code.
    LagrangianCount { n: u32 },
    /// Basis anyon count and minimal string length of bivariate bicycle codes.
    BbScan {
        /// Range `lo..hi` (inclusive) or comma list for the x exponent.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 64)]
        max_period: usize,
        /// Give up on a cell after this many seconds.
        #[arg(long)]
        cell_timeout: Option<u64>,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Draw the operators of a report.
    Render {
        report: String,
        #[arg(long, value_enum, default_value_t = DrawFormat::Ascii)]
        format: DrawFormat,
        /// `x0,x1,y0,y1` in unit cells.
        #[arg(long, allow_hyphen_values = true, default_value = "-4,2,0,4")]
        region: String,
        /// Index of the construction to draw.
        #[arg(long, default_value_t = 0)]
        construction: usize,
    },
}

#[derive(Args, Clone)]
struct GeometryArgs {
    /// Geometry file; overrides --side and --style.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    #[arg(long, value_enum, default_value_t = StyleArg::Smooth)]
    style: StyleArg,
}

#[derive(Args, Clone, Copy)]
struct SolverArgs {
    /// Initial half-width of the gauge-solve window in unit cells.
    #[arg(long)]
    window: Option<i64>,
    /// Largest string period tried by the anyon engine.
    #[arg(long, default_value_t = 64)]
    max_period: usize,
}

#[derive(Args, Clone, Copy)]
struct BuildArgs {
    /// Only count Lagrangian subgroups.
    #[arg(long)]
    count_only: bool,
    /// Rotates the choice among equally light completion terms.
    #[arg(long)]
    seed_tiebreak: Option<u64>,
    /// Largest group order enumerated explicitly.
    #[arg(long, default_value_t = 1 << 16)]
    cap: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Smooth,
    Rough,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DrawFormat {
    Ascii,
    Svg,
}

fn io_err(what: &str, e: std::io::Error) -> Error {
    Error::ParseError(format!("{what}: {e}"))
}

/// A builtin name, or else a path to a code file.
fn load_code(arg: &str) -> Result<StabilizerCodeSpec> {
    match builtin(arg) {
        Ok(spec) => Ok(spec),
        Err(Error::UnknownCode(_)) if std::path::Path::new(arg).exists() => {
            parse_code_file(&std::fs::read(arg).map_err(|e| io_err(arg, e))?)
        }
        Err(e) => Err(e),
    }
}

fn boundary_truncation(spec: &StabilizerCodeSpec, g: &GeometryArgs) -> Result<(Truncation, Value)> {
    let geom = match &g.geometry {
        Some(path) => TruncationGeometry::parse(&std::fs::read(path).map_err(|e| io_err(path, e))?)?,
        None => {
            let side = match g.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let mut geom = TruncationGeometry::default_for(spec, side);
            geom.boundary_style = anyonlab::catalog::BoundaryStyle::Named(
                match g.style {
                    StyleArg::Smooth => "smooth",
                    StyleArg::Rough => "rough",
                }
                .into(),
            );
            geom
        }
    };
    Ok((Truncation::from_geometry(spec, &geom)?, json!(geom)))
}

fn solve_options(s: &SolverArgs) -> SolveOptions {
    SolveOptions { window_x: s.window, ..SolveOptions::default() }
}

fn engine_options(s: &SolverArgs) -> EngineOptions {
    EngineOptions { max_period: s.max_period, ..EngineOptions::default() }
}

/// Gauge solve through the cache, then the anyon engine.
fn run_analysis(t: Truncation, s: &SolverArgs) -> Result<Analysis> {
    let opts = solve_options(s);
    let cache = GaugeCache::from_env();
    let key = GaugeCache::key(&t, &format!("{:?}", opts));
    let cached = cache.as_ref().and_then(|c| c.load(&key, t.d, t.w));
    let gauge = match cached {
        Some(g) => g,
        None => {
            let g = solve_gauge_operators(&t, opts)?;
            if let Some(c) = &cache {
                c.store(&key, &g)?;
            }
            g
        }
    };
    let engine = engine_options(s);
    let theory = anyonlab::anyon::BoundaryEngine::new(&gauge.paulis(), engine.box_len)?.theory(&engine)?;
    Ok(Analysis { truncation: t, gauge, theory })
}

fn header(command: &str, flags: Value) -> Value {
    json!({ "tool": "anyonlab", "version": env!("CARGO_PKG_VERSION"), "command": command, "flags": flags })
}

fn solver_flags(s: &SolverArgs) -> Value {
    let o = solve_options(s);
    json!({ "window": s.window, "max_period": s.max_period, "max_doublings": o.max_doublings })
}

fn print(v: &Value) {
    print!("{}", to_canonical_string(v));
}

fn lagrangian_report(spec: &StabilizerCodeSpec, an: &Analysis, build: &BuildArgs, mut report: Value) -> Result<Value> {
    let group = AnyonGroup::from_theory(&an.theory);
    let m = report.as_object_mut().unwrap();
    m.insert("analysis".into(), analysis_json(spec, an));
    if build.count_only {
        let n = count_lagrangians(&group, build.cap)?;
        m.insert("lagrangians".into(), json!({ "count": n.to_string() }));
        return Ok(report);
    }
    let lagrangians = enumerate_lagrangians(&group, build.cap)?;
    let opts = ConstructOptions { seed: build.seed_tiebreak, ..ConstructOptions::default() };
    let built = par::map(&lagrangians, |l| construct(an, l, &opts));
    let constructions: Vec<Value> = lagrangians.iter().zip(&built).map(|(l, b)| construction_json(&group, l, b)).collect();
    let failed = built.iter().filter(|b| b.is_err()).count();
    m.insert("lagrangians".into(), json!({ "count": lagrangians.len().to_string(), "failed_constructions": failed }));
    m.insert("constructions".into(), json!(constructions));
    Ok(report)
}

fn parse_range(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::ParseError(format!("bad range `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

/// `(k, l, incomplete)` for the smooth boundary of `bb(a, b)`.
fn bb_cell(a: i64, b: i64, max_period: usize) -> Result<(usize, usize, bool)> {
    let spec = bb(a, b)?;
    let t = Truncation::boundary(&spec, Side::Left, spec.smooth_mask.clone())?;
    let an = run_analysis(t, &SolverArgs { window: None, max_period })?;
    Ok((an.theory.basis.len(), an.theory.min_period, an.theory.incomplete))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        par::set_threads(n);
    }
    match cli.command {
        Command::Validate { code } => {
            let spec = load_code(&code)?;
            let violations = validate(&spec);
            if violations.is_empty() {
                println!("{}: valid (d = {}, w = {}, {} stabilizers, {} constraints)", spec.name, spec.dim(), spec.w, spec.stabilizers.len(), spec.gauge_constraints.len());
                return Ok(());
            }
            let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(Error::ValidationError(msg.join("; ")))
        }
        Command::Export { code } => {
            println!("{}", to_json(&load_code(&code)?));
            Ok(())
        }
        Command::Analyze { code, geometry, solver, defect, orientation_reverse } => {
            let spec = load_code(&code)?;
            let (t, geom) = if defect {
                let right = if orientation_reverse { spec.orientation_reversed() } else { spec.clone() };
                (Truncation::defect(&spec, &right)?, json!({ "defect": true, "orientation_reverse": orientation_reverse }))
            } else {
                boundary_truncation(&spec, &geometry)?
            };
            let an = run_analysis(t, &solver)?;
            let mut report = header("analyze", json!({ "solver": solver_flags(&solver), "geometry": geom }));
            report.as_object_mut().unwrap().insert("analysis".into(), analysis_json(&spec, &an));
            print(&report);
            Ok(())
        }
        Command::Boundaries { code, geometry, solver, build } => {
            let spec = load_code(&code)?;
            if !spec.gauge_constraints.is_empty() {
                return Err(Error::IncompatibleCodes(format!("{} carries gauge constraints and has no gapped boundary; use `defects`", spec.name)));
            }
            let (t, geom) = boundary_truncation(&spec, &geometry)?;
            let an = run_analysis(t, &solver)?;
            let flags = json!({ "solver": solver_flags(&solver), "geometry": geom, "count_only": build.count_only, "seed_tiebreak": build.seed_tiebreak, "cap": build.cap.to_string() });
            print(&lagrangian_report(&spec, &an, &build, header("boundaries", flags))?);
            Ok(())
        }
        Command::Defects { left, right, orientation_reverse, solver, build } => {
            let l = load_code(&left)?;
            let r = load_code(&right)?;
            let r = if orientation_reverse { r.orientation_reversed() } else { r };
            let an = run_analysis(Truncation::defect(&l, &r)?, &solver)?;
            let flags = json!({ "solver": solver_flags(&solver), "orientation_reverse": orientation_reverse, "count_only": build.count_only, "seed_tiebreak": build.seed_tiebreak, "cap": build.cap.to_string() });
            print(&lagrangian_report(&l, &an, &build, header("defects", flags))?);
            Ok(())
        }
        Command::LagrangianCount { n } => {
            if n == 0 {
                return Err(Error::ValidationError("n must be at least 1".into()));
            }
            println!("{}", count_lagrangians_z2n(n));
            Ok(())
        }
        Command::BbScan { a, b, max_period, cell_timeout, format } => {
            let cells: Vec<(i64, i64)> = parse_range(&a)?.into_iter().flat_map(|x| parse_range(&b).unwrap_or_default().into_iter().map(move |y| (x, y))).collect();
            let mut rows = Vec::new();
            for (x, y) in cells {
                let (tx, rx) = mpsc::channel();
                std::thread::spawn(move || {
                    let _ = tx.send(bb_cell(x, y, max_period));
                });
                let res = match cell_timeout {
                    Some(s) => rx.recv_timeout(Duration::from_secs(s)).ok(),
                    None => rx.recv().ok(),
                };
                let row = match res {
                    Some(Ok((k, l, incomplete))) => json!({ "a": x, "b": y, "k": k, "l": l, "status": if incomplete { "incomplete" } else { "ok" } }),
                    Some(Err(e)) => json!({ "a": x, "b": y, "status": "error", "error": e.to_string() }),
                    None => json!({ "a": x, "b": y, "status": "timeout" }),
                };
                if format == TableFormat::Text {
                    let k = row["k"].as_u64().map_or("-".to_string(), |v| v.to_string());
                    let l = row["l"].as_u64().map_or("-".to_string(), |v| v.to_string());
                    println!("{x:>4} {y:>4} {k:>4} {l:>6}  {}", row["status"].as_str().unwrap_or(""));
                }
                rows.push(row);
            }
            if format == TableFormat::Json {
                print(&json!({ "max_period": max_period, "cells": rows }));
            }
            Ok(())
        }
        Command::Render { report, format, region, construction } => {
            let text = std::fs::read(&report).map_err(|e| io_err(&report, e))?;
            let v: Value = serde_json::from_slice(&text).map_err(|e| Error::ParseError(format!("line {} column {}: {e}", e.line(), e.column())))?;
            let (w, ops) = operators_from_report(&v, construction)?;
            let r = Region::parse(&region)?;
            let out = match format {
                DrawFormat::Ascii => render_ascii(w, &ops, &r)?,
                DrawFormat::Svg => render_svg(w, &ops, &r)?,
            };
            print!("{out}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::GroupTooLarge { .. }) {
                eprintln!("hint: rerun with --count-only to count by formula");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
