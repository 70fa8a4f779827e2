use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use projcong::congruence::congruence_witnesses;
use projcong::direction_space::{arrangement, Mode};
use projcong::io::{parse_polytope, parse_vector_arg};
use projcong::pipeline::{decide_report, exceptional_circles, Config};
use projcong::recovery::{line_pair_classify, minkowski_2d, ParamLine};
use projcong::shadow::{project, section, PlanarBody};
use projcong::svg::{arrangement_svg, polygon_svg};
use projcong::{Error, Polytope, Rat, Vector};

#[derive(Parser)]
#[command(name = "projcong", version, about = "Exact congruence tests for projections and sections of 3D polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Projections,
    Sections,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Projections => Mode::Projections,
            ModeArg::Sections => Mode::Sections,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether Q = ±P + b from congruence of all projections or sections.
    Decide {
        #[arg(long, value_enum)]
        mode: ModeArg,
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        float_tol: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Orthogonal projection onto the plane perpendicular to --xi.
    Project {
        polytope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        float_tol: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Section by the plane through the origin perpendicular to --xi.
    Section {
        polytope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        float_tol: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The exceptional great circles and the cells they cut out.
    Stratify {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "projections")]
        mode: ModeArg,
        #[arg(long)]
        float_tol: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Rigid motions between two planar bodies.
    Congruent { a: PathBuf, b: PathBuf },
    /// Polygon from outer normals and edge lengths.
    Minkowski2d { input: PathBuf },
    /// Classify four lines `{"lines": [l1, l2, l3, l4], "dirs": [...]}`.
    ClassifyLines { input: PathBuf },
}

/// Failures with their exit code.
enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_retryable() => 2,
            _ => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(s) => f.write_str(s),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path, float_tol: Option<f64>) -> CliResult<Polytope> {
    Ok(parse_polytope(&read(path)?, float_tol)?)
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn emit_body(body: &PlanarBody, svg: Option<&Path>) -> CliResult<()> {
    if let Some(path) = svg {
        write(path, &polygon_svg(body))?;
    }
    println!("{}", pretty(body));
    Ok(())
}

#[derive(Deserialize)]
struct MinkowskiInput {
    normals: Vec<[Rat; 2]>,
    lengths: Vec<Rat>,
}

#[derive(Deserialize)]
struct LinesInput {
    lines: [ParamLine; 4],
    dirs: Vec<Vector>,
}

fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Decide {
            mode,
            p,
            q,
            samples,
            seed,
            float_tol,
            jobs,
            report,
        } => {
            let (p, q) = (load(&p, float_tol)?, load(&q, float_tol)?);
            let cfg = Config {
                mode: mode.into(),
                samples_per_cell: samples,
                seed,
                float_tol,
                jobs,
            };
            let rep = decide_report(&p, &q, &cfg)?;
            let text = pretty(&rep);
            if let Some(path) = report {
                write(&path, &text)?;
            }
            println!("{text}");
            Ok(if rep.verdict.is_positive() { 0 } else { 1 })
        }
        Command::Project {
            polytope,
            xi,
            float_tol,
            svg,
        } => {
            let body = project(&load(&polytope, float_tol)?, &parse_vector_arg(&xi)?)?;
            emit_body(&body, svg.as_deref())?;
            Ok(0)
        }
        Command::Section {
            polytope,
            xi,
            float_tol,
            svg,
        } => {
            let body = section(&load(&polytope, float_tol)?, &parse_vector_arg(&xi)?)?;
            emit_body(&body, svg.as_deref())?;
            Ok(0)
        }
        Command::Stratify {
            files,
            mode,
            float_tol,
            svg,
        } => {
            let p = load(&files[0], float_tol)?;
            let q = match files.get(1) {
                Some(f) => load(f, float_tol)?,
                None => p.clone(),
            };
            let circles = exceptional_circles(&p, &q, mode.into())?;
            let arr = arrangement(&circles);
            if let Some(path) = svg {
                write(&path, &arrangement_svg(&arr))?;
            }
            println!("{}", pretty(&json!({ "circles": arr.circles, "cells": arr.cells })));
            Ok(0)
        }
        Command::Congruent { a, b } => {
            let a: PlanarBody = parse_json(&a)?;
            let b: PlanarBody = parse_json(&b)?;
            let witnesses = congruence_witnesses(&a, &b);
            println!(
                "{}",
                pretty(&json!({ "congruent": !witnesses.is_empty(), "witnesses": witnesses }))
            );
            Ok(0)
        }
        Command::Minkowski2d { input } => {
            let inp: MinkowskiInput = parse_json(&input)?;
            emit_body(&minkowski_2d(&inp.normals, &inp.lengths)?, None)?;
            Ok(0)
        }
        Command::ClassifyLines { input } => {
            let inp: LinesInput = parse_json(&input)?;
            let [l1, l2, l3, l4] = &inp.lines;
            println!("{}", pretty(&line_pair_classify(l1, l2, l3, l4, &inp.dirs)?));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
