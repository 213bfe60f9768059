use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homaloidal_core::covar::{
    generator_polys, rank_constraint_minors, rk_generators, sample_model_points, verify_vanishing,
};
use homaloidal_core::graph::{is_chordal, ml_degree_certificate, spanning_tree_poly, Graph};
use homaloidal_core::mldeg::cycle_report;
use homaloidal_core::pd::{pd_feasibility_sample, DEFAULT_BOX, DEFAULT_SAMPLES};
use homaloidal_core::poly::{parse_rational, MPoly};
use homaloidal_core::sdr::{
    power_sum_sdr, product_sdr_any, quadratic_sdr, size_bound, verify_sdr, AnyPencil, PowerSumForm,
    DEFAULT_FLOAT_TOL,
};
use homaloidal_core::Error;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "homaloidal",
    version,
    about = "Spanning-tree models, ML degrees and determinantal representations"
)]
struct Cli {
    /// Seed for every randomised check; recorded in the output.
    #[arg(long, global = true, env = "HOMALOIDAL_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Chordality, spanning-tree polynomial and ML-degree certificate.
    Graph {
        /// Graph as JSON (`{"n", "edges"}`) or edge-list text.
        #[arg(long)]
        file: PathBuf,
        /// Vertex whose row and column are removed from the Laplacian.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    #[command(subcommand)]
    Mldeg(Mldeg),
    #[command(subcommand)]
    Covar(Covar),
    #[command(subcommand)]
    Sdr(Sdr),
    #[command(subcommand)]
    Pd(Pd),
}

#[derive(Subcommand)]
enum Mldeg {
    /// Fiber of the gradient map of the n-cycle over the all-ones vector.
    Cycle {
        #[arg(long)]
        n: usize,
        /// Check every fiber point exactly.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum Covar {
    /// Generators of the covariance model and their vanishing on samples.
    Generators {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Args)]
struct Check {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Relative tolerance for float pencils.
    #[arg(long, default_value_t = DEFAULT_FLOAT_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Sdr {
    /// Representation of a polynomial of degree at most two.
    Quad {
        /// Expression, or a file holding polynomial JSON.
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        check: Check,
    },
    /// Representation of a power sum `sum_i lambda_i f_i^d`.
    Powersum {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        check: Check,
    },
    /// Direct sum of two pencils in disjoint variables.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Compares the determinant of a pencil with a polynomial.
    Verify {
        #[arg(long)]
        pencil: PathBuf,
        /// Expression, or a file holding polynomial JSON.
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        check: Check,
    },
    /// Size bounds for a power sum of rank r and degree d.
    Bound {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Subcommand)]
enum Pd {
    /// Diagonal obstructions and a seeded search for a positive definite point.
    Check {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Half-width of the sampling box, a rational.
        #[arg(long = "box", default_value_t = DEFAULT_BOX.to_string())]
        box_: String,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let s = read(path)?;
    let g = if s.trim_start().starts_with('{') {
        Graph::from_json_str(&s)?
    } else {
        Graph::from_text(&s)?
    };
    Ok(g)
}

fn read_pencil(path: &Path) -> Result<AnyPencil, Failure> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    Ok(AnyPencil::from_json(&v)?)
}

/// An existing file holds polynomial JSON, a JSON string, or an object with
/// a `poly` field; anything else is parsed as an expression.
fn read_poly(arg: &str) -> Result<MPoly, Failure> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(MPoly::parse(arg)?);
    }
    let text = read(path)?;
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => return Ok(MPoly::parse(text.trim())?),
    };
    let v = match v.get("poly") {
        Some(inner) if v.get("terms").is_none() => inner.clone(),
        _ => v,
    };
    match v {
        Value::String(s) => Ok(MPoly::parse(&s)?),
        v => Ok(serde_json::from_value(v).map_err(Error::from)?),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::Graph { file, k } => {
            let g = read_graph(file)?;
            let (chordal, peo) = is_chordal(&g);
            let tree = spanning_tree_poly(&g)?;
            let cert = ml_degree_certificate(&g, *k)?;
            Ok(json!({
                "graph": g.to_json_value(),
                "k": k,
                "chordal": chordal,
                "peo": peo,
                "spanning_tree_poly": tree.to_string(),
                "spanning_tree_terms": tree.num_terms(),
                "certificate": to_value(&cert),
                "ml_degree": cert.ml_degree(),
                "seed": seed,
            }))
        }
        Command::Mldeg(Mldeg::Cycle { n, verify }) => {
            let report = cycle_report(*n, *verify)?;
            let mut out = to_value(&report);
            out["seed"] = json!(seed);
            if !verify {
                out["all_verified"] = Value::Null;
            } else if !report.all_verified {
                return Err(Failure::Verification(out));
            }
            Ok(out)
        }
        Command::Covar(Covar::Generators { graph, k, samples }) => {
            let g = read_graph(graph)?;
            let gens = rk_generators(&g, *k)?;
            let rank = rank_constraint_minors(&g, *k)?;
            let mut polys = generator_polys(&gens);
            polys.extend(generator_polys(&rank));
            let points = sample_model_points(&g, *k, *samples, seed)?;
            let report = verify_vanishing(&polys, &points)?;
            let out = json!({
                "graph": g.to_json_value(),
                "k": k,
                "seed": seed,
                "generators": to_value(&gens),
                "rank_constraints": to_value(&rank),
                "verification": to_value(&report),
            });
            if report.all_zero {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Sdr(sdr) => run_sdr(sdr, seed),
        Command::Pd(Pd::Check {
            pencil,
            samples,
            box_,
        }) => {
            let pencil = read_pencil(pencil)?;
            let half = parse_rational(box_)?;
            let report = pd_feasibility_sample(&pencil, *samples, seed, &half)?;
            Ok(to_value(&report))
        }
    }
}

fn checked(out: Value, pass: bool) -> Result<Value, Failure> {
    if pass {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn run_sdr(cmd: &Sdr, seed: u64) -> Result<Value, Failure> {
    match cmd {
        Sdr::Quad { poly, check } => {
            let p = read_poly(poly)?;
            let q = quadratic_sdr(&p)?;
            let pencil = AnyPencil::Float(q.pencil.clone());
            let report = verify_sdr(&pencil, &p, check.trials, seed, check.tol)?;
            let mut out = to_value(&q);
            out["poly"] = to_value(&p);
            out["pencil"] = pencil.to_json();
            out["verification"] = to_value(&report);
            out["seed"] = json!(seed);
            checked(out, report.pass)
        }
        Sdr::Powersum { file, check } => {
            let form = PowerSumForm::from_json_str(&read(file)?)?;
            let pencil = AnyPencil::Exact(power_sum_sdr(&form)?);
            let p = form.expand();
            let report = verify_sdr(&pencil, &p, check.trials, seed, check.tol)?;
            let out = json!({
                "form": to_value(&form),
                "poly": to_value(&p),
                "size": pencil.size(),
                "bound": to_value(&size_bound(form.d as u64, form.rank() as u64)),
                "pencil": pencil.to_json(),
                "verification": to_value(&report),
                "seed": seed,
            });
            checked(out, report.pass)
        }
        Sdr::Product { left, right } => {
            let c = product_sdr_any(&read_pencil(left)?, &read_pencil(right)?)?;
            Ok(json!({"size": c.size(), "pencil": c.to_json(), "seed": seed}))
        }
        Sdr::Verify {
            pencil,
            poly,
            check,
        } => {
            let pencil = read_pencil(pencil)?;
            let p = read_poly(poly)?;
            let report = verify_sdr(&pencil, &p, check.trials, seed, check.tol)?;
            let pass = report.pass;
            checked(to_value(&report), pass)
        }
        Sdr::Bound { d, r } => {
            if *d == 0 || *r == 0 {
                return Err(Failure::Usage("--d and --r must be at least 1".into()));
            }
            let mut out = to_value(&size_bound(*d, *r));
            out["seed"] = json!(seed);
            Ok(out)
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match (format, v) {
        (Format::Text, Value::Object(map)) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                v => format!("{k}: {v}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => serde_json::to_string_pretty(v).expect("json renders"),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(v) => {
            emit(&render(&v, cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            emit(&render(&v, cli.format));
            eprintln!("error: verification failed");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
