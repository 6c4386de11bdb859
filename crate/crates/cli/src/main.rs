//! `specgraph`: command-line driver for special forms, their graphs,
//! realisations, democratic families and comass estimates.
//!
//! Exit codes: 0 on success, 2 for malformed input or a failed
//! precondition, 3 when an enumeration cap is exceeded.

mod config;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use special_graphs::calibration::{comass_with, ComassConfig};
use special_graphs::democratic::{
    bell, circulant_matrix, classify_with_alphabet, count_symmetry_families, even_example_matrix,
    factorizations, product_matrix_from_values, Factorization, DEFAULT_CLASSIFY_MAX_R,
};
use special_graphs::forms::{canonical_witness, SpecialForm};
use special_graphs::graphs::{
    graph_of_form, is_admissible, is_democratic_with_cap, predemocratic_counts,
    symmetries_with_cap, to_dot, DistanceMatrix, VertexPermutation,
};
use special_graphs::realization::{
    forms_of_with_cap, realize, sign_class_count, solve_with, SolveOptions,
};

use config::{Format, RunConfig, CONFIG_ENV};

#[derive(Parser)]
#[command(
    name = "specgraph",
    version,
    about = "Special p-forms and their distance graphs"
)]
struct Cli {
    /// `key = value` config file (seed, caps, tol, output, format).
    #[arg(long, env = CONFIG_ENV, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical representative of a form under signed permutations.
    Canon {
        /// Form JSON, or `-` for standard input.
        form: PathBuf,
        /// Also print the signed permutation reaching the canonical form.
        #[arg(long)]
        witness: bool,
    },
    /// Distance matrix of a form (JSON), or its drawing (`--format dot`).
    Graph {
        form: PathBuf,
        /// Report admissibility, distance counts and the symmetry group.
        #[arg(long)]
        analyze: bool,
    },
    /// Graph functions, realisations and sign classes for a distance matrix.
    Realize {
        /// Distance-matrix JSON, or `-` for standard input.
        matrix: PathBuf,
        #[arg(long)]
        p: u32,
        /// Keep only solutions of this dimension.
        #[arg(long)]
        d: Option<u32>,
        /// List every sign class of forms for each realisation.
        #[arg(long)]
        all_signs: bool,
        /// Keep only f invariant under this 1-based vertex permutation
        /// (comma separated images); may be repeated.
        #[arg(long = "invariant-under", value_parser = parse_perm)]
        invariant_under: Vec<VertexPermutation>,
    },
    /// Democratic matrix families.
    Democratic {
        #[command(subcommand)]
        command: DemocraticCommand,
    },
    /// Numerical comass of a form.
    Calibrate {
        form: PathBuf,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write per-restart values as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bell number `B_m`.
    Bell { m: usize },
}

#[derive(Subcommand)]
enum DemocraticCommand {
    /// Build a matrix: `--circulant R D1,..`, `--even R D1,..` or `--product R1,R2,.. D1,..`.
    Matrix(MatrixArgs),
    /// List the symmetry families for `r`: factorisations, difference
    /// classes and generators.
    Enum { r: usize },
    /// Number of symmetry families for `r`.
    Count { r: usize },
    /// Exhaustive classification at small odd prime `r`.
    Classify {
        r: usize,
        /// Distances to draw from (comma separated); default `1..=p`.
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<u32>>,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("family").required(true).args(["circulant", "even", "product"])))]
struct MatrixArgs {
    #[arg(long)]
    circulant: Option<usize>,
    #[arg(long)]
    even: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    product: Option<Vec<usize>>,
    /// Comma separated distances.
    #[arg(value_delimiter = ',', required = true)]
    distances: Vec<u32>,
    /// Degree used for drawing: distance-p edges are omitted. Default:
    /// one more than the largest distance.
    #[arg(long)]
    p: Option<u32>,
}

fn parse_perm(s: &str) -> Result<VertexPermutation, String> {
    let images = s
        .split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("bad vertex {x:?} (1-based)")),
            Ok(v) => Ok(v - 1),
        })
        .collect::<Result<Vec<_>, _>>()?;
    VertexPermutation::new(images).map_err(|e| e.to_string())
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<special_graphs::Error> for Failure {
    fn from(e: special_graphs::Error) -> Self {
        Failure {
            code: if e.is_capacity() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| input_error(format!("invalid JSON in {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn only_json(cfg: &RunConfig, what: &str) -> Result<(), Failure> {
    if cfg.format != Format::Json {
        return Err(input_error(format!("{what} only supports --format json")));
    }
    Ok(())
}

/// Runs the command; returns the text to emit and where to write it.
fn run(cli: Cli) -> Result<(String, Option<PathBuf>), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(input_error)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    cfg.validate().map_err(input_error)?;

    let text = match cli.command {
        Command::Canon { form, witness } => {
            only_json(&cfg, "canon")?;
            let phi: SpecialForm = read_json(&form)?;
            let (canon, g) = canonical_witness(&phi, cfg.canon_max_d)?;
            if witness {
                to_json(&json!({ "canonical": canon, "witness": g }))
            } else {
                to_json(&canon)
            }
        }
        Command::Graph { form, analyze } => {
            let phi: SpecialForm = read_json(&form)?;
            let m = graph_of_form(&phi)?;
            match cfg.format {
                Format::Dot => to_dot(&m, phi.p() as u32),
                Format::Csv => return Err(input_error("graph supports json or dot")),
                Format::Json if analyze => to_json(&analysis(&m, &cfg)?),
                Format::Json => to_json(&m),
            }
        }
        Command::Realize {
            matrix,
            p,
            d,
            all_signs,
            invariant_under,
        } => {
            only_json(&cfg, "realize")?;
            let m: DistanceMatrix = read_json(&matrix)?;
            let opts = SolveOptions {
                d_filter: d,
                invariant_under,
                max_r: cfg.solver_max_r,
            };
            let mut solutions = Vec::new();
            for f in solve_with(&m, p, &opts)? {
                let real = realize(&f)?;
                let mut entry = json!({
                    "function": f,
                    "realization": real,
                    "sign_class_count": sign_class_count(&real),
                });
                if all_signs {
                    entry["sign_classes"] = json!(forms_of_with_cap(&real, cfg.sign_max_r)?);
                }
                solutions.push(entry);
            }
            to_json(&json!({ "r": m.r(), "p": p, "solutions": solutions }))
        }
        Command::Democratic { command } => democratic(command, &cfg)?,
        Command::Calibrate {
            form,
            restarts,
            tol,
            csv,
        } => {
            let phi: SpecialForm = read_json(&form)?;
            if phi.is_empty() {
                return Err(input_error("the zero form has no comass to calibrate"));
            }
            let ccfg = ComassConfig {
                seed: cfg.seed,
                restarts: restarts.unwrap_or(ComassConfig::default().restarts),
                tol: tol.unwrap_or(cfg.tol),
                ..ComassConfig::default()
            };
            let report = comass_with(&phi, &ccfg)?;
            let table = {
                let mut s = String::from("restart,value\n");
                for (k, v) in report.restart_values.iter().enumerate() {
                    s.push_str(&format!("{k},{v}\n"));
                }
                s
            };
            if let Some(path) = csv {
                fs::write(&path, &table)
                    .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
            }
            match cfg.format {
                Format::Csv => table,
                Format::Dot => return Err(input_error("calibrate supports json or csv")),
                Format::Json => to_json(&report),
            }
        }
        Command::Bell { m } => {
            only_json(&cfg, "bell")?;
            to_json(
                &bell(m)
                    .to_string()
                    .parse::<serde_json::Number>()
                    .expect("integer"),
            )
        }
    };
    Ok((text, cfg.output))
}

fn analysis(m: &DistanceMatrix, cfg: &RunConfig) -> Result<serde_json::Value, Failure> {
    Ok(json!({
        "matrix": m,
        "admissible": is_admissible(m),
        "distance_counts": predemocratic_counts(m),
        "democratic": is_democratic_with_cap(m, cfg.symmetry_max_r)?,
        "symmetries": symmetries_with_cap(m, cfg.symmetry_max_r)?,
    }))
}

fn democratic(command: DemocraticCommand, cfg: &RunConfig) -> Result<String, Failure> {
    Ok(match command {
        DemocraticCommand::Matrix(args) => {
            let d = &args.distances;
            let m = if let Some(r) = args.circulant {
                if r % 2 == 0 {
                    return Err(input_error(format!("circulant needs odd r, got {r}")));
                }
                circulant_matrix((r - 1) / 2, d)?
            } else if let Some(r) = args.even {
                even_example_matrix(r, d)?
            } else {
                let factors = args.product.expect("clap enforces one family");
                product_matrix_from_values(&Factorization::new(factors)?, d)?
            };
            match cfg.format {
                Format::Dot => to_dot(&m, args.p.unwrap_or(m.max_entry() + 1)),
                Format::Csv => return Err(input_error("matrix supports json or dot")),
                Format::Json => to_json(&m),
            }
        }
        DemocraticCommand::Enum { r } => {
            only_json(cfg, "enum")?;
            count_symmetry_families(r)?;
            let families: Vec<serde_json::Value> = factorizations(r)
                .into_iter()
                .map(|f| {
                    json!({
                        "factors": f,
                        "difference_classes": f.difference_classes(),
                        "generators": f.generators(),
                    })
                })
                .collect();
            to_json(&families)
        }
        DemocraticCommand::Count { r } => {
            only_json(cfg, "count")?;
            to_json(&count_symmetry_families(r)?)
        }
        DemocraticCommand::Classify { r, alphabet, p } => {
            only_json(cfg, "classify")?;
            let alphabet = alphabet.unwrap_or_else(|| (1..=p).collect());
            to_json(&classify_with_alphabet(
                r,
                p,
                &alphabet,
                DEFAULT_CLASSIFY_MAX_R,
            )?)
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, output)) => {
            let result = match output {
                Some(path) => fs::write(&path, text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("specgraph: cannot write output: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(f) => {
            eprintln!("specgraph: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
