//! Command-line front end for `loometric`.
//!
//! Every subcommand prints one JSON document to standard output (or to
//! `--out`). Exit codes: 0 for success or a positive answer, 1 for a
//! structured negative result, 2 for usage and input errors.

pub mod experiment;
pub mod io;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use loometric::embed::constructive_dimension;
use loometric::gh::DEFAULT_GH_BUDGET;
use loometric::rational::{parse_rational, Rational};
use loometric::{Embedding, FiniteMetricSpace, SolverOptions};
use serde_json::{json, Value};

use crate::experiment::{experiment_genericity, ExperimentParams};
use crate::io::{Format, InputError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "loometric", version, about = "Loose embeddings and Gromov-Hausdorff tools for finite metric spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write an SVG scatter plot of the embedding (dimension 1 or 2 only).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a distance matrix is a metric.
    Validate { space: PathBuf },
    /// Group pairs by distance value.
    Pattern { space: PathBuf },
    /// Largest equidistant subset and the dimension bound it implies.
    Simplex { space: PathBuf },
    /// Loose embedding of an injective space into the line.
    EmbedLine { space: PathBuf },
    /// Loose embedding into R^dim.
    Embed {
        space: PathBuf,
        #[arg(long)]
        dim: usize,
        /// On failure, retry in dim + 1, dim + 2, ... up to a dimension
        /// where an explicit construction exists.
        #[arg(long)]
        escalate: bool,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Perturb distances by at most eps so that all of them differ.
    Perturb {
        space: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
    },
    /// Gromov-Hausdorff distance between two spaces.
    Gh {
        first: PathBuf,
        second: PathBuf,
        /// Search nodes before falling back to bounds.
        #[arg(long, default_value_t = DEFAULT_GH_BUDGET)]
        budget: u64,
    },
    /// Find or check a partition witnessing membership in M_{N,M}.
    Mnm {
        space: PathBuf,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "M")]
        m: u64,
        /// JSON array of blocks, each an array of labels.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Order of a cover, optionally checked as a dimension witness.
    CoverOrder {
        space: PathBuf,
        /// JSON array of members, each an array of labels.
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, requires_all = ["n", "m"])]
        check_dim: Option<usize>,
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long = "M")]
        m: Option<u64>,
    },
    /// Peel off isolated points at decreasing radii.
    Strip {
        space: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        thresholds: Vec<Rational>,
    },
    /// Monte-Carlo run of perturbation and witness search on random spaces.
    Experiment {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_parser = rational_arg, default_value = "1/1000")]
        eps: Rational,
        #[arg(long, default_value_t = 6)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long = "N", value_delimiter = ',', default_value = "1,2,4")]
        n_grid: Vec<u64>,
        #[arg(long = "M", value_delimiter = ',', default_value = "4,16,64,256")]
        m_grid: Vec<u64>,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Failure that ends a command with exit code 2.
#[derive(Debug, thiserror::Error)]
enum Fatal {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

struct Outcome {
    code: i32,
    json: Value,
    embedding: Option<(FiniteMetricSpace, Embedding)>,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { code: EXIT_OK, json, embedding: None }
    }

    fn negative(json: Value) -> Self {
        Outcome { code: EXIT_NEGATIVE, json, embedding: None }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOOMETRIC_LOG", "error"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|outcome| emit(&cli.global, outcome)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(global: &Global, outcome: Outcome) -> Result<i32, Fatal> {
    let mut text = serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize");
    text.push('\n');
    match &global.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &global.svg {
        match &outcome.embedding {
            Some((space, emb)) => match svg::scatter(space, emb) {
                Some(picture) => write_file(path, &picture)?,
                None => log::warn!("--svg ignored: embedding has dimension {}", emb.dim),
            },
            None => log::warn!("--svg ignored: no embedding produced"),
        }
    }
    Ok(outcome.code)
}

fn write_file(path: &Path, text: &str) -> Result<(), Fatal> {
    std::fs::write(path, text).map_err(|source| Fatal::Write {
        path: path.display().to_string(),
        source,
    })
}

fn load(global: &Global, path: &Path) -> Result<FiniteMetricSpace, Fatal> {
    let format = global.format.unwrap_or_else(|| Format::from_path(path));
    let space = io::parse_space(path, format)?;
    log::info!("{}: {} points", path.display(), space.len());
    Ok(space)
}

/// Reads a JSON array of label arrays and maps labels to indices.
fn load_blocks(space: &FiniteMetricSpace, path: &Path) -> Result<Vec<Vec<usize>>, Fatal> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: name.clone(),
        source,
    })?;
    let blocks: Vec<Vec<String>> = serde_json::from_str(&text).map_err(|e| InputError::Parse {
        path: name.clone(),
        line: e.line(),
        column: e.column(),
        message: "expected an array of arrays of labels".to_string(),
    })?;
    blocks
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|label| {
                    space
                        .index_of(label)
                        .ok_or_else(|| Fatal::Usage(format!("{name}: unknown label {label:?}")))
                })
                .collect()
        })
        .collect()
}

fn execute(cli: &Cli) -> Result<Outcome, Fatal> {
    let global = &cli.global;
    match &cli.command {
        Command::Validate { space } => {
            let format = global.format.unwrap_or_else(|| Format::from_path(space));
            match io::parse_space(space, format) {
                Ok(s) => Ok(Outcome::ok(json!({ "valid": true, "points": s.len() }))),
                Err(InputError::Validation { source, .. }) => {
                    Ok(Outcome::negative(report::metric_error(&source)))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Pattern { space } => {
            let s = load(global, space)?;
            Ok(Outcome::ok(report::pattern(&s, &loometric::distance_pattern(&s))))
        }
        Command::Simplex { space } => {
            let s = load(global, space)?;
            let w = loometric::max_regular_simplex(&s).map_err(|e| Fatal::Usage(e.to_string()))?;
            Ok(Outcome::ok(report::simplex(&s, &w)))
        }
        Command::EmbedLine { space } => {
            let s = load(global, space)?;
            match loometric::embed_line_branching(&s, global.seed) {
                Ok(e) => Ok(Outcome {
                    code: EXIT_OK,
                    json: report::embedding(&s, &e),
                    embedding: Some((s, e)),
                }),
                Err(err) => Ok(Outcome::negative(report::embed_error(&s, &err))),
            }
        }
        Command::Embed {
            space,
            dim,
            escalate,
            restarts,
        } => {
            let s = load(global, space)?;
            let opts = SolverOptions {
                seed: global.seed,
                restarts: *restarts,
                ..SolverOptions::default()
            };
            let result = if *escalate {
                let top = constructive_dimension(&s).max(*dim);
                loometric::embed::solve_escalating(&s, *dim..=top, &opts)
            } else {
                loometric::solve_loose_embedding(&s, *dim, &opts)
            };
            match result {
                Ok(e) => Ok(Outcome {
                    code: EXIT_OK,
                    json: report::embedding(&s, &e),
                    embedding: Some((s, e)),
                }),
                Err(r) => Ok(Outcome::negative(report::infeasible(&s, &r))),
            }
        }
        Command::Perturb { space, eps } => {
            let s = load(global, space)?;
            match loometric::perturb_to_injective(&s, eps, global.seed) {
                Ok(p) => Ok(Outcome::ok(io::space_to_json(&p))),
                Err(err) => Ok(Outcome::negative(report::embed_error(&s, &err))),
            }
        }
        Command::Gh { first, second, budget } => {
            let x = load(global, first)?;
            let y = load(global, second)?;
            if x.is_empty() != y.is_empty() {
                return Err(Fatal::Usage("cannot compare an empty space with a nonempty one".into()));
            }
            Ok(Outcome::ok(report::gh(&loometric::gh_exact(&x, &y, *budget))))
        }
        Command::Mnm { space, n, m, partition } => {
            let s = load(global, space)?;
            if *n == 0 || *m == 0 {
                return Err(Fatal::Usage("--N and --M must be positive".into()));
            }
            match partition {
                Some(path) => {
                    let blocks = load_blocks(&s, path)?;
                    let verdict = loometric::check_mnm(&s, &blocks, *n, *m)
                        .map_err(|e| Fatal::Usage(format!("{}: {e}", path.display())))?;
                    Ok(match verdict {
                        None => Outcome::ok(json!({ "holds": true, "blocks": blocks_json(&s, &blocks) })),
                        Some(v) => Outcome::negative(report::witness_violation(&s, &v)),
                    })
                }
                None => Ok(match loometric::find_mnm_partition(&s, *n, *m) {
                    Some(w) => Outcome::ok(report::witness(&s, &w)),
                    None => Outcome::negative(json!({ "holds": false, "search_space": "dendrogram-cuts" })),
                }),
            }
        }
        Command::CoverOrder {
            space,
            cover,
            check_dim,
            n,
            m,
        } => {
            let s = load(global, space)?;
            let members = load_blocks(&s, cover)?;
            let bad_cover = |e: loometric::gh::GhError| Fatal::Usage(format!("{}: {e}", cover.display()));
            let order = loometric::cover_order(&s, &members).map_err(bad_cover)?;
            let Some(dim) = check_dim else {
                return Ok(Outcome::ok(json!({ "order": order })));
            };
            let (n, m) = (n.expect("required by clap"), m.expect("required by clap"));
            if n == 0 || m == 0 {
                return Err(Fatal::Usage("--N and --M must be positive".into()));
            }
            let verdict =
                loometric::check_dimension_witness(&s, &members, n, m, *dim).map_err(bad_cover)?;
            Ok(match verdict {
                None => Outcome::ok(json!({ "order": order, "holds": true, "dim": dim })),
                Some(v) => {
                    let mut out = report::witness_violation(&s, &v);
                    out["order"] = json!(order);
                    out["dim"] = json!(dim);
                    Outcome::negative(out)
                }
            })
        }
        Command::Strip { space, thresholds } => {
            let s = load(global, space)?;
            let f = loometric::isolation_strip(&s, thresholds).map_err(|e| Fatal::Usage(e.to_string()))?;
            Ok(Outcome::ok(report::strip(&s, &f)))
        }
        Command::Experiment {
            trials,
            eps,
            points,
            dim,
            n_grid,
            m_grid,
        } => {
            if n_grid.contains(&0) || m_grid.contains(&0) {
                return Err(Fatal::Usage("--N and --M must be positive".into()));
            }
            let params = ExperimentParams {
                trials: *trials,
                points: *points,
                dim: *dim,
                eps: eps.clone(),
                n_grid: n_grid.clone(),
                m_grid: m_grid.clone(),
                seed: global.seed,
            };
            let r = experiment_genericity(&params).map_err(|e| Fatal::Usage(e.to_string()))?;
            Ok(Outcome::ok(serde_json::to_value(r).expect("report serializes")))
        }
    }
}

fn blocks_json(space: &FiniteMetricSpace, blocks: &[Vec<usize>]) -> Value {
    blocks
        .iter()
        .map(|b| b.iter().map(|&p| space.label(p)).collect::<Value>())
        .collect()
}
