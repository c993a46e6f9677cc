//! `sparse-cce` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
//! 3 oracle or extraction found nothing.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sparse_cce::constructions::{
    build_augmented_game, build_basicemb_game, build_gz_game, build_lowprec_game, clique_cce, default_gamma,
    gamma_bound, GzParams, LowPrecParams,
};
use sparse_cce::eval::cce_gap;
use sparse_cce::formats;
use sparse_cce::graph::NodeSet;
use sparse_cce::planted::{self, clique_from_dense_pair, extract_dense_pair, gen_planted_graph, graph_from_game};
use sparse_cce::rational::{self, format_q, Q};
use sparse_cce::reduction::{
    run_reduction_with, BruteForceOracle, FileOracle, PerturbationOracle, PlantedOracle, ReductionConfig,
    SparseCceOracle,
};
use sparse_cce::report::{self, ReportFormat, RunMeta};
use sparse_cce::solvers::mwu::{self, mwu_run, mwu_run_float};
use sparse_cce::solvers::{lp_optimal_cce_with, Arithmetic, LpObjective, LpStatus};
use sparse_cce::Error;

#[derive(Parser, Debug)]
#[command(name = "sparse-cce", version, about = "Sparse coarse correlated equilibria toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Mode {
    Exact,
    Float,
}

impl From<Mode> for Arithmetic {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => Arithmetic::Exact,
            Mode::Float => Arithmetic::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gadget {
    Gz,
    Augmented,
    Basicemb,
    Lowprec,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleKind {
    Planted,
    Perturbation,
    Bruteforce,
    File,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a mixture on a game.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        mixture: PathBuf,
        /// Claimed gap; exit 2 when the exact gap exceeds it.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Build a gadget game from a graph.
    Construct {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        gadget: Gadget,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long = "sparsity", short = 't', default_value_t = 1)]
        sparsity: usize,
        #[arg(long)]
        gamma: Option<String>,
        /// Opt-out payoff of the basic-emb gadget.
        #[arg(long, default_value = "1/4")]
        eps: String,
        /// Spike magnitude M of the low-precision gadget.
        #[arg(long, default_value_t = 10)]
        spike: u64,
        /// Action count N of the low-precision gadget (default 8n).
        #[arg(long)]
        ambient: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Block certificate of a clique.
    CliqueCce {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated node ids.
        #[arg(long, value_delimiter = ',')]
        clique: Vec<usize>,
        #[arg(long = "sparsity", short = 't')]
        sparsity: usize,
        /// Strategy length (default 2n).
        #[arg(long)]
        game_size: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the clique reduction.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "sparsity", short = 't')]
        sparsity: usize,
        #[arg(long, value_enum, default_value_t = OracleKind::Planted)]
        oracle: OracleKind,
        /// Clique known to the planted and perturbation oracles.
        #[arg(long, value_delimiter = ',')]
        clique: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid denominator of the brute-force oracle.
        #[arg(long, default_value_t = 2)]
        resolution: usize,
        /// Mixture file or directory of `mixture_k<k>.json` files.
        #[arg(long)]
        oracle_path: Option<PathBuf>,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        parallel: bool,
    },
    /// Optimal CCE by linear programming.
    Lp {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value = "welfare")]
        objective: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        arithmetic: Mode,
        /// Where to write the joint distribution.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Multiplicative-weights dynamics.
    Dynamics {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        arithmetic: Mode,
        /// Where to write the empirical mixture.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Generate a planted-clique graph.
    Plant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
        /// Where to write the planted node set (JSON array).
        #[arg(long)]
        planted_out: Option<PathBuf>,
    },
    /// Dense pair and clique from a mixture on a low-precision game.
    DenseExtract {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        mixture: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        spike: u64,
    },
}

/// Outcome of a subcommand: the text to print and the exit code.
struct Done {
    output: String,
    code: u8,
}

fn ok(output: String) -> Result<Done> {
    Ok(Done { output, code: 0 })
}

fn meta(command: &str, arithmetic: &str, seed: Option<u64>) -> RunMeta {
    RunMeta {
        command: command.into(),
        arithmetic: arithmetic.into(),
        seed,
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Q> {
    rational::parse_q(s).with_context(|| format!("bad {what} {s:?}"))
}

fn write_or_print(path: &Option<PathBuf>, text: String) -> Result<String> {
    match path {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn resolve_gamma(gamma: &Option<String>, k: usize) -> Result<Q> {
    let Some(s) = gamma else {
        return Ok(default_gamma(k));
    };
    let g = parse_rational(s, "gamma")?;
    if g <= Q::from_integer(0.into()) {
        bail!("gamma must be positive");
    }
    if g >= gamma_bound(k) {
        eprintln!(
            "warning: gamma {} is not below 1/(40^2 k^6 (k+1)^2) for k = {k}; extraction guarantees do not apply",
            format_q(&g)
        );
    }
    if rational::exact_sqrt(&g).is_none() {
        eprintln!("warning: gamma is not a perfect square; the threshold step will fall back to the largest coordinates");
    }
    Ok(g)
}

fn node_set(nodes: &[usize]) -> NodeSet {
    nodes.iter().copied().collect()
}

fn run(cli: Cli) -> Result<Done> {
    let format: ReportFormat = cli.format.into();
    match cli.command {
        Command::Verify { game, mixture, eps } => {
            let g = formats::parse_game(&game)?;
            let mix = formats::parse_mixture(&mixture)?;
            let rep = cce_gap(&g, &mix)?;
            let out = report::emit_gap_report(&rep, &meta("verify", "exact", None), format);
            let code = match eps {
                Some(e) if rep.cce_gap > parse_rational(&e, "eps")? => 2,
                _ => 0,
            };
            Ok(Done { output: out, code })
        }
        Command::Construct {
            graph,
            gadget,
            k,
            sparsity,
            gamma,
            eps,
            spike,
            ambient,
            seed,
            out,
        } => {
            let g = formats::parse_graph(&graph)?;
            let game = match gadget {
                Gadget::Lowprec => {
                    let p = LowPrecParams::new(spike, ambient.unwrap_or(8 * g.n()), seed)?;
                    if !p.supports_sparsity(sparsity) {
                        eprintln!("warning: spike {spike} does not exceed 4T = {}", 4 * sparsity);
                    }
                    build_lowprec_game(&g, &p)?
                }
                _ => {
                    let p = GzParams::new(k, resolve_gamma(&gamma, k)?, sparsity)?;
                    match gadget {
                        Gadget::Gz => build_gz_game(&g, &p),
                        Gadget::Augmented => build_augmented_game(&g, &p),
                        _ => build_basicemb_game(&g, &p, &parse_rational(&eps, "eps")?)?,
                    }
                }
            };
            ok(write_or_print(&out, formats::emit_game_str(&game))?)
        }
        Command::CliqueCce {
            graph,
            clique,
            sparsity,
            game_size,
            out,
        } => {
            let g = formats::parse_graph(&graph)?;
            let k = node_set(&clique);
            if !g.is_clique(&k)? {
                eprintln!("error: the given nodes do not form a clique");
                return Ok(Done {
                    output: String::new(),
                    code: 2,
                });
            }
            let mix = clique_cce(&k, sparsity, game_size.unwrap_or(2 * g.n()))?;
            ok(write_or_print(&out, formats::emit_mixture_str(&mix))?)
        }
        Command::Reduce {
            graph,
            sparsity,
            oracle,
            clique,
            seed,
            resolution,
            oracle_path,
            gamma,
            parallel,
        } => {
            let g = formats::parse_graph(&graph)?;
            let known = node_set(&clique);
            let needs_clique = matches!(oracle, OracleKind::Planted | OracleKind::Perturbation);
            if needs_clique && !g.is_clique(&known)? {
                bail!("--clique must list a clique of the graph");
            }
            let boxed: Box<dyn SparseCceOracle> = match oracle {
                OracleKind::Planted => Box::new(PlantedOracle::new(known)),
                OracleKind::Perturbation => Box::new(PerturbationOracle::new(known, seed)),
                OracleKind::Bruteforce => Box::new(BruteForceOracle { resolution }),
                OracleKind::File => Box::new(FileOracle {
                    path: oracle_path.ok_or_else(|| anyhow!("--oracle-path is required for the file oracle"))?,
                }),
            };
            let gamma = match &gamma {
                Some(_) => Some(resolve_gamma(&gamma, g.n())?),
                None => None,
            };
            let config = ReductionConfig { parallel, gamma };
            let rep = run_reduction_with(&g, sparsity, boxed.as_ref(), &config)?;
            let seed = matches!(oracle, OracleKind::Perturbation).then_some(seed);
            let mut out = report::emit_reduction_report(&rep, &meta("reduce", "exact", seed), format);
            if format == ReportFormat::Text {
                out.push_str(&report::reduction_table(&rep));
            }
            let answered = rep.records.iter().any(|r| r.oracle_ok);
            let code = if !rep.records.is_empty() && !answered { 3 } else { 0 };
            Ok(Done { output: out, code })
        }
        Command::Lp {
            game,
            objective,
            arithmetic,
            out,
        } => {
            let g = formats::parse_game(&game)?;
            let objective: LpObjective = objective.parse()?;
            let sol = lp_optimal_cce_with(&g, objective, arithmetic.into());
            let body = json!({
                "status": sol.status,
                "objective": objective,
                "objective_value": sol.objective_value.as_ref().map(format_q),
                "pivots": sol.pivots,
            });
            let doc = report::envelope(&meta("lp", &Arithmetic::from(arithmetic).to_string(), None), "lp", &body);
            if let (Some(p), Some(j)) = (&out, &sol.joint) {
                fs::write(p, formats::emit_joint_str(j))?;
            }
            let code = if sol.status == LpStatus::Optimal { 0 } else { 2 };
            Ok(Done {
                output: report::render(&doc, format),
                code,
            })
        }
        Command::Dynamics {
            game,
            rounds,
            eta,
            arithmetic,
            out,
        } => {
            let g = formats::parse_game(&game)?;
            let (mix, summary) = match arithmetic {
                Mode::Exact => {
                    let (mix, h) = mwu_run(&g, rounds, eta)?;
                    (mix, mwu::summarize(&g, &h, format_q)?)
                }
                Mode::Float => {
                    let (mix, h) = mwu_run_float(&g, rounds, eta)?;
                    (mix, mwu::summarize(&g, &h, |v: &f64| format!("{v:e}"))?)
                }
            };
            if let Some(p) = &out {
                formats::emit_mixture(&mix, p)?;
            }
            let doc = report::envelope(
                &meta("dynamics", &Arithmetic::from(arithmetic).to_string(), None),
                "dynamics",
                &summary,
            );
            ok(report::render(&doc, format))
        }
        Command::Plant {
            n,
            k,
            seed,
            out,
            planted_out,
        } => {
            let inst = gen_planted_graph(n, k, seed)?;
            let header = format!("c planted clique n={n} k={k} seed={seed} nodes 1..{k}\n");
            fs::write(&out, header + &formats::emit_graph(&inst.graph))?;
            if let Some(p) = planted_out {
                fs::write(p, formats::node_set_to_json(&inst.planted).to_string() + "\n")?;
            }
            let doc = report::envelope(
                &meta("plant", "exact", Some(seed)),
                "plant",
                &json!({ "n": n, "k": k, "edges": inst.graph.edge_count() }),
            );
            ok(report::render(&doc, format))
        }
        Command::DenseExtract { game, mixture, d, spike } => {
            let g = formats::parse_game(&game)?;
            let mix = formats::parse_mixture(&mixture)?;
            let graph = graph_from_game(&g)?;
            let pair = match extract_dense_pair(&g, &mix, d, spike) {
                Ok(p) => p,
                Err(Error::NotFound(msg)) => {
                    eprintln!("not found: {msg}");
                    return Ok(Done {
                        output: String::new(),
                        code: 3,
                    });
                }
                Err(e) => return Err(e.into()),
            };
            let density = planted::dens(&graph, &pair.rows, &pair.cols)?;
            let rec = clique_from_dense_pair(&graph, &pair.rows, &pair.cols, d)?;
            let doc = report::envelope(
                &meta("dense-extract", "exact", None),
                "dense_pair",
                &json!({
                    "component": pair.component + 1,
                    "rows": pair.rows,
                    "cols": pair.cols,
                    "density": format_q(&density),
                    "clique": rec.clique,
                    "clique_size": rec.clique.len(),
                    "target": d,
                    "reached": rec.reached,
                }),
            );
            ok(report::render(&doc, format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(done) => {
            print!("{}", done.output);
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
