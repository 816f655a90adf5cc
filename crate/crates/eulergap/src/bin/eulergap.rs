//! Command-line surface: evaluate expansions, certify reweighted gaps,
//! extract cuts, analyze mixing, generate instances, and run the acceptance
//! suite. Every command prints a single JSON envelope on stdout.

use clap::{Parser, Subcommand, ValueEnum};
use eulergap::graph::{brute_force_optimum, BruteForceInstance, DirectedGraph, VertexWeights};
use eulergap::instances::{generate, Generated, InstanceSpec};
use eulergap::mixing;
use eulergap::rounding::{hypergraph_cut, spectral_cut, CutOptions, CutResult};
use eulergap::spectral::{gamma2_hypergraph, max_reweighted_gap, Mode, SolveOptions, TraceRecord};
use eulergap::{io as gio, Error};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "eulergap",
    version,
    about = "reweighted spectral gaps and certified cuts for directed graphs and hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the JSON envelope (the default; kept for scripting symmetry).
    #[arg(long, global = true)]
    json: bool,
    /// Suppress stdout; the exit code still reflects the outcome.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Vertex,
    Edge,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Vertex => Mode::Vertex,
            ModeArg::Edge => Mode::Edge,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Relative bracket tolerance.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Number of bottom eigenvalues in the objective (2 = spectral gap).
    #[arg(long, default_value_t = 2)]
    k: usize,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            k: self.k,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the expansion of an explicit vertex subset.
    Expansion {
        input: PathBuf,
        /// Comma-separated vertex ids of S.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        /// Vertex weight file (vertex mode; defaults to all ones).
        #[arg(long)]
        pi: Option<PathBuf>,
    },
    /// Exhaustive optimum over all proper nonempty subsets (n <= 24).
    Bruteforce {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        #[arg(long)]
        pi: Option<PathBuf>,
    },
    /// Asymmetric ratio by Hoffman bisection.
    Alpha {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        #[arg(long)]
        pi: Option<PathBuf>,
    },
    /// Hoffman circulation between w and alpha * w, or an infeasibility verdict.
    Circulation {
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Certified bracket for the reweighted spectral gap.
    Gap {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        #[arg(long)]
        pi: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
        /// Write per-iteration trace records (line-delimited JSON).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Spectral cut with end-to-end certificates.
    Cut {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        #[arg(long)]
        pi: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Override the random-projection dimension.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        ensemble: usize,
        /// Worker threads for the ensemble (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Reweighted spectral gap of a hypergraph.
    HyperGap {
        input: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Certified hypergraph conductance cut.
    HyperCut {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Override the random-projection dimension.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        ensemble: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Analyze the ordinary random walk on the input graph.
    Mixing {
        input: PathBuf,
        #[arg(long, default_value_t = 1.0 / std::f64::consts::E)]
        eps: f64,
    },
    /// Fastest-mixing chain from the optimal vertex reweighting.
    Fastest {
        input: PathBuf,
        /// Stationary distribution file (defaults to uniform).
        #[arg(long)]
        pi: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Generate a named instance family.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Output file; omitted means the text goes into the JSON payload.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 1729)]
        seed: u64,
    },
}

fn finite_or_inf(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!("inf")
    }
}

fn read_input(path: &PathBuf) -> Result<(String, String), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok((text, hex))
}

fn load_graph(path: &PathBuf) -> Result<(DirectedGraph, Value), Error> {
    let (text, digest) = read_input(path)?;
    let g = gio::parse_digraph(&text)?;
    Ok((
        g,
        json!({"path": path.display().to_string(), "sha256": digest}),
    ))
}

fn load_pi(path: &Option<PathBuf>, n: usize) -> Result<Option<VertexWeights>, Error> {
    match path {
        None => Ok(None),
        Some(p) => {
            let (text, _) = read_input(p)?;
            Ok(Some(gio::parse_vertex_weights(&text, n)?))
        }
    }
}

fn set_to_mask(set: &[usize], n: usize) -> Result<u64, Error> {
    let mut mask = 0u64;
    for &v in set {
        if v >= n {
            return Err(Error::Parameter(format!("vertex {v} out of range")));
        }
        mask |= 1 << v;
    }
    Ok(mask)
}

fn bracket_json(b: &eulergap::SpectralBracket) -> Value {
    json!({
        "lambda_lo": b.lambda_lo,
        "lambda_hi": finite_or_inf(b.lambda_hi),
        "width": finite_or_inf(b.lambda_hi - b.lambda_lo),
        "iterations": b.iterations,
        "converged": b.converged,
    })
}

fn cut_json(res: &CutResult) -> Value {
    json!({
        "value": res.cut.value,
        "set": res.cut.set,
        "mode": res.cut.mode,
        "lambda_lo": res.bracket.lambda_lo,
        "lambda_hi": finite_or_inf(res.bracket.lambda_hi),
        "diagnostics": serde_json::to_value(&res.diagnostics).unwrap(),
    })
}

fn trace_writer(path: Option<PathBuf>) -> Result<Option<std::fs::File>, Error> {
    match path {
        None => Ok(None),
        Some(p) => std::fs::File::create(&p)
            .map(Some)
            .map_err(|e| Error::Parse(format!("cannot create {}: {e}", p.display()))),
    }
}

/// exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
/// 4 infeasible
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => 4,
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

struct Outcome {
    command: String,
    input: Value,
    params: Value,
    result: Value,
    exit: i32,
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Expansion {
            input,
            set,
            mode,
            pi,
        } => {
            let (g, info) = load_graph(input)?;
            let mask = set_to_mask(set, g.n())?;
            let pi_w = load_pi(pi, g.n())?;
            let value = match mode {
                ModeArg::Edge => eulergap::graph::directed_edge_conductance(&g, mask)?,
                ModeArg::Vertex => {
                    let pi_w = pi_w
                        .clone()
                        .unwrap_or_else(|| VertexWeights::uniform(g.n()));
                    eulergap::graph::directed_vertex_expansion(&g, &pi_w, mask)?
                }
            };
            Ok(Outcome {
                command: "expansion".into(),
                input: info,
                params: json!({"mode": mode_name(*mode), "set": set}),
                result: json!({"value": value}),
                exit: 0,
            })
        }
        Command::Bruteforce { input, mode, pi } => {
            let (g, info) = load_graph(input)?;
            let pi_w = load_pi(pi, g.n())?;
            let cut = match mode {
                ModeArg::Edge => brute_force_optimum(BruteForceInstance::Edge(&g))?,
                ModeArg::Vertex => {
                    let pi_w = pi_w
                        .clone()
                        .unwrap_or_else(|| VertexWeights::uniform(g.n()));
                    brute_force_optimum(BruteForceInstance::Vertex(&g, &pi_w))?
                }
            };
            Ok(Outcome {
                command: "bruteforce".into(),
                input: info,
                params: json!({"mode": mode_name(*mode)}),
                result: json!({"value": cut.value, "set": cut.set}),
                exit: 0,
            })
        }
        Command::Alpha { input, mode, pi } => {
            let (g, info) = load_graph(input)?;
            let weights: Vec<f64> = match mode {
                ModeArg::Edge => g.edges().iter().map(|e| e.weight).collect(),
                ModeArg::Vertex => {
                    let pi_w = load_pi(pi, g.n())?.unwrap_or_else(|| VertexWeights::uniform(g.n()));
                    eulergap::graph::pi_induced_weights(&g, &pi_w)
                }
            };
            let alpha = eulergap::flow::asymmetric_ratio(&g, &weights)?;
            Ok(Outcome {
                command: "alpha".into(),
                input: info,
                params: json!({"mode": mode_name(*mode)}),
                result: json!({"alpha": finite_or_inf(alpha)}),
                exit: 0,
            })
        }
        Command::Circulation { input, alpha } => {
            let (g, info) = load_graph(input)?;
            let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
            let params = json!({"alpha": alpha});
            match eulergap::flow::hoffman_circulation(&g, &w, *alpha)? {
                Some(a) => {
                    let arcs: Vec<Value> = g
                        .edges()
                        .iter()
                        .zip(&a.weights)
                        .map(|(e, &x)| json!({"tail": e.tail, "head": e.head, "weight": x}))
                        .collect();
                    Ok(Outcome {
                        command: "circulation".into(),
                        input: info,
                        params,
                        result: json!({"feasible": true, "circulation": arcs}),
                        exit: 0,
                    })
                }
                None => Ok(Outcome {
                    command: "circulation".into(),
                    input: info,
                    params,
                    result: json!({"feasible": false}),
                    exit: 4,
                }),
            }
        }
        Command::Gap {
            input,
            mode,
            pi,
            solve,
            trace,
        } => {
            let (g, info) = load_graph(input)?;
            let pi_w = load_pi(pi, g.n())?;
            let opts = solve.options();
            let mut sink = trace_writer(trace.clone())?;
            let mut cb = |r: TraceRecord| {
                if let Some(f) = sink.as_mut() {
                    let _ = writeln!(f, "{}", serde_json::to_string(&r).unwrap());
                }
            };
            let tracer: Option<&mut dyn FnMut(TraceRecord)> =
                if trace.is_some() { Some(&mut cb) } else { None };
            let b = max_reweighted_gap(&g, (*mode).into(), pi_w.as_ref(), &opts, tracer)?;
            let exit = if b.converged { 0 } else { 3 };
            Ok(Outcome {
                command: "gap".into(),
                input: info,
                params: json!({"mode": mode_name(*mode), "tol": opts.tol,
                               "max_iters": opts.max_iters, "k": opts.k}),
                result: bracket_json(&b),
                exit,
            })
        }
        Command::Cut {
            input,
            mode,
            pi,
            tol,
            max_iters,
            k,
            seed,
            ensemble,
            threads,
        } => {
            let (g, info) = load_graph(input)?;
            let pi_w = load_pi(pi, g.n())?;
            let opts = CutOptions {
                solve: SolveOptions {
                    tol: *tol,
                    max_iters: *max_iters,
                    ..Default::default()
                },
                ensemble: *ensemble,
                threads: *threads,
                projection_dim: *k,
                ..Default::default()
            };
            let res = spectral_cut(&g, (*mode).into(), pi_w.as_ref(), *seed, &opts)?;
            Ok(Outcome {
                command: "cut".into(),
                input: info,
                params: json!({"mode": mode_name(*mode), "tol": tol, "seed": seed,
                               "ensemble": ensemble, "k": k}),
                result: cut_json(&res),
                exit: 0,
            })
        }
        Command::HyperGap {
            input,
            solve,
            trace,
        } => {
            let (text, digest) = read_input(input)?;
            let h = gio::parse_hypergraph(&text)?;
            let opts = solve.options();
            let mut sink = trace_writer(trace.clone())?;
            let mut cb = |r: TraceRecord| {
                if let Some(f) = sink.as_mut() {
                    let _ = writeln!(f, "{}", serde_json::to_string(&r).unwrap());
                }
            };
            let tracer: Option<&mut dyn FnMut(TraceRecord)> =
                if trace.is_some() { Some(&mut cb) } else { None };
            let b = gamma2_hypergraph(&h, &opts, tracer)?;
            let exit = if b.converged { 0 } else { 3 };
            Ok(Outcome {
                command: "hyper-gap".into(),
                input: json!({"path": input.display().to_string(), "sha256": digest}),
                params: json!({"tol": opts.tol, "max_iters": opts.max_iters}),
                result: bracket_json(&b),
                exit,
            })
        }
        Command::HyperCut {
            input,
            tol,
            max_iters,
            k,
            seed,
            ensemble,
            threads,
        } => {
            let (text, digest) = read_input(input)?;
            let h = gio::parse_hypergraph(&text)?;
            let opts = CutOptions {
                solve: SolveOptions {
                    tol: *tol,
                    max_iters: *max_iters,
                    ..Default::default()
                },
                ensemble: *ensemble,
                threads: *threads,
                projection_dim: *k,
                ..Default::default()
            };
            let res = hypergraph_cut(&h, *seed, &opts)?;
            Ok(Outcome {
                command: "hyper-cut".into(),
                input: json!({"path": input.display().to_string(), "sha256": digest}),
                params: json!({"tol": tol, "seed": seed, "ensemble": ensemble, "k": k}),
                result: cut_json(&res),
                exit: 0,
            })
        }
        Command::Mixing { input, eps } => {
            let (g, info) = load_graph(input)?;
            let chain = mixing::random_walk_chain(&g)?;
            let pi = mixing::stationary(&chain)?;
            let l = mixing::chung_laplacian(&chain, &pi)?;
            let (vals, _) = eulergap::spectral::bottom_eigs(&l, 2)?;
            let lazy = chain.lazy();
            let tau_tv = mixing::mixing_time_tv(&lazy, &pi, *eps)?;
            let tau_inf = mixing::mixing_time_inf(&lazy, &pi, *eps)?;
            let h_part = if g.n() <= eulergap::graph::BRUTE_FORCE_CAP {
                let (h, set) = mixing::cheeger_constant_h(&chain, &pi)?;
                json!({"value": h, "set": set})
            } else {
                Value::Null
            };
            Ok(Outcome {
                command: "mixing".into(),
                input: info,
                params: json!({"eps": eps}),
                result: json!({
                    "stationary": pi.as_slice(),
                    "lambda2_reweighted_laplacian": vals[1],
                    "cheeger_constant": h_part,
                    "tau_tv_lazy": finite_or_inf(tau_tv.as_f64()),
                    "tau_inf_lazy": finite_or_inf(tau_inf.as_f64()),
                }),
                exit: 0,
            })
        }
        Command::Fastest { input, pi, solve } => {
            let (g, info) = load_graph(input)?;
            let pi_w =
                load_pi(pi, g.n())?.unwrap_or_else(|| VertexWeights::uniform_distribution(g.n()));
            let fm = mixing::fastest_mixing(&g, &pi_w, &solve.options())?;
            let chain_rows: Value = if g.n() <= 32 {
                json!((0..fm.chain.n())
                    .map(|u| (0..fm.chain.n())
                        .map(|v| fm.chain.get(u, v))
                        .collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            } else {
                Value::Null
            };
            Ok(Outcome {
                command: "fastest".into(),
                input: info,
                params: json!({"tol": solve.tol}),
                result: json!({
                    "mixing": fm.mixing,
                    "tau": finite_or_inf(fm.tau.as_f64()),
                    "stationarity_residual": fm.stationarity_residual,
                    "bounds": {
                        "psi": fm.bounds.psi,
                        "lower_bound": fm.bounds.lower_bound.map(finite_or_inf),
                        "lambda_lo": fm.bounds.lambda_lo,
                        "upper_proxy": finite_or_inf(fm.bounds.upper_proxy),
                    },
                    "lazy_chain": chain_rows,
                }),
                exit: 0,
            })
        }
        Command::Gen {
            family,
            n,
            m,
            r,
            seed,
            out,
        } => {
            let spec = InstanceSpec {
                family: family.clone(),
                n: *n,
                m: *m,
                r: *r,
                seed: *seed,
                note: String::new(),
            };
            let text = match generate(&spec)? {
                Generated::Digraph(g) => gio::write_digraph(&g),
                Generated::Hypergraph(h) => gio::write_hypergraph(&h),
            };
            let written = match out {
                Some(p) => {
                    std::fs::write(p, &text)
                        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display())))?;
                    json!({"path": p.display().to_string()})
                }
                None => json!({"text": text}),
            };
            Ok(Outcome {
                command: "gen".into(),
                input: Value::Null,
                params: serde_json::to_value(&spec).unwrap(),
                result: written,
                exit: 0,
            })
        }
        Command::Selftest { seed } => {
            let outcome = eulergap::selftest::run_all(*seed);
            let exit = if outcome.all_passed { 0 } else { 1 };
            Ok(Outcome {
                command: "selftest".into(),
                input: Value::Null,
                params: json!({"seed": seed}),
                result: serde_json::to_value(&outcome).unwrap(),
                exit,
            })
        }
    }
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Vertex => "vertex",
        ModeArg::Edge => "edge",
    }
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    match execute(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                let envelope = json!({
                    "schema": 1,
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": outcome.command,
                    "input": outcome.input,
                    "params": outcome.params,
                    "result": outcome.result,
                    "timing_ms": start.elapsed().as_millis() as u64,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            }
            std::process::exit(outcome.exit);
        }
        Err(e) => {
            if !cli.quiet {
                let envelope = json!({
                    "schema": 1,
                    "version": env!("CARGO_PKG_VERSION"),
                    "error": e.to_string(),
                    "timing_ms": start.elapsed().as_millis() as u64,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            }
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
