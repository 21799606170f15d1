use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cpcg_core::bench::{parse_range, rows_from_csv, write_csv};
use cpcg_core::cpcg::bus_plan_on;
use cpcg_core::io::{
    format_hardware, format_ising, format_problem, format_qubo, parse_hardware, parse_ising,
    parse_problem, parse_qubo, read_embedding, read_text, write_atomic, write_embedding,
};
use cpcg_core::lower::default_chain_strength;
use cpcg_core::qubo::qubo_problem_graph_labelled;
use cpcg_core::render::{render_chip, render_plot};
use cpcg_core::*;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "cpcg",
    version,
    about = "Minor embedding of K_m x K_n products into Chimera chips"
)]
struct Cli {
    /// Suppress informational output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Chimera hardware file, optionally with random dead qubits.
    GenChimera {
        #[arg(short = 'N', long)]
        rows: usize,
        #[arg(short = 'M', long)]
        cols: Option<usize>,
        #[arg(short = 'L', long, default_value_t = 4)]
        shore: usize,
        #[arg(long, default_value_t = 0)]
        dead: usize,
        #[arg(long, env = "CPCG_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the edge list of K_m x K_n with `a:i` labels.
    GenProduct {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the balanced K-way partitioning QUBO of a graph.
    GenPartitionQubo {
        /// Input graph file; alternatively --complete.
        #[arg(long, conflicts_with = "complete")]
        graph: Option<PathBuf>,
        /// Use the complete graph on this many vertices.
        #[arg(long)]
        complete: Option<usize>,
        #[arg(short = 'K', long)]
        parts: usize,
        #[arg(short = 'A', long, default_value_t = 3.0)]
        a: f64,
        #[arg(short = 'B', long, default_value_t = 3.0)]
        b: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recognise a graph or QUBO interaction graph as K_m x K_n.
    Detect { file: PathBuf },
    /// Build an embedding.
    #[command(subcommand)]
    Embed(EmbedCommand),
    /// Check an embedding against a problem and chip.
    Validate {
        embedding: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        hardware: Option<PathBuf>,
    },
    /// Chain-length statistics of an embedding.
    Stats { embedding: PathBuf },
    /// Map a logical QUBO or Ising model onto an embedding's qubits.
    Lower {
        /// Logical model: `p qubo` or `p ising` file.
        model: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        hardware: Option<PathBuf>,
        #[arg(long)]
        chain_strength: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Size formulas, treewidth bounds and optimality certificates.
    Analyze {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(short = 'L', long, default_value_t = 4)]
        shore: usize,
        /// Target chip side; reports a refusal if the product does not fit.
        #[arg(long)]
        chip: Option<usize>,
    },
    /// Draw an embedding (or a bench CSV with --plot) as SVG.
    Render {
        /// Embedding JSON, or bench CSV with --plot.
        input: PathBuf,
        #[arg(long)]
        hardware: Option<PathBuf>,
        #[arg(long)]
        plot: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded benchmark sweep written as CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum EmbedCommand {
    /// Systematic product embedding on an ideal chip.
    Cpcg {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(short = 'L', long, default_value_t = 4)]
        shore: usize,
        /// Chip side; defaults to the smallest that fits.
        #[arg(long)]
        chip: Option<usize>,
        /// Try both factors as the nexus and keep the smaller chip.
        #[arg(long, conflicts_with = "chip")]
        best: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Triangular clique embedding of K_k (or K_{mn} with -m/-n).
    Triangular {
        #[arg(short, long, required_unless_present_all = ["m", "n"])]
        k: Option<usize>,
        #[arg(short, requires = "n", conflicts_with = "k")]
        m: Option<usize>,
        #[arg(short, requires = "m")]
        n: Option<usize>,
        #[arg(short = 'L', long, default_value_t = 4)]
        shore: usize,
        #[arg(long)]
        chip: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized heuristic baseline.
    Heuristic {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        hardware: Option<PathBuf>,
        #[arg(long, required_unless_present = "hardware")]
        chip: Option<usize>,
        #[arg(short = 'L', long, default_value_t = 4)]
        shore: usize,
        #[arg(long, env = "CPCG_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        tries: usize,
        #[arg(long, default_value_t = 100_000)]
        max_steps: u64,
        /// Wall-clock limit in seconds (makes runs machine-dependent).
        #[arg(long)]
        max_time: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fault-tolerant product embedding on a chip with dead qubits or couplers.
    Ft {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        hardware: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_extensions: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Logical problem: a graph file, a QUBO file, or K_m x K_n.
#[derive(Args)]
struct ProblemArgs {
    #[arg(long, conflicts_with_all = ["qubo", "m"])]
    graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "m")]
    qubo: Option<PathBuf>,
    #[arg(short, requires = "n")]
    m: Option<usize>,
    #[arg(short, requires = "m")]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Success rate and qubit usage over n.
    Success,
    /// As `success`, swept over seeded fault masks (needs --dead).
    Faults,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum, default_value_t = Suite::Success)]
    suite: Suite,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "cpcg,triangular,baseline"
    )]
    methods: Vec<String>,
    #[arg(short, long)]
    m: usize,
    /// `a..b`, `a,b,c` or a single value.
    #[arg(short, long)]
    n: String,
    #[arg(short = 'L', long, default_value_t = 4)]
    shore: usize,
    #[arg(long)]
    chip: Option<usize>,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, env = "CPCG_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    dead: usize,
    #[arg(long, default_value = "0")]
    fault_seeds: String,
    /// Step budget of each heuristic attempt.
    #[arg(long, default_value_t = 20_000)]
    max_steps: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Bad flag combination or argument value: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

struct Out {
    quiet: bool,
    json: bool,
}

impl Out {
    fn info(&self, text: impl AsRef<str>) {
        if !self.quiet && !self.json {
            println!("{}", text.as_ref());
        }
    }

    fn json(&self, value: serde_json::Value) {
        if self.json {
            println!("{value}");
        }
    }

    /// Write to `path`, or to stdout when absent.
    fn emit(&self, path: Option<&Path>, contents: &str) -> anyhow::Result<()> {
        match path {
            Some(p) => write_atomic(p, contents.as_bytes())
                .with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{contents}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = Out {
        quiet: cli.quiet,
        json: cli.json,
    };
    match run(cli.command, &out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() {
                2
            } else {
                1
            })
        }
    }
}

fn load_hardware(path: &Path) -> anyhow::Result<HardwareGraph> {
    let text = read_text(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hardware(&text).with_context(|| format!("{}", path.display()))
}

fn hardware_or(path: Option<&Path>, spec: ChimeraSpec) -> anyhow::Result<HardwareGraph> {
    match path {
        Some(p) => load_hardware(p),
        None => Ok(HardwareGraph::ideal(spec)),
    }
}

fn square(chip: usize, shore: usize) -> anyhow::Result<ChimeraSpec> {
    ChimeraSpec::square(chip, shore).map_err(|e| Usage(e.to_string()).into())
}

fn load_problem(args: &ProblemArgs) -> anyhow::Result<ProblemGraph> {
    if let Some(p) = &args.graph {
        let text = read_text(p).with_context(|| format!("reading {}", p.display()))?;
        return parse_problem(&text).with_context(|| format!("{}", p.display()));
    }
    if let Some(p) = &args.qubo {
        let text = read_text(p).with_context(|| format!("reading {}", p.display()))?;
        let (q, labels) = parse_qubo::<f64>(&text).with_context(|| format!("{}", p.display()))?;
        return Ok(qubo_problem_graph_labelled(&q, &labels)?);
    }
    match (args.m, args.n) {
        (Some(m), Some(n)) => Ok(complete_product(m, n).map_err(|e| Usage(e.to_string()))?),
        _ => usage("give a problem with --graph, --qubo or -m/-n"),
    }
}

fn report_embedding(
    out: &Out,
    emb: &Embedding,
    path: Option<&Path>,
    extra: serde_json::Value,
) -> anyhow::Result<()> {
    let stats = chain_stats(emb);
    if let Some(p) = path {
        write_embedding(p, emb).with_context(|| format!("writing {}", p.display()))?;
    } else if !out.json {
        println!("{}", emb.to_json());
    }
    out.info(format!(
        "spec={} chains={} qubits={} chain_min={} chain_max={} chain_mean={:.3}",
        emb.spec(),
        stats.chains,
        stats.qubit_total,
        stats.chain_min,
        stats.chain_max,
        stats.chain_mean
    ));
    let mut value = json!({
        "spec": {"rows": emb.spec().rows, "cols": emb.spec().cols, "shore": emb.spec().shore_size},
        "stats": stats,
        "extra": extra,
    });
    if path.is_none() {
        value["embedding"] = serde_json::from_str(&emb.to_json())?;
    }
    out.json(value);
    Ok(())
}

fn refuse(out: &Out, r: &Refusal) -> anyhow::Result<ExitCode> {
    if out.json {
        out.json(json!({
            "status": "refused",
            "required": r.required,
            "chip": r.chip,
            "chimera_treewidth": r.chip_treewidth,
            "product_tw_lower_bound": r.bound.map(|b| b.2),
            "verdict": r.verdict.to_string(),
        }));
    } else {
        eprintln!("{r}");
    }
    Ok(ExitCode::from(1))
}

fn run(cmd: Command, out: &Out) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::GenChimera {
            rows,
            cols,
            shore,
            dead,
            seed,
            output,
        } => {
            let spec = ChimeraSpec::new(rows, cols.unwrap_or(rows), shore)
                .map_err(|e| Usage(e.to_string()))?;
            let hw = HardwareGraph::with_random_faults(spec, dead, seed)
                .map_err(|e| Usage(e.to_string()))?;
            out.emit(output.as_deref(), &format_hardware(&hw))?;
            if output.is_some() {
                out.info(format!("{spec} with {dead} dead qubits"));
            }
        }
        Command::GenProduct { m, n, output } => {
            let g = complete_product(m, n).map_err(|e| Usage(e.to_string()))?;
            out.emit(output.as_deref(), &format_problem(&g))?;
        }
        Command::GenPartitionQubo {
            graph,
            complete,
            parts,
            a,
            b,
            output,
        } => {
            let g = match (graph, complete) {
                (Some(p), _) => load_problem(&ProblemArgs {
                    graph: Some(p),
                    qubo: None,
                    m: None,
                    n: None,
                })?,
                (None, Some(k)) => complete_graph(k).map_err(|e| Usage(e.to_string()))?,
                (None, None) => return usage("give --graph or --complete"),
            };
            let (q, labeling) =
                partitioning_qubo(&g, parts, a, b).map_err(|e| Usage(e.to_string()))?;
            let labels: Vec<String> = labeling
                .pairs()
                .iter()
                .map(|&(i, k)| format!("{}:{k}", g.label(i)))
                .collect();
            out.emit(output.as_deref(), &format_qubo(&q, &labels))?;
        }
        Command::Detect { file } => {
            let text = read_text(&file).with_context(|| format!("reading {}", file.display()))?;
            let g = if text.lines().any(|l| l.trim_start().starts_with("p qubo")) {
                let (q, labels) =
                    parse_qubo::<f64>(&text).with_context(|| format!("{}", file.display()))?;
                qubo_problem_graph_labelled(&q, &labels)?
            } else {
                parse_problem(&text).with_context(|| format!("{}", file.display()))?
            };
            match detect_cpcg(&g) {
                Some(p) => {
                    out.info(format!("m={} n={}", p.m, p.n));
                    out.json(json!({"m": p.m, "n": p.n, "pairs": p.labeling.pairs()}));
                }
                None => {
                    out.info("not a product of complete graphs");
                    out.json(json!({"m": null, "n": null}));
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Embed(e) => return embed(e, out),
        Command::Validate {
            embedding,
            problem,
            hardware,
        } => {
            let emb =
                read_embedding(&embedding).with_context(|| format!("{}", embedding.display()))?;
            let g = load_problem(&problem)?;
            let hw = hardware_or(hardware.as_deref(), emb.spec())?;
            if hw.spec() != emb.spec() {
                bail!(
                    "embedding targets {} but hardware is {}",
                    emb.spec(),
                    hw.spec()
                );
            }
            let report = validate(&g, &hw, &emb);
            out.json(json!({
                "valid": report.is_valid(),
                "violations": report.violations.iter().map(|v| json!({
                    "kind": v.kind.as_str(), "detail": v.detail, "variables": v.variables,
                })).collect::<Vec<_>>(),
            }));
            if report.is_valid() {
                out.info("valid");
            } else {
                if !out.json {
                    println!("{report}");
                }
                return Ok(ExitCode::from(1));
            }
        }
        Command::Stats { embedding } => {
            let emb =
                read_embedding(&embedding).with_context(|| format!("{}", embedding.display()))?;
            let s = chain_stats(&emb);
            out.json(serde_json::to_value(&s)?);
            if !out.json {
                println!("spec={}", emb.spec());
                println!("chains={}", s.chains);
                println!("qubits={}", s.qubit_total);
                println!("chain_min={}", s.chain_min);
                println!("chain_max={}", s.chain_max);
                println!("chain_mean={:.4}", s.chain_mean);
                println!("chain_stddev={:.4}", s.chain_stddev);
                let hist: Vec<String> = s
                    .histogram
                    .iter()
                    .map(|(l, c)| format!("{l}:{c}"))
                    .collect();
                println!("histogram={}", hist.join(","));
            }
        }
        Command::Lower {
            model,
            embedding,
            hardware,
            chain_strength,
            output,
        } => {
            let text = read_text(&model).with_context(|| format!("reading {}", model.display()))?;
            let (ising, labels, offset) =
                if text.lines().any(|l| l.trim_start().starts_with("p qubo")) {
                    let (q, labels) =
                        parse_qubo::<f64>(&text).with_context(|| format!("{}", model.display()))?;
                    let (ising, c) = ising_from_qubo(&q);
                    (ising, labels, c)
                } else {
                    parse_ising::<f64>(&text).with_context(|| format!("{}", model.display()))?
                };
            let emb =
                read_embedding(&embedding).with_context(|| format!("{}", embedding.display()))?;
            let hw = hardware_or(hardware.as_deref(), emb.spec())?;
            let cs = chain_strength.unwrap_or_else(|| default_chain_strength(&ising));
            if cs <= 0.0 {
                return usage("chain strength must be positive");
            }
            let phys = lower_model(&ising, &labels, &emb, &hw, cs)?;
            let qlabels: Vec<String> = phys.qubits.iter().map(|q| format!("q{q}")).collect();
            out.emit(
                output.as_deref(),
                &format_ising(&phys.model, &qlabels, offset + phys.chain_offset),
            )?;
            if output.is_some() {
                out.info(format!(
                    "qubits={} couplings={} chain_strength={cs}",
                    phys.qubits.len(),
                    phys.model.couplings().count()
                ));
            }
        }
        Command::Analyze { m, n, shore, chip } => {
            if m == 0 || n == 0 || shore == 0 {
                return usage("m, n and L must be positive");
            }
            if let Some(c) = chip {
                if let Some(r) = refusal(m, n, shore, c) {
                    return refuse(out, &r);
                }
            }
            let cert = optimality_certificate(m, n, shore);
            let size = cert.size;
            out.json(json!({
                "m": m, "n": n, "L": shore,
                "constructive_size": size,
                "nexus_factor": if cert.swapped { n } else { m },
                "chimera_treewidth": chimera_treewidth(size, shore),
                "product_tw_lower_bound": cert.product_bound,
                "chimera_tw_at_size_minus_1": cert.smaller_chip_treewidth,
                "verdict": cert.verdict.to_string(),
                "max_embeddable_n": max_embeddable_n(size, shore, m),
                "triangular_max_n": triangular_max_n(size, shore, m),
            }));
            if !out.json {
                println!("{cert}");
                println!("chimera_treewidth={}", chimera_treewidth(size, shore));
                println!("max_embeddable_n={}", max_embeddable_n(size, shore, m));
                println!("triangular_max_n={}", triangular_max_n(size, shore, m));
            }
        }
        Command::Render {
            input,
            hardware,
            plot,
            output,
        } => {
            let svg = if plot {
                let text =
                    read_text(&input).with_context(|| format!("reading {}", input.display()))?;
                render_plot(&rows_from_csv(&text).with_context(|| format!("{}", input.display()))?)
            } else {
                let emb = read_embedding(&input).with_context(|| format!("{}", input.display()))?;
                let hw = hardware_or(hardware.as_deref(), emb.spec())?;
                if hw.spec() != emb.spec() {
                    bail!(
                        "embedding targets {} but hardware is {}",
                        emb.spec(),
                        hw.spec()
                    );
                }
                render_chip(&hw, Some(&emb))
            };
            out.emit(output.as_deref(), &svg)?;
        }
        Command::Bench(args) => return bench(args, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn embed(cmd: EmbedCommand, out: &Out) -> anyhow::Result<ExitCode> {
    match cmd {
        EmbedCommand::Cpcg {
            m,
            n,
            shore,
            chip,
            best,
            output,
        } => {
            if m == 0 || n == 0 {
                return usage("m and n must be positive");
            }
            if best {
                let b = cpcg_embed_best(m, n, shore).map_err(|e| Usage(e.to_string()))?;
                report_embedding(
                    out,
                    &b.embedding,
                    output.as_deref(),
                    json!({"swapped": b.swapped}),
                )?;
                return Ok(ExitCode::SUCCESS);
            }
            let size = chip.unwrap_or_else(|| required_size(m, n, shore));
            if required_size(m, n, shore) > size {
                match refusal(m, n, shore, size) {
                    Some(r) => return refuse(out, &r),
                    None => bail!("K_{m}xK_{n} needs C({r},{r},{shore}) with K_{m} as nexus; rerun with --best", r = required_size(m, n, shore)),
                }
            }
            let spec = square(size, shore)?;
            let plan = bus_plan_on(spec, m, n)?;
            report_embedding(
                out,
                &plan.embedding()?,
                output.as_deref(),
                json!({"steps": plan.steps}),
            )?;
        }
        EmbedCommand::Triangular {
            k,
            m,
            n,
            shore,
            chip,
            output,
        } => {
            let k = k
                .or(m.zip(n).map(|(m, n)| m * n))
                .expect("clap enforces k or m/n");
            if k == 0 {
                return usage("clique size must be positive");
            }
            let size = chip.unwrap_or_else(|| k.div_ceil(shore));
            let spec = square(size, shore)?;
            let emb = triangular_embed(k, spec, (0, 0))?;
            report_embedding(out, &emb, output.as_deref(), json!({}))?;
        }
        EmbedCommand::Heuristic {
            problem,
            hardware,
            chip,
            shore,
            seed,
            tries,
            max_steps,
            max_time,
            output,
        } => {
            let g = load_problem(&problem)?;
            let hw = match (&hardware, chip) {
                (Some(p), _) => load_hardware(p)?,
                (None, Some(c)) => HardwareGraph::ideal(square(c, shore)?),
                (None, None) => return usage("give --hardware or --chip"),
            };
            if tries == 0 || max_steps == 0 {
                return usage("--tries and --max-steps must be positive");
            }
            let params = HeuristicParams {
                seed,
                tries,
                max_steps,
                max_time: max_time.map(Duration::from_secs_f64),
                ..HeuristicParams::default()
            };
            let res = heuristic_embed(&g, &hw, &params);
            match res.embedding {
                Some(e) => report_embedding(
                    out,
                    &e,
                    output.as_deref(),
                    json!({"steps": res.steps, "tries": res.tries_used}),
                )?,
                None => {
                    out.json(
                        json!({"status": "failed", "steps": res.steps, "tries": res.tries_used}),
                    );
                    if !out.json {
                        eprintln!(
                            "status=failed\nsteps={}\ntries={}",
                            res.steps, res.tries_used
                        );
                    }
                    return Ok(ExitCode::from(1));
                }
            }
        }
        EmbedCommand::Ft {
            m,
            n,
            hardware,
            max_extensions,
            output,
        } => {
            let hw = load_hardware(&hardware)?;
            let cfg = FtConfig {
                max_extensions,
                ..FtConfig::default()
            };
            match ft_cpcg_embed(&hw, m, n, &cfg) {
                Ok(ft) => report_embedding(
                    out,
                    &ft.embedding,
                    output.as_deref(),
                    json!({
                        "shifted_copies": ft.shifted_copies,
                        "total_extensions": ft.total_extensions,
                        "wire_retries": ft.wire_retries,
                    }),
                )?,
                Err(f) => {
                    out.json(json!({
                        "status": "failed",
                        "reason": f.reason.as_str(),
                        "copy": f.copy,
                        "run": f.run.map(|r| r.to_string()),
                        "operable_qubits": f.operable,
                        "required_qubits": f.required,
                        "detail": f.detail,
                    }));
                    if !out.json {
                        eprintln!("{f}");
                    }
                    return Ok(ExitCode::from(1));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs, out: &Out) -> anyhow::Result<ExitCode> {
    let methods = args
        .methods
        .iter()
        .map(|s| s.parse::<Method>().map_err(|e| Usage(e.to_string())))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let ns = parse_range(&args.n).map_err(|e| Usage(e.to_string()))?;
    let fault_seeds: Vec<u64> = parse_range(&args.fault_seeds)
        .map_err(|e| Usage(e.to_string()))?
        .into_iter()
        .map(|s| s as u64)
        .collect();
    if matches!(args.suite, Suite::Faults) && args.dead == 0 {
        return usage("the faults suite needs --dead > 0");
    }
    if args.m == 0 || ns.contains(&0) || args.trials == 0 {
        return usage("m, every n and --trials must be positive");
    }
    let mut cfg = BenchConfig::new(methods, args.m, ns, args.shore);
    cfg.chip = args.chip;
    cfg.trials = args.trials;
    cfg.dead = args.dead;
    cfg.fault_seeds = fault_seeds;
    cfg.heuristic.seed = args.seed;
    cfg.heuristic.max_steps = args.max_steps;
    let rows = bench_sweep(&cfg).map_err(|e| anyhow!(e))?;
    match &args.output {
        Some(p) => {
            write_csv(p, &rows).with_context(|| format!("writing {}", p.display()))?;
            out.info(format!("{} rows -> {}", rows.len(), p.display()));
        }
        None if !out.json => print!("{}", cpcg_core::bench::rows_to_csv(&rows)?),
        None => {}
    }
    out.json(serde_json::to_value(&rows)?);
    Ok(ExitCode::SUCCESS)
}
