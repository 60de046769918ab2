use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ontomatch::eval::{curve_csv, scores_json};
use ontomatch::ontology::parse_ontology;
use ontomatch::pipeline::mine_rules;
use ontomatch::rules::{parse_rules, BinStrategy, RuleStore};
use ontomatch::{score_alignment, Alignment, Error, MatchTask, Mode, RunConfig, SolverChoice, SolverError};

#[derive(Parser)]
#[command(name = "ontomatch", version, about = "Knowledge-aware ontology matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align two ontologies and write the alignment as JSON.
    Match {
        #[command(flatten)]
        run: RunArgs,
        /// Alignment output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-family objective report (JSON).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the ground problem in the text dump format.
        #[arg(long)]
        dump_ground: Option<PathBuf>,
        /// Write the effective configuration as JSON.
        #[arg(long)]
        dump_config: Option<PathBuf>,
    },
    /// Discretize a dataset and mine association rules as JSON lines.
    Mine {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        min_conf: f64,
        #[arg(long, default_value_t = 0.001)]
        min_sup: f64,
        #[arg(long, default_value_t = 3)]
        max_attrs: usize,
        #[arg(long, default_value_t = 5)]
        n_bins: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Quantile)]
        bin_strategy: Strategy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a predicted alignment against a reference.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
    /// Solve once per bias weight and write a precision/recall curve as CSV.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated, ascending.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        biases: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Quantile,
    EqualWidth,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Kaom,
    Mlom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Exact,
    Local,
}

/// Flags override values from `--config`.
#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; relative paths inside resolve against its directory.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    ontology1: Option<PathBuf>,
    #[arg(long)]
    ontology2: Option<PathBuf>,
    #[arg(long)]
    rules1: Option<PathBuf>,
    #[arg(long)]
    rules2: Option<PathBuf>,
    #[arg(long)]
    dataset1: Option<PathBuf>,
    #[arg(long)]
    dataset2: Option<PathBuf>,
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    atom_budget: Option<usize>,
    #[arg(long)]
    max_flips: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    d0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    bias: Option<f64>,
    /// Force every string similarity to 0.
    #[arg(long)]
    no_name_similarity: bool,
}

impl RunArgs {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = read(path)?;
                let mut cfg: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| ParseError(format!("config {}: {e}", path.display())))?;
                let base = path.parent().unwrap_or(Path::new("."));
                for p in [
                    &mut cfg.ontology1,
                    &mut cfg.ontology2,
                    &mut cfg.rules1,
                    &mut cfg.rules2,
                    &mut cfg.dataset1,
                    &mut cfg.dataset2,
                    &mut cfg.reference,
                ]
                .into_iter()
                .flatten()
                {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
                cfg
            }
            None => RunConfig::default(),
        };
        let paths = [
            (&self.ontology1, &mut cfg.ontology1),
            (&self.ontology2, &mut cfg.ontology2),
            (&self.rules1, &mut cfg.rules1),
            (&self.rules2, &mut cfg.rules2),
            (&self.dataset1, &mut cfg.dataset1),
            (&self.dataset2, &mut cfg.dataset2),
            (&self.reference, &mut cfg.reference),
        ];
        for (flag, slot) in paths {
            if let Some(p) = flag {
                *slot = Some(p.clone());
            }
        }
        if let Some(m) = self.mode {
            cfg.mode = match m {
                ModeArg::Kaom => Mode::Kaom,
                ModeArg::Mlom => Mode::Mlom,
            };
        }
        if let Some(s) = self.solver {
            cfg.solver = match s {
                SolverArg::Auto => SolverChoice::Auto,
                SolverArg::Exact => SolverChoice::Exact,
                SolverArg::Local => SolverChoice::Local,
            };
        }
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.atom_budget = self.atom_budget.unwrap_or(cfg.atom_budget);
        cfg.max_flips = self.max_flips.unwrap_or(cfg.max_flips);
        cfg.restarts = self.restarts.unwrap_or(cfg.restarts);
        cfg.grid_n = self.grid_n.unwrap_or(cfg.grid_n);
        cfg.weights.tau = self.tau.unwrap_or(cfg.weights.tau);
        cfg.weights.d0 = self.d0.unwrap_or(cfg.weights.d0);
        cfg.weights.bias_w = self.bias.unwrap_or(cfg.weights.bias_w);
        if self.no_name_similarity {
            cfg.name_similarity = false;
        }
        cfg.validate().map_err(|m| ParseError(format!("config: {m}")))?;
        Ok(cfg)
    }
}

/// Malformed input other than the engine's own parse errors.
#[derive(Debug)]
struct ParseError(String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_rules(path: Option<&Path>, o: &ontomatch::Ontology, mode: Mode) -> anyhow::Result<RuleStore> {
    match path {
        Some(p) if p.exists() => Ok(parse_rules(&read(p)?, o).map_err(Error::from)?),
        Some(p) => {
            if mode == Mode::Kaom {
                eprintln!("warning: rules file {} not found; continuing without rules", p.display());
            }
            Ok(RuleStore::new(o.tag()))
        }
        None => Ok(RuleStore::new(o.tag())),
    }
}

fn load_task(cfg: &RunConfig) -> anyhow::Result<MatchTask> {
    let (Some(p1), Some(p2)) = (&cfg.ontology1, &cfg.ontology2) else {
        bail!(ParseError("both --ontology1 and --ontology2 are required".into()));
    };
    let o1 = parse_ontology(&read(p1)?).map_err(Error::from)?;
    let o2 = parse_ontology(&read(p2)?).map_err(Error::from)?;
    let mut r1 = load_rules(cfg.rules1.as_deref(), &o1, cfg.mode)?;
    let mut r2 = load_rules(cfg.rules2.as_deref(), &o2, cfg.mode)?;
    if let Some(d) = &cfg.dataset1 {
        r1.extend(mine_rules(&o1, &read(d)?, cfg)?).map_err(Error::from)?;
    }
    if let Some(d) = &cfg.dataset2 {
        r2.extend(mine_rules(&o2, &read(d)?, cfg)?).map_err(Error::from)?;
    }
    Ok(MatchTask::new(&o1, &o2, r1, r2)?)
}

fn load_reference(cfg: &RunConfig) -> anyhow::Result<Option<Alignment>> {
    match &cfg.reference {
        Some(p) => Ok(Some(Alignment::from_json(&read(p)?).map_err(Error::from)?)),
        None => Ok(None),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Match { run, out, report, dump_ground, dump_config } => {
            let cfg = run.resolve()?;
            if let Some(p) = &dump_config {
                let mut text = serde_json::to_string_pretty(&cfg)?;
                text.push('\n');
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            let task = load_task(&cfg)?;
            let reference = load_reference(&cfg)?;
            let outcome = task.run(&cfg)?;
            if let Some(p) = &dump_ground {
                fs::write(p, outcome.problem.to_dump()).with_context(|| format!("writing {}", p.display()))?;
            }
            let scores = match &reference {
                Some(r) => Some(score_alignment(&outcome.alignment, r).map_err(Error::from)?),
                None => None,
            };
            if let Some(p) = &report {
                fs::write(p, outcome.report_json(scores)).with_context(|| format!("writing {}", p.display()))?;
            }
            write_or_print(out.as_deref(), &outcome.alignment.to_json())?;
            eprintln!(
                "matched {} of {} candidates, objective {}",
                outcome.alignment.len(),
                outcome.problem.n_atoms(),
                outcome.assignment.objective
            );
        }
        Command::Mine { ontology, dataset, min_conf, min_sup, max_attrs, n_bins, bin_strategy, out } => {
            let o = parse_ontology(&read(&ontology)?).map_err(Error::from)?;
            let mut cfg = RunConfig { n_bins, ..RunConfig::default() };
            cfg.mining.min_conf = min_conf;
            cfg.mining.min_sup = min_sup;
            cfg.mining.max_attrs = max_attrs;
            cfg.bin_strategy = match bin_strategy {
                Strategy::Quantile => BinStrategy::Quantile,
                Strategy::EqualWidth => BinStrategy::EqualWidth,
            };
            let store = mine_rules(&o, &read(&dataset)?, &cfg)?;
            write_or_print(out.as_deref(), &store.to_json_lines(&o))?;
            eprintln!("mined {} rules", store.len());
        }
        Command::Eval { pred, reference } => {
            let pred = Alignment::from_json(&read(&pred)?).map_err(Error::from)?;
            let reference = Alignment::from_json(&read(&reference)?).map_err(Error::from)?;
            let scores = score_alignment(&pred, &reference).map_err(Error::from)?;
            println!("{}", scores_json(&scores));
        }
        Command::Sweep { run, biases, out } => {
            let cfg = run.resolve()?;
            let task = load_task(&cfg)?;
            let Some(reference) = load_reference(&cfg)? else {
                bail!(ParseError("sweep needs --reference".into()));
            };
            let points = ontomatch::pr_sweep(&task, &cfg, &biases, &reference)?;
            let curve: Vec<_> = points.into_iter().map(|(p, _)| p).collect();
            write_or_print(out.as_deref(), &curve_csv(&curve))?;
        }
    }
    Ok(())
}

/// 2: malformed input, 3: infeasible hard constraints, 4: solver budget
/// exceeded, 1: anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ParseError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Ontology(_) | Error::Rule(_) | Error::Eval(_)) => 2,
        Some(Error::Solver(SolverError::Infeasible { .. })) => 3,
        Some(Error::Solver(SolverError::BudgetExceeded { .. })) => 4,
        Some(Error::Grounding(ontomatch::GroundingError::Dump { .. })) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
