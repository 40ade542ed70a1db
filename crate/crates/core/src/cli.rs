//! Command-line surface: `datasets`, `solve` and `sweep`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::datasets::Dataset;
use crate::engines::{
    default_dtau, exact_solve, run_falqon, run_ite_falqon, EngineRun, ExactSolution, FalqonConfig,
    IteFalqonConfig,
};
use crate::error::{Error, Result};
use crate::graph::InteractionGraph;
use crate::hamiltonian::{check_guard, IsingModel, ModelKind, MssParams, Objective, ScoParams};
use crate::report::{decode, top_k, OutcomeEntry, Report};

#[derive(Debug, Parser)]
#[command(
    name = "ddiq",
    version,
    about = "Drug-combination optimization with FALQON and ITE-FALQON"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or print the built-in interaction graphs.
    Datasets {
        #[command(subcommand)]
        action: DatasetAction,
    },
    /// Compile one objective and solve it.
    Solve(RunArgs),
    /// Solve once per value of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum DatasetAction {
    List,
    Show { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Mss,
    Sco,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Mss => ModelKind::Mss,
            ModelArg::Sco => ModelKind::Sco,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Falqon,
    IteFalqon,
    Exact,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Falqon => "falqon",
            Method::IteFalqon => "ite-falqon",
            Method::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["dataset", "graph"])))]
pub struct RunArgs {
    /// Built-in dataset id (`sixdrug`, `covid9`).
    #[arg(long)]
    pub dataset: Option<String>,
    /// Path to a graph JSON document.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "ite-falqon")]
    pub method: Method,
    /// Time step; defaults to 0.0125 (mss) or 0.002 (sco).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of FALQON steps; defaults to 1000 (mss) or 5000 (sco).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Imaginary-time step; defaults to 0.1 (mss) or 0.01 (sco).
    #[arg(long)]
    pub dtau: Option<f64>,
    /// FALQON steps between imaginary-time filters.
    #[arg(long)]
    pub ite_period: Option<usize>,
    #[arg(long)]
    pub beta_init: Option<f64>,
    #[arg(long, default_value_t = 8)]
    pub top: usize,
    #[arg(long, requires = "seed")]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Report file format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Alpha,
    Gamma,
    Mu,
    K,
    Dt,
    Dtau,
}

impl SweepParam {
    fn as_str(self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Gamma => "gamma",
            SweepParam::Mu => "mu",
            SweepParam::K => "k",
            SweepParam::Dt => "dt",
            SweepParam::Dtau => "dtau",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Vec<String>,
}

/// Everything a solve produces, before it is written to disk.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub graph: InteractionGraph,
    pub model: IsingModel,
    pub exact: ExactSolution,
    pub report: Report,
    pub run: Option<EngineRun>,
    pub format: Format,
}

impl SolveOutput {
    pub fn final_energy(&self) -> f64 {
        self.report.final_energy.unwrap_or(self.exact.ground_energy)
    }

    pub fn top1(&self) -> Vec<String> {
        self.report
            .outcomes
            .first()
            .map(|o| o.drugs.clone())
            .unwrap_or_default()
    }

    pub fn files(&self) -> Result<Vec<(&'static str, String)>> {
        let mut files = vec![("model.json", self.model.to_json())];
        match self.format {
            Format::Json => files.push(("report.json", self.report.to_json()?)),
            Format::Csv => files.push(("report.csv", self.report.to_csv())),
        }
        match &self.run {
            Some(run) => files.push(("trajectory.csv", run.trajectory.to_csv())),
            None => files.push(("exact.json", self.exact.to_json(&self.graph)?)),
        }
        Ok(files)
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, contents) in self.files()? {
            write_atomic(&dir.join(name), contents.as_bytes())?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "model {}  params {}  method {}",
            r.model, r.params, r.method
        );
        let _ = writeln!(s, "ground energy  {:.12}", self.exact.ground_energy);
        if let Some(e) = r.final_energy {
            let _ = writeln!(
                s,
                "final energy   {:.12}  (gap {:.3e})",
                e,
                e - self.exact.ground_energy
            );
        }
        let _ = writeln!(
            s,
            "{:<5} {:<12} {:<14} {:<10} drugs",
            "rank", "probability", "energy", "bits"
        );
        for (i, o) in r.outcomes.iter().enumerate() {
            let p = o
                .probability
                .map(|p| format!("{p:.6}"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<5} {:<12} {:<14.6} {:<10} {}",
                i + 1,
                p,
                o.energy,
                o.bitstring,
                o.drugs.join(", ")
            );
        }
        if let Some(samples) = &r.samples {
            let _ = writeln!(s, "samples:");
            for e in samples.iter().take(8) {
                let _ = writeln!(s, "  {:>8}  {}", e.count, e.drugs.join(", "));
            }
        }
        s
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn load_graph(args: &RunArgs) -> Result<InteractionGraph> {
    match (&args.dataset, &args.graph) {
        (Some(name), None) => Ok(name.parse::<Dataset>()?.graph()),
        (None, Some(path)) => InteractionGraph::parse_json(&fs::read_to_string(path)?),
        _ => Err(Error::InvalidParameter(
            "exactly one of --dataset or --graph is required".into(),
        )),
    }
}

pub fn objective(args: &RunArgs, n: usize) -> Result<Objective> {
    match args.model {
        ModelArg::Mss => {
            if args.gamma.is_some() || args.mu.is_some() || args.k.is_some() {
                return Err(Error::InvalidParameter(
                    "--gamma/--mu/--k do not apply to --model mss".into(),
                ));
            }
            let alpha = args
                .alpha
                .ok_or_else(|| Error::InvalidParameter("--model mss requires --alpha".into()))?;
            Ok(Objective::Mss(MssParams::new(alpha)?))
        }
        ModelArg::Sco => {
            if args.alpha.is_some() {
                return Err(Error::InvalidParameter(
                    "--alpha does not apply to --model sco".into(),
                ));
            }
            let missing =
                |flag: &str| Error::InvalidParameter(format!("--model sco requires {flag}"));
            let params = ScoParams::new(
                args.gamma.ok_or_else(|| missing("--gamma"))?,
                args.mu.ok_or_else(|| missing("--mu"))?,
                args.k.ok_or_else(|| missing("--k"))?,
            )?;
            params.check_size(n)?;
            Ok(Objective::Sco(params))
        }
    }
}

fn falqon_config(args: &RunArgs, kind: ModelKind) -> Result<FalqonConfig> {
    let tuned = FalqonConfig::tuned(kind);
    FalqonConfig::new(
        args.dt.unwrap_or(tuned.dt),
        args.steps.unwrap_or(tuned.steps),
        args.beta_init.unwrap_or(tuned.beta_init),
    )
}

pub fn solve(args: &RunArgs) -> Result<SolveOutput> {
    let graph = load_graph(args)?;
    check_guard(graph.len())?;
    let objective = objective(args, graph.len())?;
    let kind = objective.kind();
    let model = objective.compile(&graph)?;
    let exact = exact_solve(&model)?;

    if args.method != Method::IteFalqon && (args.dtau.is_some() || args.ite_period.is_some()) {
        return Err(Error::InvalidParameter(
            "--dtau/--ite-period only apply to --method ite-falqon".into(),
        ));
    }
    if args.method == Method::Exact
        && (args.dt.is_some() || args.steps.is_some() || args.beta_init.is_some())
    {
        return Err(Error::InvalidParameter(
            "--dt/--steps/--beta-init do not apply to --method exact".into(),
        ));
    }

    let mut report = Report::new(&objective, args.method.as_str(), exact.ground_energy);
    let run = match args.method {
        Method::Exact => {
            if args.shots.is_some() {
                return Err(Error::InvalidParameter(
                    "--shots needs an iterative method".into(),
                ));
            }
            for bits in &exact.ground_assignments {
                let audit = crate::report::audit(&bits.selected(), &graph)?;
                report.outcomes.push(OutcomeEntry::new(
                    None,
                    exact.ground_energy,
                    bits.clone(),
                    audit,
                ));
            }
            None
        }
        Method::Falqon => Some(run_falqon(&model, &falqon_config(args, kind)?)?),
        Method::IteFalqon => {
            let cfg = IteFalqonConfig::new(
                falqon_config(args, kind)?,
                args.dtau.unwrap_or(default_dtau(kind)),
                args.ite_period.unwrap_or(2),
            )?;
            Some(run_ite_falqon(&model, &cfg)?)
        }
    };

    if let Some(run) = &run {
        report.final_energy = run.trajectory.final_energy();
        let k = args.top.clamp(1, 1usize << graph.len());
        report.outcomes = top_k(&run.state, &model, &graph, k)?
            .into_iter()
            .map(OutcomeEntry::from)
            .collect();
        if let (Some(shots), Some(seed)) = (args.shots, args.seed) {
            report.set_samples(&run.state.sample(shots, seed)?, &graph)?;
        }
    }

    Ok(SolveOutput {
        graph,
        model,
        exact,
        report,
        run,
        format: args.format,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub value: String,
    pub final_energy: f64,
    pub ground_energy: f64,
    pub ground_gap: f64,
    pub top1: Vec<String>,
    pub minimizers: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub param: String,
    pub method: String,
    pub entries: Vec<SweepEntry>,
}

fn parse_value<T: std::str::FromStr>(param: SweepParam, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad {} value `{raw}`", param.as_str())))
}

fn with_value(args: &RunArgs, param: SweepParam, raw: &str) -> Result<RunArgs> {
    let mut out = args.clone();
    match param {
        SweepParam::Alpha => out.alpha = Some(parse_value(param, raw)?),
        SweepParam::Gamma => out.gamma = Some(parse_value(param, raw)?),
        SweepParam::Mu => out.mu = Some(parse_value(param, raw)?),
        SweepParam::K => out.k = Some(parse_value(param, raw)?),
        SweepParam::Dt => out.dt = Some(parse_value(param, raw)?),
        SweepParam::Dtau => out.dtau = Some(parse_value(param, raw)?),
    }
    Ok(out)
}

/// Subdirectory of a sweep's `--out` holding the outputs for one value.
pub fn sweep_dir(out: &Path, param: SweepParam, raw: &str) -> PathBuf {
    out.join(format!("{}-{}", param.as_str(), raw.trim()))
}

pub fn sweep(args: &SweepArgs) -> Result<(SweepSummary, Vec<SolveOutput>)> {
    if args.values.is_empty() {
        return Err(Error::InvalidParameter(
            "--values must list at least one value".into(),
        ));
    }
    let specs = args
        .values
        .iter()
        .map(|v| with_value(&args.run, args.param, v))
        .collect::<Result<Vec<_>>>()?;
    let outputs = specs.par_iter().map(solve).collect::<Result<Vec<_>>>()?;

    let entries = args
        .values
        .iter()
        .zip(&outputs)
        .map(|(value, out)| {
            let minimizers = out
                .exact
                .ground_assignments
                .iter()
                .map(|a| decode(a, &out.graph))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepEntry {
                value: value.trim().to_string(),
                final_energy: out.final_energy(),
                ground_energy: out.exact.ground_energy,
                ground_gap: out.final_energy() - out.exact.ground_energy,
                top1: out.top1(),
                minimizers,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok((
        SweepSummary {
            param: args.param.as_str().to_string(),
            method: args.run.method.as_str().to_string(),
            entries,
        },
        outputs,
    ))
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Datasets { action } => match action {
            DatasetAction::List => {
                let ids: Vec<_> = Dataset::ALL.iter().map(|d| d.id()).collect();
                writeln!(stdout, "{}", ids.join("\n"))?;
            }
            DatasetAction::Show { name } => {
                let graph = name.parse::<Dataset>()?.graph();
                writeln!(stdout, "{}", graph.to_json_pretty())?;
            }
        },
        Command::Solve(args) => {
            let out = solve(&args)?;
            out.write_to(&args.out)?;
            write!(stdout, "{}", out.summary())?;
        }
        Command::Sweep(args) => {
            let (summary, outputs) = sweep(&args)?;
            fs::create_dir_all(&args.run.out)?;
            for (value, out) in args.values.iter().zip(&outputs) {
                out.write_to(&sweep_dir(&args.run.out, args.param, value))?;
            }
            write_atomic(
                &args.run.out.join("summary.json"),
                serde_json::to_string_pretty(&summary)?.as_bytes(),
            )?;
            writeln!(
                stdout,
                "{:<10} {:<16} {:<12} top-1",
                summary.param, "final energy", "gap"
            )?;
            for e in &summary.entries {
                writeln!(
                    stdout,
                    "{:<10} {:<16.10} {:<12.3e} {}",
                    e.value,
                    e.final_energy,
                    e.ground_gap,
                    e.top1.join(", ")
                )?;
            }
        }
    }
    Ok(())
}
