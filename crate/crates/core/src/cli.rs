//! Command-line front end.
//!
//! Settings come from an optional flat `key = value` file (`#` starts a
//! comment) overlaid by command-line flags. Unknown keys are rejected. Exit
//! codes: 0 success, 2 usage or configuration error, 3 I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::argumentation::{
    chain_framework, complete_labelings, grounded_labeling, parse_apx, ArgumentId,
    ArgumentationFramework, Labeling, DEFAULT_LABELING_BOUND,
};
use crate::market::Strategy;
use crate::reputation::ReputationSystem;
use crate::sim::{required_capacity, SimConfig, Simulation};
use crate::sweep::{run_sweep_with, write_csv_file, Profile, SweepGrid, SweepOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "infomarket", version, about = "Client-consultant information market simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and print mean profit per strategy.
    Simulate(SimulateArgs),
    /// Run a parameter sweep and write aggregated statistics as CSV.
    Sweep(SweepArgs),
    /// Print grounded and complete labelings of a framework.
    Af(AfArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// key = value settings file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub rounds: Option<String>,
    #[arg(long)]
    pub clients: Option<String>,
    #[arg(long)]
    pub consultants: Option<String>,
    #[arg(long = "f-ii")]
    pub f_ii: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long = "delta-n-arg")]
    pub delta_n_arg: Option<String>,
    /// r1 or r2
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub stream: Option<String>,
    #[arg(long = "c-arg")]
    pub c_arg: Option<String>,
    #[arg(long = "n-arg-total")]
    pub n_arg_total: Option<String>,
    #[arg(long = "consultations-per-round")]
    pub consultations_per_round: Option<String>,
    /// Write per-round diagnostics CSV here.
    #[arg(long)]
    pub diagnostics: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// desk or paper
    #[arg(long)]
    pub profile: Option<String>,
    /// Comma-separated list, e.g. r1,r2
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long = "delta-n-arg")]
    pub delta_n_arg: Option<String>,
    #[arg(long = "f-ii")]
    pub f_ii: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub runs: Option<String>,
    #[arg(long)]
    pub rounds: Option<String>,
    #[arg(long)]
    pub clients: Option<String>,
    #[arg(long)]
    pub consultants: Option<String>,
    #[arg(long = "c-arg")]
    pub c_arg: Option<String>,
    #[arg(long = "n-arg-total")]
    pub n_arg_total: Option<String>,
    #[arg(long = "consultations-per-round")]
    pub consultations_per_round: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    /// Check simulation invariants after every round.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Debug, Args)]
pub struct AfArgs {
    /// Inspect the chain A_1 <- ... <- A_N.
    #[arg(long, conflicts_with = "file")]
    pub chain: Option<u32>,
    /// Inspect an apx file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

const SIMULATE_KEYS: &[&str] = &[
    "rounds",
    "clients",
    "consultants",
    "f_ii",
    "alpha",
    "delta",
    "delta_n_arg",
    "rep",
    "seed",
    "stream",
    "c_arg",
    "n_arg_total",
    "consultations_per_round",
    "diagnostics",
];

const SWEEP_KEYS: &[&str] = &[
    "profile",
    "rep",
    "delta_n_arg",
    "f_ii",
    "delta",
    "alpha",
    "runs",
    "rounds",
    "clients",
    "consultants",
    "c_arg",
    "n_arg_total",
    "consultations_per_round",
    "seed",
    "out",
    "workers",
];

/// Parses the flat `key = value` format.
pub fn parse_config_text(text: &str, known: &[&str]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !known.contains(&k) {
            return Err(usage(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// File settings overlaid by flag settings.
struct Settings(BTreeMap<String, String>);

impl Settings {
    fn load(
        path: Option<&PathBuf>,
        known: &[&str],
        flags: Vec<(&str, Option<String>)>,
    ) -> Result<Self, CliError> {
        let mut map = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                parse_config_text(&text, known)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Ok(Self(map))
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| usage(format!("invalid {key} `{v}`: {e}")))
            })
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<T>()
                            .map_err(|e| usage(format!("invalid {key} entry `{s}`: {e}")))
                    })
                    .collect::<Result<Vec<T>, _>>()
            })
            .transpose()
    }
}

pub fn resolve_sim(args: &SimulateArgs) -> Result<(SimConfig, Option<String>), CliError> {
    let s = Settings::load(
        args.config.as_ref(),
        SIMULATE_KEYS,
        vec![
            ("rounds", args.rounds.clone()),
            ("clients", args.clients.clone()),
            ("consultants", args.consultants.clone()),
            ("f_ii", args.f_ii.clone()),
            ("alpha", args.alpha.clone()),
            ("delta", args.delta.clone()),
            ("delta_n_arg", args.delta_n_arg.clone()),
            ("rep", args.rep.clone()),
            ("seed", args.seed.clone()),
            ("stream", args.stream.clone()),
            ("c_arg", args.c_arg.clone()),
            ("n_arg_total", args.n_arg_total.clone()),
            ("consultations_per_round", args.consultations_per_round.clone()),
            ("diagnostics", args.diagnostics.clone()),
        ],
    )?;
    let d = SimConfig::default();
    let rounds = s.get("rounds")?.unwrap_or(d.rounds);
    let delta_n_arg = s.get("delta_n_arg")?.unwrap_or(d.delta_n_arg);
    let config = SimConfig {
        n_clients: s.get("clients")?.unwrap_or(d.n_clients),
        n_consultants: s.get("consultants")?.unwrap_or(d.n_consultants),
        rounds,
        f_ii: s.get("f_ii")?.unwrap_or(d.f_ii),
        delta_n_arg,
        alpha: s.get("alpha")?.unwrap_or(d.alpha),
        delta: s.get("delta")?.unwrap_or(d.delta),
        c_arg: s.get("c_arg")?.unwrap_or(d.c_arg),
        rep_system: s.get("rep")?.unwrap_or(d.rep_system),
        seed: s.get("seed")?.unwrap_or(d.seed),
        stream: s.get("stream")?.unwrap_or(d.stream),
        n_arg_total: s
            .get("n_arg_total")?
            .unwrap_or_else(|| required_capacity(rounds, delta_n_arg)),
        consultations_per_round: s
            .get("consultations_per_round")?
            .unwrap_or(d.consultations_per_round),
    };
    config.validate().map_err(|e| usage(e.to_string()))?;
    Ok((config, s.raw("diagnostics").map(str::to_string)))
}

pub struct SweepPlan {
    pub grid: SweepGrid,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

pub fn resolve_sweep(args: &SweepArgs) -> Result<SweepPlan, CliError> {
    let s = Settings::load(
        args.config.as_ref(),
        SWEEP_KEYS,
        vec![
            ("profile", args.profile.clone()),
            ("rep", args.rep.clone()),
            ("delta_n_arg", args.delta_n_arg.clone()),
            ("f_ii", args.f_ii.clone()),
            ("delta", args.delta.clone()),
            ("alpha", args.alpha.clone()),
            ("runs", args.runs.clone()),
            ("rounds", args.rounds.clone()),
            ("clients", args.clients.clone()),
            ("consultants", args.consultants.clone()),
            ("c_arg", args.c_arg.clone()),
            ("n_arg_total", args.n_arg_total.clone()),
            ("consultations_per_round", args.consultations_per_round.clone()),
            ("seed", args.seed.clone()),
            ("out", args.out.clone()),
            ("workers", args.workers.clone()),
        ],
    )?;
    let seed: u64 = s
        .get("seed")?
        .ok_or_else(|| usage("sweep requires --seed (no implicit seeding)"))?;
    let out: PathBuf = s
        .raw("out")
        .map(PathBuf::from)
        .ok_or_else(|| usage("sweep requires --out"))?;
    let profile = s.get::<Profile>("profile")?.unwrap_or(Profile::Desk);
    let mut grid = SweepGrid::for_profile(profile, seed);

    if let Some(v) = s.list::<ReputationSystem>("rep")? {
        grid.rep_systems = v;
    }
    if let Some(v) = s.list("delta_n_arg")? {
        grid.delta_n_arg_values = v;
    }
    if let Some(v) = s.list("f_ii")? {
        grid.f_ii_values = v;
    }
    if let Some(v) = s.list("delta")? {
        grid.delta_values = v;
    }
    if let Some(v) = s.list("alpha")? {
        grid.alpha_values = v;
    }
    if let Some(v) = s.get("runs")? {
        grid.runs_per_point = v;
    }
    let sc = &mut grid.scenario;
    if let Some(v) = s.get("rounds")? {
        sc.rounds = v;
    }
    if let Some(v) = s.get("clients")? {
        sc.n_clients = v;
    }
    if let Some(v) = s.get("consultants")? {
        sc.n_consultants = v;
    }
    if let Some(v) = s.get("c_arg")? {
        sc.c_arg = v;
    }
    if let Some(v) = s.get("n_arg_total")? {
        sc.n_arg_total = Some(v);
    }
    if let Some(v) = s.get("consultations_per_round")? {
        sc.consultations_per_round = v;
    }
    grid.validate().map_err(|e| usage(e.to_string()))?;
    for p in grid.points() {
        grid.config_for(&p, 0)
            .validate()
            .map_err(|e| usage(format!("combination {p}: {e}")))?;
    }
    let workers = s.get("workers")?;
    Ok(SweepPlan { grid, out, workers })
}

pub fn describe_sim(c: &SimConfig) -> String {
    format!(
        "config: clients={} consultants={} rounds={} f_ii={} delta_n_arg={} alpha={} delta={} \
         c_arg={} rep={} seed={} stream={} n_arg_total={} consultations_per_round={}",
        c.n_clients,
        c.n_consultants,
        c.rounds,
        c.f_ii,
        c.delta_n_arg,
        c.alpha,
        c.delta,
        c.c_arg,
        c.rep_system,
        c.seed,
        c.stream,
        c.n_arg_total,
        c.consultations_per_round
    )
}

pub fn describe_grid(g: &SweepGrid) -> String {
    let join = |v: Vec<String>| v.join(",");
    let s = &g.scenario;
    format!(
        "config: rep={} delta_n_arg={} f_ii={} delta={} alpha={} runs={} rounds={} clients={} \
         consultants={} c_arg={} n_arg_total={} consultations_per_round={} seed={}",
        join(g.rep_systems.iter().map(|r| r.to_string()).collect()),
        join(g.delta_n_arg_values.iter().map(|v| v.to_string()).collect()),
        join(g.f_ii_values.iter().map(|v| v.to_string()).collect()),
        join(g.delta_values.iter().map(|v| v.to_string()).collect()),
        join(g.alpha_values.iter().map(|v| v.to_string()).collect()),
        g.runs_per_point,
        s.rounds,
        s.n_clients,
        s.n_consultants,
        s.c_arg,
        s.n_arg_total.map_or("auto".to_string(), |v| v.to_string()),
        s.consultations_per_round,
        g.base_seed
    )
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (config, diagnostics) = resolve_sim(args)?;
    let io = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "{}", describe_sim(&config)).map_err(io)?;
    let n_ii = config.n_ii();
    let n_wi = config.n_consultants - n_ii;
    let result = Simulation::new(config)
        .map_err(|e| usage(e.to_string()))?
        .run();
    for (strategy, n) in [(Strategy::WellInformed, n_wi), (Strategy::IllInformed, n_ii)] {
        if let Some(mean) = result.mean_profit(strategy) {
            writeln!(out, "{strategy} mean_profit={mean:.6} consultants={n}").map_err(io)?;
        }
    }
    if let Some(path) = diagnostics {
        let mut text = String::from("round,state_of_art,mean_profit_wi,mean_profit_ii,successes,failures\n");
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        for d in &result.rounds {
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                d.round,
                d.state_of_art,
                opt(d.mean_profit_wi),
                opt(d.mean_profit_ii),
                d.successes,
                d.failures
            );
        }
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let plan = resolve_sweep(args)?;
    let io = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "{}", describe_grid(&plan.grid)).map_err(io)?;
    let options = SweepOptions {
        audit: args.audit,
        workers: plan.workers,
    };
    let total = plan.grid.points().len();
    let records = run_sweep_with(&plan.grid, options, |p| {
        eprintln!("done {}/{} {p}", p.index + 1, total);
    })
    .map_err(|e| usage(e.to_string()))?;
    write_csv_file(&records, &plan.out)
        .map_err(|e| CliError::Io(format!("{}: {e}", plan.out.display())))?;
    writeln!(out, "wrote {} records to {}", records.len(), plan.out.display()).map_err(io)?;
    Ok(())
}

fn render_af(
    af: &ArgumentationFramework,
    name: &dyn Fn(ArgumentId) -> String,
    out: &mut dyn Write,
) -> io::Result<()> {
    let show = |l: &Labeling| l.render_with(name);
    writeln!(out, "grounded: {}", show(&grounded_labeling(af)))?;
    if af.len() > DEFAULT_LABELING_BOUND {
        writeln!(
            out,
            "complete: skipped ({} arguments exceed the enumeration bound of {})",
            af.len(),
            DEFAULT_LABELING_BOUND
        )?;
        return Ok(());
    }
    let all = complete_labelings(af).expect("within bound");
    writeln!(out, "complete: {}", all.len())?;
    for l in &all {
        writeln!(out, "{}", show(l))?;
    }
    Ok(())
}

fn cmd_af(args: &AfArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    match (args.chain, &args.file) {
        (Some(n), None) => {
            render_af(&chain_framework(n), &|a| a.to_string(), out).map_err(io)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let nf = parse_apx(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            render_af(&nf.framework, &|a| nf.name(a).to_string(), out).map_err(io)
        }
        _ => Err(usage("af requires exactly one of --chain N or --file PATH")),
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Af(a) => cmd_af(a, out),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
