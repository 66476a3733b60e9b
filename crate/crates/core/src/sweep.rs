//! Parameter sweeps over many seeded runs, aggregated into per-strategy
//! profit statistics and written as CSV.
//!
//! Every parameter point gets its own seed, derived from the base seed and
//! the point's position in the canonical grid order; run `r` of that point
//! uses stream `r` of the generator. Adding runs therefore never changes
//! the earlier ones.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::market::{Money, Strategy};
use crate::reputation::ReputationSystem;
use crate::sim::{required_capacity, ConfigError, InvariantViolation, SimConfig, Simulation};

pub const CSV_HEADER: &str =
    "rep_system,delta_n_arg,f_ii,delta,alpha,strategy,mean_profit,std_profit,n_runs";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("combination {point}: {source}")]
    Config {
        point: String,
        #[source]
        source: ConfigError,
    },
    #[error("combination {point}, run {run}: invariant violated: {source}")]
    Invariant {
        point: String,
        run: u64,
        #[source]
        source: InvariantViolation,
    },
    #[error("cannot aggregate an empty sample")]
    EmptySample,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Scenario settings shared by every point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n_clients: usize,
    pub n_consultants: usize,
    pub rounds: u32,
    pub c_arg: Money,
    /// Chain length; `None` sizes it to the shortest chain that never caps.
    pub n_arg_total: Option<u32>,
    pub consultations_per_round: u32,
}

impl Scenario {
    pub fn desk() -> Self {
        Self {
            n_clients: 1 << 8,
            n_consultants: 1 << 5,
            rounds: 1 << 5,
            c_arg: 1.0,
            n_arg_total: None,
            consultations_per_round: 1,
        }
    }

    pub fn paper() -> Self {
        Self {
            n_clients: 1 << 10,
            n_consultants: 1 << 7,
            rounds: 1 << 7,
            ..Self::desk()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Paper,
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            _ => Err(format!("unknown profile `{s}` (expected desk or paper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub rep_systems: Vec<ReputationSystem>,
    pub delta_n_arg_values: Vec<u32>,
    pub f_ii_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub runs_per_point: u64,
    pub base_seed: u64,
    pub scenario: Scenario,
}

/// `0.0, 0.05, ..., 1.0`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=20).map(|i| f64::from(i) / 20.0).collect()
}

impl SweepGrid {
    pub fn for_profile(profile: Profile, base_seed: u64) -> Self {
        let (scenario, runs_per_point) = match profile {
            Profile::Desk => (Scenario::desk(), 1 << 5),
            Profile::Paper => (Scenario::paper(), 1 << 8),
        };
        Self {
            rep_systems: vec![ReputationSystem::R1, ReputationSystem::R2],
            delta_n_arg_values: vec![2, 3, 4, 5],
            f_ii_values: vec![0.1, 0.5, 0.9],
            delta_values: vec![0.1, 0.5],
            alpha_values: default_alpha_grid(),
            runs_per_point,
            base_seed,
            scenario,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let empty = |name: &str, len: usize| {
            if len == 0 {
                Err(SweepError::Grid(format!("{name} list is empty")))
            } else {
                Ok(())
            }
        };
        empty("rep_system", self.rep_systems.len())?;
        empty("delta_n_arg", self.delta_n_arg_values.len())?;
        empty("f_ii", self.f_ii_values.len())?;
        empty("delta", self.delta_values.len())?;
        empty("alpha", self.alpha_values.len())?;
        if self.runs_per_point == 0 {
            return Err(SweepError::Grid("runs_per_point must be >= 1".into()));
        }
        if self.alpha_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::Grid(
                "alpha values must be strictly ascending".into(),
            ));
        }
        Ok(())
    }

    /// Every parameter combination in canonical order, sorted on
    /// `(rep_system, delta_n_arg, f_ii, delta, alpha)`.
    pub fn points(&self) -> Vec<ParameterPoint> {
        let mut reps = self.rep_systems.clone();
        reps.sort();
        reps.dedup();
        let mut dns = self.delta_n_arg_values.clone();
        dns.sort();
        dns.dedup();
        let sorted = |v: &[f64]| {
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let (fs, ds, alphas) = (
            sorted(&self.f_ii_values),
            sorted(&self.delta_values),
            sorted(&self.alpha_values),
        );

        let mut out = Vec::new();
        for &rep_system in &reps {
            for &delta_n_arg in &dns {
                for &f_ii in &fs {
                    for &delta in &ds {
                        for &alpha in &alphas {
                            out.push(ParameterPoint {
                                index: out.len() as u64,
                                rep_system,
                                delta_n_arg,
                                f_ii,
                                delta,
                                alpha,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn config_for(&self, point: &ParameterPoint, run: u64) -> SimConfig {
        let s = &self.scenario;
        SimConfig {
            n_clients: s.n_clients,
            n_consultants: s.n_consultants,
            rounds: s.rounds,
            f_ii: point.f_ii,
            delta_n_arg: point.delta_n_arg,
            alpha: point.alpha,
            delta: point.delta,
            c_arg: s.c_arg,
            rep_system: point.rep_system,
            seed: point_seed(self.base_seed, point.index),
            stream: run,
            n_arg_total: s
                .n_arg_total
                .unwrap_or_else(|| required_capacity(s.rounds, point.delta_n_arg)),
            consultations_per_round: s.consultations_per_round,
        }
    }
}

/// SplitMix64 finalizer applied to the base seed offset by the point index.
pub fn point_seed(base_seed: u64, index: u64) -> u64 {
    let mut z = base_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterPoint {
    /// Position in the canonical grid order.
    pub index: u64,
    pub rep_system: ReputationSystem,
    pub delta_n_arg: u32,
    pub f_ii: f64,
    pub delta: f64,
    pub alpha: f64,
}

impl std::fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "#{} (rep={}, delta_n_arg={}, f_ii={}, delta={}, alpha={})",
            self.index, self.rep_system, self.delta_n_arg, self.f_ii, self.delta, self.alpha
        )
    }
}

/// Mean final profit of each strategy group in one run; `None` for an empty group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub wi: Option<Money>,
    pub ii: Option<Money>,
}

impl RunSummary {
    pub fn get(&self, strategy: Strategy) -> Option<Money> {
        match strategy {
            Strategy::WellInformed => self.wi,
            Strategy::IllInformed => self.ii,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Check simulation invariants after every round.
    pub audit: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub rep_system: ReputationSystem,
    pub delta_n_arg: u32,
    pub f_ii: f64,
    pub delta: f64,
    pub alpha: f64,
    pub strategy: Strategy,
    pub mean_profit: Money,
    pub std_profit: Money,
    pub n_runs: u64,
}

/// Arithmetic mean and sample standard deviation (`n - 1` divisor; 0 for a
/// single sample).
pub fn aggregate(samples: &[f64]) -> Result<(f64, f64), SweepError> {
    if samples.is_empty() {
        return Err(SweepError::EmptySample);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

fn run_one(
    grid: &SweepGrid,
    point: &ParameterPoint,
    run: u64,
    audit: bool,
) -> Result<RunSummary, SweepError> {
    let config = grid.config_for(point, run);
    let sim = Simulation::new(config).map_err(|source| SweepError::Config {
        point: point.to_string(),
        source,
    })?;
    let result = if audit {
        sim.run_audited().map_err(|source| SweepError::Invariant {
            point: point.to_string(),
            run,
            source,
        })?
    } else {
        sim.run()
    };
    Ok(RunSummary {
        wi: result.mean_profit(Strategy::WellInformed),
        ii: result.mean_profit(Strategy::IllInformed),
    })
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

/// Per-run summaries for one point, in run order.
pub fn run_point(
    grid: &SweepGrid,
    point: &ParameterPoint,
    options: SweepOptions,
) -> Result<Vec<RunSummary>, SweepError> {
    with_workers(options.workers, || {
        (0..grid.runs_per_point)
            .into_par_iter()
            .map(|run| run_one(grid, point, run, options.audit))
            .collect()
    })
}

/// Turns one point's runs into records, omitting empty strategy groups.
pub fn summarize(
    point: &ParameterPoint,
    runs: &[RunSummary],
) -> Result<Vec<SweepRecord>, SweepError> {
    let mut out = Vec::new();
    for strategy in [Strategy::WellInformed, Strategy::IllInformed] {
        let samples: Vec<f64> = runs.iter().filter_map(|r| r.get(strategy)).collect();
        if samples.is_empty() {
            continue;
        }
        let (mean_profit, std_profit) = aggregate(&samples)?;
        out.push(SweepRecord {
            rep_system: point.rep_system,
            delta_n_arg: point.delta_n_arg,
            f_ii: point.f_ii,
            delta: point.delta,
            alpha: point.alpha,
            strategy,
            mean_profit,
            std_profit,
            n_runs: samples.len() as u64,
        });
    }
    Ok(out)
}

pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>, SweepError> {
    run_sweep_with(grid, SweepOptions::default(), |_| {})
}

/// Runs every `(point, run)` pair as an independent work item and returns
/// the per-run summaries of each point, in canonical point order.
pub fn run_sweep_detailed(
    grid: &SweepGrid,
    options: SweepOptions,
) -> Result<Vec<(ParameterPoint, Vec<RunSummary>)>, SweepError> {
    grid.validate()?;
    let points = grid.points();
    // surface config errors before spending time on simulations
    for p in &points {
        grid.config_for(p, 0)
            .validate()
            .map_err(|source| SweepError::Config {
                point: p.to_string(),
                source,
            })?;
    }
    let runs = grid.runs_per_point;
    let work: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|p| (0..runs).map(move |r| (p, r)))
        .collect();

    let summaries: Vec<RunSummary> = with_workers(options.workers, || {
        work.par_iter()
            .map(|&(p, r)| run_one(grid, &points[p], r, options.audit))
            .collect::<Result<Vec<_>, _>>()
    })?;

    Ok(points
        .into_iter()
        .zip(summaries.chunks(runs as usize).map(<[RunSummary]>::to_vec))
        .collect())
}

/// Records in canonical order (wi before ii within a point) regardless of
/// completion order. `on_point` is called once per point, in order.
pub fn run_sweep_with(
    grid: &SweepGrid,
    options: SweepOptions,
    mut on_point: impl FnMut(&ParameterPoint),
) -> Result<Vec<SweepRecord>, SweepError> {
    let mut records = Vec::new();
    for (point, runs) in run_sweep_detailed(grid, options)? {
        records.extend(summarize(&point, &runs)?);
        on_point(&point);
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6},{},{:.6},{:.6},{}",
            r.rep_system,
            r.delta_n_arg,
            r.f_ii,
            r.delta,
            r.alpha,
            r.strategy,
            r.mean_profit,
            r.std_profit,
            r.n_runs
        )?;
    }
    Ok(())
}

pub fn write_csv_file(records: &[SweepRecord], path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_csv(records, &mut w)?;
    w.flush()
}
