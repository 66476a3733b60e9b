//! The round loop of the market.
//!
//! Each round runs five phases in a fixed order:
//!
//! 1. the state of the art advances by `delta_n_arg` arguments;
//! 2. every well-informed consultant buys up to the state of the art;
//! 3. prices and reputations are snapshotted and turned into selection weights;
//! 4. clients, in id order, each pick a consultant and consult;
//! 5. the round counter advances.
//!
//! All randomness comes from one ChaCha8 generator, seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` and switched to stream `stream`, so a
//! sweep can give every run its own independent substream.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::market::{
    advice_outcome, expenses, ii_topup_target, quote_price, AdviceEvent, AdviceOutcome, Client,
    Consultant, MarketParams, Money, Strategy,
};
use crate::reputation::{minmax_normalize, ReputationLedger, ReputationSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {field}: {message}")]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl ConfigError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("round {round}: {message}")]
pub struct InvariantViolation {
    pub round: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_clients: usize,
    pub n_consultants: usize,
    pub rounds: u32,
    /// Share of ill-informed consultants.
    pub f_ii: f64,
    /// Arguments released per round.
    pub delta_n_arg: u32,
    /// Weight of cheapness against reputation in consultant selection.
    pub alpha: f64,
    /// Profit margin.
    pub delta: f64,
    pub c_arg: Money,
    pub rep_system: ReputationSystem,
    pub seed: u64,
    pub stream: u64,
    /// Length of the whole argument chain.
    pub n_arg_total: u32,
    pub consultations_per_round: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        let rounds = 32;
        let delta_n_arg = 2;
        Self {
            n_clients: 256,
            n_consultants: 32,
            rounds,
            f_ii: 0.5,
            delta_n_arg,
            alpha: 0.5,
            delta: 0.5,
            c_arg: 1.0,
            rep_system: ReputationSystem::R1,
            seed: 0,
            stream: 0,
            n_arg_total: required_capacity(rounds, delta_n_arg),
            consultations_per_round: 1,
        }
    }
}

/// Shortest chain that never caps the state of the art within `rounds`.
pub fn required_capacity(rounds: u32, delta_n_arg: u32) -> u32 {
    1 + rounds.saturating_mul(delta_n_arg)
}

impl SimConfig {
    pub fn market(&self) -> MarketParams {
        MarketParams {
            c_arg: self.c_arg,
            delta: self.delta,
            n_arg_total: self.n_arg_total,
            delta_n_arg: self.delta_n_arg,
        }
    }

    /// Number of ill-informed consultants, `round(f_ii * n_consultants)`.
    pub fn n_ii(&self) -> usize {
        (self.f_ii * self.n_consultants as f64).round() as usize
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_clients < 1 {
            return Err(ConfigError::new("n_clients", "need at least one client"));
        }
        if self.n_consultants < 1 {
            return Err(ConfigError::new("n_consultants", "need at least one consultant"));
        }
        if !(0.0..=1.0).contains(&self.f_ii) {
            return Err(ConfigError::new(
                "f_ii",
                format!("must lie in [0, 1], got {}", self.f_ii),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ConfigError::new(
                "alpha",
                format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(ConfigError::new(
                "delta",
                format!("must be a finite number >= 0, got {}", self.delta),
            ));
        }
        if !(self.c_arg > 0.0 && self.c_arg.is_finite()) {
            return Err(ConfigError::new(
                "c_arg",
                format!("must be a finite number > 0, got {}", self.c_arg),
            ));
        }
        if self.delta_n_arg < 1 {
            return Err(ConfigError::new("delta_n_arg", "must be >= 1"));
        }
        if self.consultations_per_round < 1 {
            return Err(ConfigError::new("consultations_per_round", "must be >= 1"));
        }
        let need = required_capacity(self.rounds, self.delta_n_arg);
        if self.n_arg_total < need {
            return Err(ConfigError::new(
                "n_arg_total",
                format!(
                    "must be >= 1 + rounds * delta_n_arg = {need}, got {}",
                    self.n_arg_total
                ),
            ));
        }
        Ok(())
    }
}

/// Weight of a consultant in the selection lottery.
pub fn selection_weight(cheapness: f64, reputation: f64, alpha: f64) -> f64 {
    alpha * cheapness + (1.0 - alpha) * reputation
}

/// Roulette wheel over fixed non-negative weights. An all-zero wheel draws
/// uniformly.
#[derive(Debug, Clone)]
pub struct Roulette {
    cumulative: Vec<f64>,
    last_positive: Option<usize>,
}

impl Roulette {
    pub fn new(weights: &[f64]) -> Self {
        assert!(!weights.is_empty(), "roulette needs at least one slot");
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|&w| {
                debug_assert!(w >= 0.0, "negative weight {w}");
                acc += w;
                acc
            })
            .collect();
        let last_positive = weights.iter().rposition(|&w| w > 0.0);
        Self {
            cumulative,
            last_positive,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let n = self.cumulative.len();
        let Some(last) = self.last_positive else {
            return rng.gen_range(0..n);
        };
        let total = self.cumulative[n - 1];
        let u = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(last)
    }
}

/// Draws index `i` with probability `weights[i] / sum(weights)`.
pub fn select_consultant<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    Roulette::new(weights).sample(rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundDiagnostics {
    pub round: u32,
    pub state_of_art: u32,
    pub mean_profit_wi: Option<Money>,
    pub mean_profit_ii: Option<Money>,
    pub successes: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub strategies: Vec<Strategy>,
    pub profits: Vec<Money>,
    pub rounds: Vec<RoundDiagnostics>,
}

impl SimResult {
    pub fn mean_profit(&self, strategy: Strategy) -> Option<Money> {
        mean_of(
            self.strategies
                .iter()
                .zip(&self.profits)
                .filter(|(s, _)| **s == strategy)
                .map(|(_, p)| *p),
        )
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    round: u32,
    state_of_art: u32,
    consultants: Vec<Consultant>,
    clients: Vec<Client>,
    ledger: ReputationLedger,
    /// Per-consultant running income, kept apart from the payment multiset.
    earned: Vec<Money>,
    prices: Vec<Money>,
    diagnostics: Vec<RoundDiagnostics>,
    rng: ChaCha8Rng,
}

impl Simulation {
    /// Everyone starts knowing `A_1`. Consultants `0..n_ii` are ill-informed.
    pub fn new(config: SimConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let n_ii = config.n_ii();
        let consultants = (0..config.n_consultants)
            .map(|id| {
                let strategy = if id < n_ii {
                    Strategy::IllInformed
                } else {
                    Strategy::WellInformed
                };
                Consultant::new(id, strategy, 1, config.c_arg)
            })
            .collect();
        let clients = (0..config.n_clients).map(|id| Client::new(id, 1)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(config.stream);
        Ok(Self {
            ledger: ReputationLedger::new(config.rep_system, config.n_consultants),
            earned: vec![0.0; config.n_consultants],
            prices: vec![0.0; config.n_consultants],
            round: 0,
            state_of_art: 1,
            consultants,
            clients,
            diagnostics: Vec::with_capacity(config.rounds as usize),
            rng,
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn state_of_art(&self) -> u32 {
        self.state_of_art
    }

    pub fn consultants(&self) -> &[Consultant] {
        &self.consultants
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    pub fn ledger(&self) -> &ReputationLedger {
        &self.ledger
    }

    /// Prices quoted in the most recent round.
    pub fn prices(&self) -> &[Money] {
        &self.prices
    }

    pub fn diagnostics(&self) -> &[RoundDiagnostics] {
        &self.diagnostics
    }

    pub fn is_finished(&self) -> bool {
        self.round >= self.config.rounds
    }

    /// Releases new arguments and lets well-informed consultants buy them
    /// (phases 1 and 2).
    fn release(&mut self) {
        let c_arg = self.config.c_arg;
        self.state_of_art = (self.state_of_art + self.config.delta_n_arg).min(self.config.n_arg_total);
        for c in &mut self.consultants {
            if c.strategy == Strategy::WellInformed {
                c.buy_up_to(self.state_of_art, c_arg);
            }
        }
    }

    /// Phase 3: raw prices plus the selection wheel built from them.
    fn snapshot(&mut self) -> Roulette {
        let cfg = &self.config;
        self.prices = self
            .consultants
            .iter()
            .map(|c| quote_price(c.expenses, c.successes(), cfg.delta, cfg.c_arg))
            .collect();
        let normalized = minmax_normalize(&self.prices).expect("at least one consultant");
        let reputation = self.ledger.scores();
        let weights: Vec<f64> = normalized
            .iter()
            .zip(&reputation)
            .map(|(p, r)| selection_weight(1.0 - p, *r, cfg.alpha))
            .collect();
        Roulette::new(&weights)
    }

    fn consult(&mut self, client_idx: usize, wheel: &Roulette) -> bool {
        let chosen = wheel.sample(&mut self.rng);
        let client = &mut self.clients[client_idx];
        let consultant = &mut self.consultants[chosen];
        match advice_outcome(client.latest, consultant.latest) {
            AdviceOutcome::Advance { by } => {
                let price = self.prices[chosen];
                consultant.payments.push(price);
                self.earned[chosen] += price;
                client.paid += price;
                client.latest += by;
                debug_assert!(client.latest <= consultant.latest);
                client.history.push(AdviceEvent {
                    consultant: chosen,
                    last_advised_index: client.latest,
                    round: self.round,
                });
                match self.ledger.system() {
                    ReputationSystem::R1 => self.ledger.record_r1(chosen, true),
                    ReputationSystem::R2 => {
                        self.ledger.record_r2(&client.history, client.latest, None)
                    }
                }
                .expect("ledger system matches");
                true
            }
            AdviceOutcome::Failure => {
                match self.ledger.system() {
                    ReputationSystem::R1 => self.ledger.record_r1(chosen, false),
                    ReputationSystem::R2 => {
                        self.ledger.record_r2(&client.history, client.latest, Some(chosen))
                    }
                }
                .expect("ledger system matches");
                if consultant.strategy == Strategy::IllInformed {
                    let target =
                        ii_topup_target(client.latest, consultant.latest, self.state_of_art);
                    consultant.buy_up_to(target, self.config.c_arg);
                }
                false
            }
        }
    }

    /// Runs one full round.
    pub fn step(&mut self) {
        self.release();
        let wheel = self.snapshot();
        let (mut successes, mut failures) = (0u64, 0u64);
        for client in 0..self.clients.len() {
            for _ in 0..self.config.consultations_per_round {
                if self.consult(client, &wheel) {
                    successes += 1;
                } else {
                    failures += 1;
                }
            }
        }
        self.round += 1;
        let mean = |s: Strategy| {
            mean_of(
                self.consultants
                    .iter()
                    .filter(|c| c.strategy == s)
                    .map(Consultant::profit),
            )
        };
        self.diagnostics.push(RoundDiagnostics {
            round: self.round,
            state_of_art: self.state_of_art,
            mean_profit_wi: mean(Strategy::WellInformed),
            mean_profit_ii: mean(Strategy::IllInformed),
            successes,
            failures,
        });
    }

    pub fn run(mut self) -> SimResult {
        while !self.is_finished() {
            self.step();
        }
        self.result()
    }

    /// Like [`Simulation::run`], checking [`Auditor`] invariants after every round.
    pub fn run_audited(mut self) -> Result<SimResult, InvariantViolation> {
        let mut auditor = Auditor::new(&self);
        auditor.check(&self)?;
        while !self.is_finished() {
            self.step();
            auditor.check(&self)?;
        }
        Ok(self.result())
    }

    pub fn result(&self) -> SimResult {
        SimResult {
            strategies: self.consultants.iter().map(|c| c.strategy).collect(),
            profits: self.consultants.iter().map(Consultant::profit).collect(),
            rounds: self.diagnostics.clone(),
        }
    }
}

pub fn run_simulation(config: SimConfig) -> Result<SimResult, ConfigError> {
    Ok(Simulation::new(config)?.run())
}

/// Checks the accounting and knowledge invariants of a simulation between
/// rounds, remembering the previous knowledge state for monotonicity.
#[derive(Debug, Clone)]
pub struct Auditor {
    consultant_latest: Vec<u32>,
    client_latest: Vec<u32>,
}

const MONEY_TOLERANCE: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MONEY_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

impl Auditor {
    pub fn new(sim: &Simulation) -> Self {
        Self {
            consultant_latest: sim.consultants.iter().map(|c| c.latest).collect(),
            client_latest: sim.clients.iter().map(|c| c.latest).collect(),
        }
    }

    pub fn check(&mut self, sim: &Simulation) -> Result<(), InvariantViolation> {
        let round = sim.round;
        let fail = |message: String| Err(InvariantViolation { round, message });
        let c_arg = sim.config.c_arg;

        let received: f64 = sim.consultants.iter().map(Consultant::turnover).sum();
        let paid: f64 = sim.clients.iter().map(|c| c.paid).sum();
        if !close(received, paid) {
            return fail(format!("consultants received {received}, clients paid {paid}"));
        }

        let mut max_consultant = 0;
        for (c, earned) in sim.consultants.iter().zip(&sim.earned) {
            let from_scratch = c.turnover() - expenses(c.latest, c_arg);
            let running = earned - c.expenses;
            if !close(from_scratch, running) || !close(c.profit(), from_scratch) {
                return fail(format!(
                    "consultant {}: profit {} disagrees with turnover - expenses {}",
                    c.id, running, from_scratch
                ));
            }
            if c.latest > sim.state_of_art {
                return fail(format!("consultant {} knows beyond the state of the art", c.id));
            }
            if round > 0 && c.strategy == Strategy::WellInformed && c.latest != sim.state_of_art {
                return fail(format!("wi consultant {} is behind the state of the art", c.id));
            }
            if c.latest < self.consultant_latest[c.id] {
                return fail(format!("consultant {} forgot arguments", c.id));
            }
            max_consultant = max_consultant.max(c.latest);
        }

        for c in &sim.clients {
            if c.latest > max_consultant {
                return fail(format!("client {} knows more than any consultant", c.id));
            }
            if c.latest < self.client_latest[c.id] {
                return fail(format!("client {} forgot arguments", c.id));
            }
        }

        if sim.ledger.system() == ReputationSystem::R1 {
            let expected = sim.clients.len() as u64
                * u64::from(sim.config.consultations_per_round)
                * u64::from(round);
            if sim.ledger.mass() != expected {
                return fail(format!(
                    "R1 ledger mass {} != {expected}",
                    sim.ledger.mass()
                ));
            }
        }

        self.consultant_latest = sim.consultants.iter().map(|c| c.latest).collect();
        self.client_latest = sim.clients.iter().map(|c| c.latest).collect();
        Ok(())
    }
}
