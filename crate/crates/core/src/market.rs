//! Pure rules of the consultant market. Knowledge is always a gapless prefix
//! `A_1..A_latest` of the argument chain, so an agent is described by the
//! index of its latest argument.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

/// Money units.
pub type Money = f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Buys every argument as soon as it is released.
    WellInformed,
    /// Buys only after failing a client, just enough to be one argument ahead.
    IllInformed,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::WellInformed => "wi",
            Strategy::IllInformed => "ii",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wi" => Ok(Strategy::WellInformed),
            "ii" => Ok(Strategy::IllInformed),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// One successful consultation as remembered by the client.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdviceEvent {
    pub consultant: usize,
    /// Index of the final argument conveyed; it has the consultant's parity.
    pub last_advised_index: u32,
    pub round: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Consultant {
    pub id: usize,
    pub strategy: Strategy,
    pub latest: u32,
    pub expenses: Money,
    pub payments: Vec<Money>,
}

impl Consultant {
    pub fn new(id: usize, strategy: Strategy, latest: u32, c_arg: Money) -> Self {
        Self {
            id,
            strategy,
            latest,
            expenses: expenses(latest, c_arg),
            payments: Vec::new(),
        }
    }

    /// Extends the known prefix to `target`, paying for each new argument.
    /// Targets at or below the current prefix are a no-op.
    pub fn buy_up_to(&mut self, target: u32, c_arg: Money) {
        if target > self.latest {
            self.expenses += expenses(target - self.latest, c_arg);
            self.latest = target;
        }
    }

    pub fn successes(&self) -> usize {
        self.payments.len()
    }

    pub fn turnover(&self) -> Money {
        turnover(&self.payments)
    }

    pub fn profit(&self) -> Money {
        profit(self.turnover(), self.expenses)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Client {
    pub id: usize,
    pub latest: u32,
    pub history: Vec<AdviceEvent>,
    /// Running total of everything this client has paid.
    pub paid: Money,
}

impl Client {
    pub fn new(id: usize, latest: u32) -> Self {
        Self {
            id,
            latest,
            history: Vec::new(),
            paid: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub c_arg: Money,
    pub delta: f64,
    pub n_arg_total: u32,
    pub delta_n_arg: u32,
}

impl MarketParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.c_arg > 0.0 && self.c_arg.is_finite()) {
            return Err(format!("c_arg must be a positive finite number, got {}", self.c_arg));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(format!("delta must be >= 0, got {}", self.delta));
        }
        if self.n_arg_total < 1 {
            return Err("n_arg_total must be >= 1".into());
        }
        if self.delta_n_arg < 1 {
            return Err("delta_n_arg must be >= 1".into());
        }
        Ok(())
    }
}

pub fn expenses(latest: u32, c_arg: Money) -> Money {
    f64::from(latest) * c_arg
}

pub fn turnover(payments: &[Money]) -> Money {
    payments.iter().sum()
}

pub fn profit(turnover: Money, expenses: Money) -> Money {
    turnover - expenses
}

/// Cost-recovery price `(1 + delta) * e / successes`, capped at the price of
/// the two arguments a consultation conveys at most. With no successes yet
/// the cap is quoted.
pub fn quote_price(e: Money, successes: usize, delta: f64, c_arg: Money) -> Money {
    let cap = 2.0 * c_arg;
    if successes == 0 {
        return cap;
    }
    ((1.0 + delta) * e / successes as f64).min(cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdviceOutcome {
    /// The consultant knows nothing newer than the client.
    Failure,
    /// The client learns `by` (1 or 2) new arguments.
    Advance { by: u32 },
}

impl AdviceOutcome {
    /// Indices conveyed to a client whose latest argument is `client_latest`.
    pub fn conveyed(self, client_latest: u32) -> Option<RangeInclusive<u32>> {
        match self {
            AdviceOutcome::Failure => None,
            AdviceOutcome::Advance { by } => Some(client_latest + 1..=client_latest + by),
        }
    }
}

/// A consultant only conveys arguments of its own parity and as few as
/// possible: two when the client's latest shares that parity, one otherwise.
pub fn advice_outcome(client_latest: u32, consultant_latest: u32) -> AdviceOutcome {
    if consultant_latest <= client_latest {
        AdviceOutcome::Failure
    } else if client_latest % 2 == consultant_latest % 2 {
        AdviceOutcome::Advance { by: 2 }
    } else {
        AdviceOutcome::Advance { by: 1 }
    }
}

/// Prefix an ill-informed consultant buys up to after meeting a client at
/// least as informed: one argument beyond the client, as far as released.
pub fn ii_topup_target(client_latest: u32, own_latest: u32, state_of_art: u32) -> u32 {
    if client_latest >= own_latest {
        (client_latest + 1).min(state_of_art).max(own_latest)
    } else {
        own_latest
    }
}
