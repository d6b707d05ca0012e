//! Roulette scenario: a pointer with `2n` positions advances one step per `1`
//! of a public random string. Bets are accepted on `0` and `n` only, and a bet
//! loses exactly when the pointer stops on it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{true_remainder, BitString, ProblemSpec};
use crate::energy::{ledger_report, LedgerParams, LedgerRow};
use crate::error::{invalid, Result};
use crate::montecarlo::{generate_bernoulli, wilson_interval};
use crate::noise::NoiseModel;
use crate::rng::substream;
use crate::scalar::Scalar;
use crate::scheme::{run_scheme, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub n: u64,
    pub len: u64,
    pub p_one: f64,
    pub seed: u64,
}

impl GameSpec {
    pub fn new(n: u64, len: u64, p_one: f64, seed: u64) -> Result<Self> {
        ProblemSpec::new(n, len)?;
        if !(0.0..=1.0).contains(&p_one) {
            return invalid(format!("p_one must lie in [0, 1], got {p_one}"));
        }
        Ok(Self {
            n,
            len,
            p_one,
            seed,
        })
    }

    pub fn problem(&self) -> ProblemSpec {
        ProblemSpec::new(self.n, self.len).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub pointer: u64,
    pub bet: u64,
    pub won: bool,
    /// The pointer stopped on `0` or `n`.
    pub critical: bool,
}

/// How the player picks between `0` and `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Bet on the value the machine asserts is not the pointer position.
    Machine(Scheme),
    /// Control: fair coin, ignoring the string.
    CoinFlip,
}

impl From<Scheme> for Strategy {
    fn from(s: Scheme) -> Self {
        Strategy::Machine(s)
    }
}

/// `len` Bernoulli(`p_one`) characters; one variate each.
pub fn generate_string<R: Rng + ?Sized>(spec: &GameSpec, rng: &mut R) -> BitString {
    generate_bernoulli(spec.len, spec.p_one, rng)
}

/// Final pointer position.
pub fn resolve_pointer(bits: &BitString, spec: &GameSpec) -> u64 {
    true_remainder(bits, &spec.problem())
}

pub fn settle(pointer: u64, bet: u64, spec: &GameSpec) -> GameResult {
    GameResult {
        pointer,
        bet,
        won: pointer != bet,
        critical: pointer == 0 || pointer == spec.n,
    }
}

pub fn play<T: Scalar, R: Rng + ?Sized>(
    spec: &GameSpec,
    noise: &NoiseModel<T>,
    strategy: Strategy,
    rng: &mut R,
) -> Result<GameResult> {
    let problem = spec.problem();
    let bits = generate_string(spec, rng);
    let bet = match strategy {
        Strategy::Machine(scheme) => run_scheme(&bits, &problem, scheme, noise, rng)?
            .answer
            .not_remainder(),
        Strategy::CoinFlip => {
            if rng.random::<f64>() < 0.5 {
                0
            } else {
                spec.n
            }
        }
    };
    Ok(settle(resolve_pointer(&bits, spec), bet, spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinStats {
    pub games: u64,
    pub wins: u64,
    pub win_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub critical_games: u64,
    pub critical_losses: u64,
    /// Loss rate given a critical pointer; `None` if no game was critical.
    pub conditional_loss_rate: Option<f64>,
    pub conditional_ci: Option<(f64, f64)>,
}

impl WinStats {
    pub fn loss_rate(&self) -> f64 {
        1.0 - self.win_rate
    }

    pub fn critical_fraction(&self) -> f64 {
        self.critical_games as f64 / self.games as f64
    }
}

/// Play `trials` independent games; game `i` uses `substream(master_seed, i)`.
pub fn win_rate<T: Scalar>(
    spec: &GameSpec,
    noise: &NoiseModel<T>,
    strategy: Strategy,
    trials: u64,
    master_seed: u64,
) -> Result<WinStats> {
    if trials < 1 {
        return invalid("trials must be >= 1");
    }
    if let Strategy::Machine(s) = strategy {
        s.validate()?;
    }
    let (wins, critical, critical_losses) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let g = play(spec, noise, strategy, &mut substream(master_seed, i))
                .expect("strategy validated before play");
            (
                u64::from(g.won),
                u64::from(g.critical),
                u64::from(g.critical && !g.won),
            )
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let (ci_low, ci_high) = wilson_interval(wins, trials)?;
    let conditional_ci = if critical > 0 {
        Some(wilson_interval(critical_losses, critical)?)
    } else {
        None
    };
    Ok(WinStats {
        games: trials,
        wins,
        win_rate: wins as f64 / trials as f64,
        ci_low,
        ci_high,
        critical_games: critical,
        critical_losses,
        conditional_loss_rate: (critical > 0).then(|| critical_losses as f64 / critical as f64),
        conditional_ci,
    })
}

/// Time budget for one game: the ledger for the spec's `n` and `N`.
pub fn batch_ledger(spec: &GameSpec, tau: f64, h: f64, spin: f64) -> Result<Vec<LedgerRow<f64>>> {
    ledger_report(&LedgerParams::new(spec.n, spec.len, tau, h, spin))
}
