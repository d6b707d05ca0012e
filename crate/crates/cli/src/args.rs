//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hamming_qubit::montecarlo::{Conditioning, SweepAxis};
use hamming_qubit::Scheme;
use serde::Serialize;

use crate::output::Format;

/// Planck constant in J·s, used with `--si`.
pub const PLANCK_SI: f64 = 6.626_070_15e-34;

#[derive(Debug, Parser)]
#[command(
    name = "hamming-qubit",
    version,
    about = "Hamming-weight remainder qubit simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Process one bit-string file and report the machine's answer.
    Run(RunArgs),
    /// Estimate an error rate (or drift variance) over many random strings.
    Montecarlo(MonteCarloArgs),
    /// Repeat a Monte Carlo estimate along one parameter axis.
    Sweep(SweepArgs),
    /// Play the roulette game many times and report the win rate.
    Roulette(RouletteArgs),
    /// Compare switching times and coupling energies across schemes.
    Energy(EnergyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run(_) => "run",
            Command::Montecarlo(_) => "montecarlo",
            Command::Sweep(_) => "sweep",
            Command::Roulette(_) => "roulette",
            Command::Energy(_) => "energy",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Run(a) => &a.output,
            Command::Montecarlo(a) => &a.output,
            Command::Sweep(a) => &a.mc.output,
            Command::Roulette(a) => &a.output,
            Command::Energy(a) => &a.output,
        }
    }
}

/// Unsigned integer in decimal or scientific notation (`10000`, `1e4`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    // 2^53: every integer up to here is exact in f64
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= 9_007_199_254_740_992.0 {
        Ok(x as u64)
    } else {
        Err(format!("not a non-negative integer: {s:?}"))
    }
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    #[serde(skip)]
    pub format: Format,
    /// Output file. Defaults to `$HAMMING_QUBIT_OUT_DIR/<command>.<format>`
    /// when that variable is set, else standard output.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    SingleQubit,
    Tmr,
    Ghz,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SchemeArgs {
    /// Processing scheme.
    #[arg(long, value_enum, default_value_t = SchemeArg::SingleQubit)]
    pub scheme: SchemeArg,
    /// GHZ register size (odd).
    #[arg(long, default_value = "3", value_parser = parse_count)]
    pub nq: u64,
}

impl SchemeArgs {
    pub fn scheme(&self) -> Scheme {
        match self.scheme {
            SchemeArg::SingleQubit => Scheme::SingleQubit,
            SchemeArg::Tmr => Scheme::Tmr,
            SchemeArg::Ghz => Scheme::Ghz {
                n_q: usize::try_from(self.nq).unwrap_or(usize::MAX),
            },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NoiseArgs {
    /// Standard deviation of the per-gate Hilbert-angle error, radians.
    #[arg(long, default_value = "0", value_parser = parse_real)]
    pub phi0: f64,
    /// Mean of the per-gate Hilbert-angle error, radians.
    #[arg(long, default_value = "0", value_parser = parse_real)]
    pub bias: f64,
    /// Per-qubit bit-flip probability per pulse (GHZ only).
    #[arg(long = "p-flip", default_value = "0", value_parser = parse_real)]
    pub p_flip: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Half-modulus: remainders are taken mod 2n.
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    /// Bit-string file: ASCII 0/1, commas and whitespace ignored.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_count)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditioningArg {
    RemainderZero,
    RemainderN,
    Unconditioned,
}

impl From<ConditioningArg> for Conditioning {
    fn from(c: ConditioningArg) -> Self {
        match c {
            ConditioningArg::RemainderZero => Conditioning::RemainderZero,
            ConditioningArg::RemainderN => Conditioning::RemainderN,
            ConditioningArg::Unconditioned => Conditioning::Unconditioned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Wrong-answer rate with confidence interval and prediction.
    ErrorRate,
    /// Variance of the accumulated Hilbert-angle error (single qubit).
    Drift,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MonteCarloArgs {
    #[arg(long, default_value = "2", value_parser = parse_count)]
    pub n: u64,
    /// String length. Defaults to twice the Hamming weight.
    #[arg(long = "N", value_name = "N", value_parser = parse_count)]
    #[serde(rename = "N")]
    pub len: Option<u64>,
    /// Hamming weight of conditioned strings.
    #[arg(long, value_parser = parse_count)]
    pub n1: Option<u64>,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub trials: u64,
    #[arg(long, value_parser = parse_count)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ConditioningArg::RemainderZero)]
    pub conditioning: ConditioningArg,
    /// Probability of a 1 in unconditioned strings.
    #[arg(long = "p-one", default_value = "0.5", value_parser = parse_real)]
    pub p_one: f64,
    #[arg(long, value_enum, default_value_t = Measure::ErrorRate)]
    pub measure: Measure,
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum AxisArg {
    #[value(name = "phi0")]
    #[serde(rename = "phi0")]
    Phi0,
    #[value(name = "N")]
    #[serde(rename = "N")]
    Length,
    #[value(name = "n")]
    #[serde(rename = "n")]
    HalfModulus,
    #[value(name = "p-flip")]
    #[serde(rename = "p-flip")]
    PFlip,
    #[value(name = "nq")]
    #[serde(rename = "nq")]
    Qubits,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Phi0 => SweepAxis::Phi0,
            AxisArg::Length => SweepAxis::Length,
            AxisArg::HalfModulus => SweepAxis::HalfModulus,
            AxisArg::PFlip => SweepAxis::PFlip,
            AxisArg::Qubits => SweepAxis::Qubits,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_real)]
    pub values: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: MonteCarloArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RouletteArgs {
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long = "N", value_name = "N", value_parser = parse_count)]
    #[serde(rename = "N")]
    pub len: u64,
    #[arg(long = "p-one", default_value = "0.5", value_parser = parse_real)]
    pub p_one: f64,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub trials: u64,
    #[arg(long, value_parser = parse_count)]
    pub seed: u64,
    /// Bet by fair coin instead of running a machine.
    #[arg(long = "coin-flip", conflicts_with = "scheme")]
    pub coin_flip: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub ledger: LedgerArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LedgerArgs {
    /// Time per qubit pulse.
    #[arg(long, default_value = "1", value_parser = parse_real)]
    pub tau: f64,
    /// Planck constant in the chosen units.
    #[arg(long, default_value = "1", value_parser = parse_real, conflicts_with = "si")]
    pub h: f64,
    /// Use the SI Planck constant.
    #[arg(long)]
    pub si: bool,
    /// Spin of the classical rotator.
    #[serde(rename = "S")]
    #[arg(long = "S", value_name = "S", default_value = "0.5", value_parser = parse_real)]
    pub spin: f64,
    /// Flat readout time added to every scheme's total.
    #[arg(long = "measurement-time", default_value = "0", value_parser = parse_real)]
    pub measurement_time: f64,
}

impl LedgerArgs {
    pub fn planck(&self) -> f64 {
        if self.si {
            PLANCK_SI
        } else {
            self.h
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long = "N", value_name = "N", value_parser = parse_count)]
    #[serde(rename = "N")]
    pub len: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub ledger: LedgerArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
