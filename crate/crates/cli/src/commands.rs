//! Command execution: each command computes its records, then a single
//! writer emits them.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use hamming_qubit::automaton::ClassicalCounter;
use hamming_qubit::energy::{ledger_report, LedgerParams, LedgerRow, SchemeKind};
use hamming_qubit::montecarlo::{
    estimate_drift_variance, estimate_error_rate, sweep_point_config, TrialStats,
};
use hamming_qubit::noise::workability_margin;
use hamming_qubit::rng::substream;
use hamming_qubit::roulette::{win_rate, GameSpec, Strategy};
use hamming_qubit::scheme::{Machine, RunDetail};
use hamming_qubit::{Noise, ProblemSpec, TrialConfig};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, EnergyArgs, LedgerArgs, Measure, MonteCarloArgs, NoiseArgs, OutputArgs,
    RouletteArgs, RunArgs, SweepArgs,
};
use crate::bitfile::BitReader;
use crate::error::{CliError, Result};
use crate::output::{Emitter, Header, Record};
use crate::OUT_DIR_ENV;

/// Run the parsed command and write its output.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let (seed, config, records) = match &cli.command {
        Command::Run(a) => (Some(a.seed), config(a), run(a)?),
        Command::Montecarlo(a) => (Some(a.seed), config(a), montecarlo(a)?),
        Command::Sweep(a) => (Some(a.mc.seed), config(a), sweep(a)?),
        Command::Roulette(a) => (Some(a.seed), config(a), roulette(a)?),
        Command::Energy(a) => (None, config(a), energy(a)?),
    };
    let header = Header::new(cli.command.name(), seed, config);
    emit(
        cli.command.name(),
        cli.command.output(),
        &header,
        &records,
        stdout,
    )
}

fn config<S: Serialize>(args: &S) -> Value {
    serde_json::to_value(args).expect("arguments serialize to JSON")
}

fn destination(command: &str, out: &OutputArgs) -> Option<PathBuf> {
    out.output.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{command}.{}", out.format.extension())))
    })
}

fn emit(
    command: &str,
    out: &OutputArgs,
    header: &Header,
    records: &[Record],
    stdout: &mut dyn Write,
) -> Result<()> {
    fn write_all<W: Write>(mut e: Emitter<W>, header: &Header, records: &[Record]) -> Result<()> {
        e.header(header)?;
        for r in records {
            e.record(r)?;
        }
        e.finish().map(|_| ())
    }
    match destination(command, out) {
        Some(path) => {
            let file =
                File::create(&path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            write_all(
                Emitter::new(out.format, BufWriter::new(file)),
                header,
                records,
            )
        }
        None => write_all(Emitter::new(out.format, stdout), header, records),
    }
}

fn noise(a: &NoiseArgs) -> Result<Noise> {
    Ok(Noise::new(a.phi0, a.bias, a.p_flip)?)
}

fn record(v: Value) -> Record {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("records are built from object literals"),
    }
}

fn run(a: &RunArgs) -> Result<Vec<Record>> {
    let scheme = a.scheme.scheme();
    scheme.validate()?;
    let noise = noise(&a.noise)?;

    let mut len = 0u64;
    for bit in BitReader::open(&a.input)? {
        bit?;
        len += 1;
    }
    if len == 0 {
        return Err(CliError::EmptyInput(a.input.clone()));
    }
    let spec = ProblemSpec::new(a.n, len)?;

    let mut machine = Machine::<f64>::new(scheme, &spec)?;
    let mut counter = ClassicalCounter::new(&spec);
    let mut rng = substream(a.seed, 0);
    let mut ones = 0u64;
    for bit in BitReader::open(&a.input)? {
        let bit = bit?;
        ones += u64::from(bit);
        counter.feed(bit);
        machine.feed(bit, &noise, &mut rng);
    }
    let outcome = machine.finish(&spec, &mut rng);
    let remainder = counter.remainder();
    let answer = outcome.answer.not_remainder();

    let outcome_x = match &outcome.detail {
        RunDetail::SingleQubit { outcome, .. } => outcome.is_one(),
        RunDetail::Tmr(r) => r.majority,
        RunDetail::Ghz(r) => !r.majority_bit,
    };
    let mut rec = record(json!({
        "scheme": scheme.to_string(),
        "n": spec.n(),
        "N": spec.len(),
        "n1": ones,
        "remainder_true": remainder,
        "critical": spec.is_critical(remainder),
        "outcome_x": u8::from(outcome_x),
        "answer": answer,
        "won_if_roulette": remainder != answer,
        "counter_bit_flips": counter.bit_flips(),
    }));
    match outcome.detail {
        RunDetail::SingleQubit { theta, .. } => {
            rec.insert("theta".into(), json!(theta));
        }
        RunDetail::Tmr(r) => {
            let bits: String = r
                .outcomes
                .iter()
                .map(|o| char::from(b'0' + o.bit()))
                .collect();
            rec.insert("tmr_outcomes".into(), json!(bits));
        }
        RunDetail::Ghz(r) => {
            let bits: String = r
                .decoded_bits
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            rec.insert("ghz_decoded".into(), json!(bits));
            rec.insert("ghz_flips".into(), json!(r.flips));
        }
    }
    Ok(vec![rec])
}

fn trial_config(a: &MonteCarloArgs) -> Result<TrialConfig> {
    let len = match (a.len, a.n1) {
        (Some(len), _) => len,
        (None, Some(w)) => w.saturating_mul(2).max(1),
        (None, None) => return Err(CliError::Usage("montecarlo needs --N or --n1".into())),
    };
    let spec = ProblemSpec::new(a.n, len)?;
    let mut cfg = TrialConfig::new(spec, noise(&a.noise)?, a.scheme.scheme(), a.trials, a.seed)
        .with_conditioning(a.conditioning.into());
    if let Some(w) = a.n1 {
        cfg = cfg.with_weight(w);
    }
    cfg.p_one = a.p_one;
    cfg.validate()?;
    Ok(cfg)
}

fn stats_fields(rec: &mut Record, s: Option<&TrialStats>) {
    let fields = [
        ("trials", s.map(|s| json!(s.trials))),
        ("wrong", s.map(|s| json!(s.wrong))),
        ("critical", s.map(|s| json!(s.critical))),
        ("p_hat", s.map(|s| json!(s.p_hat))),
        ("ci_low", s.map(|s| json!(s.ci_low))),
        ("ci_high", s.map(|s| json!(s.ci_high))),
        ("predicted", s.and_then(|s| s.predicted).map(|p| json!(p))),
        (
            "predicted_approx",
            s.and_then(|s| s.predicted_approx).map(|p| json!(p)),
        ),
        ("z_score", s.and_then(|s| s.z_score()).map(|z| json!(z))),
    ];
    for (k, v) in fields {
        rec.insert(k.into(), v.unwrap_or(Value::Null));
    }
}

fn montecarlo(a: &MonteCarloArgs) -> Result<Vec<Record>> {
    let cfg = trial_config(a)?;
    let weight = cfg.target_weight()?;
    let margin = workability_margin(cfg.spec.len(), a.noise.phi0.abs())?;
    let mut rec = record(json!({
        "measure": a.measure,
        "scheme": cfg.scheme.to_string(),
        "n": cfg.spec.n(),
        "N": cfg.spec.len(),
        "n1": weight,
        "conditioning": cfg.conditioning,
        "phi0": a.noise.phi0,
        "bias": a.noise.bias,
        "p_flip": a.noise.p_flip,
    }));
    match a.measure {
        Measure::ErrorRate => {
            let stats = estimate_error_rate(&cfg)?;
            stats_fields(&mut rec, Some(&stats));
        }
        Measure::Drift => {
            let d = estimate_drift_variance(&cfg)?;
            rec.insert("trials".into(), json!(d.trials));
            rec.insert("mean".into(), json!(d.mean));
            rec.insert("variance".into(), json!(d.variance));
            rec.insert("variance_std_error".into(), json!(d.variance_std_error));
            rec.insert("predicted".into(), json!(d.predicted));
        }
    }
    rec.insert("margin".into(), json!(margin.value));
    rec.insert("workability".into(), json!(margin.flag.as_str()));
    Ok(vec![rec])
}

fn sweep(a: &SweepArgs) -> Result<Vec<Record>> {
    if a.mc.measure != Measure::ErrorRate {
        return Err(CliError::Usage(
            "sweep supports --measure error-rate only".into(),
        ));
    }
    let base = trial_config(&a.mc)?;
    let axis = a.axis.into();
    if a.values.is_empty() {
        return Err(CliError::Usage("--values needs at least one value".into()));
    }
    Ok(a.values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let point = sweep_point_config(&base, axis, value, i as u64);
            let stats = point
                .as_ref()
                .map_err(Clone::clone)
                .and_then(estimate_error_rate);
            let cfg = point.as_ref().ok();
            let mut rec = record(json!({
                "axis": a.axis,
                "value": value,
                "scheme": cfg.map(|c| c.scheme.to_string()),
                "n": cfg.map(|c| c.spec.n()),
                "N": cfg.map(|c| c.spec.len()),
                "n1": cfg.and_then(|c| c.target_weight().ok().flatten()),
                "phi0": cfg.map(|c| c.noise.phi0()),
                "p_flip": cfg.map(|c| c.noise.p_flip()),
            }));
            stats_fields(&mut rec, stats.as_ref().ok());
            rec.insert(
                "error".into(),
                stats
                    .as_ref()
                    .err()
                    .map_or(Value::Null, |e| json!(e.to_string())),
            );
            rec
        })
        .collect())
}

fn ledger(n: u64, len: u64, l: &LedgerArgs) -> Result<Vec<LedgerRow<f64>>> {
    let mut p = LedgerParams::new(n, len, l.tau, l.planck(), l.spin);
    p.measurement_time = l.measurement_time;
    Ok(ledger_report(&p)?)
}

fn total_time(rows: &[LedgerRow<f64>], kind: SchemeKind) -> f64 {
    rows.iter()
        .find(|r| r.scheme == kind)
        .map(|r| r.total_time)
        .expect("ledger reports every scheme")
}

fn roulette(a: &RouletteArgs) -> Result<Vec<Record>> {
    let spec = GameSpec::new(a.n, a.len, a.p_one, a.seed)?;
    let strategy = if a.coin_flip {
        Strategy::CoinFlip
    } else {
        Strategy::Machine(a.scheme.scheme())
    };
    let noise = noise(&a.noise)?;
    let rows = ledger(a.n, a.len, &a.ledger)?;
    let stats = win_rate(&spec, &noise, strategy, a.trials, a.seed)?;
    let (game_time, strategy_name) = match strategy {
        Strategy::Machine(s) => (Some(total_time(&rows, s.ledger_kind())), s.to_string()),
        Strategy::CoinFlip => (None, "coin-flip".to_string()),
    };
    Ok(vec![record(json!({
        "strategy": strategy_name,
        "n": a.n,
        "N": a.len,
        "p_one": a.p_one,
        "phi0": a.noise.phi0,
        "games": stats.games,
        "wins": stats.wins,
        "win_rate": stats.win_rate,
        "ci_low": stats.ci_low,
        "ci_high": stats.ci_high,
        "critical_games": stats.critical_games,
        "critical_losses": stats.critical_losses,
        "conditional_loss_rate": stats.conditional_loss_rate,
        "conditional_ci_low": stats.conditional_ci.map(|c| c.0),
        "conditional_ci_high": stats.conditional_ci.map(|c| c.1),
        "game_time": game_time,
        "classical_game_time": total_time(&rows, SchemeKind::ClassicalBits),
    }))])
}

fn energy(a: &EnergyArgs) -> Result<Vec<Record>> {
    let rows = ledger(a.n, a.len, &a.ledger)?;
    let qubit_time = total_time(&rows, SchemeKind::SingleQubit);
    Ok(rows
        .iter()
        .map(|r| {
            record(json!({
                "scheme": r.scheme.as_str(),
                "n": a.n,
                "N": a.len,
                "h": a.ledger.planck(),
                "delta_e": r.delta_e,
                "per_pulse_time": r.per_pulse_time,
                "total_time": r.total_time,
                "ratio_vs_classical": r.ratio_vs_classical,
                "time_vs_qubit": r.total_time / qubit_time,
            }))
        })
        .collect())
}
