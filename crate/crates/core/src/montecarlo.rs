//! Trial harness: repeated randomized runs, error-rate estimates with Wilson
//! intervals, sweeps, and predicted-vs-measured reports.
//!
//! Trial `i` of an experiment with master seed `s` draws everything (string
//! and noise) from `substream(s, i)`. Counts are summed, so results do not
//! depend on evaluation order or thread count.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{run_single_qubit_traced, true_remainder, BitString, ProblemSpec};
use crate::correction::tmr_failure_prob;
use crate::error::{invalid, Error, Result};
use crate::noise::{predicted_error_prob, predicted_variance, NoiseModel};
use crate::rng::{child_seed, substream};
use crate::scalar::Scalar;
use crate::scheme::{run_scheme, Scheme};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// How each trial's string is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    /// Exact Hamming weight with `N₁ mod 2n = 0`, ones placed uniformly.
    RemainderZero,
    /// Exact Hamming weight with `N₁ mod 2n = n`, ones placed uniformly.
    RemainderN,
    /// i.i.d. Bernoulli bits; non-critical trials always count as correct.
    Unconditioned,
}

impl Conditioning {
    fn residue(self, spec: &ProblemSpec) -> Option<u64> {
        match self {
            Conditioning::RemainderZero => Some(0),
            Conditioning::RemainderN => Some(spec.n()),
            Conditioning::Unconditioned => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig<T> {
    pub spec: ProblemSpec,
    pub noise: NoiseModel<T>,
    pub scheme: Scheme,
    pub trials: u64,
    pub master_seed: u64,
    pub conditioning: Conditioning,
    /// Hamming weight of conditioned strings. `None` picks the largest
    /// admissible weight not exceeding `len / 2`.
    pub hamming_weight: Option<u64>,
    /// Probability of a `1` in unconditioned strings.
    pub p_one: f64,
}

impl<T: Scalar> TrialConfig<T> {
    /// Remainder-0 conditioning with the default weight.
    pub fn new(
        spec: ProblemSpec,
        noise: NoiseModel<T>,
        scheme: Scheme,
        trials: u64,
        master_seed: u64,
    ) -> Self {
        Self {
            spec,
            noise,
            scheme,
            trials,
            master_seed,
            conditioning: Conditioning::RemainderZero,
            hamming_weight: None,
            p_one: 0.5,
        }
    }

    pub fn with_weight(mut self, n1: u64) -> Self {
        self.hamming_weight = Some(n1);
        self
    }

    pub fn with_conditioning(mut self, c: Conditioning) -> Self {
        self.conditioning = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return invalid("trials must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.p_one) {
            return invalid(format!("p_one must lie in [0, 1], got {}", self.p_one));
        }
        self.scheme.validate()?;
        self.target_weight().map(|_| ())
    }

    /// Hamming weight used by conditioned trials.
    pub fn target_weight(&self) -> Result<Option<u64>> {
        let Some(residue) = self.conditioning.residue(&self.spec) else {
            return Ok(None);
        };
        let len = self.spec.len();
        let m = self.spec.modulus();
        match self.hamming_weight {
            Some(w) if w > len => {
                invalid(format!("Hamming weight {w} exceeds string length {len}"))
            }
            Some(w) if w % m != residue => invalid(format!(
                "Hamming weight {w} has remainder {} mod {m}, conditioning needs {residue}",
                w % m
            )),
            Some(w) => Ok(Some(w)),
            None => {
                let half = len / 2;
                if half >= residue {
                    Ok(Some(half - (half - residue) % m))
                } else if residue <= len {
                    Ok(Some(residue))
                } else {
                    invalid(format!(
                        "no string of length {len} has remainder {residue} mod {m}"
                    ))
                }
            }
        }
    }
}

/// Build one trial string.
pub fn generate_conditioned<R: Rng + ?Sized>(len: u64, weight: u64, rng: &mut R) -> BitString {
    let mut bits = vec![false; len as usize];
    for i in index::sample(rng, len as usize, weight as usize) {
        bits[i] = true;
    }
    BitString::new(bits)
}

/// `len` i.i.d. Bernoulli(`p_one`) bits, one uniform variate each.
pub fn generate_bernoulli<R: Rng + ?Sized>(len: u64, p_one: f64, rng: &mut R) -> BitString {
    (0..len).map(|_| rng.random::<f64>() < p_one).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub wrong: u64,
    /// Trials whose true remainder was 0 or `n`.
    pub critical: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Exact Gaussian prediction, when one exists for the configuration.
    pub predicted: Option<f64>,
    /// Small-angle prediction (`P ≈ var`, or its TMR composition).
    pub predicted_approx: Option<f64>,
}

impl TrialStats {
    fn from_counts(trials: u64, wrong: u64, critical: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(wrong, trials).expect("wrong <= trials");
        Self {
            trials,
            wrong,
            critical,
            p_hat: wrong as f64 / trials as f64,
            ci_low,
            ci_high,
            predicted: None,
            predicted_approx: None,
        }
    }

    /// `|p_hat − predicted|` in units of the binomial standard error of the
    /// prediction.
    pub fn z_score(&self) -> Option<f64> {
        let p = self.predicted?;
        let se = (p * (1.0 - p) / self.trials as f64).sqrt();
        Some(if se > 0.0 {
            (self.p_hat - p).abs() / se
        } else if self.p_hat == p {
            0.0
        } else {
            f64::INFINITY
        })
    }
}

/// 95% Wilson score interval for `wrong` successes in `trials`.
pub fn wilson_interval(wrong: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 {
        return invalid("trials must be >= 1");
    }
    if wrong > trials {
        return invalid(format!("{wrong} failures exceed {trials} trials"));
    }
    let n = trials as f64;
    let p = wrong as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if wrong == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let high = if wrong == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((low.min(p), high.max(p)))
}

/// `E[sin² φ]` for `φ ~ Normal(mean, variance)`.
fn biased_error_prob(mean: f64, variance: f64) -> f64 {
    if mean == 0.0 {
        return predicted_error_prob(variance);
    }
    0.5 * (1.0 - (-2.0 * variance).exp() * (2.0 * mean).cos())
}

/// Closed-form predictions for a conditioned configuration.
pub fn predictions<T: Scalar>(cfg: &TrialConfig<T>) -> Result<(Option<f64>, Option<f64>)> {
    let Some(n1) = cfg.target_weight()? else {
        return Ok((None, None));
    };
    let phi0 = cfg.noise.phi0().to_f64_lossy();
    let bias = cfg.noise.bias().to_f64_lossy();
    let var = predicted_variance(n1, phi0);
    let single = biased_error_prob(n1 as f64 * bias, var);
    let approx = var + (n1 as f64 * bias).powi(2);
    let flips = cfg.noise.p_flip() > T::zero();
    Ok(match cfg.scheme {
        Scheme::SingleQubit => (Some(single), Some(approx)),
        Scheme::Ghz { .. } if !flips => (Some(single), Some(approx)),
        Scheme::Ghz { .. } => (None, None),
        Scheme::Tmr => (
            Some(tmr_failure_prob(single)?),
            tmr_failure_prob(approx).ok(),
        ),
    })
}

/// Outcome of trial `index`: (critical, wrong).
fn run_trial<T: Scalar>(cfg: &TrialConfig<T>, weight: Option<u64>, index: u64) -> (bool, bool) {
    let mut rng = substream(cfg.master_seed, index);
    let bits = match weight {
        Some(w) => generate_conditioned(cfg.spec.len(), w, &mut rng),
        None => generate_bernoulli(cfg.spec.len(), cfg.p_one, &mut rng),
    };
    let remainder = true_remainder(&bits, &cfg.spec);
    let outcome = run_scheme(&bits, &cfg.spec, cfg.scheme, &cfg.noise, &mut rng)
        .expect("configuration validated before trials start");
    let critical = cfg.spec.is_critical(remainder);
    (
        critical,
        critical && !outcome.answer.is_correct_for(remainder),
    )
}

/// Run `cfg.trials` independent trials in parallel and count wrong answers.
///
/// An answer is wrong when the value it excludes is the true remainder,
/// which can only happen in critical trials.
pub fn estimate_error_rate<T: Scalar>(cfg: &TrialConfig<T>) -> Result<TrialStats> {
    cfg.validate()?;
    let weight = cfg.target_weight()?;
    let (critical, wrong) = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let (c, w) = run_trial(cfg, weight, i);
            (u64::from(c), u64::from(w))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let mut stats = TrialStats::from_counts(cfg.trials, wrong, critical);
    (stats.predicted, stats.predicted_approx) = predictions(cfg)?;
    Ok(stats)
}

/// Spread of the accumulated Hilbert-angle error over many runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftStats {
    pub trials: u64,
    pub hamming_weight: u64,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of `variance`, from the sample fourth moment.
    pub variance_std_error: f64,
    /// `N₁·φ₀²`.
    pub predicted: f64,
}

/// Collect the unwrapped drift of single-qubit runs on conditioned strings.
pub fn estimate_drift_variance<T: Scalar>(cfg: &TrialConfig<T>) -> Result<DriftStats> {
    cfg.validate()?;
    let Some(weight) = cfg.target_weight()? else {
        return invalid("drift statistics need a conditioned Hamming weight");
    };
    let drifts: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.master_seed, i);
            let bits = generate_conditioned(cfg.spec.len(), weight, &mut rng);
            run_single_qubit_traced(&bits, &cfg.spec, &cfg.noise, &mut rng)
                .hilbert_drift
                .to_f64_lossy()
        })
        .collect();
    let m = drifts.len() as f64;
    let mean = drifts.iter().sum::<f64>() / m;
    let (m2, m4) = drifts.iter().fold((0.0, 0.0), |(s2, s4), x| {
        let d2 = (x - mean).powi(2);
        (s2 + d2, s4 + d2 * d2)
    });
    let variance = m2 / (m - 1.0).max(1.0);
    let mu2 = m2 / m;
    let mu4 = m4 / m;
    Ok(DriftStats {
        trials: cfg.trials,
        hamming_weight: weight,
        mean,
        variance,
        variance_std_error: ((mu4 - mu2 * mu2).max(0.0) / m).sqrt(),
        predicted: predicted_variance(weight, cfg.noise.phi0().to_f64_lossy()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Phi0,
    /// String length `N`; conditioned weight reverts to the default.
    Length,
    /// Half-modulus `n`.
    HalfModulus,
    PFlip,
    /// GHZ register size.
    Qubits,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Phi0 => "phi0",
            SweepAxis::Length => "N",
            SweepAxis::HalfModulus => "n",
            SweepAxis::PFlip => "p_flip",
            SweepAxis::Qubits => "n_q",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<TrialStats>,
}

fn as_count(value: f64, what: &str) -> Result<u64> {
    if value.is_finite() && value >= 0.0 && value.fract() == 0.0 && value <= u64::MAX as f64 {
        Ok(value as u64)
    } else {
        invalid(format!(
            "{what} must be a non-negative integer, got {value}"
        ))
    }
}

/// Configuration of one sweep point.
pub fn sweep_point_config<T: Scalar>(
    base: &TrialConfig<T>,
    axis: SweepAxis,
    value: f64,
    point: u64,
) -> Result<TrialConfig<T>> {
    let mut cfg = base.clone();
    cfg.master_seed = child_seed(base.master_seed, point);
    match axis {
        SweepAxis::Phi0 => cfg.noise = cfg.noise.with_phi0(T::of(value))?,
        SweepAxis::PFlip => cfg.noise = cfg.noise.with_p_flip(T::of(value))?,
        SweepAxis::Length => {
            cfg.spec = ProblemSpec::new(cfg.spec.n(), as_count(value, "N")?)?;
            cfg.hamming_weight = None;
        }
        SweepAxis::HalfModulus => {
            cfg.spec = ProblemSpec::new(as_count(value, "n")?, cfg.spec.len())?;
        }
        SweepAxis::Qubits => {
            let n_q = as_count(value, "n_q")? as usize;
            cfg.scheme = Scheme::Ghz { n_q };
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// One estimate per value, in input order. Invalid values become error
/// entries and do not stop the sweep.
pub fn sweep<T: Scalar>(
    base: &TrialConfig<T>,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &value)| SweepPoint {
            value,
            result: sweep_point_config(base, axis, value, i as u64)
                .and_then(|cfg| estimate_error_rate(&cfg)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, len: u64, phi0: f64, scheme: Scheme, trials: u64) -> TrialConfig<f64> {
        TrialConfig::new(
            ProblemSpec::new(n, len).unwrap(),
            NoiseModel::angle(phi0).unwrap(),
            scheme,
            trials,
            2024,
        )
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(wilson_interval(0, 100).unwrap().0, 0.0);
        assert_eq!(wilson_interval(100, 100).unwrap().1, 1.0);
        let (lo, hi) = wilson_interval(50, 100).unwrap();
        assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
        // direct evaluation of the score interval at p = 1/2, n = 100
        let z2 = Z_95 * Z_95;
        let width = 2.0 * Z_95 / (1.0 + z2 / 100.0) * (0.25 / 100.0 + z2 / 40_000.0).sqrt();
        assert!((hi - lo - width).abs() < 1e-12);
        assert!((width - 0.1923).abs() < 1e-3);
        assert!(wilson_interval(5, 4).is_err());
        assert!(wilson_interval(0, 0).is_err());
    }

    #[test]
    fn default_weights_match_conditioning() {
        let c = cfg(2, 10_000, 0.0, Scheme::SingleQubit, 1);
        assert_eq!(c.target_weight().unwrap(), Some(5000));
        let c = c.with_conditioning(Conditioning::RemainderN);
        assert_eq!(c.target_weight().unwrap(), Some(4998));
        let c = cfg(5, 3, 0.0, Scheme::SingleQubit, 1).with_conditioning(Conditioning::RemainderN);
        assert!(c.target_weight().is_err());
        let c = cfg(2, 100, 0.0, Scheme::SingleQubit, 1).with_weight(102);
        assert!(c.validate().is_err());
        let c = cfg(2, 100, 0.0, Scheme::SingleQubit, 1).with_weight(6);
        assert!(c.validate().is_err());
    }

    #[test]
    fn conditioned_strings_have_exact_weight() {
        let mut rng = substream(3, 0);
        for w in [0, 1, 17, 100] {
            let b = generate_conditioned(100, w, &mut rng);
            assert_eq!((b.len(), b.hamming_weight()), (100, w));
        }
    }

    #[test]
    fn noiseless_schemes_never_err() {
        for scheme in [Scheme::SingleQubit, Scheme::Tmr, Scheme::Ghz { n_q: 3 }] {
            for c in [
                Conditioning::RemainderZero,
                Conditioning::RemainderN,
                Conditioning::Unconditioned,
            ] {
                let s = estimate_error_rate(&cfg(3, 200, 0.0, scheme, 500).with_conditioning(c))
                    .unwrap();
                assert_eq!((s.wrong, s.p_hat), (0, 0.0));
            }
        }
    }

    #[test]
    fn stats_are_reproducible() {
        let c = cfg(2, 400, 0.02, Scheme::Tmr, 3000);
        assert_eq!(
            estimate_error_rate(&c).unwrap(),
            estimate_error_rate(&c).unwrap()
        );
        let counts: Vec<u64> = (0..5)
            .map(|seed| {
                estimate_error_rate(&TrialConfig {
                    master_seed: seed,
                    ..c.clone()
                })
                .unwrap()
                .wrong
            })
            .collect();
        assert!(counts.iter().any(|&w| w != counts[0]));
    }

    #[test]
    fn sweep_keeps_order_and_reports_bad_points() {
        let base = cfg(2, 200, 0.0, Scheme::SingleQubit, 200);
        let pts = sweep(&base, SweepAxis::Phi0, &[0.0, -1.0, 0.05]).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0].result.as_ref().unwrap().wrong, 0);
        assert!(pts[1].result.is_err());
        assert!(pts[2].result.is_ok());
        assert!(sweep(&base, SweepAxis::Phi0, &[]).is_err());
        let pts = sweep(&base, SweepAxis::Qubits, &[3.0, 4.0, 2.5]).unwrap();
        assert!(pts[0].result.is_ok() && pts[1].result.is_err() && pts[2].result.is_err());
    }

    #[test]
    fn predictions_by_scheme() {
        let c = cfg(2, 200, 0.01, Scheme::SingleQubit, 1).with_weight(100);
        let (p, a) = predictions(&c).unwrap();
        assert!((p.unwrap() - predicted_error_prob(0.01)).abs() < 1e-15);
        assert!((a.unwrap() - 0.01).abs() < 1e-15);
        let c = TrialConfig {
            scheme: Scheme::Tmr,
            ..c
        };
        let (p, _) = predictions(&c).unwrap();
        assert!((p.unwrap() - tmr_failure_prob(predicted_error_prob(0.01)).unwrap()).abs() < 1e-15);
        let c = c.with_conditioning(Conditioning::Unconditioned);
        assert_eq!(predictions(&c).unwrap(), (None, None));
    }

    #[test]
    fn biased_prediction_reduces_to_unbiased() {
        assert_eq!(biased_error_prob(0.0, 0.3), predicted_error_prob(0.3));
        // deterministic offset: sin² of the offset
        assert!((biased_error_prob(0.2, 0.0) - 0.2f64.sin().powi(2)).abs() < 1e-15);
    }
}
