//! Error correction: triple modular redundancy over three planar qubits, and
//! a GHZ-encoded register decoded by majority vote.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{answer_from_outcome, Answer, BitString, ProblemSpec, QubitAutomaton};
use crate::energy::qubit_pulse_coupling;
use crate::error::{invalid, Result};
use crate::noise::NoiseModel;
use crate::quantum::{DenseRegisterState, MeasurementOutcome, MAX_QUBITS};
use crate::scalar::Scalar;

/// Qubit that receives the phase pulses in the GHZ register.
pub const PULSE_QUBIT: usize = 0;

/// Largest odd register the GHZ scheme accepts.
pub const MAX_GHZ_QUBITS: usize = MAX_QUBITS - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmrResult {
    pub outcomes: [MeasurementOutcome; 3],
    pub majority: bool,
    pub answer: Answer,
}

/// Three independent planar qubits driven by the same pulses.
///
/// Noise draws are interleaved per character (branch 0, 1, 2), so the three
/// branches see disjoint variates from one stream.
#[derive(Debug, Clone)]
pub struct TmrMachine<T> {
    branches: [QubitAutomaton<T>; 3],
}

impl<T: Scalar> TmrMachine<T> {
    pub fn new(spec: &ProblemSpec) -> Self {
        Self {
            branches: std::array::from_fn(|_| QubitAutomaton::new(spec)),
        }
    }

    #[inline]
    pub fn feed<R: Rng + ?Sized>(&mut self, bit: bool, noise: &NoiseModel<T>, rng: &mut R) {
        for b in &mut self.branches {
            b.feed(bit, noise, rng);
        }
    }

    /// Measure all three and vote: two or more ones make a one.
    pub fn finish<R: Rng + ?Sized>(&self, spec: &ProblemSpec, rng: &mut R) -> TmrResult {
        let outcomes: [MeasurementOutcome; 3] =
            std::array::from_fn(|i| self.branches[i].state().measure_x(rng));
        let majority = outcomes.iter().filter(|o| o.is_one()).count() >= 2;
        TmrResult {
            outcomes,
            majority,
            answer: answer_from_outcome(MeasurementOutcome::from_bit(majority), spec),
        }
    }
}

pub fn run_tmr<T: Scalar, R: Rng + ?Sized>(
    bits: &BitString,
    spec: &ProblemSpec,
    noise: &NoiseModel<T>,
    rng: &mut R,
) -> TmrResult {
    let mut machine = TmrMachine::new(spec);
    for bit in bits.iter() {
        machine.feed(bit, noise, rng);
    }
    machine.finish(spec, rng)
}

/// Probability that at least two of three independent qubits err:
/// `3p² − 2p³`.
pub fn tmr_failure_prob<T: Scalar>(p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return invalid(format!("probability must lie in [0, 1], got {p}"));
    }
    let three = T::of(3.0);
    Ok(three * p * p - T::two() * p * p * p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzRunResult {
    pub decoded_bits: Vec<bool>,
    pub majority_bit: bool,
    pub answer: Answer,
    /// Number of bit flips the noise channel injected.
    pub flips: u64,
}

fn check_ghz_size(n_q: usize) -> Result<()> {
    if n_q.is_multiple_of(2) || n_q > MAX_GHZ_QUBITS {
        return invalid(format!(
            "GHZ register needs an odd qubit count in 1..={MAX_GHZ_QUBITS}, got {n_q}"
        ));
    }
    Ok(())
}

/// GHZ-encoded register processed as a stochastic trajectory.
#[derive(Debug, Clone)]
pub struct GhzMachine<T> {
    step: T,
    register: DenseRegisterState<T>,
    flips: u64,
}

impl<T: Scalar> GhzMachine<T> {
    pub fn new(spec: &ProblemSpec, n_q: usize) -> Result<Self> {
        check_ghz_size(n_q)?;
        Ok(Self {
            step: spec.step_angle(),
            register: DenseRegisterState::ghz_logical_init(n_q)?,
            flips: 0,
        })
    }

    /// A `1` fires a phase pulse `π/n + error` on [`PULSE_QUBIT`], then
    /// each qubit flips independently with the model's `p_flip`.
    pub fn feed<R: Rng + ?Sized>(&mut self, bit: bool, noise: &NoiseModel<T>, rng: &mut R) {
        if !bit {
            return;
        }
        let phase = self.step + noise.sample_angle_error(rng);
        self.register.apply_phase(phase, PULSE_QUBIT);
        for q in 0..self.register.num_qubits() {
            if noise.sample_flip(rng) {
                self.register.apply_flip(q);
                self.flips += 1;
            }
        }
    }

    pub fn register(&self) -> &DenseRegisterState<T> {
        &self.register
    }

    /// Decode with `Û⁻¹`, read every qubit, vote. Decoded zeros mean
    /// remainder 0, so majority 0 excludes `n` and majority 1 excludes `0`.
    pub fn finish<R: Rng + ?Sized>(&self, spec: &ProblemSpec, rng: &mut R) -> GhzRunResult {
        let decoded = self.register.clone().ghz_encode_unitary(true);
        let decoded_bits = decoded.measure_all(rng);
        let ones = decoded_bits.iter().filter(|&&b| b).count();
        let majority_bit = 2 * ones > decoded_bits.len();
        let answer = if majority_bit {
            Answer::excludes_zero()
        } else {
            Answer::excludes_n(spec)
        };
        GhzRunResult {
            decoded_bits,
            majority_bit,
            answer,
            flips: self.flips,
        }
    }
}

pub fn run_ghz<T: Scalar, R: Rng + ?Sized>(
    bits: &BitString,
    spec: &ProblemSpec,
    n_q: usize,
    noise: &NoiseModel<T>,
    rng: &mut R,
) -> Result<GhzRunResult> {
    let mut machine = GhzMachine::new(spec, n_q)?;
    for bit in bits.iter() {
        machine.feed(bit, noise, rng);
    }
    Ok(machine.finish(spec, rng))
}

/// Coupling per GHZ phase pulse, `h/(4nτ)`. The register size does not
/// enter: the pulse acts on a single qubit.
pub fn ghz_switch_coupling<T: Scalar>(n: u64, tau: T, h: T) -> Result<T> {
    qubit_pulse_coupling(n, tau, h)
}
