//! The stream-processing machine and its classical baselines.
//!
//! The machine never learns the remainder `N₁ mod 2n`. It answers the weaker
//! question of which of `0` and `n` is *not* the remainder, and that answer
//! is what [`Answer`] carries.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::energy::rotator_time_factor;
use crate::error::{invalid, Result};
use crate::noise::NoiseModel;
use crate::quantum::{MeasurementOutcome, PlanarQubitState};
use crate::scalar::Scalar;

/// Problem size: half-modulus `n` (remainders are taken mod `2n`) and string
/// length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    n: u64,
    len: u64,
}

impl ProblemSpec {
    pub fn new(n: u64, len: u64) -> Result<Self> {
        if n < 2 {
            return invalid(format!("half-modulus n must be >= 2, got {n}"));
        }
        if len < 1 {
            return invalid("string length must be >= 1");
        }
        if n.checked_mul(2).is_none() {
            return invalid("half-modulus too large");
        }
        Ok(Self { n, len })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn modulus(&self) -> u64 {
        2 * self.n
    }

    /// Whether `remainder` is one of the two values the answer can be wrong
    /// about.
    pub fn is_critical(&self, remainder: u64) -> bool {
        remainder == 0 || remainder == self.n
    }

    /// Physical rotation per `1` character, `π/n`.
    pub fn step_angle<T: Scalar>(&self) -> T {
        T::PI() / T::of_u64(self.n)
    }
}

/// Binary input string.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Parse a compact `"0110…"` literal; any other character is rejected.
    pub fn from_01(s: &str) -> Result<Self> {
        s.bytes()
            .enumerate()
            .map(|(i, b)| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => invalid(format!("unexpected byte {b:#04x} at offset {i}")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// `ones` ones followed by `zeros` zeros.
    pub fn with_weight(ones: usize, zeros: usize) -> Self {
        let mut bits = vec![true; ones];
        bits.resize(ones + zeros, false);
        Self(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Number of ones, `N₁`.
    pub fn hamming_weight(&self) -> u64 {
        self.0.iter().filter(|&&b| b).count() as u64
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// A value asserted **not** to be the remainder: always `0` or `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Answer {
    not_remainder: u64,
}

impl Answer {
    /// Claim that `0` is not the remainder.
    pub fn excludes_zero() -> Self {
        Self { not_remainder: 0 }
    }

    /// Claim that `n` is not the remainder.
    pub fn excludes_n(spec: &ProblemSpec) -> Self {
        Self {
            not_remainder: spec.n(),
        }
    }

    /// The value claimed not to be the remainder.
    pub fn not_remainder(&self) -> u64 {
        self.not_remainder
    }

    /// True unless the excluded value is in fact the remainder.
    pub fn is_correct_for(&self, remainder: u64) -> bool {
        self.not_remainder != remainder
    }
}

/// `N₁ mod 2n` by direct counting. Reference oracle for everything else.
pub fn true_remainder(bits: &BitString, spec: &ProblemSpec) -> u64 {
    bits.hamming_weight() % spec.modulus()
}

/// Outcome 1 rules out `n`; outcome 0 rules out `0`.
pub fn answer_from_outcome(outcome: MeasurementOutcome, spec: &ProblemSpec) -> Answer {
    if outcome.is_one() {
        Answer::excludes_n(spec)
    } else {
        Answer::excludes_zero()
    }
}

/// Incremental single-qubit machine. Feed it one character at a time.
#[derive(Debug, Clone)]
pub struct QubitAutomaton<T> {
    step: T,
    state: PlanarQubitState<T>,
    drift: T,
    ones: u64,
}

impl<T: Scalar> QubitAutomaton<T> {
    pub fn new(spec: &ProblemSpec) -> Self {
        Self {
            step: spec.step_angle(),
            state: PlanarQubitState::zero(),
            drift: T::zero(),
            ones: 0,
        }
    }

    /// A `1` rotates by `π/n` plus one sampled gate error; a `0` is a no-op
    /// and draws nothing.
    #[inline]
    pub fn feed<R: Rng + ?Sized>(&mut self, bit: bool, noise: &NoiseModel<T>, rng: &mut R) {
        if bit {
            let err = noise.sample_angle_error(rng);
            self.state = self.state.rotate_unchecked(self.step + err);
            self.drift = self.drift + err;
            self.ones += 1;
        }
    }

    pub fn state(&self) -> PlanarQubitState<T> {
        self.state
    }

    /// Accumulated gate error in Hilbert units, not reduced modulo anything.
    pub fn hilbert_drift(&self) -> T {
        self.drift * T::half()
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }
}

/// Final state plus the unwrapped error that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitRun<T> {
    pub state: PlanarQubitState<T>,
    pub hilbert_drift: T,
    pub hamming_weight: u64,
}

/// Process the string on one planar qubit starting from `|0⟩`.
/// Consumes exactly `N₁` noise draws.
pub fn run_single_qubit<T: Scalar, R: Rng + ?Sized>(
    bits: &BitString,
    spec: &ProblemSpec,
    noise: &NoiseModel<T>,
    rng: &mut R,
) -> PlanarQubitState<T> {
    run_single_qubit_traced(bits, spec, noise, rng).state
}

pub fn run_single_qubit_traced<T: Scalar, R: Rng + ?Sized>(
    bits: &BitString,
    spec: &ProblemSpec,
    noise: &NoiseModel<T>,
    rng: &mut R,
) -> SingleQubitRun<T> {
    let mut machine = QubitAutomaton::new(spec);
    for bit in bits.iter() {
        machine.feed(bit, noise, rng);
    }
    SingleQubitRun {
        state: machine.state(),
        hilbert_drift: machine.hilbert_drift(),
        hamming_weight: machine.ones(),
    }
}

/// `⌈log₂(2n)⌉`-bit register counting ones modulo `2n`.
#[derive(Debug, Clone)]
pub struct ClassicalCounter {
    modulus: u64,
    register: u64,
    bit_flips: u64,
}

impl ClassicalCounter {
    pub fn new(spec: &ProblemSpec) -> Self {
        Self {
            modulus: spec.modulus(),
            register: 0,
            bit_flips: 0,
        }
    }

    /// Register width in bits.
    pub fn width(&self) -> u32 {
        u64::BITS - (self.modulus - 1).leading_zeros()
    }

    #[inline]
    pub fn feed(&mut self, bit: bool) {
        if bit {
            let next = (self.register + 1) % self.modulus;
            self.bit_flips += u64::from((self.register ^ next).count_ones());
            self.register = next;
        }
    }

    pub fn remainder(&self) -> u64 {
        self.register
    }

    /// Total number of physical bit transitions so far.
    pub fn bit_flips(&self) -> u64 {
        self.bit_flips
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterRun {
    pub remainder: u64,
    pub bit_flips: u64,
}

pub fn run_classical_counter(bits: &BitString, spec: &ProblemSpec) -> CounterRun {
    let mut counter = ClassicalCounter::new(spec);
    bits.iter().for_each(|b| counter.feed(b));
    CounterRun {
        remainder: counter.remainder(),
        bit_flips: counter.bit_flips(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatorRun<T> {
    /// Final angle in `[0, 2π)`.
    pub angle: T,
    /// Per-pulse time relative to a spin-1/2 at equal coupling energy.
    pub time_factor: T,
}

/// Classical spin of magnitude `spin` driven by the same pulse sequence.
pub fn run_classical_rotator<T: Scalar>(
    bits: &BitString,
    spec: &ProblemSpec,
    spin: T,
) -> Result<RotatorRun<T>> {
    let time_factor = rotator_time_factor(spin)?;
    let step = spec.step_angle::<T>();
    let angle = bits
        .iter()
        .filter(|&b| b)
        .fold(T::zero(), |theta, _| (theta + step).wrap_angle());
    Ok(RotatorRun { angle, time_factor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use std::f64::consts::PI;

    fn spec(n: u64, len: u64) -> ProblemSpec {
        ProblemSpec::new(n, len).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(1, 10).is_err());
        assert!(ProblemSpec::new(2, 0).is_err());
        assert!(ProblemSpec::new(2, 1).is_ok());
    }

    #[test]
    fn worked_remainders() {
        let s = spec(2, 2000);
        assert_eq!(true_remainder(&BitString::with_weight(1729, 100), &s), 1);
        assert_eq!(true_remainder(&BitString::with_weight(8, 3), &s), 0);
        assert_eq!(true_remainder(&BitString::with_weight(0, 30), &s), 0);
    }

    #[test]
    fn bit_literal_parsing() {
        let b = BitString::from_01("1100101").unwrap();
        assert_eq!(b.hamming_weight(), 4);
        assert!(BitString::from_01("10a").is_err());
    }

    #[test]
    fn noiseless_angles_encode_remainder() {
        let quiet = NoiseModel::<f64>::noiseless();
        for n in [2u64, 3, 5, 8] {
            let s = spec(n, 100);
            for ones in 0..(4 * n as usize) {
                let bits = BitString::with_weight(ones, 7);
                let st = run_single_qubit(&bits, &s, &quiet, &mut substream(0, 0));
                let k = (ones as u64 % (2 * n)) as f64;
                let want = k * PI / n as f64;
                let diff = (st.theta() - want).abs();
                assert!(diff.min(2.0 * PI - diff) < 1e-9, "n={n} ones={ones}");
                if ones as u64 % (2 * n) == n {
                    assert!(st.prob_outcome_one() < 1e-20);
                }
            }
        }
        let zeros = BitString::with_weight(0, 50);
        assert_eq!(
            run_single_qubit(&zeros, &spec(2, 50), &quiet, &mut substream(0, 0)).theta(),
            0.0
        );
    }

    #[test]
    fn draws_one_variate_per_one() {
        // consuming exactly N₁ normals leaves the stream where a fresh stream
        // would be after N₁ normals
        let noise = NoiseModel::angle(0.1f64).unwrap();
        let bits = BitString::from_01("1001101000111").unwrap();
        let mut rng = substream(4, 4);
        run_single_qubit(&bits, &spec(3, 13), &noise, &mut rng);
        let mut reference = substream(4, 4);
        for _ in 0..bits.hamming_weight() {
            f64::sample_standard_normal(&mut reference);
        }
        assert_eq!(f64::sample_unit(&mut rng), f64::sample_unit(&mut reference));
    }

    #[test]
    fn answers() {
        let s = spec(2, 10);
        assert_eq!(
            answer_from_outcome(MeasurementOutcome::ONE, &s).not_remainder(),
            2
        );
        assert_eq!(
            answer_from_outcome(MeasurementOutcome::ZERO, &s).not_remainder(),
            0
        );
        assert!(Answer::excludes_zero().is_correct_for(1));
        assert!(Answer::excludes_n(&s).is_correct_for(1));
        assert!(!Answer::excludes_zero().is_correct_for(0));
    }

    #[test]
    fn counter_examples() {
        let s = spec(2, 100);
        assert_eq!(
            run_classical_counter(&BitString::with_weight(8, 5), &s).remainder,
            0
        );
        assert_eq!(
            run_classical_counter(&BitString::with_weight(0, 5), &s),
            CounterRun {
                remainder: 0,
                bit_flips: 0
            }
        );
        assert_eq!(
            run_classical_counter(&BitString::with_weight(1, 5), &s),
            CounterRun {
                remainder: 1,
                bit_flips: 1
            }
        );
        // 00→01→10→11→00: 1 + 2 + 1 + 2
        assert_eq!(
            run_classical_counter(&BitString::with_weight(4, 0), &s).bit_flips,
            6
        );
        assert_eq!(ClassicalCounter::new(&s).width(), 2);
        assert_eq!(ClassicalCounter::new(&spec(5, 1)).width(), 4);
    }

    #[test]
    fn rotator_matches_noiseless_qubit() {
        let s = spec(5, 40);
        let bits = BitString::from_01("1101110010111011110000111101").unwrap();
        let r = run_classical_rotator(&bits, &s, 0.5f64).unwrap();
        assert_eq!(r.time_factor, 1.0);
        let q = run_single_qubit(
            &bits,
            &s,
            &NoiseModel::<f64>::noiseless(),
            &mut substream(0, 0),
        );
        assert!((r.angle - q.theta()).abs() < 1e-12);
        assert_eq!(
            run_classical_rotator(&bits, &s, 100.0f64)
                .unwrap()
                .time_factor,
            200.0
        );
        assert!(run_classical_rotator(&bits, &s, 0.4f64).is_err());
    }
}
