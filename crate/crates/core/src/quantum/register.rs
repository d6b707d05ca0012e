//! Dense state vector over a small register, used for the GHZ-encoded variant.
//!
//! Qubit 0 is the leftmost ket label: in `|q0 q1 … q_{n-1}⟩` qubit `q` owns
//! bit `n_q - 1 - q` of the basis index.

use num_complex::Complex;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseRegisterState<T> {
    n_q: usize,
    amps: Vec<Complex<T>>,
}

fn check_capacity(n_q: usize) -> Result<()> {
    if n_q == 0 || n_q > MAX_QUBITS {
        return Err(Error::Capacity {
            n_q,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl<T: Scalar> DenseRegisterState<T> {
    /// Computational basis state `index`.
    pub fn basis(n_q: usize, index: usize) -> Result<Self> {
        check_capacity(n_q)?;
        let dim = 1usize << n_q;
        if index >= dim {
            return invalid(format!("basis index {index} out of range for {n_q} qubits"));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_q, amps })
    }

    /// `|0…0⟩`.
    pub fn all_zeros(n_q: usize) -> Result<Self> {
        Self::basis(n_q, 0)
    }

    /// `|1…1⟩`.
    pub fn all_ones(n_q: usize) -> Result<Self> {
        check_capacity(n_q)?;
        Self::basis(n_q, (1usize << n_q) - 1)
    }

    /// Wrap raw amplitudes. The length must be `2^n_q` for a supported `n_q`;
    /// normalization is the caller's responsibility.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return invalid(format!("amplitude vector length {len} is not 2^n_q"));
        }
        let n_q = len.trailing_zeros() as usize;
        check_capacity(n_q)?;
        Ok(Self { n_q, amps })
    }

    /// Logical register state `(|0…0⟩ − e^{−iπk/n}|1…1⟩)/√2`.
    pub fn ghz_logical(n_q: usize, k: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return invalid("half-modulus must be positive");
        }
        check_capacity(n_q)?;
        let dim = 1usize << n_q;
        let s = T::FRAC_1_SQRT_2();
        let angle = -T::PI() * T::of_u64(k % (2 * n)) / T::of_u64(n);
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[0] = Complex::new(s, T::zero());
        amps[dim - 1] = -Complex::from_polar(s, angle);
        Ok(Self { n_q, amps })
    }

    /// `|ψ_0⟩ = (|0…0⟩ − |1…1⟩)/√2`, the encoded starting state.
    pub fn ghz_logical_init(n_q: usize) -> Result<Self> {
        Self::ghz_logical(n_q, 0, 1)
    }

    pub fn num_qubits(&self) -> usize {
        self.n_q
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probability of basis index `index`.
    pub fn probability(&self, index: usize) -> T {
        self.amps.get(index).map_or(T::zero(), |a| a.norm_sqr())
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        if self.n_q != other.n_q {
            return invalid(format!(
                "register sizes differ: {} vs {}",
                self.n_q, other.n_q
            ));
        }
        let inner = self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            });
        Ok(inner.norm())
    }

    #[inline]
    fn mask(&self, target: usize) -> usize {
        1usize << (self.n_q - 1 - target)
    }

    fn check_target(&self, target: usize) -> Result<()> {
        if target >= self.n_q {
            return invalid(format!(
                "qubit index {target} out of range for {} qubits",
                self.n_q
            ));
        }
        Ok(())
    }

    /// Evolve under `ΔE|1⟩⟨1|` on `target` for accumulated phase `phase`:
    /// every amplitude with the target bit set gains `exp(−i·phase)`.
    pub fn phase_pulse(self, phase: T, target: usize) -> Result<Self> {
        self.check_target(target)?;
        if !phase.is_finite() {
            return invalid(format!("non-finite phase {phase}"));
        }
        let mut s = self;
        s.apply_phase(phase, target);
        Ok(s)
    }

    pub(crate) fn apply_phase(&mut self, phase: T, target: usize) {
        let m = self.mask(target);
        let factor = Complex::from_polar(T::one(), -phase);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *a = *a * factor;
            }
        }
    }

    /// Pauli X on `target`.
    pub fn bit_flip(self, target: usize) -> Result<Self> {
        self.check_target(target)?;
        let mut s = self;
        s.apply_flip(target);
        Ok(s)
    }

    pub(crate) fn apply_flip(&mut self, target: usize) {
        let m = self.mask(target);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
    }

    fn hadamard(mut self, target: usize) -> Self {
        let m = self.mask(target);
        let s = T::FRAC_1_SQRT_2();
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a, b) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = (a + b).scale(s);
                self.amps[i | m] = (a - b).scale(s);
            }
        }
        self
    }

    /// CNOT from qubit 0 onto every other qubit.
    fn cnot_fanout(mut self) -> Self {
        let control = self.mask(0);
        let targets = control - 1;
        for i in 0..self.amps.len() {
            // visit each swapped pair once, from its member whose low bits are
            // lexicographically smaller
            let j = i ^ targets;
            if i & control != 0 && i < j {
                self.amps.swap(i, j);
            }
        }
        self
    }

    /// Apply the encoder `Û` (or `Û⁻¹` when `inverse`), which maps
    /// `|0…0⟩ → (|0…0⟩ − |1…1⟩)/√2` and `|1…1⟩ → (|0…0⟩ + |1…1⟩)/√2`.
    ///
    /// `Û = F · H₀ · X₀ · F` with `F` the CNOT fan-out from qubit 0.
    pub fn ghz_encode_unitary(self, inverse: bool) -> Self {
        let mut s = self.cnot_fanout();
        if inverse {
            s = s.hadamard(0);
            s.apply_flip(0);
        } else {
            s.apply_flip(0);
            s = s.hadamard(0);
        }
        s.cnot_fanout()
    }

    /// Sample a basis state and return its bits in qubit order.
    /// Draws exactly one uniform variate.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let u = T::sample_unit(rng);
        let mut acc = T::zero();
        let mut index = None;
        for (i, a) in self.amps.iter().enumerate() {
            acc = acc + a.norm_sqr();
            if u < acc {
                index = Some(i);
                break;
            }
        }
        // rounding can leave the cumulative sum just below u; fall back to
        // the last index with nonzero weight
        let index = index.unwrap_or_else(|| {
            self.amps
                .iter()
                .rposition(|a| a.norm_sqr() > T::zero())
                .unwrap_or(0)
        });
        (0..self.n_q).map(|q| index & self.mask(q) != 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    type Reg = DenseRegisterState<f64>;

    fn random_state(n_q: usize, seed: u64) -> Reg {
        let mut rng = substream(seed, 0);
        let mut amps: Vec<Complex<f64>> = (0..1 << n_q)
            .map(|_| {
                Complex::new(
                    f64::sample_standard_normal(&mut rng),
                    f64::sample_standard_normal(&mut rng),
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Reg::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn logical_init_amplitudes() {
        let s = Reg::ghz_logical_init(1).unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1].re + FRAC_1_SQRT_2).abs() < 1e-15);

        let s = Reg::ghz_logical_init(3).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expect = match i {
                0 => FRAC_1_SQRT_2,
                7 => -FRAC_1_SQRT_2,
                _ => 0.0,
            };
            assert!((a.re - expect).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
        for n_q in 1..=MAX_QUBITS {
            let s = Reg::ghz_logical_init(n_q).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(
            Reg::ghz_logical_init(0),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            Reg::ghz_logical_init(13),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn phase_pulses_step_through_logical_states() {
        let (n, n_q) = (4u64, 2usize);
        let mut s = Reg::ghz_logical_init(n_q).unwrap();
        for _ in 0..n {
            s = s.phase_pulse(PI / n as f64, 0).unwrap();
        }
        let plus = Reg::ghz_logical(n_q, n, n).unwrap();
        assert!((s.fidelity(&plus).unwrap() - 1.0).abs() < 1e-12);
        for _ in 0..n {
            s = s.phase_pulse(PI / n as f64, 0).unwrap();
        }
        let init = Reg::ghz_logical_init(n_q).unwrap();
        assert!((s.fidelity(&init).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_phase_is_identity() {
        let s = random_state(3, 4);
        assert_eq!(s.clone().phase_pulse(0.0, 1).unwrap(), s);
    }

    #[test]
    fn bad_targets_rejected() {
        let s = Reg::all_zeros(3).unwrap();
        assert!(s.clone().phase_pulse(0.1, 3).is_err());
        assert!(s.bit_flip(5).is_err());
    }

    #[test]
    fn encoder_maps_trivial_states() {
        let n_q = 3;
        let minus = Reg::ghz_logical(n_q, 0, 2).unwrap();
        let plus = Reg::ghz_logical(n_q, 2, 2).unwrap();
        let u0 = Reg::all_zeros(n_q).unwrap().ghz_encode_unitary(false);
        let u1 = Reg::all_ones(n_q).unwrap().ghz_encode_unitary(false);
        assert!((u0.fidelity(&minus).unwrap() - 1.0).abs() < 1e-12);
        assert!((u1.fidelity(&plus).unwrap() - 1.0).abs() < 1e-12);

        let d0 = minus.ghz_encode_unitary(true);
        let d1 = plus.ghz_encode_unitary(true);
        assert!((d0.probability(0) - 1.0).abs() < 1e-12);
        assert!((d1.probability(7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encoder_round_trip() {
        for seed in 0..20 {
            for n_q in 1..=5 {
                let s = random_state(n_q, seed);
                let back = s.clone().ghz_encode_unitary(false).ghz_encode_unitary(true);
                let dev = s
                    .amplitudes()
                    .iter()
                    .zip(back.amplitudes())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-12);
            }
        }
    }

    #[test]
    fn bit_flip_examples() {
        let s = Reg::all_zeros(3).unwrap().bit_flip(0).unwrap();
        assert_eq!(s.probability(0b100), 1.0);
        let r = random_state(3, 1);
        assert_eq!(r.clone().bit_flip(2).unwrap().bit_flip(2).unwrap(), r);
        let mut s = Reg::all_zeros(4).unwrap();
        for q in 0..4 {
            s = s.bit_flip(q).unwrap();
        }
        assert_eq!(s, Reg::all_ones(4).unwrap());
    }

    #[test]
    fn measure_all_certain_states() {
        let s = Reg::all_ones(3).unwrap();
        let d = Reg::ghz_logical_init(3).unwrap().ghz_encode_unitary(true);
        for i in 0..100 {
            assert_eq!(s.measure_all(&mut substream(3, i)), vec![true; 3]);
            assert_eq!(d.measure_all(&mut substream(3, i)), vec![false; 3]);
        }
    }

    #[test]
    fn measure_all_born_rule() {
        let s = Reg::ghz_logical_init(3).unwrap();
        let trials = 100_000u64;
        let mut ones = 0u64;
        for i in 0..trials {
            let bits = s.measure_all(&mut substream(21, i));
            assert!(bits == vec![false; 3] || bits == vec![true; 3]);
            ones += bits[0] as u64;
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 3.0 * (0.25 / trials as f64).sqrt());
    }
}
