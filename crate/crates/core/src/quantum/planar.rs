//! Single qubit confined to the Bloch equator.
//!
//! The state is stored as the physical rotation angle `theta` of the spin in
//! the equatorial plane. Angle `0` is the reference state `|0⟩`, angle `π` is
//! the orthogonal state. In amplitude space the same state reads
//! `cos(θ/2)|0⟩ + sin(θ/2)|1⟩` up to a global phase, so the amplitude
//! ("Hilbert") angle is half the physical angle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Planar qubit with its physical rotation angle kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarQubitState<T> {
    theta: T,
}

/// Outcome of the projector `|0⟩⟨0|`: `1` when the projection onto `|0⟩`
/// succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementOutcome(bool);

impl MeasurementOutcome {
    pub const ZERO: Self = Self(false);
    pub const ONE: Self = Self(true);

    pub fn from_bit(bit: bool) -> Self {
        Self(bit)
    }

    pub fn is_one(self) -> bool {
        self.0
    }

    /// The outcome as `0` or `1`.
    pub fn bit(self) -> u8 {
        self.0 as u8
    }
}

impl<T: Scalar> Default for PlanarQubitState<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> PlanarQubitState<T> {
    /// The reference state `|0⟩` (angle 0).
    pub fn zero() -> Self {
        Self { theta: T::zero() }
    }

    /// State at physical angle `theta`, reduced modulo `2π`.
    pub fn from_angle(theta: T) -> Result<Self> {
        if !theta.is_finite() {
            return invalid(format!("non-finite rotation angle {theta}"));
        }
        Ok(Self {
            theta: theta.wrap_angle(),
        })
    }

    /// Physical rotation angle in `[0, 2π)`.
    pub fn theta(&self) -> T {
        self.theta
    }

    /// Amplitude-space angle, `theta / 2`.
    pub fn hilbert_angle(&self) -> T {
        self.theta * T::half()
    }

    /// Rotate counterclockwise by `delta` radians.
    pub fn rotate(self, delta: T) -> Result<Self> {
        if !delta.is_finite() {
            return invalid(format!("non-finite rotation {delta}"));
        }
        Ok(self.rotate_unchecked(delta))
    }

    #[inline]
    pub(crate) fn rotate_unchecked(self, delta: T) -> Self {
        Self {
            theta: (self.theta + delta).wrap_angle(),
        }
    }

    /// Probability that the projector onto `|0⟩` yields 1, `cos²(θ/2)`.
    ///
    /// Evaluated as `(1 + cos θ) / 2`, which is exactly 0 at `θ = π`.
    pub fn prob_outcome_one(&self) -> T {
        let p = (T::one() + self.theta.cos()) * T::half();
        p.max(T::zero()).min(T::one())
    }

    /// Projective readout. Draws exactly one uniform variate.
    pub fn measure_x<R: Rng + ?Sized>(&self, rng: &mut R) -> MeasurementOutcome {
        let u = T::sample_unit(rng);
        MeasurementOutcome(u < self.prob_outcome_one())
    }
}
