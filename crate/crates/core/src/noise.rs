//! Gate-error model and closed-form error predictions.
//!
//! Angle parameters are given in amplitude ("Hilbert") units: a per-gate
//! deviation `ε` of the amplitude angle is a physical rotation error of `2ε`.
//! With this convention the accumulated variance is `N₁·φ₀²` and the
//! wrong-outcome probability in a critical case is `sin²(φ)` verbatim.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T> {
    phi0: T,
    bias: T,
    p_flip: T,
}

impl<T: Scalar> Default for NoiseModel<T> {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl<T: Scalar> NoiseModel<T> {
    /// `phi0`: per-gate standard deviation, `bias`: per-gate systematic
    /// offset (both Hilbert-angle radians), `p_flip`: per-qubit bit-flip
    /// probability after each phase pulse of the GHZ register.
    pub fn new(phi0: T, bias: T, p_flip: T) -> Result<Self> {
        if !(phi0.is_finite() && bias.is_finite() && p_flip.is_finite()) {
            return invalid("noise parameters must be finite");
        }
        if phi0 < T::zero() {
            return invalid(format!("phi0 must be >= 0, got {phi0}"));
        }
        if p_flip < T::zero() || p_flip > T::one() {
            return invalid(format!("p_flip must lie in [0, 1], got {p_flip}"));
        }
        Ok(Self { phi0, bias, p_flip })
    }

    pub fn noiseless() -> Self {
        Self {
            phi0: T::zero(),
            bias: T::zero(),
            p_flip: T::zero(),
        }
    }

    /// Unbiased Gaussian angle noise only.
    pub fn angle(phi0: T) -> Result<Self> {
        Self::new(phi0, T::zero(), T::zero())
    }

    pub fn phi0(&self) -> T {
        self.phi0
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn p_flip(&self) -> T {
        self.p_flip
    }

    pub fn with_phi0(self, phi0: T) -> Result<Self> {
        Self::new(phi0, self.bias, self.p_flip)
    }

    pub fn with_p_flip(self, p_flip: T) -> Result<Self> {
        Self::new(self.phi0, self.bias, p_flip)
    }

    /// Physical-angle error of one pulse: `2ε` with `ε ~ Normal(bias, phi0²)`.
    /// Always consumes exactly one normal variate.
    pub fn sample_angle_error<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let z = T::sample_standard_normal(rng);
        T::two() * (self.bias + self.phi0 * z)
    }

    /// Whether one qubit flips after a pulse. Consumes one uniform variate
    /// when `p_flip > 0` and none otherwise.
    pub fn sample_flip<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        self.p_flip > T::zero() && T::sample_unit(rng) < self.p_flip
    }
}

/// Variance of the accumulated Hilbert angle after `n1` noisy gates.
pub fn predicted_variance<T: Scalar>(n1: u64, phi0: T) -> T {
    T::of_u64(n1) * phi0 * phi0
}

/// Exact `E[sin² φ]` for `φ ~ Normal(0, variance)`: `(1 − e^{−2·variance})/2`.
pub fn predicted_error_prob<T: Scalar>(variance: T) -> T {
    if variance.is_infinite() {
        return T::half();
    }
    -(-T::two() * variance).exp_m1() * T::half()
}

/// Small-variance approximation of [`predicted_error_prob`], `P ≈ var`.
pub fn approx_error_prob<T: Scalar>(variance: T) -> T {
    variance
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Workability {
    Comfortable,
    Marginal,
    Violated,
}

impl Workability {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Comfortable => "comfortable",
            Self::Marginal => "marginal",
            Self::Violated => "violated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkabilityMargin<T> {
    pub value: T,
    pub flag: Workability,
}

/// `phi0·√N`, the quantity that must stay well below one.
///
/// Flags: below 0.1 comfortable, below 1 marginal, otherwise violated.
pub fn workability_margin<T: Scalar>(len: u64, phi0: T) -> Result<WorkabilityMargin<T>> {
    if len == 0 {
        return invalid("string length must be >= 1");
    }
    let value = phi0 * T::of_u64(len).sqrt();
    let flag = if value < T::of(0.1) {
        Workability::Comfortable
    } else if value < T::one() {
        Workability::Marginal
    } else {
        Workability::Violated
    };
    Ok(WorkabilityMargin { value, flag })
}
