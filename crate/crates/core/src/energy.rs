//! Time-energy accounting for the classical and quantum processing schemes.
//!
//! Everything here is plain arithmetic on the orthogonal-switch bound
//! `t ≥ h/(4ΔE)`. The ledger is generic over [`LedgerScalar`] so it can be
//! evaluated in floating point or exactly over rationals.
//!
//! At equal coupling energy `ΔE = h/(4nτ)`:
//!
//! | scheme            | per-character time | ratio vs classical |
//! |-------------------|--------------------|--------------------|
//! | classical bits    | `nτ`               | 1                  |
//! | single qubit      | `τ`                | `n`                |
//! | GHZ register      | `τ`                | `n`                |
//! | classical rotator | `2Sτ`              | `n / 2S`           |

use std::fmt::{self, Debug};

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Number type the ledger can be evaluated in (`f32`, `f64`, `BigRational`, …).
pub trait LedgerScalar: Num + Clone + PartialOrd + FromPrimitive + Debug {}

impl<T: Num + Clone + PartialOrd + FromPrimitive + Debug> LedgerScalar for T {}

fn lit<T: LedgerScalar>(x: u64) -> T {
    T::from_u64(x).expect("integer representable in ledger scalar")
}

fn positive<T: LedgerScalar>(x: &T, what: &str) -> Result<()> {
    if *x > T::zero() {
        Ok(())
    } else {
        invalid(format!("{what} must be > 0, got {x:?}"))
    }
}

/// Lower bound on total time for `len` characters at coupling `delta_e`,
/// each character costing one orthogonal switch: `len·h/(4ΔE)`.
pub fn classical_min_total_time<T: LedgerScalar>(len: u64, delta_e: T, h: T) -> Result<T> {
    positive(&delta_e, "coupling energy")?;
    positive(&h, "Planck constant")?;
    Ok(lit::<T>(len) * h / (lit::<T>(4) * delta_e))
}

/// Coupling needed to rotate by `π/n` within `tau`: `h/(4nτ)`.
pub fn qubit_pulse_coupling<T: LedgerScalar>(n: u64, tau: T, h: T) -> Result<T> {
    if n < 1 {
        return invalid("half-modulus must be >= 1");
    }
    positive(&tau, "pulse time")?;
    positive(&h, "Planck constant")?;
    Ok(h / (lit::<T>(4) * lit::<T>(n) * tau))
}

/// Ratio of the classical bound to the single-qubit total time at equal
/// coupling and string length.
pub fn quantum_speedup_factor(n: u64) -> u64 {
    n
}

/// Slowdown of a classical spin `spin` relative to spin-1/2 at equal coupling.
pub fn rotator_time_factor<T: LedgerScalar>(spin: T) -> Result<T> {
    let half = T::one() / lit::<T>(2);
    if matches!(spin.partial_cmp(&half), None | Some(std::cmp::Ordering::Less)) {
        return invalid(format!("spin must be >= 1/2, got {spin:?}"));
    }
    Ok(lit::<T>(2) * spin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    ClassicalBits,
    SingleQubit,
    Ghz,
    ClassicalRotator,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::ClassicalBits,
        SchemeKind::SingleQubit,
        SchemeKind::Ghz,
        SchemeKind::ClassicalRotator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClassicalBits => "classical-bits",
            Self::SingleQubit => "single-qubit",
            Self::Ghz => "ghz",
            Self::ClassicalRotator => "classical-rotator",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Charges for one scheme processing a stream.
///
/// Built only from counts and physical constants, never from simulation
/// state, so noisy and noiseless runs with the same counts produce the same
/// ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger<T> {
    pub scheme: SchemeKind,
    pub h: T,
    pub delta_e: T,
    /// Time allotted per character.
    pub tau: T,
    pub characters: u64,
    pub pulse_count: u64,
    /// Flat cost of the single final readout (encode/decode included).
    pub measurement_time: T,
}

impl<T: LedgerScalar> EnergyLedger<T> {
    pub fn new(
        scheme: SchemeKind,
        h: T,
        delta_e: T,
        tau: T,
        characters: u64,
        pulse_count: u64,
    ) -> Result<Self> {
        positive(&h, "Planck constant")?;
        positive(&tau, "per-character time")?;
        if delta_e < T::zero() {
            return invalid("coupling energy must be >= 0");
        }
        if pulse_count > characters {
            return invalid("more pulses than characters");
        }
        Ok(Self {
            scheme,
            h,
            delta_e,
            tau,
            characters,
            pulse_count,
            measurement_time: T::zero(),
        })
    }

    pub fn with_measurement_time(mut self, t: T) -> Self {
        self.measurement_time = t;
        self
    }

    /// Every character, `0` or `1`, occupies one interval `τ`.
    pub fn total_time(&self) -> T {
        lit::<T>(self.characters) * self.tau.clone() + self.measurement_time.clone()
    }

    /// `ΔE·τ`, in units of `h`.
    pub fn action_per_pulse(&self) -> T {
        self.delta_e.clone() * self.tau.clone()
    }
}

/// One row of [`ledger_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRow<T> {
    pub scheme: SchemeKind,
    pub delta_e: T,
    pub per_pulse_time: T,
    pub total_time: T,
    /// Classical bound divided by this scheme's total time.
    pub ratio_vs_classical: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerParams<T> {
    /// Half-modulus; 1 means no nonorthogonal states are used.
    pub n: u64,
    pub len: u64,
    /// Qubit per-pulse time `τ`.
    pub tau: T,
    pub h: T,
    pub spin: T,
    pub measurement_time: T,
}

impl<T: LedgerScalar> LedgerParams<T> {
    pub fn new(n: u64, len: u64, tau: T, h: T, spin: T) -> Self {
        Self {
            n,
            len,
            tau,
            h,
            spin,
            measurement_time: T::zero(),
        }
    }
}

/// Compare all schemes at the qubit's coupling energy `h/(4nτ)`.
pub fn ledger_report<T: LedgerScalar>(p: &LedgerParams<T>) -> Result<Vec<LedgerRow<T>>> {
    if p.len < 1 {
        return invalid("string length must be >= 1");
    }
    let delta_e = qubit_pulse_coupling(p.n, p.tau.clone(), p.h.clone())?;
    let rotator = rotator_time_factor(p.spin.clone())?;
    let len = lit::<T>(p.len);
    let classical_pulse = p.h.clone() / (lit::<T>(4) * delta_e.clone());
    let classical_total =
        classical_min_total_time(p.len, delta_e.clone(), p.h.clone())? + p.measurement_time.clone();

    SchemeKind::ALL
        .iter()
        .map(|&scheme| {
            let per_pulse_time = match scheme {
                SchemeKind::ClassicalBits => classical_pulse.clone(),
                SchemeKind::SingleQubit | SchemeKind::Ghz => p.tau.clone(),
                SchemeKind::ClassicalRotator => rotator.clone() * p.tau.clone(),
            };
            let total_time = len.clone() * per_pulse_time.clone() + p.measurement_time.clone();
            positive(&total_time, "total time")?;
            Ok(LedgerRow {
                scheme,
                delta_e: delta_e.clone(),
                per_pulse_time,
                ratio_vs_classical: classical_total.clone() / total_time.clone(),
                total_time,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn classical_bound() {
        assert_eq!(classical_min_total_time(1, 0.25, 1.0).unwrap(), 1.0);
        assert_eq!(classical_min_total_time(10_000, 1.0, 1.0).unwrap(), 2500.0);
        let a = classical_min_total_time(77, q(3, 7), q(1, 1)).unwrap();
        let b = classical_min_total_time(77, q(6, 7), q(1, 1)).unwrap();
        assert_eq!(a, b * q(2, 1));
        assert!(classical_min_total_time(1, 0.0, 1.0).is_err());
        assert!(classical_min_total_time(1, -1.0, 1.0).is_err());
    }

    #[test]
    fn pulse_coupling() {
        assert_eq!(qubit_pulse_coupling(1, 2.0, 1.0).unwrap(), 0.125);
        assert_eq!(qubit_pulse_coupling(8, 1.0, 1.0).unwrap(), 0.03125);
        assert!(qubit_pulse_coupling(8, 0.0, 1.0).is_err());
        for n in 1..=64u64 {
            let tau = q(3, 11);
            let de = qubit_pulse_coupling(n, tau.clone(), q(1, 1)).unwrap();
            assert_eq!(de * q(n as i64, 1) * tau, q(1, 4));
        }
    }

    #[test]
    fn rotator_factor() {
        assert_eq!(rotator_time_factor(0.5).unwrap(), 1.0);
        assert_eq!(rotator_time_factor(50.0).unwrap(), 100.0);
        assert!(rotator_time_factor(0.49).is_err());
        assert!(rotator_time_factor(f64::NAN).is_err());
        assert!(rotator_time_factor(2.0).unwrap() < rotator_time_factor(2.5).unwrap());
    }

    fn row<T: Clone>(rows: &[LedgerRow<T>], s: SchemeKind) -> LedgerRow<T> {
        rows.iter().find(|r| r.scheme == s).unwrap().clone()
    }

    #[test]
    fn report_rows() {
        let rows = ledger_report(&LedgerParams::new(10, 1000, q(1, 1), q(1, 1), q(1, 2))).unwrap();
        let qubit = row(&rows, SchemeKind::SingleQubit);
        let rot = row(&rows, SchemeKind::ClassicalRotator);
        assert_eq!(qubit.ratio_vs_classical, q(10, 1));
        assert_eq!(qubit.total_time, rot.total_time);
        assert_eq!(qubit.ratio_vs_classical, rot.ratio_vs_classical);

        let rows =
            ledger_report(&LedgerParams::new(10, 1000, q(1, 1), q(1, 1), q(100, 1))).unwrap();
        let qubit = row(&rows, SchemeKind::SingleQubit);
        let rot = row(&rows, SchemeKind::ClassicalRotator);
        assert_eq!(rot.total_time, qubit.total_time.clone() * q(200, 1));
        assert_eq!(rot.ratio_vs_classical, q(10, 200));
        assert_eq!(
            row(&rows, SchemeKind::Ghz),
            LedgerRow {
                scheme: SchemeKind::Ghz,
                ..qubit
            }
        );

        let rows = ledger_report(&LedgerParams::new(1, 1000, q(1, 1), q(1, 1), q(1, 2))).unwrap();
        assert!(rows.iter().all(|r| r.ratio_vs_classical == q(1, 1)));
    }

    #[test]
    fn ledger_depends_only_on_counts() {
        let a = EnergyLedger::new(SchemeKind::SingleQubit, 1.0, 0.025, 1.0, 100, 40).unwrap();
        let b = EnergyLedger::new(SchemeKind::SingleQubit, 1.0, 0.025, 1.0, 100, 40).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_time(), 100.0);
        assert_eq!(a.clone().with_measurement_time(5.0).total_time(), 105.0);
        assert!(EnergyLedger::new(SchemeKind::Ghz, 1.0, 0.1, 1.0, 10, 11).is_err());
    }
}
