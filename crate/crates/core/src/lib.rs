//! Single-qubit automaton deciding which of `0` and `n` is *not* the
//! remainder of a bit string's Hamming weight modulo `2n`.
//!
//! Every `1` in the stream rotates one qubit by `π/n`, which needs only
//! `1/n` of the coupling energy an orthogonal (classical) bit switch needs in
//! the same time. A single projective readout at the end settles the two
//! orthogonal cases. The crate simulates that machine, its gate-error model,
//! two error-correction schemes, classical baselines and the time-energy
//! ledger, plus a Monte Carlo harness and a roulette scenario built on top.
//!
//! The simulation modules are generic over [`Scalar`] (`f32` or `f64`); the
//! energy ledger is generic over [`LedgerScalar`], which also admits exact
//! rationals. The aliases below fix the common `f64` instantiations.

pub mod automaton;
pub mod correction;
pub mod energy;
pub mod error;
pub mod montecarlo;
pub mod noise;
pub mod quantum;
pub mod rng;
pub mod roulette;
pub mod scalar;
pub mod scheme;

pub use automaton::{Answer, BitString, ProblemSpec};
pub use energy::LedgerScalar;
pub use error::{Error, Result};
pub use quantum::MeasurementOutcome;
pub use scalar::Scalar;
pub use scheme::Scheme;

pub type PlanarQubit = quantum::PlanarQubitState<f64>;
pub type PlanarQubit32 = quantum::PlanarQubitState<f32>;
pub type Register = quantum::DenseRegisterState<f64>;
pub type Register32 = quantum::DenseRegisterState<f32>;
pub type Noise = noise::NoiseModel<f64>;
pub type Noise32 = noise::NoiseModel<f32>;
pub type TrialConfig = montecarlo::TrialConfig<f64>;
pub type Ledger = energy::EnergyLedger<f64>;
/// Ledger evaluated over exact rationals.
pub type ExactLedger = energy::EnergyLedger<num_rational::BigRational>;
