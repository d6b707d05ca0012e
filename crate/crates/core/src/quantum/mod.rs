//! Exact state representations: the planar single qubit and the dense
//! multi-qubit register.

mod planar;
mod register;

pub use planar::{MeasurementOutcome, PlanarQubitState};
pub use register::{DenseRegisterState, MAX_QUBITS};
