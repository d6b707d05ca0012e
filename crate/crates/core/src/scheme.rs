//! Uniform front end over the three processing schemes, so harnesses and the
//! CLI can stream characters without caring which one runs.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{answer_from_outcome, Answer, BitString, ProblemSpec, QubitAutomaton};
use crate::correction::{GhzMachine, GhzRunResult, TmrMachine, TmrResult, MAX_GHZ_QUBITS};
use crate::energy::SchemeKind;
use crate::error::{invalid, Result};
use crate::noise::NoiseModel;
use crate::quantum::MeasurementOutcome;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    SingleQubit,
    Tmr,
    Ghz { n_q: usize },
}

impl Scheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::Ghz { n_q } if n_q % 2 == 0 || n_q > MAX_GHZ_QUBITS => invalid(format!(
                "GHZ register needs an odd qubit count in 1..={MAX_GHZ_QUBITS}, got {n_q}"
            )),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::SingleQubit => "single-qubit",
            Scheme::Tmr => "tmr",
            Scheme::Ghz { .. } => "ghz",
        }
    }

    pub fn ledger_kind(&self) -> SchemeKind {
        match self {
            Scheme::SingleQubit | Scheme::Tmr => SchemeKind::SingleQubit,
            Scheme::Ghz { .. } => SchemeKind::Ghz,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Ghz { n_q } => write!(f, "ghz({n_q})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunDetail<T> {
    SingleQubit {
        outcome: MeasurementOutcome,
        theta: T,
    },
    Tmr(TmrResult),
    Ghz(GhzRunResult),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome<T> {
    pub answer: Answer,
    pub detail: RunDetail<T>,
}

/// Streaming processor for any [`Scheme`].
#[derive(Debug, Clone)]
pub enum Machine<T> {
    SingleQubit(QubitAutomaton<T>),
    Tmr(TmrMachine<T>),
    Ghz(GhzMachine<T>),
}

impl<T: Scalar> Machine<T> {
    pub fn new(scheme: Scheme, spec: &ProblemSpec) -> Result<Self> {
        scheme.validate()?;
        Ok(match scheme {
            Scheme::SingleQubit => Machine::SingleQubit(QubitAutomaton::new(spec)),
            Scheme::Tmr => Machine::Tmr(TmrMachine::new(spec)),
            Scheme::Ghz { n_q } => Machine::Ghz(GhzMachine::new(spec, n_q)?),
        })
    }

    #[inline]
    pub fn feed<R: Rng + ?Sized>(&mut self, bit: bool, noise: &NoiseModel<T>, rng: &mut R) {
        match self {
            Machine::SingleQubit(m) => m.feed(bit, noise, rng),
            Machine::Tmr(m) => m.feed(bit, noise, rng),
            Machine::Ghz(m) => m.feed(bit, noise, rng),
        }
    }

    /// Final readout.
    pub fn finish<R: Rng + ?Sized>(&self, spec: &ProblemSpec, rng: &mut R) -> SchemeOutcome<T> {
        match self {
            Machine::SingleQubit(m) => {
                let state = m.state();
                let outcome = state.measure_x(rng);
                SchemeOutcome {
                    answer: answer_from_outcome(outcome, spec),
                    detail: RunDetail::SingleQubit {
                        outcome,
                        theta: state.theta(),
                    },
                }
            }
            Machine::Tmr(m) => {
                let r = m.finish(spec, rng);
                SchemeOutcome {
                    answer: r.answer,
                    detail: RunDetail::Tmr(r),
                }
            }
            Machine::Ghz(m) => {
                let r = m.finish(spec, rng);
                SchemeOutcome {
                    answer: r.answer,
                    detail: RunDetail::Ghz(r),
                }
            }
        }
    }
}

/// Run `scheme` over a whole string and read it out.
pub fn run_scheme<T: Scalar, R: Rng + ?Sized>(
    bits: &BitString,
    spec: &ProblemSpec,
    scheme: Scheme,
    noise: &NoiseModel<T>,
    rng: &mut R,
) -> Result<SchemeOutcome<T>> {
    let mut machine = Machine::new(scheme, spec)?;
    for bit in bits.iter() {
        machine.feed(bit, noise, rng);
    }
    Ok(machine.finish(spec, rng))
}
