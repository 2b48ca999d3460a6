//! Simulation library for a qubit engine powered by weak quantum measurements
//! and demon feedback.
//!
//! The model is a two-level system held in a thermal state by a reservoir. A
//! detector weakly probes the spin along x, which raises the energy and purity
//! of the qubit; a feedback rotation about y converts the gain into extractable
//! work, and erasing the detector's one-bit memory costs Landauer work. Every
//! thermodynamic output of one cycle is a closed-form function of the arrow of
//! time statistic `Q`, the log ratio of forward to time-reversed record
//! probabilities.
//!
//! Modules:
//!
//! - [`qubit`] — Bloch-vector state algebra: thermal preparation, discrete and
//!   continuous measurement updates, probabilities, entropies, feedback.
//! - [`cycle`] — closed-form thermodynamics of one discrete
//!   measurement–feedback–erasure cycle, plus parameter sweeps.
//! - [`trajectory`] — Monte Carlo ensembles of sequential continuous weak
//!   measurements with deterministic per-trajectory RNG streams.
//! - [`dist`] — analytic finite-time densities of `Q`, extracted work,
//!   measurement heat, and entropy change, with quadrature for moments.
//! - [`stats`] — histograms, empirical CDFs, Kolmogorov–Smirnov distance, and
//!   inverse-CDF sampling from gridded densities.
//!
//! Unit system: energies in units of the level splitting, temperatures in
//! units of the reservoir temperature, entropies in units of k_B. All
//! logarithms are natural.

pub mod cycle;
pub mod dist;
pub mod qubit;
pub mod stats;
pub mod trajectory;

pub use cycle::{run_cycle, sweep, CycleReport, SweepAxis};
pub use dist::{pdf_ds, pdf_q, pdf_qm, pdf_w, CurveVariable, DensityCurve};
pub use qubit::{
    apply_discrete, arrow_discrete, backward_prob, feedback_rotate, thermal_state,
    DiscreteMeasurement, EngineParams, Outcome, QubitState,
};
pub use stats::{ks_from_histogram, ks_from_samples, Histogram};
pub use trajectory::{run_ensemble, run_trajectory, ContinuousParams, TrajectoryRecord};

use thiserror::Error;

/// Errors for parameter validation and degenerate physical situations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {message}")]
    InvalidParam { name: &'static str, message: String },

    /// The requested measurement outcome has (numerically) zero probability.
    #[error("measurement outcome impossible: forward probability {prob:e}")]
    ImpossibleOutcome { prob: f64 },

    /// Post-measurement energy vanished, so the efficiency denominator is zero.
    #[error("efficiency undefined: post-measurement energy is zero")]
    UndefinedEfficiency,

    /// Both measurement heat and erasure work vanished.
    #[error("coefficient of performance undefined: zero heat plus erasure cost")]
    UndefinedCop,

    #[error("{name} out of domain: {message}")]
    OutOfDomain { name: &'static str, message: String },

    #[error("grid must contain at least one value")]
    EmptyGrid,

    #[error("sample set is empty")]
    EmptySamples,
}

pub type Result<T> = std::result::Result<T, Error>;
