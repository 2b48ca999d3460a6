//! Monte Carlo ensembles of sequential time-continuous weak measurements.
//!
//! One step measures σx with Kraus operator
//! (δt/2πτ)^{1/4} exp(-δt (r - σx)² / 4τ), i.e. a Bloch update generated by
//! exp(g σx / 2) with g = (δt/τ) r, after sampling the readout r from the
//! state's two-Gaussian mixture with means ±1 and variance τ/δt. Because all
//! x-measurement operators commute, the arrow statistic of a whole record from
//! a thermal start is Q = ln cosh²((δt/τ) Σ r_k).
//!
//! Each trajectory owns a counter-derived RNG stream, so ensembles are
//! bit-identical for a fixed master seed no matter how many workers run them.

use crate::qubit::{feedback_rotate, thermal_state, EngineParams, QubitState};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// Parameters of a continuous measurement run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousParams {
    dt_over_tau: f64,
    n_steps: usize,
    n_traj: usize,
    master_seed: u64,
    retain_states: bool,
}

impl ContinuousParams {
    pub fn new(dt_over_tau: f64, n_steps: usize, n_traj: usize, master_seed: u64) -> Result<Self> {
        if !dt_over_tau.is_finite() || dt_over_tau <= 0.0 {
            return Err(Error::InvalidParam {
                name: "dt_over_tau",
                message: format!("must be finite and > 0, got {dt_over_tau}"),
            });
        }
        if n_traj == 0 {
            return Err(Error::InvalidParam {
                name: "n_traj",
                message: "ensemble needs at least one trajectory".into(),
            });
        }
        Ok(Self {
            dt_over_tau,
            n_steps,
            n_traj,
            master_seed,
            retain_states: false,
        })
    }

    /// Opt in to retaining the full state path of each trajectory.
    pub fn retain_states(mut self, yes: bool) -> Self {
        self.retain_states = yes;
        self
    }

    pub fn dt_over_tau(&self) -> f64 {
        self.dt_over_tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_traj(&self) -> usize {
        self.n_traj
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Total measurement duration over the characteristic time, n δt/τ.
    pub fn total_duration(&self) -> f64 {
        self.n_steps as f64 * self.dt_over_tau
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.dt_over_tau > 0.1 {
            w.push(format!(
                "dt_over_tau = {} is outside the continuum-limit regime (<= 0.1 recommended)",
                self.dt_over_tau
            ));
        }
        w
    }
}

/// One simulated trajectory with its derived thermodynamic outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub traj_index: u64,
    /// Readout sequence, one value per measurement.
    pub readouts: Vec<f64>,
    /// State path (initial state plus one entry per step); retained on request.
    pub states: Option<Vec<QubitState>>,
    /// Arrow of time statistic of the whole record.
    pub arrow_q: f64,
    /// Cumulative forward log-likelihood of the record, Σ ln tr(M ρ M†).
    pub log_forward: f64,
    /// Extracted work, E(pre-feedback) - E(post-feedback).
    pub w_ext: f64,
    /// Measurement heat, E(pre-feedback) - E0.
    pub q_m: f64,
    /// Entropy change, S(final) - S(initial).
    pub ds_m: f64,
    /// State after all measurements, before the feedback rotation.
    pub pre_feedback: QubitState,
    /// State after the feedback rotation.
    pub final_state: QubitState,
}

pub(crate) fn ln_cosh(g: f64) -> f64 {
    let a = g.abs();
    if a <= 1.0 {
        a.cosh().ln()
    } else {
        a - LN_2 + (-2.0 * a).exp().ln_1p()
    }
}

/// Draw one readout from p(r) = p₊ N(+1, τ/δt) + p₋ N(-1, τ/δt) with
/// p_± = (1 ± x)/2; this is exactly tr(M ρ M†) of the continuous Kraus
/// operator.
pub fn sample_readout(state: QubitState, dt_over_tau: f64, rng: &mut impl Rng) -> f64 {
    let p_plus = 0.5 * (1.0 + state.x);
    let mean = if rng.random::<f64>() < p_plus {
        1.0
    } else {
        -1.0
    };
    let noise: f64 = rng.sample(StandardNormal);
    mean + noise / dt_over_tau.sqrt()
}

/// Apply one continuous measurement update for readout `r` and return the
/// normalized post-measurement state with the forward log-likelihood
/// ln tr(M ρ M†), Gaussian prefactor included.
///
/// In Bloch form with g = (δt/τ) r: x' = (x + tanh g)/(1 + x tanh g),
/// y' and z' scale by sech g / (1 + x tanh g). Likelihoods accumulate in the
/// log domain so large |g| cannot underflow.
pub fn step(state: QubitState, r: f64, dt_over_tau: f64) -> (QubitState, f64) {
    let g = dt_over_tau * r;
    let t = g.tanh();
    let denom = 1.0 + state.x * t;
    let log_prefactor = 0.5 * (dt_over_tau / (2.0 * PI)).ln() - dt_over_tau * (r * r + 1.0) / 2.0;

    if denom <= 0.0 {
        // only reachable from an x-eigenstate with tanh g rounded to ∓1;
        // the eigenstate is a fixed point and the record has zero density
        return (state, f64::NEG_INFINITY);
    }

    let sech = 1.0 / g.cosh(); // 0 on overflow, the correct limit
    let post = QubitState {
        x: (state.x + t) / denom,
        y: state.y * sech / denom,
        z: state.z * sech / denom,
    };
    let log_likelihood = log_prefactor + ln_cosh(g) + denom.ln();
    (post, log_likelihood)
}

/// Arrow of time statistic of a completed readout record from a thermal
/// (x = y = 0) initial state: Q = ln cosh²((δt/τ) Σ r_k).
///
/// For non-thermal starts the closed form does not apply and the
/// operator-product route must be used instead.
pub fn arrow_continuous(readouts: &[f64], dt_over_tau: f64, initial: &QubitState) -> Result<f64> {
    if initial.x.abs() > 1e-12 || initial.y.abs() > 1e-12 {
        return Err(Error::OutOfDomain {
            name: "initial_state",
            message: "closed-form arrow requires a thermal (x = y = 0) start; \
                      evaluate the operator-product log-ratio instead"
                .into(),
        });
    }
    let sum: f64 = readouts.iter().sum();
    Ok(2.0 * ln_cosh(dt_over_tau * sum))
}

/// Simulate one trajectory. The RNG stream is derived deterministically from
/// (master_seed, traj_index), so any execution order reproduces it.
pub fn run_trajectory(
    params: &EngineParams,
    cparams: &ContinuousParams,
    traj_index: u64,
) -> TrajectoryRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cparams.master_seed);
    rng.set_stream(traj_index);

    let initial = thermal_state(params);
    let dt = cparams.dt_over_tau;
    let mut state = initial;
    let mut readouts = Vec::with_capacity(cparams.n_steps);
    let mut states = cparams.retain_states.then(|| vec![initial]).map(|mut v| {
        v.reserve(cparams.n_steps);
        v
    });
    let mut log_forward = 0.0;

    for _ in 0..cparams.n_steps {
        let r = sample_readout(state, dt, &mut rng);
        let (next, logl) = step(state, r, dt);
        readouts.push(r);
        log_forward += logl;
        state = next;
        if let Some(path) = states.as_mut() {
            path.push(state);
        }
    }

    let arrow_q = arrow_continuous(&readouts, dt, &initial)
        .expect("thermal start always admits the closed form");
    let pre_feedback = state;
    let (final_state, _) = feedback_rotate(pre_feedback);

    TrajectoryRecord {
        traj_index,
        readouts,
        states,
        arrow_q,
        log_forward,
        w_ext: pre_feedback.energy() - final_state.energy(),
        q_m: pre_feedback.energy() - initial.energy(),
        ds_m: final_state.von_neumann_entropy() - initial.von_neumann_entropy(),
        pre_feedback,
        final_state,
    }
}

/// Ensemble means and standard errors assembled in trajectory order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSummary {
    pub n_traj: usize,
    pub mean_q_m: f64,
    pub se_q_m: f64,
    pub mean_w_ext: f64,
    pub se_w_ext: f64,
    pub mean_ds_m: f64,
    pub se_ds_m: f64,
    /// Mean Bloch z right before feedback.
    pub mean_z_pre: f64,
    pub se_z_pre: f64,
    /// Mean of e^{-Q/2} over the ensemble.
    pub mean_exp_half_arrow: f64,
    pub se_exp_half_arrow: f64,
    /// Mean of e^{-Q} over the ensemble.
    pub mean_exp_arrow: f64,
    pub se_exp_arrow: f64,
    /// Mean of e^{-Q + ΔF} with ΔF = ln S_L(initial) - ln S_L(pre-feedback).
    pub fluctuation_mean: f64,
}

fn mean_se(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Summary statistics of an ordered record set.
pub fn summarize(params: &EngineParams, records: &[TrajectoryRecord]) -> EnsembleSummary {
    let n = records.len();
    let initial = thermal_state(params);
    let sl0 = initial.linear_entropy();
    let (mean_q_m, se_q_m) = mean_se(records.iter().map(|r| r.q_m), n);
    let (mean_w_ext, se_w_ext) = mean_se(records.iter().map(|r| r.w_ext), n);
    let (mean_ds_m, se_ds_m) = mean_se(records.iter().map(|r| r.ds_m), n);
    let (mean_z_pre, se_z_pre) = mean_se(records.iter().map(|r| r.pre_feedback.z), n);
    let (mean_exp_half_arrow, se_exp_half_arrow) =
        mean_se(records.iter().map(|r| (-r.arrow_q / 2.0).exp()), n);
    let (mean_exp_arrow, se_exp_arrow) = mean_se(records.iter().map(|r| (-r.arrow_q).exp()), n);
    // e^{-Q+dF} = e^{-Q} S_L(initial) / S_L(pre-feedback), identically 1 for
    // impure starts
    let fluctuation_mean = records
        .iter()
        .map(|r| (-r.arrow_q).exp() * sl0 / r.pre_feedback.linear_entropy())
        .sum::<f64>()
        / n as f64;

    EnsembleSummary {
        n_traj: n,
        mean_q_m,
        se_q_m,
        mean_w_ext,
        se_w_ext,
        mean_ds_m,
        se_ds_m,
        mean_z_pre,
        se_z_pre,
        mean_exp_half_arrow,
        se_exp_half_arrow,
        mean_exp_arrow,
        se_exp_arrow,
        fluctuation_mean,
    }
}

/// Run the whole ensemble on the current rayon pool. Records come back in
/// trajectory order and are bit-identical for a fixed master seed regardless
/// of worker count.
pub fn run_ensemble(
    params: &EngineParams,
    cparams: &ContinuousParams,
) -> (Vec<TrajectoryRecord>, EnsembleSummary) {
    let records: Vec<TrajectoryRecord> = (0..cparams.n_traj as u64)
        .into_par_iter()
        .map(|i| run_trajectory(params, cparams, i))
        .collect();
    let summary = summarize(params, &records);
    (records, summary)
}
