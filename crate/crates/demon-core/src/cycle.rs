//! Thermodynamics of one discrete measurement–feedback–erasure–reset cycle.
//!
//! For a thermal initial state every per-cycle quantity is a closed-form
//! function of the arrow statistic `Q` and the initial Bloch component `z0`:
//!
//! - post-measurement energy   E_M  = (1 + z0 e^{-Q/2}) / 2
//! - post-feedback energy      E_f  = (1 - |z_f|) / 2 with
//!   |z_f| = sqrt(1 + e^{-Q}(z0² - 1))
//! - extracted work            W_ext = E_M - E_f
//! - measurement heat          Q_M   = E_M - E0
//! - erasure work              W_er  = t_demon ln2 / omega0
//!
//! Energies are in units of the level splitting, entropies in k_B.

use crate::qubit::{entropy_of_length, DiscreteMeasurement, EngineParams};
use crate::{Error, Result};
use std::f64::consts::LN_2;

/// All thermodynamic outputs of a single cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport {
    /// Measurement strength.
    pub kappa: f64,
    /// Arrow of time statistic of the measurement.
    pub arrow_q: f64,
    /// Initial thermal energy.
    pub e0: f64,
    /// Energy right after the measurement.
    pub e_m: f64,
    /// Energy after the feedback rotation.
    pub e_f: f64,
    /// Measurement heat E_M - E0.
    pub q_m: f64,
    /// Extracted work E_M - E_f.
    pub w_ext: f64,
    /// Landauer erasure work.
    pub w_er: f64,
    /// Engine efficiency (W_ext - W_er) / E_M.
    pub eta: f64,
    /// Refrigerator coefficient of performance (E0 - E_f) / (Q_M + W_er).
    pub cop: f64,
    /// Entropy change of the measurement step.
    pub ds_m: f64,
    /// Entropy change of erasure, ln 2.
    pub ds_er: f64,
    /// ds_m + ds_er.
    pub ds_total: f64,
    /// Heat drawn from the reservoir during the reset, E0 - E_f.
    pub q_th: f64,
}

/// Bloch length after measurement, |z_f| = sqrt(1 + e^{-Q}(z0² - 1)),
/// evaluated as sqrt(z0² + (1 - e^{-Q})(1 - z0²)) so Q = 0 returns |z0|
/// exactly and small Q loses no precision to cancellation.
pub fn post_measurement_length(arrow_q: f64, z0: f64) -> f64 {
    let z0_sq = z0 * z0;
    (z0_sq - (-arrow_q).exp_m1() * (1.0 - z0_sq)).sqrt()
}

/// Extracted work as a function of the arrow statistic,
/// W(Q) = (z0 e^{-Q/2} + |z_f|) / 2. Monotone increasing in Q for z0 < 0.
pub fn extractable_work(arrow_q: f64, z0: f64) -> f64 {
    0.5 * (z0 * (-arrow_q / 2.0).exp() + post_measurement_length(arrow_q, z0))
}

/// Measurement heat as a function of the arrow statistic,
/// Q_M(Q) = z0 (e^{-Q/2} - 1) / 2. Monotone increasing in Q for z0 < 0.
pub fn measurement_heat(arrow_q: f64, z0: f64) -> f64 {
    0.5 * z0 * (-arrow_q / 2.0).exp_m1()
}

/// Entropy change of the measurement step, S(|z_f|) - S(|z0|).
/// Strictly decreasing in Q, bounded above by Q/2.
pub fn entropy_change_of_arrow(arrow_q: f64, z0: f64) -> f64 {
    entropy_of_length(post_measurement_length(arrow_q, z0)) - entropy_of_length(z0.abs())
}

/// dW/dQ of [`extractable_work`]; strictly positive for z0 < 0.
pub fn work_slope(arrow_q: f64, z0: f64) -> f64 {
    let w = (-arrow_q).exp();
    let radius = post_measurement_length(arrow_q, z0);
    0.25 * (-z0 * (-arrow_q / 2.0).exp() + w * (1.0 - z0 * z0) / radius)
}

/// dQ_M/dQ of [`measurement_heat`]; strictly positive for z0 < 0.
pub fn heat_slope(arrow_q: f64, z0: f64) -> f64 {
    -0.25 * z0 * (-arrow_q / 2.0).exp()
}

/// d(ΔS)/dQ of [`entropy_change_of_arrow`]; strictly negative.
pub fn entropy_slope(arrow_q: f64, z0: f64) -> f64 {
    let w = (-arrow_q).exp();
    let radius = post_measurement_length(arrow_q, z0);
    -radius.atanh() * w * (1.0 - z0 * z0) / (2.0 * radius)
}

/// Invert W(Q): e^{-Q} = (2 W z0 + sqrt(1 + 4W²(z0² - 1)))².
pub fn arrow_from_work(w_ext: f64, z0: f64) -> f64 {
    let s = 2.0 * w_ext * z0 + (1.0 + 4.0 * w_ext * w_ext * (z0 * z0 - 1.0)).sqrt();
    -2.0 * s.ln()
}

/// Invert Q_M(Q): e^{-Q/2} = 2 Q_M / z0 + 1.
pub fn arrow_from_heat(q_m: f64, z0: f64) -> f64 {
    -2.0 * (2.0 * q_m / z0 + 1.0).ln()
}

/// Invert the outcome-independent arrow map on the κ ≤ 1/2 branch:
/// κ(1-κ) = e^{-Q}/4, so κ = e^{-Q} / (2 (1 + sqrt(1 - e^{-Q}))).
pub fn kappa_from_arrow(arrow_q: f64) -> Result<f64> {
    if arrow_q.is_nan() || arrow_q < 0.0 {
        return Err(Error::OutOfDomain {
            name: "arrow_q",
            message: format!("must be >= 0, got {arrow_q}"),
        });
    }
    let w = (-arrow_q).exp();
    Ok(w / (2.0 * (1.0 + (-(-arrow_q).exp_m1()).sqrt())))
}

/// Efficiency of a report's cycle, (W_ext - W_er) / E_M.
pub fn efficiency(report: &CycleReport) -> Result<f64> {
    efficiency_parts(report.e_m, report.w_ext, report.w_er)
}

/// Coefficient of performance of a report's cycle, (E0 - E_f) / (Q_M + W_er).
pub fn cop(report: &CycleReport) -> Result<f64> {
    cop_parts(report.e0, report.e_f, report.q_m, report.w_er)
}

fn efficiency_parts(e_m: f64, w_ext: f64, w_er: f64) -> Result<f64> {
    if e_m == 0.0 {
        return Err(Error::UndefinedEfficiency);
    }
    Ok((w_ext - w_er) / e_m)
}

fn cop_parts(e0: f64, e_f: f64, q_m: f64, w_er: f64) -> Result<f64> {
    let denom = q_m + w_er;
    if denom == 0.0 {
        return Err(Error::UndefinedCop);
    }
    Ok((e0 - e_f) / denom)
}

/// Run one full cycle at measurement strength κ.
///
/// |z_f| is assembled from the post-measurement Bloch components
/// (|2κ-1|, 2√(κ(1-κ)) z0) so that κ = 1/2 reproduces the initial length
/// exactly and the κ = 1/2 work and heat vanish identically.
pub fn run_cycle(params: &EngineParams, kappa: f64) -> Result<CycleReport> {
    let m = DiscreteMeasurement::new(kappa)?;
    let kappa = m.kappa();
    let z0 = params.z0();

    let arrow_q = crate::qubit::arrow_discrete(&m);
    let half_decay = 2.0 * (kappa * (1.0 - kappa)).sqrt(); // e^{-Q/2}
    let x_f = 2.0 * kappa - 1.0;
    let z_f_len = x_f.hypot(half_decay * z0);

    let e0 = 0.5 * (1.0 + z0);
    let e_m = 0.5 * (1.0 + z0 * half_decay);
    let e_f = 0.5 * (1.0 - z_f_len);
    let q_m = e_m - e0;
    let w_ext = e_m - e_f;
    let w_er = params.erasure_work();

    let eta = efficiency_parts(e_m, w_ext, w_er)?;
    let cop = cop_parts(e0, e_f, q_m, w_er)?;

    let ds_m = entropy_of_length(z_f_len) - entropy_of_length(z0.abs());

    Ok(CycleReport {
        kappa,
        arrow_q,
        e0,
        e_m,
        e_f,
        q_m,
        w_ext,
        w_er,
        eta,
        cop,
        ds_m,
        ds_er: LN_2,
        ds_total: ds_m + LN_2,
        q_th: e0 - e_f,
    })
}

/// Entropy budget of a cycle: (ΔS of measurement, ΔS of erasure, total).
pub fn entropy_change(params: &EngineParams, kappa: f64) -> Result<(f64, f64, f64)> {
    let m = DiscreteMeasurement::new(kappa)?;
    let z0 = params.z0();
    let half_decay = 2.0 * (m.kappa() * (1.0 - m.kappa())).sqrt();
    let z_f_len = (2.0 * m.kappa() - 1.0).hypot(half_decay * z0);
    let ds_m = entropy_of_length(z_f_len) - entropy_of_length(z0.abs());
    Ok((ds_m, LN_2, ds_m + LN_2))
}

/// Which variable a sweep grid enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Grid of measurement strengths κ.
    Kappa,
    /// Grid of arrow values Q, converted on the κ ≤ 1/2 branch.
    ArrowQ,
}

/// Evaluate one cycle per grid value, preserving grid order. Out-of-domain
/// points are reported as per-point errors, not aborts.
pub fn sweep(
    params: &EngineParams,
    values: &[f64],
    axis: SweepAxis,
) -> Result<Vec<(f64, Result<CycleReport>)>> {
    if values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(values
        .iter()
        .map(|&v| {
            let report = match axis {
                SweepAxis::Kappa => run_cycle(params, v),
                SweepAxis::ArrowQ => kappa_from_arrow(v).and_then(|k| run_cycle(params, k)),
            };
            (v, report)
        })
        .collect())
}
