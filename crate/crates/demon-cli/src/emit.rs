//! Deterministic CSV and JSON writers. Floats use the shortest round-trip
//! representation, so identical inputs produce byte-identical files.
//!
//! Column units follow the library convention: energies per level splitting
//! (`/hw0`), entropies in k_B.

use demon_core::cycle::CycleReport;
use demon_core::dist::{CurveVariable, DensityCurve};
use demon_core::stats::Histogram;
use demon_core::trajectory::{EnsembleSummary, TrajectoryRecord};
use serde::Serialize;
use std::io::{self, Write};
use std::path::Path;

pub const CYCLE_HEADER: &str = "kappa,Q,E0/hw0,E_M/hw0,E_f/hw0,Q_M/hw0,W_ext/hw0,W_er/hw0,eta,cop,dS_M/kB,dS_total/kB,Q_th/hw0";

pub const TRAJECTORY_HEADER: &str = "traj,Q,W_ext/hw0,Q_M/hw0,dS_M/kB,x_pre,z_pre,z_final";

fn report_row(r: &CycleReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.kappa,
        r.arrow_q,
        r.e0,
        r.e_m,
        r.e_f,
        r.q_m,
        r.w_ext,
        r.w_er,
        r.eta,
        r.cop,
        r.ds_m,
        r.ds_total,
        r.q_th
    )
}

/// Cycle/sweep CSV: one row per grid point, out-of-domain points as comments.
pub fn cycle_csv(rows: &[(f64, demon_core::Result<CycleReport>)]) -> String {
    let mut out = String::from(CYCLE_HEADER);
    out.push('\n');
    for (value, row) in rows {
        match row {
            Ok(report) => {
                out.push_str(&report_row(report));
                out.push('\n');
            }
            Err(err) => {
                out.push_str(&format!("# skipped {value}: {err}\n"));
            }
        }
    }
    out
}

/// Per-trajectory CSV for an ensemble.
pub fn trajectories_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.traj_index,
            r.arrow_q,
            r.w_ext,
            r.q_m,
            r.ds_m,
            r.pre_feedback.x,
            r.pre_feedback.z,
            r.final_state.z
        ));
    }
    out
}

fn variable_column(variable: CurveVariable) -> &'static str {
    match variable {
        CurveVariable::ArrowQ => "Q",
        CurveVariable::WorkExtracted => "W_ext/hw0",
        CurveVariable::MeasurementHeat => "Q_M/hw0",
        CurveVariable::EntropyChange => "dS_M/kB",
    }
}

/// Density curve CSV: abscissa and density columns.
pub fn curve_csv(curve: &DensityCurve) -> String {
    let mut out = format!("{},pdf\n", variable_column(curve.variable));
    for (x, d) in curve.grid.iter().zip(&curve.density) {
        out.push_str(&format!("{x},{d}\n"));
    }
    out
}

/// Histogram CSV: bin bounds, raw count, and density.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,count,density\n");
    let density = hist.density();
    for (i, c) in hist.counts().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            hist.edges()[i],
            hist.edges()[i + 1],
            c,
            density[i]
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct MomentsJson {
    pub q_m: f64,
    pub w_ext: f64,
    pub ds_m: f64,
    pub z_pre: f64,
    pub exp_half_arrow: f64,
    pub exp_arrow: f64,
}

#[derive(Debug, Serialize)]
pub struct KsJson {
    #[serde(rename = "ks_Q")]
    pub ks_q: f64,
    #[serde(rename = "ks_W")]
    pub ks_w: f64,
    #[serde(rename = "ks_QM")]
    pub ks_qm: f64,
    #[serde(rename = "ks_dS")]
    pub ks_ds: f64,
}

#[derive(Debug, Serialize)]
pub struct ParamsJson {
    pub omega0: f64,
    pub t_demon: f64,
    pub z0: f64,
    pub dt_over_tau: f64,
    pub n_steps: usize,
    pub n_traj: usize,
    pub t_over_tau: f64,
}

/// Ensemble summary emitted next to the trajectory CSV.
#[derive(Debug, Serialize)]
pub struct SummaryJson {
    pub mode: String,
    pub master_seed: u64,
    pub params: ParamsJson,
    pub means: MomentsJson,
    pub std_errors: MomentsJson,
    pub fluctuation_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsJson>,
    pub config_echo: String,
}

impl SummaryJson {
    pub fn from_summary(
        mode: &str,
        master_seed: u64,
        params: ParamsJson,
        summary: &EnsembleSummary,
        ks: Option<KsJson>,
        config_echo: String,
    ) -> Self {
        SummaryJson {
            mode: mode.to_string(),
            master_seed,
            params,
            means: MomentsJson {
                q_m: summary.mean_q_m,
                w_ext: summary.mean_w_ext,
                ds_m: summary.mean_ds_m,
                z_pre: summary.mean_z_pre,
                exp_half_arrow: summary.mean_exp_half_arrow,
                exp_arrow: summary.mean_exp_arrow,
            },
            std_errors: MomentsJson {
                q_m: summary.se_q_m,
                w_ext: summary.se_w_ext,
                ds_m: summary.se_ds_m,
                z_pre: summary.se_z_pre,
                exp_half_arrow: summary.se_exp_half_arrow,
                exp_arrow: summary.se_exp_arrow,
            },
            fluctuation_mean: summary.fluctuation_mean,
            ks,
            config_echo,
        }
    }
}

/// Write with the path attached to any I/O failure message.
pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}
