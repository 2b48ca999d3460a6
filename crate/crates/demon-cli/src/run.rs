//! Mode dispatch: turn a validated config into files on disk.

use crate::config::{echo, Mode, RunConfig};
use crate::emit;
use demon_core::cycle::{sweep, SweepAxis};
use demon_core::dist::{curve_ds, curve_q, curve_qm, curve_w, DensityCurve};
use demon_core::qubit::EngineParams;
use demon_core::stats::{ks_from_samples, Histogram};
use demon_core::trajectory::{run_ensemble, ContinuousParams, TrajectoryRecord};
use std::fmt;
use std::path::{Path, PathBuf};

/// Failures after configuration: simulation domain errors or I/O.
#[derive(Debug)]
pub enum RuntimeError {
    Domain(demon_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuntimeError::Domain(e) => write!(f, "{e}"),
            RuntimeError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RuntimeError {}

impl From<demon_core::Error> for RuntimeError {
    fn from(e: demon_core::Error) -> Self {
        RuntimeError::Domain(e)
    }
}

impl From<std::io::Error> for RuntimeError {
    fn from(e: std::io::Error) -> Self {
        RuntimeError::Io(e)
    }
}

fn engine_params(
    config: &RunConfig,
    t_demon: f64,
    z0: Option<f64>,
) -> demon_core::Result<EngineParams> {
    match z0 {
        Some(z) => EngineParams::with_z0(config.omega0, t_demon, z),
        None => EngineParams::new(config.omega0, t_demon),
    }
}

fn single_params(config: &RunConfig) -> demon_core::Result<EngineParams> {
    engine_params(config, config.t_demon[0], config.z0.as_ref().map(|l| l[0]))
}

/// Execute a run, returning the list of files written under `out_dir`.
pub fn execute(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    std::fs::create_dir_all(out_dir)?;
    match config.mode {
        Mode::Discrete => run_discrete(config, out_dir),
        Mode::Sweep => run_sweep(config, out_dir),
        Mode::Simulate => run_simulate(config, out_dir),
        Mode::Pdf => run_pdf(config, out_dir),
        Mode::Compare => run_compare(config, out_dir),
    }
}

fn write(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), RuntimeError> {
    emit::write_file(&path, contents)?;
    written.push(path);
    Ok(())
}

fn run_discrete(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    let params = single_params(config)?;
    let kappa = config.kappa.expect("validated");
    let report = demon_core::cycle::run_cycle(&params, kappa)?;
    let mut written = Vec::new();
    write(
        out_dir.join("cycle.csv"),
        &emit::cycle_csv(&[(kappa, Ok(report))]),
        &mut written,
    )?;
    Ok(written)
}

fn run_sweep(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    let (axis, values) = match (&config.kappa_grid, &config.q_grid) {
        (Some(g), None) => (SweepAxis::Kappa, g.values()),
        (None, Some(g)) => (SweepAxis::ArrowQ, g.values()),
        _ => unreachable!("validated"),
    };
    let z0_choices: Vec<Option<f64>> = match &config.z0 {
        Some(list) => list.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let single = config.t_demon.len() == 1 && z0_choices.len() == 1;
    let mut written = Vec::new();
    for &t_demon in &config.t_demon {
        for &z0 in &z0_choices {
            let params = engine_params(config, t_demon, z0)?;
            let rows = sweep(&params, &values, axis)?;
            let name = if single {
                "sweep.csv".to_string()
            } else {
                let z0_label = z0.map_or("thermal".to_string(), |z| z.to_string());
                format!("sweep_td{t_demon}_z0{z0_label}.csv")
            };
            write(out_dir.join(name), &emit::cycle_csv(&rows), &mut written)?;
        }
    }
    Ok(written)
}

fn continuous_params(config: &RunConfig) -> demon_core::Result<ContinuousParams> {
    ContinuousParams::new(
        config.dt_over_tau.expect("validated"),
        config.n_steps.expect("validated"),
        config.n_traj.expect("validated"),
        config.master_seed,
    )
}

fn params_json(
    config: &RunConfig,
    params: &EngineParams,
    cparams: &ContinuousParams,
) -> emit::ParamsJson {
    emit::ParamsJson {
        omega0: config.omega0,
        t_demon: config.t_demon[0],
        z0: params.z0(),
        dt_over_tau: cparams.dt_over_tau(),
        n_steps: cparams.n_steps(),
        n_traj: cparams.n_traj(),
        t_over_tau: cparams.total_duration(),
    }
}

fn run_simulate(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    let params = single_params(config)?;
    let cparams = continuous_params(config)?;
    let (records, summary) = run_ensemble(&params, &cparams);
    let mut written = Vec::new();
    write(
        out_dir.join("trajectories.csv"),
        &emit::trajectories_csv(&records),
        &mut written,
    )?;
    let json = emit::SummaryJson::from_summary(
        config.mode.as_str(),
        config.master_seed,
        params_json(config, &params, &cparams),
        &summary,
        None,
        echo(config),
    );
    write(
        out_dir.join("summary.json"),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&json).expect("serializable")
        ),
        &mut written,
    )?;
    Ok(written)
}

fn build_curves(
    params: &EngineParams,
    t_over_tau: f64,
    points: usize,
) -> demon_core::Result<[DensityCurve; 4]> {
    Ok([
        curve_q(params, t_over_tau, points)?,
        curve_w(params, t_over_tau, points)?,
        curve_qm(params, t_over_tau, points)?,
        curve_ds(params, t_over_tau, points)?,
    ])
}

const CURVE_FILES: [&str; 4] = ["pdf_Q.csv", "pdf_W.csv", "pdf_QM.csv", "pdf_dS.csv"];

fn run_pdf(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    let params = single_params(config)?;
    let t_over_tau =
        config.dt_over_tau.expect("validated") * config.n_steps.expect("validated") as f64;
    let curves = build_curves(&params, t_over_tau, config.curve_points)?;
    let mut written = Vec::new();
    for (curve, name) in curves.iter().zip(CURVE_FILES) {
        write(out_dir.join(name), &emit::curve_csv(curve), &mut written)?;
    }
    Ok(written)
}

fn run_compare(config: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    let params = single_params(config)?;
    let cparams = continuous_params(config)?;
    let (records, summary) = run_ensemble(&params, &cparams);
    let curves = build_curves(&params, cparams.total_duration(), config.curve_points)?;

    let columns: [Vec<f64>; 4] = [
        records
            .iter()
            .map(|r: &TrajectoryRecord| r.arrow_q)
            .collect(),
        records.iter().map(|r| r.w_ext).collect(),
        records.iter().map(|r| r.q_m).collect(),
        records.iter().map(|r| r.ds_m).collect(),
    ];

    let mut written = Vec::new();
    write(
        out_dir.join("trajectories.csv"),
        &emit::trajectories_csv(&records),
        &mut written,
    )?;
    for (curve, name) in curves.iter().zip(CURVE_FILES) {
        write(out_dir.join(name), &emit::curve_csv(curve), &mut written)?;
    }
    let hist_names = ["hist_Q.csv", "hist_W.csv", "hist_QM.csv", "hist_dS.csv"];
    let mut ks = [0.0; 4];
    for i in 0..4 {
        let hist = Histogram::from_samples(&columns[i], config.bins)?;
        write(
            out_dir.join(hist_names[i]),
            &emit::histogram_csv(&hist),
            &mut written,
        )?;
        ks[i] = ks_from_samples(&columns[i], &curves[i])?;
    }

    let json = emit::SummaryJson::from_summary(
        config.mode.as_str(),
        config.master_seed,
        params_json(config, &params, &cparams),
        &summary,
        Some(emit::KsJson {
            ks_q: ks[0],
            ks_w: ks[1],
            ks_qm: ks[2],
            ks_ds: ks[3],
        }),
        echo(config),
    );
    write(
        out_dir.join("summary.json"),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&json).expect("serializable")
        ),
        &mut written,
    )?;
    Ok(written)
}
