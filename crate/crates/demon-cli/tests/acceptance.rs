//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line with the measured numbers (`--nocapture` shows them all).
//!
//! Criteria, tolerances, and expected values are pinned in code here; nothing
//! is deferred to later calibration.

use demon_cli::config::{echo, parse_config};
use demon_cli::run::execute;
use demon_core::cycle::{entropy_change_of_arrow, run_cycle};
use demon_core::dist::{arrow_moment, curve_ds, curve_q, curve_qm, curve_w};
use demon_core::qubit::{
    apply_discrete, arrow_discrete, thermal_state, DiscreteMeasurement, EngineParams, Outcome,
};
use demon_core::stats::ks_from_samples;
use demon_core::trajectory::{run_ensemble, ContinuousParams};
use std::time::Instant;

/// Real symmetric 2x2 matrices: enough to express the x-measurement operators
/// and thermal density matrices literally.
#[derive(Clone, Copy)]
struct M2([[f64; 2]; 2]);

impl M2 {
    fn identity() -> Self {
        M2([[1.0, 0.0], [0.0, 1.0]])
    }
    fn scale(self, s: f64) -> Self {
        M2([
            [self.0[0][0] * s, self.0[0][1] * s],
            [self.0[1][0] * s, self.0[1][1] * s],
        ])
    }
    fn add(self, o: M2) -> Self {
        M2([
            [self.0[0][0] + o.0[0][0], self.0[0][1] + o.0[0][1]],
            [self.0[1][0] + o.0[1][0], self.0[1][1] + o.0[1][1]],
        ])
    }
    fn sub(self, o: M2) -> Self {
        self.add(o.scale(-1.0))
    }
    fn mul(self, o: M2) -> Self {
        let a = self.0;
        let b = o.0;
        M2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
    fn trace(self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }
    fn max_abs(self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }
    fn transpose(self) -> Self {
        M2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }
}

fn sigma_x() -> M2 {
    M2([[0.0, 1.0], [1.0, 0.0]])
}

fn outcome_op(kappa: f64, sign: f64) -> M2 {
    let a = 0.5 * (kappa.sqrt() + (1.0 - kappa).sqrt());
    let b = 0.5 * (kappa.sqrt() - (1.0 - kappa).sqrt());
    M2::identity().scale(a).add(sigma_x().scale(sign * b))
}

fn thermal_rho(z0: f64) -> M2 {
    M2([[0.5 * (1.0 + z0), 0.0], [0.0, 0.5 * (1.0 - z0)]])
}

struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64).clamp(1e-9, 1.0 - 1e-9)
    }
}

#[test]
fn acceptance_01_povm_and_reversal_algebra() {
    let start = Instant::now();
    let mut rng = Lcg(1);
    let mut worst_povm = 0.0f64;
    let mut worst_rev = 0.0f64;
    for _ in 0..1000 {
        let kappa = rng.next_f64();
        let mp = outcome_op(kappa, 1.0);
        let mm = outcome_op(kappa, -1.0);
        let povm = mp.mul(mp).add(mm.mul(mm)).sub(M2::identity()).max_abs();
        let rev = mm
            .mul(mp)
            .sub(M2::identity().scale((kappa * (1.0 - kappa)).sqrt()))
            .max_abs();
        worst_povm = worst_povm.max(povm);
        worst_rev = worst_rev.max(rev);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_povm < 1e-12 && worst_rev < 1e-12 && elapsed < 1.0;
    println!(
        "ACCEPTANCE 1 [{}] POVM completeness {worst_povm:.3e}, reversal product {worst_rev:.3e} (tol 1e-12), {elapsed:.3}s",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn acceptance_02_arrow_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = Lcg(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let kappa = rng.next_f64();
        let z0 = -rng.next_f64();
        let m = DiscreteMeasurement::new(kappa).unwrap();
        let closed = arrow_discrete(&m);
        let rho = thermal_rho(z0);
        for sign in [1.0, -1.0] {
            let fwd = outcome_op(kappa, sign);
            let pf = fwd.mul(rho).mul(fwd.transpose()).trace();
            let rev = outcome_op(kappa, -sign).mul(fwd);
            let pb = rev.mul(rho).mul(rev.transpose()).trace() / pf;
            worst = worst.max((closed - (pf / pb).ln()).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst < 1e-10 && elapsed < 1.0;
    println!(
        "ACCEPTANCE 2 [{}] closed-form arrow vs matrix-product log-ratio, max |diff| {worst:.3e} (tol 1e-10), {elapsed:.3}s",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn acceptance_03_strong_limit_efficiency() {
    let params = EngineParams::new(0.1, 0.001).unwrap();
    let strong = run_cycle(&params, 1e-9).unwrap();
    let eta_dev = (strong.eta - 0.986137).abs();

    let inert = run_cycle(&params, 0.5).unwrap();
    let pass = eta_dev < 1e-6 && inert.eta < 0.0 && inert.cop == 0.0;
    println!(
        "ACCEPTANCE 3 [{}] eta(kappa=1e-9) = {:.9} vs 0.986137 (|diff| {eta_dev:.2e} < 1e-6); kappa=1/2: eta = {:.6} < 0, cop = {}",
        if pass { "PASS" } else { "FAIL" },
        strong.eta,
        inert.eta,
        inert.cop
    );
    assert!(pass);
}

#[test]
fn acceptance_04_per_realization_fluctuation_identity() {
    // discrete cycles across strengths and initial states
    let mut worst_discrete = 0.0f64;
    let mut fluct_sum = 0.0;
    let mut count = 0usize;
    for &z0 in &[-0.05, -0.1, -0.5, -0.9] {
        let params = EngineParams::with_z0(0.1, 0.001, z0).unwrap();
        let initial = thermal_state(&params);
        for i in 1..1000 {
            let kappa = i as f64 / 1000.0;
            let m = DiscreteMeasurement::new(kappa).unwrap();
            let q = arrow_discrete(&m);
            for outcome in [Outcome::Plus, Outcome::Minus] {
                let (post, _) = apply_discrete(initial, &m, outcome).unwrap();
                let lhs = post.linear_entropy();
                let rhs = (-q).exp() * initial.linear_entropy();
                worst_discrete = worst_discrete.max((lhs - rhs).abs());
                // e^{-Q+dF} with dF = ln S_L(initial) - ln S_L(post)
                fluct_sum += (-q).exp() * initial.linear_entropy() / post.linear_entropy();
                count += 1;
            }
        }
    }
    let fluct_discrete = fluct_sum / count as f64;

    // continuous trajectories at the ensemble operating point
    let params = EngineParams::with_z0(1.0, 0.001, -0.1).unwrap();
    let cparams = ContinuousParams::new(0.01, 15, 20_000, 42).unwrap();
    let (records, summary) = run_ensemble(&params, &cparams);
    let sl0 = thermal_state(&params).linear_entropy();
    let mut worst_continuous = 0.0f64;
    for rec in &records {
        let lhs = rec.pre_feedback.linear_entropy();
        let rhs = (-rec.arrow_q).exp() * sl0;
        worst_continuous = worst_continuous.max((lhs - rhs).abs());
    }

    let pass = worst_discrete < 1e-10
        && worst_continuous < 1e-10
        && (fluct_discrete - 1.0).abs() < 1e-10
        && (summary.fluctuation_mean - 1.0).abs() < 1e-10;
    println!(
        "ACCEPTANCE 4 [{}] S_L identity: discrete {worst_discrete:.3e}, continuous {worst_continuous:.3e} (tol 1e-10); <e^(-Q+dF)> = {:.12} / {:.12}",
        if pass { "PASS" } else { "FAIL" },
        fluct_discrete,
        summary.fluctuation_mean
    );
    assert!(pass);
}

#[test]
fn acceptance_05_arrow_density_normalization_and_moments() {
    let start = Instant::now();
    let mut worst_norm = 0.0f64;
    let mut worst_moment = 0.0f64;
    for &t in &[0.05, 0.15, 1.0] {
        worst_norm = worst_norm.max((arrow_moment(t, |_| 1.0).unwrap() - 1.0).abs());
        let m = arrow_moment(t, |q| (-q / 2.0).exp()).unwrap();
        worst_moment = worst_moment.max((m - (-t / 2.0).exp()).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_norm < 1e-6 && worst_moment < 1e-6 && elapsed < 1.0;
    println!(
        "ACCEPTANCE 5 [{}] normalization |diff| {worst_norm:.3e}, <e^(-Q/2)> |diff| {worst_moment:.3e} (tol 1e-6), {elapsed:.3}s",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn acceptance_06_ensemble_distributions_desk_scale() {
    let start = Instant::now();
    let params = EngineParams::with_z0(1.0, 0.001, -0.1).unwrap();
    let cparams = ContinuousParams::new(0.01, 15, 20_000, 42).unwrap();
    let (records, summary) = run_ensemble(&params, &cparams);
    let t = cparams.total_duration();

    let q: Vec<f64> = records.iter().map(|r| r.arrow_q).collect();
    let w: Vec<f64> = records.iter().map(|r| r.w_ext).collect();
    let qm: Vec<f64> = records.iter().map(|r| r.q_m).collect();
    let ds: Vec<f64> = records.iter().map(|r| r.ds_m).collect();

    let ks_q = ks_from_samples(&q, &curve_q(&params, t, 512).unwrap()).unwrap();
    let ks_w = ks_from_samples(&w, &curve_w(&params, t, 512).unwrap()).unwrap();
    let ks_qm = ks_from_samples(&qm, &curve_qm(&params, t, 512).unwrap()).unwrap();
    let ks_ds = ks_from_samples(&ds, &curve_ds(&params, t, 512).unwrap()).unwrap();

    let heat_expected = 0.0036128256835723555; // |z0|/2 (1 - e^{-T/2tau})
    let heat_dev = (summary.mean_q_m - heat_expected).abs();
    let signs_ok = records.iter().all(|r| r.w_ext >= 0.0 && r.ds_m <= 1e-12);
    let elapsed = start.elapsed().as_secs_f64();

    let pass = ks_q < 0.03
        && ks_w < 0.03
        && ks_qm < 0.03
        && ks_ds < 0.03
        && heat_dev < 3.0 * summary.se_q_m
        && signs_ok
        && elapsed < 60.0;
    println!(
        "ACCEPTANCE 6 [{}] KS(Q)={ks_q:.4} KS(W)={ks_w:.4} KS(Q_M)={ks_qm:.4} KS(dS)={ks_ds:.4} (tol 0.03); <Q_M>={:.7} vs {heat_expected:.7} ({:.2} se); signs {}; {elapsed:.2}s",
        if pass { "PASS" } else { "FAIL" },
        summary.mean_q_m,
        heat_dev / summary.se_q_m,
        if signs_ok { "ok" } else { "violated" }
    );
    assert!(pass);
}

#[test]
fn acceptance_07_dephasing_mean() {
    let params = EngineParams::with_z0(1.0, 0.001, -0.1).unwrap();
    let cparams = ContinuousParams::new(0.01, 15, 20_000, 42).unwrap();
    let (_, summary) = run_ensemble(&params, &cparams);
    let expected = -0.1 * (-0.075f64).exp();
    let dev = (summary.mean_z_pre - expected).abs();
    let pass = dev < 3.0 * summary.se_z_pre;
    println!(
        "ACCEPTANCE 7 [{}] <z_pre> = {:.6} vs {expected:.6} ({:.2} se, tol 3)",
        if pass { "PASS" } else { "FAIL" },
        summary.mean_z_pre,
        dev / summary.se_z_pre
    );
    assert!(pass);
}

#[test]
fn acceptance_08_byte_identical_output_across_workers() {
    let text = "mode=simulate\nomega0=1.0\nz0=-0.1\ndt_over_tau=0.01\nn_steps=15\nn_traj=2000\nmaster_seed=42\n";
    let config = parse_config(text).unwrap();
    // echo round-trip is part of the serialization contract
    assert_eq!(parse_config(&echo(&config)).unwrap(), config);

    let dir_one = tempfile::tempdir().unwrap();
    let dir_many = tempfile::tempdir().unwrap();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap();
    one.install(|| execute(&config, dir_one.path()).unwrap());
    many.install(|| execute(&config, dir_many.path()).unwrap());

    let mut identical = true;
    for name in ["trajectories.csv", "summary.json"] {
        let a = std::fs::read(dir_one.path().join(name)).unwrap();
        let b = std::fs::read(dir_many.path().join(name)).unwrap();
        identical &= a == b;
    }
    println!(
        "ACCEPTANCE 8 [{}] 1-worker and 8-worker outputs byte-identical",
        if identical { "PASS" } else { "FAIL" }
    );
    assert!(identical);
}

#[test]
fn acceptance_09_entropy_bound_and_monotonicity() {
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    for &z0 in &[-0.05, -0.1, -0.5] {
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let q = 0.01 + (10.0 - 0.01) * i as f64 / 999.0;
            let ds = entropy_change_of_arrow(q, z0);
            pass &= ds <= q / 2.0;
            pass &= ds < prev;
            worst_margin = worst_margin.min(q / 2.0 - ds);
            prev = ds;
        }
    }
    println!(
        "ACCEPTANCE 9 [{}] dS_M(Q) <= Q/2 and strictly decreasing on 1000-point grids, min margin {worst_margin:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}
