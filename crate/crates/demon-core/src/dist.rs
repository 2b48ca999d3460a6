//! Analytic finite-time densities of the arrow statistic and the
//! thermodynamic variables derived from it.
//!
//! The arrow density for total duration 𝒯 (in units of the characteristic
//! measurement time) is
//!
//! ```text
//! P(Q) = sqrt(τ/2π𝒯) e^Q / sqrt(e^Q - 1)
//!        · exp(-𝒯/2τ - (τ/2𝒯) [arccosh(e^{Q/2})]²),   Q > 0.
//! ```
//!
//! Substituting u = arccosh(e^{Q/2}) turns the integrable Q → 0 singularity
//! into the smooth weight 2·sqrt(τ/2π𝒯) e^{-𝒯/2τ} e^{-τu²/2𝒯} cosh u, which
//! is what the quadrature and the default grids use. Work, heat, and entropy
//! densities follow by monotone changes of variables through the closed-form
//! maps in [`crate::cycle`]; each density is |dQ/d(variable)| · P(Q).

use crate::cycle::{
    arrow_from_work, entropy_change_of_arrow, entropy_slope, extractable_work, heat_slope,
    measurement_heat, work_slope,
};
use crate::qubit::{entropy_of_length, EngineParams};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Default number of grid points for emitted curves.
pub const DEFAULT_CURVE_POINTS: usize = 512;

/// Probability mass left out of each default grid tail.
const TAIL_MASS: f64 = 1e-4;

/// Simpson subdivisions for moments and quantiles.
const QUAD_INTERVALS: usize = 4096;

/// Which variable a density curve describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveVariable {
    ArrowQ,
    WorkExtracted,
    MeasurementHeat,
    EntropyChange,
}

impl CurveVariable {
    pub fn label(&self) -> &'static str {
        match self {
            CurveVariable::ArrowQ => "Q",
            CurveVariable::WorkExtracted => "W_ext",
            CurveVariable::MeasurementHeat => "Q_M",
            CurveVariable::EntropyChange => "dS_M",
        }
    }
}

/// A probability density tabulated on an ascending grid, with the parameter
/// snapshot it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub variable: CurveVariable,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub t_over_tau: f64,
    pub z0: f64,
    pub omega0: f64,
}

impl DensityCurve {
    /// Validating constructor: the grid must ascend strictly and the density
    /// values must be finite and non-negative.
    pub fn new(
        variable: CurveVariable,
        grid: Vec<f64>,
        density: Vec<f64>,
        t_over_tau: f64,
        z0: f64,
        omega0: f64,
    ) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(Error::InvalidParam {
                name: "curve",
                message: "grid and density need matching lengths >= 2".into(),
            });
        }
        if grid
            .windows(2)
            .any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan())
        {
            return Err(Error::InvalidParam {
                name: "curve",
                message: "grid must ascend strictly".into(),
            });
        }
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidParam {
                name: "curve",
                message: "density values must be finite and non-negative".into(),
            });
        }
        Ok(Self {
            variable,
            grid,
            density,
            t_over_tau,
            z0,
            omega0,
        })
    }

    /// Trapezoidal integral over the whole grid.
    pub fn trapezoid_integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (d[0] + d[1]) * (x[1] - x[0]))
            .sum()
    }

    /// Cumulative trapezoid at every grid node (starting from 0).
    pub fn cdf_nodes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.grid.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.grid.len() {
            acc +=
                0.5 * (self.density[i - 1] + self.density[i]) * (self.grid[i] - self.grid[i - 1]);
            out.push(acc);
        }
        out
    }
}

fn require_duration(t_over_tau: f64) -> Result<()> {
    if !t_over_tau.is_finite() || t_over_tau <= 0.0 {
        return Err(Error::InvalidParam {
            name: "t_over_tau",
            message: format!("must be finite and > 0, got {t_over_tau}"),
        });
    }
    Ok(())
}

fn require_impure_z0(z0: f64) -> Result<()> {
    if !z0.is_finite() || z0 <= -1.0 || z0 >= 0.0 {
        return Err(Error::InvalidParam {
            name: "z0",
            message: format!("derived densities need z0 strictly in (-1, 0), got {z0}"),
        });
    }
    Ok(())
}

/// arccosh(e^{q/2}), stable near q = 0.
fn acosh_exp_half(q: f64) -> f64 {
    let eps = (q / 2.0).exp_m1();
    (eps + (eps * (eps + 2.0)).sqrt()).ln_1p()
}

/// ln(e^q - 1) without overflow.
fn ln_exp_m1(q: f64) -> f64 {
    if q > 30.0 {
        q + (-(-q).exp()).ln_1p()
    } else {
        q.exp_m1().ln()
    }
}

/// Arrow density P(Q); errors on Q ≤ 0 where the density is undefined.
pub fn pdf_q(q: f64, t_over_tau: f64) -> Result<f64> {
    require_duration(t_over_tau)?;
    if q.is_nan() || q <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "arrow_q",
            message: format!("density defined for Q > 0, got {q}"),
        });
    }
    let t = t_over_tau;
    let u = acosh_exp_half(q);
    let ln_density =
        -0.5 * (2.0 * PI * t).ln() + q - 0.5 * ln_exp_m1(q) - t / 2.0 - u * u / (2.0 * t);
    Ok(ln_density.exp())
}

/// Work density from the monotone map W(Q); zero outside [0, 1/2), with an
/// integrable singularity (infinite value) at the included endpoint W = 0.
pub fn pdf_w(w_ext: f64, t_over_tau: f64, z0: f64) -> Result<f64> {
    require_duration(t_over_tau)?;
    require_impure_z0(z0)?;
    if !w_ext.is_finite() || !(0.0..0.5).contains(&w_ext) {
        return Ok(0.0);
    }
    if w_ext == 0.0 {
        return Ok(f64::INFINITY);
    }
    let q = arrow_from_work(w_ext, z0);
    Ok(pdf_q(q, t_over_tau)? / work_slope(q, z0))
}

/// Measurement-heat density from the monotone map Q_M(Q); zero outside
/// [0, -z0/2), infinite at the included endpoint Q_M = 0.
pub fn pdf_qm(q_m: f64, t_over_tau: f64, z0: f64) -> Result<f64> {
    require_duration(t_over_tau)?;
    require_impure_z0(z0)?;
    if !q_m.is_finite() || q_m < 0.0 || q_m >= -z0 / 2.0 {
        return Ok(0.0);
    }
    if q_m == 0.0 {
        return Ok(f64::INFINITY);
    }
    let q = crate::cycle::arrow_from_heat(q_m, z0);
    Ok(pdf_q(q, t_over_tau)? / heat_slope(q, z0))
}

/// Entropy-change density from the decreasing map ΔS(Q); zero outside
/// (-S(|z0|), 0], infinite at the included endpoint ΔS = 0. The inverse is
/// found by bracketed bisection to 1e-12 in Q.
pub fn pdf_ds(ds: f64, t_over_tau: f64, z0: f64) -> Result<f64> {
    require_duration(t_over_tau)?;
    require_impure_z0(z0)?;
    let floor = -entropy_of_length(z0.abs());
    if !ds.is_finite() || ds > 0.0 || ds <= floor {
        return Ok(0.0);
    }
    if ds == 0.0 {
        return Ok(f64::INFINITY);
    }
    let q = arrow_from_entropy_change(ds, z0);
    Ok(pdf_q(q, t_over_tau)? / entropy_slope(q, z0).abs())
}

/// Invert the strictly decreasing map ΔS(Q) by expanding bisection to 1e-12,
/// then polish with Newton so even roots far below 1e-12 keep full relative
/// precision. Caller guarantees ds ∈ (-S(|z0|), 0).
fn arrow_from_entropy_change(ds: f64, z0: f64) -> f64 {
    let mut hi = 1.0;
    while entropy_change_of_arrow(hi, z0) > ds {
        hi *= 2.0;
        if hi > 800.0 {
            break;
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if entropy_change_of_arrow(mid, z0) > ds {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let mut q = 0.5 * (lo + hi);
    for _ in 0..3 {
        let residual = entropy_change_of_arrow(q, z0) - ds;
        let next = q - residual / entropy_slope(q, z0);
        if next.is_finite() && next > 0.0 {
            q = next;
        }
    }
    q
}

/// Weight of the u-substituted arrow density,
/// w(u) = 2 sqrt(τ/2π𝒯) exp(-𝒯/2τ - τu²/2𝒯 + ln cosh u).
fn u_weight(u: f64, t: f64) -> f64 {
    2.0 / (2.0 * PI * t).sqrt()
        * (-t / 2.0 - u * u / (2.0 * t) + crate::trajectory::ln_cosh(u)).exp()
}

fn u_cutoff(t: f64) -> f64 {
    t + 16.0 * t.sqrt() + 1.0
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Expectation ⟨f(Q)⟩ under the arrow density, by Simpson quadrature in the
/// u = arccosh(e^{Q/2}) variable where the integrand is smooth.
pub fn arrow_moment<F: Fn(f64) -> f64>(t_over_tau: f64, f: F) -> Result<f64> {
    require_duration(t_over_tau)?;
    let t = t_over_tau;
    Ok(simpson(
        |u| u_weight(u, t) * f(2.0 * crate::trajectory::ln_cosh(u)),
        0.0,
        u_cutoff(t),
        QUAD_INTERVALS,
    ))
}

/// CDF of the arrow density by partial quadrature in u.
pub fn arrow_cdf(q: f64, t_over_tau: f64) -> Result<f64> {
    require_duration(t_over_tau)?;
    if q.is_nan() || q <= 0.0 {
        return Ok(0.0);
    }
    let u = acosh_exp_half(q).min(u_cutoff(t_over_tau));
    Ok(simpson(|v| u_weight(v, t_over_tau), 0.0, u, QUAD_INTERVALS).min(1.0))
}

/// u-value below which all but `upper_mass` of the distribution lies.
fn u_quantile(t: f64, upper_mass: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = u_cutoff(t);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let mass = simpson(|v| u_weight(v, t), 0.0, mid, 1024);
        if mass < 1.0 - upper_mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Default Q grid: quadratically graded in u so the trapezoid rule resolves
/// the 1/sqrt(Q) edge, spanning all but ~1e-4 of the mass at each end.
fn default_q_grid(t: f64, points: usize) -> Vec<f64> {
    let u_hi = u_quantile(t, TAIL_MASS);
    (1..=points)
        .map(|k| {
            let u = u_hi * (k as f64 / points as f64).powi(2);
            2.0 * crate::trajectory::ln_cosh(u)
        })
        .collect()
}

fn require_points(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidParam {
            name: "points",
            message: format!("curve needs at least 2 grid points, got {points}"),
        });
    }
    Ok(())
}

/// Arrow-density curve on the default graded grid.
pub fn curve_q(params: &EngineParams, t_over_tau: f64, points: usize) -> Result<DensityCurve> {
    require_duration(t_over_tau)?;
    require_points(points)?;
    let grid = default_q_grid(t_over_tau, points);
    let density = grid
        .iter()
        .map(|&q| pdf_q(q, t_over_tau))
        .collect::<Result<Vec<_>>>()?;
    DensityCurve::new(
        CurveVariable::ArrowQ,
        grid,
        density,
        t_over_tau,
        params.z0(),
        params.omega0(),
    )
}

/// Work-density curve: the image of the default Q grid under W(Q).
pub fn curve_w(params: &EngineParams, t_over_tau: f64, points: usize) -> Result<DensityCurve> {
    require_duration(t_over_tau)?;
    require_points(points)?;
    let z0 = params.z0();
    require_impure_z0(z0)?;
    let (grid, density) = map_q_grid(t_over_tau, points, |q| {
        (extractable_work(q, z0), work_slope(q, z0))
    })?;
    DensityCurve::new(
        CurveVariable::WorkExtracted,
        grid,
        density,
        t_over_tau,
        z0,
        params.omega0(),
    )
}

/// Measurement-heat density curve: the image of the default Q grid.
pub fn curve_qm(params: &EngineParams, t_over_tau: f64, points: usize) -> Result<DensityCurve> {
    require_duration(t_over_tau)?;
    require_points(points)?;
    let z0 = params.z0();
    require_impure_z0(z0)?;
    let (grid, density) = map_q_grid(t_over_tau, points, |q| {
        (measurement_heat(q, z0), heat_slope(q, z0))
    })?;
    DensityCurve::new(
        CurveVariable::MeasurementHeat,
        grid,
        density,
        t_over_tau,
        z0,
        params.omega0(),
    )
}

/// Entropy-change density curve; the decreasing map is traversed in reverse
/// so the emitted grid still ascends.
pub fn curve_ds(params: &EngineParams, t_over_tau: f64, points: usize) -> Result<DensityCurve> {
    require_duration(t_over_tau)?;
    require_points(points)?;
    let z0 = params.z0();
    require_impure_z0(z0)?;
    let q_grid = default_q_grid(t_over_tau, points);
    let mut pairs = q_grid
        .iter()
        .map(|&q| {
            let s = entropy_change_of_arrow(q, z0);
            pdf_q(q, t_over_tau).map(|p| (s, p / entropy_slope(q, z0).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    pairs.reverse();
    let (grid, density): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    DensityCurve::new(
        CurveVariable::EntropyChange,
        grid,
        density,
        t_over_tau,
        z0,
        params.omega0(),
    )
}

fn map_q_grid<F: Fn(f64) -> (f64, f64)>(
    t: f64,
    points: usize,
    map: F,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let q_grid = default_q_grid(t, points);
    let mut grid = Vec::with_capacity(points);
    let mut density = Vec::with_capacity(points);
    for q in q_grid {
        let (x, slope) = map(q);
        grid.push(x);
        density.push(pdf_q(q, t)? / slope);
    }
    Ok((grid, density))
}
