//! Bloch-vector algebra for a single qubit under x-axis weak measurement.
//!
//! A density matrix ρ = (I + xσx + yσy + zσz)/2 is stored as the real vector
//! (x, y, z). The excited level sits at z = +1, so the energy in units of the
//! level splitting is (1 + z)/2 and a thermal state lies on the negative
//! z-axis. Everything here is a pure function of its inputs.

use crate::{Error, Result};
use std::f64::consts::LN_2;

/// Slack allowed on the Bloch-length physicality check.
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// Qubit state as a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl QubitState {
    /// Validating constructor: the Bloch length may not exceed 1 (up to
    /// [`PHYSICALITY_TOL`] of slack on the squared length).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if !r2.is_finite() || r2 > 1.0 + PHYSICALITY_TOL {
            return Err(Error::InvalidParam {
                name: "bloch_vector",
                message: format!("length^2 = {r2} exceeds 1"),
            });
        }
        Ok(Self { x, y, z })
    }

    pub fn bloch_length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Density-matrix eigenvalues (1 ± r)/2, clamped into [0, 1].
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.bloch_length().min(1.0);
        ((1.0 + r) / 2.0, (1.0 - r) / 2.0)
    }

    /// Mean energy in units of the level splitting: (1 + z)/2.
    pub fn energy(&self) -> f64 {
        0.5 * (1.0 + self.z)
    }

    /// Von Neumann entropy in units of k_B.
    pub fn von_neumann_entropy(&self) -> f64 {
        entropy_of_length(self.bloch_length())
    }

    /// Linear entropy 2(1 - tr ρ²) = 1 - r², clamped at 0 for rounding.
    pub fn linear_entropy(&self) -> f64 {
        let r2 = self.x * self.x + self.y * self.y + self.z * self.z;
        (1.0 - r2).max(0.0)
    }
}

/// Von Neumann entropy of a state with Bloch length `r`, in k_B.
///
/// The x ln x → 0 limit is taken exactly at r = 1; r is clamped to [0, 1].
pub fn entropy_of_length(r: f64) -> f64 {
    let r = r.abs().min(1.0);
    let lp = (1.0 + r) / 2.0;
    let lm = (1.0 - r) / 2.0;
    let mut s = 0.0;
    if lp > 0.0 {
        s -= lp * lp.ln();
    }
    if lm > 0.0 {
        s -= lm * lm.ln();
    }
    s
}

/// Reservoir / demon parameters in dimensionless units.
///
/// `omega0` is the level splitting over k_B T, `t_demon` the demon temperature
/// over T. The initial thermal Bloch z-component is z0 = -tanh(omega0 / 2)
/// unless overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams {
    omega0: f64,
    t_demon: f64,
    z0_override: Option<f64>,
}

impl EngineParams {
    pub fn new(omega0: f64, t_demon: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::InvalidParam {
                name: "omega0",
                message: format!("must be finite and > 0, got {omega0}"),
            });
        }
        if !t_demon.is_finite() || t_demon < 0.0 {
            return Err(Error::InvalidParam {
                name: "t_demon",
                message: format!("must be finite and >= 0, got {t_demon}"),
            });
        }
        Ok(Self {
            omega0,
            t_demon,
            z0_override: None,
        })
    }

    /// Same as [`EngineParams::new`] but pins the initial Bloch z directly.
    /// The override must lie in (-1, 0].
    pub fn with_z0(omega0: f64, t_demon: f64, z0: f64) -> Result<Self> {
        let mut p = Self::new(omega0, t_demon)?;
        if !z0.is_finite() || z0 <= -1.0 || z0 > 0.0 {
            return Err(Error::InvalidParam {
                name: "z0",
                message: format!("must lie in (-1, 0], got {z0}"),
            });
        }
        p.z0_override = Some(z0);
        Ok(p)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn t_demon(&self) -> f64 {
        self.t_demon
    }

    pub fn z0_override(&self) -> Option<f64> {
        self.z0_override
    }

    /// Thermal occupation 1/(e^{omega0} - 1).
    pub fn nbar(&self) -> f64 {
        1.0 / self.omega0.exp_m1()
    }

    /// Initial Bloch z-component; the override wins when present.
    pub fn z0(&self) -> f64 {
        self.z0_override.unwrap_or(-(self.omega0 / 2.0).tanh())
    }

    /// Landauer erasure work k_B T_D ln 2 in units of the level splitting.
    pub fn erasure_work(&self) -> f64 {
        self.t_demon * LN_2 / self.omega0
    }

    /// Advisory notes for regimes the model treats as degenerate.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.t_demon >= 1.0 {
            w.push(format!(
                "t_demon = {} is not small compared to the reservoir temperature; \
                 the erasure-cost model assumes t_demon << 1",
                self.t_demon
            ));
        }
        w
    }
}

/// Thermal state (0, 0, z0) fixed by the engine parameters.
pub fn thermal_state(params: &EngineParams) -> QubitState {
    QubitState {
        x: 0.0,
        y: 0.0,
        z: params.z0(),
    }
}

/// Two-outcome discrete weak measurement of σx with strength κ ∈ (0, 1).
///
/// The outcome operators are A·I ± B·σx with A = (√κ + √(1-κ))/2 and
/// B = (√κ - √(1-κ))/2; they satisfy M₊² + M₋² = I, and κ → 0 or 1 is the
/// strong (projective) limit while κ = 1/2 yields no information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMeasurement {
    kappa: f64,
    coeff_sum: f64,
    coeff_diff: f64,
}

impl DiscreteMeasurement {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 0.0 || kappa >= 1.0 {
            return Err(Error::InvalidParam {
                name: "kappa",
                message: format!("must lie in the open interval (0, 1), got {kappa}"),
            });
        }
        Ok(Self {
            kappa,
            coeff_sum: 0.5 * (kappa.sqrt() + (1.0 - kappa).sqrt()),
            coeff_diff: 0.5 * (kappa.sqrt() - (1.0 - kappa).sqrt()),
        })
    }

    /// Construct from a characteristic rate and duration, κ = 1/2 - √(2γ'δt).
    pub fn from_rate(gamma_prime: f64, delta_t: f64) -> Result<Self> {
        if gamma_prime < 0.0 || delta_t < 0.0 {
            return Err(Error::InvalidParam {
                name: "gamma_prime/delta_t",
                message: "rate and duration must be non-negative".into(),
            });
        }
        // NaN inputs surface through the derived-kappa check
        Self::new(0.5 - (2.0 * gamma_prime * delta_t).sqrt())
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Identity coefficient A of the outcome operators.
    pub fn coeff_sum(&self) -> f64 {
        self.coeff_sum
    }

    /// σx coefficient B of the M₊ operator (M₋ carries -B).
    pub fn coeff_diff(&self) -> f64 {
        self.coeff_diff
    }
}

/// Measurement outcome label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(&self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

fn forward_prob(state: &QubitState, m: &DiscreteMeasurement, outcome: Outcome) -> f64 {
    // tr(M ρ M†) = 1/2 + s (κ - 1/2) x
    0.5 + outcome.sign() * (m.kappa - 0.5) * state.x
}

/// Apply one discrete measurement outcome: ρ → M ρ M† / P and return the
/// normalized state together with the forward probability P.
pub fn apply_discrete(
    state: QubitState,
    m: &DiscreteMeasurement,
    outcome: Outcome,
) -> Result<(QubitState, f64)> {
    let p = forward_prob(&state, m, outcome);
    if p <= 1e-300 {
        return Err(Error::ImpossibleOutcome { prob: p });
    }
    let root = (m.kappa * (1.0 - m.kappa)).sqrt();
    let post = QubitState {
        x: (0.5 * state.x + outcome.sign() * (m.kappa - 0.5)) / p,
        y: root * state.y / p,
        z: root * state.z / p,
    };
    Ok((post, p))
}

/// Probability that a follow-up measurement of the opposite outcome restores
/// the pre-measurement state: tr(M∓ M± ρ M±† M∓†) / P_f(±).
///
/// M∓M± = √(κ(1-κ)) I, so the numerator is κ(1-κ) for any normalized ρ.
pub fn backward_prob(state: QubitState, m: &DiscreteMeasurement, outcome: Outcome) -> Result<f64> {
    let p = forward_prob(&state, m, outcome);
    if p <= 1e-300 {
        return Err(Error::ImpossibleOutcome { prob: p });
    }
    Ok(m.kappa * (1.0 - m.kappa) / p)
}

/// Arrow of time statistic of one discrete measurement from a thermal state:
/// Q = -2 ln 2 - ln(κ(1-κ)), independent of the outcome, with
/// e^{-Q} = 4κ(1-κ).
pub fn arrow_discrete(m: &DiscreteMeasurement) -> f64 {
    -2.0 * LN_2 - (m.kappa * (1.0 - m.kappa)).ln()
}

/// Optimal feedback: rotate about the y-axis so the Bloch vector lies on the
/// negative z-axis. Returns the rotated state and the rotation angle.
///
/// Convention: θ = atan2(x, -z) with generator about +y, i.e. the unitary
/// exp(-iθσy/2); for x = 0, z > 0 this yields θ = π. The Bloch length and the
/// y-component are unchanged.
pub fn feedback_rotate(state: QubitState) -> (QubitState, f64) {
    let r_xz = state.x.hypot(state.z);
    if r_xz == 0.0 {
        return (state, 0.0);
    }
    let theta = state.x.atan2(-state.z);
    (
        QubitState {
            x: 0.0,
            y: state.y,
            z: -r_xz,
        },
        theta,
    )
}
