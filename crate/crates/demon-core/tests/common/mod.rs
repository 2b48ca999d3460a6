//! Dense 2x2 density-matrix arithmetic used as an independent oracle.
//!
//! Everything here works on explicit complex matrices; it never calls the
//! Bloch-vector routines it is used to check.

#![allow(dead_code)]

use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy)]
pub struct Mat2(pub [[C; 2]; 2]);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[c(1.0), c(0.0)], [c(0.0), c(1.0)]])
    }

    pub fn sigma_x() -> Self {
        Mat2([[c(0.0), c(1.0)], [c(1.0), c(0.0)]])
    }

    pub fn sigma_y() -> Self {
        Mat2([[c(0.0), C::new(0.0, -1.0)], [C::new(0.0, 1.0), c(0.0)]])
    }

    pub fn sigma_z() -> Self {
        Mat2([[c(1.0), c(0.0)], [c(0.0), c(-1.0)]])
    }

    pub fn scale(&self, s: C) -> Self {
        let mut out = *self;
        for row in &mut out.0 {
            for v in row {
                *v *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.0;
        let b = &other.0;
        let mut out = [[c(0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c(-1.0)))
    }

    /// ρ = (I + xσx + yσy + zσz)/2
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        Mat2::identity()
            .add(&Mat2::sigma_x().scale(c(x)))
            .add(&Mat2::sigma_y().scale(c(y)))
            .add(&Mat2::sigma_z().scale(c(z)))
            .scale(c(0.5))
    }

    pub fn bloch(&self) -> (f64, f64, f64) {
        (
            self.mul(&Mat2::sigma_x()).trace().re,
            self.mul(&Mat2::sigma_y()).trace().re,
            self.mul(&Mat2::sigma_z()).trace().re,
        )
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, descending.
    pub fn eigvals_hermitian(&self) -> (f64, f64) {
        let tr = self.trace().re;
        let det = (self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]).re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc, tr / 2.0 - disc)
    }
}

/// Discrete outcome operator A·I ± B·σx.
pub fn measurement_op(kappa: f64, sign: f64) -> Mat2 {
    let a = 0.5 * (kappa.sqrt() + (1.0 - kappa).sqrt());
    let b = 0.5 * (kappa.sqrt() - (1.0 - kappa).sqrt());
    Mat2::identity()
        .scale(c(a))
        .add(&Mat2::sigma_x().scale(c(sign * b)))
}

/// Continuous Kraus operator for readout r, Gaussian prefactor included:
/// (δt/2πτ)^{1/4} e^{-δt(r²+1)/4τ} exp((δt r / 2τ) σx).
pub fn continuous_op(r: f64, dt_over_tau: f64) -> Mat2 {
    let pref = (dt_over_tau / (2.0 * std::f64::consts::PI)).powf(0.25)
        * (-dt_over_tau * (r * r + 1.0) / 4.0).exp();
    let half_g = dt_over_tau * r / 2.0;
    // exp(hσx) = cosh(h) I + sinh(h) σx
    Mat2::identity()
        .scale(c(half_g.cosh()))
        .add(&Mat2::sigma_x().scale(c(half_g.sinh())))
        .scale(c(pref))
}

/// exp(-iθσy/2) = [[cos(θ/2), -sin(θ/2)], [sin(θ/2), cos(θ/2)]].
pub fn rotation_y(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2([[c(co), c(-s)], [c(s), c(co)]])
}

/// Apply an operator to a density matrix: returns (MρM†/tr, tr(MρM†)).
pub fn apply(op: &Mat2, rho: &Mat2) -> (Mat2, f64) {
    let num = op.mul(rho).mul(&op.adjoint());
    let p = num.trace().re;
    (num.scale(c(1.0 / p)), p)
}

/// Von Neumann entropy from the eigendecomposition of ρ.
pub fn vn_entropy(rho: &Mat2) -> f64 {
    let (l1, l2) = rho.eigvals_hermitian();
    let mut s = 0.0;
    for l in [l1, l2] {
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    s
}

/// Energy tr(Hρ) with H = (I + σz)/2, i.e. excited level at z = +1.
pub fn energy(rho: &Mat2) -> f64 {
    let h = Mat2::identity().add(&Mat2::sigma_z()).scale(c(0.5));
    h.mul(rho).trace().re
}

/// Deterministic xorshift stream for oracle-side parameter draws.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_f64(&mut self) -> f64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        (x.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in (lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64().clamp(1e-12, 1.0 - 1e-12)
    }

    /// A point strictly inside the Bloch ball.
    pub fn bloch_point(&mut self) -> (f64, f64, f64) {
        let x = self.uniform(-1.0, 1.0);
        let y = self.uniform(-1.0, 1.0);
        let z = self.uniform(-1.0, 1.0);
        let norm = (x * x + y * y + z * z).sqrt().max(1e-9);
        let radius = self.uniform(0.0, 0.98);
        (x / norm * radius, y / norm * radius, z / norm * radius)
    }
}
