//! Closed-form continuum counterparts: conformal frames on disks, the
//! hyperbolic metric element, and the continuous fermionic spinors.
//!
//! For a disk the Riemann map is a Möbius transformation, so everything the
//! convergence experiments compare against is available in closed form:
//! `f_Ω(a,z) = (1/2π) √ψ_a'(a) √ψ_a'(z) (ψ_a(z)+1)/ψ_a(z)` with
//! `ψ_a(a) = 0`, `ψ_a'(a) > 0`, the full-plane spinor `f_C = 1/(2π(z-a))`,
//! and `ℓ_Ω(a) = 2 ψ_a'(a)`.

use num_complex::Complex64;

use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Conformal frame `ψ_a : Ω → 𝔻` with `ψ_a(a) = 0`, `ψ_a'(a) > 0`, for a
/// disk domain (where the map is Möbius and exact).
#[derive(Debug, Clone, Copy)]
pub struct ConformalFrame {
    center: Complex64,
    radius: f64,
    a: Complex64,
    /// `b = (a - center)/radius`
    b: Complex64,
}

impl ConformalFrame {
    pub fn disk(center: Complex64, radius: f64, a: Complex64) -> Result<Self> {
        assert!(radius > 0.0);
        let b = (a - center) / radius;
        if b.norm() >= 1.0 {
            return Err(Error::PointOutsideDomain(format!("{a}")));
        }
        Ok(ConformalFrame {
            center,
            radius,
            a,
            b,
        })
    }

    pub fn unit_disk(a: Complex64) -> Result<Self> {
        Self::disk(Complex64::new(0.0, 0.0), 1.0, a)
    }

    pub fn source(&self) -> Complex64 {
        self.a
    }

    /// `ψ_a(z)`
    pub fn map(&self, z: Complex64) -> Complex64 {
        let w = (z - self.center) / self.radius;
        (w - self.b) / (Complex64::new(1.0, 0.0) - self.b.conj() * w)
    }

    /// `ψ_a'(z)`
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let w = (z - self.center) / self.radius;
        let den = Complex64::new(1.0, 0.0) - self.b.conj() * w;
        Complex64::new(1.0 - self.b.norm_sqr(), 0.0) / (den * den) / self.radius
    }

    /// `ψ_a'(a)`, real and positive.
    pub fn derivative_at_source(&self) -> f64 {
        1.0 / (self.radius * (1.0 - self.b.norm_sqr()))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Boundary point and unit outward normal at angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> (Complex64, Complex64) {
        let nu = Complex64::from_polar(1.0, theta);
        (self.center + self.radius * nu, nu)
    }
}

/// Hyperbolic metric element `ℓ_Ω(a) = 2 ψ_a'(a)`.
pub fn hyperbolic_element(frame: &ConformalFrame) -> f64 {
    2.0 * frame.derivative_at_source()
}

/// `√ψ_a'(z)` continued from the principal (positive) branch at the source
/// along the straight segment from `a` to `z`, with a discontinuity check.
pub fn sqrt_derivative_tracked(frame: &ConformalFrame, z: Complex64) -> Result<Complex64> {
    let steps = 64;
    let mut current = Complex64::new(frame.derivative_at_source().sqrt(), 0.0);
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let p = frame.a + t * (z - frame.a);
        let root = frame.derivative(p).sqrt();
        let candidate = if (root - current).norm() <= (root + current).norm() {
            root
        } else {
            -root
        };
        if (candidate - current).norm() > 0.5 * current.norm().max(1e-12) {
            return Err(Error::BranchDiscontinuity(format!("{p}")));
        }
        current = candidate;
    }
    Ok(current)
}

/// Continuous fermionic spinor
/// `f_Ω(a,z) = (1/2π) √ψ_a'(a) √ψ_a'(z) (ψ_a(z)+1)/ψ_a(z)`.
pub fn continuous_spinor(frame: &ConformalFrame, z: Complex64) -> Result<Complex64> {
    assert!(z != frame.a, "z must differ from the source");
    if !frame.contains(z) {
        return Err(Error::PointOutsideDomain(format!("{z}")));
    }
    let psi = frame.map(z);
    let root_a = frame.derivative_at_source().sqrt();
    let root_z = sqrt_derivative_tracked(frame, z)?;
    Ok(root_a * root_z * (psi + 1.0) / psi / TWO_PI)
}

/// Full-plane continuous spinor `f_C(a,z) = 1/(2π(z-a))`.
pub fn full_plane_continuous(a: Complex64, z: Complex64) -> Complex64 {
    1.0 / (TWO_PI * (z - a))
}

/// `(f_Ω - f_C)(a, a) = ψ_a'(a)/(2π)`, the diagonal value entering the
/// energy-density limit: `2 · diagonal_difference = ℓ_Ω(a)/(2π)`.
pub fn diagonal_difference(frame: &ConformalFrame) -> f64 {
    frame.derivative_at_source() / TWO_PI
}

/// Max of `|Im(f_Ω(a,z) ν_out^{1/2}(z))|` over equally spaced boundary
/// samples.
pub fn boundary_condition_residual(frame: &ConformalFrame, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let theta = TWO_PI * (i as f64 + 0.5) / samples as f64;
        let (z, nu) = frame.boundary_point(theta);
        // Evaluate the closed form directly on the boundary circle (the
        // tracked square root extends continuously).
        let psi = frame.map(z);
        let root_a = frame.derivative_at_source().sqrt();
        let root_z = sqrt_derivative_tracked(frame, z)?;
        let f = root_a * root_z * (psi + 1.0) / psi / TWO_PI;
        worst = worst.max((f * nu.sqrt()).im.abs());
    }
    Ok(worst)
}

/// `Re ∫ f_Ω² dz` along the boundary arc from angle `theta0` to `theta1`
/// (trapezoid rule); vanishes because `F = -Re ∫ f²` is constant on `∂Ω`.
pub fn boundary_square_integral(
    frame: &ConformalFrame,
    theta0: f64,
    theta1: f64,
    samples: usize,
) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let h = (theta1 - theta0) / samples as f64;
    let mut prev: Option<Complex64> = None;
    for i in 0..=samples {
        let theta = theta0 + i as f64 * h;
        let (z, nu) = frame.boundary_point(theta);
        let psi = frame.map(z);
        let root_z = sqrt_derivative_tracked(frame, z)?;
        let f = frame.derivative_at_source().sqrt() * root_z * (psi + 1.0) / psi / TWO_PI;
        // dz = i R e^{iθ} dθ
        let integrand = f * f * Complex64::i() * frame.radius * nu;
        if let Some(p) = prev {
            acc += 0.5 * (p + integrand) * h;
        }
        prev = Some(integrand);
    }
    Ok(acc.re)
}
