//! Closed-form wave functions for the constant-force and harmonic problems,
//! written directly as Gaussian coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexGaussian, GaussianError, PhysicalParameters};

/// Which normalization prefactor to use in the closed forms.
///
/// `AsPrinted` reproduces the published expressions: the constant-force
/// result carries `(1 + iħt/2mσ²)^{-1}` and the harmonic result
/// `(σ√π)^{-1/2}`. `Unitary` uses `(1 + iħt/2mσ²)^{-1/2}` and `(σ√(2π))^{-1/2}`,
/// which is what keeps `∫|ψ|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Prefactor {
    AsPrinted,
    #[default]
    Unitary,
}

fn unit_log_prefactor(sigma: f64) -> f64 {
    -0.5 * (sigma * (2.0 * PI).sqrt()).ln()
}

pub fn constant_force_gaussian(p: &PhysicalParameters, prefactor: Prefactor) -> Result<ComplexGaussian, GaussianError> {
    p.validate()?;
    let PhysicalParameters { m, force: f, hbar, t, sigma, .. } = *p;
    let s = Complex64::new(sigma * sigma, hbar * t / (2.0 * m));
    let xc = f * t * t / (2.0 * m);
    let spread = Complex64::new(1.0, hbar * t / (2.0 * m * sigma * sigma)).ln();
    let power = match prefactor {
        Prefactor::AsPrinted => 1.0,
        Prefactor::Unitary => 0.5,
    };
    ComplexGaussian::new(
        -1.0 / (4.0 * s),
        Complex64::new(0.0, f * t / hbar) + xc / (2.0 * s),
        Complex64::new(unit_log_prefactor(sigma), -f * f * t * t * t / (6.0 * m * hbar))
            - xc * xc / (4.0 * s)
            - power * spread,
    )
}

pub fn closed_form_constant_force(
    p: &PhysicalParameters,
    x: f64,
    prefactor: Prefactor,
) -> Result<Complex64, GaussianError> {
    Ok(constant_force_gaussian(p, prefactor)?.evaluate(x))
}

fn harmonic_denominator(p: &PhysicalParameters) -> Complex64 {
    let PhysicalParameters { m, omega: w, hbar, t, sigma, .. } = *p;
    let a = 1.0 / (4.0 * sigma * sigma);
    Complex64::new((w * t).cos(), 2.0 * hbar / (m * w) * a * (w * t).sin())
}

pub fn harmonic_gaussian(p: &PhysicalParameters, prefactor: Prefactor) -> Result<ComplexGaussian, GaussianError> {
    p.validate_harmonic()?;
    let PhysicalParameters { m, omega: w, hbar, t, sigma, .. } = *p;
    let a = 1.0 / (4.0 * sigma * sigma);
    let den = harmonic_denominator(p);
    if den.norm() == 0.0 {
        return Err(GaussianError::SingularClosedForm);
    }
    let half_sin = (w * t / 2.0).sin();
    let num = Complex64::new(a - 2.0 * a * half_sin * half_sin, m * w / (2.0 * hbar) * (w * t).sin());
    let base = match prefactor {
        Prefactor::AsPrinted => -0.5 * (sigma * PI.sqrt()).ln(),
        Prefactor::Unitary => unit_log_prefactor(sigma),
    };
    ComplexGaussian::new(-num / den, Complex64::new(0.0, 0.0), base - 0.5 * den.ln())
}

pub fn closed_form_harmonic(p: &PhysicalParameters, x: f64, prefactor: Prefactor) -> Result<Complex64, GaussianError> {
    Ok(harmonic_gaussian(p, prefactor)?.evaluate(x))
}

/// The harmonic probability density in its real closed form.
pub fn harmonic_density_formula(p: &PhysicalParameters, x: f64, prefactor: Prefactor) -> Result<f64, GaussianError> {
    p.validate_harmonic()?;
    let PhysicalParameters { m, omega: w, hbar, t, sigma, .. } = *p;
    let a = 1.0 / (4.0 * sigma * sigma);
    let k = 2.0 * hbar / (m * w) * a;
    let q = (w * t).cos().powi(2) + k * k * (w * t).sin().powi(2);
    let norm_len = match prefactor {
        Prefactor::AsPrinted => sigma * PI.sqrt(),
        Prefactor::Unitary => sigma * (2.0 * PI).sqrt(),
    };
    Ok((-(2.0 * a / q) * x * x).exp() / (norm_len * q.sqrt()))
}
