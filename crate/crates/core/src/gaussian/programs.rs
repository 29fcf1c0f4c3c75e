use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    run_program, ComplexGaussian, ElementaryExponential, EvolutionProgram, ExponentialKind, GaussianError,
    PhysicalParameters,
};

/// Minimum distance (in the tangent's argument) kept from a factorization pole.
pub const POLE_GUARD: f64 = 1e-6;

fn op(kind: ExponentialKind, c: Complex64) -> ElementaryExponential {
    ElementaryExponential::new(kind, c)
}

fn i(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

/// `e^{-iF²t³/6mħ} e^{(itF/ħ)x} e^{(iħt/2m)∂²} e^{-(Ft²/2m)∂}`.
pub fn program_constant_force(p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
    p.validate()?;
    let PhysicalParameters { m, force: f, hbar, t, .. } = *p;
    Ok(EvolutionProgram {
        log_phase: i(-f * f * t * t * t / (6.0 * m * hbar)),
        factors: vec![
            op(ExponentialKind::MultiplyX1, i(t * f / hbar)),
            op(ExponentialKind::Diffuse, i(hbar * t / (2.0 * m))),
            op(ExponentialKind::Shift, Complex64::new(-f * t * t / (2.0 * m), 0.0)),
        ],
    })
}

/// `e^{iF²t³/3mħ} e^{(iħt/2m)∂²} e^{(itF/ħ)x} e^{(Ft²/2m)∂}`.
pub fn program_constant_force_alt(p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
    p.validate()?;
    let PhysicalParameters { m, force: f, hbar, t, .. } = *p;
    Ok(EvolutionProgram {
        log_phase: i(f * f * t * t * t / (3.0 * m * hbar)),
        factors: vec![
            op(ExponentialKind::Diffuse, i(hbar * t / (2.0 * m))),
            op(ExponentialKind::MultiplyX1, i(t * f / hbar)),
            op(ExponentialKind::Shift, Complex64::new(f * t * t / (2.0 * m), 0.0)),
        ],
    })
}

/// Errors if `arg` lies within the guard of an odd multiple of π/2; `to_t`
/// converts a pole in `arg` back to a time.
fn guard_tan(arg: f64, t: f64, to_t: impl Fn(f64) -> f64) -> Result<(), GaussianError> {
    let k = ((arg - PI / 2.0) / PI).round();
    let pole_arg = PI / 2.0 + k * PI;
    if (arg - pole_arg).abs() < POLE_GUARD {
        return Err(GaussianError::PoleGuard { t, pole: to_t(pole_arg), guard: POLE_GUARD });
    }
    Ok(())
}

/// `e^{μ∂²} e^{-δx²} e^{μ∂²}` with `μ = (iħ/2mω)tan(ωt/2)`, `δ = (imω/2ħ)sin(ωt)`.
pub fn program_harmonic_bab(p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
    p.validate_harmonic()?;
    let PhysicalParameters { m, omega: w, hbar, t, .. } = *p;
    guard_tan(w * t / 2.0, t, |a| 2.0 * a / w)?;
    let mu = i(hbar / (2.0 * m * w) * (w * t / 2.0).tan());
    let delta = i(m * w / (2.0 * hbar) * (w * t).sin());
    Ok(EvolutionProgram {
        log_phase: Complex64::new(0.0, 0.0),
        factors: vec![
            op(ExponentialKind::Diffuse, mu),
            op(ExponentialKind::MultiplyX2, -delta),
            op(ExponentialKind::Diffuse, mu),
        ],
    })
}

/// `e^{-αx²} e^{β∂²} e^{-αx²}` with `α = (imω/2ħ)tan(ωt/2)`, `β = (iħ/2mω)sin(ωt)`.
pub fn program_harmonic_aba(p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
    p.validate_harmonic()?;
    let PhysicalParameters { m, omega: w, hbar, t, .. } = *p;
    guard_tan(w * t / 2.0, t, |a| 2.0 * a / w)?;
    let alpha = i(m * w / (2.0 * hbar) * (w * t / 2.0).tan());
    let beta = i(hbar / (2.0 * m * w) * (w * t).sin());
    Ok(EvolutionProgram {
        log_phase: Complex64::new(0.0, 0.0),
        factors: vec![
            op(ExponentialKind::MultiplyX2, -alpha),
            op(ExponentialKind::Diffuse, beta),
            op(ExponentialKind::MultiplyX2, -alpha),
        ],
    })
}

/// `e^{c_h(x∂ + 1/2)} e^{c_f x²} e^{c_g ∂²}` with `c_h = −ln cos(ωt)`,
/// `c_f = −(imω/4ħ)sin(2ωt)`, `c_g = (iħ/2mω)tan(ωt)`.
pub fn program_harmonic_cab(p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
    p.validate_harmonic()?;
    let PhysicalParameters { m, omega: w, hbar, t, .. } = *p;
    guard_tan(w * t, t, |a| a / w)?;
    let c_h = -Complex64::new((w * t).cos(), 0.0).ln();
    let c_f = i(-m * w / (4.0 * hbar) * (2.0 * w * t).sin());
    let c_g = i(hbar / (2.0 * m * w) * (w * t).tan());
    Ok(EvolutionProgram {
        log_phase: Complex64::new(0.0, 0.0),
        factors: vec![
            op(ExponentialKind::Dilate, c_h),
            op(ExponentialKind::MultiplyX2, c_f),
            op(ExponentialKind::Diffuse, c_g),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarmonicOrdering {
    Bab,
    Aba,
    Cab,
}

impl HarmonicOrdering {
    pub fn program(self, p: &PhysicalParameters) -> Result<EvolutionProgram, GaussianError> {
        match self {
            HarmonicOrdering::Bab => program_harmonic_bab(p),
            HarmonicOrdering::Aba => program_harmonic_aba(p),
            HarmonicOrdering::Cab => program_harmonic_cab(p),
        }
    }
}

/// Harmonic evolution to `p.t` for any time, as `k` equal sub-steps with
/// `|ωτ| ≤ π/4`. Every sub-step stays on the principal sheet of all three
/// factorizations, so the global phase is the one continuous in `t` (for
/// example `ψ(2π/ω) = −ψ(0)`), unlike a single program whose square-root
/// branch flips across its poles.
pub fn evolve_harmonic(
    p: &PhysicalParameters,
    ordering: HarmonicOrdering,
    psi0: &ComplexGaussian,
) -> Result<ComplexGaussian, GaussianError> {
    p.validate_harmonic()?;
    let k = ((p.omega * p.t).abs() / (PI / 4.0)).ceil().max(1.0) as usize;
    let prog = ordering.program(&p.at(p.t / k as f64))?;
    let mut psi = *psi0;
    for _ in 0..k {
        psi = run_program(&prog, &psi)?;
    }
    Ok(psi)
}
