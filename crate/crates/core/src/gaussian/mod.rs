//! Complex Gaussians `exp(A2·x² + A1·x + A0)` and the elementary exponential
//! operators that map them to Gaussians in closed form.

mod closed;
mod programs;
mod xd;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closed::{
    closed_form_constant_force, closed_form_harmonic, constant_force_gaussian, harmonic_density_formula,
    harmonic_gaussian, Prefactor,
};
pub use programs::{
    evolve_harmonic, program_constant_force, program_constant_force_alt, program_harmonic_aba, program_harmonic_bab,
    program_harmonic_cab, HarmonicOrdering, POLE_GUARD,
};
pub use xd::{xd_comparison, xd_polynomials, IntPolynomial, SignConvention, XdComparison, PAPER_XD_POLYNOMIALS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussianError {
    #[error("focal-point singularity: 1 - 4c*A2 vanishes")]
    FocalPoint,
    #[error("state is not normalizable (Re A2 = {0} >= 0)")]
    NonNormalizable(f64),
    #[error("factor {index}: {source}")]
    Factor { index: usize, source: Box<GaussianError> },
    #[error(
        "t = {t} is within {guard} of a factorization pole at t = {pole}; split the interval (see evolve_harmonic)"
    )]
    PoleGuard { t: f64, pole: f64, guard: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("closed form is singular at these parameters")]
    SingularClosedForm,
    #[error("n_max = {0} exceeds the supported maximum of 12")]
    TooManyPolynomials(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexGaussian {
    pub a2: Complex64,
    pub a1: Complex64,
    pub a0: Complex64,
}

impl ComplexGaussian {
    pub fn new(a2: Complex64, a1: Complex64, a0: Complex64) -> Result<Self, GaussianError> {
        if a2.re >= 0.0 || !a2.re.is_finite() {
            return Err(GaussianError::NonNormalizable(a2.re));
        }
        Ok(ComplexGaussian { a2, a1, a0 })
    }

    /// Unit-norm packet `(σ√(2π))^{-1/2} e^{-x²/4σ²}`.
    pub fn standard(sigma: f64) -> Self {
        ComplexGaussian {
            a2: Complex64::new(-1.0 / (4.0 * sigma * sigma), 0.0),
            a1: Complex64::new(0.0, 0.0),
            a0: Complex64::new(-0.5 * (sigma * (2.0 * PI).sqrt()).ln(), 0.0),
        }
    }

    /// Standard packet centred at `x0` with mean wavenumber `k0`.
    pub fn displaced(sigma: f64, x0: f64, k0: f64) -> Self {
        let s = Self::standard(sigma);
        let a2 = s.a2;
        ComplexGaussian { a2, a1: -2.0 * a2 * x0 + Complex64::new(0.0, k0), a0: s.a0 + a2 * x0 * x0 }
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        (self.a2 * x * x + self.a1 * x + self.a0).exp()
    }

    pub fn density(&self, x: f64) -> f64 {
        let e = self.a2.re * x * x + self.a1.re * x + self.a0.re;
        (2.0 * e).exp()
    }

    /// `∫|ψ|² dx`.
    pub fn norm(&self) -> Result<f64, GaussianError> {
        let (a, b, c) = (self.a2.re, self.a1.re, self.a0.re);
        if a >= 0.0 {
            return Err(GaussianError::NonNormalizable(a));
        }
        Ok((2.0 * c - b * b / (2.0 * a)).exp() * (PI / (-2.0 * a)).sqrt())
    }

    /// Mean position `⟨x⟩` of the density.
    pub fn center(&self) -> f64 {
        -self.a1.re / (2.0 * self.a2.re)
    }

    /// Largest difference in `A2`, `A1` and in `A0` with its imaginary part
    /// taken modulo 2π.
    pub fn distance(&self, other: &ComplexGaussian) -> CoefficientDistance {
        CoefficientDistance {
            a2: (self.a2 - other.a2).norm(),
            a1: (self.a1 - other.a1).norm(),
            a0: phase_distance(self.a0, other.a0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientDistance {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl CoefficientDistance {
    pub fn max(&self) -> f64 {
        self.a2.max(self.a1).max(self.a0)
    }
}

/// `|Δ log|` with the imaginary part reduced to (−π, π].
pub fn phase_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let im = d.im - 2.0 * PI * (d.im / (2.0 * PI)).round();
    d.re.abs().max(im.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentialKind {
    /// `exp(c·x²)`
    MultiplyX2,
    /// `exp(c·x)`
    MultiplyX1,
    /// `exp(c·d²/dx²)`
    Diffuse,
    /// `exp(c·d/dx)`, i.e. `ψ(x) → ψ(x + c)`
    Shift,
    /// `exp(c·(x·d/dx + 1/2))`, i.e. `ψ(x) → e^{c/2} ψ(e^c x)`
    Dilate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementaryExponential {
    pub kind: ExponentialKind,
    pub c: Complex64,
}

impl ElementaryExponential {
    pub fn new(kind: ExponentialKind, c: Complex64) -> Self {
        ElementaryExponential { kind, c }
    }
}

pub fn apply(op: &ElementaryExponential, psi: &ComplexGaussian) -> Result<ComplexGaussian, GaussianError> {
    let c = op.c;
    let ComplexGaussian { a2, a1, a0 } = *psi;
    let out = match op.kind {
        ExponentialKind::MultiplyX2 => ComplexGaussian { a2: a2 + c, a1, a0 },
        ExponentialKind::MultiplyX1 => ComplexGaussian { a2, a1: a1 + c, a0 },
        ExponentialKind::Shift => ComplexGaussian { a2, a1: a1 + 2.0 * a2 * c, a0: a0 + a1 * c + a2 * c * c },
        ExponentialKind::Diffuse => {
            let d = 1.0 - 4.0 * c * a2;
            if d.norm() == 0.0 {
                return Err(GaussianError::FocalPoint);
            }
            ComplexGaussian { a2: a2 / d, a1: a1 / d, a0: a0 + c * a1 * a1 / d - 0.5 * d.ln() }
        }
        ExponentialKind::Dilate => {
            let e = c.exp();
            ComplexGaussian { a2: a2 * e * e, a1: a1 * e, a0: a0 + c / 2.0 }
        }
    };
    if !(out.a2.re < 0.0) {
        return Err(GaussianError::NonNormalizable(out.a2.re));
    }
    Ok(out)
}

/// A global factor `e^{log_phase}` times an ordered operator product. Factors
/// are written left to right and act on the state rightmost first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionProgram {
    pub log_phase: Complex64,
    pub factors: Vec<ElementaryExponential>,
}

impl EvolutionProgram {
    pub fn identity() -> Self {
        EvolutionProgram { log_phase: Complex64::new(0.0, 0.0), factors: Vec::new() }
    }

    /// `self` after `first`: the product `self · first` as operators.
    pub fn then_after(&self, first: &EvolutionProgram) -> EvolutionProgram {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&first.factors);
        EvolutionProgram { log_phase: self.log_phase + first.log_phase, factors }
    }
}

pub fn run_program(prog: &EvolutionProgram, psi0: &ComplexGaussian) -> Result<ComplexGaussian, GaussianError> {
    let mut psi = *psi0;
    for (index, op) in prog.factors.iter().enumerate().rev() {
        psi = apply(op, &psi).map_err(|e| GaussianError::Factor { index, source: Box::new(e) })?;
    }
    psi.a0 += prog.log_phase;
    Ok(psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParameters {
    pub m: f64,
    pub omega: f64,
    pub force: f64,
    pub hbar: f64,
    pub t: f64,
    pub sigma: f64,
}

impl Default for PhysicalParameters {
    fn default() -> Self {
        PhysicalParameters { m: 1.0, omega: 1.0, force: 1.0, hbar: 1.0, t: 0.0, sigma: 1.0 }
    }
}

impl PhysicalParameters {
    pub fn at(&self, t: f64) -> Self {
        PhysicalParameters { t, ..*self }
    }

    /// Width whose harmonic-oscillator density is stationary: `σ² = ħ/2mω`.
    pub fn coherent_sigma(&self) -> f64 {
        (self.hbar / (2.0 * self.m * self.omega)).sqrt()
    }

    pub fn validate(&self) -> Result<(), GaussianError> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !pos(self.m) {
            return Err(GaussianError::InvalidParameter("m must be positive"));
        }
        if !pos(self.hbar) {
            return Err(GaussianError::InvalidParameter("hbar must be positive"));
        }
        if !pos(self.sigma) {
            return Err(GaussianError::InvalidParameter("sigma must be positive"));
        }
        if !self.t.is_finite() || !self.force.is_finite() || !self.omega.is_finite() {
            return Err(GaussianError::InvalidParameter("t, F and omega must be finite"));
        }
        Ok(())
    }

    pub(crate) fn validate_harmonic(&self) -> Result<(), GaussianError> {
        self.validate()?;
        if self.omega <= 0.0 {
            return Err(GaussianError::InvalidParameter("omega must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn standard_is_normalized() {
        for sigma in [0.3, 1.0, 2.5] {
            assert!((ComplexGaussian::standard(sigma).norm().unwrap() - 1.0).abs() < 1e-14);
        }
        let d = ComplexGaussian::displaced(0.7, 1.5, 2.0);
        assert!((d.norm().unwrap() - 1.0).abs() < 1e-14);
        assert!((d.center() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn norm_scaling() {
        let mut g = ComplexGaussian::standard(1.0);
        g.a0 += 2f64.ln();
        assert!((g.norm().unwrap() - 4.0).abs() < 1e-13);
        let mut h = ComplexGaussian::standard(1.0);
        h.a0 += c(0.0, 1.234);
        assert!((h.norm().unwrap() - 1.0).abs() < 1e-14);
        let bad = ComplexGaussian { a2: c(0.1, 0.0), ..h };
        assert!(matches!(bad.norm(), Err(GaussianError::NonNormalizable(_))));
    }

    #[test]
    fn diffuse_heat_kernel() {
        let (z, cc) = (0.8, 0.3);
        let g = ComplexGaussian { a2: c(-1.0 / (4.0 * z), 0.0), a1: c(0.0, 0.0), a0: c(0.0, 0.0) };
        let out = apply(&ElementaryExponential::new(ExponentialKind::Diffuse, c(cc, 0.0)), &g).unwrap();
        assert!((out.a2 - c(-1.0 / (4.0 * (z + cc)), 0.0)).norm() < 1e-15);
        assert!((out.a0 - c(-0.5 * ((z + cc) / z).ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diffuse_full_map() {
        let g = ComplexGaussian { a2: c(-0.5, 0.0), a1: c(1.0, 0.0), a0: c(0.0, 0.0) };
        let cc = c(0.0, 0.25);
        let out = apply(&ElementaryExponential::new(ExponentialKind::Diffuse, cc), &g).unwrap();
        let d = c(1.0, 0.5);
        assert!((out.a2 + 0.5 / d).norm() < 1e-15);
        assert!((out.a1 - 1.0 / d).norm() < 1e-15);
        assert!((out.a0 - (cc / d - 0.5 * d.ln())).norm() < 1e-15);
    }

    #[test]
    fn shift_completes_square() {
        let sigma = 1.3;
        let shift = 0.4;
        let mut g = ComplexGaussian::standard(sigma);
        g.a0 = c(0.0, 0.0);
        let out = apply(&ElementaryExponential::new(ExponentialKind::Shift, c(shift, 0.0)), &g).unwrap();
        assert!((out.a1 - c(-shift / (2.0 * sigma * sigma), 0.0)).norm() < 1e-15);
        assert!((out.a0 - c(-shift * shift / (4.0 * sigma * sigma), 0.0)).norm() < 1e-15);
        for x in [-1.0, 0.0, 2.0] {
            assert!((out.evaluate(x) - g.evaluate(x + shift)).norm() < 1e-15);
        }
    }

    #[test]
    fn dilate_is_unitary_for_real_coefficient() {
        let g = ComplexGaussian::displaced(0.9, 0.5, 1.0);
        let out = apply(&ElementaryExponential::new(ExponentialKind::Dilate, c(0.7, 0.0)), &g).unwrap();
        assert!((out.norm().unwrap() - 1.0).abs() < 1e-13);
        let x = 0.3;
        assert!((out.evaluate(x) - (0.35f64).exp() * g.evaluate(0.7f64.exp() * x)).norm() < 1e-14);
    }

    #[test]
    fn errors() {
        let g = ComplexGaussian { a2: c(-0.25, 0.0), a1: c(0.0, 0.0), a0: c(0.0, 0.0) };
        let focal = ElementaryExponential::new(ExponentialKind::Diffuse, c(-1.0, 0.0));
        assert_eq!(apply(&focal, &g), Err(GaussianError::FocalPoint));
        let flip = ElementaryExponential::new(ExponentialKind::MultiplyX2, c(0.5, 0.0));
        assert!(matches!(apply(&flip, &g), Err(GaussianError::NonNormalizable(_))));
        let prog = EvolutionProgram { log_phase: c(0.0, 0.0), factors: vec![flip, focal] };
        match run_program(&prog, &g) {
            Err(GaussianError::Factor { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_programs() {
        let g = ComplexGaussian::displaced(1.0, 0.2, -0.4);
        assert_eq!(run_program(&EvolutionProgram::identity(), &g).unwrap(), g);
        let k = c(0.1, 0.3);
        let pair = EvolutionProgram {
            log_phase: c(0.0, 0.0),
            factors: vec![
                ElementaryExponential::new(ExponentialKind::MultiplyX2, k),
                ElementaryExponential::new(ExponentialKind::MultiplyX2, -k),
            ],
        };
        assert!(run_program(&pair, &g).unwrap().distance(&g).max() < 1e-16);
    }

    #[test]
    fn phase_distance_wraps() {
        assert!(phase_distance(c(0.0, PI - 1e-12), c(0.0, -PI + 1e-12)) < 1e-11);
        assert!((phase_distance(c(0.0, 0.0), c(0.0, PI)) - PI).abs() < 1e-15);
    }
}
