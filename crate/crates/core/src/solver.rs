//! Coefficient-function ODE systems for each factorization, integrated with
//! classical RK4 and compared against their closed-form solutions.
//!
//! The systems come out of the differential-equation method in implicit form
//! (derivatives multiplied by each other). They are solved for the derivative
//! vector by hand below; [`implicit_residuals`] keeps the original implicit
//! form so the algebra can be checked.
//!
//! Explicit forms, with `'` = d/dξ:
//!
//! * Bch: `f2' = 1`, `f3' = 1`, `f1' = −f2` (from `δ f1' + δ f3' f2 = 0`).
//! * Case1: `f' = 1`, `g' = 1`, `h' = −f`, `r' = k·g·f`.
//! * Case2 (bab, and aba with `f1,f2,f3 ↔ f,g,h`): the third equation plus
//!   the first give `g·h' = f`, hence `h' = f/g`, `g' = 1 − γfg` and
//!   `f' = 1 − γf²g' − h'(1 − γfg)²`. At the origin `f/g → 1/2`.
//! * AppendixCab: `g' = e^{−2γh}`, `h' = −f·g'`, `f' = e^{2γh} − γf²g'`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::ScalarSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("xi_end must be finite and non-negative, got {0}")]
    BadEnd(f64),
    #[error("closed-form pole at xi = {pole:.6}; refusing to go to xi = {xi:.6} (guard {guard})")]
    PoleGuard { pole: f64, xi: f64, guard: f64 },
    #[error("singular algebraic solve at xi = {0}")]
    Singular(f64),
    #[error("non-finite value at xi = {0}")]
    NonFinite(f64),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    Bch,
    Case1,
    Case2Bab,
    Case2Aba,
    AppendixCab,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::Bch, CaseId::Case1, CaseId::Case2Bab, CaseId::Case2Aba, CaseId::AppendixCab];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Bch => "bch",
            CaseId::Case1 => "case1",
            CaseId::Case2Bab => "case2-bab",
            CaseId::Case2Aba => "case2-aba",
            CaseId::AppendixCab => "appendix-cab",
        }
    }

    pub fn component_names(self) -> &'static [&'static str] {
        match self {
            CaseId::Bch => &["f1", "f2", "f3"],
            CaseId::Case1 => &["f", "g", "h", "r"],
            CaseId::Case2Bab | CaseId::AppendixCab => &["f", "g", "h"],
            CaseId::Case2Aba => &["f1", "f2", "f3"],
        }
    }

    pub fn dim(self) -> usize {
        self.component_names().len()
    }
}

impl std::str::FromStr for CaseId {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| SolverError::UnknownCase(s.to_string()))
    }
}

/// Only the parameter relevant to the case is read.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseParameters {
    pub delta: f64,
    pub k: f64,
    pub gamma: f64,
}

impl Default for CaseParameters {
    fn default() -> Self {
        CaseParameters { delta: 1.0, k: 1.0, gamma: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientVector {
    pub case: CaseId,
    pub values: Vec<f64>,
}

impl CoefficientVector {
    pub fn zero(case: CaseId) -> Self {
        CoefficientVector { case, values: vec![0.0; case.dim()] }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.case.component_names().iter().position(|n| *n == name).map(|k| self.values[k])
    }

    pub fn named(&self) -> Vec<(&'static str, f64)> {
        self.case.component_names().iter().copied().zip(self.values.iter().copied()).collect()
    }

    fn axpy(&self, a: f64, other: &CoefficientVector) -> CoefficientVector {
        CoefficientVector {
            case: self.case,
            values: self.values.iter().zip(&other.values).map(|(y, d)| y + a * d).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeSolution {
    pub xi_grid: Vec<f64>,
    pub values: Vec<CoefficientVector>,
    pub step: f64,
    pub method: &'static str,
}

impl OdeSolution {
    pub fn last(&self) -> &CoefficientVector {
        self.values.last().expect("solution has at least the initial point")
    }
}

/// Distance from a pole that integration refuses to enter.
pub const POLE_GUARD: f64 = 1e-3;

/// First positive ξ where the closed form is singular, if any.
pub fn pole_location(case: CaseId, params: &CaseParameters) -> Option<f64> {
    let g = params.gamma;
    match case {
        CaseId::Case2Bab | CaseId::Case2Aba if g > 0.0 => Some(PI / g.sqrt()),
        CaseId::AppendixCab if g > 0.0 => Some(PI / (2.0 * g.sqrt())),
        _ => None,
    }
}

/// Derivative vector of the explicit system at `(ξ, y)`.
pub fn rhs(
    case: CaseId,
    params: &CaseParameters,
    xi: f64,
    y: &CoefficientVector,
) -> Result<CoefficientVector, SolverError> {
    let v = &y.values;
    let gamma = params.gamma;
    let out = match case {
        CaseId::Bch => vec![-v[1], 1.0, 1.0],
        CaseId::Case1 => vec![1.0, 1.0, -v[0], params.k * v[1] * v[0]],
        CaseId::Case2Bab | CaseId::Case2Aba => {
            let (f, g) = (v[0], v[1]);
            let dh = if g != 0.0 {
                f / g
            } else if f == 0.0 {
                0.5
            } else {
                return Err(SolverError::Singular(xi));
            };
            let one_m = 1.0 - gamma * f * g;
            let dg = one_m;
            let df = 1.0 - gamma * f * f * dg - dh * one_m * one_m;
            vec![df, dg, dh]
        }
        CaseId::AppendixCab => {
            let (f, h) = (v[0], v[2]);
            let dg = (-2.0 * gamma * h).exp();
            let dh = -f * dg;
            let df = (2.0 * gamma * h).exp() - gamma * f * f * dg;
            vec![df, dg, dh]
        }
    };
    if out.iter().any(|d| !d.is_finite()) {
        return Err(SolverError::NonFinite(xi));
    }
    Ok(CoefficientVector { case, values: out })
}

/// Residuals of the implicit system as derived from the commutator algebra.
pub fn implicit_residuals(case: CaseId, params: &CaseParameters, y: &[f64], dy: &[f64]) -> Vec<f64> {
    let (gamma, delta, k) = (params.gamma, params.delta, params.k);
    match case {
        CaseId::Bch => vec![dy[1] - 1.0, dy[2] - 1.0, delta * dy[0] + delta * dy[2] * y[1]],
        CaseId::Case1 => vec![dy[0] - 1.0, dy[1] - 1.0, dy[1] * y[0] + dy[2], k * y[1] * dy[2] + dy[3]],
        CaseId::Case2Bab | CaseId::Case2Aba => {
            let (f, g) = (y[0], y[1]);
            let (df, dg, dh) = (dy[0], dy[1], dy[2]);
            vec![
                dg + gamma * g * g * dh - 1.0,
                df + gamma * f * f * dg + dh - 2.0 * gamma * f * g * dh + gamma * gamma * f * f * g * g * dh - 1.0,
                g * dh - f * dg - gamma * g * g * f * dh,
            ]
        }
        CaseId::AppendixCab => {
            let (f, h) = (y[0], y[2]);
            let (df, dg, dh) = (dy[0], dy[1], dy[2]);
            vec![
                (-2.0 * gamma * h).exp() * (df + gamma * f * f * dg) - 1.0,
                (2.0 * gamma * h).exp() * dg - 1.0,
                f * dg + dh,
            ]
        }
    }
}

/// Third equation of the aba system exactly as printed in the source
/// derivation: `f1 f2' − f2 f3' − γ f1 f2² f3'`. It differs in sign from the
/// bab form and does not vanish on the closed-form solution.
pub fn printed_aba_third_residual(params: &CaseParameters, y: &[f64], dy: &[f64]) -> f64 {
    y[0] * dy[1] - y[1] * dy[2] - params.gamma * y[0] * y[1] * y[1] * dy[2]
}

fn ln1p_c(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        w - w * w / 2.0 + w * w * w / 3.0 - w * w * w * w / 4.0
    } else {
        (w + 1.0).ln()
    }
}

/// Closed forms evaluated at a complex argument. `√γ` is taken on the
/// principal branch, so `γ < 0` gives the hyperbolic continuation.
pub fn closed_form_at(case: CaseId, params: &CaseParameters, z: Complex64) -> Vec<Complex64> {
    let gamma = params.gamma;
    let s = Complex64::new(gamma, 0.0).sqrt();
    match case {
        CaseId::Bch => vec![-z * z / 2.0, z, z],
        CaseId::Case1 => vec![z, z, -z * z / 2.0, params.k * z * z * z / 3.0],
        CaseId::Case2Bab | CaseId::Case2Aba => {
            if gamma == 0.0 {
                return vec![z / 2.0, z, z / 2.0];
            }
            let outer = (z * s / 2.0).tan() / s;
            vec![outer, (z * s).sin() / s, outer]
        }
        CaseId::AppendixCab => {
            if gamma == 0.0 {
                return vec![z, z, -z * z / 2.0];
            }
            let u = z * s;
            let sin_u = u.sin();
            let h = ln1p_c(-sin_u * sin_u) / (2.0 * gamma);
            vec![(u * 2.0).sin() / (s * 2.0), u.tan() / s, h]
        }
    }
}

pub fn closed_form(case: CaseId, params: &CaseParameters, xi: f64) -> Result<CoefficientVector, SolverError> {
    if let Some(pole) = pole_location(case, params) {
        if xi.abs() >= pole {
            return Err(SolverError::PoleGuard { pole, xi, guard: 0.0 });
        }
    }
    let values: Vec<f64> = closed_form_at(case, params, Complex64::new(xi, 0.0)).iter().map(|c| c.re).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::NonFinite(xi));
    }
    Ok(CoefficientVector { case, values })
}

/// Taylor polynomials of the closed forms, used for the first step where
/// the explicit Case2 system is 0/0.
fn startup_series(case: CaseId, params: &CaseParameters, order: usize) -> Vec<Vec<f64>> {
    let gamma = params.gamma;
    let coeffs = |s: &ScalarSeries, scale: f64| -> Vec<f64> {
        (0..=order)
            .map(|k| {
                let c = s.coeff(k).re.to_f64().unwrap_or(0.0);
                if k == 0 || c == 0.0 {
                    0.0
                } else {
                    c * scale.powi(k as i32) * gamma.powi(((k - 1) / 2) as i32)
                }
            })
            .collect()
    };
    match case {
        CaseId::Case2Bab | CaseId::Case2Aba => {
            let outer = coeffs(&ScalarSeries::tan(order), 0.5);
            let middle = coeffs(&ScalarSeries::sin(order), 1.0);
            vec![outer.clone(), middle, outer]
        }
        _ => unreachable!("only Case2 needs a series start"),
    }
}

fn rk4_step(
    case: CaseId,
    params: &CaseParameters,
    xi: f64,
    y: &CoefficientVector,
    h: f64,
) -> Result<CoefficientVector, SolverError> {
    let k1 = rhs(case, params, xi, y)?;
    let k2 = rhs(case, params, xi + h / 2.0, &y.axpy(h / 2.0, &k1))?;
    let k3 = rhs(case, params, xi + h / 2.0, &y.axpy(h / 2.0, &k2))?;
    let k4 = rhs(case, params, xi + h, &y.axpy(h, &k3))?;
    let values = (0..y.values.len())
        .map(|i| y.values[i] + h / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]))
        .collect();
    Ok(CoefficientVector { case, values })
}

/// RK4 from ξ = 0 with zero initial condition. The last step is shortened to
/// land exactly on `xi_end`.
pub fn integrate(case: CaseId, params: &CaseParameters, xi_end: f64, step: f64) -> Result<OdeSolution, SolverError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(SolverError::BadStep(step));
    }
    if !(xi_end >= 0.0 && xi_end.is_finite()) {
        return Err(SolverError::BadEnd(xi_end));
    }
    if let Some(pole) = pole_location(case, params) {
        if xi_end > pole - POLE_GUARD {
            return Err(SolverError::PoleGuard { pole, xi: xi_end, guard: POLE_GUARD });
        }
    }
    let n_steps = ((xi_end / step) - 1e-9).ceil().max(0.0) as usize;
    let mut xi_grid = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut y = CoefficientVector::zero(case);
    xi_grid.push(0.0);
    values.push(y.clone());

    let needs_series_start = matches!(case, CaseId::Case2Bab | CaseId::Case2Aba);
    let mut method = "rk4";
    for k in 0..n_steps {
        let xi = k as f64 * step;
        let next = if k + 1 == n_steps { xi_end } else { (k + 1) as f64 * step };
        let h = next - xi;
        y = if k == 0 && needs_series_start {
            method = "rk4+series-start";
            let series = startup_series(case, params, 17);
            let vals = series.iter().map(|c| c.iter().rev().fold(0.0, |acc, a| acc * next + a)).collect();
            CoefficientVector { case, values: vals }
        } else {
            rk4_step(case, params, xi, &y, h)?
        };
        if y.values.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite(next));
        }
        xi_grid.push(next);
        values.push(y.clone());
    }
    Ok(OdeSolution { xi_grid, values, step, method })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub max_abs_error: f64,
    pub per_component: Vec<(&'static str, f64)>,
    pub values_at_end: Vec<(&'static str, f64)>,
    pub closed_form_at_end: Vec<(&'static str, f64)>,
}

/// Max over the grid of |integrated − closed form|, per component and overall.
pub fn compare(case: CaseId, params: &CaseParameters, xi_end: f64, step: f64) -> Result<Comparison, SolverError> {
    let sol = integrate(case, params, xi_end, step)?;
    let mut per = vec![0.0f64; case.dim()];
    for (xi, y) in sol.xi_grid.iter().zip(&sol.values) {
        let exact = closed_form(case, params, *xi)?;
        for (slot, (a, b)) in per.iter_mut().zip(y.values.iter().zip(&exact.values)) {
            *slot = slot.max((a - b).abs());
        }
    }
    let names = case.component_names();
    Ok(Comparison {
        max_abs_error: per.iter().copied().fold(0.0, f64::max),
        per_component: names.iter().copied().zip(per).collect(),
        values_at_end: sol.last().named(),
        closed_form_at_end: closed_form(case, params, xi_end)?.named(),
    })
}
