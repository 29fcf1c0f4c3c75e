use num_complex::Complex64;
use serde::Serialize;

use super::split::steps_for;
use super::{mass_outside, split_step, GridError, GridWaveFunction, PotentialSpec, SpatialGrid};

/// `exp(−a²/(a² − x²))` inside `|x| < a`, zero elsewhere.
pub fn bump_value(a: f64, x: f64) -> f64 {
    if x.abs() >= a {
        0.0
    } else {
        (-a * a / (a * a - x * x)).exp()
    }
}

/// The compactly supported bump, normalized to unit discrete norm.
pub fn bump_function(a: f64, grid: &SpatialGrid) -> Result<GridWaveFunction, GridError> {
    let h = grid.h();
    if !(a > 2.0 * h) {
        return Err(GridError::Resolution { a, h });
    }
    Ok(GridWaveFunction::from_fn(*grid, |x| Complex64::new(bump_value(a, x), 0.0)).normalized())
}

/// Three-point second difference with zero values outside the grid.
fn second_difference(v: &[Complex64], inv_h2: f64) -> Vec<Complex64> {
    let n = v.len();
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|j| {
            let left = if j > 0 { v[j - 1] } else { zero };
            let right = if j + 1 < n { v[j + 1] } else { zero };
            (left - 2.0 * v[j] + right) * inv_h2
        })
        .collect()
}

/// `Σ_{n=0}^{N} (iħt/2m)^n/n! · D2ⁿ ψ` with `D2` the compact three-point
/// stencil, so each power widens the support by exactly one grid point on
/// each side.
pub fn taylor_propagate(
    psi: &GridWaveFunction,
    m: f64,
    hbar: f64,
    t: f64,
    order: usize,
) -> Result<GridWaveFunction, GridError> {
    if order > 60 {
        return Err(GridError::InvalidParameter("order must be <= 60"));
    }
    if !(m > 0.0 && hbar > 0.0) || !t.is_finite() {
        return Err(GridError::InvalidParameter("m, hbar must be positive and t finite"));
    }
    let h = psi.grid.h();
    let z = Complex64::new(0.0, hbar * t / (2.0 * m));
    let mut term = psi.values.clone();
    let mut sum = psi.values.clone();
    for n in 1..=order {
        let factor = z / n as f64;
        term = second_difference(&term, 1.0 / (h * h)).into_iter().map(|v| v * factor).collect();
        for (s, v) in sum.iter_mut().zip(&term) {
            *s += v;
        }
        if term.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GridError::NonFinite("taylor_propagate"));
        }
    }
    Ok(GridWaveFunction { grid: psi.grid, values: sum })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub a: f64,
    pub t: f64,
    pub order: usize,
    pub m: f64,
    pub hbar: f64,
    pub grid: SpatialGrid,
    pub dt: f64,
    /// `a + N·h`: no Taylor sample beyond this may be nonzero.
    pub support_bound: f64,
    /// Largest `|x_j|` where the Taylor result is nonzero.
    pub max_support_taylor: f64,
    /// `Σ_{|x_j|>a+Nh} |ψ_j|² h` for the Taylor result.
    pub mass_outside_support_taylor: f64,
    /// `Σ_{|x_j|>a} |ψ_j|² h` for the (unnormalized) Taylor result.
    pub mass_outside_a_taylor: f64,
    pub norm_taylor: f64,
    pub mass_outside_a_splitstep: f64,
    pub norm_splitstep: f64,
    pub splitstep_boundary_warning: bool,
}

/// Runs both propagators on the same normalized bump and returns the report
/// together with the Taylor and split-step wave functions.
#[allow(clippy::too_many_arguments)]
pub fn paradox_run(
    a: f64,
    grid: &SpatialGrid,
    m: f64,
    hbar: f64,
    t: f64,
    order: usize,
    dt: f64,
) -> Result<(ParadoxReport, GridWaveFunction, GridWaveFunction), GridError> {
    let psi0 = bump_function(a, grid)?;
    let taylor = taylor_propagate(&psi0, m, hbar, t, order)?;
    let (steps, step) = steps_for(t, dt);
    let split = split_step(&psi0, &PotentialSpec::free(m, hbar), step, steps)?;
    let support_bound = a + order as f64 * grid.h();
    let max_support_taylor = taylor
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(j, _)| grid.x(j).abs())
        .fold(0.0, f64::max);
    let report = ParadoxReport {
        a,
        t,
        order,
        m,
        hbar,
        grid: *grid,
        dt,
        support_bound,
        max_support_taylor,
        mass_outside_support_taylor: mass_outside(&taylor, support_bound),
        mass_outside_a_taylor: mass_outside(&taylor, a),
        norm_taylor: taylor.norm(),
        mass_outside_a_splitstep: mass_outside(&split.psi, a),
        norm_splitstep: split.psi.norm(),
        splitstep_boundary_warning: split.boundary_warning,
    };
    Ok((report, taylor, split.psi))
}

pub fn paradox_report(
    a: f64,
    grid: &SpatialGrid,
    m: f64,
    hbar: f64,
    t: f64,
    order: usize,
    dt: f64,
) -> Result<ParadoxReport, GridError> {
    paradox_run(a, grid, m, hbar, t, order, dt).map(|r| r.0)
}
