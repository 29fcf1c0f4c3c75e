use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{GridError, GridWaveFunction, PotentialSpec};

/// Relative amplitude near the grid edges above which a run is flagged.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SplitStepResult {
    pub psi: GridWaveFunction,
    /// Largest |ψ| in the outer 1/64 of the grid on either side, relative to max |ψ|.
    pub boundary_leak: f64,
    pub boundary_warning: bool,
}

fn boundary_leak(psi: &GridWaveFunction) -> f64 {
    let n = psi.values.len();
    let edge = (n / 64).max(1);
    let peak = psi.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let outer = psi.values[..edge].iter().chain(&psi.values[n - edge..]).map(|v| v.norm()).fold(0.0, f64::max);
    outer / peak
}

/// Strang splitting `e^{−iV dt/2ħ} e^{−iT dt/ħ} e^{−iV dt/2ħ}` repeated
/// `steps` times, the kinetic factor applied exactly per Fourier mode.
pub fn split_step(
    psi: &GridWaveFunction,
    pot: &PotentialSpec,
    dt: f64,
    steps: usize,
) -> Result<SplitStepResult, GridError> {
    if !(pot.m > 0.0 && pot.hbar > 0.0) {
        return Err(GridError::InvalidParameter("m and hbar must be positive"));
    }
    if !dt.is_finite() {
        return Err(GridError::InvalidParameter("dt must be finite"));
    }
    let grid = psi.grid;
    let n = grid.n;
    let h = grid.h();
    let (m, hbar) = (pot.m, pot.hbar);

    let half_v: Vec<Complex64> =
        grid.xs().iter().map(|&x| Complex64::from_polar(1.0, -pot.value(x) * dt / (2.0 * hbar))).collect();
    let dk = 2.0 * PI / (n as f64 * h);
    let kinetic: Vec<Complex64> = (0..n)
        .map(|j| {
            let k = if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk;
            Complex64::from_polar(1.0 / n as f64, -hbar * k * k * dt / (2.0 * m))
        })
        .collect();

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];

    let mut values = psi.values.clone();
    for _ in 0..steps {
        for (v, p) in values.iter_mut().zip(&half_v) {
            *v *= p;
        }
        fwd.process_with_scratch(&mut values, &mut scratch);
        for (v, k) in values.iter_mut().zip(&kinetic) {
            *v *= k;
        }
        inv.process_with_scratch(&mut values, &mut scratch);
        for (v, p) in values.iter_mut().zip(&half_v) {
            *v *= p;
        }
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(GridError::NonFinite("split_step"));
    }
    let out = GridWaveFunction { grid, values };
    let leak = boundary_leak(&out);
    Ok(SplitStepResult { psi: out, boundary_leak: leak, boundary_warning: leak > BOUNDARY_TOLERANCE })
}

/// Number of steps and step size covering `t` with steps no larger than `dt_max`.
pub fn steps_for(t: f64, dt_max: f64) -> (usize, f64) {
    if t == 0.0 {
        return (0, 0.0);
    }
    let steps = (t.abs() / dt_max).ceil().max(1.0) as usize;
    (steps, t / steps as f64)
}
