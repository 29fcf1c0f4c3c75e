use std::f64::consts::PI;

use num_complex::Complex64;

use super::{GridError, GridWaveFunction, SpatialGrid};

/// Normalized Hermite functions `φ_0 … φ_{n_max}` sampled on the grid, with
/// length scale `√(ħ/mω)`, from the three-term recurrence
/// `φ_{n+1} = √(2/(n+1)) ξ φ_n − √(n/(n+1)) φ_{n−1}`.
pub fn hermite_functions(grid: &SpatialGrid, m: f64, omega: f64, hbar: f64, n_max: usize) -> Vec<Vec<f64>> {
    let len = (hbar / (m * omega)).sqrt();
    let xi: Vec<f64> = grid.xs().iter().map(|x| x / len).collect();
    let mut out = Vec::with_capacity(n_max + 1);
    let phi0: Vec<f64> = xi.iter().map(|z| PI.powf(-0.25) / len.sqrt() * (-z * z / 2.0).exp()).collect();
    out.push(phi0);
    if n_max >= 1 {
        let phi1 = xi.iter().zip(&out[0]).map(|(z, p)| 2f64.sqrt() * z * p).collect();
        out.push(phi1);
    }
    for n in 1..n_max {
        let a = (2.0 / (n as f64 + 1.0)).sqrt();
        let b = (n as f64 / (n as f64 + 1.0)).sqrt();
        let next = (0..xi.len()).map(|j| a * xi[j] * out[n][j] - b * out[n - 1][j]).collect();
        out.push(next);
    }
    out
}

/// `c_n = Σ_j ψ_j φ_n(x_j) h` for `n = 0 … n_max`.
pub fn hermite_coefficients(psi: &GridWaveFunction, basis: &[Vec<f64>]) -> Vec<Complex64> {
    let h = psi.grid.h();
    basis.iter().map(|phi| psi.values.iter().zip(phi).map(|(v, p)| v * p).sum::<Complex64>() * h).collect()
}

/// Eigenstate expansion: `Σ e^{−iE_n t/ħ} c_n φ_n` with `E_n = ħω(n + 1/2)`.
/// Fails if the last two coefficients are not below 1e−10 (relative to the
/// input norm), reporting the mass the basis misses.
pub fn hermite_evolve(
    psi: &GridWaveFunction,
    m: f64,
    omega: f64,
    hbar: f64,
    t: f64,
    n_max: usize,
) -> Result<GridWaveFunction, GridError> {
    if !(m > 0.0 && omega > 0.0 && hbar > 0.0) {
        return Err(GridError::InvalidParameter("m, omega and hbar must be positive"));
    }
    if n_max < 1 {
        return Err(GridError::InvalidParameter("n_max must be at least 1"));
    }
    let basis = hermite_functions(&psi.grid, m, omega, hbar, n_max);
    let c = hermite_coefficients(psi, &basis);
    let norm = psi.norm();
    let scale = norm.sqrt().max(f64::MIN_POSITIVE);
    let tail = c[n_max].norm().max(c[n_max - 1].norm()) / scale;
    let captured: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    let spillover = ((norm - captured) / norm.max(f64::MIN_POSITIVE)).max(0.0);
    if tail >= 1e-10 {
        return Err(GridError::HermiteTail { tail, spillover });
    }
    let mut values = vec![Complex64::new(0.0, 0.0); psi.grid.n];
    for (n, (cn, phi)) in c.iter().zip(&basis).enumerate() {
        let coeff = cn * Complex64::from_polar(1.0, -omega * t * (n as f64 + 0.5));
        for (v, p) in values.iter_mut().zip(phi) {
            *v += coeff * p;
        }
    }
    Ok(GridWaveFunction { grid: psi.grid, values })
}
