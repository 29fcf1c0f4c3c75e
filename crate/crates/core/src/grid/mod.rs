//! Wave functions sampled on a uniform periodic grid, with three independent
//! propagators: split-step Fourier, Hermite eigenstate expansion and the
//! truncated Taylor series of the free evolution operator.

mod hermite;
mod split;
mod taylor;

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::ComplexGaussian;

pub use hermite::{hermite_coefficients, hermite_evolve, hermite_functions};
pub use split::{split_step, steps_for, SplitStepResult, BOUNDARY_TOLERANCE};
pub use taylor::{bump_function, bump_value, paradox_report, paradox_run, taylor_propagate, ParadoxReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("wave functions live on different grids")]
    GridMismatch,
    #[error("Hermite expansion truncated: tail coefficient {tail:.3e}, spillover mass {spillover:.3e}")]
    HermiteTail { tail: f64, spillover: f64 },
    #[error("bump half-width {a} is not resolved by grid spacing {h} (need a > 2h)")]
    Resolution { a: f64, h: f64 },
    #[error("non-finite value during {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("csv output failed: {0}")]
    Csv(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, GridError> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(GridError::InvalidGrid(format!("need x_max > x_min, got [{x_min}, {x_max}]")));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(GridError::InvalidGrid(format!("n must be a power of two >= 64, got {n}")));
        }
        Ok(SpatialGrid { x_min, x_max, n })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }
}

impl Default for SpatialGrid {
    fn default() -> Self {
        SpatialGrid { x_min: -20.0, x_max: 20.0, n: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridWaveFunction {
    pub grid: SpatialGrid,
    pub values: Vec<Complex64>,
}

impl GridWaveFunction {
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        GridWaveFunction { grid, values: grid.xs().into_iter().map(f).collect() }
    }

    pub fn from_gaussian(grid: SpatialGrid, g: &ComplexGaussian) -> Self {
        Self::from_fn(grid, |x| g.evaluate(x))
    }

    /// `Σ|ψ_j|² h`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h()
    }

    pub fn normalized(mut self) -> Self {
        let s = self.norm().sqrt();
        if s > 0.0 {
            for v in &mut self.values {
                *v /= s;
            }
        }
        self
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        GridWaveFunction { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// CSV with header `x,re,im,density`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), GridError> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| GridError::Csv(e.to_string());
        w.write_record(["x", "re", "im", "density"]).map_err(err)?;
        for (j, v) in self.values.iter().enumerate() {
            let row = [self.grid.x(j), v.re, v.im, v.norm_sqr()].map(|f| format!("{f:.16e}"));
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| GridError::Csv(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    Free,
    /// `V(x) = −F·x`
    Linear {
        force: f64,
    },
    /// `V(x) = ½mω²x²`
    Harmonic {
        omega: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub m: f64,
    pub hbar: f64,
}

impl PotentialSpec {
    pub fn free(m: f64, hbar: f64) -> Self {
        PotentialSpec { kind: PotentialKind::Free, m, hbar }
    }

    pub fn linear(force: f64, m: f64, hbar: f64) -> Self {
        PotentialSpec { kind: PotentialKind::Linear { force }, m, hbar }
    }

    pub fn harmonic(omega: f64, m: f64, hbar: f64) -> Self {
        PotentialSpec { kind: PotentialKind::Harmonic { omega }, m, hbar }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::Free => 0.0,
            PotentialKind::Linear { force } => -force * x,
            PotentialKind::Harmonic { omega } => 0.5 * self.m * omega * omega * x * x,
        }
    }
}

fn same_grid(a: &GridWaveFunction, b: &GridWaveFunction) -> Result<(), GridError> {
    if a.grid != b.grid || a.values.len() != b.values.len() {
        return Err(GridError::GridMismatch);
    }
    Ok(())
}

/// `sqrt(Σ|ψ1 − ψ2|² h)`.
pub fn l2_distance(a: &GridWaveFunction, b: &GridWaveFunction) -> Result<f64, GridError> {
    same_grid(a, b)?;
    let s: f64 = a.values.iter().zip(&b.values).map(|(u, v)| (u - v).norm_sqr()).sum();
    Ok((s * a.grid.h()).sqrt())
}

/// `Σ_{|x_j| > X} |ψ_j|² h`.
pub fn mass_outside(psi: &GridWaveFunction, threshold: f64) -> f64 {
    let h = psi.grid.h();
    psi.values
        .iter()
        .enumerate()
        .filter(|(j, _)| psi.grid.x(*j).abs() > threshold)
        .map(|(_, v)| v.norm_sqr())
        .sum::<f64>()
        * h
}
