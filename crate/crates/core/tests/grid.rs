use std::f64::consts::PI;

use num_complex::Complex64;
use opfact::gaussian::*;
use opfact::grid::*;

/// Split-step mass outside |x| > a for the default paradox run, recorded on
/// the first oracle run.
const PARADOX_SPLIT_BASELINE: f64 = 0.5549968119334424;

fn density_l2(a: &GridWaveFunction, b: &GridWaveFunction) -> f64 {
    let h = a.grid.h();
    (a.density().iter().zip(b.density()).map(|(u, v)| (u - v).powi(2)).sum::<f64>() * h).sqrt()
}

fn engine_on_grid(grid: SpatialGrid, g: &ComplexGaussian) -> GridWaveFunction {
    GridWaveFunction::from_gaussian(grid, g)
}

#[test]
fn free_split_step_matches_engine() {
    let grid = SpatialGrid::default();
    let g0 = ComplexGaussian::standard(1.0);
    let psi = GridWaveFunction::from_gaussian(grid, &g0);
    let out = split_step(&psi, &PotentialSpec::free(1.0, 1.0), 1e-3, 1000).unwrap();
    let p = PhysicalParameters { force: 0.0, t: 1.0, ..Default::default() };
    let exact = engine_on_grid(grid, &run_program(&program_constant_force(&p).unwrap(), &g0).unwrap());
    assert!(l2_distance(&out.psi, &exact).unwrap() < 1e-6);
    assert!(!out.boundary_warning);

    let one = split_step(&psi, &PotentialSpec::free(1.0, 1.0), 1.0, 1).unwrap();
    assert!(l2_distance(&one.psi, &out.psi).unwrap() < 1e-12);
    let zero = split_step(&psi, &PotentialSpec::free(1.0, 1.0), 0.0, 0).unwrap();
    assert_eq!(zero.psi, psi);
}

#[test]
fn split_step_norm_drift() {
    let grid = SpatialGrid::default();
    let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::displaced(1.0, -1.0, 0.5));
    for pot in
        [PotentialSpec::free(1.0, 1.0), PotentialSpec::linear(1.0, 1.0, 1.0), PotentialSpec::harmonic(1.0, 1.0, 1.0)]
    {
        let out = split_step(&psi, &pot, 1e-3, 1000).unwrap();
        assert!((out.psi.norm() - psi.norm()).abs() < 1e-12, "{pot:?}");
    }
}

#[test]
fn linear_potential_matches_constant_force_program() {
    let grid = SpatialGrid::default();
    let g0 = ComplexGaussian::standard(1.0);
    let psi = GridWaveFunction::from_gaussian(grid, &g0);
    for t in [0.5, 1.0, 2.0] {
        let (steps, dt) = steps_for(t, 1e-3);
        let out = split_step(&psi, &PotentialSpec::linear(1.0, 1.0, 1.0), dt, steps).unwrap();
        let p = PhysicalParameters { t, ..Default::default() };
        let exact = engine_on_grid(grid, &run_program(&program_constant_force(&p).unwrap(), &g0).unwrap());
        assert!(l2_distance(&out.psi, &exact).unwrap() < 1e-6, "t={t}");
    }
}

#[test]
fn split_step_is_second_order() {
    let grid = SpatialGrid::default();
    let g0 = ComplexGaussian::standard(0.8);
    let psi = GridWaveFunction::from_gaussian(grid, &g0);
    let p = PhysicalParameters { sigma: 0.8, t: 1.0, ..Default::default() };
    let exact = engine_on_grid(grid, &evolve_harmonic(&p, HarmonicOrdering::Bab, &g0).unwrap());
    let err = |steps: usize| {
        let out = split_step(&psi, &PotentialSpec::harmonic(1.0, 1.0, 1.0), 1.0 / steps as f64, steps).unwrap();
        l2_distance(&out.psi, &exact).unwrap()
    };
    let ratio = err(50) / err(100);
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn coherent_packet_density_is_stationary_on_grid() {
    let grid = SpatialGrid::default();
    let sigma = 0.5f64.sqrt();
    let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::standard(sigma));
    let pot = PotentialSpec::harmonic(1.0, 1.0, 1.0);
    let mut current = psi.clone();
    let chunk = 500;
    let total = (4.0 * PI / 1e-3).round() as usize;
    let mut done = 0;
    while done < total {
        let steps = chunk.min(total - done);
        current = split_step(&current, &pot, 4.0 * PI / total as f64, steps).unwrap().psi;
        done += steps;
        let sup = current.density().iter().zip(psi.density()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(sup < 1e-6, "t={}: {sup}", done as f64 * 4.0 * PI / total as f64);
        assert!(density_l2(&current, &psi) < 1e-6);
    }
}

#[test]
fn hermite_ground_state_and_revival() {
    let grid = SpatialGrid::default();
    let basis = hermite_functions(&grid, 1.0, 1.0, 1.0, 2);
    let phi0 = GridWaveFunction { grid, values: basis[0].iter().map(|&v| Complex64::new(v, 0.0)).collect() };
    assert!((phi0.norm() - 1.0).abs() < 1e-13);
    let t = 0.9;
    let out = hermite_evolve(&phi0, 1.0, 1.0, 1.0, t, 8).unwrap();
    let expect = phi0.scaled(Complex64::from_polar(1.0, -t / 2.0));
    assert!(l2_distance(&out, &expect).unwrap() < 1e-12);

    let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::displaced(0.9, 0.7, 0.3));
    let back = hermite_evolve(&psi, 1.0, 1.0, 1.0, 2.0 * PI, 64).unwrap();
    assert!(l2_distance(&back, &psi.scaled(Complex64::new(-1.0, 0.0))).unwrap() < 1e-10);
}

#[test]
fn hermite_round_trip() {
    let grid = SpatialGrid::default();
    let (m, omega, hbar) = (1.0f64, 1.0f64, 1.0f64);
    let sc = (hbar / (2.0 * m * omega)).sqrt();
    for factor in [0.5, 0.8, 1.0, 1.5, 2.0] {
        let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::standard(factor * sc));
        let back = hermite_evolve(&psi, m, omega, hbar, 0.0, 128).unwrap();
        assert!(l2_distance(&back, &psi).unwrap() < 1e-10, "factor {factor}");
    }
}

#[test]
fn hermite_tail_is_reported() {
    let grid = SpatialGrid::default();
    let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::displaced(0.5, 6.0, 0.0));
    match hermite_evolve(&psi, 1.0, 1.0, 1.0, 1.0, 8) {
        Err(GridError::HermiteTail { tail, spillover }) => assert!(tail > 1e-10 && spillover > 0.1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn harmonic_cross_oracle_triangle() {
    let grid = SpatialGrid::default();
    let g0 = ComplexGaussian::standard(1.0);
    let psi = GridWaveFunction::from_gaussian(grid, &g0);
    let base = PhysicalParameters::default();
    for t in [0.7, 2.0, PI, 5.0, 2.0 * PI] {
        let engine = engine_on_grid(grid, &evolve_harmonic(&base.at(t), HarmonicOrdering::Bab, &g0).unwrap());
        let herm = hermite_evolve(&psi, 1.0, 1.0, 1.0, t, 64).unwrap();
        let (steps, dt) = steps_for(t, 1e-3);
        let split = split_step(&psi, &PotentialSpec::harmonic(1.0, 1.0, 1.0), dt, steps).unwrap().psi;
        assert!(l2_distance(&herm, &engine).unwrap() < 1e-8, "t={t}");
        assert!(l2_distance(&split, &engine).unwrap() < 1e-6, "t={t}");
        assert!(l2_distance(&split, &herm).unwrap() < 1e-6, "t={t}");
    }
}

#[test]
fn bump_definition() {
    assert_eq!(bump_value(1.0, 0.0), (-1.0f64).exp());
    assert_eq!(bump_value(1.0, 1.0), 0.0);
    assert_eq!(bump_value(1.0, -1.5), 0.0);
    let grid = SpatialGrid::default();
    let bump = bump_function(1.0, &grid).unwrap();
    assert!((bump.norm() - 1.0).abs() < 1e-14);
    let h = grid.h();
    let mut diff: Vec<Complex64> = bump.values.clone();
    for _ in 0..6 {
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    // diff[j] involves samples j..=j+6
    for (j, d) in diff.iter().enumerate() {
        let (lo, hi) = (grid.x(j), grid.x(j + 6));
        if lo > 1.0 + 6.0 * h || hi < -1.0 - 6.0 * h {
            assert_eq!(*d, Complex64::new(0.0, 0.0));
        }
    }
    assert!(matches!(bump_function(0.015, &grid), Err(GridError::Resolution { .. })));
}

#[test]
fn taylor_support_is_exact() {
    let grid = SpatialGrid::default();
    let bump = bump_function(1.0, &grid).unwrap();
    assert_eq!(taylor_propagate(&bump, 1.0, 1.0, 1.0, 0).unwrap(), bump);
    for order in [1, 5, 20, 40, 60] {
        for t in [0.1, 1.0, 3.0] {
            let out = taylor_propagate(&bump, 1.0, 1.0, t, order).unwrap();
            let bound = 1.0 + order as f64 * grid.h();
            for (j, v) in out.values.iter().enumerate() {
                if grid.x(j).abs() > bound {
                    assert!(v.re.to_bits() == 0 && v.im.to_bits() == 0, "N={order} t={t} x={}", grid.x(j));
                }
            }
        }
    }
    assert!(taylor_propagate(&bump, 1.0, 1.0, 1.0, 61).is_err());
}

#[test]
fn taylor_matches_split_step_for_gaussian_at_small_t() {
    let grid = SpatialGrid::new(-20.48, 20.48, 2048).unwrap();
    let psi = GridWaveFunction::from_gaussian(grid, &ComplexGaussian::standard(1.0));
    let t = 1e-3;
    let taylor = taylor_propagate(&psi, 1.0, 1.0, t, 20).unwrap();
    let split = split_step(&psi, &PotentialSpec::free(1.0, 1.0), t, 1).unwrap().psi;
    assert!(l2_distance(&taylor, &split).unwrap() < 1e-6);
}

#[test]
fn paradox_defaults() {
    let grid = SpatialGrid::default();
    let r = paradox_report(1.0, &grid, 1.0, 1.0, 1.0, 20, 1e-3).unwrap();
    assert_eq!(r.mass_outside_support_taylor, 0.0);
    assert!(r.max_support_taylor <= r.support_bound);
    assert!(r.mass_outside_a_splitstep > 1e-3);
    assert!((r.mass_outside_a_splitstep / PARADOX_SPLIT_BASELINE - 1.0).abs() < 0.01, "{}", r.mass_outside_a_splitstep);
    assert!((r.norm_splitstep - 1.0).abs() < 1e-10);

    let r0 = paradox_report(1.0, &grid, 1.0, 1.0, 0.0, 20, 1e-3).unwrap();
    assert_eq!(r0.mass_outside_a_taylor, 0.0);
    assert_eq!(r0.mass_outside_a_splitstep, 0.0);

    let (_, taylor, _) = paradox_run(1.0, &grid, 1.0, 1.0, 1.0, 0, 1e-3).unwrap();
    assert_eq!(taylor, bump_function(1.0, &grid).unwrap());
}
