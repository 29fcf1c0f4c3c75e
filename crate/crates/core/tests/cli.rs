use std::path::Path;
use std::process::{Command, Output};

use opfact::cli::{density_map, System};
use opfact::gaussian::PhysicalParameters;
use serde_json::Value;

fn opfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opfact")).args(args).output().expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn verify_examples_exit_zero() {
    for args in [
        &["verify", "--case", "bch", "--delta", "3/2", "--order", "10"][..],
        &["verify", "--case", "case1", "--k", "2", "--order", "8"],
        &["verify", "--case", "ho-bab", "--order", "8"],
        &["verify", "--case", "ho-aba", "--order", "8"],
        &["verify", "--case", "ho-cab", "--order", "8"],
        &["verify", "--case", "force", "--order", "8"],
    ] {
        let out = opfact(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let report = json_out(&out);
        assert_eq!(report["equal"], Value::Bool(true));
        assert!(report["first_mismatch"].is_null());
    }
}

#[test]
fn verify_rejects_bad_input() {
    assert_eq!(opfact(&["verify", "--case", "bch", "--order", "13"]).status.code(), Some(2));
    assert_eq!(opfact(&["verify", "--case", "nope"]).status.code(), Some(2));
    assert_eq!(opfact(&["verify", "--case", "bch", "--delta", "1/0"]).status.code(), Some(2));
    assert_eq!(opfact(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn solve_examples() {
    let out = opfact(&["solve", "--case", "case2-bab", "--gamma", "1", "--xi-end", "2.8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    assert!(r["max_abs_error"].as_f64().unwrap() < 1e-8);
    assert!(r["values_at_end"]["f"].is_number());

    let r = json_out(&opfact(&["solve", "--case", "bch", "--delta", "7"]));
    assert!(r["max_abs_error"].as_f64().unwrap() < 1e-12);

    let out = opfact(&["solve", "--case", "case2-bab", "--gamma", "1", "--xi-end", "3.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3.14"));
}

#[test]
fn solve_fails_check_with_coarse_step() {
    let out = opfact(&["solve", "--case", "case2-bab", "--xi-end", "3.1", "--step", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = opfact(&["solve", "--case", "case1", "--xi-end", "1", "--step", "0.01", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(rows[0][0], "xi");
    assert_eq!(rows.len(), 102);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn evolve_harmonic_writes_three_csvs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run1");
    let out = opfact(&[
        "evolve",
        "--system",
        "harmonic",
        "--method",
        "factorized",
        "--sigma",
        "1",
        "--times",
        "0,0.5,1",
        "--out",
        run.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "evolve");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["parameters"]["physics"]["sigma"], 1.0);
    for (i, t) in [0.0f64, 0.5, 1.0].into_iter().enumerate() {
        let rows = read_csv(&run.join(format!("psi_factorized_{i:03}.csv")));
        assert_eq!(rows[0], ["x", "re", "im", "density"]);
        let p = PhysicalParameters { t, ..Default::default() };
        for row in rows.iter().skip(1).step_by(97) {
            let x: f64 = row[0].parse().unwrap();
            let d: f64 = row[3].parse().unwrap();
            let expected = opfact::gaussian::harmonic_density_formula(&p, x, Default::default()).unwrap();
            assert!((d - expected).abs() <= 1e-10 * expected.max(1e-300) + 1e-300, "t={t} x={x}");
        }
    }
}

#[test]
fn evolve_compare_force_closed_form_vs_factorized() {
    let out = opfact(&["evolve", "--system", "force", "--method", "closed-form", "--times", "0.5,1,2", "--compare"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_out(&out);
    let table = r["comparison"].as_array().unwrap();
    let pairs: Vec<&Value> = table.iter().filter(|row| row["a"] == "closed-form" && row["b"] == "factorized").collect();
    assert_eq!(pairs.len(), 3);
    for row in pairs {
        assert!(row["l2"].as_f64().unwrap() < 1e-10);
    }
    for row in table {
        assert!(row["l2"].as_f64().unwrap() < 1e-6, "{row}");
    }
}

#[test]
fn evolve_split_step_at_zero_returns_input() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let run = |method: &str, d: &Path| {
        let out = opfact(&["evolve", "--system", "free", "--method", method, "--t", "0", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    };
    run("split-step", &a);
    run("factorized", &b);
    let x = std::fs::read(a.join("psi_split-step_000.csv")).unwrap();
    let y = std::fs::read(b.join("psi_factorized_000.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn evolve_rejects_invalid_combinations() {
    for args in [
        &["evolve", "--system", "free", "--method", "eigenstates"][..],
        &["evolve", "--system", "harmonic", "--method", "taylor"],
        &["evolve", "--system", "force", "--method", "closed-form", "--x0", "1"],
        &["evolve", "--system", "free", "--n", "100"],
        &["evolve", "--system", "free", "--m", "-1"],
    ] {
        assert_eq!(opfact(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn evolve_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = opfact(&[
        "evolve",
        "--system",
        "harmonic",
        "--method",
        "eigenstates",
        "--times",
        "1",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("psi_eigenstates_000.json")).unwrap()).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 4096);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["r1", "r2"] {
        let d = dir.path().join(name);
        let out = opfact(&[
            "evolve",
            "--system",
            "harmonic",
            "--method",
            "split-step",
            "--times",
            "0.3",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        files.push(std::fs::read(d.join("psi_split-step_000.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn paradox_trivial_cases() {
    let r = json_out(&opfact(&["paradox", "--t", "0"]));
    assert_eq!(r["mass_outside_a_taylor"], 0.0);
    assert_eq!(r["mass_outside_a_splitstep"], 0.0);

    let dir = tempfile::tempdir().unwrap();
    let out = opfact(&["paradox", "--order", "0", "--n", "1024", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let taylor = read_csv(&dir.path().join("taylor.csv"));
    let grid = opfact::grid::SpatialGrid::new(-20.0, 20.0, 1024).unwrap();
    let bump = opfact::grid::bump_function(1.0, &grid).unwrap();
    for (row, v) in taylor.iter().skip(1).zip(&bump.values) {
        assert_eq!(row[1], format!("{:.16e}", v.re));
        assert_eq!(row[2], format!("{:.16e}", v.im));
    }
    for f in ["report.json", "splitstep.csv", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn densitymap_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = opfact(&["densitymap", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(&dir.path().join("densitymap.csv"));
    assert_eq!(rows.len(), 202);
    assert_eq!(rows[0].len(), 402);
    assert_eq!(rows[0][0], "t");
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 0.0);
    assert!(rows.iter().skip(1).flatten().all(|v| v.parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn densitymap_rejects_free_system() {
    assert_eq!(opfact(&["densitymap", "--system", "free"]).status.code(), Some(2));
}

#[test]
fn density_map_breathes_and_coherent_is_static() {
    let p = PhysicalParameters::default();
    let period = 2.0 * std::f64::consts::PI;
    let map = density_map(System::Harmonic, &p, 0.0, 0.0, 0.0, 2.0 * period, 200, -10.0, 10.0, 401).unwrap();
    for v in map.row_integrals() {
        assert!((v - 1.0).abs() < 1e-6);
    }
    // rows i and i+100 are one period apart
    for i in 0..=100 {
        for (a, b) in map.densities[i].iter().zip(&map.densities[i + 100]) {
            assert!((a - b).abs() < 1e-10);
        }
    }
    let peak = |row: &Vec<f64>| row.iter().copied().fold(0.0, f64::max);
    assert!((peak(&map.densities[0]) - peak(&map.densities[25])).abs() > 0.05);

    let coherent = PhysicalParameters { sigma: 0.5f64.sqrt(), ..p };
    let map = density_map(System::Harmonic, &coherent, 0.0, 0.0, 0.0, 2.0 * period, 200, -10.0, 10.0, 401).unwrap();
    for row in &map.densities {
        for (a, b) in row.iter().zip(&map.densities[0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
