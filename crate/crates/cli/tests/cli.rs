use std::process::{Command, Output};

use serde_json::Value;

fn acalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn coords(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn check_reports_norm_constants() {
    let out = acalc(&["check", "--preset", "hyperbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["valid"], true);
    assert!((v["m_empirical"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-6);
    assert_eq!(v["census"]["zero_divisors"], 2);

    let v = json(&acalc(&["check", "--preset", "complex"]));
    assert!((v["m_empirical"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["census"]["zero_divisors"], 0);
}

#[test]
fn non_associative_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"dim":3,"unity":[1,0,0],"constants":[[[1,0,0],[0,1,0],[0,0,1]],[[0,1,0],[0,0,1],[0,0,0]],[[0,0,1],[0,1,0],[0,0,0]]]}"#,
    )
    .unwrap();
    let out = acalc(&["check", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("associativity"));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn file_algebra_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hyperbolic.json");
    std::fs::write(
        &path,
        r#"{"dim":2,"unity":[1,0],"constants":[[[1,0],[0,1]],[[0,1],[1,0]]],"labels":["1","j"]}"#,
    )
    .unwrap();
    let a = json(&acalc(&["check", "--algebra", path.to_str().unwrap()]));
    let b = json(&acalc(&["check", "--preset", "hyperbolic"]));
    assert_eq!(a["m_empirical"], b["m_empirical"]);
    assert_eq!(a["census"], b["census"]);
}

#[test]
fn unreadable_inputs_exit_2() {
    assert_eq!(acalc(&["check", "--algebra", "/nonexistent/a.json"]).status.code(), Some(2));
    assert_eq!(acalc(&["check", "--preset", "no-such-algebra"]).status.code(), Some(2));
    assert_eq!(acalc(&["check"]).status.code(), Some(2));
    assert_eq!(acalc(&["check", "--preset", "complex", "--algebra", "x.json"]).status.code(), Some(2));
    assert_eq!(
        acalc(&["series", "--preset", "complex", "--coeffs", "real: 1", "--point", "1,2,3"]).status.code(),
        Some(2)
    );
}

#[test]
fn root_radius_of_scaled_harmonic_series() {
    let out = acalc(&["series", "--preset", "hyperbolic", "--coeffs", "real: 3^n / n"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = v["radii"]["r_root"].as_f64().unwrap();
    let expected = 1.0 / (3.0 * 2f64.sqrt());
    assert!((r - expected).abs() / expected < 0.02, "r_root = {r}");
    assert_eq!(v["real_coeffs"], true);
}

#[test]
fn geometric_series_at_zero_is_unity() {
    let v = json(&acalc(&["series", "--preset", "hyperbolic", "--coeffs", "builtin: geometric", "--point", "0"]));
    assert_eq!(v["eval"]["result"]["status"], "Converged");
    assert_eq!(coords(&v["eval"]["result"]["value"]), vec![1.0, 0.0]);
}

#[test]
fn band_series_converges_on_the_light_cone() {
    let v = json(&acalc(&["series", "--preset", "hyperbolic", "--coeffs", "builtin: band", "--point", "0.5,-0.5"]));
    assert_eq!(v["eval"]["result"]["status"], "Converged");
    let value = coords(&v["eval"]["result"]["value"]);
    assert!((value[0] - 1.0).abs() < 1e-12 && (value[1] - 1.0).abs() < 1e-12, "{value:?}");
}

#[test]
fn exponential_series_with_element_coefficients() {
    let v = json(&acalc(&[
        "series", "--preset", "complex", "--coeffs", "element: [1,0] * 1/n!", "--point", "0,3.141592653589793",
    ]));
    let value = coords(&v["eval"]["result"]["value"]);
    assert!((value[0] + 1.0).abs() < 1e-12 && value[1].abs() < 1e-12, "{value:?}");
}

#[test]
fn region_single_cell() {
    let out = acalc(&[
        "region", "--preset", "hyperbolic", "--coeffs", "builtin: band", "--grid", "0,0,0,0,1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "{csv}");
    assert!(lines[1].starts_with("0,0,C"), "{csv}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("converged: 1"));
}

#[test]
fn region_json_counts() {
    let v = json(&acalc(&[
        "region", "--preset", "complex", "--coeffs", "builtin: geometric", "--grid", "-2,2,-2,2,5,5", "--format", "json",
    ]));
    let c = &v["counts"];
    let total: u64 = ["converged", "diverged", "inconclusive"].iter().map(|k| c[k].as_u64().unwrap()).sum();
    assert_eq!(total, 25);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 5);
    assert!(c["converged"].as_u64().unwrap() >= 1);
    assert!(c["diverged"].as_u64().unwrap() >= 1);
}

#[test]
fn degenerate_slice_exits_2() {
    let out = acalc(&[
        "region", "--preset", "complex", "--coeffs", "builtin: geometric", "--slice", "u=1,0;v=2,0", "--grid",
        "0,1,0,1,2,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = acalc(&[
            "identities", "--preset", "H_N:3", "--trials", "15", "--seed", "7", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));

    let census = |seed: &str| acalc(&["check", "--preset", "dual", "--seed", seed]).stdout;
    assert_eq!(census("3"), census("3"));
}

#[test]
fn identities_pass_on_commutative_presets() {
    for p in ["complex", "dual", "hyperbolic", "H_N:3", "C_N:4"] {
        let out = acalc(&["identities", "--preset", p, "--trials", "25"]);
        assert_eq!(out.status.code(), Some(0), "{p}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["passed"], true, "{p}");
        assert!(v["pythagorean"]["max_residual"].as_f64().unwrap() < 1e-9, "{p}");
    }
}

#[test]
fn identities_csv_is_special_function_table() {
    let out = acalc(&["identities", "--preset", "H_N:3", "--trials", "5", "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,f_1,f_2,f_3"));
    assert_eq!(lines.count(), 81);
}

#[test]
fn parse_error_reports_column() {
    let out = acalc(&["series", "--preset", "hyperbolic", "--coeffs", "real: 3^n / "]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column 13"), "{err}");
}

#[test]
fn strict_inconclusive_exits_3() {
    let args = ["series", "--preset", "complex", "--coeffs", "real: 1/n", "--point", "1"];
    let lenient = acalc(&args);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(json(&lenient)["eval"]["result"]["status"], "Inconclusive");

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(acalc(&strict).status.code(), Some(3));
}

fn converged_cells(preset: &str, coeffs: &str) -> i64 {
    let out = acalc(&["region", "--preset", preset, "--coeffs", coeffs, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    json(&out)["counts"]["converged"].as_i64().unwrap()
}

fn analytic_cells(inside: impl Fn(f64, f64) -> bool) -> i64 {
    let axis: Vec<f64> = (0..81).map(|k| -2.0 + 0.05 * k as f64).collect();
    axis.iter()
        .flat_map(|&u| axis.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| inside(u, v))
        .count() as i64
}

#[test]
fn band_region_matches_strip() {
    let got = converged_cells("hyperbolic", "builtin: band");
    let expected = analytic_cells(|x, y| (x + y).abs() < 1.0);
    assert!((got - expected).abs() <= 160, "got {got}, strip has {expected}");
}

#[test]
fn geometric_region_matches_diamond() {
    let got = converged_cells("hyperbolic", "builtin: geometric");
    let expected = analytic_cells(|x, y| x.abs() + y.abs() < 1.0);
    assert!((got - expected).abs() <= 160, "got {got}, diamond has {expected}");
}

#[test]
fn identities_reference_values() {
    let v = json(&acalc(&["identities", "--preset", "complex"]));
    let cos_sin = v["suite"]["identities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "cos^2 + sin^2 = 1")
        .unwrap();
    assert!(cos_sin["max_absolute"].as_f64().unwrap() < 1e-10);

    let v = json(&acalc(&["identities", "--preset", "dual"]));
    assert_eq!(v["pythagorean"]["max_residual"].as_f64(), Some(0.0));

    let v = json(&acalc(&["identities", "--preset", "H_N:3"]));
    assert!(v["pythagorean"]["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn identities_reject_noncommutative_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quaternions.json");
    let mut t = vec![vec![vec![0.0; 4]; 4]; 4];
    let table = [
        [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
        [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
        [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
        [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
    ];
    for (a, row) in table.iter().enumerate() {
        for (b, &(k, s)) in row.iter().enumerate() {
            t[a][b][k] = s;
        }
    }
    let file = serde_json::json!({ "dim": 4, "unity": [1, 0, 0, 0], "constants": t });
    std::fs::write(&path, file.to_string()).unwrap();
    let path = path.to_str().unwrap();

    let check = acalc(&["check", "--algebra", path]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["commutative"], false);

    let out = acalc(&["identities", "--algebra", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("commutative"));
}

fn integral(args: &[&str]) -> Value {
    let mut full = vec!["integrate"];
    full.extend_from_slice(args);
    let out = acalc(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

#[test]
fn integrate_segment_of_unity_is_displacement() {
    let v = integral(&["--preset", "complex", "--function", "one", "--curve", "segment(0; 2,3)"]);
    let value = coords(&v["value"]);
    assert!((value[0] - 2.0).abs() < 1e-12 && (value[1] - 3.0).abs() < 1e-12);
    assert!((v["length"].as_f64().unwrap() - 13f64.sqrt()).abs() < 1e-9);
}

#[test]
fn integrate_loops() {
    let exp_loop = integral(&["--preset", "complex", "--function", "exp", "--curve", "circle(0,0; 1; 0,1)"]);
    assert_eq!(exp_loop["closed"], true);
    assert!(exp_loop["norm"].as_f64().unwrap() < 1e-8);

    let series_loop = integral(&["--preset", "complex", "--coeffs", "real: 1/n!", "--curve", "circle(0; 1)"]);
    assert!(series_loop["norm"].as_f64().unwrap() < 1e-8);

    let square = integral(&[
        "--preset", "hyperbolic", "--function", "identity", "--curve", "polygon(0,0; 1,0; 1,1; 0,1; 0,0)",
    ]);
    assert!(square["norm"].as_f64().unwrap() < 1e-8);

    let conj = integral(&["--preset", "complex", "--function", "conj", "--curve", "circle(0; 1)"]);
    let value = coords(&conj["value"]);
    assert!(value[0].abs() < 1e-9 && (value[1] - 2.0 * std::f64::consts::PI).abs() < 1e-9, "{value:?}");
    assert!(conj["norm"].as_f64().unwrap() <= conj["ml_bound"].as_f64().unwrap() + 1e-9);
}

#[test]
fn integrate_rejects_bad_input() {
    for args in [
        ["--preset", "complex", "--function", "nope", "--curve", "circle(0; 1)"],
        ["--preset", "complex", "--function", "one", "--curve", "spiral(0; 1)"],
        ["--preset", "complex", "--function", "one", "--curve", "circle(0; 1; 0,5)"],
        ["--preset", "complex", "--coeffs", "real: 1", "--curve", "circle(0; 2)"],
    ] {
        let mut full = vec!["integrate"];
        full.extend_from_slice(&args);
        assert_eq!(acalc(&full).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn max_terms_environment_variable_caps_summation() {
    let out = Command::new(env!("CARGO_BIN_EXE_acalc"))
        .args(["series", "--preset", "complex", "--coeffs", "real: 1/n", "--point", "1"])
        .env("ACALC_MAX_TERMS", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["eval"]["result"]["terms_used"], 50);
    assert_eq!(v["eval"]["result"]["status"], "Inconclusive");
}
