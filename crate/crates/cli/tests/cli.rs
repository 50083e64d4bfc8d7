use std::path::Path;

use sobolev_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("sobolev").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, out, err) = call(&["gram", "--system", "mt", "--n", "4", "--bogus"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["gen-recurrence", "gen-connection", "eval-basis", "gram", "diffcheck", "mt-transform", "ou-demo", "selftest"] {
        assert!(out.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn validation_error_is_one_line() {
    let (code, _, err) = call(&["ou-demo", "--a", "-1"]);
    assert_eq!(code, 1);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.starts_with("error:"));
}

#[test]
fn recurrence_csv_has_seventeen_digits() {
    let (code, out, _) = call(&["gen-recurrence", "--family", "hermite", "--s", "1", "--n", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,a,b");
    let b0: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((b0 - (5.0f64 / 6.0).sqrt()).abs() < 1e-15);
    let mantissa = lines[1].split(',').nth(2).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn recurrence_json_carries_mass() {
    let (code, out, _) = call(&["gen-recurrence", "--family", "hermite", "--n", "4", "--method", "exact", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["mu0"].as_f64().unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert_eq!(v["b"].as_array().unwrap().len(), 4);
}

#[test]
fn exact_connection_prints_radicals() {
    let (code, out, _) = call(&["gen-connection", "--family", "hermite", "--s", "1", "--n", "6", "--exact"]);
    assert_eq!(code, 0);
    assert!(out.contains("5,3,sqrt(50/39)"), "{out}");
    assert!(out.contains("2,1,0"));
    let (_, phased, _) = call(&["gen-connection", "--family", "hermite", "--s", "1", "--n", "3", "--exact", "--phased"]);
    assert!(phased.contains("2,0,-1,sqrt(1/3)"), "{phased}");
}

#[test]
fn gram_reports_json_and_exit_codes() {
    let (code, out, _) = call(&["gram", "--system", "mt", "--n", "32", "--method", "fourier"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["passed"], true);

    // the H¹ system is not orthonormal in L₂
    let (code, _, err) = call(&["gram", "--system", "hermite", "--s", "1", "--seq", "h0", "--n", "6"]);
    assert_eq!(code, 2, "{err}");

    let (code, out, _) = call(&["gram", "--system", "hermite", "--s", "1", "--n", "6", "--perturb", "0.05"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["check"], "negative_control");
    assert!(v["max_off_diagonal"].as_f64().unwrap() > 1e-3);
}

#[test]
fn physical_gram_for_h_infinity() {
    let (code, out, err) = call(&["gram", "--system", "hermite-hinf", "--sigma", "0.5", "--n", "4", "--method", "physical"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn diffcheck_passes_for_closed_and_quadrature_systems() {
    for args in [
        &["diffcheck", "--system", "sobolev-laguerre", "--s", "1", "--n", "6"][..],
        &["diffcheck", "--system", "first-kind", "--family", "hermite", "--s", "1", "--n", "4"][..],
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["skew_hermitian_defect"], 0.0);
    }
}

#[test]
fn eval_basis_negative_index() {
    let (code, out, _) = call(&["eval-basis", "--system", "mt", "--n", "-2", "--xmin", "-1", "--xmax", "1", "--points", "3"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<f64>> = out.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    // |φ_n(x)| = √(2/π)/√(1+4x²)
    for r in rows {
        let modulus = (r[1] * r[1] + r[2] * r[2]).sqrt();
        let want = (2.0 / std::f64::consts::PI).sqrt() / (1.0 + 4.0 * r[0] * r[0]).sqrt();
        assert!((modulus - want).abs() < 1e-14);
    }
    let (code, _, _) = call(&["eval-basis", "--system", "hermite", "--n", "-1"]);
    assert_eq!(code, 1);
}

#[test]
fn eval_polys_header() {
    let (code, out, _) = call(&["eval-polys", "--family", "legendre", "--n", "2", "--points", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "xi,p_0,p_1,p_2");
}

fn write_samples(dir: &Path, n: usize) -> std::path::PathBuf {
    let (code, nodes, _) = call(&["mt-transform", "--n", &n.to_string(), "--emit-nodes"]);
    assert_eq!(code, 0);
    let mut text = String::from("x,re,im\n");
    for line in nodes.lines().skip(1) {
        let x: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        text.push_str(&format!("{x:.17e},{:.17e},0\n", (-x * x).exp()));
    }
    let path = dir.join("samples.csv");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn mt_transform_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_samples(dir.path(), 32);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let (code, _, err) = call(&["mt-transform", "--n", "32", "--input", input.to_str().unwrap(), "--output", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
    let a = std::fs::read(&out_a).unwrap();
    assert_eq!(a, std::fs::read(&out_b).unwrap());
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,re,im");
    assert_eq!(lines.len(), 65);
    assert!(lines[1].starts_with("-32,"));
    assert!(lines[64].starts_with("31,"));

    let (code, out, _) = call(&["mt-transform", "--n", "32", "--s", "2", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 2 * 28);

    let (code, _, err) = call(&["mt-transform", "--n", "16", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("expected 32 samples"), "{err}");
}

#[test]
fn ou_demo_columns() {
    let (code, out, _) = call(&["ou-demo", "--a", "0.5", "--n", "8", "--dt", "0.01", "--t", "0.1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,h1_norm,envelope");
    assert_eq!(lines.len(), 12);
    let first: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(first[1], first[2]);
    let (code, _, _) = call(&["ou-demo", "--a", "1", "--scheme", "leapfrog"]);
    assert_eq!(code, 1);
}

#[test]
fn selftest_subset_and_bad_id() {
    let (code, out, _) = call(&["selftest", "--only", "1,2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.contains("[PASS]")).count(), 2);
    let (code, _, _) = call(&["selftest", "--only", "11"]);
    assert_eq!(code, 1);
}
