use std::fs;

use stirling_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn stirling(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stirling").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn coeffs_all_methods_agree() {
    let (code, out, _) = stirling(&["coeffs", "--max-k", "5", "--method", "all"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# method=recurrence+halfpower+bernoulli expansion=factorial");
    assert_eq!(lines[1], "k,a_k");
    assert_eq!(&lines[2..6], &["0,1", "1,1/12", "2,1/288", "3,-139/51840"]);
    assert_eq!(lines[6], "4,-571/2488320");
    assert_eq!(lines[7], "5,163879/209018880");
    assert_eq!(lines.last().unwrap(), &"# status=OK");
}

#[test]
fn coeffs_order_zero_is_just_one() {
    let (code, out, _) = stirling(&["coeffs", "--max-k", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().skip(1).collect::<Vec<_>>(), ["k,a_k", "0,1"]);
}

#[test]
fn coeffs_reciprocal_json() {
    let (code, out, _) = stirling(&["coeffs", "--max-k", "3", "--reciprocal", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["expansion"], "reciprocal");
    assert_eq!(v["coefficients"][1]["num"], "-1");
    assert_eq!(v["coefficients"][3]["num"], "139");
    assert_eq!(v["coefficients"][3]["den"], "51840");
}

#[test]
fn coeffs_written_to_file_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = stirling(&["coeffs", "--max-k", "12", "--method", "halfpower", "--output", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let (code, out, _) = stirling(&["verify", "--input", p, "--prec", "64"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("convolution m=1..12,PASS"));
}

#[test]
fn verify_defaults_pass() {
    for k in ["20", "1", "0"] {
        let (code, out, _) = stirling(&["verify", "--max-k", k]);
        assert_eq!(code, EXIT_OK, "K = {k}: {out}");
        assert!(out
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with('#'))
            .all(|l| l.contains(",PASS,")));
        assert!(out.ends_with("# overall=PASS\n"));
    }
}

#[test]
fn verify_rejects_a_corrupted_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let (_, good, _) = stirling(&["coeffs", "--max-k", "6"]);
    fs::write(&path, good.replace("3,-139/51840", "3,-139/51841")).unwrap();
    let (code, out, _) = stirling(&["verify", "--input", path.to_str().unwrap(), "--prec", "64"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("convolution m=1..6,FAIL"));
    assert!(out.contains("log_odd_powers x^1..x^6,FAIL"));
    assert!(out.ends_with("# overall=FAIL\n"));
}

#[test]
fn verify_unreadable_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.csv");
    fs::write(&path, "k,a_k\n0,1\n1,0.083\n").unwrap();
    assert_eq!(stirling(&["verify", "--input", path.to_str().unwrap()]).0, EXIT_USAGE);
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        stirling(&["verify", "--input", missing.to_str().unwrap()]).0,
        EXIT_USAGE
    );
}

fn cell(out: &str, row: usize, col: usize) -> f64 {
    out.lines()
        .nth(row)
        .unwrap()
        .split(',')
        .nth(col)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn approx_and_reciprocal_values() {
    let (code, out, _) = stirling(&["approx", "--n", "10", "--terms", "4", "--max-rel-error", "1e-8"]);
    assert_eq!(code, EXIT_OK);
    assert!((cell(&out, 1, 2) - 3628799.9717458686).abs() < 1e-6);
    let (code, _, _) = stirling(&["approx", "--n", "10", "--terms", "3", "--max-rel-error", "1e-8"]);
    assert_eq!(code, EXIT_FAILED);
    let (code, out, _) = stirling(&["reciprocal", "--n", "10", "--terms", "3"]);
    assert_eq!(code, EXIT_OK);
    let (approx, exact) = (cell(&out, 1, 2), cell(&out, 1, 3));
    assert!((approx - exact).abs() < 1e-13);
}

#[test]
fn quad_matches_reference() {
    let (code, out, err) = stirling(&["quad", "--which", "f", "--n", "1", "--tol", "1e-10"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# integral=f");
    assert_eq!(lines[1], "t,n,value,err_estimate,reference,abs_diff");
    assert!((cell(&out, 2, 2) - 1.0844375514192275).abs() < 1e-12);
    assert!(cell(&out, 2, 5) <= 1e-10);

    let (code, out, _) = stirling(&["quad", "--n", "4", "--tol", "1e-10", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["f"][0]["n"], "4");
    assert_eq!(v["g"][0]["n"], "4");
}

#[test]
fn error_table_rows() {
    let (code, out, _) = stirling(&["error-table", "--n", "10,20", "--terms", "0,1"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,N,ratio,partial,abs_error,scaled_error");
    assert_eq!(lines.len(), 5);
    assert!((cell(&out, 1, 4) - 8.365359132400246e-3).abs() < 1e-15);
    assert!((cell(&out, 2, 4) - 3.202579906691257e-5).abs() < 1e-17);
}

#[test]
fn bad_arguments_exit_with_usage() {
    for args in [
        &["coeffs", "--method", "magic"][..],
        &["coeffs", "--max-k", "-1"],
        &["approx", "--n", "0", "--terms", "1"],
        &["approx", "--n", "3", "--terms", "1", "--prec", "32"],
        &["quad", "--n", "1", "--tol", "0"],
        &["quad", "--n", "1", "--tol=-1e-3"],
        &["frobnicate"],
        &[],
    ] {
        let (code, _, err) = stirling(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = stirling(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("coeffs"));
}
