use serde_json::Value;
use structured_spectra_cli::{run_with, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("structured-spectra").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.code, EXIT_OK, "{args:?} failed: {}", r.err);
    r.out
}

/// A float written with 17 significant digits in scientific notation.
fn is_round_trip_float(s: &str) -> bool {
    let Some((mantissa, exp)) = s.split_once('e') else {
        return false;
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    digits.len() == 17 && exp.parse::<i32>().is_ok() && s.parse::<f64>().is_ok()
}

#[test]
fn spectrum_csv_layout() {
    let out = ok(&[
        "spectrum",
        "--kind",
        "palindromic-toeplitz",
        "--dist",
        "rademacher",
        "--n",
        "16",
        "--seed",
        "3",
    ]);
    assert!(!out.contains('\r'));
    assert!(out.ends_with('\n'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "normalized_eigenvalue");
    assert_eq!(lines.len(), 17);
    let values: Vec<f64> = lines[1..].iter().map(|l| l.parse().unwrap()).collect();
    assert!(lines[1..].iter().all(|l| is_round_trip_float(l)), "{out}");
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    // even palindromic matrices are singular
    assert!(values.iter().any(|v| v.abs() < 1e-12));
}

#[test]
fn spectrum_json_matches_csv() {
    let base = [
        "spectrum",
        "--kind",
        "circulant-symmetric-toeplitz",
        "--dist",
        "std-normal",
        "--n",
        "9",
        "--seed",
        "1",
    ];
    let csv = ok(&base);
    let mut with_json = base.to_vec();
    with_json.extend(["--format", "json"]);
    let v: Value = serde_json::from_str(&ok(&with_json)).unwrap();
    let from_json: Vec<f64> = v["normalized_eigenvalues"]
        .as_array()
        .expect("eigenvalue list")
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let from_csv: Vec<f64> = csv.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(from_json, from_csv);
}

#[test]
fn output_is_identical_across_thread_counts() {
    for args in [
        &[
            "spectrum",
            "--kind",
            "plain-symmetric-toeplitz",
            "--dist",
            "uniform-symmetric",
            "--n",
            "40",
            "--seed",
            "9",
        ][..],
        &[
            "moments",
            "--kind",
            "palindromic-toeplitz",
            "--dist",
            "std-normal",
            "--n",
            "32",
            "--m",
            "2,4,6",
            "--draws",
            "64",
            "--seed",
            "5",
        ][..],
        &[
            "spacings",
            "--kind",
            "palindromic-toeplitz",
            "--dist",
            "std-normal",
            "--n",
            "60",
            "--draws",
            "8",
            "--lo",
            "20",
            "--hi",
            "40",
            "--seed",
            "2",
        ][..],
    ] {
        let outputs: Vec<String> = ["1", "2", "4"]
            .iter()
            .map(|t| {
                let mut a = vec!["--threads", t];
                a.extend_from_slice(args);
                ok(&a)
            })
            .collect();
        assert_eq!(outputs[0], outputs[1], "{args:?}");
        assert_eq!(outputs[0], outputs[2], "{args:?}");
    }
}

#[test]
fn moments_json_fields() {
    let v: Value = serde_json::from_str(&ok(&[
        "moments",
        "--kind",
        "palindromic-toeplitz",
        "--dist",
        "std-normal",
        "--n",
        "16",
        "--m",
        "4",
        "--draws",
        "20",
    ]))
    .unwrap();
    for key in [
        "kind",
        "dist",
        "n",
        "m",
        "draws",
        "mean",
        "std_error",
        "gaussian_reference",
    ] {
        assert!(v.get(key).is_some(), "missing {key}: {v}");
    }
    assert_eq!(v["kind"], "palindromic-toeplitz");
    assert_eq!(v["gaussian_reference"].as_f64(), Some(3.0));

    let several: Value = serde_json::from_str(&ok(&[
        "moments",
        "--kind",
        "palindromic-toeplitz",
        "--dist",
        "std-normal",
        "--n",
        "16",
        "--m",
        "2",
        "--m",
        "4",
        "--draws",
        "20",
    ]))
    .unwrap();
    assert_eq!(several.as_array().map(Vec::len), Some(2));
}

#[test]
fn exact_moments_small_case() {
    // N = 2: A = a0 J with J the all-ones matrix, J^4 = 8 J, so M_4 = 16 E[a0^4] / 2^3 = 6
    let v: Value = serde_json::from_str(&ok(&[
        "exact-moments",
        "--kind",
        "palindromic-toeplitz",
        "--n",
        "2",
        "--m",
        "4",
        "--dist",
        "std-normal",
    ]))
    .unwrap();
    assert_eq!(v["value"].as_f64(), Some(6.0));
    assert_eq!(v["total_tuples"].as_u64(), Some(16));
    assert_eq!(v["tuple_count_by_profile"]["(4)"].as_u64(), Some(16));
}

#[test]
fn matchings_csv_layout() {
    let out = ok(&[
        "matchings",
        "--kind",
        "circulant-symmetric-toeplitz",
        "--k",
        "2",
        "--n",
        "10",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "matching_id,pairs,count,normalized");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        assert!(is_round_trip_float(cells[3]));
        let expected = cells[2].parse::<f64>().unwrap() / 1000.0;
        assert_eq!(cells[3].parse::<f64>().unwrap(), expected);
    }
}

#[test]
fn spacings_raw_output() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.csv");
    let out = ok(&[
        "spacings",
        "--kind",
        "palindromic-toeplitz",
        "--dist",
        "std-normal",
        "--n",
        "100",
        "--draws",
        "4",
        "--lo",
        "40",
        "--hi",
        "60",
        "--raw-out",
        raw.to_str().unwrap(),
        "--bins",
        "8",
    ]);
    let raw = std::fs::read_to_string(raw).unwrap();
    let lines: Vec<&str> = raw.lines().collect();
    assert_eq!(lines[0], "spacing");
    assert_eq!(lines.len(), 1 + 4 * 20);
    let mean = lines[1..]
        .iter()
        .map(|l| l.parse::<f64>().unwrap())
        .sum::<f64>()
        / 80.0;
    assert!((mean - 1.0).abs() < 1e-12);

    let hist: Vec<&str> = out.lines().collect();
    assert_eq!(
        hist[0],
        "bin_left,bin_right,count,empirical_density,poisson_ref,goe_ref"
    );
    assert_eq!(hist.len(), 9);
}

#[test]
fn min_spacing_filters_before_binning() {
    let base = [
        "spacings",
        "--kind",
        "palindromic-toeplitz",
        "--dist",
        "std-normal",
        "--n",
        "100",
        "--draws",
        "4",
        "--lo",
        "40",
        "--hi",
        "60",
        "--format",
        "json",
    ];
    let all: Value = serde_json::from_str(&ok(&base)).unwrap();
    let mut filtered_args = base.to_vec();
    filtered_args.extend(["--min-spacing", "0.5"]);
    let filtered: Value = serde_json::from_str(&ok(&filtered_args)).unwrap();
    assert_eq!(all["spacings"], filtered["spacings"]);
    let dropped = filtered["below_min_spacing"].as_u64().unwrap();
    assert_eq!(filtered["binned"].as_u64().unwrap() + dropped, 80);
    assert_eq!(all["ks_goe"], filtered["ks_goe"]);
}

#[test]
fn out_file_replaces_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let r = run(&[
        "spectrum",
        "--kind",
        "diagonal",
        "--dist",
        "rademacher",
        "--n",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 6);
}

#[test]
fn clt_single_run_fields() {
    let v: Value = serde_json::from_str(&ok(&[
        "clt",
        "--dist",
        "rademacher",
        "--n",
        "512",
        "--seed",
        "4",
    ]))
    .unwrap();
    let ks = v["ks"].as_f64().unwrap();
    let bound = v["reference_bound"].as_f64().unwrap();
    assert_eq!(bound, v["ks_constant"].as_f64().unwrap() / 512f64.sqrt());
    assert_eq!(v["within_reference_bound"].as_bool(), Some(ks <= bound));
}

#[test]
fn verify_suite_all_passes() {
    let r = run(&["verify", "--suite", "all", "--ns", "10,20", "--seeds", "5"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let reports: Vec<Value> = serde_json::from_str(&r.out).unwrap();
    assert!(reports.len() >= 6);
    assert!(reports.iter().all(|r| r["passed"] == Value::Bool(true)));
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("exact-moments"));
    assert_eq!(run(&["--version"]).code, EXIT_OK);
    assert_eq!(run(&["spacings", "--help"]).code, EXIT_OK);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["spectrum", "--kind", "diagonal", "--dist", "std-normal"][..],
        &["spectrum", "--bogus"][..],
        &["frobnicate"][..],
    ] {
        let r = run(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(!r.err.is_empty());
    }
}

#[test]
fn invalid_values_exit_three_and_name_the_flag() {
    let cases: [(&[&str], &str); 6] = [
        (
            &[
                "spectrum",
                "--kind",
                "toeplitz",
                "--dist",
                "std-normal",
                "--n",
                "4",
            ],
            "--kind",
        ),
        (
            &[
                "spectrum",
                "--kind",
                "palindromic-toeplitz",
                "--dist",
                "std-normal",
                "--n",
                "7",
            ],
            "--n",
        ),
        (
            &[
                "--threads",
                "0",
                "spectrum",
                "--kind",
                "diagonal",
                "--dist",
                "std-normal",
                "--n",
                "4",
            ],
            "--threads",
        ),
        (
            &[
                "moments",
                "--kind",
                "diagonal",
                "--dist",
                "std-normal",
                "--n",
                "4",
                "--m",
                "2",
                "--draws",
                "3",
                "--format",
                "csv",
            ],
            "--format",
        ),
        (
            &[
                "exact-moments",
                "--kind",
                "plain-symmetric-toeplitz",
                "--n",
                "64",
                "--m",
                "8",
                "--dist",
                "std-normal",
                "--budget",
                "1000",
            ],
            "--budget",
        ),
        (
            &[
                "spacings",
                "--kind",
                "diagonal",
                "--dist",
                "std-normal",
                "--n",
                "10",
                "--draws",
                "2",
                "--lo",
                "5",
                "--hi",
                "3",
            ],
            "--lo",
        ),
    ];
    for (args, flag) in cases {
        let r = run(args);
        assert_eq!(r.code, EXIT_VALIDATION, "{args:?}: {}", r.err);
        assert!(r.err.contains(flag), "{args:?}: {}", r.err);
        assert!(r.out.is_empty());
    }
}

#[test]
fn unwritable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.csv");
    let r = run(&[
        "spectrum",
        "--kind",
        "diagonal",
        "--dist",
        "std-normal",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_IO);
    assert!(r.err.contains("x.csv"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_structured-spectra");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let good = status(&[
        "exact-moments",
        "--kind",
        "diagonal",
        "--n",
        "3",
        "--m",
        "2",
        "--dist",
        "rademacher",
    ]);
    assert_eq!(good.status.code(), Some(EXIT_OK));
    assert_eq!(
        std::process::Command::new(bin)
            .env("STRUCTURED_SPECTRA_THREADS", "lots")
            .args([
                "spectrum",
                "--kind",
                "diagonal",
                "--dist",
                "std-normal",
                "--n",
                "4"
            ])
            .output()
            .unwrap()
            .status
            .code(),
        Some(EXIT_VALIDATION)
    );
}
