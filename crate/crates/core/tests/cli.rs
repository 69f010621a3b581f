use std::process::{Command, Output};

use md5fol::catalog::{validate_params, FamilyId, FamilyParams};
use md5fol::cli::OrbitSampleRow;
use md5fol::lie::Covector;
use md5fol::orbit::orbit_param;

fn md5fol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_md5fol"))
        .args(args)
        .output()
        .unwrap()
}

fn sample_args<'a>(out: &'a str, format: &'a str) -> Vec<&'a str> {
    vec![
        "orbit-sample",
        "--family",
        "G5_4_13",
        "--params",
        "lambda=-2.5,phi=0.7",
        "--point",
        "-1.25,0.3,-4,2.5,1e-3",
        "--x-range",
        "-3,2",
        "--x-count",
        "4",
        "--a-range",
        "-1.5,2",
        "--a-count",
        "7",
        "--format",
        format,
        "--out",
        out,
    ]
}

fn expected_rows() -> Vec<(f64, f64, Covector)> {
    let d = validate_params(FamilyId::G5_4_13, FamilyParams::lambda_phi(-2.5, 0.7)).unwrap();
    let f = Covector::new(-1.25, 0.3, -4.0, 2.5, 1e-3);
    let xs = md5fol::cli::grid(-3.0, 2.0, 4);
    let as_ = md5fol::cli::grid(-1.5, 2.0, 7);
    xs.iter()
        .flat_map(|&x| as_.iter().map(move |&a| (x, a)))
        .map(|(x, a)| (x, a, orbit_param(&d, &f, x, a)))
        .collect()
}

#[test]
fn csv_rows_reproduce_orbit_param_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = md5fol(&sample_args(path.to_str().unwrap(), "csv"));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,a,f1,f2,f3,f4,f5"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let want = expected_rows();
    assert_eq!(rows.len(), want.len());
    for (row, (x, a, p)) in rows.iter().zip(&want) {
        assert_eq!(row[0], *x);
        assert_eq!(row[1], *a);
        assert_eq!(row[2..], p.0);
    }
}

#[test]
fn json_rows_reproduce_orbit_param_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.jsonl");
    let out = md5fol(&sample_args(path.to_str().unwrap(), "json"));
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<OrbitSampleRow> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let want = expected_rows();
    assert_eq!(rows.len(), want.len());
    for (row, (x, a, p)) in rows.iter().zip(&want) {
        assert_eq!((row.x, row.a), (*x, *a));
        assert_eq!(row.point(), *p);
    }
}

#[test]
fn single_point_grid_returns_input() {
    let out = md5fol(&[
        "orbit-sample",
        "--family",
        "G5_4_9",
        "--params",
        "lambda=3",
        "--point",
        "0.5,1,2,3,4",
        "--x-range",
        "0.5,0.5",
        "--a-range",
        "0,0",
        "--a-count",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row, vec![0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn quarter_turn_negates_complex_slots() {
    let out = md5fol(&[
        "orbit-sample",
        "--family",
        "G5_4_14",
        "--params",
        "lambda=0,mu=1,phi=1.5707963267948966",
        "--point",
        "0,1,0,1,0",
        "--a-range",
        "3.141592653589793,3.141592653589793",
        "--a-count",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    for (got, want) in row[2..].iter().zip([0.0, -1.0, 0.0, -1.0, 0.0]) {
        assert!((got - want).abs() < 1e-15, "{row:?}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| md5fol(args).status.code().unwrap();
    assert_eq!(
        code(&["classify", "--family", "G5_4_5", "--point", "3,0,0,0,0"]),
        0
    );
    assert_eq!(code(&["verify", "--scope", "G5_4_99"]), 2);
    assert_eq!(
        code(&["classify", "--family", "G5_4_15", "--point", "0,1,0,0,0"]),
        2
    );
    assert_eq!(
        code(&[
            "classify",
            "--family",
            "G5_4_12",
            "--params",
            "lambda=1,phi=0",
            "--point",
            "0,1,0,0,0"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "orbit-sample",
            "--family",
            "G5_4_5",
            "--point",
            "0,1,0,0,0",
            "--out",
            "/proc/no/such/file"
        ]),
        3
    );
    // A membership bound below rounding makes the flow suite fail.
    assert_eq!(
        code(&[
            "verify",
            "--scope",
            "G5_4_10",
            "--n-samples",
            "20",
            "--tol-membership",
            "1e-300"
        ]),
        1
    );
}

#[test]
fn verify_formats_share_the_trailer() {
    for format in ["text", "json", "csv"] {
        let out = md5fol(&[
            "verify",
            "--scope",
            "G5_4_5",
            "--n-samples",
            "20",
            "--seed",
            "9",
            "--format",
            format,
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("RESULT: PASS suites="), "{last}");
        if format == "json" {
            let body = &text[..text.rfind("RESULT:").unwrap()];
            let v: serde_json::Value = serde_json::from_str(body).unwrap();
            assert_eq!(v["scope"], "G5_4_5");
        }
    }
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--scope",
        "G5_4_11",
        "--n-samples",
        "50",
        "--seed",
        "5",
    ];
    let a = md5fol(&args).stdout;
    let b = md5fol(&args).stdout;
    assert_eq!(a, b);
    let c = md5fol(&[
        "verify",
        "--scope",
        "G5_4_11",
        "--n-samples",
        "50",
        "--seed",
        "6",
    ])
    .stdout;
    assert_ne!(a, c);
}
