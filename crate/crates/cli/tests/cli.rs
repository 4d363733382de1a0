use std::path::PathBuf;
use std::process::{Command, Output};

use curvsieve::expr::{parse_expr, Expr, Symbol};
use curvsieve_core::ratpoly::Rational;
use proptest::prelude::*;

fn curvsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvsieve"))
        .args(args)
        .env_remove("CURVSIEVE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curvsieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn certify_row_one_exits_zero() {
    let o = curvsieve(&["certify", "--velocity", "Q", "--quantity", "H*(2*Q-H^2)/(H^2-Q)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verdict: certified-monotone"));
    assert!(out.contains("reaction: (-4*l1^2*l2^2)/(1*l1 + 1*l2)"));
}

#[test]
fn constants_for_cubed_mean_curvature() {
    let o = curvsieve(&[
        "constants",
        "--velocity",
        "H^3",
        "--quantity",
        "(l1^2+l1*l2+l2^2)*H^2*(l1-l2)^2/((l1^2-l1*l2+l2^2)*K)",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("(c_h, c_1, c_d, exponent) = (3, 8, 0, 1/4)"), "{}", stdout(&o));
}

#[test]
fn refuted_pair_exits_one_with_witness() {
    let path = scratch("refuted.json");
    let o = curvsieve(&[
        "certify",
        "--velocity",
        "B(3)",
        "--quantity",
        "H^2*(l1-l2)^2/K",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: refuted:"), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["verdict"]["status"], "refuted");
}

#[test]
fn syntax_error_reports_position() {
    let o = curvsieve(&["certify", "--velocity", "l1 + ", "--quantity", "K"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 5"), "{}", stderr(&o));
}

#[test]
fn unknown_symbol_and_asymmetric_velocity_are_input_errors() {
    let o = curvsieve(&["certify", "--velocity", "Q", "--quantity", "x*K"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown symbol 'x'"), "{}", stderr(&o));
    let o = curvsieve(&["certify", "--velocity", "l1^2*l2", "--quantity", "K"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_flag_is_usage_error() {
    assert_eq!(curvsieve(&["certify", "--velocity", "Q"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_curvsieve"))
        .args(["sieve", "--velocity", "Q", "--max-num-degree", "2", "--max-den-degree", "0"])
        .env("CURVSIEVE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sieve_writes_report_and_table() {
    let path = scratch("sieve.json");
    let o = curvsieve(&["sieve", "--velocity", "Q", "--samples", "200", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("candidate"));
    assert!(out.contains("(1*l1^3 - 1*l1^2*l2 - 1*l1*l2^2 + 1*l2^3)/(1*l1*l2)"));
    let reports: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(reports.iter().any(|r| r["survivor"] == true));
}

#[test]
fn flow_writes_csv_and_sidecar() {
    let path = scratch("sphere.csv");
    let o = curvsieve(&[
        "flow",
        "--velocity",
        "Q",
        "--init",
        "sphere:1",
        "--grid",
        "16",
        "--stop-radius",
        "0.5",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,max_w,min_lambda,max_lambda,pinch_ratio,inner_radius,outer_radius,max_F"));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["grid"], 16);
    assert_eq!(meta["seed"], 7);
    assert!(meta["recentering"].is_string());
}

#[test]
fn rescaled_rejects_other_velocities() {
    let o = curvsieve(&["rescaled", "--velocity", "H^2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = curvsieve(&["rescaled", "--init", "perturbed:1,3,0.001"]);
    assert_eq!(o.status.code(), Some(2));
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20, 1i64..4).prop_map(|(n, d)| Expr::Num(Rational::new(n.into(), d.into()))),
        prop::sample::select(vec![
            Symbol::L1,
            Symbol::L2,
            Symbol::H,
            Symbol::Q,
            Symbol::K,
            Symbol::B(3),
        ])
        .prop_map(Expr::Sym),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, -2i32..=3).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

proptest! {
    #[test]
    fn printed_expressions_parse_back(e in expr()) {
        let text = e.to_string();
        let parsed = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(parsed.elaborate(), e.elaborate());
    }
}
