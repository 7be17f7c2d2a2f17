//! End-to-end tests of the binary: byte-stable output, documented exit
//! codes, and format round trips.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binomial-moments"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn derive_examples() {
    assert_eq!(
        stdout(&["derive", "--kind", "central", "--d", "4", "--basis", "variance"]),
        "3*n^2*s2^2 + n*(-6*s2^2 + s2)\n"
    );
    assert_eq!(stdout(&["derive", "--kind", "raw", "--d", "2"]), "n*p + n*(n-1)*p^2\n");
    assert_eq!(
        stdout(&["derive", "--kind", "central", "--d", "2", "--basis", "p"]),
        "n*p*(1-p)\n"
    );
    assert_eq!(stdout(&["derive", "--kind", "factorial", "--d", "3"]), "n*(n-1)*(n-2)*p^3\n");
}

#[test]
fn derive_is_deterministic() {
    let args = ["derive", "--kind", "central", "--d", "8", "--basis", "variance"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn derive_methods_agree() {
    let base = stdout(&["derive", "--kind", "central", "--d", "7", "--basis", "variance"]);
    for method in ["direct", "fast", "alg1", "alg2"] {
        assert_eq!(
            stdout(&[
                "derive", "--kind", "central", "--d", "7", "--basis", "variance", "--method",
                method
            ]),
            base,
            "method {method}"
        );
    }
}

#[test]
fn eval_examples() {
    assert_eq!(
        stdout(&["eval", "--kind", "central", "--d", "4", "--n", "2", "--p", "1/2"]),
        "exact: 1/2\napprox: 0.500000000000000\n"
    );
    assert_eq!(
        stdout(&["eval", "--kind", "central", "--d", "3", "--n", "9", "--p", "1/2"]),
        "exact: 0\napprox: 0\n"
    );
    let out = run(&["eval", "--kind", "raw", "--d", "1", "--n", "10", "--p", "0.3"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "exact: 3\napprox: 3.00000000000000\n"
    );
    // decimal p is converted exactly, with a note on stderr
    assert!(String::from_utf8_lossy(&out.stderr).contains("3/10"));
}

#[test]
fn eval_json_shape() {
    let out = stdout(&[
        "eval", "--kind", "central", "--d", "4", "--n", "2", "--p", "1/2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], "1/2");
    assert_eq!(v["n"], 2);
    assert_eq!(v["kind"], "central");
}

#[test]
fn formula_json_round_trips() {
    use binomial_moments::moments::FormulaJson;
    for args in [
        ["derive", "--kind", "central", "--d", "6", "--basis", "variance", "--format", "json"],
        ["derive", "--kind", "central", "--d", "7", "--basis", "variance", "--format", "json"],
    ] {
        let line = stdout(&args);
        let parsed: FormulaJson = serde_json::from_str(line.trim_end()).unwrap();
        let doc = parsed.into_doc().unwrap();
        assert_eq!(format!("{}\n", doc.to_json_string()), line);
    }
}

#[test]
fn latex_output() {
    assert_eq!(
        stdout(&[
            "derive", "--kind", "central", "--d", "6", "--basis", "variance", "--format", "latex",
        ]),
        "15 n^{3} \\sigma^{6} + n^{2} \\left(- 130 \\sigma^{6} + 25 \\sigma^{4}\\right) \
         + n \\left(120 \\sigma^{6} - 30 \\sigma^{4} + \\sigma^{2}\\right)\n"
    );
    assert_eq!(
        stdout(&["table", "--kind", "raw", "--from", "2", "--to", "2", "--format", "latex"]),
        "2 & 2 p^{2} \\binom{n}{2} + p \\binom{n}{1} \\\\\n"
    );
}

#[test]
fn table_variants() {
    assert_eq!(
        stdout(&["table", "--kind", "central", "--from", "2", "--to", "2", "--basis", "p"]),
        "2\tn*p*(1-p)\n"
    );
    assert_eq!(
        stdout(&["table", "--kind", "factorial", "--from", "2", "--to", "3"]),
        "2\tn*(n-1)*p^2\n3\tn*(n-1)*(n-2)*p^3\n"
    );
    assert_eq!(
        stdout(&["table", "--kind", "raw", "--from", "2", "--to", "2", "--format", "csv"]),
        "d,formula\n2,\"2*p^2*binom(n,2) + p*binom(n,1)\"\n"
    );
}

#[test]
fn figure_data_odd_order() {
    let out = stdout(&[
        "figure-data", "--d", "3", "--from", "4", "--to", "4", "--p-steps", "2",
    ]);
    // odd central moments vanish at p = 1/2
    assert_eq!(out, "n,p,value\n4,0,0\n4,0.500000000000000,0\n4,1.00000000000000,0\n");
}

#[test]
fn table_single_row_json() {
    let out = stdout(&[
        "table", "--kind", "central", "--from", "2", "--to", "2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["d"], 2);
    assert_eq!(v["basis"], "variance");
}

#[test]
fn figure_data_spot_values() {
    let out = stdout(&[
        "figure-data", "--d", "6", "--from", "0", "--to", "1", "--p-steps", "4", "--exact",
    ]);
    assert!(!out.contains('\r'), "LF endings only");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,p,value,exact");
    assert_eq!(lines.len(), 1 + 2 * 5);
    // n = 0 rows are all zero
    for line in &lines[1..6] {
        assert!(line.starts_with('0'));
        assert!(line.ends_with(",0,0"), "{line}");
    }
    // n=1, p=1/2, d=6: the Bernoulli moment 2 (1/2)^7 = 1/64
    let row = lines
        .iter()
        .find(|l| l.starts_with("1,0.500"))
        .expect("p=1/2 row");
    assert!(row.ends_with(",1/64"), "{row}");
    // p = 0 column is zero
    assert!(lines[6].ends_with(",0,0"), "{}", lines[6]);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("binomial-moments-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("formula.txt");
    let args = [
        "derive".to_string(),
        "--kind".into(),
        "central".into(),
        "--d".into(),
        "2".into(),
        "--basis".into(),
        "variance".into(),
        "--out".into(),
        path.display().to_string(),
    ];
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(exit_code(&args), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n*s2\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    // variance basis with raw kind
    assert_eq!(
        exit_code(&["derive", "--kind", "raw", "--d", "2", "--basis", "variance"]),
        2
    );
    // probability outside [0,1]
    assert_eq!(
        exit_code(&["eval", "--kind", "raw", "--d", "2", "--n", "3", "--p", "7/2"]),
        2
    );
    // malformed probability
    assert_eq!(
        exit_code(&["eval", "--kind", "raw", "--d", "2", "--n", "3", "--p", "abc"]),
        2
    );
    // unknown subcommand / flag handled by the parser
    assert_eq!(exit_code(&["frobnicate"]), 2);
    assert_eq!(exit_code(&["derive", "--kind", "raw"]), 2);
    // csv is not a derive format
    assert_eq!(
        exit_code(&["derive", "--kind", "raw", "--d", "2", "--format", "csv"]),
        2
    );
    // direct route too large without --method fast
    assert_eq!(
        exit_code(&["derive", "--kind", "central", "--d", "40", "--basis", "variance"]),
        2
    );
    // method restrictions
    assert_eq!(
        exit_code(&["derive", "--kind", "raw", "--d", "2", "--method", "fast"]),
        2
    );
}

#[test]
fn large_order_goes_through_fast() {
    let out = stdout(&[
        "derive", "--kind", "central", "--d", "40", "--basis", "variance", "--method", "fast",
    ]);
    assert!(out.starts_with("319830986772877770815625*n^20*s2^20"), "{out}");
}

#[test]
fn check_exit_codes_and_shape() {
    let out = run(&["check", "--suite", "algs", "--dmax", "6"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "algs");
    // csv only makes sense for the bounds suite
    assert_eq!(exit_code(&["check", "--suite", "algs", "--format", "csv"]), 2);
    let csv = stdout(&[
        "check", "--suite", "bounds", "--dmax", "4", "--nmax", "4", "--format", "csv",
    ]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,p,d,moment,upper_bound,best_lower,best_lower_k,moment_root,envelope,ratio,upper_holds,lower_holds"
    );
    assert!(csv.lines().count() > 1);
}
