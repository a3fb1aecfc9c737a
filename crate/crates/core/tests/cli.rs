use kdf_reductions::cli::run;
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hypred(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("hypred").chain(args.iter().copied()), &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(s: &str) -> Value {
    serde_json::from_str(s.trim()).unwrap()
}

#[test]
fn eval_empty_pfq_at_zero() {
    let o = hypred(&["eval", "--spec", r#"{"fn":"pfq","num":[],"den":[]}"#, "--x", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o.stdout)["value"], 1.0);
}

#[test]
fn eval_kdf_exact() {
    let spec = r#"{"fn":"kdf","coupled_num":["1"],"row_num":["1/3"],"col_num":["1/5"],
        "coupled_den":["2"],"row_den":["2/3"],"col_den":["2/5"]}"#;
    let o = hypred(&["eval", "--spec", spec, "--mode", "exact", "--order", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o.stdout)["coeffs"], serde_json::json!(["1", "1/2"]));
}

#[test]
fn eval_fn_flag_and_file_input() {
    let path = std::env::temp_dir().join(format!("hypred-spec-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"num":["1","1"],"den":["2"]}"#).unwrap();
    let o = hypred(&["eval", "--fn", "pfq", "--spec", path.to_str().unwrap(), "--x", "1/2"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o.stdout)["value"].as_f64().unwrap();
    assert!((v - 2.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn eval_zero_weight_names_parameter() {
    let spec = r#"{"fn":"sd","coupled_num":[{"value":"7/3","weights":[0,0]}]}"#;
    let o = hypred(&["eval", "--spec", spec]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("7/3"), "{}", o.stderr);
}

#[test]
fn eval_rejects_bad_input() {
    assert_eq!(hypred(&["eval", "--spec", "{not json"]).code, 2);
    assert_eq!(hypred(&["eval", "--spec", r#"{"fn":"pfq","num":[],"den":[]}"#, "--x", "0.5"]).code, 2);
    assert_eq!(hypred(&["eval", "--spec", r#"{"fn":"pfq","num":[],"den":["-1"]}"#, "--x", "1/4"]).code, 2);
    assert_eq!(hypred(&["frobnicate"]).code, 2);
}

#[test]
fn eval_no_convergence_exits_3() {
    let o = hypred(&["eval", "--spec", r#"{"fn":"pfq","num":["1"],"den":[]}"#, "--x", "1/2", "--max-terms", "5"]);
    assert_eq!(o.code, 3, "{}", o.stderr);
}

#[test]
fn list_registry() {
    let o = hypred(&["list"]);
    assert_eq!(o.code, 0);
    let entries = json(&o.stdout);
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 16);
    let links: usize = entries.iter().map(|e| e["links"].as_array().unwrap().len()).sum();
    assert_eq!(links, 24);
    for e in entries.iter().filter(|e| e["links"].as_array().unwrap().len() == 2) {
        assert_eq!(e["links"], serde_json::json!(["KDF=F3", "F3=SUM"]));
    }
}

#[test]
fn verify_examples() {
    let o = hypred(&["verify", "--id", "SC14", "--seed", "7", "--order", "10"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o.stdout)["status"], "PASS");

    assert_eq!(hypred(&["verify", "--id", "T9Z9", "--seed", "1"]).code, 2);

    let o = hypred(&["verify", "--id", "T3E10", "--seed", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn verify_params_and_readings() {
    let p = r#"{"d":"3/2","alpha":"1/3","beta":"2/5","m":1,"n":2}"#;
    assert_eq!(hypred(&["verify", "--id", "T1E4", "--params", p]).code, 0);
    let o = hypred(&["verify", "--id", "T1E4", "--params", p, "--reading", "quarter-argument"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o.stdout)["status"], "FAIL");
    assert_eq!(hypred(&["verify", "--id", "T1E4", "--params", p, "--mode", "float"]).code, 0);
    // e supplied where the case has none
    let with_e = r#"{"d":"3/2","e":"5/2","alpha":"1/3","beta":"2/5"}"#;
    assert_eq!(hypred(&["verify", "--id", "T1E4", "--params", with_e]).code, 2);
}

#[test]
fn verify_polar_is_skipped_with_exit_2() {
    let p = r#"{"d":"1","e":"3/2","alpha":"1/2","beta":"1/3","m":1,"n":0}"#;
    let o = hypred(&["verify", "--id", "T1E1", "--params", p]);
    assert_eq!(o.code, 2);
    assert_eq!(json(&o.stdout)["status"], "SKIPPED_POLAR");
}

#[test]
fn sweep_counts_and_files() {
    let dir = std::env::temp_dir();
    let csv = dir.join(format!("hypred-sweep-{}.csv", std::process::id()));
    let o = hypred(&["sweep", "--ids", "SC13,SC14,SC15,SC16", "--trials", "5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 20);
    for line in o.stdout.lines() {
        assert_eq!(json(line)["status"], "PASS");
    }
    let summary = std::fs::read_to_string(&csv).unwrap();
    std::fs::remove_file(&csv).unwrap();
    assert!(summary.starts_with("id,trials,pass,fail,skipped,max_order_checked"));
    assert_eq!(summary.lines().count(), 5);
    assert!(o.stderr.contains("20 reports"));
}

#[test]
fn sweep_beta_equals_alpha() {
    let o = hypred(&["sweep", "--ids", "T2E6", "--trials", "3", "--beta-equals-alpha"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    for line in o.stdout.lines() {
        let r = json(line);
        assert_eq!(r["params"]["alpha"], r["params"]["beta"]);
    }
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--ids", "T1E2,T2E7,T3E12", "--trials", "6", "--seed", "42"];
    let a = hypred(&args);
    let b = hypred(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let c = hypred(&["sweep", "--ids", "T1E2,T2E7,T3E12", "--trials", "6", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn bench_csv() {
    let o = hypred(&["bench", "--id", "T1E2", "--seed", "1", "--repeats", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    for col in ["terms", "median_ns", "rel_error"] {
        assert!(headers.iter().any(|h| h == col));
    }
    let err = headers.iter().position(|h| h == "rel_error").unwrap();
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r[err].parse::<f64>().unwrap() <= 1e-10);
    }

    let o = hypred(&["bench", "--id", "SC14", "--seed", "1", "--x", "0", "--repeats", "1"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().skip(1).all(|l| l.split(',').nth(2) == Some("1")));
}

#[test]
fn bench_rejects_bad_input() {
    assert_eq!(hypred(&["bench", "--id", "SC14", "--seed", "1", "--x", "3/4"]).code, 2);
    assert_eq!(hypred(&["bench", "--id", "SC14"]).code, 2);
}
