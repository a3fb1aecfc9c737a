//! Generalized hypergeometric pFq: exact Taylor coefficients and float values.
//!
//! `2F1(1,1;2;x) = -ln(1-x)/x`, so at x = 1/2 the value is `2 ln 2`.

use kdf_reductions::{eval_float, make_pfq, rat, taylor_coeffs, ArgMonomial, EvalOptions};

fn main() -> kdf_reductions::Result<()> {
    let one = rat(1, 1)?;
    let spec = make_pfq(&[one.clone(), one], &[rat(2, 1)?], ArgMonomial::x());

    let coeffs = taylor_coeffs(&spec, 6)?;
    let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    println!("coefficients: {}", shown.join(", "));

    let r = eval_float(&spec, 0.5, &EvalOptions::default())?;
    println!("value {:.16}  (2 ln 2 = {:.16})", r.value, 2.0 * 2f64.ln());
    println!("terms {}  est_error {:e}", r.terms, r.est_error);

    // the same series from JSON, as the CLI reads it
    let json = r#"{"fn":"pfq","num":["1","1"],"den":["2"]}"#;
    let from_json: kdf_reductions::FunctionSpec = serde_json::from_str(json).expect("valid JSON");
    assert_eq!(from_json.build()?, spec);
    Ok(())
}
