//! Sweep the whole identity registry with sampled parameters.
//!
//! ```text
//! cargo run --release --example sweep -- [trials] [seed]
//! ```

use kdf_reductions::reductions::IdentityId;
use kdf_reductions::verify::{verify_sweep, Status, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let cfg = VerifyConfig { trials, seed, ..Default::default() };

    let out = verify_sweep(&IdentityId::ALL, &cfg)?;
    for row in &out.summary {
        println!("{:6} pass {:3}  fail {:3}  skipped {:3}", row.id, row.pass, row.fail, row.skipped);
    }
    for r in out.reports.iter().filter(|r| r.status == Status::Fail) {
        println!("{}", r.to_json_line());
    }
    let t = out.totals();
    println!("total: {} reports, {} pass, {} fail, {} skipped", t.trials, t.pass, t.fail, t.skipped);
    Ok(())
}
