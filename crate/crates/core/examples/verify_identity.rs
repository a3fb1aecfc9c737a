//! Check one reduction formula exactly and in floating point.
//!
//! ```text
//! cargo run --example verify_identity -- T2E6
//! ```

use kdf_reductions::verify::{sample_params, verify_exact, verify_float, VerifyConfig};
use kdf_reductions::{rat, IdentityId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id: IdentityId = std::env::args().nth(1).unwrap_or_else(|| "T1E2".into()).parse()?;
    let p = sample_params(1, 0, id, &VerifyConfig::default())?;
    println!("{id} with {}", serde_json::to_string(&p)?);

    let exact = verify_exact(id, &p, 12)?;
    for l in &exact.links {
        println!("  {} {:?} ({} coefficients)", l.link, l.status, l.checked);
    }
    let float = verify_float(id, &p, &rat(1, 4)?, 1e-10)?;
    println!("  float at x = 1/4: {:?}", float.status);
    for l in &float.links {
        println!("  {} rel diff {:e}", l.link, l.rel_diff.unwrap_or(0.0));
    }
    Ok(())
}
