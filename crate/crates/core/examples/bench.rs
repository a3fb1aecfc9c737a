//! Terms and time for the direct double series against its reduction.

use kdf_reductions::bench::{bench_identity, write_csv, BenchConfig};
use kdf_reductions::verify::{sample_params, VerifyConfig};
use kdf_reductions::IdentityId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = BenchConfig::default();
    let mut rows = Vec::new();
    for id in [IdentityId::T1E2, IdentityId::SC14] {
        let p = sample_params(1, 0, id, &VerifyConfig::default())?;
        rows.extend(bench_identity(id, &p, &cfg)?);
    }
    write_csv(&rows, std::io::stdout())?;
    Ok(())
}
