//! Timing of direct versus reduced summation.
//!
//! For each side of a case (the double series, the triple series when
//! present, and the finite sum of simpler series) this records how many
//! terms the float evaluator needed, the median wall time over repeats,
//! and the agreement with an exact partial sum of the Taylor series.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::rational::Rational;
use crate::reductions::{build_identity, IdentityId, ReductionParams, SideKind};
use crate::series::{taylor_coeffs, EvalOptions};
use crate::verify::{rel_diff, side_value};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub x: Rational,
    pub tol: f64,
    pub repeats: usize,
    /// Order of the exact partial sum used as the reference value.
    pub oracle_order: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { x: Rational::one().halve().halve(), tol: 1e-13, repeats: 5, oracle_order: 60 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub id: IdentityId,
    pub side: &'static str,
    pub terms: usize,
    pub repeats: usize,
    pub median_ns: u128,
    pub value: f64,
    pub oracle: f64,
    pub rel_error: f64,
}

/// Exact partial sum `sum_{t <= order} c_t x^t` of the left side, as a double.
pub fn oracle_value(id: IdentityId, p: &ReductionParams, x: &Rational, order: usize) -> Result<f64> {
    let case = build_identity(id, p)?;
    let coeffs = taylor_coeffs(&case.lhs, order)?;
    // Horner in exact arithmetic
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc.to_f64()
}

pub fn bench_identity(id: IdentityId, p: &ReductionParams, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let case = build_identity(id, p)?;
    let oracle = oracle_value(id, p, &cfg.x, cfg.oracle_order)?;
    let x = cfg.x.to_f64()?;
    let opts = EvalOptions { rel_tol: cfg.tol, ..EvalOptions::default() };
    let mut sides = vec![SideKind::Kdf];
    if case.mid.is_some() {
        sides.push(SideKind::F3);
    }
    sides.push(SideKind::Sum);

    let repeats = cfg.repeats.max(1);
    let mut rows = Vec::new();
    for side in sides {
        let mut times = Vec::with_capacity(repeats);
        let mut result = (0.0, 0);
        for _ in 0..repeats {
            let start = Instant::now();
            result = side_value(&case, side, x, &opts)?;
            times.push(start.elapsed().as_nanos());
        }
        times.sort_unstable();
        let (value, terms) = result;
        rows.push(BenchRow {
            id,
            side: side.as_str(),
            terms,
            repeats,
            median_ns: times[times.len() / 2],
            value,
            oracle,
            rel_error: rel_diff(value, oracle),
        });
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ReductionParams {
        ReductionParams {
            d: "3/2".parse().unwrap(),
            e: Some("5/2".parse().unwrap()),
            alpha: "1/3".parse().unwrap(),
            beta: "2/5".parse().unwrap(),
            m: 0,
            n: 0,
        }
    }

    #[test]
    fn bench_at_zero_uses_one_term_per_side() {
        let cfg = BenchConfig { x: Rational::zero(), repeats: 1, ..Default::default() };
        let rows = bench_identity(IdentityId::T1E2, &params(), &cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.terms == 1 && r.value == 1.0 && r.rel_error == 0.0));
    }

    #[test]
    fn term_counts_do_not_depend_on_repeats() {
        let one = BenchConfig { repeats: 1, ..Default::default() };
        let nine = BenchConfig { repeats: 9, ..Default::default() };
        let a = bench_identity(IdentityId::SC14, &params(), &one).unwrap();
        let b = bench_identity(IdentityId::SC14, &params(), &nine).unwrap();
        let terms = |rows: &[BenchRow]| rows.iter().map(|r| r.terms).collect::<Vec<_>>();
        assert_eq!(terms(&a), terms(&b));
        assert!(a.iter().all(|r| r.rel_error <= 1e-10), "{a:?}");
    }
}
