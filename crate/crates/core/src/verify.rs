//! Exact and floating-point verification of the reduction formulas.
//!
//! Exact mode compares Taylor coefficients of both sides of every link as
//! rationals; there is no tolerance. Float mode evaluates both sides at a
//! point and compares relative difference. Sweeps draw parameters from a
//! seeded stream keyed by `(seed, identity, trial)`, so running trials in
//! parallel cannot change what is sampled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::reductions::{build_identity, build_identity_with, BuildOptions, Identity, IdentityId, Link, ReductionParams, SideKind};
use crate::series::{eval_float, term_coeff, CompensatedSum, EvalOptions, SeriesSpec};

/// Rejection budget of the sampler.
pub const MAX_SAMPLE_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub strict_e_gt_d: bool,
    pub beta_equals_alpha: bool,
    pub m_max: u32,
    pub n_max: u32,
    pub float_x: Rational,
    pub float_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            order: 12,
            trials: 20,
            seed: 1,
            strict_e_gt_d: false,
            beta_equals_alpha: false,
            m_max: 4,
            n_max: 4,
            float_x: Rational::one().halve().halve(),
            float_tol: 1e-10,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidParams(format!("order must be at least 2, got {}", self.order)));
        }
        if !(self.float_tol > 0.0) {
            return Err(Error::InvalidParams("float tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED_POLAR")]
    SkippedPolar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkOutcome {
    pub link: String,
    pub status: Status,
    /// Coefficients compared (exact) or points compared (float).
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    pub link: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Rational>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub id: IdentityId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub params: ReductionParams,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Rational>,
    pub links: Vec<LinkOutcome>,
    pub first_divergence: Option<Divergence>,
    /// Float spot check attached by sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float_check: Option<Box<VerifyReport>>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl VerifyReport {
    fn skeleton(id: IdentityId, p: &ReductionParams, mode: Mode) -> Self {
        VerifyReport {
            id,
            trial: None,
            params: p.clone(),
            mode,
            order: None,
            x: None,
            links: Vec::new(),
            first_divergence: None,
            float_check: None,
            status: Status::Pass,
            diagnostic: None,
        }
    }

    fn skipped(mut self, err: &Error) -> Self {
        self.status = Status::SkippedPolar;
        self.diagnostic = Some(err.to_string());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_seed(seed: u64, id: IdentityId, case_index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ id.equation() as u64) ^ case_index as u64)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from(rng.gen_range(-9i64..=9)) / Rational::from(rng.gen_range(1i64..=6))
}

/// Admissible when the prefactors are finite and no series anywhere in the
/// case has a nonpositive-integer denominator. The second condition is
/// stronger than pole-freedom up to a finite order; it also keeps the float
/// spot check, which sums past that order, away from poles.
fn admissible(id: IdentityId, p: &ReductionParams) -> bool {
    match build_identity(id, p) {
        Ok(case) => !case.all_series().any(SeriesSpec::has_polar_denominator),
        Err(_) => false,
    }
}

/// Deterministic non-polar parameters for trial `case_index` of `id`.
pub fn sample_params(seed: u64, case_index: usize, id: IdentityId, cfg: &VerifyConfig) -> Result<ReductionParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, id, case_index));
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let d = random_rational(&mut rng);
        let e = id.has_e().then(|| random_rational(&mut rng));
        let alpha = random_rational(&mut rng);
        let mut beta = random_rational(&mut rng);
        if cfg.beta_equals_alpha {
            beta = alpha.clone();
        }
        let (m, n) = if id.is_special_case() {
            (0, 0)
        } else {
            (rng.gen_range(0..=cfg.m_max), rng.gen_range(0..=cfg.n_max))
        };
        if d.is_zero() {
            continue;
        }
        if cfg.strict_e_gt_d {
            let ok = d > 0 && e.as_ref().is_none_or(|e| *e > d);
            if !ok {
                continue;
            }
        }
        let p = ReductionParams { d, e, alpha, beta, m, n };
        if admissible(id, &p) {
            return Ok(p);
        }
    }
    Err(Error::SamplerExhausted { id: id.to_string(), attempts: MAX_SAMPLE_ATTEMPTS })
}

fn compare_exact(report: &mut VerifyReport, link: Link, lhs: &[Rational], rhs: &[Rational]) {
    let diverge = lhs.iter().zip(rhs).position(|(a, b)| a != b);
    let status = if diverge.is_some() { Status::Fail } else { Status::Pass };
    report.links.push(LinkOutcome { link: link.to_string(), status, checked: lhs.len(), rel_diff: None });
    if let Some(t) = diverge {
        report.status = Status::Fail;
        if report.first_divergence.is_none() {
            report.first_divergence = Some(Divergence {
                link: link.to_string(),
                coefficient: Some(t),
                x: None,
                lhs: lhs[t].to_string(),
                rhs: rhs[t].to_string(),
            });
        }
    }
}

fn exact_report(case: &Identity, order: usize) -> VerifyReport {
    let mut report = VerifyReport::skeleton(case.id, &case.params, Mode::Exact);
    report.order = Some(order);
    let sides = [SideKind::Kdf, SideKind::F3, SideKind::Sum];
    let mut coeffs: Vec<Option<Vec<Rational>>> = vec![None; 3];
    for link in case.id.links() {
        for side in [link.0, link.1] {
            let slot = sides.iter().position(|&s| s == side).unwrap();
            if coeffs[slot].is_none() {
                match case.side_coeffs(side, order) {
                    Ok(c) => coeffs[slot] = Some(c),
                    Err(err) => return report.skipped(&err),
                }
            }
        }
        let get = |s: SideKind| coeffs[sides.iter().position(|&x| x == s).unwrap()].as_deref().unwrap();
        compare_exact(&mut report, link, get(link.0), get(link.1));
    }
    report
}

/// Exact coefficient-wise check of every link up to `x^order`.
pub fn verify_exact(id: IdentityId, p: &ReductionParams, order: usize) -> Result<VerifyReport> {
    verify_exact_with(id, p, order, &BuildOptions::default())
}

/// [`verify_exact`] on an alternative reading or a mutated case.
pub fn verify_exact_with(id: IdentityId, p: &ReductionParams, order: usize, opts: &BuildOptions) -> Result<VerifyReport> {
    match build_identity_with(id, p, opts) {
        Ok(case) => Ok(exact_report(&case, order)),
        Err(err) if err.is_polar() => {
            let mut report = VerifyReport::skeleton(id, p, Mode::Exact);
            report.order = Some(order);
            Ok(report.skipped(&err))
        }
        Err(err) => Err(err),
    }
}

/// Float value of one side; the sum side adds its terms with compensation.
pub fn side_value(case: &Identity, side: SideKind, x: f64, opts: &EvalOptions) -> Result<(f64, usize)> {
    match side {
        SideKind::Kdf => eval_float(&case.lhs, x, opts).map(|r| (r.value, r.terms)),
        SideKind::F3 => {
            let mid = case.mid.as_ref().expect("double-link case has a middle member");
            eval_float(mid, x, opts).map(|r| (r.value, r.terms))
        }
        SideKind::Sum => {
            let mut acc = CompensatedSum::default();
            let mut terms = 0;
            for t in &case.rhs.terms {
                let r = eval_float(&t.spec(), x, opts)?;
                acc.add(r.value);
                terms += r.terms;
            }
            Ok((acc.value(), terms))
        }
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 { 0.0 } else { (a - b).abs() / scale }
}

/// Float check of every link at `x`, passing iff each relative difference is at most `tol`.
pub fn verify_float(id: IdentityId, p: &ReductionParams, x: &Rational, tol: f64) -> Result<VerifyReport> {
    let mut report = VerifyReport::skeleton(id, p, Mode::Float);
    report.x = Some(x.clone());
    let case = match build_identity(id, p) {
        Ok(case) => case,
        Err(err) if err.is_polar() => return Ok(report.skipped(&err)),
        Err(err) => return Err(err),
    };
    if case.all_series().any(SeriesSpec::has_polar_denominator) {
        let err = Error::InvalidParams("a series denominator is a nonpositive integer".into());
        return Ok(report.skipped(&err));
    }
    let xf = x.to_f64()?;
    let opts = EvalOptions::default();
    for link in id.links() {
        let values = side_value(&case, link.0, xf, &opts).and_then(|l| Ok((l, side_value(&case, link.1, xf, &opts)?)));
        let ((l, _), (r, _)) = match values {
            Ok(v) => v,
            Err(err @ Error::InvalidSpec(_)) => return Err(err),
            Err(err) => {
                report.status = Status::Fail;
                report.links.push(LinkOutcome { link: link.to_string(), status: Status::Fail, checked: 0, rel_diff: None });
                report.diagnostic = Some(err.to_string());
                return Ok(report);
            }
        };
        let diff = rel_diff(l, r);
        let status = if diff <= tol { Status::Pass } else { Status::Fail };
        report.links.push(LinkOutcome { link: link.to_string(), status, checked: 1, rel_diff: Some(diff) });
        if status == Status::Fail {
            report.status = Status::Fail;
            if report.first_divergence.is_none() {
                report.first_divergence = Some(Divergence {
                    link: link.to_string(),
                    coefficient: None,
                    x: Some(x.clone()),
                    lhs: format!("{l:e}"),
                    rhs: format!("{r:e}"),
                });
            }
        }
    }
    Ok(report)
}

fn sweep_one(id: IdentityId, trial: usize, cfg: &VerifyConfig) -> VerifyReport {
    let p = match sample_params(cfg.seed, trial, id, cfg) {
        Ok(p) => p,
        Err(err) => {
            let placeholder = ReductionParams {
                d: Rational::zero(),
                e: None,
                alpha: Rational::zero(),
                beta: Rational::zero(),
                m: 0,
                n: 0,
            };
            let mut r = VerifyReport::skeleton(id, &placeholder, Mode::Exact).skipped(&err);
            r.trial = Some(trial);
            return r;
        }
    };
    let mut report = verify_exact(id, &p, cfg.order).expect("sampled parameters match the identity's shape");
    report.trial = Some(trial);
    if report.status == Status::Pass {
        match verify_float(id, &p, &cfg.float_x, cfg.float_tol) {
            Ok(f) => {
                if f.status != Status::Pass {
                    report.status = Status::Fail;
                }
                report.float_check = Some(Box::new(f));
            }
            Err(err) => {
                report.status = Status::Fail;
                report.diagnostic = Some(format!("float check: {err}"));
            }
        }
    }
    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub id: String,
    pub trials: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub max_order_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub reports: Vec<VerifyReport>,
    pub summary: Vec<SummaryRow>,
}

impl SweepOutcome {
    pub fn totals(&self) -> SummaryRow {
        let mut t = SummaryRow { id: "ALL".into(), ..Default::default() };
        for row in &self.summary {
            t.trials += row.trials;
            t.pass += row.pass;
            t.fail += row.fail;
            t.skipped += row.skipped;
            t.max_order_checked = t.max_order_checked.max(row.max_order_checked);
        }
        t
    }

    pub fn write_jsonl<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.reports {
            writeln!(w, "{}", r.to_json_line())?;
        }
        Ok(())
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.summary {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `cfg.trials` sampled exact checks per id, each with a float spot check.
/// Reports come back ordered by (id, trial).
pub fn verify_sweep(ids: &[IdentityId], cfg: &VerifyConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let jobs: Vec<(IdentityId, usize)> =
        ids.iter().flat_map(|&id| (0..cfg.trials).map(move |t| (id, t))).collect();
    let reports: Vec<VerifyReport> = jobs.par_iter().map(|&(id, t)| sweep_one(id, t, cfg)).collect();
    let summary = ids
        .iter()
        .map(|&id| {
            let mut row = SummaryRow { id: id.to_string(), ..Default::default() };
            for r in reports.iter().filter(|r| r.id == id) {
                row.trials += 1;
                match r.status {
                    Status::Pass => row.pass += 1,
                    Status::Fail => row.fail += 1,
                    Status::SkippedPolar => row.skipped += 1,
                }
                if r.status != Status::SkippedPolar {
                    row.max_order_checked = row.max_order_checked.max(r.order.unwrap_or(0));
                }
            }
            row
        })
        .collect();
    Ok(SweepOutcome { reports, summary })
}

/// Coefficient of `x^t` by brute force over a box of multi-indices, using
/// from-scratch term evaluation. Independent of the running-ratio walker
/// behind [`crate::series::taylor_coeffs`].
pub fn brute_coefficient(spec: &SeriesSpec, t: usize) -> Result<Rational> {
    let n = spec.indices();
    let mut total = Rational::zero();
    let mut k = vec![0usize; n];
    loop {
        let active_ok = spec.args().iter().zip(&k).all(|(a, &ki)| ki == 0 || !a.coeff.is_zero());
        if active_ok && spec.degree_of(&k) == t {
            total += &term_coeff(spec, &k)?.0;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            k[i] += 1;
            if k[i] <= t {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// Brute-force coefficient of `x^t` on one side of a case.
pub fn brute_side_coefficient(case: &Identity, side: SideKind, t: usize) -> Result<Rational> {
    match side {
        SideKind::Kdf => brute_coefficient(&case.lhs, t),
        SideKind::F3 => brute_coefficient(case.mid.as_ref().expect("double-link case"), t),
        SideKind::Sum => case.rhs.terms.iter().map(|term| brute_coefficient(&term.spec(), t)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{Factor, Mutation};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn sc13_passes_with_nine_coefficients() {
        let p = ReductionParams { d: q("1"), e: Some(q("3/2")), alpha: q("1/3"), beta: q("1/5"), m: 0, n: 0 };
        let r = verify_exact(IdentityId::SC13, &p, 8).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.links[0].checked, 9);
    }

    #[test]
    fn sampler_is_deterministic_and_strict() {
        let cfg = VerifyConfig { strict_e_gt_d: true, ..Default::default() };
        for id in [IdentityId::T1E1, IdentityId::T3E11, IdentityId::SC14] {
            for t in 0..10 {
                let a = sample_params(5, t, id, &cfg).unwrap();
                assert_eq!(a, sample_params(5, t, id, &cfg).unwrap());
                assert!(a.d > 0);
                if let Some(e) = &a.e {
                    assert!(*e > a.d);
                }
                assert!(build_identity(id, &a).is_ok());
            }
        }
    }

    #[test]
    fn zero_trials_is_vacuous() {
        let cfg = VerifyConfig { trials: 0, ..Default::default() };
        let out = verify_sweep(&IdentityId::ALL, &cfg).unwrap();
        assert!(out.reports.is_empty());
        assert_eq!(out.totals().pass + out.totals().fail + out.totals().skipped, 0);
    }

    #[test]
    fn polar_parameters_are_skipped() {
        let p = ReductionParams { d: q("1"), e: Some(q("2")), alpha: q("1/2"), beta: q("1/5"), m: 1, n: 0 };
        let r = verify_exact(IdentityId::T1E1, &p, 6).unwrap();
        assert_eq!(r.status, Status::SkippedPolar);
        let p = ReductionParams { d: q("1"), e: Some(q("-1")), alpha: q("1/3"), beta: q("1/5"), m: 0, n: 0 };
        assert_eq!(verify_exact(IdentityId::SC13, &p, 6).unwrap().status, Status::SkippedPolar);
        assert_eq!(verify_float(IdentityId::SC13, &p, &q("1/4"), 1e-10).unwrap().status, Status::SkippedPolar);
    }

    #[test]
    fn float_at_zero_is_trivial() {
        let p = ReductionParams { d: q("2/3"), e: None, alpha: q("1/3"), beta: q("-7/5"), m: 2, n: 1 };
        let r = verify_float(IdentityId::T2E8, &p, &q("0"), 1e-15).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.links.iter().all(|l| l.rel_diff == Some(0.0)));
    }

    #[test]
    fn divergence_reproduces_by_brute_force() {
        let p = ReductionParams { d: q("3/2"), e: Some(q("7/3")), alpha: q("1/3"), beta: q("-1/5"), m: 1, n: 1 };
        let opts = BuildOptions { mutation: Some(Mutation::DropFactor(Factor::AlphaHalf)), ..Default::default() };
        let r = verify_exact_with(IdentityId::T1E1, &p, 5, &opts).unwrap();
        assert_eq!(r.status, Status::Fail);
        let div = r.first_divergence.unwrap();
        let t = div.coefficient.unwrap();
        let case = build_identity_with(IdentityId::T1E1, &p, &opts).unwrap();
        assert_eq!(brute_side_coefficient(&case, SideKind::Kdf, t).unwrap().to_string(), div.lhs);
        assert_eq!(brute_side_coefficient(&case, SideKind::Sum, t).unwrap().to_string(), div.rhs);
    }
}
