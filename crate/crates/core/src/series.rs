//! Multi-index hypergeometric series in one formal variable.
//!
//! A [`SeriesSpec`] represents
//!
//! ```text
//! c0 x^g0 * sum_{k in N^n} prod_num (a)_{w.k} / prod_den (b)_{w.k}
//!                          * prod_i (c_i x^{g_i})^{k_i} / k_i!
//! ```
//!
//! which covers pFq, Kampe de Feriet, Srivastava-Daoust and the triple
//! series F(3) once their arguments are monomials in `x`. Terms are
//! enumerated in blocks of equal x-degree; inside a block the multi-indices
//! come in graded-lex order (first index largest first). Each term is
//! obtained from a lower-degree neighbour by a Pochhammer ratio, so the
//! exact and floating-point paths share one walker.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, pochhammer, Rational};

/// Largest supported number of summation indices.
pub const MAX_INDICES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedParam {
    pub value: Rational,
    pub weights: Vec<u32>,
}

impl WeightedParam {
    pub fn new(value: Rational, weights: Vec<u32>) -> Self {
        WeightedParam { value, weights }
    }

    /// Pochhammer lag `w . k` at a multi-index.
    pub fn lag(&self, k: &[usize]) -> usize {
        self.weights.iter().zip(k).map(|(&w, &ki)| w as usize * ki).sum()
    }

    /// Smallest lag at which `(value)_lag` is zero, if any.
    pub fn vanishing_lag(&self) -> Option<usize> {
        self.value.nonpositive_integer().map(|v| (1 - v) as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgMonomial {
    pub coeff: Rational,
    pub degree: u32,
}

impl Default for ArgMonomial {
    fn default() -> Self {
        ArgMonomial::x()
    }
}

impl ArgMonomial {
    pub fn new(coeff: Rational, degree: u32) -> Self {
        ArgMonomial { coeff, degree }
    }

    /// The argument `x`.
    pub fn x() -> Self {
        ArgMonomial::new(Rational::one(), 1)
    }

    pub fn zero() -> Self {
        ArgMonomial::new(Rational::zero(), 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefactor {
    pub coeff: Rational,
    pub degree: u32,
}

impl Default for Prefactor {
    fn default() -> Self {
        Prefactor { coeff: Rational::one(), degree: 0 }
    }
}

#[derive(Deserialize)]
struct RawSpec {
    indices: usize,
    #[serde(default)]
    num: Vec<WeightedParam>,
    #[serde(default)]
    den: Vec<WeightedParam>,
    args: Vec<ArgMonomial>,
    #[serde(default)]
    prefactor: Prefactor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct SeriesSpec {
    indices: usize,
    num: Vec<WeightedParam>,
    den: Vec<WeightedParam>,
    args: Vec<ArgMonomial>,
    prefactor: Prefactor,
}

impl TryFrom<RawSpec> for SeriesSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        SeriesSpec::new(raw.indices, raw.num, raw.den, raw.args)
            .map(|s| s.with_prefactor(raw.prefactor.coeff, raw.prefactor.degree))
    }
}

impl SeriesSpec {
    pub fn new(
        indices: usize,
        num: Vec<WeightedParam>,
        den: Vec<WeightedParam>,
        args: Vec<ArgMonomial>,
    ) -> Result<Self> {
        if indices == 0 || indices > MAX_INDICES {
            return Err(Error::InvalidSpec(format!(
                "index count must be 1..={MAX_INDICES}, got {indices}"
            )));
        }
        if args.len() != indices {
            return Err(Error::InvalidSpec(format!(
                "expected {indices} arguments, got {}",
                args.len()
            )));
        }
        for (group, params) in [("num", &num), ("den", &den)] {
            for (i, p) in params.iter().enumerate() {
                if p.weights.len() != indices {
                    return Err(Error::InvalidSpec(format!(
                        "{group}[{i}] (value {}) has {} weights, expected {indices}",
                        p.value,
                        p.weights.len()
                    )));
                }
                if p.weights.iter().all(|&w| w == 0) {
                    return Err(Error::InvalidSpec(format!(
                        "{group}[{i}] (value {}) has all-zero weights",
                        p.value
                    )));
                }
            }
        }
        for (index, a) in args.iter().enumerate() {
            if a.degree == 0 && !a.coeff.is_zero() {
                return Err(Error::DegreeZeroArgument { index });
            }
        }
        Ok(SeriesSpec { indices, num, den, args, prefactor: Prefactor::default() })
    }

    pub fn with_prefactor(mut self, coeff: Rational, degree: u32) -> Self {
        self.prefactor = Prefactor { coeff, degree };
        self
    }

    pub fn indices(&self) -> usize {
        self.indices
    }

    pub fn num(&self) -> &[WeightedParam] {
        &self.num
    }

    pub fn den(&self) -> &[WeightedParam] {
        &self.den
    }

    pub fn args(&self) -> &[ArgMonomial] {
        &self.args
    }

    pub fn prefactor(&self) -> &Prefactor {
        &self.prefactor
    }

    /// x-degree of the term at `k`, prefactor included.
    pub fn degree_of(&self, k: &[usize]) -> usize {
        self.prefactor.degree as usize
            + self.args.iter().zip(k).map(|(a, &ki)| a.degree as usize * ki).sum::<usize>()
    }

    /// True when some denominator value is a nonpositive integer, i.e. the
    /// untruncated series has a pole somewhere.
    pub fn has_polar_denominator(&self) -> bool {
        self.den.iter().any(|p| p.vanishing_lag().is_some())
    }

    /// Indices whose argument is nonzero, with their degree. Zero arguments
    /// pin their index to 0.
    fn active(&self) -> Vec<(usize, usize)> {
        self.args
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.coeff.is_zero())
            .map(|(i, a)| (i, a.degree as usize))
            .collect()
    }

    fn pole_at(&self, k: &[usize]) -> Option<usize> {
        self.den
            .iter()
            .position(|p| matches!(p.vanishing_lag(), Some(l) if p.lag(k) >= l))
    }
}

/// Denominators that vanish inside a truncation region.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReport {
    pub offending: Vec<PoleHit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleHit {
    /// Position in the denominator list.
    pub position: usize,
    pub param: WeightedParam,
    /// First multi-index, in enumeration order, where the Pochhammer vanishes.
    pub index: Vec<usize>,
}

impl PoleReport {
    pub fn is_empty(&self) -> bool {
        self.offending.is_empty()
    }
}

impl fmt::Display for PoleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, hit) in self.offending.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "den[{}] = {} with weights {:?} at {:?}",
                hit.position, hit.param.value, hit.param.weights, hit.index
            )?;
        }
        Ok(())
    }
}

/// Multi-indices whose argument-degree sum is exactly `s`, first index largest first.
fn block_indices(n: usize, active: &[(usize, usize)], s: usize) -> Vec<Vec<usize>> {
    fn rec(
        active: &[(usize, usize)],
        remaining: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        match active.split_first() {
            None => {
                if remaining == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&(i, deg), rest)) => {
                for ki in (0..=remaining / deg).rev() {
                    cur[i] = ki;
                    rec(rest, remaining - ki * deg, cur, out);
                }
                cur[i] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(active, s, &mut vec![0; n], &mut out);
    out
}

pub fn pole_check(spec: &SeriesSpec, order: usize) -> PoleReport {
    let mut report = PoleReport::default();
    let Some(budget) = order.checked_sub(spec.prefactor.degree as usize) else {
        return report;
    };
    let active = spec.active();
    for (position, p) in spec.den.iter().enumerate() {
        let Some(limit) = p.vanishing_lag() else { continue };
        let hit = (0..=budget)
            .flat_map(|s| block_indices(spec.indices, &active, s))
            .find(|k| p.lag(k) >= limit);
        if let Some(index) = hit {
            report.offending.push(PoleHit { position, param: p.clone(), index });
        }
    }
    report
}

/// Coefficient and x-degree of the term at multi-index `k`, computed from
/// scratch with full Pochhammer products.
pub fn term_coeff(spec: &SeriesSpec, k: &[usize]) -> Result<(Rational, usize)> {
    if k.len() != spec.indices {
        return Err(Error::InvalidSpec(format!(
            "multi-index {k:?} has wrong length for a {}-index series",
            spec.indices
        )));
    }
    if let Some(pos) = spec.pole_at(k) {
        return Err(Error::PoleAtIndex { param: format!("den[{pos}] = {}", spec.den[pos].value), index: k.to_vec() });
    }
    let mut c = spec.prefactor.coeff.clone();
    for p in &spec.num {
        c *= &pochhammer(&p.value, p.lag(k));
    }
    for p in &spec.den {
        c = c / pochhammer(&p.value, p.lag(k));
    }
    for (a, &ki) in spec.args.iter().zip(k) {
        c = c * a.coeff.pow(ki as u32) / Rational::from(factorial(ki as u64));
    }
    Ok((c, spec.degree_of(k)))
}

/// Scalar field the term walker runs over.
trait Scalar: Clone + Add<Output = Self> + Mul<Output = Self> + Div<Output = Self> {
    fn from_rational(r: &Rational) -> Result<Self>;
    fn from_usize(n: usize) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Result<Self> {
        Ok(r.clone())
    }
    fn from_usize(n: usize) -> Self {
        Rational::from(n as i64)
    }
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Result<Self> {
        r.to_f64()
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

struct ParamRow<T> {
    value: T,
    weights: Vec<usize>,
}

/// Enumerates terms block by block (blocks indexed by argument-degree sum),
/// deriving each term from a neighbour in an earlier block.
struct TermWalker<'a, T> {
    spec: &'a SeriesSpec,
    active: Vec<(usize, usize)>,
    args: Vec<T>,
    num: Vec<ParamRow<T>>,
    den: Vec<ParamRow<T>>,
    max_degree: usize,
    recent: VecDeque<HashMap<Vec<usize>, T>>,
    next_block: usize,
    terms: usize,
}

impl<'a, T: Scalar> TermWalker<'a, T> {
    /// `args` are the argument values the walker multiplies in: the bare
    /// coefficients for exact Taylor coefficients, or `c_i x^{g_i}` for
    /// numerical evaluation.
    fn new(spec: &'a SeriesSpec, args: Vec<T>) -> Result<Self> {
        let rows = |ps: &[WeightedParam]| -> Result<Vec<ParamRow<T>>> {
            ps.iter()
                .map(|p| {
                    Ok(ParamRow {
                        value: T::from_rational(&p.value)?,
                        weights: p.weights.iter().map(|&w| w as usize).collect(),
                    })
                })
                .collect()
        };
        let active = spec.active();
        let max_degree = active.iter().map(|&(_, d)| d).max().unwrap_or(1);
        Ok(TermWalker {
            spec,
            active,
            args,
            num: rows(&spec.num)?,
            den: rows(&spec.den)?,
            max_degree,
            recent: VecDeque::new(),
            next_block: 0,
            terms: 0,
        })
    }

    fn shifted_product(rows: &[ParamRow<T>], lags: &[usize], i: usize) -> T {
        let mut acc = T::from_usize(1);
        for (row, &lag) in rows.iter().zip(lags) {
            for t in 0..row.weights[i] {
                acc = acc * (row.value.clone() + T::from_usize(lag + t));
            }
        }
        acc
    }

    fn lags(rows: &[ParamRow<T>], k: &[usize]) -> Vec<usize> {
        rows.iter().map(|r| r.weights.iter().zip(k).map(|(w, ki)| w * ki).sum()).collect()
    }

    /// Next block as (argument-degree sum, terms in enumeration order).
    fn next(&mut self) -> Result<(usize, Vec<(Vec<usize>, T)>)> {
        let s = self.next_block;
        self.next_block += 1;
        let mut out = Vec::new();
        let mut cache = HashMap::new();
        for k in block_indices(self.spec.indices, &self.active, s) {
            if let Some(position) = self.spec.pole_at(&k) {
                let hit = PoleHit { position, param: self.spec.den[position].clone(), index: k };
                return Err(Error::PoleWithinTruncation(PoleReport { offending: vec![hit] }));
            }
            let value = match self.active.iter().find(|&&(i, _)| k[i] > 0) {
                None => T::from_rational(&self.spec.prefactor.coeff)?,
                Some(&(i, deg)) => {
                    let mut prev = k.clone();
                    prev[i] -= 1;
                    let back = self.recent.len() - deg;
                    let base = self.recent[back]
                        .get(&prev)
                        .cloned()
                        .expect("predecessor term is enumerated in an earlier block");
                    if base.is_zero() {
                        T::zero()
                    } else {
                        let up = Self::shifted_product(&self.num, &Self::lags(&self.num, &prev), i);
                        let down = Self::shifted_product(&self.den, &Self::lags(&self.den, &prev), i);
                        base * up * self.args[i].clone() / (down * T::from_usize(prev[i] + 1))
                    }
                }
            };
            self.terms += 1;
            cache.insert(k.clone(), value.clone());
            out.push((k, value));
        }
        self.recent.push_back(cache);
        if self.recent.len() > self.max_degree {
            self.recent.pop_front();
        }
        Ok((s, out))
    }
}

/// Exact coefficients of `x^0 .. x^order`.
pub fn taylor_coeffs(spec: &SeriesSpec, order: usize) -> Result<Vec<Rational>> {
    let poles = pole_check(spec, order);
    if !poles.is_empty() {
        return Err(Error::PoleWithinTruncation(poles));
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    let pd = spec.prefactor.degree as usize;
    if pd > order {
        return Ok(coeffs);
    }
    let args = spec.args.iter().map(|a| a.coeff.clone()).collect();
    let mut walker = TermWalker::<Rational>::new(spec, args)?;
    for _ in 0..=(order - pd) {
        let (s, terms) = walker.next()?;
        for (_, c) in terms {
            coeffs[pd + s] += &c;
        }
    }
    Ok(coeffs)
}

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Largest accepted |x|; `None` disables the check.
    pub radius: Option<f64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { rel_tol: 1e-13, max_terms: 1_000_000, radius: Some(0.5) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatEval {
    pub value: f64,
    pub est_error: f64,
    pub terms: usize,
}

/// Number of trailing blocks that must all be negligible before stopping.
fn stop_window(spec: &SeriesSpec) -> usize {
    3 * spec.active().iter().map(|&(_, d)| d).max().unwrap_or(1)
}

pub fn eval_float(spec: &SeriesSpec, x: f64, opts: &EvalOptions) -> Result<FloatEval> {
    if !(opts.rel_tol > 0.0) {
        return Err(Error::InvalidSpec(format!("rel_tol must be positive, got {}", opts.rel_tol)));
    }
    if let Some(r) = opts.radius {
        if !(x.abs() <= r) {
            return Err(Error::InvalidSpec(format!("|x| = {} outside safe radius {r}", x.abs())));
        }
    }
    if x == 0.0 {
        let value = if spec.prefactor.degree == 0 { spec.prefactor.coeff.to_f64()? } else { 0.0 };
        return Ok(FloatEval { value, est_error: 0.0, terms: 1 });
    }
    let args = spec
        .args
        .iter()
        .map(|a| Ok(a.coeff.to_f64()? * x.powi(a.degree as i32)))
        .collect::<Result<Vec<f64>>>()?;
    let pre = x.powi(spec.prefactor.degree as i32);
    let mut walker = TermWalker::<f64>::new(spec, args)?;
    let window = stop_window(spec);
    let mut total = CompensatedSum::default();
    let mut tail: VecDeque<f64> = VecDeque::new();
    loop {
        let (_, terms) = walker.next()?;
        let mut block = CompensatedSum::default();
        for (_, t) in &terms {
            block.add(t * pre);
        }
        let b = block.value();
        total.add(b);
        tail.push_back(b.abs());
        if tail.len() > window {
            tail.pop_front();
        }
        let sum = total.value();
        let est = tail.iter().cloned().fold(0.0, f64::max) / sum.abs();
        let negligible = tail.len() == window
            && tail.iter().all(|&t| t == 0.0 || t <= opts.rel_tol * sum.abs());
        if negligible {
            let est_error = if est.is_nan() { 0.0 } else { est };
            return Ok(FloatEval { value: sum, est_error, terms: walker.terms });
        }
        if walker.terms >= opts.max_terms {
            return Err(Error::NoConvergence { terms: walker.terms, est_error: est });
        }
    }
}
