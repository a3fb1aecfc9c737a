//! The sixteen reduction formulas as executable identity cases.
//!
//! Every case has a Kampe de Feriet left-hand side in `x`. Single-link cases
//! equate it with a finite double sum over `0 <= j <= m, 0 <= k <= n` of
//! `C_{j,k} x^{j+k}` times a Srivastava-Daoust series in `(x, x^2/4)`.
//! Double-link cases route through a triple series F(3) at `(-x, x, x)` and
//! end in a finite sum of 4F5 (with `e`) or 4F3 (without `e`) series in
//! `x^2/4`.
//!
//! The three groups T1, T2, T3 differ only in how `alpha` and `beta` are
//! shifted: T2 uses `alpha - m` and `beta - n` throughout, T3 shifts
//! `beta` only. [`Theorem::alpha_shifted`] and [`Theorem::beta_shifted`]
//! encode that.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{make_f3, make_kdf, make_pfq, make_sd, F3Groups, F3Shape, KdfShape, SdParam, SdShape};
use crate::rational::{factorial, pochhammer, Rational};
use crate::series::{taylor_coeffs, ArgMonomial, SeriesSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    T1E1,
    T1E2,
    T1E3,
    T1E4,
    T2E5,
    T2E6,
    T2E7,
    T2E8,
    T3E9,
    T3E10,
    T3E11,
    T3E12,
    SC13,
    SC14,
    SC15,
    SC16,
}

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::T1E1,
        IdentityId::T1E2,
        IdentityId::T1E3,
        IdentityId::T1E4,
        IdentityId::T2E5,
        IdentityId::T2E6,
        IdentityId::T2E7,
        IdentityId::T2E8,
        IdentityId::T3E9,
        IdentityId::T3E10,
        IdentityId::T3E11,
        IdentityId::T3E12,
        IdentityId::SC13,
        IdentityId::SC14,
        IdentityId::SC15,
        IdentityId::SC16,
    ];

    pub fn equation(self) -> u32 {
        Self::ALL.iter().position(|&i| i == self).unwrap() as u32 + 1
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::T1E1 => "T1E1",
            IdentityId::T1E2 => "T1E2",
            IdentityId::T1E3 => "T1E3",
            IdentityId::T1E4 => "T1E4",
            IdentityId::T2E5 => "T2E5",
            IdentityId::T2E6 => "T2E6",
            IdentityId::T2E7 => "T2E7",
            IdentityId::T2E8 => "T2E8",
            IdentityId::T3E9 => "T3E9",
            IdentityId::T3E10 => "T3E10",
            IdentityId::T3E11 => "T3E11",
            IdentityId::T3E12 => "T3E12",
            IdentityId::SC13 => "SC13",
            IdentityId::SC14 => "SC14",
            IdentityId::SC15 => "SC15",
            IdentityId::SC16 => "SC16",
        }
    }

    /// Group (T1, T2, T3) the case belongs to; `None` for the `m = n = 0` special cases.
    pub fn theorem(self) -> Option<Theorem> {
        match (self.equation() - 1) / 4 {
            0 => Some(Theorem::T1),
            1 => Some(Theorem::T2),
            2 => Some(Theorem::T3),
            _ => None,
        }
    }

    /// Cases come in groups of four: with `e`, single link; with `e`,
    /// double link; without `e`, single; without `e`, double.
    fn slot(self) -> u32 {
        (self.equation() - 1) % 4
    }

    pub fn has_e(self) -> bool {
        self.slot() < 2
    }

    pub fn is_double_link(self) -> bool {
        self.slot() % 2 == 1
    }

    pub fn is_special_case(self) -> bool {
        self.theorem().is_none()
    }

    pub fn links(self) -> Vec<Link> {
        if self.is_double_link() {
            vec![Link(SideKind::Kdf, SideKind::F3), Link(SideKind::F3, SideKind::Sum)]
        } else {
            vec![Link(SideKind::Kdf, SideKind::Sum)]
        }
    }

    pub fn param_names(self) -> Vec<&'static str> {
        let mut v = vec!["d"];
        if self.has_e() {
            v.push("e");
        }
        v.extend(["alpha", "beta"]);
        if !self.is_special_case() {
            v.extend(["m", "n"]);
        }
        v
    }

    /// The special case obtained by setting `m = n = 0` in this case.
    pub fn special_case(self) -> IdentityId {
        Self::ALL[12 + self.slot() as usize]
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownIdentity(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    T1,
    T2,
    T3,
}

impl Theorem {
    pub fn alpha_shifted(self) -> bool {
        self == Theorem::T2
    }

    pub fn beta_shifted(self) -> bool {
        self != Theorem::T1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SideKind {
    Kdf,
    F3,
    Sum,
}

impl SideKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SideKind::Kdf => "KDF",
            SideKind::F3 => "F3",
            SideKind::Sum => "SUM",
        }
    }
}

/// An asserted equality between two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Link(pub SideKind, pub SideKind);

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.0.as_str(), self.1.as_str())
    }
}

impl Serialize for Link {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub d: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Rational>,
    pub alpha: Rational,
    pub beta: Rational,
    #[serde(default)]
    pub m: u32,
    #[serde(default)]
    pub n: u32,
}

impl ReductionParams {
    fn check_for(&self, id: IdentityId) -> Result<()> {
        match (id.has_e(), &self.e) {
            (true, None) => return Err(Error::InvalidParams(format!("{id} requires e"))),
            (false, Some(_)) => return Err(Error::InvalidParams(format!("{id} has no e parameter"))),
            _ => {}
        }
        if id.is_special_case() && (self.m != 0 || self.n != 0) {
            return Err(Error::InvalidParams(format!("{id} is defined for m = n = 0 only")));
        }
        Ok(())
    }

    /// Effective alpha after the group's shift.
    fn alpha_eff(&self, t: Theorem) -> Rational {
        if t.alpha_shifted() { self.alpha.add_int(-(self.m as i64)) } else { self.alpha.clone() }
    }

    fn beta_eff(&self, t: Theorem) -> Rational {
        if t.beta_shifted() { self.beta.add_int(-(self.n as i64)) } else { self.beta.clone() }
    }

    /// `2 alpha + m` (T1, T3) or `2 alpha - m` (T2).
    fn alpha_den(&self, t: Theorem) -> Rational {
        let m = self.m as i64;
        (&self.alpha + &self.alpha).add_int(if t.alpha_shifted() { -m } else { m })
    }

    fn beta_den(&self, t: Theorem) -> Rational {
        let n = self.n as i64;
        (&self.beta + &self.beta).add_int(if t.beta_shifted() { -n } else { n })
    }
}

/// One structural factor of the prefactor `C_{j,k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `(d)_{j+k}`
    D,
    /// `(e)_{j+k}` in the denominator
    E,
    /// `(-m)_j`
    MinusM,
    /// `(-n)_k`
    MinusN,
    /// `(2a'-1)_j` with `a'` the shifted alpha
    AlphaNum,
    /// `(2b'-1)_k`
    BetaNum,
    /// `(2 alpha +- m)_j` in the denominator
    AlphaDen,
    /// `(2 beta +- n)_k` in the denominator
    BetaDen,
    /// `(a' - 1/2)_j` in the denominator
    AlphaHalf,
    /// `(b' - 1/2)_k` in the denominator
    BetaHalf,
    /// `j!`
    FactJ,
    /// `k!`
    FactK,
}

impl Factor {
    pub const ALL: [Factor; 12] = [
        Factor::D,
        Factor::E,
        Factor::MinusM,
        Factor::MinusN,
        Factor::AlphaNum,
        Factor::BetaNum,
        Factor::AlphaDen,
        Factor::BetaDen,
        Factor::AlphaHalf,
        Factor::BetaHalf,
        Factor::FactJ,
        Factor::FactK,
    ];
}

/// Deliberate corruptions of a case, used to show the verifier notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Remove `2^{2j+2k}` from `C_{j,k}`.
    DropPowerOfTwo,
    /// Remove the `(-1)^{...}` sign of T2 and T3.
    DropSign,
    /// Remove one Pochhammer or factorial factor from `C_{j,k}`.
    DropFactor(Factor),
    /// Remove `x^{j+k}` in front of each inner series.
    DropXPower,
}

/// Alternative readings of ambiguous formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub mutation: Option<Mutation>,
    /// Read the 4F5/4F3 numerator `(d+j+k)/2` as `(1+d+j+k)/2`.
    pub one_plus_d_numerator: bool,
    /// Use the argument `x^2/4` for the 4F3 of the double-link cases
    /// without `e`, instead of `x^2`.
    pub quarter_argument_without_e: bool,
    /// Keep an `(e)_{j+k}` factor in `C_{j,k}` for a case without `e`,
    /// using this value.
    pub extra_e: Option<Rational>,
}

struct CoeffPlan<'a> {
    theorem: Theorem,
    p: &'a ReductionParams,
    e: Option<&'a Rational>,
    sign: bool,
    power_of_two: bool,
    dropped: Option<Factor>,
}

impl CoeffPlan<'_> {
    fn eval(&self, j: usize, k: usize) -> Result<Rational> {
        let t = self.theorem;
        let p = self.p;
        let half = Rational::one().halve();
        let a = p.alpha_eff(t);
        let b = p.beta_eff(t);
        let keep = |f: Factor| self.dropped != Some(f);

        let mut den = Rational::one();
        let mut dens: Vec<(Factor, String, Rational)> = Vec::new();
        if let Some(e) = self.e {
            dens.push((Factor::E, format!("(e)_{}", j + k), pochhammer(e, j + k)));
        }
        dens.push((Factor::AlphaDen, format!("(2alpha{:+})_{j}", if t.alpha_shifted() { -(p.m as i64) } else { p.m as i64 }), pochhammer(&p.alpha_den(t), j)));
        dens.push((Factor::BetaDen, format!("(2beta{:+})_{k}", if t.beta_shifted() { -(p.n as i64) } else { p.n as i64 }), pochhammer(&p.beta_den(t), k)));
        dens.push((Factor::AlphaHalf, format!("({} - 1/2)_{j}", if t.alpha_shifted() { "alpha-m" } else { "alpha" }), pochhammer(&(&a - &half), j)));
        dens.push((Factor::BetaHalf, format!("({} - 1/2)_{k}", if t.beta_shifted() { "beta-n" } else { "beta" }), pochhammer(&(&b - &half), k)));
        dens.push((Factor::FactJ, format!("{j}!"), Rational::from(factorial(j as u64))));
        dens.push((Factor::FactK, format!("{k}!"), Rational::from(factorial(k as u64))));
        for (f, label, v) in dens {
            if !keep(f) {
                continue;
            }
            if v.is_zero() {
                return Err(Error::PolarPrefactor { factor: label, j, k });
            }
            den *= &v;
        }
        let mut num = Rational::one();
        let mut push_num = |f: Factor, v: Rational| {
            if keep(f) {
                num *= &v;
            }
        };
        push_num(Factor::D, pochhammer(&p.d, j + k));
        push_num(Factor::MinusM, pochhammer(&Rational::from(-(p.m as i64)), j));
        push_num(Factor::MinusN, pochhammer(&Rational::from(-(p.n as i64)), k));
        push_num(Factor::AlphaNum, pochhammer(&(&a + &a).add_int(-1), j));
        push_num(Factor::BetaNum, pochhammer(&(&b + &b).add_int(-1), k));
        if self.sign {
            let flips = if t.alpha_shifted() { j } else { 0 } + if t.beta_shifted() { k } else { 0 };
            if flips % 2 == 1 {
                num = -num;
            }
        }

        if self.power_of_two {
            den *= &Rational::from(4).pow((j + k) as u32);
        }
        Ok(num / den)
    }
}

fn coeff_with(
    theorem: Theorem,
    j: usize,
    k: usize,
    p: &ReductionParams,
    opts: &BuildOptions,
) -> Result<Rational> {
    let e = p.e.as_ref().or(opts.extra_e.as_ref());
    let plan = CoeffPlan {
        theorem,
        p,
        e,
        sign: opts.mutation != Some(Mutation::DropSign),
        power_of_two: opts.mutation != Some(Mutation::DropPowerOfTwo),
        dropped: match opts.mutation {
            Some(Mutation::DropFactor(f)) => Some(f),
            _ => None,
        },
    };
    plan.eval(j, k)
}

/// T1 prefactor `C_{j,k}`; the `(e)_{j+k}` factor is present iff `p.e` is.
pub fn coeff_t1(j: usize, k: usize, p: &ReductionParams) -> Result<Rational> {
    coeff_with(Theorem::T1, j, k, p, &BuildOptions::default())
}

/// T2 prefactor: alternating sign and `alpha - m`, `beta - n` shifts.
pub fn coeff_t2(j: usize, k: usize, p: &ReductionParams) -> Result<Rational> {
    coeff_with(Theorem::T2, j, k, p, &BuildOptions::default())
}

/// T3 prefactor: T1 in `j`, T2 in `k`.
pub fn coeff_t3(j: usize, k: usize, p: &ReductionParams) -> Result<Rational> {
    coeff_with(Theorem::T3, j, k, p, &BuildOptions::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhsTerm {
    pub j: usize,
    pub k: usize,
    pub coeff: Rational,
    pub x_power: u32,
    pub series: SeriesSpec,
}

impl RhsTerm {
    /// The term as one series, with `C_{j,k} x^{j+k}` folded into the prefactor.
    pub fn spec(&self) -> SeriesSpec {
        self.series.clone().with_prefactor(self.coeff.clone(), self.x_power)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhsSum {
    pub terms: Vec<RhsTerm>,
}

impl RhsSum {
    pub fn taylor_coeffs(&self, order: usize) -> Result<Vec<Rational>> {
        let mut acc = vec![Rational::zero(); order + 1];
        for term in &self.terms {
            for (a, c) in acc.iter_mut().zip(taylor_coeffs(&term.spec(), order)?) {
                *a += &c;
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub id: IdentityId,
    pub params: ReductionParams,
    pub lhs: SeriesSpec,
    pub mid: Option<SeriesSpec>,
    pub rhs: RhsSum,
}

impl Identity {
    /// Every series involved, for pole screening.
    pub fn all_series(&self) -> impl Iterator<Item = &SeriesSpec> {
        std::iter::once(&self.lhs).chain(self.mid.iter()).chain(self.rhs.terms.iter().map(|t| &t.series))
    }

    pub fn side_coeffs(&self, side: SideKind, order: usize) -> Result<Vec<Rational>> {
        match side {
            SideKind::Kdf => taylor_coeffs(&self.lhs, order),
            SideKind::F3 => taylor_coeffs(self.mid.as_ref().expect("double-link case has a middle member"), order),
            SideKind::Sum => self.rhs.taylor_coeffs(order),
        }
    }
}

fn single(v: &Rational) -> Vec<Rational> {
    vec![v.clone()]
}

fn lhs_spec(id: IdentityId, theorem: Theorem, p: &ReductionParams) -> SeriesSpec {
    let mut col_num = p.beta.clone();
    let mut arg2 = ArgMonomial::x();
    if id.is_double_link() {
        let n = p.n as i64;
        col_num = p.beta.add_int(if theorem.beta_shifted() { -n } else { n });
        arg2 = ArgMonomial::new(Rational::from(-1), 1);
    }
    make_kdf(&KdfShape {
        coupled_num: single(&p.d),
        row_num: single(&p.alpha),
        col_num: vec![col_num],
        coupled_den: p.e.iter().cloned().collect(),
        row_den: vec![p.alpha_den(theorem)],
        col_den: vec![p.beta_den(theorem)],
        arg1: ArgMonomial::x(),
        arg2,
    })
}

fn mid_spec(theorem: Theorem, p: &ReductionParams) -> SeriesSpec {
    make_f3(&F3Shape {
        num: F3Groups { all: single(&p.d), single2: single(&p.alpha), single3: single(&p.beta), ..Default::default() },
        den: F3Groups {
            all: p.e.iter().cloned().collect(),
            single2: vec![p.alpha_den(theorem)],
            single3: vec![p.beta_den(theorem)],
            ..Default::default()
        },
        arg1: ArgMonomial::new(Rational::from(-1), 1),
        arg2: ArgMonomial::x(),
        arg3: ArgMonomial::x(),
    })
}

fn quarter_x_squared() -> ArgMonomial {
    ArgMonomial::new(Rational::one().halve().halve(), 2)
}

/// Argument of the closing 4F5/4F3. With `e` the halved pairs
/// `(e+s)/2, (e+s+1)/2` absorb the `4^s` coming from `(d+s)/2, (d+s+1)/2`;
/// without `e` nothing does, and the argument is `x^2`.
fn pfq_argument(has_e: bool, opts: &BuildOptions) -> ArgMonomial {
    if has_e || opts.quarter_argument_without_e {
        quarter_x_squared()
    } else {
        ArgMonomial::new(Rational::one(), 2)
    }
}

/// Inner series of the `(j, k)` term, from the shifted `alpha`, `beta`.
fn inner_spec(
    id: IdentityId,
    a: &Rational,
    b: &Rational,
    j: usize,
    k: usize,
    p: &ReductionParams,
    opts: &BuildOptions,
) -> Result<SeriesSpec> {
    let s = (j + k) as i64;
    let half = Rational::one().halve();
    let ab = (a + b).add_int(s);
    let num_ab = vec![ab.halve(), ab.add_int(1).halve()];
    let den_ab = vec![a.add_int(j as i64) + &half, b.add_int(k as i64) + &half, ab.clone()];
    let d = p.d.add_int(s);
    let e = p.e.as_ref().map(|e| e.add_int(s));
    if id.is_double_link() {
        let d_low = if opts.one_plus_d_numerator { d.add_int(1).halve() } else { d.halve() };
        let mut num = num_ab;
        num.extend([d_low, d.add_int(1).halve()]);
        let mut den = den_ab;
        let arg = pfq_argument(e.is_some(), opts);
        if let Some(e) = e {
            den.extend([e.halve(), e.add_int(1).halve()]);
        }
        Ok(make_pfq(&num, &den, arg))
    } else {
        let col = |v: Vec<Rational>| v.into_iter().map(|v| SdParam::new(v, [0, 1])).collect();
        make_sd(&SdShape {
            coupled_num: vec![SdParam::new(d, [1, 2])],
            row_num: vec![],
            col_num: col(num_ab),
            coupled_den: e.into_iter().map(|e| SdParam::new(e, [1, 2])).collect(),
            row_den: vec![],
            col_den: col(den_ab),
            arg1: ArgMonomial::x(),
            arg2: quarter_x_squared(),
        })
    }
}

pub fn build_identity(id: IdentityId, p: &ReductionParams) -> Result<Identity> {
    build_identity_with(id, p, &BuildOptions::default())
}

pub fn build_identity_with(id: IdentityId, p: &ReductionParams, opts: &BuildOptions) -> Result<Identity> {
    p.check_for(id)?;
    // The special cases share the T1 left side (all groups agree at m = n = 0).
    let theorem = id.theorem().unwrap_or(Theorem::T1);
    let lhs = lhs_spec(id, theorem, p);
    let mid = id.is_double_link().then(|| mid_spec(theorem, p));
    let terms = if id.is_special_case() {
        special_case_rhs(id, p, opts)?
    } else {
        let (a, b) = (p.alpha_eff(theorem), p.beta_eff(theorem));
        let mut terms = Vec::with_capacity((p.m as usize + 1) * (p.n as usize + 1));
        for j in 0..=p.m as usize {
            for k in 0..=p.n as usize {
                terms.push(RhsTerm {
                    j,
                    k,
                    coeff: coeff_with(theorem, j, k, p, opts)?,
                    x_power: if opts.mutation == Some(Mutation::DropXPower) { 0 } else { (j + k) as u32 },
                    series: inner_spec(id, &a, &b, j, k, p, opts)?,
                });
            }
        }
        terms
    };
    Ok(Identity { id, params: p.clone(), lhs, mid, rhs: RhsSum { terms } })
}

/// Right-hand sides of the `m = n = 0` cases, written out directly rather
/// than as the degenerate double sums.
fn special_case_rhs(id: IdentityId, p: &ReductionParams, opts: &BuildOptions) -> Result<Vec<RhsTerm>> {
    let half = Rational::one().halve();
    let ab = &p.alpha + &p.beta;
    let upper = vec![ab.halve(), ab.add_int(1).halve()];
    let lower = vec![&p.alpha + &half, &p.beta + &half, ab.clone()];
    let series = if id.is_double_link() {
        let d_low = if opts.one_plus_d_numerator { p.d.add_int(1).halve() } else { p.d.halve() };
        let num = [upper, vec![d_low, p.d.add_int(1).halve()]].concat();
        let mut den = lower;
        if let Some(e) = &p.e {
            den.extend([e.halve(), e.add_int(1).halve()]);
        }
        make_pfq(&num, &den, pfq_argument(p.e.is_some(), opts))
    } else {
        make_sd(&SdShape {
            coupled_num: vec![SdParam::new(p.d.clone(), [1, 2])],
            row_num: vec![],
            col_num: upper.into_iter().map(|v| SdParam::new(v, [0, 1])).collect(),
            coupled_den: p.e.iter().map(|e| SdParam::new(e.clone(), [1, 2])).collect(),
            row_den: vec![],
            col_den: lower.into_iter().map(|v| SdParam::new(v, [0, 1])).collect(),
            arg1: ArgMonomial::x(),
            arg2: quarter_x_squared(),
        })?
    };
    Ok(vec![RhsTerm { j: 0, k: 0, coeff: Rational::one(), x_power: 0, series }])
}

/// Exact Taylor coefficients of the finite right-hand sum.
pub fn rhs_taylor(id: IdentityId, p: &ReductionParams, order: usize) -> Result<Vec<Rational>> {
    build_identity(id, p)?.rhs.taylor_coeffs(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub id: IdentityId,
    pub equation: u32,
    pub links: Vec<Link>,
    pub params: Vec<&'static str>,
}

pub fn registry() -> Vec<RegistryEntry> {
    IdentityId::ALL
        .iter()
        .map(|&id| RegistryEntry { id, equation: id.equation(), links: id.links(), params: id.param_names() })
        .collect()
}
