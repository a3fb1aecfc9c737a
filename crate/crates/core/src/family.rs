//! Constructors for the named hypergeometric families.
//!
//! Each shape mirrors the classical notation: parameter groups coupled to
//! all summation indices, to pairs of them, or to a single one. Groups map
//! to weight vectors (`(1,1)`, `(1,0)`, `(0,1)` for Kampe de Feriet and so
//! on); an empty group (written "-" in the literature) is an empty list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{ArgMonomial, SeriesSpec, WeightedParam};

fn weighted<'a>(values: &'a [Rational], weights: &[u32]) -> impl Iterator<Item = WeightedParam> + 'a {
    let w = weights.to_vec();
    values.iter().map(move |v| WeightedParam::new(v.clone(), w.clone()))
}

fn default_arg() -> ArgMonomial {
    ArgMonomial::x()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfqShape {
    #[serde(default)]
    pub num: Vec<Rational>,
    #[serde(default)]
    pub den: Vec<Rational>,
    #[serde(default = "default_arg")]
    pub arg: ArgMonomial,
}

/// `pFq(num; den; coeff x^degree)`.
pub fn make_pfq(num: &[Rational], den: &[Rational], arg: ArgMonomial) -> SeriesSpec {
    SeriesSpec::new(1, weighted(num, &[1]).collect(), weighted(den, &[1]).collect(), vec![arg])
        .expect("unit weights and a single argument always form a valid spec")
}

/// Kampe de Feriet double series
/// `sum (a)_{r+s} (b)_r (c)_s / ((d)_{r+s} (e)_r (f)_s) u^r v^s / (r! s!)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KdfShape {
    #[serde(default)]
    pub coupled_num: Vec<Rational>,
    #[serde(default)]
    pub row_num: Vec<Rational>,
    #[serde(default)]
    pub col_num: Vec<Rational>,
    #[serde(default)]
    pub coupled_den: Vec<Rational>,
    #[serde(default)]
    pub row_den: Vec<Rational>,
    #[serde(default)]
    pub col_den: Vec<Rational>,
    #[serde(default = "default_arg")]
    pub arg1: ArgMonomial,
    #[serde(default = "default_arg")]
    pub arg2: ArgMonomial,
}

pub fn make_kdf(shape: &KdfShape) -> SeriesSpec {
    let num = weighted(&shape.coupled_num, &[1, 1])
        .chain(weighted(&shape.row_num, &[1, 0]))
        .chain(weighted(&shape.col_num, &[0, 1]))
        .collect();
    let den = weighted(&shape.coupled_den, &[1, 1])
        .chain(weighted(&shape.row_den, &[1, 0]))
        .chain(weighted(&shape.col_den, &[0, 1]))
        .collect();
    SeriesSpec::new(2, num, den, vec![shape.arg1.clone(), shape.arg2.clone()])
        .expect("Kampe de Feriet weights are never all zero")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdParam {
    pub value: Rational,
    pub weights: [u32; 2],
}

impl SdParam {
    pub fn new(value: Rational, weights: [u32; 2]) -> Self {
        SdParam { value, weights }
    }
}

/// Srivastava-Daoust double series: like [`KdfShape`], but each parameter
/// carries its own weight pair, so `[a: 1,2]` contributes `(a)_{r+2s}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdShape {
    #[serde(default)]
    pub coupled_num: Vec<SdParam>,
    #[serde(default)]
    pub row_num: Vec<SdParam>,
    #[serde(default)]
    pub col_num: Vec<SdParam>,
    #[serde(default)]
    pub coupled_den: Vec<SdParam>,
    #[serde(default)]
    pub row_den: Vec<SdParam>,
    #[serde(default)]
    pub col_den: Vec<SdParam>,
    #[serde(default = "default_arg")]
    pub arg1: ArgMonomial,
    #[serde(default = "default_arg")]
    pub arg2: ArgMonomial,
}

pub fn make_sd(shape: &SdShape) -> Result<SeriesSpec> {
    let groups = [
        ("coupled_num", &shape.coupled_num, true),
        ("row_num", &shape.row_num, true),
        ("col_num", &shape.col_num, true),
        ("coupled_den", &shape.coupled_den, false),
        ("row_den", &shape.row_den, false),
        ("col_den", &shape.col_den, false),
    ];
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for (name, params, is_num) in groups {
        for (i, p) in params.iter().enumerate() {
            if p.weights == [0, 0] {
                return Err(Error::InvalidSpec(format!(
                    "{name}[{i}] (value {}) has zero weight pair",
                    p.value
                )));
            }
            let wp = WeightedParam::new(p.value.clone(), p.weights.to_vec());
            if is_num { num.push(wp) } else { den.push(wp) }
        }
    }
    SeriesSpec::new(2, num, den, vec![shape.arg1.clone(), shape.arg2.clone()])
}

/// Srivastava's general triple series F(3): groups coupled to all three
/// indices, to the pairs (1,2), (2,3), (3,1), and to single indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct F3Groups {
    #[serde(default)]
    pub all: Vec<Rational>,
    #[serde(default)]
    pub pair12: Vec<Rational>,
    #[serde(default)]
    pub pair23: Vec<Rational>,
    #[serde(default)]
    pub pair31: Vec<Rational>,
    #[serde(default)]
    pub single1: Vec<Rational>,
    #[serde(default)]
    pub single2: Vec<Rational>,
    #[serde(default)]
    pub single3: Vec<Rational>,
}

impl F3Groups {
    fn params(&self) -> Vec<WeightedParam> {
        weighted(&self.all, &[1, 1, 1])
            .chain(weighted(&self.pair12, &[1, 1, 0]))
            .chain(weighted(&self.pair23, &[0, 1, 1]))
            .chain(weighted(&self.pair31, &[1, 0, 1]))
            .chain(weighted(&self.single1, &[1, 0, 0]))
            .chain(weighted(&self.single2, &[0, 1, 0]))
            .chain(weighted(&self.single3, &[0, 0, 1]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F3Shape {
    #[serde(default)]
    pub num: F3Groups,
    #[serde(default)]
    pub den: F3Groups,
    #[serde(default = "default_arg")]
    pub arg1: ArgMonomial,
    #[serde(default = "default_arg")]
    pub arg2: ArgMonomial,
    #[serde(default = "default_arg")]
    pub arg3: ArgMonomial,
}

pub fn make_f3(shape: &F3Shape) -> SeriesSpec {
    SeriesSpec::new(
        3,
        shape.num.params(),
        shape.den.params(),
        vec![shape.arg1.clone(), shape.arg2.clone(), shape.arg3.clone()],
    )
    .expect("F(3) group weights are never all zero")
}

/// A function description as accepted by the `eval` command, tagged by `"fn"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "lowercase")]
pub enum FunctionSpec {
    Pfq(PfqShape),
    Kdf(KdfShape),
    Sd(SdShape),
    F3(F3Shape),
    Series(SeriesSpec),
}

impl FunctionSpec {
    pub fn build(&self) -> Result<SeriesSpec> {
        match self {
            FunctionSpec::Pfq(s) => Ok(make_pfq(&s.num, &s.den, s.arg.clone())),
            FunctionSpec::Kdf(s) => Ok(make_kdf(s)),
            FunctionSpec::Sd(s) => make_sd(s),
            FunctionSpec::F3(s) => Ok(make_f3(s)),
            FunctionSpec::Series(s) => Ok(s.clone()),
        }
    }
}
