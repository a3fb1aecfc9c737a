//! Evaluation of multi-index hypergeometric series (pFq, Kampe de Feriet,
//! Srivastava-Daoust, the triple series F(3)) over exact rationals and
//! doubles, plus machine verification of Kampe de Feriet reduction
//! formulas by comparing Taylor coefficients exactly.

pub mod bench;
pub mod cli;
pub mod error;
pub mod family;
pub mod rational;
pub mod reductions;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use family::{make_f3, make_kdf, make_pfq, make_sd, F3Groups, F3Shape, FunctionSpec, KdfShape, PfqShape, SdParam, SdShape};
pub use rational::{factorial, pochhammer, rat, Rational};
pub use reductions::{build_identity, build_identity_with, registry, rhs_taylor, BuildOptions, Identity, IdentityId, ReductionParams};
pub use series::{eval_float, pole_check, taylor_coeffs, term_coeff, ArgMonomial, EvalOptions, FloatEval, PoleReport, SeriesSpec, WeightedParam};
