//! Exact multivariate polynomials and rational functions over the rationals.

mod monomial;
mod parse;
mod polynomial;
mod ratfunc;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

pub use monomial::{Monomial, Var};
pub use parse::{parse_polynomial, parse_polynomial_with, parse_rational};
pub use polynomial::Polynomial;
pub use ratfunc::{rf_equal, RationalFunction};

pub type Rational = num_rational::BigRational;

/// Assignment of rational values to parameter names.
pub type Valuation = BTreeMap<String, Rational>;

/// Shorthand for building a rational from two machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("no value for parameter '{0}'")]
    MissingParameter(String),
    #[error("exponent {exponent} exceeds the limit {limit}")]
    ExponentLimit { exponent: u64, limit: u32 },
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Resource bounds for polynomial arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_exponent: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_exponent: 1 << 20,
        }
    }
}

impl Limits {
    pub fn check(&self, p: &Polynomial) -> Result<(), PolyError> {
        let e = p.max_exponent();
        if e > self.max_exponent {
            return Err(PolyError::ExponentLimit {
                exponent: u64::from(e),
                limit: self.max_exponent,
            });
        }
        Ok(())
    }
}

/// Formats a rational as `a` or `a/b`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
