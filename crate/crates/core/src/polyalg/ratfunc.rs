use std::fmt;

use num_traits::Zero;

use crate::polyalg::{PolyError, Polynomial, Rational, Valuation};

/// Quotient of two polynomials. The pair is not reduced to lowest terms;
/// equality is decided by cross multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        if let Some(c) = den.as_constant() {
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        RationalFunction { num, den }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Cancels the denominator when it divides the numerator exactly and
    /// makes the denominator monic otherwise.
    pub fn simplify(&self) -> RationalFunction {
        if let Some(q) = self.num.div_exact(&self.den) {
            return Self::from_polynomial(q);
        }
        let (c, den) = self.den.make_monic();
        RationalFunction {
            num: self.num.scale(&c.recip()),
            den,
        }
    }

    pub fn eval(&self, val: &Valuation) -> Result<Rational, PolyError> {
        let d = self.den.eval(val)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(self.num.eval(val)? / d)
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction, PolyError> {
        if other.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::normalized(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }
}

/// Equality of rational functions as elements of the fraction field.
pub fn rf_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    &a.num * &b.den == &b.num * &a.den
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        rf_equal(self, other)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
