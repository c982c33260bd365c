//! Exact rationals and the rational-or-π-rational targets of the sums.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};

/// Rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn new(numerator: impl Into<Integer>, denominator: impl Into<Integer>) -> Result<Self> {
        let den: Integer = denominator.into();
        if den == 0 {
            return Err(Error::domain("ExactRational::new", "zero denominator"));
        }
        Ok(ExactRational(Rational::from((numerator.into(), den))))
    }

    pub fn from_integer(value: impl Into<Integer>) -> Self {
        ExactRational(Rational::from(value.into()))
    }

    pub fn numerator(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denominator(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn checked_div(&self, other: &ExactRational) -> Result<ExactRational> {
        if other.is_zero() {
            return Err(Error::domain("ExactRational::div", "division by zero"));
        }
        Ok(ExactRational(Rational::from(&self.0 / &other.0)))
    }

    pub fn to_big_real(&self, ctx: PrecisionContext) -> BigReal {
        BigReal::new(ctx.float(&self.0), ctx)
    }

    pub(crate) fn as_rational(&self) -> &Rational {
        &self.0
    }
}

impl Add for &ExactRational {
    type Output = ExactRational;

    fn add(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(Rational::from(&self.0 + &rhs.0))
    }
}

impl Mul for &ExactRational {
    type Output = ExactRational;

    fn mul(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(Rational::from(&self.0 * &rhs.0))
    }
}

/// Always rendered as `p/q`, including `q = 1`.
impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_int =
            |t: &str| Integer::from_str(t.trim()).map_err(|_| Error::Parse(s.to_string()));
        match s.split_once('/') {
            Some((num, den)) => ExactRational::new(parse_int(num)?, parse_int(den)?),
            None => Ok(ExactRational::from_integer(parse_int(s)?)),
        }
    }
}

/// Value `q` or `q·π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactTarget {
    pub q: ExactRational,
    pub has_pi: bool,
}

impl ExactTarget {
    /// Real value at working precision; π enters only here.
    pub fn value(&self, ctx: PrecisionContext) -> BigReal {
        let q = ctx.float(self.q.as_rational());
        if self.has_pi {
            BigReal::new(q * ctx.pi(), ctx)
        } else {
            BigReal::new(q, ctx)
        }
    }
}

impl fmt::Display for ExactTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_pi {
            write!(f, "({})*pi", self.q)
        } else {
            write!(f, "{}", self.q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn products_and_reduction() {
        assert_eq!(&q(1, 6) * &q(1, 5), q(1, 30));
        assert_eq!(&q(1, 8) * &q(3, 16), q(3, 128));
        let r = q(4, 20);
        assert_eq!(r.numerator(), &Integer::from(1));
        assert_eq!(r.denominator(), &Integer::from(5));
        assert_eq!(&q(1, 3) + &q(1, 6), q(1, 2));
    }

    #[test]
    fn sign_lives_in_numerator() {
        let r = q(3, -9);
        assert_eq!(r.to_string(), "-1/3");
        assert!(*r.denominator() > 0);
    }

    #[test]
    fn zero_denominators_rejected() {
        assert!(ExactRational::new(1, 0).is_err());
        assert!(q(1, 2).checked_div(&q(0, 7)).is_err());
        assert_eq!(q(1, 2).checked_div(&q(3, 4)).unwrap(), q(2, 3));
    }

    #[test]
    fn parse_display() {
        assert_eq!("3/128".parse::<ExactRational>().unwrap(), q(3, 128));
        assert_eq!("7".parse::<ExactRational>().unwrap().to_string(), "7/1");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("a/2".parse::<ExactRational>().is_err());
    }

    #[test]
    fn target_value() {
        let ctx = PrecisionContext::new(30).unwrap();
        let t = ExactTarget {
            q: q(1, 8),
            has_pi: true,
        };
        let expected = BigReal::new(ctx.pi() / 8, ctx);
        assert_eq!(t.value(ctx), expected);
        assert_eq!(t.to_string(), "(1/8)*pi");
    }
}
