//! Arbitrary-precision substrate.
//!
//! Every numeric routine in the crate takes a [`PrecisionContext`] and
//! produces [`BigReal`] values. The backend is MPFR (through `rug`), whose
//! elementary functions are correctly rounded: each [`elem`] result is within
//! half a unit in the last place of the binary working precision, which is
//! itself wider than the decimal working precision.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Guard digits added on top of the requested precision unless configured otherwise.
pub const DEFAULT_GUARD_DIGITS: u32 = 15;
/// Smallest accepted guard.
pub const MIN_GUARD_DIGITS: u32 = 10;
/// Largest accepted requested precision.
pub const MAX_DIGITS: u32 = 200_000;

/// Binary headroom carried beyond the decimal working precision. Keeps
/// accumulated rounding in long sums well below `tail_tol`, so that reported
/// tail bounds dominate the total error.
const EXTRA_BITS: u32 = 64;

/// Decimal working precision shared by all operations of one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    /// Context for `digits` requested decimal digits with the default guard.
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits == 0 || digits > MAX_DIGITS {
            return Err(Error::domain(
                "PrecisionContext",
                format!("digits must be in 1..={MAX_DIGITS}, got {digits}"),
            ));
        }
        if guard < MIN_GUARD_DIGITS {
            return Err(Error::domain(
                "PrecisionContext",
                format!("guard must be at least {MIN_GUARD_DIGITS}, got {guard}"),
            ));
        }
        Ok(PrecisionContext { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// MPFR precision in bits used for every intermediate value.
    pub fn prec_bits(&self) -> u32 {
        let bits = (f64::from(self.working_digits()) * std::f64::consts::LOG2_10).ceil() as u32;
        bits + EXTRA_BITS
    }

    /// Same guard, `extra` more requested digits.
    pub fn widened(&self, extra: u32) -> Result<Self> {
        Self::with_guard(self.digits + extra, self.guard)
    }

    /// `10^(-working_digits)`, the truncation target of every series.
    pub fn tail_tol(&self) -> BigReal {
        BigReal::new(self.tail_tol_float(), *self)
    }

    pub(crate) fn tail_tol_float(&self) -> Float {
        self.pow10(-i64::from(self.working_digits()))
    }

    /// `log10(tail_tol)` as a plain float, for choosing truncation points.
    pub(crate) fn tail_tol_log10(&self) -> f64 {
        -f64::from(self.working_digits())
    }

    /// `10^exp` at working precision.
    pub(crate) fn pow10(&self, exp: i64) -> Float {
        let ten = Float::with_val(self.prec_bits(), 10);
        ten.pow(exp)
    }

    pub(crate) fn float<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.prec_bits(), value)
    }

    pub(crate) fn pi(&self) -> Float {
        Float::with_val(self.prec_bits(), Constant::Pi)
    }

    pub(crate) fn ln(&self, m: u64) -> Float {
        self.float(m).ln()
    }

    pub(crate) fn factorial(&self, n: u32) -> Float {
        self.float(rug::Integer::from(rug::Integer::factorial(n)))
    }
}

/// Real number carried at a context's working precision.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: Float,
    precision_digits: u32,
}

impl BigReal {
    /// Wraps a backend value, rounding it to the context's precision.
    pub fn new(value: Float, ctx: PrecisionContext) -> Self {
        let mut value = value;
        value.set_prec(ctx.prec_bits());
        BigReal {
            value,
            precision_digits: ctx.digits(),
        }
    }

    pub fn from_i64(value: i64, ctx: PrecisionContext) -> Self {
        BigReal::new(ctx.float(value), ctx)
    }

    /// Nearest representable value to `num/den`.
    pub fn from_ratio(num: i64, den: i64, ctx: PrecisionContext) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("BigReal::from_ratio", "zero denominator"));
        }
        Ok(BigReal::new(ctx.float(num) / den, ctx))
    }

    /// Reads a decimal string (`[-+]digits[.digits][e[-+]exp]`) at the context's precision.
    pub fn parse_decimal(text: &str, ctx: PrecisionContext) -> Result<Self> {
        if !is_decimal_literal(text) {
            return Err(Error::Parse(text.to_string()));
        }
        let parsed = Float::parse(text).map_err(|_| Error::Parse(text.to_string()))?;
        Ok(BigReal::new(ctx.float(parsed), ctx))
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    /// Requested digits of the context this value was produced under.
    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            value: self.value.clone().abs(),
            precision_digits: self.precision_digits,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero()
    }

    /// Shortest decimal string that reads back to exactly this value at the same precision.
    pub fn to_decimal_string(&self) -> String {
        format_decimal(&self.value, None)
    }

    /// Scientific notation with exactly `significant` significant digits.
    pub fn to_sci_string(&self, significant: usize) -> String {
        format_decimal(&self.value, Some(significant.max(1)))
    }

    /// True when the two values agree to `digits` significant decimal digits,
    /// i.e. `|a - b| <= 10^-digits * max(|a|, |b|)`.
    pub fn agrees_to_digits(&self, other: &BigReal, digits: u32) -> bool {
        let prec = self.value.prec().max(other.value.prec());
        let diff = Float::with_val(prec, &self.value - &other.value).abs();
        if diff.is_zero() {
            return true;
        }
        let scale = Float::with_val(prec, self.value.abs_ref())
            .max(&Float::with_val(prec, other.value.abs_ref()));
        let ten = Float::with_val(prec, 10);
        diff <= scale * ten.pow(-i64::from(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

fn format_decimal(value: &Float, significant: Option<usize>) -> String {
    if value.is_zero() {
        return match significant {
            Some(n) if n > 1 => format!("0.{}e0", "0".repeat(n - 1)),
            _ => "0".to_string(),
        };
    }
    if value.is_nan() {
        return "nan".to_string();
    }
    if value.is_infinite() {
        return if value.is_sign_negative() {
            "-inf"
        } else {
            "inf"
        }
        .to_string();
    }
    let (negative, mut digits, exp) = value.to_sign_string_exp(10, significant);
    let exp = exp.unwrap_or(0) - 1;
    if significant.is_none() {
        let trimmed = digits.trim_end_matches('0').len().max(1);
        digits.truncate(trimmed);
    }
    let mut out = String::with_capacity(digits.len() + 8);
    if negative {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if digits.len() > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// `[-+]? digits ('.' digits?)? ([eE] [-+]? digits)?`, also accepting `.digits`.
fn is_decimal_literal(text: &str) -> bool {
    let bytes = text.as_bytes();
    let mut i = 0;
    if matches!(bytes.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let int_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - int_start;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return false;
    }
    if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
        i += 1;
        if matches!(bytes.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let exp_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == bytes.len()
}

/// Elementary functions exposed by [`elem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Arctan,
}

impl ElemFn {
    pub fn name(self) -> &'static str {
        match self {
            ElemFn::Exp => "exp",
            ElemFn::Ln => "ln",
            ElemFn::Sqrt => "sqrt",
            ElemFn::Sin => "sin",
            ElemFn::Cos => "cos",
            ElemFn::Sinh => "sinh",
            ElemFn::Cosh => "cosh",
            ElemFn::Arctan => "arctan",
        }
    }
}

impl fmt::Display for ElemFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// π at the context's working precision.
pub fn const_pi(ctx: PrecisionContext) -> BigReal {
    BigReal::new(ctx.pi(), ctx)
}

/// Evaluates an elementary function, correctly rounded at the working precision.
pub fn elem(func: ElemFn, x: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    let arg = ctx.float(x.as_float());
    let domain_error = || {
        Error::domain(
            "elem",
            format!(
                "{} is undefined at x = {}",
                func.name(),
                x.to_sci_string(20)
            ),
        )
    };
    if !arg.is_finite() {
        return Err(domain_error());
    }
    let value = match func {
        ElemFn::Exp => arg.exp(),
        ElemFn::Ln => {
            if arg <= 0 {
                return Err(domain_error());
            }
            arg.ln()
        }
        ElemFn::Sqrt => {
            if arg < 0 {
                return Err(domain_error());
            }
            arg.sqrt()
        }
        ElemFn::Sin => arg.sin(),
        ElemFn::Cos => arg.cos(),
        ElemFn::Sinh => arg.sinh(),
        ElemFn::Cosh => arg.cosh(),
        ElemFn::Arctan => arg.atan(),
    };
    if !value.is_finite() {
        return Err(Error::domain(
            "elem",
            format!("{} overflows at x = {}", func.name(), x.to_sci_string(20)),
        ));
    }
    Ok(BigReal::new(value, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn context_invariants() {
        let c = ctx(30);
        assert_eq!(c.working_digits(), 45);
        assert!(c.working_digits() >= c.digits() + 10);
        assert!(c.tail_tol().is_positive());
        assert_eq!(c.tail_tol().to_sci_string(5), "1.0000e-45");
        assert!(PrecisionContext::new(0).is_err());
        assert!(PrecisionContext::with_guard(30, 9).is_err());
        assert_eq!(
            PrecisionContext::with_guard(30, 25)
                .unwrap()
                .working_digits(),
            55
        );
    }

    #[test]
    fn pi_digits() {
        let pi = const_pi(ctx(30));
        assert!(pi
            .to_decimal_string()
            .starts_with("3.141592653589793238462643383279"));
        // guard digits are carried even for a tiny request
        let short = const_pi(ctx(5)).to_decimal_string();
        assert!(short.starts_with("3.14159265358979323"));
        assert_eq!(
            const_pi(ctx(30)).to_decimal_string(),
            pi.to_decimal_string()
        );
    }

    #[test]
    fn elementary_values() {
        let c = ctx(30);
        let two = BigReal::from_i64(2, c);
        let ln2 = elem(ElemFn::Ln, &two, c).unwrap();
        assert!(ln2
            .to_decimal_string()
            .starts_with("6.93147180559945309417232121458"));

        let one = BigReal::from_i64(1, c);
        let atan1 = elem(ElemFn::Arctan, &one, c).unwrap();
        let quarter_pi = BigReal::new(c.pi() / 4, c);
        assert!(atan1.agrees_to_digits(&quarter_pi, 44));
    }

    #[test]
    fn cosh_matches_exponential_definition() {
        let c = ctx(40);
        let x = BigReal::new(2 * c.pi().square() / c.ln(2), c);
        let cosh = elem(ElemFn::Cosh, &x, c).unwrap();
        let e = c.float(x.as_float()).exp();
        let by_def = BigReal::new((c.float(&e) + c.float(1) / e) / 2, c);
        assert!(cosh.agrees_to_digits(&by_def, 50));
        let approx = cosh.to_f64();
        assert!((1.16e12..1.17e12).contains(&approx), "{approx}");
    }

    #[test]
    fn domain_errors_name_the_function() {
        let c = ctx(20);
        let neg = BigReal::from_i64(-1, c);
        match elem(ElemFn::Ln, &neg, c) {
            Err(Error::Domain { detail, .. }) => assert!(detail.contains("ln")),
            other => panic!("{other:?}"),
        }
        assert!(elem(ElemFn::Sqrt, &neg, c).is_err());
        assert!(elem(ElemFn::Ln, &BigReal::from_i64(0, c), c).is_err());
        let zero = elem(ElemFn::Sqrt, &BigReal::from_i64(0, c), c).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn decimal_format_shapes() {
        let c = ctx(20);
        assert_eq!(BigReal::from_i64(0, c).to_decimal_string(), "0");
        assert_eq!(BigReal::from_i64(-20, c).to_decimal_string(), "-2e1");
        assert_eq!(
            BigReal::from_ratio(1, 8, c).unwrap().to_sci_string(3),
            "1.25e-1"
        );
        for bad in ["", "-", "1e", "e5", "1.2.3", "0x10", "1,5", " 1"] {
            assert!(BigReal::parse_decimal(bad, c).is_err(), "{bad:?}");
        }
        for good in ["1", "-1.5", "+.5", "3.", "2e-5", "-7.25E+3"] {
            assert!(BigReal::parse_decimal(good, c).is_ok(), "{good:?}");
        }
    }

    #[test]
    fn sinh_consistent_with_exp_on_grid() {
        let c = ctx(30);
        let tol = c.float(c.tail_tol_float()) * 10;
        for i in 1..=1000 {
            let x: Float = c.float(i) / 10u32;
            let s = elem(ElemFn::Sinh, &BigReal::new(x.clone(), c), c).unwrap();
            let e = x.exp();
            let by_def: Float = (c.float(&e) - c.float(1) / e) / 2u32;
            let diff: Float = c.float(s.as_float()) - &by_def;
            let rel = diff.abs() / by_def;
            assert!(rel <= tol, "x = {i}/10");
        }
    }
}
