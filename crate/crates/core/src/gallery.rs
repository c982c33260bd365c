//! Classical near-miss constants, reproduced at high precision.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};

/// Largest requested precision for [`borwein_sum`].
pub const BORWEIN_MAX_DIGITS: u32 = 2000;
/// Smallest requested precision for [`ramanujan_constant`].
pub const RAMANUJAN_MIN_DIGITS: u32 = 40;
pub const RAMANUJAN_DISCRIMINANTS: [u32; 3] = [37, 58, 163];

/// The nice quantity a gallery value is close to.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    Integer(Integer),
    Real(BigReal),
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::Integer(i) => write!(f, "{i}"),
            Reference::Real(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryEntry {
    pub id: String,
    pub description: String,
    pub value: BigReal,
    pub reference: Reference,
    /// `value − reference`
    pub delta: BigReal,
    pub digits: u32,
    /// Outcome of the entry's own assertion, `None` for purely descriptive entries.
    pub check: Option<bool>,
}

fn real_entry(
    id: String,
    description: &str,
    value: Float,
    reference: Float,
    ctx: PrecisionContext,
) -> GalleryEntry {
    let delta = Float::with_val(ctx.prec_bits(), &value - &reference);
    GalleryEntry {
        id,
        description: description.to_string(),
        value: BigReal::new(value, ctx),
        reference: Reference::Real(BigReal::new(reference, ctx)),
        delta: BigReal::new(delta, ctx),
        digits: ctx.digits(),
        check: None,
    }
}

/// `exp(π√d)` against its nearest integer.
pub fn ramanujan_constant(d: u32, ctx: PrecisionContext) -> Result<GalleryEntry> {
    if !RAMANUJAN_DISCRIMINANTS.contains(&d) {
        return Err(Error::domain(
            "ramanujan_constant",
            format!("d must be one of {RAMANUJAN_DISCRIMINANTS:?}, got {d}"),
        ));
    }
    if ctx.digits() < RAMANUJAN_MIN_DIGITS {
        return Err(Error::domain(
            "ramanujan_constant",
            format!(
                "needs at least {RAMANUJAN_MIN_DIGITS} digits, got {}",
                ctx.digits()
            ),
        ));
    }
    let prec = ctx.prec_bits();
    let value = Float::with_val(prec, ctx.pi() * ctx.float(d).sqrt()).exp();
    let nearest = value.clone().round().to_integer().expect("finite");
    let delta = Float::with_val(prec, &value - &nearest);
    Ok(GalleryEntry {
        id: format!("ramanujan{d}"),
        description: format!("exp(pi*sqrt({d})) against the nearest integer"),
        value: BigReal::new(value, ctx),
        reference: Reference::Integer(nearest),
        delta: BigReal::new(delta, ctx),
        digits: ctx.digits(),
        check: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MiscConstant {
    /// Mean distance between two points of the unit isosceles right triangle.
    TriangleL,
    EPiMinusPi,
}

impl MiscConstant {
    pub fn id(self) -> &'static str {
        match self {
            MiscConstant::TriangleL => "triangle_l",
            MiscConstant::EPiMinusPi => "e_pi_minus_pi",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "triangle_l" => Ok(MiscConstant::TriangleL),
            "e_pi_minus_pi" => Ok(MiscConstant::EPiMinusPi),
            other => Err(Error::domain(
                "misc_constant",
                format!("unknown constant {other:?}"),
            )),
        }
    }
}

pub fn misc_constant(which: MiscConstant, ctx: PrecisionContext) -> GalleryEntry {
    let prec = ctx.prec_bits();
    let pi = ctx.pi();
    match which {
        MiscConstant::TriangleL => {
            // (2 + 4√2 + (4 + √2) asinh 1) / 30, asinh 1 = ln(1 + √2)
            let sqrt2 = ctx.float(2).sqrt();
            let asinh1 = Float::with_val(prec, &sqrt2 + 1u32).ln();
            let linear = Float::with_val(prec, &sqrt2 * 4u32) + 2u32;
            let weight = Float::with_val(prec, &sqrt2 + 4u32);
            let value = (linear + weight * asinh1) / 30u32;
            let reference = sqrt2 - 1u32;
            real_entry(
                which.id().to_string(),
                "mean segment length in the unit isosceles right triangle against sqrt(2) - 1",
                value,
                reference,
                ctx,
            )
        }
        MiscConstant::EPiMinusPi => {
            let value = Float::with_val(prec, pi.exp_ref()) - &pi;
            real_entry(
                which.id().to_string(),
                "e^pi - pi against 20",
                value,
                ctx.float(20),
                ctx,
            )
        }
    }
}

/// `Σ_{k∈ℤ} 10^{-(k/100)²}` against `100 √(π / ln 10)`.
pub fn borwein_sum(ctx: PrecisionContext) -> Result<GalleryEntry> {
    if ctx.digits() > BORWEIN_MAX_DIGITS {
        return Err(Error::domain(
            "borwein_sum",
            format!(
                "limited to {BORWEIN_MAX_DIGITS} digits, got {}",
                ctx.digits()
            ),
        ));
    }
    let prec = ctx.prec_bits();
    let ln10 = ctx.ln(10);
    let cutoff = u64::from(ctx.working_digits()) + 1;
    let mut sum = ctx.float(0);
    let mut k: u64 = 1;
    // stop once (k/100)² > working_digits + 1
    while k * k <= cutoff * 10_000 {
        let exponent = Float::with_val(prec, k * k) / 10_000u32;
        sum += Float::with_val(prec, -(exponent * &ln10)).exp();
        k += 1;
    }
    let value = sum * 2u32 + 1u32;
    let reference = Float::with_val(prec, ctx.pi() / &ln10).sqrt() * 100u32;
    let mut entry = real_entry(
        "borwein".to_string(),
        "sum over k of 10^(-(k/100)^2) against 100*sqrt(pi/ln 10)",
        value,
        reference,
        ctx,
    );
    let bound = ctx.pow10(-i64::from(ctx.digits()));
    entry.check = Some(*entry.delta.abs().as_float() < bound);
    Ok(entry)
}

/// Ordered Bell numbers `a(0..=n)`: `a(0) = 1`, `a(j) = Σ_{i=1}^{j} C(j,i) a(j−i)`.
pub fn ordered_bell_numbers(n: u32) -> Vec<Integer> {
    let mut a: Vec<Integer> = Vec::with_capacity(n as usize + 1);
    a.push(Integer::from(1));
    for j in 1..=n {
        let mut total = Integer::new();
        for i in 1..=j {
            let binom = Integer::from(Integer::binomial_u(j, i));
            total += binom * &a[(j - i) as usize];
        }
        a.push(total);
    }
    a
}

/// `n! / (2 (ln 2)^{n+1})` against the number of weak orderings of `n` items.
///
/// `check` is `round(value) == a(n)`. It holds for `n <= 16`; at `n = 17` the
/// quotient sits 0.542 below `a(17)` and rounds to `a(17) − 1`.
pub fn hickerson(n: u32, ctx: PrecisionContext) -> Result<GalleryEntry> {
    if !(1..=17).contains(&n) {
        return Err(Error::domain(
            "hickerson",
            format!("n must be in 1..=17, got {n}"),
        ));
    }
    let prec = ctx.prec_bits();
    let ln2 = ctx.ln(2);
    let value = ctx.factorial(n) / (ln2.pow(n + 1) * 2u32);
    let exact = ordered_bell_numbers(n).pop().expect("non-empty");
    let delta = Float::with_val(prec, &value - &exact);
    let rounded = value.clone().round().to_integer().expect("finite");
    Ok(GalleryEntry {
        id: format!("hickerson{n}"),
        description: format!(
            "{n}!/(2 ln(2)^{}) against the ordered Bell number a({n})",
            n + 1
        ),
        value: BigReal::new(value, ctx),
        check: Some(rounded == exact),
        reference: Reference::Integer(exact),
        delta: BigReal::new(delta, ctx),
        digits: ctx.digits(),
    })
}

/// Every gallery item identifier accepted by [`gallery_item`].
pub fn gallery_ids() -> Vec<String> {
    let mut ids: Vec<String> = RAMANUJAN_DISCRIMINANTS
        .iter()
        .map(|d| format!("ramanujan{d}"))
        .collect();
    ids.push(MiscConstant::TriangleL.id().to_string());
    ids.push(MiscConstant::EPiMinusPi.id().to_string());
    ids.push("borwein".to_string());
    ids.extend((1..=17).map(|n| format!("hickerson{n}")));
    ids
}

/// Computes one entry by identifier.
pub fn gallery_item(id: &str, ctx: PrecisionContext) -> Result<GalleryEntry> {
    if let Some(d) = id.strip_prefix("ramanujan") {
        let d = d
            .parse()
            .map_err(|_| Error::domain("gallery", format!("unknown item {id:?}")))?;
        return ramanujan_constant(d, ctx);
    }
    if let Some(n) = id.strip_prefix("hickerson") {
        let n = n
            .parse()
            .map_err(|_| Error::domain("gallery", format!("unknown item {id:?}")))?;
        return hickerson(n, ctx);
    }
    if id == "borwein" {
        return borwein_sum(ctx);
    }
    Ok(misc_constant(MiscConstant::from_id(id)?, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn ordered_bell_prefix() {
        let a: Vec<u64> = ordered_bell_numbers(8)
            .iter()
            .map(|i| i.to_u64().unwrap())
            .collect();
        assert_eq!(a, vec![1, 1, 3, 13, 75, 541, 4683, 47293, 545835]);
    }

    #[test]
    fn hickerson_small() {
        let h1 = hickerson(1, ctx(20)).unwrap();
        assert!((1.04..1.05).contains(&h1.value.to_f64()));
        assert_eq!(h1.check, Some(true));
        let h5 = hickerson(5, ctx(20)).unwrap();
        assert_eq!(h5.reference, Reference::Integer(Integer::from(541)));
        assert_eq!(h5.check, Some(true));
        assert!(hickerson(0, ctx(20)).is_err());
        assert!(hickerson(18, ctx(20)).is_err());
    }

    #[test]
    fn hickerson_17_rounds_one_low() {
        let h = hickerson(17, ctx(40)).unwrap();
        assert_eq!(
            h.reference,
            Reference::Integer("130370767029135901".parse().unwrap())
        );
        assert!(h.delta.to_sci_string(3).starts_with("-5.42"));
        assert_eq!(h.check, Some(false));
        assert!((1..=16).all(|n| hickerson(n, ctx(40)).unwrap().check == Some(true)));
    }

    #[test]
    fn ramanujan_163() {
        let e = ramanujan_constant(163, ctx(50)).unwrap();
        assert_eq!(
            e.reference,
            Reference::Integer("262537412640768744".parse().unwrap())
        );
        assert!(
            e.delta.to_sci_string(4).starts_with("-7.499"),
            "{}",
            e.delta.to_sci_string(4)
        );
        assert!(ramanujan_constant(163, ctx(39)).is_err());
        assert!(ramanujan_constant(19, ctx(50)).is_err());
    }

    #[test]
    fn misc_values() {
        let t = misc_constant(MiscConstant::TriangleL, ctx(30));
        assert!(
            t.value.to_decimal_string().starts_with("4.142933025"),
            "{}",
            t.value.to_decimal_string()
        );
        let d = t.delta.to_f64();
        assert!((7.9e-5..8.0e-5).contains(&d), "{d}");
        let e = misc_constant(MiscConstant::EPiMinusPi, ctx(30));
        assert!(e.value.to_decimal_string().starts_with("1.9999099979"));
    }

    #[test]
    fn borwein_small_precision_and_cap() {
        let e = borwein_sum(ctx(50)).unwrap();
        assert_eq!(e.check, Some(true));
        assert!(borwein_sum(ctx(2001)).is_err());
    }

    #[test]
    fn ids_resolve() {
        let c = ctx(40);
        for id in gallery_ids() {
            assert_eq!(gallery_item(&id, c).unwrap().id, id);
        }
        assert!(gallery_item("ramanujanX", c).is_err());
        assert!(gallery_item("nope", c).is_err());
    }
}
