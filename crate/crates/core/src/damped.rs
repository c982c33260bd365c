//! Summation of series damped by `1/sinh(a k)` or `1/cosh(a k)`.
//!
//! Every residue series in the crate has terms of the form
//! `poly(k) · h(a k)` with `h ∈ {1/sinh, 1/cosh}` and `deg poly <= degree`,
//! possibly times a bounded oscillating factor. The caller supplies each
//! term together with a non-negative envelope `>= |term|`. Summation stops
//! after the first term `k` whose envelope
//!
//! * is below `tol · (sum of envelopes so far)`,
//! * is smaller than the previous envelope, and
//! * sits past the point where the envelope ratio bound
//!   `((k+1)/k)^degree · e^{-a} · (1 + e^{-2a})` is at most 1/2.
//!
//! Under the third condition every later envelope at least halves, so the
//! omitted tail is at most the last included envelope; the reported bound is
//! twice that.

use rug::Float;

use crate::error::{Error, Result};

const MAX_TERMS: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub(crate) struct DampedSum {
    pub sum: Float,
    pub tail_bound: Float,
    pub terms: u64,
}

/// `e^{-a}(1 + e^{-2a})`, the k-independent part of the envelope ratio.
fn decay_ratio(a: f64) -> f64 {
    (-a).exp() * (1.0 + (-2.0 * a).exp())
}

fn ratio_bound(k: u64, degree: u32, a: f64) -> f64 {
    let growth = ((k as f64 + 1.0) / k as f64).powi(degree as i32);
    growth * decay_ratio(a)
}

/// Sums `term(k)` for `k = 1, 2, …` under the rule above.
///
/// `a` is the damping rate (the coefficient of `k` inside sinh/cosh) and
/// `tol` the relative tolerance.
pub(crate) fn sum_damped<F>(
    op: &'static str,
    prec: u32,
    a: f64,
    degree: u32,
    tol: &Float,
    mut term: F,
) -> Result<DampedSum>
where
    F: FnMut(u64) -> (Float, Float),
{
    if !(a.is_finite() && a > 0.0) || decay_ratio(a) >= 0.5 {
        return Err(Error::convergence(
            op,
            format!("damping rate {a} too small for a geometric tail bound"),
        ));
    }
    let mut sum = Float::with_val(prec, 0);
    let mut envelope_sum = Float::with_val(prec, 0);
    let mut previous: Option<Float> = None;
    for k in 1..=MAX_TERMS {
        let (value, envelope) = term(k);
        sum += &value;
        envelope_sum += &envelope;
        let small = Float::with_val(prec, &envelope) < Float::with_val(prec, tol * &envelope_sum);
        let decreasing = previous.as_ref().is_none_or(|p| envelope < *p);
        if small && decreasing && ratio_bound(k, degree, a) <= 0.5 {
            let tail_bound = Float::with_val(prec, &envelope * 2u32);
            return Ok(DampedSum {
                sum,
                tail_bound,
                terms: k,
            });
        }
        previous = Some(envelope);
    }
    Err(Error::convergence(
        op,
        format!("no tail bound reached within {MAX_TERMS} terms"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn geometric_series_bound_holds() {
        // Σ 1/cosh(3k) against a long reference sum.
        let prec = 256;
        let tol = Float::with_val(prec, Float::parse("1e-40").unwrap());
        let t = |k: u64| {
            let v = Float::with_val(prec, 3 * k).cosh().recip();
            (v.clone(), v)
        };
        let s = sum_damped("test", prec, 3.0, 0, &tol, t).unwrap();
        let mut reference = Float::with_val(prec, 0);
        for k in 1..200u64 {
            reference += Float::with_val(prec, 3 * k).cosh().recip();
        }
        let err = Float::with_val(prec, &reference - &s.sum).abs();
        assert!(err <= s.tail_bound);
        assert!(s.tail_bound < Float::with_val(prec, &tol * &reference) * 2u32);
    }

    #[test]
    fn polynomial_growth_is_waited_out() {
        // k^12 / sinh(2k) rises before it decays.
        let prec = 200;
        let tol = Float::with_val(prec, Float::parse("1e-30").unwrap());
        let t = |k: u64| {
            let v = Float::with_val(prec, k).pow(12u32) / Float::with_val(prec, 2 * k).sinh();
            (v.clone(), v)
        };
        let s = sum_damped("test", prec, 2.0, 12, &tol, t).unwrap();
        let mut reference = Float::with_val(prec, 0);
        for k in 1..400u64 {
            reference += Float::with_val(prec, k).pow(12u32) / Float::with_val(prec, 2 * k).sinh();
        }
        let err = Float::with_val(prec, &reference - &s.sum).abs();
        assert!(err <= s.tail_bound, "{err} > {}", s.tail_bound);
        assert!(s.terms > 6);
    }

    #[test]
    fn slow_damping_rejected() {
        let tol = Float::with_val(64, 1e-10);
        let r = sum_damped("test", 64, 0.5, 0, &tol, |_| {
            (Float::with_val(64, 1), Float::with_val(64, 1))
        });
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }
}
