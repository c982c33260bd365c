//! Trapezoidal quadrature over the whole real line with step halving.
//!
//! Integrands here come from `x = e^t` substitutions of Mellin integrals,
//! so they are analytic in a strip around the real axis and decay
//! exponentially at both ends. For such functions the trapezoid error falls
//! like `exp(-2πd/h)`: every halving roughly squares it.

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};

/// Envelope of `|h(t)|` on both tails:
///
/// * `t <= 0`: `(lower_c1·|t| + lower_c0) · e^{lower_rate·t}`
/// * `t >= 0`: `upper_c · e^{-upper_rate·t}`
#[derive(Clone, Copy, Debug)]
pub(crate) struct TailEnvelope {
    pub lower_c1: f64,
    pub lower_c0: f64,
    pub lower_rate: f64,
    pub upper_c: f64,
    pub upper_rate: f64,
}

impl TailEnvelope {
    /// `ln ∫_{-∞}^{-L} envelope`.
    fn ln_lower_tail(&self, l: f64) -> f64 {
        let g = self.lower_rate;
        let poly = self.lower_c1 * (l / g + 1.0 / (g * g)) + self.lower_c0 / g;
        -g * l + poly.ln()
    }

    /// `ln ∫_{L}^{∞} envelope`.
    fn ln_upper_tail(&self, l: f64) -> f64 {
        -self.upper_rate * l + (self.upper_c / self.upper_rate).ln()
    }

    /// Interval `[a, b]` outside of which the integral is below `e^{ln_tol}` on each side.
    pub fn cutoffs(&self, ln_tol: f64) -> (f64, f64) {
        let solve = |f: &dyn Fn(f64) -> f64, rate: f64| -> f64 {
            let mut l = (f(0.0) - ln_tol).max(0.0) / rate;
            while f(l) > ln_tol {
                l += 1.0;
            }
            l.ceil()
        };
        let a = solve(&|l| self.ln_lower_tail(l), self.lower_rate);
        let b = solve(&|l| self.ln_upper_tail(l), self.upper_rate);
        (-a, b)
    }
}

const START_STEP: f64 = 1.0;
const MIN_LEVELS: u32 = 3;
const MAX_LEVELS: u32 = 14;

/// Integrates `h` over ℝ. `tol` is the absolute agreement required between
/// successive halvings; `ln_tail_tol` bounds each discarded tail.
pub(crate) fn integrate_real_line<F>(
    op: &'static str,
    prec: u32,
    envelope: TailEnvelope,
    ln_tail_tol: f64,
    tol: &Float,
    h: F,
) -> Result<Float>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    if !(envelope.lower_rate > 0.0 && envelope.upper_rate > 0.0) {
        return Err(Error::domain(op, "integrand does not decay on both tails"));
    }
    let (a, b) = envelope.cutoffs(ln_tail_tol);

    // Sum of h(j·step) over the given indices, in index order.
    let eval = |indices: Vec<i64>, step: f64| -> Result<Float> {
        let values: Vec<Result<Float>> = indices
            .par_iter()
            .map(|&j| {
                let t = Float::with_val(prec, j) * step;
                h(&t)
            })
            .collect();
        let mut sum = Float::with_val(prec, 0);
        for v in values {
            sum += v?;
        }
        Ok(sum)
    };

    let mut step = START_STEP;
    let lo = (a / step).ceil() as i64;
    let hi = (b / step).floor() as i64;
    let sum = eval((lo..=hi).collect(), step)?;
    let mut estimate = Float::with_val(prec, &sum * step);
    let mut last_change = Float::with_val(prec, f64::INFINITY);

    for level in 1..=MAX_LEVELS {
        step /= 2.0;
        let lo = (a / step).ceil() as i64;
        let hi = (b / step).floor() as i64;
        let odd: Vec<i64> = (lo..=hi).filter(|j| j.rem_euclid(2) == 1).collect();
        let fresh = eval(odd, step)?;
        let refined =
            Float::with_val(prec, &estimate / 2u32) + Float::with_val(prec, &fresh * step);
        last_change = Float::with_val(prec, &refined - &estimate).abs();
        estimate = refined;
        if level >= MIN_LEVELS && last_change <= *tol {
            return Ok(estimate);
        }
    }
    Err(Error::convergence(
        op,
        format!(
            "successive trapezoid estimates still differ by {} after {MAX_LEVELS} halvings",
            last_change.to_f64()
        ),
    ))
}
