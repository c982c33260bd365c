//! The sums `u_n(m) = ln(m) · Σ_{k∈ℤ} (m^{k/2} + m^{-k/2})^{-n}`, their exact
//! limits, and the hyperbolic correction series that separates the two.
//!
//! `u_n` sits just above `t_n ∈ ℚ ∪ πℚ`, where `t_1 = π`, `t_2 = 1` and
//! `t_n = (n-2)/(4(n-1)) · t_{n-2}`. The same factor links the sums
//! themselves up to a small positive correction:
//!
//! ```text
//! u_n = (n-2)/(4(n-1)) · u_{n-2} + r_n
//! ```
//!
//! with `r_n` a rapidly convergent series in `1/sinh(2kπ²/ln m)` (even `n`)
//! or `1/cosh(2kπ²/ln m)` (odd `n`). Everything here is real arithmetic.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::damped::sum_damped;
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};
use crate::rational::{ExactRational, ExactTarget};

/// Truncated series value together with a bound on the omitted remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: BigReal,
    pub tail_bound: BigReal,
    pub terms_used: u64,
}

impl SeriesValue {
    pub fn zero(ctx: PrecisionContext) -> Self {
        SeriesValue {
            value: BigReal::from_i64(0, ctx),
            tail_bound: BigReal::from_i64(0, ctx),
            terms_used: 0,
        }
    }
}

fn check_index(op: &'static str, n: u32, base_m: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(
            op,
            "n = 0: every term equals ln(m), the sum diverges",
        ));
    }
    if base_m < 2 {
        return Err(Error::domain(
            op,
            format!("base must be at least 2, got {base_m}"),
        ));
    }
    Ok(())
}

/// Direct bilateral summation of `u_n(m)`, folding `k` and `-k` together.
pub fn u_direct(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<SeriesValue> {
    check_index("u_direct", n, base_m)?;
    let prec = ctx.prec_bits();
    let ln_m = ctx.ln(base_m);
    let tol = ctx.tail_tol_float();

    // tail(K) = 2 ln(m) m^{-nK/2} / (1 - m^{-n/2}) bounds Σ_{|k|>K}.
    let half_n = f64::from(n) / 2.0;
    let log10_m = (base_m as f64).log10();
    let ratio = ctx.float(base_m).pow(-half_n);
    let one_minus_ratio = Float::with_val(prec, 1 - &ratio);
    let tail = |k: u64| -> Float {
        let decay = ctx.float(base_m).pow(-(half_n * k as f64));
        Float::with_val(prec, &ln_m * decay) * 2u32 / &one_minus_ratio
    };
    let estimate = (2.0 * (base_m as f64).ln()).log10()
        - one_minus_ratio.to_f64().log10()
        - ctx.tail_tol_log10();
    let mut terms = ((estimate / (half_n * log10_m)).ceil() as u64).max(1);
    let mut tail_bound = tail(terms);
    while tail_bound >= tol {
        terms += 1;
        tail_bound = tail(terms);
    }

    let root_m = ctx.float(base_m).sqrt();
    let mut folded = Float::with_val(prec, 0);
    for k in 1..=terms {
        let p = Float::with_val(prec, (&root_m).pow(k as u32));
        let inv = Float::with_val(prec, &p * &p) + 1u32;
        let base = p / inv;
        folded += base.pow(n);
    }
    let centre = ctx.float(2).pow(-(n as i64));
    let value = ln_m * (centre + folded * 2u32);
    Ok(SeriesValue {
        value: BigReal::new(value, ctx),
        tail_bound: BigReal::new(tail_bound, ctx),
        terms_used: terms + 1,
    })
}

/// `(n-2)/(4(n-1))`, the factor linking index `n` to `n - 2`.
pub fn recurrence_factor(n: u32) -> Result<ExactRational> {
    if n < 3 {
        return Err(Error::domain(
            "recurrence_factor",
            format!("needs n >= 3, got {n}"),
        ));
    }
    ExactRational::new(n - 2, 4 * (n - 1))
}

/// Exact limit `t_n` of the almost identity.
pub fn target(n: u32) -> Result<ExactTarget> {
    if n == 0 {
        return Err(Error::domain("target", "n must be positive"));
    }
    let mut q = ExactRational::from_integer(1);
    let mut index = if n % 2 == 1 { 1 } else { 2 };
    while index < n {
        index += 2;
        q = &q * &recurrence_factor(index)?;
    }
    Ok(ExactTarget {
        q,
        has_pi: n % 2 == 1,
    })
}

/// Constants shared by the coefficient formulas for one base.
struct CoeffConsts {
    pi: Float,
    ln_m: Float,
    /// `4π²/ln²m`
    w: Float,
}

impl CoeffConsts {
    fn new(base_m: u64, ctx: PrecisionContext) -> Self {
        let pi = ctx.pi();
        let ln_m = ctx.ln(base_m);
        let w = Float::with_val(ctx.prec_bits(), 4 * pi.clone().square()) / ln_m.clone().square();
        CoeffConsts { pi, ln_m, w }
    }

    /// `∏_{j=0}^{l-2} ((j + shift)² + w k²) / (2l - 2 + extra)!`
    fn product(&self, l: u32, k: u64, shift: f64, extra: u32, prec: u32) -> Float {
        let wk2 = Float::with_val(prec, &self.w * Float::with_val(prec, k).square());
        let mut acc = Float::with_val(prec, 1);
        for j in 0..l.saturating_sub(1) {
            let offset = Float::with_val(prec, f64::from(j) + shift).square();
            acc *= offset + &wk2;
        }
        let fact = Float::with_val(
            prec,
            rug::Integer::from(rug::Integer::factorial(2 * l - 2 + extra)),
        );
        acc / fact
    }

    fn c(&self, l: u32, k: u64, prec: u32) -> Float {
        self.product(l, k, 0.0, 0, prec)
    }

    fn b(&self, l: u32, k: u64, prec: u32) -> Float {
        let lead = Float::with_val(prec, &self.pi * k) * 2u32 / &self.ln_m;
        lead * self.product(l, k, 0.5, 1, prec)
    }
}

fn check_coeff_args(op: &'static str, l: u32, k: u64, base_m: u64) -> Result<()> {
    if l == 0 {
        return Err(Error::domain(op, "l must be at least 1"));
    }
    if k == 0 {
        return Err(Error::domain(op, "k must be positive"));
    }
    if base_m < 2 {
        return Err(Error::domain(
            op,
            format!("base must be at least 2, got {base_m}"),
        ));
    }
    Ok(())
}

/// Even-index coefficient `c_k = ∏_{j=0}^{l-2} (j² + 4π²k²/ln²m) / (2l-2)!`.
pub fn coeff_c(l: u32, k: u64, base_m: u64, ctx: PrecisionContext) -> Result<BigReal> {
    check_coeff_args("coeff_c", l, k, base_m)?;
    let consts = CoeffConsts::new(base_m, ctx);
    Ok(BigReal::new(consts.c(l, k, ctx.prec_bits()), ctx))
}

/// Odd-index coefficient
/// `b_k = 2πk ∏_{j=0}^{l-2} ((j+1/2)² + 4π²k²/ln²m) / (ln(m) · (2l-1)!)`.
pub fn coeff_b(l: u32, k: u64, base_m: u64, ctx: PrecisionContext) -> Result<BigReal> {
    check_coeff_args("coeff_b", l, k, base_m)?;
    let consts = CoeffConsts::new(base_m, ctx);
    Ok(BigReal::new(consts.b(l, k, ctx.prec_bits()), ctx))
}

/// Correction series `r_n(m)`.
///
/// `n = 1` is `Σ 2π/cosh(ak)`; otherwise the sum is
/// `2π/(ln(m)(n-1)) · Σ coeff_k · 2kπ/h(ak)` with `a = 2π²/ln m`,
/// `coeff = c` and `h = sinh` for even `n`, `coeff = b` and `h = cosh` for
/// odd `n`. The `l = 1` cases use the empty product.
pub fn r_correction(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<SeriesValue> {
    check_index("r_correction", n, base_m)?;
    let prec = ctx.prec_bits();
    let consts = CoeffConsts::new(base_m, ctx);
    let a = Float::with_val(prec, 2 * consts.pi.clone().square()) / &consts.ln_m;
    let a_f64 = a.to_f64();
    let tol = ctx.tail_tol_float();
    let two_pi = Float::with_val(prec, 2 * &consts.pi);
    let l = n / 2;

    let (sum, prefactor) = if n == 1 {
        let s = sum_damped("r_correction", prec, a_f64, 0, &tol, |k| {
            let v = Float::with_val(prec, &two_pi / Float::with_val(prec, &a * k).cosh());
            (v.clone(), v)
        })?;
        (s, ctx.float(1))
    } else {
        let even = n.is_multiple_of(2);
        // c_k has degree 2(l-1) in k, b_k degree 2l-1; one more from 2kπ.
        let degree = if even { 2 * l - 1 } else { 2 * l };
        let s = sum_damped("r_correction", prec, a_f64, degree, &tol, |k| {
            let ak = Float::with_val(prec, &a * k);
            let weight = Float::with_val(prec, &two_pi * k);
            let v = if even {
                consts.c(l, k, prec) * weight / ak.sinh()
            } else {
                consts.b(l, k, prec) * weight / ak.cosh()
            };
            (v.clone(), v)
        })?;
        let pre = Float::with_val(prec, &two_pi / &consts.ln_m) / (n - 1);
        (s, pre)
    };
    Ok(SeriesValue {
        value: BigReal::new(Float::with_val(prec, &prefactor * &sum.sum), ctx),
        tail_bound: BigReal::new(prefactor * sum.tail_bound, ctx),
        terms_used: sum.terms,
    })
}

/// Predicted gap `u_n − t_n`, accumulated from the corrections along the
/// recurrence chain: `D_n = r_n + (n-2)/(4(n-1)) · D_{n-2}`, `D_1 = r_1`,
/// `D_2 = r_2`.
pub fn predicted_delta(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<SeriesValue> {
    check_index("predicted_delta", n, base_m)?;
    let prec = ctx.prec_bits();
    let start = if n % 2 == 1 { 1 } else { 2 };
    let first = r_correction(start, base_m, ctx)?;
    let mut value = ctx.float(first.value.as_float());
    let mut tail = ctx.float(first.tail_bound.as_float());
    let mut terms = first.terms_used;
    let mut index = start;
    while index < n {
        index += 2;
        let factor = ctx.float(recurrence_factor(index)?.as_rational());
        let r = r_correction(index, base_m, ctx)?;
        value = Float::with_val(prec, &factor * &value) + r.value.as_float();
        tail = Float::with_val(prec, &factor * &tail) + r.tail_bound.as_float();
        terms += r.terms_used;
    }
    Ok(SeriesValue {
        value: BigReal::new(value, ctx),
        tail_bound: BigReal::new(tail, ctx),
        terms_used: terms,
    })
}

/// Full verification record for one `(n, m)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub n: u32,
    pub base_m: u64,
    pub digits: u32,
    pub u: SeriesValue,
    pub target: ExactTarget,
    /// `u − t_n`
    pub delta: BigReal,
    /// Predicted gap from the correction series; zero for an uncorrected check.
    pub r_predicted: SeriesValue,
    /// `delta − r_predicted`
    pub residual: BigReal,
    /// `u.tail_bound + r_predicted.tail_bound + 10^-digits`
    pub tolerance: BigReal,
}

impl IdentityReport {
    pub fn combined_tail_bound(&self) -> BigReal {
        let sum = Float::with_val(
            self.u.tail_bound.as_float().prec(),
            self.u.tail_bound.as_float() + self.r_predicted.tail_bound.as_float(),
        );
        BigReal::new(
            sum,
            PrecisionContext::new(self.digits).expect("digits validated"),
        )
    }

    pub fn passed(&self) -> bool {
        self.residual.abs() <= self.tolerance
    }
}

fn build_report(
    n: u32,
    base_m: u64,
    ctx: PrecisionContext,
    r_predicted: SeriesValue,
) -> Result<IdentityReport> {
    let prec = ctx.prec_bits();
    let u = u_direct(n, base_m, ctx)?;
    let target = target(n)?;
    let delta = Float::with_val(prec, u.value.as_float() - target.value(ctx).as_float());
    let residual = Float::with_val(prec, &delta - r_predicted.value.as_float());
    let tolerance = Float::with_val(
        prec,
        u.tail_bound.as_float() + r_predicted.tail_bound.as_float(),
    ) + ctx.pow10(-i64::from(ctx.digits()));
    Ok(IdentityReport {
        n,
        base_m,
        digits: ctx.digits(),
        u,
        target,
        delta: BigReal::new(delta, ctx),
        r_predicted,
        residual: BigReal::new(residual, ctx),
        tolerance: BigReal::new(tolerance, ctx),
    })
}

/// Checks `u_n(m) = t_n + D_n(m)` end to end.
pub fn verify_identity(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<IdentityReport> {
    let predicted = predicted_delta(n, base_m, ctx)?;
    build_report(n, base_m, ctx, predicted)
}

/// Checks the bare almost identity `u_n(m) = t_n`, which must fail at any
/// precision that resolves the gap.
pub fn verify_uncorrected(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<IdentityReport> {
    check_index("verify_uncorrected", n, base_m)?;
    build_report(n, base_m, ctx, SeriesValue::zero(ctx))
}

/// Residual of one step of the recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCheck {
    pub n: u32,
    pub base_m: u64,
    /// `u_n − (n-2)/(4(n-1)) · u_{n-2} − r_n`
    pub residual: BigReal,
    /// `tail(u_n) + (n-2)/(4(n-1)) · tail(u_{n-2}) + tail(r_n)`
    pub tail_bound: BigReal,
}

impl RecurrenceCheck {
    pub fn passed(&self) -> bool {
        self.residual.abs() <= self.tail_bound
    }
}

pub fn check_recurrence(n: u32, base_m: u64, ctx: PrecisionContext) -> Result<RecurrenceCheck> {
    if n < 3 {
        return Err(Error::domain(
            "check_recurrence",
            format!("needs n >= 3, got {n}"),
        ));
    }
    check_index("check_recurrence", n, base_m)?;
    let prec = ctx.prec_bits();
    let factor = ctx.float(recurrence_factor(n)?.as_rational());
    let upper = u_direct(n, base_m, ctx)?;
    let lower = u_direct(n - 2, base_m, ctx)?;
    let r = r_correction(n, base_m, ctx)?;
    let residual = Float::with_val(
        prec,
        upper.value.as_float() - &factor * lower.value.as_float(),
    ) - r.value.as_float();
    let tail = Float::with_val(
        prec,
        upper.tail_bound.as_float() + &factor * lower.tail_bound.as_float(),
    ) + r.tail_bound.as_float();
    Ok(RecurrenceCheck {
        n,
        base_m,
        residual: BigReal::new(residual, ctx),
        tail_bound: BigReal::new(tail, ctx),
    })
}

/// One cell of a scan; failures stay attached to their cell.
#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub n: u32,
    pub base_m: u64,
    pub outcome: Result<IdentityReport>,
}

/// Runs [`verify_identity`] over the grid, ordered by `(base_m, n)`.
pub fn scan(ns: &[u32], bases: &[u64], ctx: PrecisionContext) -> Vec<ScanEntry> {
    let mut cells: Vec<(u64, u32)> = bases
        .iter()
        .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
        .collect();
    cells.sort();
    cells
        .into_par_iter()
        .map(|(base_m, n)| ScanEntry {
            n,
            base_m,
            outcome: verify_identity(n, base_m, ctx),
        })
        .collect()
}
