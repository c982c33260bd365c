//! Numerical checks of the Mellin-transform machinery behind the sums.
//!
//! Three kernel families are involved:
//!
//! * `g1(x) = -2(arctan √x − π/2)`, transform `π / (s cos πs)` on `0 < s < 1/2`
//! * `g2(x) = 1/(1+x)`, transform `π / sin πs` on `0 < s < 1`
//! * `f_n(x) = (√x/(1+x))^{n-2} (1−x)/(1+x)` for `n >= 3`, whose transform
//!   reduces to a trigonometric expression times a polynomial in `s`
//!
//! Their dyadic harmonic sums `G(x) = Σ_{k>=1} g(2^k x)` have transform
//! `g*(s)/(2^s − 1)`. For `g1` and `g2` the residue expansion of `G` is
//! evaluated and compared with direct summation.
//!
//! Transforms are computed by the substitution `x = e^t` and the trapezoid
//! rule in [`crate::quadrature`].

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;

use crate::damped::sum_damped;
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};
use crate::quadrature::{integrate_real_line, TailEnvelope};

/// Kernel whose Mellin transform is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MellinFunction {
    G1,
    G2,
    /// `f_n`, `n >= 3`
    F(u32),
}

/// Bounds used to truncate sums and integrals:
/// `|g(y) − at_zero| <= near_zero.0 · y^{near_zero.1}` for `y <= 1` and
/// `|g(y)| <= at_infinity.0 · y^{-at_infinity.1}` for `y >= 1`.
#[derive(Clone, Copy, Debug)]
struct KernelBounds {
    at_zero: f64,
    near_zero: (f64, f64),
    at_infinity: (f64, f64),
}

impl MellinFunction {
    pub fn new_f(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(
                "MellinFunction",
                format!("f_n needs n >= 3, got {n}"),
            ));
        }
        Ok(MellinFunction::F(n))
    }

    pub fn label(&self) -> String {
        match self {
            MellinFunction::G1 => "g1".to_string(),
            MellinFunction::G2 => "g2".to_string(),
            MellinFunction::F(n) => format!("fn({n})"),
        }
    }

    /// Open interval of real `s` where the transform integral converges.
    pub fn strip(&self) -> (f64, f64) {
        match *self {
            MellinFunction::G1 => (0.0, 0.5),
            MellinFunction::G2 => (0.0, 1.0),
            MellinFunction::F(n) => {
                let half = f64::from(n - 2) / 2.0;
                (-half, half)
            }
        }
    }

    fn bounds(&self) -> KernelBounds {
        match *self {
            // π − g1(y) = 2 arctan √y <= 2√y; g1(y) = 2 arctan(1/√y) <= 2/√y
            MellinFunction::G1 => KernelBounds {
                at_zero: std::f64::consts::PI,
                near_zero: (2.0, 0.5),
                at_infinity: (2.0, 0.5),
            },
            MellinFunction::G2 => KernelBounds {
                at_zero: 1.0,
                near_zero: (1.0, 1.0),
                at_infinity: (1.0, 1.0),
            },
            MellinFunction::F(n) => {
                let e = f64::from(n - 2) / 2.0;
                KernelBounds {
                    at_zero: 0.0,
                    near_zero: (1.0, e),
                    at_infinity: (1.0, e),
                }
            }
        }
    }

    /// Kernel value at `x > 0`.
    fn eval(&self, x: &Float, prec: u32) -> Float {
        match *self {
            MellinFunction::G1 => {
                let r = Float::with_val(prec, x.sqrt_ref()).recip();
                r.atan() * 2u32
            }
            MellinFunction::G2 => Float::with_val(prec, x + 1u32).recip(),
            MellinFunction::F(n) => f_kernel(n, x, prec),
        }
    }

    fn check_in_strip(&self, op: &'static str, s: &Float) -> Result<()> {
        let (lo, hi) = self.strip();
        if !(s.is_finite() && *s > lo && *s < hi) {
            return Err(Error::domain(
                op,
                format!(
                    "s = {} outside the strip ({lo}, {hi}) of {}",
                    s.to_f64(),
                    self.label()
                ),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for MellinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Accepts `g1`, `g2`, `fn(5)`, `fn5` and `f5`.
impl FromStr for MellinFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "g1" => return Ok(MellinFunction::G1),
            "g2" => return Ok(MellinFunction::G2),
            _ => {}
        }
        let digits = t
            .strip_prefix("fn")
            .or_else(|| t.strip_prefix('f'))
            .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'));
        match digits.and_then(|d| d.parse::<u32>().ok()) {
            Some(n) => MellinFunction::new_f(n),
            None => Err(Error::domain(
                "MellinFunction",
                format!("unknown function {s:?}"),
            )),
        }
    }
}

fn f_kernel(n: u32, x: &Float, prec: u32) -> Float {
    let one_plus = Float::with_val(prec, x + 1u32);
    let ratio = Float::with_val(prec, x.sqrt_ref()) / &one_plus;
    let sign_part = Float::with_val(prec, 1u32 - x) / one_plus;
    ratio.pow(n - 2) * sign_part
}

/// `f_n(x) = (√x/(1+x))^{n-2} (1−x)/(1+x)`.
pub fn f_n(n: u32, x: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    if n < 3 {
        return Err(Error::domain("f_n", format!("needs n >= 3, got {n}")));
    }
    if !x.is_positive() {
        return Err(Error::domain("f_n", "x must be positive"));
    }
    Ok(BigReal::new(
        f_kernel(n, x.as_float(), ctx.prec_bits()),
        ctx,
    ))
}

/// Agreement threshold `10^-(digits-5)` for the cross-checks in this module.
pub fn check_threshold(ctx: PrecisionContext) -> BigReal {
    let exp = i64::from(ctx.digits()) - 5;
    BigReal::new(ctx.pow10(-exp), ctx)
}

fn quadrature_tol(ctx: PrecisionContext) -> (Float, f64) {
    let tol = ctx.pow10(-i64::from(ctx.digits()));
    // each discarded tail below tail_tol / 4
    let ln_tail = ctx.tail_tol_log10() * std::f64::consts::LN_10 - 4f64.ln();
    (tol, ln_tail)
}

/// `∫_0^∞ g(x) x^{s-1} dx` by trapezoid on `x = e^t`.
pub fn mellin_numeric(func: MellinFunction, s: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    let prec = ctx.prec_bits();
    let s = ctx.float(s.as_float());
    func.check_in_strip("mellin_numeric", &s)?;
    let sf = s.to_f64();
    let b = func.bounds();
    // |g(x)| <= at_zero + near_zero.0 for x <= 1
    let (lower_c0, lower_rate) = if b.at_zero == 0.0 {
        (b.near_zero.0, b.near_zero.1 + sf)
    } else {
        (b.at_zero + b.near_zero.0, sf)
    };
    let envelope = TailEnvelope {
        lower_c1: 0.0,
        lower_c0,
        lower_rate,
        upper_c: b.at_infinity.0,
        upper_rate: b.at_infinity.1 - sf,
    };
    let (tol, ln_tail) = quadrature_tol(ctx);
    let q = integrate_real_line("mellin_numeric", prec, envelope, ln_tail, &tol, |t| {
        let x = Float::with_val(prec, t.exp_ref());
        let weight = Float::with_val(prec, &s * t).exp();
        Ok(func.eval(&x, prec) * weight)
    })?;
    Ok(BigReal::new(q, ctx))
}

/// Closed-form transform on the real axis.
pub fn mellin_closed(func: MellinFunction, s: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    let prec = ctx.prec_bits();
    let s = ctx.float(s.as_float());
    func.check_in_strip("mellin_closed", &s)?;
    let pi = ctx.pi();
    let pi_s = Float::with_val(prec, &pi * &s);
    let guard = ctx.tail_tol_float();
    let near_pole = |den: &Float| Float::with_val(prec, den.abs_ref()) < guard;
    let pole_error = || {
        Error::domain(
            "mellin_closed",
            format!("{} has a pole at s = {}", func.label(), s.to_f64()),
        )
    };
    let value = match func {
        MellinFunction::G1 => {
            let den = Float::with_val(prec, pi_s.cos_ref()) * &s;
            if near_pole(&den) {
                return Err(pole_error());
            }
            pi / den
        }
        MellinFunction::G2 => {
            let den = Float::with_val(prec, pi_s.sin_ref());
            if near_pole(&den) {
                return Err(pole_error());
            }
            pi / den
        }
        MellinFunction::F(n) => {
            let s2 = Float::with_val(prec, s.square_ref());
            if n % 2 == 0 {
                // 2/(2l-2)! · π/sin πs · ∏_{j=0}^{l-2} (j² − s²)
                let l = n / 2;
                let den = Float::with_val(prec, pi_s.sin_ref());
                if near_pole(&den) {
                    return Err(pole_error());
                }
                let mut prod = ctx.float(1);
                for j in 0..l - 1 {
                    prod *= Float::with_val(prec, j * j) - &s2;
                }
                let fact = ctx.factorial(2 * l - 2);
                Float::with_val(prec, 2u32 * pi / den) * prod / fact
            } else {
                // 2/(2l-1)! · (−πs/cos πs) · ∏_{j=0}^{l-2} ((j+1/2)² − s²)
                let l = (n - 1) / 2;
                let den = Float::with_val(prec, pi_s.cos_ref());
                if near_pole(&den) {
                    return Err(pole_error());
                }
                let mut prod = ctx.float(1);
                for j in 0..l - 1 {
                    let shifted = Float::with_val(prec, f64::from(j) + 0.5).square();
                    prod *= shifted - &s2;
                }
                let fact = ctx.factorial(2 * l - 1);
                let lead = Float::with_val(prec, -(2u32 * pi_s)) / den;
                lead * prod / fact
            }
        }
    };
    Ok(BigReal::new(value, ctx))
}

/// Quadrature against closed form at one `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct MellinCheck {
    pub function: MellinFunction,
    pub s: BigReal,
    pub numeric: BigReal,
    pub closed: BigReal,
    pub abs_err: BigReal,
    pub threshold: BigReal,
}

impl MellinCheck {
    pub fn passed(&self) -> bool {
        self.abs_err < self.threshold
    }
}

pub fn mellin_check(
    func: MellinFunction,
    s: &BigReal,
    ctx: PrecisionContext,
) -> Result<MellinCheck> {
    let numeric = mellin_numeric(func, s, ctx)?;
    let closed = mellin_closed(func, s, ctx)?;
    let err = Float::with_val(ctx.prec_bits(), numeric.as_float() - closed.as_float()).abs();
    Ok(MellinCheck {
        function: func,
        s: BigReal::new(ctx.float(s.as_float()), ctx),
        numeric,
        closed,
        abs_err: BigReal::new(err, ctx),
        threshold: check_threshold(ctx),
    })
}

/// `Σ_{k>=1} g(2^k x)` to absolute accuracy `2^{eps_log2}`.
///
/// Leading terms with `2^k x` tiny are replaced by `g(0)` and trailing terms
/// with `2^k x` huge are dropped, each within half the budget.
fn harmonic_sum(func: MellinFunction, x: &Float, eps_log2: f64, prec: u32) -> Float {
    let b = func.bounds();
    let lx = Float::with_val(prec, x.log2_ref()).to_f64();
    let budget = eps_log2 - 1.0;

    let (a0, e0) = b.near_zero;
    let lead = (a0 / (1.0 - (-e0).exp2())).log2();
    // Σ_{k=1}^{k0} a0 (2^k x)^{e0} <= a0 (2^{k0} x)^{e0} / (1 − 2^{-e0})
    let k0 = ((budget - lead) / e0 - lx).floor() - 1.0;
    let skip = if k0 > 0.0 { k0 as u64 } else { 0 };

    let (ai, ei) = b.at_infinity;
    let trail = (ai / (1.0 - (-ei).exp2())).log2();
    // Σ_{k>K} ai (2^k x)^{-ei} <= ai (2^{K+1} x)^{-ei} / (1 − 2^{-ei})
    let k_end = ((trail - budget) / ei - lx).ceil() as i64;
    let last = (k_end.max(0) as u64).max(skip);

    let mut sum = Float::with_val(prec, b.at_zero) * skip;
    let mut y = Float::with_val(prec, x * Float::with_val(prec, 2).pow(skip + 1));
    for _ in skip + 1..=last {
        sum += func.eval(&y, prec);
        y *= 2u32;
    }
    sum
}

fn check_dual_index(op: &'static str, n: u32) -> Result<MellinFunction> {
    match n {
        1 => Ok(MellinFunction::G1),
        2 => Ok(MellinFunction::G2),
        _ => Err(Error::domain(op, format!("n must be 1 or 2, got {n}"))),
    }
}

/// `G_n(x) = Σ_{k>=1} g_n(2^k x)` by direct summation, `n ∈ {1, 2}`.
pub fn g_direct(n: u32, x: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    let func = check_dual_index("g_direct", n)?;
    if !x.is_positive() {
        return Err(Error::domain("g_direct", "x must be positive"));
    }
    let prec = ctx.prec_bits();
    let eps_log2 = ctx.tail_tol_log10() * std::f64::consts::LOG2_10;
    Ok(BigReal::new(
        harmonic_sum(func, x.as_float(), eps_log2, prec),
        ctx,
    ))
}

/// Residue expansion of `G_n(x)` for `0 < x < 1/2`: logarithmic part, power
/// series, and oscillatory series in `sin(2kπ log₂ x)`.
pub fn g_expansion(n: u32, x: &BigReal, ctx: PrecisionContext) -> Result<BigReal> {
    check_dual_index("g_expansion", n)?;
    let prec = ctx.prec_bits();
    let xf = ctx.float(x.as_float());
    if !(xf > 0 && xf < 0.5) {
        return Err(Error::domain(
            "g_expansion",
            format!("x = {} outside (0, 1/2)", x.to_sci_string(20)),
        ));
    }
    let pi = ctx.pi();
    let ln2 = ctx.ln(2);
    let log2x = Float::with_val(prec, xf.log2_ref());
    let tol = ctx.tail_tol_float();
    let a = Float::with_val(prec, 2 * pi.clone().square()) / &ln2;
    let two_pi_log2x = Float::with_val(prec, &pi * &log2x) * 2u32;

    // Power series Σ coeff_k x^k, truncated once coeff_bound · x^{K+1}/(1−x) < tol.
    let power_series = |first: u32, coeff_bound: f64, coeff: &dyn Fn(u32) -> Float| -> Float {
        let mut sum = ctx.float(0);
        let mut power = Float::with_val(prec, &xf).pow(first);
        let one_minus = Float::with_val(prec, 1 - &xf);
        let mut k = first;
        loop {
            sum += coeff(k) * &power;
            power *= &xf;
            let tail = Float::with_val(prec, &power * coeff_bound) / &one_minus;
            if tail < tol {
                return sum;
            }
            k += 1;
        }
    };

    let value = if n == 1 {
        let sqrt2 = ctx.float(2).sqrt();
        // (−2)^{k+2} / ((1+2k)(2^{k+1} − √2)); magnitude <= 2/(1 − 1/√2) < 7
        let coeff = |k: u32| {
            let num = ctx.float(-2).pow(k + 2);
            let den = Float::with_val(prec, ctx.float(2).pow(k + 1) - &sqrt2) * (2 * k + 1);
            num / den
        };
        let series = power_series(0, 7.0, &coeff) * Float::with_val(prec, xf.sqrt_ref());
        let osc = sum_damped("g_expansion", prec, a.to_f64(), 0, &tol, |k| {
            let damp = Float::with_val(prec, &a * k).cosh() * k;
            let envelope = Float::with_val(prec, damp.recip_ref());
            let v = Float::with_val(prec, &two_pi_log2x * k).sin() * &envelope;
            (v, envelope)
        })?;
        let half_pi = Float::with_val(prec, &pi / 2u32);
        -half_pi - Float::with_val(prec, &pi * &log2x) + series - osc.sum
    } else {
        // (−2)^k / (2^k − 1); magnitude <= 2
        let coeff = |k: u32| {
            let num = ctx.float(-2).pow(k);
            let den = ctx.float(2).pow(k) - 1u32;
            num / den
        };
        let series = power_series(1, 2.0, &coeff);
        let osc = sum_damped("g_expansion", prec, a.to_f64(), 0, &tol, |k| {
            let envelope = Float::with_val(prec, &a * k).sinh().recip();
            let v = Float::with_val(prec, &two_pi_log2x * k).sin() * &envelope;
            (v, envelope)
        })?;
        let osc = Float::with_val(prec, 2 * &pi) / &ln2 * osc.sum;
        ctx.float(-0.5) - &log2x - series - osc
    };
    Ok(BigReal::new(value, ctx))
}

/// Direct summation against residue expansion at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCheck {
    pub n: u32,
    pub x: BigReal,
    pub direct: BigReal,
    pub expansion: BigReal,
    pub abs_err: BigReal,
    pub threshold: BigReal,
}

impl DualCheck {
    pub fn passed(&self) -> bool {
        self.abs_err < self.threshold
    }
}

pub fn dual_check(n: u32, x: &BigReal, ctx: PrecisionContext) -> Result<DualCheck> {
    let direct = g_direct(n, x, ctx)?;
    let expansion = g_expansion(n, x, ctx)?;
    let err = Float::with_val(ctx.prec_bits(), direct.as_float() - expansion.as_float()).abs();
    Ok(DualCheck {
        n,
        x: BigReal::new(ctx.float(x.as_float()), ctx),
        direct,
        expansion,
        abs_err: BigReal::new(err, ctx),
        threshold: check_threshold(ctx),
    })
}

/// `|∫ G(x) x^{s-1} dx − g*(s)/(2^s − 1)|` where `G(x) = Σ_{k>=1} g(2^k x)`
/// is summed directly inside the quadrature.
pub fn harmonic_factor_check(
    func: MellinFunction,
    s: &BigReal,
    ctx: PrecisionContext,
) -> Result<BigReal> {
    let prec = ctx.prec_bits();
    let sv = ctx.float(s.as_float());
    let (_, hi) = func.strip();
    if !(sv > 0 && sv < hi) {
        return Err(Error::domain(
            "harmonic_factor_check",
            format!("s = {} outside (0, {hi}) for {}", sv.to_f64(), func.label()),
        ));
    }
    let sf = sv.to_f64();
    let b = func.bounds();
    let (a0, e0) = b.near_zero;
    let (ai, ei) = b.at_infinity;
    let upper_geom = (-ei).exp2() / (1.0 - (-ei).exp2());
    // |G(x)| <= |g(0)| log₂(1/x) + a0/(1−2^{-e0}) + ai/(1−2^{-ei}) for x <= 1,
    // |G(x)| <= ai x^{-ei} 2^{-ei}/(1−2^{-ei}) for x >= 1.
    let envelope = TailEnvelope {
        lower_c1: b.at_zero.abs() / std::f64::consts::LN_2,
        lower_c0: a0 / (1.0 - (-e0).exp2()) + ai / (1.0 - (-ei).exp2()),
        lower_rate: sf,
        upper_c: ai * upper_geom,
        upper_rate: ei - sf,
    };
    let (tol, ln_tail) = quadrature_tol(ctx);
    let (a, b_cut) = envelope.cutoffs(ln_tail);
    // per-point budget: tail_tol · e^{-st} / (4 · interval length)
    let base_log2 = ctx.tail_tol_log10() * std::f64::consts::LOG2_10 - (4.0 * (b_cut - a)).log2();
    let q = integrate_real_line(
        "harmonic_factor_check",
        prec,
        envelope,
        ln_tail,
        &tol,
        |t| {
            let tf = t.to_f64();
            let eps_log2 = base_log2 - sf * tf / std::f64::consts::LN_2;
            let x = Float::with_val(prec, t.exp_ref());
            let weight = Float::with_val(prec, &sv * t).exp();
            Ok(harmonic_sum(func, &x, eps_log2, prec) * weight)
        },
    )?;
    let closed = harmonic_closed(func, s, ctx)?;
    let diff = Float::with_val(prec, &q - closed.as_float()).abs();
    Ok(BigReal::new(diff, ctx))
}

/// `g*(s) / (2^s − 1)`.
pub fn harmonic_closed(
    func: MellinFunction,
    s: &BigReal,
    ctx: PrecisionContext,
) -> Result<BigReal> {
    let prec = ctx.prec_bits();
    let g_star = mellin_closed(func, s, ctx)?;
    let den = Float::with_val(prec, ctx.float(2).pow(s.as_float())) - 1u32;
    if den.is_zero() {
        return Err(Error::domain("harmonic_closed", "2^s = 1"));
    }
    Ok(BigReal::new(
        Float::with_val(prec, g_star.as_float() / den),
        ctx,
    ))
}

/// Central-difference residual of the antiderivative recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub n: u32,
    pub k: i64,
    pub u: BigReal,
    pub step: BigReal,
    pub residual: BigReal,
    /// `10 h²`
    pub bound: BigReal,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.residual < self.bound
    }
}

/// Default finite-difference step `10^{-⌊digits/3⌋}`.
pub fn lemma_step(ctx: PrecisionContext) -> BigReal {
    BigReal::new(ctx.pow10(-i64::from(ctx.digits() / 3)), ctx)
}

/// `(2^{-(k-u)/2} + 2^{(k-u)/2})^{-n}`
fn lemma_phi(n: u32, k: i64, u: &Float, prec: u32) -> Float {
    let half = Float::with_val(prec, k - u) / 2u32;
    let up = Float::with_val(prec, half.exp2_ref());
    let down = up.clone().recip();
    Float::with_val(prec, up + down).pow(-i64::from(n))
}

/// `R_{n,k}(u) = (2^{(k-u)/2}/(1+2^{k-u}))^{n-2} (1−2^{k-u})/(1+2^{k-u}) / (2 ln2 (n−1))`
fn lemma_r(n: u32, k: i64, u: &Float, ln2: &Float, prec: u32) -> Float {
    let d = Float::with_val(prec, k - u);
    let y = Float::with_val(prec, d.exp2_ref());
    let root = Float::with_val(prec, (d / 2u32).exp2_ref());
    let one_plus = Float::with_val(prec, &y + 1u32);
    let ratio = Float::with_val(prec, &root / &one_plus).pow(n - 2);
    let sign_part = Float::with_val(prec, 1u32 - &y) / one_plus;
    let scale = Float::with_val(prec, ln2 * 2u32) * (n - 1);
    ratio * sign_part / scale
}

/// `|φ_n(u) − (n−2)/(4(n−1)) φ_{n−2}(u) − R'_{n,k}(u)|` with `R'` from a
/// central difference of step `h`.
pub fn lemma_check_with_step(
    n: u32,
    k: i64,
    u: &BigReal,
    h: &BigReal,
    ctx: PrecisionContext,
) -> Result<LemmaCheck> {
    if n < 3 {
        return Err(Error::domain(
            "lemma_check",
            format!("needs n >= 3, got {n}"),
        ));
    }
    if !h.is_positive() {
        return Err(Error::domain("lemma_check", "step must be positive"));
    }
    let prec = ctx.prec_bits();
    let uf = ctx.float(u.as_float());
    let hf = ctx.float(h.as_float());
    let ln2 = ctx.ln(2);
    let factor = ctx.float(n - 2) / (4 * (n - 1));
    let plus = Float::with_val(prec, &uf + &hf);
    let minus = Float::with_val(prec, &uf - &hf);
    let derivative = (lemma_r(n, k, &plus, &ln2, prec) - lemma_r(n, k, &minus, &ln2, prec))
        / Float::with_val(prec, &hf * 2u32);
    let residual =
        lemma_phi(n, k, &uf, prec) - factor * lemma_phi(n - 2, k, &uf, prec) - derivative;
    let bound = Float::with_val(prec, hf.square_ref()) * 10u32;
    Ok(LemmaCheck {
        n,
        k,
        u: BigReal::new(uf, ctx),
        step: BigReal::new(hf, ctx),
        residual: BigReal::new(residual.abs(), ctx),
        bound: BigReal::new(bound, ctx),
    })
}

pub fn lemma_check(n: u32, k: i64, u: &BigReal, ctx: PrecisionContext) -> Result<LemmaCheck> {
    lemma_check_with_step(n, k, u, &lemma_step(ctx), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn ratio(num: i64, den: i64, c: PrecisionContext) -> BigReal {
        BigReal::from_ratio(num, den, c).unwrap()
    }

    #[test]
    fn parse_function_ids() {
        assert_eq!("g1".parse::<MellinFunction>().unwrap(), MellinFunction::G1);
        assert_eq!(
            "fn(5)".parse::<MellinFunction>().unwrap(),
            MellinFunction::F(5)
        );
        assert_eq!(
            "fn7".parse::<MellinFunction>().unwrap(),
            MellinFunction::F(7)
        );
        assert!("fn2".parse::<MellinFunction>().is_err());
        assert!("h".parse::<MellinFunction>().is_err());
        assert_eq!(MellinFunction::F(4).to_string(), "fn(4)");
    }

    #[test]
    fn closed_forms_at_quarter() {
        let c = ctx(30);
        let prec = c.prec_bits();
        let quarter = ratio(1, 4, c);
        let pi = c.pi();
        let sqrt2 = c.float(2).sqrt();

        let g2 = mellin_closed(MellinFunction::G2, &quarter, c).unwrap();
        let expect = BigReal::new(Float::with_val(prec, &pi * &sqrt2), c);
        assert!(g2.agrees_to_digits(&expect, 44));

        // π / ((1/4) cos(π/4)) = 4√2 π
        let g1 = mellin_closed(MellinFunction::G1, &quarter, c).unwrap();
        let expect = BigReal::new(Float::with_val(prec, &pi * &sqrt2) * 4u32, c);
        assert!(g1.agrees_to_digits(&expect, 44));
        assert!((17.77..17.78).contains(&g1.to_f64()));

        // −π√2/16
        let f4 = mellin_closed(MellinFunction::F(4), &quarter, c).unwrap();
        let expect = BigReal::new(-Float::with_val(prec, &pi * &sqrt2) / 16u32, c);
        assert!(f4.agrees_to_digits(&expect, 44));

        // f_3: empty product, 2 · (−π/4)/cos(π/4) = −π/√2
        let f3 = mellin_closed(MellinFunction::F(3), &quarter, c).unwrap();
        let expect = BigReal::new(-Float::with_val(prec, &pi / &sqrt2), c);
        assert!(f3.agrees_to_digits(&expect, 44));
    }

    #[test]
    fn strips_and_poles() {
        let c = ctx(20);
        let half = ratio(1, 2, c);
        assert!(mellin_closed(MellinFunction::G1, &half, c).is_err());
        assert!(mellin_numeric(MellinFunction::G1, &ratio(-1, 8, c), c).is_err());
        assert!(mellin_closed(MellinFunction::F(4), &BigReal::from_i64(0, c), c).is_err());
        assert!(mellin_closed(MellinFunction::G2, &half, c).is_ok());
    }

    #[test]
    fn reflection_integral_at_half() {
        // ∫ x^{-1/2}/(1+x) dx = π
        let c = ctx(30);
        let v = mellin_numeric(MellinFunction::G2, &ratio(1, 2, c), c).unwrap();
        let pi = crate::precision::const_pi(c);
        assert!(v.agrees_to_digits(&pi, 30));
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let c = ctx(30);
        for func in [
            MellinFunction::G1,
            MellinFunction::F(4),
            MellinFunction::F(5),
        ] {
            let check = mellin_check(func, &ratio(1, 4, c), c).unwrap();
            assert!(check.passed(), "{func}: {}", check.abs_err);
        }
    }

    #[test]
    fn dyadic_points_kill_the_oscillation() {
        // log₂ x = −3: value is −1/2 + 3 − Σ (−2)^k/(2^k−1) 8^{-k}
        let c = ctx(30);
        let prec = c.prec_bits();
        let x = ratio(1, 8, c);
        let exp = g_expansion(2, &x, c).unwrap();
        let mut series = Float::with_val(prec, 0);
        for k in 1..200u32 {
            let term = c.float(-2).pow(k) / (c.float(2).pow(k) - 1u32) / c.float(8).pow(k);
            series += term;
        }
        let literal = BigReal::new(c.float(2.5) - series, c);
        assert!(exp.agrees_to_digits(&literal, 40));
        let direct = g_direct(2, &x, c).unwrap();
        assert!(direct.agrees_to_digits(&literal, 40));
    }

    #[test]
    fn expansion_domain() {
        let c = ctx(20);
        assert!(g_expansion(1, &ratio(1, 2, c), c).is_err());
        assert!(g_expansion(2, &BigReal::from_i64(0, c), c).is_err());
        assert!(g_expansion(3, &ratio(1, 4, c), c).is_err());
        assert!(g_direct(1, &BigReal::from_i64(-1, c), c).is_err());
    }

    #[test]
    fn direct_sum_far_out() {
        let c = ctx(30);
        let v = g_direct(2, &BigReal::from_i64(1_000_000, c), c).unwrap();
        assert!(v.to_f64() < 2e-6);
        assert!(v.is_positive());
    }

    #[test]
    fn lemma_symmetric_point() {
        let c = ctx(30);
        let zero = BigReal::from_i64(0, c);
        let check = lemma_check(3, 0, &zero, c).unwrap();
        assert!(check.passed(), "{}", check.residual);
        assert!(lemma_check(2, 0, &zero, c).is_err());
    }
}
