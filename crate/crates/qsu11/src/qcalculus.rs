//! q-Pochhammer symbols and basic hypergeometric series.
//!
//! Everything here works in double-precision complex arithmetic with an
//! explicit error budget: infinite products and series return a
//! [`SeriesEval`] whose `tail_bound` is a rigorous bound on the modulus of
//! the discarded part.
//!
//! The bases used by callers are `q` and `q²` interchangeably, so the kernels
//! take the base as a plain `f64` in `(0, 1)`; [`QBase`] carries the
//! deformation parameter together with its derived constants.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative distance under which a parameter is treated as sitting on a pole
/// (or on a terminating value) of a q-series.
pub const POLE_GUARD: f64 = 1e-9;

/// Series arguments with modulus below this are summed directly; larger ones
/// go through a transformation when one is available.
pub const DIRECT_RADIUS: f64 = 0.9;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// The deformation parameter `q ∈ (0, 1)` with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QBase {
    q: f64,
    log_q: f64,
    cq: f64,
}

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "q = {q} must lie in the open interval (0, 1)"
            )));
        }
        let q2 = q * q;
        let prod = qpoch_ratio(&[q2.into(), (-q2).into()], &[], q2, 1e-17)?;
        let cq = 1.0 / (SQRT_2 * q * prod.value.re);
        Ok(QBase {
            q,
            log_q: q.ln(),
            cq,
        })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q²`, the base of every product in the matrix coefficients.
    #[inline]
    pub fn q2(&self) -> f64 {
        self.q * self.q
    }

    /// Natural logarithm of `q` (negative).
    #[inline]
    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    /// `c_q = 1 / (√2 · q · (q², −q²; q²)_∞)`.
    #[inline]
    pub fn cq(&self) -> f64 {
        self.cq
    }

    /// `q^k` for an integer exponent, without going through a logarithm.
    #[inline]
    pub fn pow(&self, k: i64) -> f64 {
        powi(self.q, k)
    }

    /// Period of `z ↦ q^z` along the imaginary axis, `2π / |log q|`.
    #[inline]
    pub fn period(&self) -> f64 {
        2.0 * PI / self.log_q.abs()
    }
}

/// Truncation controls for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    /// Relative tolerance on the certified tail.
    pub tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: 1e-15,
            max_terms: 1000,
        }
    }
}

impl SeriesControl {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidArgument(format!(
                "series control needs tol > 0 and max_terms > 0 (got {tol}, {max_terms})"
            )));
        }
        Ok(SeriesControl { tol, max_terms })
    }
}

/// A value together with how it was obtained and a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms_used: usize,
    /// Upper bound on `|exact − value|` coming from truncation.
    pub tail_bound: f64,
    /// Set when some factor of a product vanished exactly.
    pub degenerate_zero: bool,
}

impl SeriesEval {
    pub fn exact(value: Complex64, terms_used: usize) -> Self {
        SeriesEval {
            value,
            terms_used,
            tail_bound: 0.0,
            degenerate_zero: false,
        }
    }

    /// Tail bound relative to the returned modulus (infinite for a zero value
    /// with a nonzero bound).
    pub fn relative_tail(&self) -> f64 {
        if self.tail_bound == 0.0 {
            0.0
        } else {
            self.tail_bound / self.value.norm()
        }
    }

    /// Product of two certified values; bounds propagate as
    /// `|a|·eb + |b|·ea + ea·eb`.
    pub fn mul(&self, other: &SeriesEval) -> SeriesEval {
        let value = self.value * other.value;
        let tail_bound = self.value.norm() * other.tail_bound
            + other.value.norm() * self.tail_bound
            + self.tail_bound * other.tail_bound;
        SeriesEval {
            value,
            terms_used: self.terms_used + other.terms_used,
            tail_bound,
            degenerate_zero: self.degenerate_zero || other.degenerate_zero,
        }
    }

    pub fn add(&self, other: &SeriesEval) -> SeriesEval {
        SeriesEval {
            value: self.value + other.value,
            terms_used: self.terms_used + other.terms_used,
            tail_bound: self.tail_bound + other.tail_bound,
            degenerate_zero: false,
        }
    }

    /// Multiplies by an exact scalar.
    pub fn scale(&self, s: Complex64) -> SeriesEval {
        SeriesEval {
            value: self.value * s,
            tail_bound: self.tail_bound * s.norm(),
            ..*self
        }
    }
}

pub(crate) fn powi(x: f64, k: i64) -> f64 {
    match i32::try_from(k) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(k as f64),
    }
}

fn check_base(base: f64) -> Result<()> {
    if base > 0.0 && base < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "base = {base} must lie in (0, 1)"
        )))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tol = {tol} must be positive")))
    }
}

/// If `x` lies within [`POLE_GUARD`] (relative) of `base^j` for an integer
/// `j`, returns that `j`.
pub fn nearest_power(x: Complex64, base: f64) -> Option<i64> {
    let m = x.norm();
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    let e = (m.ln() / base.ln()).round();
    if e.abs() > 4096.0 {
        return None;
    }
    let e = e as i64;
    let p = powi(base, e);
    ((x - p).norm() <= POLE_GUARD * p).then_some(e)
}

/// Index `n ≥ 0` with `x ≈ base^{-n}`, i.e. the order at which a numerator
/// parameter terminates a series.
fn terminating_index(x: Complex64, base: f64) -> Option<usize> {
    nearest_power(x, base).filter(|&e| e <= 0).map(|e| (-e) as usize)
}

/// Finite q-Pochhammer symbol `(a; base)_k = ∏_{l<k} (1 − a·base^l)`.
pub fn qpoch(a: Complex64, base: f64, k: usize) -> Complex64 {
    let mut acc = ONE;
    let mut pow = 1.0;
    for _ in 0..k {
        acc *= ONE - a * pow;
        pow *= base;
    }
    acc
}

/// q-Pochhammer symbol of signed order; negative orders use
/// `(a; base)_{−n} = 1 / (a·base^{−n}; base)_n`.
pub fn qpoch_signed(a: Complex64, base: f64, n: i64) -> Complex64 {
    if n >= 0 {
        qpoch(a, base, n as usize)
    } else {
        let m = n.unsigned_abs() as usize;
        ONE / qpoch(a * powi(base, n), base, m)
    }
}

/// Infinite q-Pochhammer symbol `(a; base)_∞`.
///
/// Factors are multiplied until `|a|·base^K / (1 − base) < tol/4`; the
/// reported bound `|P_K|·(exp(|a|·base^K/(1 − base)) − 1)` then stays below
/// `tol` relative to the returned modulus. A factor that vanishes exactly
/// gives the value `0` with `degenerate_zero` set.
pub fn qpoch_infinite(a: Complex64, base: f64, tol: f64) -> Result<SeriesEval> {
    check_base(base)?;
    check_tol(tol)?;
    let am = a.norm();
    let mut value = ONE;
    let mut pow = 1.0;
    let mut used = 0;
    loop {
        let rest = am * pow / (1.0 - base);
        if rest < tol / 4.0 {
            return Ok(SeriesEval {
                value,
                terms_used: used,
                tail_bound: value.norm() * rest.exp_m1(),
                degenerate_zero: false,
            });
        }
        let factor = ONE - a * pow;
        used += 1;
        if factor == Complex64::new(0.0, 0.0) {
            return Ok(SeriesEval {
                value: factor,
                terms_used: used,
                tail_bound: 0.0,
                degenerate_zero: true,
            });
        }
        value *= factor;
        pow *= base;
    }
}

/// A complex number stored as `mantissa · e^{ln_scale}` so that long products
/// of large and small factors neither overflow nor underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    mantissa: Complex64,
    ln_scale: f64,
}

impl Scaled {
    pub(crate) fn one() -> Self {
        Scaled {
            mantissa: ONE,
            ln_scale: 0.0,
        }
    }

    /// `e^{ln}` as a positive real.
    pub(crate) fn from_ln(ln: f64) -> Self {
        Scaled {
            mantissa: ONE,
            ln_scale: ln,
        }
    }

    fn renormalize(mut self) -> Self {
        let a = self.mantissa.norm();
        if a.is_finite() && a > 0.0 && !(1e-100..=1e100).contains(&a) {
            self.mantissa /= a;
            self.ln_scale += a.ln();
        }
        self
    }

    pub(crate) fn mul(self, c: Complex64) -> Self {
        Scaled {
            mantissa: self.mantissa * c,
            ..self
        }
        .renormalize()
    }

    pub(crate) fn mul_scaled(self, other: Scaled) -> Self {
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            ln_scale: self.ln_scale + other.ln_scale,
        }
        .renormalize()
    }

    pub(crate) fn sqrt(self) -> Self {
        Scaled {
            mantissa: self.mantissa.sqrt(),
            ln_scale: self.ln_scale / 2.0,
        }
    }

    pub(crate) fn to_complex(self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.ln_scale.exp()
    }
}

/// A ratio of infinite products kept in scaled form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledProduct {
    pub(crate) value: Scaled,
    pub(crate) rel_tail: f64,
    pub(crate) factors: usize,
    pub(crate) degenerate_zero: bool,
}

/// `∏_i (n_i; base)_∞ / ∏_j (d_j; base)_∞`, multiplying one level `l` of every
/// factor at a time so that large numerator and denominator factors pair up.
pub(crate) fn qpoch_ratio_scaled(
    num: &[Complex64],
    den: &[Complex64],
    base: f64,
    tol: f64,
) -> Result<ScaledProduct> {
    check_base(base)?;
    check_tol(tol)?;
    let num_mod: f64 = num.iter().map(|a| a.norm()).sum();
    let den_max = den.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let den_mod: f64 = den.iter().map(|a| a.norm()).sum();
    let mut value = Scaled::one();
    let mut pow = 1.0;
    let mut levels = 0;
    loop {
        let dm = den_max * pow;
        if dm < 0.5 {
            let rest = (num_mod + den_mod / (1.0 - dm)) * pow / (1.0 - base);
            if rest < tol / 4.0 {
                return Ok(ScaledProduct {
                    value,
                    rel_tail: rest.exp_m1(),
                    factors: levels * (num.len() + den.len()),
                    degenerate_zero: false,
                });
            }
        }
        let mut level = ONE;
        for a in num {
            level *= ONE - a * pow;
        }
        if level == Complex64::new(0.0, 0.0) {
            return Ok(ScaledProduct {
                value: Scaled {
                    mantissa: level,
                    ln_scale: 0.0,
                },
                rel_tail: 0.0,
                factors: (levels + 1) * (num.len() + den.len()),
                degenerate_zero: true,
            });
        }
        for d in den {
            let f = ONE - d * pow;
            if f == Complex64::new(0.0, 0.0) {
                return Err(Error::PoleGuard(format!(
                    "denominator factor ({d}; {base})_∞ vanishes at level {levels}"
                )));
            }
            level /= f;
        }
        value = value.mul(level);
        pow *= base;
        levels += 1;
    }
}

/// Multi-argument shorthand `(n_0, …, n_r; base)_∞ / (d_0, …, d_s; base)_∞`.
pub fn qpoch_ratio(
    num: &[Complex64],
    den: &[Complex64],
    base: f64,
    tol: f64,
) -> Result<SeriesEval> {
    let p = qpoch_ratio_scaled(num, den, base, tol)?;
    let value = p.value.to_complex();
    Ok(SeriesEval {
        value,
        terms_used: p.factors,
        tail_bound: value.norm() * p.rel_tail,
        degenerate_zero: p.degenerate_zero,
    })
}

/// How a [`ThetaPair`] residual was normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualMode {
    Relative,
    /// `a` sits on an integer power of the base, both sides vanish, and the
    /// residual is the plain difference.
    Absolute,
}

/// Both sides of the theta-product shift law
/// `(a·b^k, b^{1−k}/a; b)_∞ = (−a)^{−k} b^{−k(k−1)/2} (a, b/a; b)_∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaPair {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub mode: ResidualMode,
}

pub fn theta_pair(a: Complex64, k: i64, base: f64, tol: f64) -> Result<ThetaPair> {
    check_base(base)?;
    if a == Complex64::new(0.0, 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "theta_pair needs a finite nonzero a (got {a})"
        )));
    }
    let lhs = qpoch_ratio(&[a * powi(base, k), powi(base, 1 - k) / a], &[], base, tol)?;
    let core = qpoch_ratio(&[a, base / a], &[], base, tol)?;
    let k32 = i32::try_from(k)
        .map_err(|_| Error::InvalidArgument(format!("shift k = {k} out of range")))?;
    let prefactor = (-a).powi(-k32) * powi(base, -(k * (k - 1) / 2));
    let rhs = core.value * prefactor;
    let diff = (lhs.value - rhs).norm();
    let (residual, mode) = if nearest_power(a, base).is_some() {
        (diff, ResidualMode::Absolute)
    } else {
        let scale = lhs.value.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        (diff / scale, ResidualMode::Relative)
    };
    Ok(ThetaPair {
        lhs: lhs.value,
        rhs,
        residual,
        mode,
    })
}

/// Direct summation of `₂φ₁(a, b; c; base, z) = Σ_k (a, b; base)_k / (c, base; base)_k · z^k`.
///
/// A numerator parameter within [`POLE_GUARD`] of `base^{−n}` terminates the
/// series: exactly `n + 1` terms are summed and the tail bound is zero.
/// Otherwise `|z| < 1` is required and summation stops once the geometric
/// majorant of the remaining terms drops below `ctl.tol` relative to the
/// partial sum.
pub fn phi21_direct(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    base: f64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    check_base(base)?;
    check_tol(ctl.tol)?;
    let stop = match (terminating_index(a, base), terminating_index(b, base)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(j) = terminating_index(c, base) {
        // (c; base)_k first vanishes at k = j + 1
        if stop.map_or(true, |n| n > j) {
            return Err(Error::PoleInC {
                c: c.to_string(),
                index: j as i64,
            });
        }
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(SeriesEval::exact(ONE, 1));
    }
    let zm = z.norm();
    if stop.is_none() && zm >= 1.0 {
        return Err(Error::Divergent { modulus: zm });
    }

    let next_term = |t: Complex64, pow: f64| {
        t * (ONE - a * pow) * (ONE - b * pow) / ((ONE - c * pow) * (1.0 - pow * base)) * z
    };

    if let Some(n) = stop {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut t = ONE;
        let mut pow = 1.0;
        for k in 0..=n {
            sum += t;
            if k < n {
                t = next_term(t, pow);
                pow *= base;
            }
        }
        return Ok(SeriesEval::exact(sum, n + 1));
    }

    let (am, bm, cm) = (a.norm(), b.norm(), c.norm());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut t = ONE;
    let mut pow = 1.0;
    for used in 1..=ctl.max_terms {
        sum += t;
        let next = next_term(t, pow);
        pow *= base;
        if next == Complex64::new(0.0, 0.0) {
            return Ok(SeriesEval::exact(sum, used));
        }
        // every later term ratio is dominated by its value at the current level
        if cm * pow < 1.0 {
            let r = zm * (1.0 + am * pow) * (1.0 + bm * pow)
                / ((1.0 - cm * pow) * (1.0 - pow * base));
            if r < 1.0 {
                let tail = next.norm() / (1.0 - r);
                if tail <= ctl.tol * sum.norm() {
                    return Ok(SeriesEval {
                        value: sum,
                        terms_used: used,
                        tail_bound: tail,
                        degenerate_zero: false,
                    });
                }
            }
        }
        t = next;
    }
    Err(Error::NotConverged {
        tol: ctl.tol,
        max_terms: ctl.max_terms,
    })
}

/// Heine's transformation
/// `₂φ₁(a, b; c; base, z) = (b, az; base)_∞ / (c, z; base)_∞ · ₂φ₁(c/b, z; az; base, b)`,
/// which continues the series in `z` as long as one numerator parameter has
/// modulus below one (the smaller one is used).
pub fn phi21_heine(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    base: f64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    check_base(base)?;
    let (a, b) = if a.norm() < b.norm() { (b, a) } else { (a, b) };
    if b.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Heine continuation needs a numerator parameter inside the unit disk (got {a}, {b})"
        )));
    }
    if let Some(j) = terminating_index(c, base) {
        return Err(Error::PoleInC {
            c: c.to_string(),
            index: j as i64,
        });
    }
    if let Some(j) = terminating_index(z, base) {
        return Err(Error::PoleGuard(format!(
            "argument z = {z} sits on the pole base^-{j} of the continuation"
        )));
    }
    let az = a * z;
    if terminating_index(az, base).is_some() {
        return Err(Error::PoleGuard(format!(
            "a·z = {az} sits on a pole of the transformed series"
        )));
    }
    let prefactor = qpoch_ratio(&[b, az], &[c, z], base, ctl.tol)?;
    let series = phi21_direct(c / b, z, az, base, b, ctl)?;
    Ok(prefactor.mul(&series))
}

/// `₂φ₁` at any argument reachable by direct summation or by
/// [`phi21_heine`].
pub fn phi21(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    base: f64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    let terminating =
        terminating_index(a, base).is_some() || terminating_index(b, base).is_some();
    let zm = z.norm();
    if terminating || zm < DIRECT_RADIUS {
        return phi21_direct(a, b, c, base, z, ctl);
    }
    if a.norm().min(b.norm()) < 1.0 {
        return phi21_heine(a, b, c, base, z, ctl);
    }
    phi21_direct(a, b, c, base, z, ctl)
}

/// The two summands of the two-term continuation of
/// `₂φ₁(q/λ, λq; q²; q², −q²/κ)` into `|κ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuedTerms {
    /// `(qλ, qλ, −q³/(λκ), −λκ/q; q²)_∞ / (q², λ², −q²/κ, −κ; q²)_∞ · ₂φ₁(q/λ, q/λ; q²/λ²; q², −κ)`
    pub first: SeriesEval,
    /// `(q/λ, q/λ, −q³λ/κ, −κ/(qλ); q²)_∞ / (q², 1/λ², −q²/κ, −κ; q²)_∞ · ₂φ₁(qλ, qλ; q²λ²; q², −κ)`
    pub second: SeriesEval,
}

impl ContinuedTerms {
    pub fn total(&self) -> SeriesEval {
        self.first.add(&self.second)
    }
}

fn check_lambda_squared(lambda: Complex64, q2: f64) -> Result<()> {
    if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} must be finite and nonzero"
        )));
    }
    let l2 = lambda * lambda;
    if let Some(j) = nearest_power(l2, q2) {
        return Err(Error::PoleGuard(format!(
            "λ² = {l2} is within the pole guard of q^{}",
            2 * j
        )));
    }
    Ok(())
}

/// Shared body of the two-term continuation. With `keep_z_factor = false`
/// the common `(−q²/κ; q²)_∞` denominator is left out of both terms, for
/// callers that cancel it against an identical numerator factor.
pub(crate) fn two_term_continuation(
    lambda: Complex64,
    kappa: Complex64,
    base_q: &QBase,
    ctl: &SeriesControl,
    keep_z_factor: bool,
) -> Result<ContinuedTerms> {
    let q = base_q.q();
    let q2 = base_q.q2();
    if !(kappa.norm() < 1.0) || kappa == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument(format!(
            "continuation needs 0 < |κ| < 1 (got κ = {kappa})"
        )));
    }
    check_lambda_squared(lambda, q2)?;
    let z = -q2 / kappa;
    if keep_z_factor {
        if let Some(j) = terminating_index(z, q2) {
            return Err(Error::PoleGuard(format!(
                "−q²/κ = {z} sits on the pole q^-{}",
                2 * j
            )));
        }
    }
    let q3 = q * q2;
    let q2c = Complex64::from(q2);
    let mut den1 = vec![q2c, lambda * lambda, -kappa];
    let mut den2 = vec![q2c, ONE / (lambda * lambda), -kappa];
    if keep_z_factor {
        den1.push(z);
        den2.push(z);
    }
    let num1 = [q * lambda, q * lambda, -q3 / (lambda * kappa), -lambda * kappa / q];
    let num2 = [q / lambda, q / lambda, -q3 * lambda / kappa, -kappa / (q * lambda)];

    let coef1 = qpoch_ratio(&num1, &den1, q2, ctl.tol)?;
    let coef2 = qpoch_ratio(&num2, &den2, q2, ctl.tol)?;
    let s1 = phi21_direct(q / lambda, q / lambda, q2 / (lambda * lambda), q2, -kappa, ctl)?;
    let s2 = phi21_direct(q * lambda, q * lambda, q2 * lambda * lambda, q2, -kappa, ctl)?;
    Ok(ContinuedTerms {
        first: coef1.mul(&s1),
        second: coef2.mul(&s2),
    })
}

/// Both summands of the continuation of `₂φ₁(q/λ, λq; q²; q², −q²/κ)`.
pub fn continued_terms(
    lambda: Complex64,
    kappa: Complex64,
    base_q: &QBase,
    ctl: &SeriesControl,
) -> Result<ContinuedTerms> {
    two_term_continuation(lambda, kappa, base_q, ctl, true)
}

/// `₂φ₁(q/λ, λq; q²; q², −q²/κ)` for `|κ| < 1`, where the argument
/// `−q²/κ` may lie far outside the unit disk.
pub fn phi21_continued(
    lambda: Complex64,
    kappa: Complex64,
    base_q: &QBase,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    Ok(continued_terms(lambda, kappa, base_q, ctl)?.total())
}
