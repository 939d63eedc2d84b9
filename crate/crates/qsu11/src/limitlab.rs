//! Limit sweeps and convergence diagnostics.
//!
//! A sweep evaluates one family of values along an ordered approach sequence
//! and records the deviation from a target at every row. The report's verdict
//! looks at the final row and, on request, at the monotonicity of the
//! deviations.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcalculus::{nearest_power, QBase, SeriesControl, SeriesEval};
use crate::su11::{averaged_coamen, coamen_coeff, spherical_az, CoeffForm, IqPoint, SpectralParam};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Slack allowed between consecutive deviations of a monotone sweep.
pub const MONOTONE_SLACK: f64 = 1e-13;

/// Truncation window for sweeps over `I_q`.
pub const DEFAULT_WINDOW: u32 = 24;

/// Order of the ratio near `λ = q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum B1Order {
    Finite(u32),
    /// The infinite product, truncated after `trunc` factor levels.
    Infinite { trunc: u32 },
}

impl B1Order {
    pub fn infinite() -> Self {
        B1Order::Infinite { trunc: 60 }
    }
}

/// `(q/λ, q/λ; q²)_k / (1/λ²; q²)_k` with the vanishing pair regrouped.
///
/// The numerator factor `(1 − q/λ)²` and the denominator factor
/// `1 − q²/λ² = (1 − q/λ)(1 + q/λ)` are replaced by `(1 − q/λ)/(1 + q/λ)`,
/// so the ratio is evaluated without dividing by a vanishing quantity as
/// `λ → q`. The infinite order reports a bound on the dropped factors in
/// `tail_bound`.
pub fn lemma_b1_ratio(base: &QBase, lambda: Complex64, order: B1Order) -> Result<SeriesEval> {
    if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} must be finite and nonzero"
        )));
    }
    let q = base.q();
    let q2 = base.q2();
    let levels = match order {
        B1Order::Finite(0) => return Ok(SeriesEval::exact(ONE, 0)),
        B1Order::Finite(k) => k,
        B1Order::Infinite { trunc } if trunc < 2 => {
            return Err(Error::InvalidArgument(format!(
                "truncation must keep at least two levels (got {trunc})"
            )))
        }
        B1Order::Infinite { trunc } => trunc,
    };
    let l2 = lambda * lambda;
    let guard = |i: u32| -> Result<()> {
        if nearest_power(l2, q2) == Some(i64::from(i)) {
            return Err(Error::PoleGuard(format!(
                "λ² = {l2} meets the denominator factor 1 − q^{}/λ²",
                2 * i
            )));
        }
        Ok(())
    };

    let mut value = if levels == 1 {
        guard(0)?;
        let n = ONE - q / lambda;
        n * n / (ONE - ONE / l2)
    } else {
        guard(0)?;
        if ((lambda + q) / q).norm() <= crate::qcalculus::POLE_GUARD {
            return Err(Error::PoleGuard(format!("λ = {lambda} is at −q")));
        }
        (ONE - q / lambda) / (ONE + q / lambda) / (ONE - ONE / l2)
    };
    let mut pow = q2;
    for i in 1..levels {
        if i >= 2 {
            guard(i)?;
            value /= ONE - pow / l2;
        }
        let n = ONE - q * pow / lambda;
        value *= n * n;
        pow *= q2;
    }

    let tail_bound = match order {
        B1Order::Finite(_) => 0.0,
        B1Order::Infinite { .. } => {
            // pow = q^{2K}: remaining factors are 1 + O(q^{2i}), i ≥ K
            let lm = lambda.norm();
            let x = pow / (lm * lm);
            if x >= 0.5 {
                f64::INFINITY
            } else {
                let s = (2.0 * q / lm + 1.0 / (lm * lm * (1.0 - x))) * pow / (1.0 - q2);
                value.norm() * s.exp_m1()
            }
        }
    };
    Ok(SeriesEval {
        value,
        terms_used: levels as usize,
        tail_bound,
        degenerate_zero: value == Complex64::new(0.0, 0.0),
    })
}

/// The same ratio as [`lemma_b1_ratio`] multiplied out factor by factor.
pub fn lemma_b1_naive(base: &QBase, lambda: Complex64, k: u32) -> Complex64 {
    let q = base.q();
    let q2 = base.q2();
    let mut value = ONE;
    let mut pow = 1.0;
    for _ in 0..k {
        let n = ONE - q * pow / lambda;
        value *= n * n / (ONE - pow / (lambda * lambda));
        pow *= q2;
    }
    value
}

/// One approach value of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SweepParam {
    Real(f64),
    Complex(Complex64),
    Integer(i64),
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepParam::Real(x) => write!(f, "{x}"),
            SweepParam::Complex(z) => write!(f, "{z}"),
            SweepParam::Integer(n) => write!(f, "{n}"),
        }
    }
}

impl SweepParam {
    fn as_complex(&self) -> Option<Complex64> {
        match *self {
            SweepParam::Real(x) => Some(x.into()),
            SweepParam::Complex(z) => Some(z),
            SweepParam::Integer(_) => None,
        }
    }

    fn as_integer(&self) -> Option<i64> {
        match *self {
            SweepParam::Integer(n) => Some(n),
            _ => None,
        }
    }
}

/// What is evaluated along a sweep, and how the approach values are read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SweepFamily {
    /// `a_z(p₀)` with the approach values as `z`.
    Spherical { p0: IqPoint },
    /// `coamen_coeff(m, λ, q^{−j})` with the approach values as `j`.
    Coamen { m: i64, lambda: Complex64 },
    /// `averaged_coamen(n, q^{−2n}, m, λ)` with the approach values as `n`.
    AveragedCoamen { m: i64, lambda: Complex64 },
    /// [`lemma_b1_ratio`] with the approach values as `λ`.
    B1Ratio { order: B1Order },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotone {
    Ignore,
    /// Each deviation at most the previous one plus [`MONOTONE_SLACK`].
    NonIncreasing,
    /// Each deviation strictly below the previous one.
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: SweepParam,
    /// `None` when the evaluation failed; `error` then says why.
    pub value: Option<Complex64>,
    pub deviation: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub target: Complex64,
    pub threshold: f64,
    pub rows: Vec<SweepRow>,
    pub monotone_deviation: bool,
    pub verdict: Verdict,
}

impl SweepReport {
    pub fn final_deviation(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.deviation)
    }
}

fn is_monotone(devs: &[f64], rule: Monotone) -> bool {
    devs.windows(2).all(|w| match rule {
        Monotone::Ignore | Monotone::NonIncreasing => w[1] <= w[0] + MONOTONE_SLACK,
        Monotone::Decreasing => w[1] < w[0],
    })
}

fn family_label(family: &SweepFamily) -> String {
    match family {
        SweepFamily::Spherical { p0 } => format!(
            "spherical {:?} p0={}q^{}",
            p0.case(),
            if p0.sign() == crate::su11::Sign::Minus { "-" } else { "" },
            p0.exponent()
        ),
        SweepFamily::Coamen { m, lambda } => format!("coamen m={m} lambda={lambda}"),
        SweepFamily::AveragedCoamen { m, lambda } => format!("averaged m={m} lambda={lambda}"),
        SweepFamily::B1Ratio { order } => format!("b1 ratio {order:?}"),
    }
}

fn eval_family(
    family: &SweepFamily,
    base: &QBase,
    param: &SweepParam,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    let wrong = || {
        Error::InvalidArgument(format!(
            "approach value {param} does not fit {}",
            family_label(family)
        ))
    };
    let v = match *family {
        SweepFamily::Spherical { p0 } => {
            let z = param.as_complex().ok_or_else(wrong)?;
            spherical_az(base, &SpectralParam::new(z, base)?, p0, ctl)?
        }
        SweepFamily::Coamen { m, lambda } => {
            let j = param.as_integer().ok_or_else(wrong)?;
            coamen_coeff(base, m, lambda, IqPoint::positive(-j), CoeffForm::Simplified, ctl)?
        }
        SweepFamily::AveragedCoamen { m, lambda } => {
            let n = param.as_integer().ok_or_else(wrong)?;
            let n = u32::try_from(n).map_err(|_| wrong())?;
            averaged_coamen(base, n, IqPoint::positive(-2 * i64::from(n)), m, lambda, ctl)?
        }
        SweepFamily::B1Ratio { order } => {
            let lambda = param.as_complex().ok_or_else(wrong)?;
            lemma_b1_ratio(base, lambda, order)?
        }
    };
    Ok(v.value)
}

/// Evaluates `family` along `approach` and grades the deviations from
/// `target`. Evaluation errors are recorded on their row and fail the sweep.
pub fn limit_sweep(
    family: &SweepFamily,
    base: &QBase,
    approach: &[SweepParam],
    target: Complex64,
    threshold: f64,
    monotone: Monotone,
    ctl: &SeriesControl,
) -> Result<SweepReport> {
    if approach.is_empty() {
        return Err(Error::InvalidArgument("approach sequence is empty".into()));
    }
    let rows: Vec<SweepRow> = approach
        .iter()
        .map(|p| match eval_family(family, base, p, ctl) {
            Ok(v) => SweepRow {
                param: *p,
                value: Some(v),
                deviation: (v - target).norm(),
                error: None,
            },
            Err(e) => SweepRow {
                param: *p,
                value: None,
                deviation: f64::INFINITY,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    let monotone_deviation = is_monotone(&devs, monotone);
    let all_ok = rows.iter().all(|r| r.error.is_none());
    let last_ok = devs[devs.len() - 1] < threshold;
    let verdict = Verdict::from_bool(
        all_ok && last_ok && (monotone == Monotone::Ignore || monotone_deviation),
    );
    Ok(SweepReport {
        label: family_label(family),
        target,
        threshold,
        rows,
        monotone_deviation,
        verdict,
    })
}

/// `sup |a_z(p₀) − 1|` over `p₀ = q^0, q^{−1}, …, q^{−max_exponent}`.
///
/// The series argument `−q^{2+2k}` shrinks as `p₀` grows, so the supremum
/// over the rest of `I_q ∩ [1, ∞)` is already attained near `p₀ = 1`.
pub fn uniform_sup_gap(
    base: &QBase,
    zp: &SpectralParam,
    max_exponent: u32,
    ctl: &SeriesControl,
) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for k in 0..=i64::from(max_exponent) {
        let a = spherical_az(base, zp, IqPoint::positive(-k), ctl)?;
        gap = gap.max((a.value - ONE).norm());
    }
    Ok(gap)
}

/// A diagonal symbol on `I_q`.
pub struct Symbol {
    pub name: String,
    eval: Box<dyn Fn(IqPoint, &QBase) -> Complex64 + Send + Sync>,
    /// Whether the symbol is claimed to vanish at `0`.
    pub decay_at_zero: bool,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("decay_at_zero", &self.decay_at_zero)
            .finish()
    }
}

impl Symbol {
    pub fn new(
        name: impl Into<String>,
        decay_at_zero: bool,
        eval: impl Fn(IqPoint, &QBase) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Symbol {
            name: name.into(),
            eval: Box::new(eval),
            decay_at_zero,
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", true, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::new("one", false, |_, _| ONE)
    }

    /// `min(1, |p₀|)`.
    pub fn min_one_abs() -> Self {
        Self::new("min(1,|p0|)", true, |p, b| p.value(b).abs().min(1.0).into())
    }

    pub fn indicator(at: IqPoint) -> Self {
        Self::new(
            format!("indicator({:?}q^{})", at.sign(), at.exponent()),
            true,
            move |p, _| if p == at { ONE } else { Complex64::new(0.0, 0.0) },
        )
    }

    pub fn eval(&self, p: IqPoint, base: &QBase) -> Complex64 {
        (self.eval)(p, base)
    }

    /// Checks the decay claim on `±q^k`, `k = 1..=window`: from some
    /// `k₀ ≤ window/2` on, the larger of the two moduli is non-increasing and
    /// has dropped by at least `q^{(window−k₀)/2}`.
    pub fn check_decay(&self, base: &QBase, window: u32) -> bool {
        let w = i64::from(window.max(2));
        let v: Vec<f64> = (1..=w)
            .map(|k| {
                let plus = self.eval(IqPoint::positive(k), base).norm();
                let minus = IqPoint::negative(k)
                    .map(|p| self.eval(p, base).norm())
                    .unwrap_or(0.0);
                plus.max(minus)
            })
            .collect();
        (1..=w / 2).any(|k0| {
            let tail = &v[(k0 - 1) as usize..];
            let head = tail[0];
            tail.windows(2).all(|p| p[1] <= p[0] + MONOTONE_SLACK)
                && tail[tail.len() - 1] <= head * base.q().powf((w - k0) as f64 / 2.0)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxIdentityGap {
    /// `sup |(a_z − 1)Φ|` over `I_q ∩ (−1, 1)`.
    pub gap_p0: f64,
    /// `sup |(a_z − 1)Φ|` over `I_q ∩ [1, ∞)`.
    pub gap_p1: f64,
    pub gap_total: f64,
}

/// Distance between the diagonal symbol `Φ` and `a_z·Φ` on the window
/// `|k| ≤ max_exponent`, split at `|p₀| = 1`.
pub fn approx_identity_gap(
    base: &QBase,
    zp: &SpectralParam,
    sym: &Symbol,
    max_exponent: u32,
    ctl: &SeriesControl,
) -> Result<ApproxIdentityGap> {
    let w = i64::from(max_exponent);
    let term = |p: IqPoint| -> Result<f64> {
        let s = sym.eval(p, base);
        if s == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        let a = spherical_az(base, zp, p, ctl)?;
        Ok(((a.value - ONE) * s).norm())
    };
    let mut gap_p1: f64 = 0.0;
    for k in 0..=w {
        gap_p1 = gap_p1.max(term(IqPoint::positive(-k))?);
    }
    let mut gap_p0: f64 = 0.0;
    for k in 1..=w {
        gap_p0 = gap_p0.max(term(IqPoint::positive(k))?);
        gap_p0 = gap_p0.max(term(IqPoint::negative(k)?)?);
    }
    Ok(ApproxIdentityGap {
        gap_p0,
        gap_p1,
        gap_total: gap_p0.max(gap_p1),
    })
}
