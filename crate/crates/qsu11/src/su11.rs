//! Index set, spectral parameter, and the explicit matrix coefficients of
//! extended quantum SU(1,1).
//!
//! Points of `I_q = q^ℤ ∪ −q^ℕ` are stored exactly as a sign and an integer
//! exponent, so every structural map is evaluated from the exponent and never
//! from a floating logarithm.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcalculus::{
    phi21, phi21_direct, qpoch_ratio_scaled, qpoch_signed, two_term_continuation, QBase, Scaled,
    SeriesControl, SeriesEval,
};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// An exact point `sign · q^exponent` of `I_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IqPoint {
    sign: Sign,
    exponent: i64,
}

/// Which of the three explicit formulas describes `a_z` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SphericalCase {
    /// `p₀ = q^k`, `k ≤ 0`: the defining series converges directly.
    PositiveLarge,
    /// `p₀ = q^k`, `k ≥ 1`: the series argument leaves the unit disk.
    PositiveSmall,
    /// `p₀ = −q^k`, `k ≥ 1`.
    Negative,
}

/// `value = sign·q^k`, `kappa = sign·q^{2k}`, `chi = k`, `nu = q^{(k−1)(k−2)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructuralMaps {
    pub value: f64,
    pub kappa: f64,
    pub chi: i64,
    pub nu: f64,
}

impl IqPoint {
    /// `q^k` for any integer `k`.
    pub fn positive(exponent: i64) -> Self {
        IqPoint {
            sign: Sign::Plus,
            exponent,
        }
    }

    /// `−q^k`; only `k ≥ 1` belongs to `I_q`.
    pub fn negative(exponent: i64) -> Result<Self> {
        if exponent < 1 {
            return Err(Error::InvalidArgument(format!(
                "−q^{exponent} is not in I_q (negative points need exponent ≥ 1)"
            )));
        }
        Ok(IqPoint {
            sign: Sign::Minus,
            exponent,
        })
    }

    pub fn new(sign: Sign, exponent: i64) -> Result<Self> {
        match sign {
            Sign::Plus => Ok(Self::positive(exponent)),
            Sign::Minus => Self::negative(exponent),
        }
    }

    #[inline]
    pub fn sign(&self) -> Sign {
        self.sign
    }

    #[inline]
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// The point multiplied by `q^d`.
    pub fn shifted(&self, d: i64) -> Result<Self> {
        Self::new(self.sign, self.exponent + d)
    }

    pub fn value(&self, base: &QBase) -> f64 {
        self.sign.as_f64() * base.pow(self.exponent)
    }

    pub fn kappa(&self, base: &QBase) -> f64 {
        self.sign.as_f64() * base.pow(2 * self.exponent)
    }

    pub fn chi(&self) -> i64 {
        self.exponent
    }

    fn nu_exponent(&self) -> i64 {
        let k = self.exponent;
        (k - 1) * (k - 2) / 2
    }

    pub fn nu(&self, base: &QBase) -> f64 {
        base.pow(self.nu_exponent())
    }

    pub fn maps(&self, base: &QBase) -> StructuralMaps {
        StructuralMaps {
            value: self.value(base),
            kappa: self.kappa(base),
            chi: self.chi(),
            nu: self.nu(base),
        }
    }

    pub fn case(&self) -> SphericalCase {
        match (self.sign, self.exponent) {
            (Sign::Minus, _) => SphericalCase::Negative,
            (Sign::Plus, k) if k <= 0 => SphericalCase::PositiveLarge,
            (Sign::Plus, _) => SphericalCase::PositiveSmall,
        }
    }
}

pub fn structural_maps(p: IqPoint, base: &QBase) -> StructuralMaps {
    p.maps(base)
}

/// A spectral parameter `z` with `λ = q^z` and `x = (λ + 1/λ)/2`.
///
/// `λ` depends on `z` only modulo the period `2πi/log q`, and is computed
/// from `z` reduced into one period so that shifted parameters give the same
/// `λ` up to rounding of the reduction. [`SpectralParam::shifted_periods`]
/// shifts by whole periods and keeps `λ` bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParam {
    z: Complex64,
    lambda: Complex64,
    period: f64,
}

impl SpectralParam {
    pub fn new(z: Complex64, base: &QBase) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::InvalidArgument(format!("z = {z} must be finite")));
        }
        let period = base.period();
        let im = z.im - period * (z.im / period).round();
        let lambda = Complex64::from_polar(base.q().powf(z.re), im * base.log_q());
        Ok(SpectralParam { z, lambda, period })
    }

    pub fn real(z: f64, base: &QBase) -> Result<Self> {
        Self::new(Complex64::new(z, 0.0), base)
    }

    /// `z + i·k·2π/|log q|` with the same `λ`.
    pub fn shifted_periods(&self, k: i64) -> Self {
        SpectralParam {
            z: self.z + Complex64::new(0.0, k as f64 * self.period),
            ..*self
        }
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        self.z
    }

    #[inline]
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn x(&self) -> Complex64 {
        (self.lambda + ONE / self.lambda) * 0.5
    }
}

/// The spherical coefficient `a_z(p₀)`.
///
/// * `p₀ = q^k, k ≤ 0`: `₂φ₁(q/λ, λq; q²; q², −q²/κ(p₀))` summed directly.
/// * `p₀ = q^k, k ≥ 1`: the same function continued to `|−q²/κ| > 1`.
/// * `p₀ = −q^k`: a product prefactor times the two-term continuation with
///   `κ = −q^{2k}`.
///
/// In the negative case the argument `−q²/κ = q^{2−2k}` lies on a pole of
/// the continuation and the prefactor has the matching zero
/// `(q²/p₀²; q²)_∞`; the two cancel and are dropped together. The value
/// is normalised so that `a_z(p₀) → 1` as `z → 1`.
pub fn spherical_az(
    base: &QBase,
    zp: &SpectralParam,
    p0: IqPoint,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    let q = base.q();
    let q2 = base.q2();
    let lambda = zp.lambda();
    let k = p0.exponent();
    match p0.case() {
        SphericalCase::PositiveLarge => phi21_direct(
            q / lambda,
            lambda * q,
            q2.into(),
            q2,
            (-base.pow(2 - 2 * k)).into(),
            ctl,
        ),
        SphericalCase::PositiveSmall => {
            Ok(two_term_continuation(lambda, p0.kappa(base).into(), base, ctl, true)?.total())
        }
        SphericalCase::Negative => {
            let kappa = Complex64::from(p0.kappa(base));
            let terms = two_term_continuation(lambda, kappa, base, ctl, false)?;
            let p0sq = base.pow(2 * k);
            let q3 = q * q2;
            let ratio = qpoch_ratio_scaled(
                &[-lambda * q3 / p0sq, -p0sq / (q * lambda)],
                &[p0sq / (q * lambda), lambda * q3 / p0sq],
                q2,
                ctl.tol,
            )?;
            let fixed = qpoch_ratio_scaled(&[-kappa, q2.into(), q2.into()], &[], q2, ctl.tol)?;
            let nu_sq_ln = 2.0 * p0.nu_exponent() as f64 * base.log_q();
            let pre = ratio
                .value
                .mul_scaled(fixed.value)
                .mul_scaled(Scaled::from_ln(nu_sq_ln))
                .mul(Complex64::from(p0sq * base.cq() * base.cq()))
                .to_complex();
            let total = terms.total();
            let prefactor_tail = ratio.rel_tail + fixed.rel_tail + ratio.rel_tail * fixed.rel_tail;
            let mut out = total.scale(pre);
            out.tail_bound += (total.value * pre).norm() * prefactor_tail;
            Ok(out)
        }
    }
}

/// Which of the two equal expressions for the coamenability coefficient to
/// evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoeffForm {
    /// The product prefactor before simplification.
    Raw,
    /// `√((−q²/(p₁²q^{4m}); q²)_{2m})`.
    Simplified,
}

/// The coefficient of `e_m` in the vector-state matrix coefficient at
/// `p₁ = q^l`:
///
/// `√((−q²/(p₁²q^{4m}); q²)_{2m}) · ₂φ₁(−q^{1+2m}/λ, −λq^{1+2m}; q²; q², −q²/κ(p₁q^{2m}))`.
///
/// Negative orders of the finite product use
/// `(x; q²)_{−n} = 1/(x·q^{−2n}; q²)_n`. Series arguments outside the unit
/// disk are continued with Heine's transformation.
pub fn coamen_coeff(
    base: &QBase,
    m: i64,
    lambda: Complex64,
    p1: IqPoint,
    form: CoeffForm,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    if p1.sign() != Sign::Plus {
        return Err(Error::InvalidArgument(format!(
            "coamenability coefficients need p₁ > 0 (got −q^{})",
            p1.exponent()
        )));
    }
    if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} must be finite and nonzero"
        )));
    }
    let q = base.q();
    let q2 = base.q2();
    let l = p1.exponent();
    let shifted = p1.shifted(2 * m)?;
    let e = shifted.exponent();
    let upper = base.pow(1 + 2 * m);
    let series = phi21(
        -upper / lambda,
        -lambda * upper,
        q2.into(),
        q2,
        (-base.pow(2 - 2 * e)).into(),
        ctl,
    )?;

    let prefactor = match form {
        CoeffForm::Simplified => {
            let x = Complex64::from(-base.pow(2 - 2 * l - 4 * m));
            let fin = qpoch_signed(x, q2, 2 * m);
            SeriesEval::exact(fin.sqrt(), 2 * m.unsigned_abs() as usize)
        }
        CoeffForm::Raw => {
            let root1 = qpoch_ratio_scaled(&[(-p1.kappa(base)).into()], &[], q2, ctl.tol)?;
            let root2 = qpoch_ratio_scaled(&[(-shifted.kappa(base)).into()], &[], q2, ctl.tol)?;
            let rest = qpoch_ratio_scaled(
                &[q2.into(), q2.into(), (-q2 / shifted.kappa(base)).into()],
                &[],
                q2,
                ctl.tol,
            )?;
            // p₁² q^{2m} ν(p₁) ν(p₁q^{2m}) as a single power of q
            let power = 2 * l + 2 * m + p1.nu_exponent() + shifted.nu_exponent();
            let value = root1
                .value
                .sqrt()
                .mul_scaled(root2.value.sqrt())
                .mul_scaled(rest.value)
                .mul_scaled(Scaled::from_ln(power as f64 * q.ln()))
                .mul(Complex64::from(base.cq() * base.cq()))
                .to_complex();
            let rel = 0.5 * root1.rel_tail + 0.5 * root2.rel_tail + rest.rel_tail;
            SeriesEval {
                value,
                terms_used: root1.factors + root2.factors + rest.factors,
                tail_bound: value.norm() * rel * 1.01,
                degenerate_zero: false,
            }
        }
    };
    Ok(prefactor.mul(&series))
}

/// `(1/(2n+1)) Σ coamen_coeff(m, λ, p₁q^e)` over the `2(n−|m|)+1` exponents
/// `e = n−2|m|, …, −n`.
pub fn averaged_coamen(
    base: &QBase,
    n: u32,
    p1: IqPoint,
    m: i64,
    lambda: Complex64,
    ctl: &SeriesControl,
) -> Result<SeriesEval> {
    let n = i64::from(n);
    if m.abs() > n {
        return Err(Error::InvalidArgument(format!(
            "averaging needs |m| ≤ n (got m = {m}, n = {n})"
        )));
    }
    let mut acc = SeriesEval::exact(Complex64::new(0.0, 0.0), 0);
    for e in (-n..=n - 2 * m.abs()).rev() {
        let term = coamen_coeff(base, m, lambda, p1.shifted(e)?, CoeffForm::Simplified, ctl)?;
        acc = acc.add(&term);
    }
    Ok(acc.scale(Complex64::from(1.0 / (2 * n + 1) as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalculus::{phi21_direct, qpoch, qpoch_infinite};

    fn qb() -> QBase {
        QBase::new(0.5).unwrap()
    }

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn structural_map_examples() {
        let b = qb();
        let m = IqPoint::positive(0).maps(&b);
        assert_eq!((m.value, m.kappa, m.chi, m.nu), (1.0, 1.0, 0, 0.5));
        let m = IqPoint::positive(2).maps(&b);
        assert_eq!((m.value, m.kappa, m.chi, m.nu), (0.25, 0.0625, 2, 1.0));
        let m = IqPoint::negative(1).unwrap().maps(&b);
        assert_eq!((m.value, m.kappa, m.chi, m.nu), (-0.5, -0.25, 1, 1.0));
        assert!(IqPoint::negative(0).is_err());
    }

    #[test]
    fn case_dispatch() {
        assert_eq!(IqPoint::positive(0).case(), SphericalCase::PositiveLarge);
        assert_eq!(IqPoint::positive(-3).case(), SphericalCase::PositiveLarge);
        assert_eq!(IqPoint::positive(1).case(), SphericalCase::PositiveSmall);
        assert_eq!(IqPoint::negative(1).unwrap().case(), SphericalCase::Negative);
    }

    #[test]
    fn endpoint_is_exactly_one() {
        let b = qb();
        let zp = SpectralParam::real(1.0, &b).unwrap();
        assert_eq!(zp.lambda(), Complex64::new(0.5, 0.0));
        for k in -12..=0 {
            let a = spherical_az(&b, &zp, IqPoint::positive(k), &ctl()).unwrap();
            assert_eq!(a.value, ONE);
            assert_eq!(a.tail_bound, 0.0);
        }
    }

    #[test]
    fn period_shift_keeps_lambda() {
        let b = qb();
        let zp = SpectralParam::new(Complex64::new(0.3, 0.7), &b).unwrap();
        for k in [-3, -1, 1, 5] {
            let s = zp.shifted_periods(k);
            assert_eq!(s.lambda(), zp.lambda());
            let again = SpectralParam::new(s.z(), &b).unwrap();
            assert!((again.lambda() - zp.lambda()).norm() < 1e-13);
        }
        assert!((zp.x() - (zp.lambda() + 1.0 / zp.lambda()) / 2.0).norm() < 1e-15);
    }

    #[test]
    fn negative_case_near_one() {
        let b = qb();
        let zp = SpectralParam::real(0.999, &b).unwrap();
        let a = spherical_az(&b, &zp, IqPoint::negative(2).unwrap(), &ctl()).unwrap();
        assert!((a.value - ONE).norm() < 0.05, "{:?}", a.value);
    }

    // the negative-case formula against a 30-digit evaluation of the same
    // expression, |κ| = q^4, z = 0.9
    #[test]
    fn negative_case_frozen() {
        let b = qb();
        let zp = SpectralParam::real(0.9, &b).unwrap();
        let a = spherical_az(&b, &zp, IqPoint::negative(2).unwrap(), &ctl()).unwrap();
        let want = 0.904_363_882_830_838_3;
        assert!((a.value.re - want).abs() < 1e-12, "{}", a.value.re);
        assert!(a.value.im.abs() < 1e-12);
    }

    #[test]
    fn positive_small_frozen() {
        let b = qb();
        let zp = SpectralParam::real(0.9, &b).unwrap();
        let a = spherical_az(&b, &zp, IqPoint::positive(3), &ctl()).unwrap();
        let want = 0.843_227_150_557_089_9;
        assert!((a.value.re - want).abs() < 1e-12, "{}", a.value.re);
    }

    #[test]
    fn borderline_points_use_continuation() {
        // p₀ = ±q puts the direct argument on the unit circle
        let b = qb();
        let zp = SpectralParam::real(0.95, &b).unwrap();
        for p in [IqPoint::positive(1), IqPoint::negative(1).unwrap()] {
            let a = spherical_az(&b, &zp, p, &ctl()).unwrap();
            assert!(a.value.is_finite());
            assert!((a.value - ONE).norm() < 0.05);
        }
    }

    #[test]
    fn c_q_collapse() {
        for &q in &[0.3, 0.5, 0.8] {
            let b = QBase::new(q).unwrap();
            let q2 = q * q;
            let t = 1e-16;
            let p1 = qpoch_infinite(q2.into(), q2, t).unwrap().value;
            let p2 = qpoch_infinite((-1.0).into(), q2, t).unwrap().value;
            let p3 = qpoch_infinite((-q2).into(), q2, t).unwrap().value;
            let v = b.cq() * b.cq() * q2 * p1 * p1 * p2 * p3;
            assert!((v - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn coamen_m0_is_plain_series() {
        let b = qb();
        let lam = Complex64::from_polar(1.0, 0.4);
        let p1 = IqPoint::positive(-3);
        let c = coamen_coeff(&b, 0, lam, p1, CoeffForm::Simplified, &ctl()).unwrap();
        let d = phi21_direct(-0.5 / lam, -lam * 0.5, 0.25.into(), 0.25, (-0.25 * 64.0).into(), &ctl());
        // argument −q²/p₁² = −q^8 after the sign of the exponent
        let d2 = phi21_direct(-0.5 / lam, -lam * 0.5, 0.25.into(), 0.25, (-b.pow(8)).into(), &ctl()).unwrap();
        assert!(d.is_err());
        assert!((c.value - d2.value).norm() < 1e-15);
    }

    #[test]
    fn raw_and_simplified_agree() {
        let b = qb();
        let lam = Complex64::new(1.0, 0.0);
        let p1 = IqPoint::positive(-5);
        let r = coamen_coeff(&b, 1, lam, p1, CoeffForm::Raw, &ctl()).unwrap();
        let s = coamen_coeff(&b, 1, lam, p1, CoeffForm::Simplified, &ctl()).unwrap();
        assert!((r.value - s.value).norm() < 1e-9 * s.value.norm());
    }

    #[test]
    fn raw_and_simplified_agree_on_grid() {
        let b = qb();
        let lams = [
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, 0.4),
            Complex64::new(0.5f64.sqrt(), 0.0),
        ];
        for &lam in &lams {
            for m in -3..=3 {
                for j in 0..=10 {
                    let p1 = IqPoint::positive(-j);
                    let r = coamen_coeff(&b, m, lam, p1, CoeffForm::Raw, &ctl()).unwrap();
                    let s = coamen_coeff(&b, m, lam, p1, CoeffForm::Simplified, &ctl()).unwrap();
                    let rel = (r.value - s.value).norm() / s.value.norm();
                    assert!(rel < 1e-9, "m={m} j={j} λ={lam}: {rel}");
                }
            }
        }
    }

    #[test]
    fn simplified_prefactor_negative_order() {
        // m = −1: (x; q²)_{−2} = 1/((x q^{−4}; q²)_2)
        let b = qb();
        let l = -2;
        let x = -b.pow(2 - 2 * l + 4);
        let want = 1.0 / qpoch((x * b.pow(-4)).into(), 0.25, 2).re;
        let got = qpoch_signed(x.into(), 0.25, -2).re;
        assert!((want - got).abs() < 1e-15 * want.abs());
    }

    #[test]
    fn coamen_limit_m0() {
        let b = qb();
        let lam = ONE;
        let mut prev = f64::INFINITY;
        for j in [2, 4, 8] {
            let c = coamen_coeff(&b, 0, lam, IqPoint::positive(-j), CoeffForm::Simplified, &ctl()).unwrap();
            let dev = (c.value - ONE).norm();
            assert!(dev < prev);
            assert!(dev < b.pow(2 * j - 1));
            prev = dev;
        }
    }

    #[test]
    fn coamen_outside_disk_frozen() {
        // m = 2, p₁ = q^{-2}: argument −q^{-2}, reference from a 30-digit
        // evaluation through the third Heine form
        let b = qb();
        let lam = Complex64::from_polar(1.0, 0.4);
        let s = coamen_coeff(&b, 2, lam, IqPoint::positive(-2), CoeffForm::Simplified, &ctl()).unwrap();
        let pre = qpoch((-b.pow(-2)).into(), 0.25, 4).re.sqrt();
        let want = -0.066_612_923_647_533_18 * pre;
        assert!((s.value.re - want).abs() < 1e-11 * want.abs(), "{} vs {want}", s.value.re);
    }

    #[test]
    fn coamen_rejects_negative_point() {
        let b = qb();
        let p = IqPoint::negative(2).unwrap();
        assert!(matches!(
            coamen_coeff(&b, 0, ONE, p, CoeffForm::Raw, &ctl()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn averaged_single_term() {
        let b = qb();
        let p1 = IqPoint::positive(-4);
        let lam = Complex64::from_polar(1.0, 0.4);
        let a = averaged_coamen(&b, 0, p1, 0, lam, &ctl()).unwrap();
        let c = coamen_coeff(&b, 0, lam, p1, CoeffForm::Simplified, &ctl()).unwrap();
        assert_eq!(a.value, c.value);
        assert!(averaged_coamen(&b, 1, p1, 2, lam, &ctl()).is_err());
    }

    #[test]
    fn averaged_bounded_by_max_summand() {
        let b = qb();
        let p1 = IqPoint::positive(-6);
        let (n, m) = (3u32, 1i64);
        let a = averaged_coamen(&b, n, p1, m, ONE, &ctl()).unwrap();
        let max = (-3..=1)
            .map(|e| {
                coamen_coeff(&b, m, ONE, p1.shifted(e).unwrap(), CoeffForm::Simplified, &ctl())
                    .unwrap()
                    .value
                    .norm()
            })
            .fold(0.0, f64::max);
        assert!(a.value.norm() <= max);
    }

    #[test]
    fn averaged_chain_decreases() {
        let b = qb();
        let mut prev = f64::INFINITY;
        for n in [5u32, 10, 20] {
            let p1 = IqPoint::positive(-2 * n as i64);
            let a = averaged_coamen(&b, n, p1, 0, ONE, &ctl()).unwrap();
            let dev = (a.value - ONE).norm();
            assert!(dev < prev);
            prev = dev;
        }
    }
}
