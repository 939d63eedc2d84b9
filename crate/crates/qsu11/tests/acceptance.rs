//! Acceptance gate: every criterion at its pinned tolerance, one PASS/FAIL
//! line each. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use qsu11::grids::{
    coamen_lambdas, iq_window, overlap_grid, smoothing_points, theta_grid, unitary_midpoints,
    SMOOTHING_ORDERS, SMOOTHING_WIDTHS, THETA_BASES,
};
use qsu11::{
    approx_identity_gap, coamen_coeff, default_half_span, gaussian_smooth, lemma_b1_naive,
    lemma_b1_ratio, limit_sweep, path_independence, phi21_continued, phi21_direct, qpoch_infinite,
    spherical_az, theta_pair, uniform_sup_gap, B1Order, CoeffForm, ContourPath, Integrand,
    IqPoint, Monotone, QBase, QuadratureSpec, SeriesControl, SpectralParam, SweepFamily,
    SweepParam, Symbol,
};
use qsu11::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn half() -> QBase {
    QBase::new(0.5).unwrap()
}

fn theta_identity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &b in &THETA_BASES {
        for (a, k) in theta_grid() {
            worst = worst.max(theta_pair(a, k, b, 1e-17)?.residual);
        }
    }
    Ok(outcome(worst < 1e-10, format!("max residual {worst:.2e} over 300 cases (< 1e-10)")))
}

fn simplification_chain() -> Result<Outcome> {
    let b = half();
    let mut worst: f64 = 0.0;
    for lam in coamen_lambdas(&b) {
        for m in -3..=3 {
            for j in 0..=10 {
                let p1 = IqPoint::positive(-j);
                let r = coamen_coeff(&b, m, lam, p1, CoeffForm::Raw, &ctl())?;
                let s = coamen_coeff(&b, m, lam, p1, CoeffForm::Simplified, &ctl())?;
                worst = worst.max((r.value - s.value).norm() / s.value.norm());
            }
        }
    }
    Ok(outcome(worst < 1e-9, format!("max relative gap {worst:.2e} over 231 cases (< 1e-9)")))
}

fn cq_normalization() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.5, 0.8] {
        let b = QBase::new(q)?;
        let q2 = b.q2();
        let t = 1e-17;
        let a = qpoch_infinite(q2.into(), q2, t)?.value;
        let m1 = qpoch_infinite((-1.0).into(), q2, t)?.value;
        let mq = qpoch_infinite((-q2).into(), q2, t)?.value;
        let v = b.cq() * b.cq() * q2 * a * a * m1 * mq;
        worst = worst.max((v - ONE).norm());
    }
    Ok(outcome(worst < 1e-12, format!("max |product - 1| = {worst:.2e} (< 1e-12)")))
}

fn continuation_overlap() -> Result<Outcome> {
    let b = half();
    let q = b.q();
    let q2 = b.q2();
    let mut worst: f64 = 0.0;
    for (lam, kappa) in overlap_grid(&b) {
        let c = phi21_continued(lam, kappa, &b, &ctl())?;
        let d = phi21_direct(q / lam, lam * q, q2.into(), q2, -q2 / kappa, &ctl())?;
        worst = worst.max((c.value - d.value).norm() / d.value.norm());
    }
    Ok(outcome(worst < 1e-8, format!("max relative gap {worst:.2e} over 20 points (< 1e-8)")))
}

fn coamenability_limit() -> Result<Outcome> {
    let b = half();
    let lams = [ONE, Complex64::from_polar(1.0, 0.4)];
    let js: Vec<SweepParam> = [2, 4, 8, 16].map(SweepParam::Integer).to_vec();
    let chain: Vec<SweepParam> = [5, 10, 20].map(SweepParam::Integer).to_vec();
    let mut pass = true;
    let mut worst_final: f64 = 0.0;
    let mut worst_avg: f64 = 0.0;
    for lam in lams {
        for m in -2..=2 {
            let r = limit_sweep(
                &SweepFamily::Coamen { m, lambda: lam },
                &b,
                &js,
                ONE,
                1e-6,
                Monotone::Decreasing,
                &ctl(),
            )?;
            pass &= r.verdict.is_pass();
            worst_final = worst_final.max(r.final_deviation());
            let a = limit_sweep(
                &SweepFamily::AveragedCoamen { m, lambda: lam },
                &b,
                &chain,
                ONE,
                0.15,
                Monotone::Decreasing,
                &ctl(),
            )?;
            pass &= a.verdict.is_pass();
            worst_avg = worst_avg.max(a.final_deviation());
        }
    }
    Ok(outcome(
        pass,
        format!(
            "single coefficient final {worst_final:.2e} (< 1e-6), averaged final {worst_avg:.3} (< 0.15), all chains decreasing"
        ),
    ))
}

fn spherical_limit() -> Result<Outcome> {
    let b = half();
    let zs: Vec<SweepParam> = [0.9, 0.99, 0.999].map(SweepParam::Real).to_vec();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for p0 in iq_window(6) {
        let r = limit_sweep(
            &SweepFamily::Spherical { p0 },
            &b,
            &zs,
            ONE,
            5e-3,
            Monotone::Decreasing,
            &ctl(),
        )?;
        pass &= r.verdict.is_pass();
        worst = worst.max(r.final_deviation());
    }
    let sup = uniform_sup_gap(&b, &SpectralParam::real(0.999, &b)?, 24, &ctl())?;
    let at_one = uniform_sup_gap(&b, &SpectralParam::real(1.0, &b)?, 24, &ctl())?;
    pass &= sup < 5e-3 && at_one == 0.0;
    Ok(outcome(
        pass,
        format!("worst final deviation {worst:.2e}, sup gap {sup:.2e} at z=0.999, {at_one} at z=1"),
    ))
}

fn b1_ratio() -> Result<Outcome> {
    let b = half();
    let q = b.q();
    let orders = [
        B1Order::Finite(1),
        B1Order::Finite(2),
        B1Order::Finite(3),
        B1Order::Finite(10),
        B1Order::infinite(),
    ];
    let approach: Vec<SweepParam> = [1e-1, 1e-2, 1e-3]
        .map(|e| SweepParam::Real(q * (1.0 + e)))
        .to_vec();
    let mut pass = true;
    let mut worst_near: f64 = 0.0;
    let mut worst_naive: f64 = 0.0;
    for order in orders {
        let r = limit_sweep(
            &SweepFamily::B1Ratio { order },
            &b,
            &approach,
            Complex64::new(0.0, 0.0),
            1e-2,
            Monotone::Decreasing,
            &ctl(),
        )?;
        pass &= r.verdict.is_pass();
        worst_near = worst_near.max(r.final_deviation());
        let lam = Complex64::new(q + 0.1, 0.0);
        let k = match order {
            B1Order::Finite(k) => k,
            B1Order::Infinite { trunc } => trunc,
        };
        let s = lemma_b1_ratio(&b, lam, order)?.value;
        let n = lemma_b1_naive(&b, lam, k);
        worst_naive = worst_naive.max((s - n).norm() / n.norm());
    }
    pass &= worst_naive < 1e-12;
    Ok(outcome(
        pass,
        format!("|ratio| at q(1+1e-3) ≤ {worst_near:.2e} (< 1e-2), stable vs naive {worst_naive:.2e} (< 1e-12)"),
    ))
}

fn gaussian_smoothing() -> Result<Outcome> {
    let b = half();
    let tol_quad = 1e-8;
    let mut pass = true;
    let mut worst_final: f64 = 0.0;
    let mut worst_mass: f64 = 0.0;
    let mut worst_path: f64 = 0.0;
    for k in SMOOTHING_ORDERS {
        let c = 1.0 - 1.0 / f64::from(k);
        let zc = SpectralParam::real(c, &b)?;
        for p0 in smoothing_points() {
            let target = spherical_az(&b, &zc, p0, &ctl())?.value;
            let mut prev = f64::INFINITY;
            for n in SMOOTHING_WIDTHS {
                let path = ContourPath::vertical(c, default_half_span(&b, n, tol_quad));
                let quad = QuadratureSpec::for_order(n, tol_quad);
                let r = gaussian_smooth(&b, Integrand::Spherical(p0), k, n, &path, &quad)?;
                let dev = (r.value - target).norm();
                pass &= dev <= prev + 1e-13;
                prev = dev;
                worst_mass = worst_mass.max((r.mass - ONE).norm());
            }
            pass &= prev < 1e-2;
            worst_final = worst_final.max(prev);

            let n = 16.0;
            let path = ContourPath::vertical(c, default_half_span(&b, n, tol_quad));
            let wiggle = ContourPath::perturbed(c, 0.05, path.half_span);
            let quad = QuadratureSpec::for_order(n, tol_quad);
            let d = path_independence(&b, Integrand::Spherical(p0), k, n, &path, &wiggle, &quad)?;
            worst_path = worst_path.max(d);
        }
    }
    pass &= worst_mass < tol_quad && worst_path < 1e-6;
    Ok(outcome(
        pass,
        format!(
            "final deviation {worst_final:.2e} (< 1e-2), mass error {worst_mass:.1e} (< 1e-8), path gap {worst_path:.1e} (< 1e-6)"
        ),
    ))
}

fn approximate_identity() -> Result<Outcome> {
    let b = half();
    let sym = Symbol::min_one_abs();
    let gap = |z: f64| -> Result<f64> {
        Ok(approx_identity_gap(&b, &SpectralParam::real(z, &b)?, &sym, 24, &ctl())?.gap_total)
    };
    let (g9, g99, g999) = (gap(0.9)?, gap(0.99)?, gap(0.999)?);
    Ok(outcome(
        sym.check_decay(&b, 24) && g99 < g9 && g999 < 0.02,
        format!("gaps {g9:.2e} > {g99:.2e}, {g999:.2e} at z=0.999 (< 0.02)"),
    ))
}

fn structural() -> Result<Outcome> {
    let b = half();
    let window = iq_window(12);

    let mut periodic = true;
    let mut float_shift: f64 = 0.0;
    for z in [Complex64::new(0.3, 0.0), Complex64::new(0.7, 1.3), Complex64::new(-0.4, -2.0)] {
        let zp = SpectralParam::new(z, &b)?;
        let shifted = zp.shifted_periods(1);
        let by_hand = SpectralParam::new(z + Complex64::new(0.0, 2.0 * std::f64::consts::PI / b.log_q()), &b)?;
        for &p0 in &window {
            let a = spherical_az(&b, &zp, p0, &ctl())?.value;
            periodic &= spherical_az(&b, &shifted, p0, &ctl())?.value == a;
            let h = spherical_az(&b, &by_hand, p0, &ctl())?.value;
            float_shift = float_shift.max((h - a).norm() / a.norm().max(1.0));
        }
    }

    let mut imag: f64 = 0.0;
    for z in [0.1, 0.5, 0.9, 0.99] {
        let zp = SpectralParam::real(z, &b)?;
        for &p0 in &window {
            imag = imag.max(spherical_az(&b, &zp, p0, &ctl())?.value.im.abs());
        }
    }

    let mut modulus: f64 = 0.0;
    for t in unitary_midpoints(&b) {
        let zp = SpectralParam::new(Complex64::new(0.0, t), &b)?;
        for &p0 in &window {
            modulus = modulus.max(spherical_az(&b, &zp, p0, &ctl())?.value.norm());
        }
    }
    Ok(outcome(
        periodic && float_shift < 1e-12 && imag < 1e-10 && modulus <= 1.0 + 1e-8,
        format!(
            "period shift exact: {periodic}, float shift {float_shift:.1e}; max |Im a| {imag:.1e} (< 1e-10); max |a_it| {modulus:.10} (≤ 1 + 1e-8)"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("theta-product identity", theta_identity),
        ("prefactor simplification chain", simplification_chain),
        ("c_q normalization", cq_normalization),
        ("two-term continuation on the overlap", continuation_overlap),
        ("coamenability limit", coamenability_limit),
        ("spherical limit z -> 1", spherical_limit),
        ("stable ratio near lambda = q", b1_ratio),
        ("Gaussian smoothing", gaussian_smoothing),
        ("approximate identity", approximate_identity),
        ("periodicity, reality, contraction", structural),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {:>2} {name}: {} [{secs:.2}s]",
            if out.pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
        if !out.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
