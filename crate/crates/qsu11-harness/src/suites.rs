//! The verification suites. Each returns its rows in a fixed grid order.

use num_complex::Complex64;
use qsu11::grids::{
    coamen_lambdas, iq_window, overlap_grid, smoothing_points, theta_grid, unitary_midpoints,
    SMOOTHING_ORDERS, SMOOTHING_WIDTHS, THETA_BASES,
};
use qsu11::{
    approx_identity_gap, averaged_coamen, coamen_coeff, default_half_span, gaussian_smooth,
    lemma_b1_naive, lemma_b1_ratio, path_independence, phi21_continued, phi21_direct,
    qpoch_ratio, spherical_az, theta_pair, uniform_sup_gap, B1Order, CoeffForm, ContourPath,
    Integrand, IqPoint, QBase, QuadratureSpec, SeriesControl, Sign, SpectralParam, SphericalCase,
    Symbol,
};
use qsu11::limitlab::MONOTONE_SLACK;
use serde_json::{json, Value};

use crate::config::{RunConfig, Suite};
use crate::report::{Anchor, Row};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

// thresholds pinned by the acceptance criteria; only the identity residual
// and the quadrature tolerance come from the configuration
const CHAIN_REL: f64 = 1e-9;
const CQ_ABS: f64 = 1e-12;
const OVERLAP_REL: f64 = 1e-8;
const COAMEN_FINAL: f64 = 1e-6;
const AVERAGED_FINAL: f64 = 0.15;
const SPHERICAL_FINAL: f64 = 5e-3;
const B1_NEAR: f64 = 1e-2;
const B1_NAIVE_REL: f64 = 1e-12;
const SMOOTH_FINAL: f64 = 1e-2;
const PATH_GAP: f64 = 1e-6;
const APPROX_FINAL: f64 = 0.02;
const REALITY: f64 = 1e-10;
const CONTRACTION: f64 = 1e-8;

struct Ctx {
    suite: Suite,
    base: QBase,
    ctl: SeriesControl,
    rows: Vec<Row>,
}

impl Ctx {
    fn fail(&mut self, id: String, anchor: Anchor, params: Value, threshold: f64, e: &qsu11::Error) {
        self.rows
            .push(Row::failed(self.suite, id, anchor, params, threshold, e));
    }

    fn below(&mut self, id: String, anchor: Anchor, params: Value, v: Option<Complex64>, dev: f64, thr: f64) {
        self.rows
            .push(Row::below(self.suite, id, anchor, params, v, dev, thr));
    }

    fn at_most(&mut self, id: String, anchor: Anchor, params: Value, v: Option<Complex64>, dev: f64, thr: f64) {
        self.rows
            .push(Row::at_most(self.suite, id, anchor, params, v, dev, thr));
    }
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn point(p: IqPoint) -> Value {
    json!({ "sign": if p.sign() == Sign::Minus { -1 } else { 1 }, "exponent": p.exponent() })
}

fn point_tag(p: IqPoint) -> String {
    match p.sign() {
        Sign::Plus => format!("q{}", p.exponent()),
        Sign::Minus => format!("mq{}", p.exponent()),
    }
}

fn case_anchor(p: IqPoint) -> Anchor {
    match p.case() {
        SphericalCase::PositiveLarge => Anchor::Case1,
        SphericalCase::PositiveSmall => Anchor::Case2,
        SphericalCase::Negative => Anchor::Case3,
    }
}

/// Pushes the rows of a sweep that must decrease towards `final_thr`: the
/// first row only has to evaluate, every later one must beat its
/// predecessor, and the last one must also beat `final_thr`.
fn decreasing_sweep(
    cx: &mut Ctx,
    id: &str,
    anchor: Anchor,
    params: Vec<Value>,
    values: Vec<qsu11::Result<Complex64>>,
    target: Complex64,
    final_thr: f64,
    slack: f64,
) {
    let mut prev = f64::INFINITY;
    let last = values.len() - 1;
    for (i, (p, v)) in params.into_iter().zip(values).enumerate() {
        let mut thr = prev + slack;
        if i == last {
            thr = thr.min(final_thr);
        }
        match v {
            Ok(v) => {
                let dev = (v - target).norm();
                if slack > 0.0 {
                    cx.at_most(format!("{id}-{i}"), anchor, p, Some(v), dev, thr);
                } else {
                    cx.below(format!("{id}-{i}"), anchor, p, Some(v), dev, thr);
                }
                prev = dev;
            }
            Err(e) => {
                cx.fail(format!("{id}-{i}"), anchor, p, thr, &e);
                prev = f64::INFINITY;
            }
        }
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> qsu11::Result<Vec<Row>> {
    let mut cx = Ctx {
        suite,
        base: QBase::new(cfg.q)?,
        ctl: SeriesControl::new(cfg.series_tol(), cfg.max_terms)?,
        rows: Vec::new(),
    };
    match suite {
        Suite::Identities => identities(&mut cx, cfg),
        Suite::Spherical => spherical(&mut cx, cfg),
        Suite::Coamenability => coamenability(&mut cx),
        Suite::Smoothing => smoothing(&mut cx, cfg),
        Suite::Approxid => approxid(&mut cx, cfg),
    }
    Ok(cx.rows)
}

fn identities(cx: &mut Ctx, cfg: &RunConfig) {
    for &b in &THETA_BASES {
        for (i, (a, k)) in theta_grid().into_iter().enumerate() {
            let id = format!("theta-b{b}-{i}");
            let params = json!({ "a": c(a), "k": k, "base": b });
            match theta_pair(a, k, b, cx.ctl.tol) {
                Ok(t) => cx.below(id, Anchor::ThetaShift, params, Some(t.lhs), t.residual, cfg.tol),
                Err(e) => cx.fail(id, Anchor::ThetaShift, params, cfg.tol, &e),
            }
        }
    }

    let q2 = cx.base.q2();
    let cq = cx.base.cq();
    let params = json!({ "q": cfg.q });
    match qpoch_ratio(&[q2.into(), q2.into(), (-1.0).into(), (-q2).into()], &[], q2, cx.ctl.tol) {
        Ok(p) => {
            let v = p.value * cq * cq * q2;
            cx.below("cq-normalization".into(), Anchor::CqNormalization, params, Some(v), (v - ONE).norm(), CQ_ABS);
        }
        Err(e) => cx.fail("cq-normalization".into(), Anchor::CqNormalization, params, CQ_ABS, &e),
    }

    let base = cx.base;
    for (li, lam) in coamen_lambdas(&base).into_iter().enumerate() {
        for m in -3..=3i64 {
            for j in 0..=10i64 {
                let id = format!("chain-l{li}-m{m}-j{j}");
                let params = json!({ "lambda": c(lam), "m": m, "p1_exponent": -j });
                let p1 = IqPoint::positive(-j);
                let pair = coamen_coeff(&base, m, lam, p1, CoeffForm::Raw, &cx.ctl).and_then(|r| {
                    Ok((r, coamen_coeff(&base, m, lam, p1, CoeffForm::Simplified, &cx.ctl)?))
                });
                match pair {
                    Ok((r, s)) => {
                        let rel = (r.value - s.value).norm() / s.value.norm();
                        cx.below(id, Anchor::PrefactorChain, params, Some(s.value), rel, CHAIN_REL);
                    }
                    Err(e) => cx.fail(id, Anchor::PrefactorChain, params, CHAIN_REL, &e),
                }
            }
        }
    }

    let q = base.q();
    for (i, (lam, kappa)) in overlap_grid(&base).into_iter().enumerate() {
        let id = format!("overlap-{i}");
        let params = json!({ "lambda": c(lam), "kappa": c(kappa) });
        let pair = phi21_continued(lam, kappa, &base, &cx.ctl).and_then(|a| {
            Ok((a, phi21_direct(q / lam, lam * q, q2.into(), q2, -q2 / kappa, &cx.ctl)?))
        });
        match pair {
            Ok((a, d)) => {
                let rel = (a.value - d.value).norm() / d.value.norm();
                cx.below(id, Anchor::Case2, params, Some(a.value), rel, OVERLAP_REL);
            }
            Err(e) => cx.fail(id, Anchor::Case2, params, OVERLAP_REL, &e),
        }
    }
}

fn spherical(cx: &mut Ctx, cfg: &RunConfig) {
    let base = cx.base;
    let zs = [0.9, 0.99, 0.999];
    for p0 in iq_window(6) {
        let params: Vec<Value> = zs.iter().map(|&z| json!({ "z": z, "p0": point(p0) })).collect();
        let values = zs
            .iter()
            .map(|&z| Ok(spherical_az(&base, &SpectralParam::real(z, &base)?, p0, &cx.ctl)?.value))
            .collect();
        let id = format!("limit-{}", point_tag(p0));
        decreasing_sweep(cx, &id, case_anchor(p0), params, values, ONE, SPHERICAL_FINAL, 0.0);
    }

    for (z, thr) in [(0.999, SPHERICAL_FINAL), (1.0, 0.0)] {
        let id = format!("sup-gap-z{z}");
        let params = json!({ "z": z, "max_exponent": cfg.max_exponent });
        let gap = SpectralParam::real(z, &base)
            .and_then(|zp| uniform_sup_gap(&base, &zp, cfg.max_exponent, &cx.ctl));
        match gap {
            Ok(g) if thr == 0.0 => cx.at_most(id, Anchor::Uniform, params, None, g, thr),
            Ok(g) => cx.below(id, Anchor::Uniform, params, None, g, thr),
            Err(e) => cx.fail(id, Anchor::Uniform, params, thr, &e),
        }
    }

    let window = iq_window(12);
    for (zi, z) in [Complex64::new(0.3, 0.0), Complex64::new(0.7, 1.3), Complex64::new(-0.4, -2.0)]
        .into_iter()
        .enumerate()
    {
        for &p0 in &window {
            let id = format!("period-{zi}-{}", point_tag(p0));
            let params = json!({ "z": c(z), "p0": point(p0), "periods": 1 });
            let pair = SpectralParam::new(z, &base).and_then(|zp| {
                let a = spherical_az(&base, &zp, p0, &cx.ctl)?;
                let s = spherical_az(&base, &zp.shifted_periods(1), p0, &cx.ctl)?;
                Ok((a.value, s.value))
            });
            match pair {
                Ok((a, s)) => cx.at_most(id, Anchor::Periodicity, params, Some(s), (a - s).norm(), 0.0),
                Err(e) => cx.fail(id, Anchor::Periodicity, params, 0.0, &e),
            }
        }
    }

    for z in [0.1, 0.5, 0.9, 0.99] {
        for &p0 in &window {
            let id = format!("real-z{z}-{}", point_tag(p0));
            let params = json!({ "z": z, "p0": point(p0) });
            let a = SpectralParam::real(z, &base).and_then(|zp| spherical_az(&base, &zp, p0, &cx.ctl));
            match a {
                Ok(a) => cx.below(id, Anchor::Reality, params, Some(a.value), a.value.im.abs(), REALITY),
                Err(e) => cx.fail(id, Anchor::Reality, params, REALITY, &e),
            }
        }
    }

    for (ti, t) in unitary_midpoints(&base).into_iter().enumerate() {
        for &p0 in &window {
            let id = format!("unitary-t{ti}-{}", point_tag(p0));
            let params = json!({ "z": [0.0, t], "p0": point(p0) });
            let a = SpectralParam::new(Complex64::new(0.0, t), &base)
                .and_then(|zp| spherical_az(&base, &zp, p0, &cx.ctl));
            match a {
                Ok(a) => {
                    let excess = (a.value.norm() - 1.0).max(0.0);
                    cx.at_most(id, Anchor::Contraction, params, Some(a.value), excess, CONTRACTION);
                }
                Err(e) => cx.fail(id, Anchor::Contraction, params, CONTRACTION, &e),
            }
        }
    }

    let q = base.q();
    for order in [
        B1Order::Finite(1),
        B1Order::Finite(2),
        B1Order::Finite(3),
        B1Order::Finite(10),
        B1Order::infinite(),
    ] {
        let (tag, k) = match order {
            B1Order::Finite(k) => (format!("k{k}"), k),
            B1Order::Infinite { trunc } => ("kinf".to_string(), trunc),
        };
        let lams: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|e| q * (1.0 + e)).collect();
        let params = lams.iter().map(|&l| json!({ "lambda": l, "order": tag })).collect();
        let values = lams
            .iter()
            .map(|&l| Ok(lemma_b1_ratio(&base, l.into(), order)?.value))
            .collect();
        let zero = Complex64::new(0.0, 0.0);
        decreasing_sweep(cx, &format!("b1-{tag}"), Anchor::StableRatio, params, values, zero, B1_NEAR, 0.0);

        let lam = Complex64::new(q + 0.1, 0.0);
        let id = format!("b1-naive-{tag}");
        let params = json!({ "lambda": q + 0.1, "order": tag });
        match lemma_b1_ratio(&base, lam, order) {
            Ok(s) => {
                let n = lemma_b1_naive(&base, lam, k);
                let rel = (s.value - n).norm() / n.norm();
                cx.below(id, Anchor::StableRatio, params, Some(s.value), rel, B1_NAIVE_REL);
            }
            Err(e) => cx.fail(id, Anchor::StableRatio, params, B1_NAIVE_REL, &e),
        }
    }
}

fn coamenability(cx: &mut Ctx) {
    let base = cx.base;
    let lams = [ONE, Complex64::from_polar(1.0, 0.4)];
    for (li, lam) in lams.into_iter().enumerate() {
        for m in -2..=2i64 {
            let js = [2i64, 4, 8, 16];
            let params = js
                .iter()
                .map(|&j| json!({ "lambda": c(lam), "m": m, "p1_exponent": -j }))
                .collect();
            let values = js
                .iter()
                .map(|&j| {
                    let p1 = IqPoint::positive(-j);
                    Ok(coamen_coeff(&base, m, lam, p1, CoeffForm::Simplified, &cx.ctl)?.value)
                })
                .collect();
            let id = format!("coeff-l{li}-m{m}");
            decreasing_sweep(cx, &id, Anchor::Coamenability, params, values, ONE, COAMEN_FINAL, 0.0);

            let ns = [5u32, 10, 20];
            let params = ns
                .iter()
                .map(|&n| json!({ "lambda": c(lam), "m": m, "n": n, "p1_exponent": -2 * i64::from(n) }))
                .collect();
            let values = ns
                .iter()
                .map(|&n| {
                    let p1 = IqPoint::positive(-2 * i64::from(n));
                    Ok(averaged_coamen(&base, n, p1, m, lam, &cx.ctl)?.value)
                })
                .collect();
            let id = format!("averaged-l{li}-m{m}");
            decreasing_sweep(cx, &id, Anchor::Coamenability, params, values, ONE, AVERAGED_FINAL, 0.0);
        }
    }
}

fn smoothing(cx: &mut Ctx, cfg: &RunConfig) {
    let base = cx.base;
    let tol_quad = cfg.tol_quad;
    for k in SMOOTHING_ORDERS {
        let center = 1.0 - 1.0 / f64::from(k);
        for p0 in smoothing_points() {
            let tag = format!("k{k}-{}", point_tag(p0));
            let target = SpectralParam::real(center, &base)
                .and_then(|zc| spherical_az(&base, &zc, p0, &cx.ctl))
                .map(|a| a.value);
            let runs: Vec<_> = SMOOTHING_WIDTHS
                .iter()
                .map(|&n| {
                    let path = ContourPath::vertical(center, default_half_span(&base, n, tol_quad));
                    let quad = QuadratureSpec::for_order(n, tol_quad);
                    gaussian_smooth(&base, Integrand::Spherical(p0), k, n, &path, &quad)
                })
                .collect();
            let params = SMOOTHING_WIDTHS
                .iter()
                .map(|&n| json!({ "k": k, "n": n, "p0": point(p0) }))
                .collect();
            let values = runs
                .iter()
                .map(|r| match (r, &target) {
                    (Ok(r), Ok(_)) => Ok(r.value),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                })
                .collect();
            let t = target.clone().unwrap_or(ONE);
            decreasing_sweep(cx, &format!("smooth-{tag}"), Anchor::Smoothing, params, values, t, SMOOTH_FINAL, MONOTONE_SLACK);

            for (&n, r) in SMOOTHING_WIDTHS.iter().zip(&runs) {
                let id = format!("mass-{tag}-n{n}");
                let params = json!({ "k": k, "n": n, "p0": point(p0) });
                match r {
                    Ok(r) => cx.below(id, Anchor::Smoothing, params, Some(r.mass), (r.mass - ONE).norm(), tol_quad),
                    Err(e) => cx.fail(id, Anchor::Smoothing, params, tol_quad, e),
                }
            }

            let n = 16.0;
            let path = ContourPath::vertical(center, default_half_span(&base, n, tol_quad));
            let wiggle = ContourPath::perturbed(center, 0.05, path.half_span);
            let quad = QuadratureSpec::for_order(n, tol_quad);
            let id = format!("path-{tag}");
            let params = json!({ "k": k, "n": n, "p0": point(p0), "amplitude": 0.05 });
            match path_independence(&base, Integrand::Spherical(p0), k, n, &path, &wiggle, &quad) {
                Ok(d) => cx.below(id, Anchor::PathIndependence, params, None, d, PATH_GAP),
                Err(e) => cx.fail(id, Anchor::PathIndependence, params, PATH_GAP, &e),
            }
        }
    }
}

fn approxid(cx: &mut Ctx, cfg: &RunConfig) {
    let base = cx.base;
    let w = cfg.max_exponent;
    let sym = Symbol::min_one_abs();
    let zs = [0.9, 0.99, 0.999];
    let params = zs
        .iter()
        .map(|&z| json!({ "z": z, "symbol": sym.name, "max_exponent": w }))
        .collect();
    let values = zs
        .iter()
        .map(|&z| {
            let g = approx_identity_gap(&base, &SpectralParam::real(z, &base)?, &sym, w, &cx.ctl)?;
            Ok(Complex64::new(g.gap_total, 0.0))
        })
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    decreasing_sweep(cx, "gap-min-one-abs", Anchor::ApproxIdentity, params, values, zero, APPROX_FINAL, 0.0);

    let decays = sym.check_decay(&base, w);
    cx.at_most(
        "decay-min-one-abs".into(),
        Anchor::ApproxIdentity,
        json!({ "symbol": sym.name, "max_exponent": w }),
        None,
        if decays { 0.0 } else { 1.0 },
        0.0,
    );

    let zero_sym = Symbol::zero();
    let params = json!({ "z": 0.9, "symbol": zero_sym.name, "max_exponent": w });
    let g = SpectralParam::real(0.9, &base)
        .and_then(|zp| approx_identity_gap(&base, &zp, &zero_sym, w, &cx.ctl));
    match g {
        Ok(g) => cx.at_most("gap-zero".into(), Anchor::ApproxIdentity, params, None, g.gap_total, 0.0),
        Err(e) => cx.fail("gap-zero".into(), Anchor::ApproxIdentity, params, 0.0, &e),
    }

    let p = IqPoint::positive(3);
    let ind = Symbol::indicator(p);
    let params = json!({ "z": 0.9, "symbol": ind.name, "max_exponent": w });
    let pair = SpectralParam::real(0.9, &base).and_then(|zp| {
        let g = approx_identity_gap(&base, &zp, &ind, w, &cx.ctl)?;
        let a = spherical_az(&base, &zp, p, &cx.ctl)?;
        Ok((g.gap_total, (a.value - ONE).norm()))
    });
    match pair {
        Ok((g, d)) => cx.at_most("gap-indicator".into(), Anchor::ApproxIdentity, params, None, (g - d).abs(), 0.0),
        Err(e) => cx.fail("gap-indicator".into(), Anchor::ApproxIdentity, params, 0.0, &e),
    }
}
