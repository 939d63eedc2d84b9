//! Gaussian averages of spherical coefficients along contours.
//!
//! For `k ≥ 2` and `c = 1 − 1/k` the average is
//!
//! `b_{k,n}(p₀) = (1/i) √(n/π) ∫_γ e^{n(z−c)²} a_z(p₀) dz`.
//!
//! On the vertical line `z = c + is` the kernel restricts to the real
//! Gaussian `√(n/π) e^{−ns²}`, so `b_{k,n} → a_c` as `n → ∞`. The kernel is
//! entire, and any path homotopic to the vertical line inside the region
//! where `a_z` is analytic gives the same value.
//!
//! Integrals use the trapezoid rule on uniform nodes in `s ∈ [−S, S]`. The
//! node spacing is halved until two successive values agree to `tol_quad`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcalculus::{QBase, SeriesControl};
use crate::su11::{spherical_az, IqPoint, SpectralParam, SphericalCase};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Paths for continued coefficients must keep `Re z` this far from the
/// integers, where `λ²` meets the poles `q^{2j}`.
const STRIP_MARGIN: f64 = 1e-6;

/// Nodes whose kernel modulus falls below this contribute nothing visible in
/// double precision and are skipped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PathKind {
    /// `γ(s) = anchor + is`.
    Vertical,
    /// `γ(s) = anchor + δ sin s + is`.
    Perturbed { amplitude: f64 },
}

/// A contour parametrised by `s ∈ [−half_span, half_span]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPath {
    pub kind: PathKind,
    pub anchor: f64,
    pub half_span: f64,
}

impl ContourPath {
    pub fn vertical(anchor: f64, half_span: f64) -> Self {
        ContourPath {
            kind: PathKind::Vertical,
            anchor,
            half_span,
        }
    }

    pub fn perturbed(anchor: f64, amplitude: f64, half_span: f64) -> Self {
        ContourPath {
            kind: PathKind::Perturbed { amplitude },
            anchor,
            half_span,
        }
    }

    /// `(γ(s), γ′(s))`.
    pub fn point(&self, s: f64) -> (Complex64, Complex64) {
        match self.kind {
            PathKind::Vertical => (Complex64::new(self.anchor, s), I),
            PathKind::Perturbed { amplitude } => (
                Complex64::new(self.anchor + amplitude * s.sin(), s),
                Complex64::new(amplitude * s.cos(), 1.0),
            ),
        }
    }

    fn max_real_offset(&self) -> f64 {
        match self.kind {
            PathKind::Vertical => 0.0,
            PathKind::Perturbed { amplitude } => amplitude.abs(),
        }
    }
}

/// `S = √(ln(4/tol_quad)/n) + 2π/|log q|`: the Gaussian tail beyond `S` is
/// below `tol_quad/4`, plus one period of `λ` for safety.
pub fn default_half_span(base: &QBase, n: f64, tol_quad: f64) -> f64 {
    ((4.0 / tol_quad).ln() / n).sqrt() + base.period()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Initial node density per unit of `s`.
    pub nodes_per_unit: u32,
    pub tol_quad: f64,
    /// How often the spacing may be halved before giving up.
    pub max_doublings: u32,
}

impl QuadratureSpec {
    /// A starting density that resolves a Gaussian of width `1/√n`.
    pub fn for_order(n: f64, tol_quad: f64) -> Self {
        QuadratureSpec {
            nodes_per_unit: (2.0 * n.sqrt()).ceil() as u32 + 4,
            tol_quad,
            max_doublings: 6,
        }
    }
}

/// What is averaged against the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Integrand {
    Spherical(IqPoint),
    Constant(Complex64),
    /// `c₀ + c₁(z − c)`.
    Affine { c0: Complex64, c1: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Smoothed {
    pub value: Complex64,
    /// The kernel integrated alone; `1` up to quadrature error.
    pub mass: Complex64,
    /// Number of nodes in the final rule.
    pub nodes: usize,
}

fn check_inputs(k: u32, n: f64, path: &ContourPath, quad: &QuadratureSpec) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(format!("n = {n} must be positive")));
    }
    if !(quad.tol_quad > 0.0) || quad.nodes_per_unit == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs tol_quad > 0 and nodes_per_unit > 0".into(),
        ));
    }
    if !(path.half_span > 0.0) {
        return Err(Error::InvalidArgument("half_span must be positive".into()));
    }
    let d = path.max_real_offset() + (path.anchor - 1.0 + 1.0 / f64::from(k)).abs();
    if (n * (d * d - path.half_span * path.half_span)).exp() >= quad.tol_quad / 2.0 {
        return Err(Error::InvalidArgument(format!(
            "half_span {} leaves a kernel tail above tol_quad/2 for n = {n}",
            path.half_span
        )));
    }
    Ok(())
}

struct Rule<'a> {
    base: &'a QBase,
    integrand: Integrand,
    center: f64,
    n: f64,
    path: &'a ContourPath,
    ctl: SeriesControl,
}

impl Rule<'_> {
    /// Kernel-weighted integrand and kernel alone at parameter `s`, both
    /// multiplied by `γ′(s)/i`.
    fn node(&self, s: f64) -> Result<(Complex64, Complex64)> {
        let (z, dz) = self.path.point(s);
        if let Integrand::Spherical(p0) = self.integrand {
            if p0.case() != SphericalCase::PositiveLarge
                && (z.re - z.re.round()).abs() < STRIP_MARGIN
            {
                return Err(Error::PathOutsideDomain {
                    s,
                    reason: format!("Re z = {} meets a pole line of the continuation", z.re),
                });
            }
        }
        let w = z - self.center;
        let kernel = (self.n * w * w).exp() * (self.n / PI).sqrt() * dz / I;
        if kernel.norm() < NEGLIGIBLE_WEIGHT {
            return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        let f = match self.integrand {
            Integrand::Constant(c) => c,
            Integrand::Affine { c0, c1 } => c0 + c1 * w,
            Integrand::Spherical(p0) => {
                let zp = SpectralParam::new(z, self.base)?;
                spherical_az(self.base, &zp, p0, &self.ctl)
                    .map_err(|e| Error::PathOutsideDomain {
                        s,
                        reason: e.to_string(),
                    })?
                    .value
            }
        };
        Ok((kernel * f, kernel))
    }

    fn sum(&self, nodes: impl Iterator<Item = f64>) -> Result<(Complex64, Complex64)> {
        let mut v = Complex64::new(0.0, 0.0);
        let mut m = Complex64::new(0.0, 0.0);
        for s in nodes {
            let (a, b) = self.node(s)?;
            v += a;
            m += b;
        }
        Ok((v, m))
    }
}

/// The Gaussian average of `integrand` along `path`, centred at `1 − 1/k`.
pub fn gaussian_smooth(
    base: &QBase,
    integrand: Integrand,
    k: u32,
    n: f64,
    path: &ContourPath,
    quad: &QuadratureSpec,
) -> Result<Smoothed> {
    check_inputs(k, n, path, quad)?;
    let rule = Rule {
        base,
        integrand,
        center: 1.0 - 1.0 / f64::from(k),
        n,
        path,
        ctl: SeriesControl::default(),
    };
    let span = path.half_span;
    let mut intervals = ((2.0 * span * f64::from(quad.nodes_per_unit)).ceil() as usize).max(2);
    let mut h = 2.0 * span / intervals as f64;

    // trapezoid: the endpoint weights are below NEGLIGIBLE_WEIGHT by the tail check
    let (mut sv, mut sm) = rule.sum((0..=intervals).map(|j| -span + j as f64 * h))?;
    let mut value = sv * h;
    let mut mass = sm * h;
    for _ in 0..quad.max_doublings {
        let (mv, mm) = rule.sum((0..intervals).map(|j| -span + (j as f64 + 0.5) * h))?;
        sv += mv;
        sm += mm;
        intervals *= 2;
        h /= 2.0;
        let (nv, nm) = (sv * h, sm * h);
        let change = (nv - value).norm().max((nm - mass).norm());
        value = nv;
        mass = nm;
        if change <= quad.tol_quad {
            return Ok(Smoothed {
                value,
                mass,
                nodes: intervals + 1,
            });
        }
        if intervals > 1 << 22 {
            break;
        }
    }
    let (mv, _) = rule.sum((0..intervals).map(|j| -span + (j as f64 + 0.5) * h))?;
    Err(Error::QuadratureUnderResolved {
        change: ((sv + mv) * (h / 2.0) - value).norm(),
        tol: quad.tol_quad,
    })
}

/// `|b(pathA) − b(pathB)|` for the same integrand and kernel.
pub fn path_independence(
    base: &QBase,
    integrand: Integrand,
    k: u32,
    n: f64,
    path_a: &ContourPath,
    path_b: &ContourPath,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let a = gaussian_smooth(base, integrand, k, n, path_a, quad)?;
    let b = gaussian_smooth(base, integrand, k, n, path_b, quad)?;
    Ok((a.value - b.value).norm())
}
