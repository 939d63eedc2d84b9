//! Fixed parameter grids.
//!
//! The checks never draw random numbers. Where a spread of parameters is
//! wanted the grids below are generated by Weyl sequences, so every run sees
//! the same points in the same order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::qcalculus::QBase;
use crate::su11::IqPoint;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const SILVER: f64 = 0.414_213_562_373_095_1;

/// 100 pairs `(a, k)` with `|a| ∈ [0.5, 2]`, `arg a` spread over the circle
/// and `k ∈ [−5, 5]`.
pub fn theta_grid() -> Vec<(Complex64, i64)> {
    (0..100)
        .map(|i| {
            let i_f = i as f64;
            let u = (GOLDEN * i_f + 0.5).fract();
            let v = (SILVER * i_f + 0.25).fract();
            let a = Complex64::from_polar(0.5 * 4f64.powf(u), 2.0 * PI * v);
            (a, (i % 11) as i64 - 5)
        })
        .collect()
}

/// Bases used by the theta-product checks.
pub const THETA_BASES: [f64; 3] = [0.3, 0.5, 0.8];

/// 20 pairs `(λ, κ)` with `|λ| = 1` and `q² < |κ| < 1`, where both the
/// direct series and the two-term continuation converge.
pub fn overlap_grid(base: &QBase) -> Vec<(Complex64, Complex64)> {
    let q2 = base.q2();
    let mut out = Vec::with_capacity(20);
    for (i, &theta) in [0.3, 0.9, 1.5, 2.1, 2.7].iter().enumerate() {
        for (j, &f) in [0.1, 0.3, 0.5, 0.65].iter().enumerate() {
            let rho = q2 + (1.0 - q2) * f;
            let phi = 0.7 * (4 * i + j) as f64 + 0.2;
            out.push((Complex64::from_polar(1.0, theta), Complex64::from_polar(rho, phi)));
        }
    }
    out
}

/// `λ ∈ {1, e^{0.4i}, q^{1/2}}`.
pub fn coamen_lambdas(base: &QBase) -> [Complex64; 3] {
    [
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, 0.4),
        Complex64::new(base.q().sqrt(), 0.0),
    ]
}

/// Twenty midpoints of `[0, π/|log q|]`, the imaginary parts of the unitary
/// range `z = it`. Both endpoints give `λ² = 1` and are left out.
pub fn unitary_midpoints(base: &QBase) -> Vec<f64> {
    let top = PI / base.log_q().abs();
    (0..20).map(|i| (i as f64 + 0.5) / 20.0 * top).collect()
}

/// Every point of `I_q` with `|exponent| ≤ max`, positive points first in
/// increasing exponent, then the negative ones.
pub fn iq_window(max: i64) -> Vec<IqPoint> {
    let mut out: Vec<IqPoint> = (-max..=max).map(IqPoint::positive).collect();
    out.extend((1..=max).filter_map(|k| IqPoint::negative(k).ok()));
    out
}

/// Orders `k` of the Gaussian averages.
pub const SMOOTHING_ORDERS: [u32; 2] = [2, 5];

/// Widths `n` of the Gaussian averages.
pub const SMOOTHING_WIDTHS: [f64; 4] = [4.0, 16.0, 64.0, 256.0];

/// Four points `q^0, q^{−1}, q^{−2}, q^{−4}` where `a_z` is entire in `z`.
pub fn smoothing_points() -> [IqPoint; 4] {
    [0, -1, -2, -4].map(IqPoint::positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_grid_ranges() {
        let g = theta_grid();
        assert_eq!(g.len(), 100);
        for (a, k) in g {
            assert!((0.5..=2.0).contains(&a.norm()));
            assert!((-5..=5).contains(&k));
        }
    }

    #[test]
    fn overlap_grid_in_annulus() {
        for q in [0.3, 0.5, 0.8] {
            let b = QBase::new(q).unwrap();
            let g = overlap_grid(&b);
            assert_eq!(g.len(), 20);
            for (l, k) in g {
                assert!((l.norm() - 1.0).abs() < 1e-15);
                assert!(k.norm() > q * q && k.norm() < 1.0);
            }
        }
    }

    #[test]
    fn window_sizes() {
        assert_eq!(iq_window(6).len(), 13 + 6);
        assert_eq!(unitary_midpoints(&QBase::new(0.5).unwrap()).len(), 20);
    }
}
