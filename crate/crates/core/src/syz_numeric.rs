//! Floating-point checks on the mirror side: flux coordinates of the torus
//! fibration `T_{R,λ} = {|uv - 1| = R, |u|^2 - |v|^2 = λ}`, the critical
//! points of the superpotential, and the Hessian metric of
//! `F = x^2 + y^2/x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
const MIN_PANELS: usize = 8;
const MAX_PANELS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberParams {
    pub r: f64,
    pub lambda: f64,
}

impl FiberParams {
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "fiber parameters R = {r}, lambda = {lambda}"
            )));
        }
        Ok(Self { r, lambda })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyzCoordinates {
    pub eta: f64,
    pub xi: f64,
    pub psi: f64,
}

/// Result of a periodic trapezoid integration over `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub panels: usize,
    /// `|T_{2N} - T_N|` at the final doubling.
    pub last_change: f64,
}

/// Trapezoid rule on `[0, 2π)` with panel doubling until successive
/// estimates differ by at most `tol`. Exponentially convergent for smooth
/// periodic integrands.
pub fn periodic_trapezoid(f: impl Fn(f64) -> f64, tol: f64) -> Result<Quadrature> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let mut n = MIN_PANELS;
    let mut sum: f64 = (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).sum();
    let mut estimate = 2.0 * PI * sum / n as f64;
    let mut evaluations = n;
    let mut change = f64::INFINITY;
    while n < MAX_PANELS {
        // new nodes sit at the midpoints of the current panels
        let mid: f64 = (0..n)
            .map(|k| f(2.0 * PI * (k as f64 + 0.5) / n as f64))
            .sum();
        evaluations += n;
        sum += mid;
        n *= 2;
        let next = 2.0 * PI * sum / n as f64;
        change = (next - estimate).abs();
        estimate = next;
        if change <= tol {
            return Ok(Quadrature {
                value: estimate,
                panels: n,
                last_change: change,
            });
        }
    }
    Err(Error::QuadratureNotConverged {
        tol,
        evaluations,
        last_change: change,
    })
}

fn modulus_sq(r: f64, theta: f64) -> f64 {
    let re = 1.0 + r * theta.cos();
    let im = r * theta.sin();
    re * re + im * im
}

/// `½ log((λ + sqrt(λ² + 4m))/2)`, evaluated without cancellation when
/// `λ < 0` through `(λ + s)/2 = 2m/(s - λ)`.
fn half_log_root(lambda: f64, m: f64) -> f64 {
    let s = (lambda * lambda + 4.0 * m).sqrt();
    let root = if lambda >= 0.0 {
        (lambda + s) / 2.0
    } else {
        2.0 * m / (s - lambda)
    };
    0.5 * root.ln()
}

/// `η = log R` and the flux integrals
/// `ξ = (1/2π)∫ ½ log((λ + sqrt(λ² + 4|1+Re^{iθ}|²))/2) dθ`,
/// `ψ` the same with `-λ`.
pub fn syz_coordinates(params: FiberParams, tol: f64) -> Result<SyzCoordinates> {
    let FiberParams { r, lambda } = params;
    if r == 1.0 && lambda == 0.0 {
        return Err(Error::Domain("T_{1,0} is the singular fiber".into()));
    }
    // the 1/2π prefactor scales the tolerance
    let t = tol * 2.0 * PI;
    let xi = periodic_trapezoid(|th| half_log_root(lambda, modulus_sq(r, th)), t)?;
    let psi = periodic_trapezoid(|th| half_log_root(-lambda, modulus_sq(r, th)), t)?;
    Ok(SyzCoordinates {
        eta: r.ln(),
        xi: xi.value / (2.0 * PI),
        psi: psi.value / (2.0 * PI),
    })
}

/// `∫_0^{2π} log|1 + R e^{iθ}| dθ`.
pub fn log_integral(r: f64, tol: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 || r == 1.0 {
        return Err(Error::Domain(format!(
            "log integral needs R > 0, R != 1 (got {r})"
        )));
    }
    Ok(periodic_trapezoid(|th| 0.5 * modulus_sq(r, th).ln(), tol)?.value)
}

/// `W(v, w) = (w + 1)/v + e^{-Λ} v²/w` in the `(v, w)` chart.
pub fn superpotential(lambda_kahler: f64, v: Complex64, w: Complex64) -> Complex64 {
    let q = (-lambda_kahler).exp();
    (w + 1.0) / v + q * v * v / w
}

/// `(∂W/∂v, ∂W/∂w)`.
pub fn gradient(lambda_kahler: f64, v: Complex64, w: Complex64) -> [Complex64; 2] {
    let q = (-lambda_kahler).exp();
    [
        -(w + 1.0) / (v * v) + 2.0 * q * v / w,
        1.0 / v - q * v * v / (w * w),
    ]
}

fn hessian_w(lambda_kahler: f64, v: Complex64, w: Complex64) -> [[Complex64; 2]; 2] {
    let q = (-lambda_kahler).exp();
    let vv = 2.0 * (w + 1.0) / (v * v * v) + 2.0 * q / w;
    let vw = -1.0 / (v * v) - 2.0 * q * v / (w * w);
    let ww = 2.0 * q * v * v / (w * w * w);
    [[vv, vw], [vw, ww]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub v: [f64; 2],
    pub w: [f64; 2],
    pub value: [f64; 2],
    pub residual: f64,
}

impl CriticalPoint {
    pub fn v(&self) -> Complex64 {
        Complex64::new(self.v[0], self.v[1])
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}

const STARTS: usize = 12;
const DEDUP_RADIUS: f64 = 1e-6;
const NEWTON_STEPS: usize = 100;

fn newton(
    lambda_kahler: f64,
    mut v: Complex64,
    mut w: Complex64,
) -> Option<(Complex64, Complex64)> {
    for _ in 0..NEWTON_STEPS {
        let [gv, gw] = gradient(lambda_kahler, v, w);
        let [[a, b], [_, d]] = hessian_w(lambda_kahler, v, w);
        let det = a * d - b * b;
        if !det.is_finite() || det.norm() == 0.0 {
            return None;
        }
        let dv = (d * gv - b * gw) / det;
        let dw = (a * gw - b * gv) / det;
        v -= dv;
        w -= dw;
        if !(v.is_finite() && w.is_finite()) || w.norm() == 0.0 || v.norm() == 0.0 {
            return None;
        }
        if dv.norm() <= 1e-15 * v.norm().max(1.0) && dw.norm() <= 1e-15 * w.norm().max(1.0) {
            break;
        }
    }
    Some((v, w))
}

/// Critical points of `W` by Newton's method on `∇W = 0` from 12 starts on
/// `|v| = e^{Λ/3}`, `w = 1`, deduplicated.
pub fn critical_points(lambda_kahler: f64) -> Result<Vec<CriticalPoint>> {
    if !(lambda_kahler > 0.0 && lambda_kahler.is_finite()) {
        return Err(Error::Domain(format!(
            "Kahler parameter {lambda_kahler} must be positive"
        )));
    }
    let radius = (lambda_kahler / 3.0).exp();
    let mut found: Vec<CriticalPoint> = Vec::new();
    let mut failures = 0;
    for k in 0..STARTS {
        let angle = 2.0 * PI * (k as f64 + 0.25) / STARTS as f64;
        let start = Complex64::from_polar(radius, angle);
        let Some((v, w)) = newton(lambda_kahler, start, Complex64::new(1.0, 0.0)) else {
            failures += 1;
            continue;
        };
        let [gv, gw] = gradient(lambda_kahler, v, w);
        let residual = (gv.norm_sqr() + gw.norm_sqr()).sqrt();
        if residual > 1e-12 {
            failures += 1;
            continue;
        }
        if found
            .iter()
            .any(|c| (c.v() - v).norm() < DEDUP_RADIUS * radius)
        {
            continue;
        }
        let value = superpotential(lambda_kahler, v, w);
        found.push(CriticalPoint {
            v: [v.re, v.im],
            w: [w.re, w.im],
            value: [value.re, value.im],
            residual,
        });
    }
    if found.len() != 3 {
        return Err(Error::RootFinding(format!(
            "found {} distinct critical points from {STARTS} starts ({failures} did not converge)",
            found.len()
        )));
    }
    // order by the cube root of unity nearest to v / |v|
    found.sort_by_key(|c| ((c.v[1].atan2(c.v[0]) * 3.0 / (2.0 * PI)).round() as i64).rem_euclid(3));
    Ok(found)
}

/// The closed form `3 e^{-Λ/3} e^{-2πin/3}`, `n = 0, 1, 2`.
pub fn expected_critical_values(lambda_kahler: f64) -> [Complex64; 3] {
    let m = 3.0 * (-lambda_kahler / 3.0).exp();
    [0.0, 1.0, 2.0].map(|n| Complex64::from_polar(m, -2.0 * PI * n / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianReport {
    pub closed_form: [[f64; 2]; 2],
    pub finite_difference: [[f64; 2]; 2],
    /// `max |difference| / max |entry|`.
    pub relative_error: f64,
    /// `-F_xy / F_yy`.
    pub ratio: f64,
    pub positive_definite: bool,
}

const FD_STEP: f64 = 1e-5;

fn gradient_f(x: f64, y: f64) -> [f64; 2] {
    [2.0 * x - y * y / (x * x), 2.0 * y / x]
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
pub fn symmetric_eigenvalues(m: &[[f64; 2]; 2]) -> [f64; 2] {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let half_gap = (0.25 * (m[0][0] - m[1][1]).powi(2) + m[0][1] * m[1][0]).sqrt();
    [mean - half_gap, mean + half_gap]
}

/// Hessian of `F = x² + y²/x` from the closed form and from central
/// differences (step `1e-5`) of the closed-form gradient, with the ratio
/// `-F_xy / F_yy = y / x`.
pub fn hessian_identity(x: f64, y: f64) -> Result<HessianReport> {
    if !(x > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!(
            "Hessian metric needs x > 0 (got x = {x})"
        )));
    }
    let fxx = 2.0 + 2.0 * y * y / (x * x * x);
    let fxy = -2.0 * y / (x * x);
    let fyy = 2.0 / x;
    let closed_form = [[fxx, fxy], [fxy, fyy]];
    let h = FD_STEP;
    let (gxp, gxm) = (gradient_f(x + h, y), gradient_f(x - h, y));
    let (gyp, gym) = (gradient_f(x, y + h), gradient_f(x, y - h));
    let finite_difference = [
        [(gxp[0] - gxm[0]) / (2.0 * h), (gyp[0] - gym[0]) / (2.0 * h)],
        [(gxp[1] - gxm[1]) / (2.0 * h), (gyp[1] - gym[1]) / (2.0 * h)],
    ];
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            diff = diff.max((closed_form[r][c] - finite_difference[r][c]).abs());
            scale = scale.max(closed_form[r][c].abs());
        }
    }
    let eig = symmetric_eigenvalues(&closed_form);
    Ok(HessianReport {
        closed_form,
        finite_difference,
        relative_error: diff / scale,
        ratio: -fxy / fyy,
        positive_definite: eig[0] > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_spectral() {
        let q = periodic_trapezoid(|t| t.cos().exp(), 1e-14).unwrap();
        // 2π I_0(1)
        assert!((q.value - 2.0 * PI * 1.266_065_877_752_008_4).abs() < 1e-13);
        assert!(q.panels <= 64);
        assert!(periodic_trapezoid(|t| t, -1.0).is_err());
    }

    #[test]
    fn coordinates() {
        let c = syz_coordinates(FiberParams::new(0.5, 0.0).unwrap(), 1e-10).unwrap();
        assert!(c.xi.abs() < 1e-10 && c.psi.abs() < 1e-10);
        let c = syz_coordinates(FiberParams::new(0.5, 0.3).unwrap(), 1e-10).unwrap();
        assert!((c.xi + c.psi).abs() < 1e-8);
        let c = syz_coordinates(FiberParams::new(2.0, -0.7).unwrap(), 1e-10).unwrap();
        assert!((c.xi + c.psi - 2f64.ln()).abs() < 1e-8);
        assert!(syz_coordinates(FiberParams::new(1.0, 0.0).unwrap(), 1e-8).is_err());
        assert!(FiberParams::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn log_integrals() {
        assert!(log_integral(0.5, 1e-12).unwrap().abs() < 1e-8);
        assert!((log_integral(2.0, 1e-12).unwrap() - 2.0 * PI * 2f64.ln()).abs() < 1e-8);
        assert!(log_integral(0.999, 1e-9).unwrap().abs() < 1e-6);
        assert!(log_integral(1.0, 1e-8).is_err());
    }

    #[test]
    fn superpotential_critical_points() {
        for lambda in [1.0, 3.0, 6.0] {
            let pts = critical_points(lambda).unwrap();
            let expected = expected_critical_values(lambda);
            for (p, e) in pts.iter().zip(expected.iter()) {
                assert!(
                    (p.value() - e).norm() <= 1e-10 * e.norm(),
                    "{lambda}: {:?} vs {e}",
                    p.value()
                );
                assert!(p.residual <= 1e-12);
                assert!((p.w[0] - 1.0).abs() < 1e-12 && p.w[1].abs() < 1e-12);
            }
            let product: Complex64 = pts.iter().map(CriticalPoint::value).product();
            assert!((product - 27.0 * (-lambda).exp()).norm() < 1e-10 * 27.0 * (-lambda).exp());
        }
        assert!(critical_points(0.0).is_err());
    }

    #[test]
    fn hessian() {
        assert_eq!(hessian_identity(1.0, 0.0).unwrap().ratio, 0.0);
        assert!((hessian_identity(2.0, 3.0).unwrap().ratio - 1.5).abs() < 1e-15);
        let r = hessian_identity(1.3, -0.4).unwrap();
        assert!(r.relative_error < 1e-6, "{}", r.relative_error);
        assert!(r.positive_definite);
        assert!(hessian_identity(0.0, 1.0).is_err());
    }
}
