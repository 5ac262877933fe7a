//! Reference numerics used to validate the closed-form and production code paths.
//!
//! Nothing here is called by the physics modules. These routines are deliberately
//! built from different machinery than what they check: quadrature instead of
//! closed-form integrals, finite differences instead of analytic derivatives,
//! inertia counting instead of Jacobi rotations.

use crate::constants::{MaterialParams, PhysicalConstants};
use crate::electrostatics::{FieldCoefficients, Transverse};
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss–Legendre rule mapped onto [a, b].
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Adaptive Gauss–Legendre: bisect until the whole-interval and split estimates
/// agree to `rel_tol` of the running magnitude.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let rule = GaussRule::new(20);
    let whole = rule.integrate(f, a, b);
    adaptive_step(f, &rule, a, b, whole, rel_tol, 0)
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussRule,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    let split = left + right;
    let scale = split.abs().max(whole.abs());
    if depth >= 40 || (split - whole).abs() <= rel_tol * scale || scale == 0.0 {
        return split;
    }
    adaptive_step(f, rule, a, m, left, rel_tol, depth + 1)
        + adaptive_step(f, rule, m, b, right, rel_tol, depth + 1)
}

/// 1s envelope, written out independently of the production module.
fn f1s(r: f64, a: f64) -> f64 {
    (-r / a).exp() / (PI.sqrt() * a.powf(1.5))
}

/// 2s envelope, written out independently of the production module.
fn f2s(r: f64, a: f64) -> f64 {
    (2.0 - r / a) * (-r / (2.0 * a)).exp() / (4.0 * (2.0 * PI).sqrt() * a.powf(1.5))
}

/// ∫|F|² d³r for the 1s (n = 1) or 2s (n = 2) envelope, by radial quadrature.
pub fn hydrogenic_norm(n: u8, a_star: f64) -> f64 {
    let f = |r: f64| {
        let v = if n == 1 { f1s(r, a_star) } else { f2s(r, a_star) };
        4.0 * PI * r * r * v * v
    };
    integrate_adaptive(&f, 0.0, 80.0 * a_star, 1e-12)
}

/// ⟨2s|ΔĤ|1s⟩ by 3-D quadrature of the full local perturbation
/// ΔĤ = −eφ₀ + eE_c z − (eE'_c/2) z² + (eE''_c/2) T, where T is ρ² for a
/// radially symmetric gate and x² for a strip.
///
/// Radial: adaptive Gauss–Legendre on [0, 40 a*]; polar: Gauss–Legendre in cosθ;
/// azimuth: trapezoid (exact for the trigonometric polynomials involved).
pub fn matrix_element_quadrature(
    fc: &FieldCoefficients,
    mat: &MaterialParams,
    pc: &PhysicalConstants,
) -> f64 {
    let a = mat.a_star;
    let e = pc.e;
    let polar = GaussRule::new(16);
    let n_phi = 16;
    let mut total = 0.0;
    for (u, wu) in polar.nodes().iter().zip(polar.weights()) {
        let sin2 = 1.0 - u * u;
        for k in 0..n_phi {
            let phi = 2.0 * PI * (k as f64 + 0.5) / n_phi as f64;
            let wphi = 2.0 * PI / n_phi as f64;
            let transverse = match fc.transverse {
                Transverse::Radial => sin2,
                Transverse::Planar => sin2 * phi.cos().powi(2),
            };
            let radial = |r: f64| {
                let z = r * u;
                let dh = -e * fc.phi0 + e * fc.e_c * z - 0.5 * e * fc.e1_c * z * z
                    + 0.5 * e * fc.e2_c * r * r * transverse;
                r * r * f2s(r, a) * dh * f1s(r, a)
            };
            total += wu * wphi * integrate_adaptive(&radial, 0.0, 40.0 * a, 1e-11);
        }
    }
    total
}

/// First derivative by central differences with two Richardson levels (error O(h⁶)).
pub fn richardson_first<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    richardson(d, h)
}

/// Second derivative by central differences with two Richardson levels.
pub fn richardson_second<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    richardson(d, h)
}

fn richardson<D: Fn(f64) -> f64>(d: D, h: f64) -> f64 {
    let d1 = d(h);
    let d2 = d(h / 2.0);
    let d4 = d(h / 4.0);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Number of eigenvalues of the symmetric matrix `m` strictly below `lambda`,
/// from the signs of the pivots of an unpivoted LDLᵀ of (m − λI).
pub fn count_below(m: &[Vec<f64>], lambda: f64) -> usize {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1.0);
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = a[k][k];
        if pivot == 0.0 {
            // nudge off an exact singularity; does not change the inertia count
            pivot = -f64::EPSILON * scale;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let factor = a[i][k] / pivot;
            for j in k + 1..n {
                a[i][j] -= factor * a[k][j];
            }
        }
    }
    negatives
}

/// All eigenvalues of a small symmetric matrix by bisection on the inertia count.
pub fn eigenvalues_by_bisection(m: &[Vec<f64>], tol: f64) -> Vec<f64> {
    let n = m.len();
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, row) in m.iter().enumerate() {
        let radius: f64 = row
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.abs())
            .sum();
        lo = lo.min(row[i] - radius);
        hi = hi.max(row[i] + radius);
    }
    lo -= 1.0;
    hi += 1.0;
    (0..n)
        .map(|k| {
            // smallest λ with count_below(λ) > k
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if count_below(m, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Least-squares fit of y = c0 + c1 x + c2 x² (normal equations, 3×3 Cramer).
pub fn fit_quadratic(xs: &[f64], ys: &[f64]) -> [f64; 3] {
    let mut s = [0.0; 5];
    let mut t = [0.0; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut p = 1.0;
        for (k, sk) in s.iter_mut().enumerate() {
            *sk += p;
            if k < 3 {
                t[k] += p * y;
            }
            p *= x;
        }
    }
    let m = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = det3(&m);
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = t[row];
        }
        *o = det3(&mc) / det;
    }
    out
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        let rule = GaussRule::new(5);
        // degree 9 is the limit for n = 5
        let got = rule.integrate(|x| x.powi(8) + 3.0 * x.powi(3), -1.0, 1.0);
        assert!((got - 2.0 / 9.0).abs() < 1e-14);
        let got = rule.integrate(|x| x * x, 0.0, 3.0);
        assert!((got - 9.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_exponential_tail() {
        let got = integrate_adaptive(&|x: f64| (-x).exp(), 0.0, 60.0, 1e-12);
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn richardson_derivatives_of_sine() {
        let f = |x: f64| x.sin();
        assert!((richardson_first(&f, 0.3, 1e-2) - 0.3f64.cos()).abs() < 1e-12);
        assert!((richardson_second(&f, 0.3, 1e-2) + 0.3f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn bisection_finds_known_spectrum() {
        let m = vec![
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ];
        let got = eigenvalues_by_bisection(&m, 1e-13);
        let s2 = 2.0f64.sqrt();
        for (g, e) in got.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_fit_recovers_coefficients() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.1 + 0.55 * x - 0.09 * x * x).collect();
        let c = fit_quadratic(&xs, &ys);
        assert!((c[0] - 0.1).abs() < 1e-12);
        assert!((c[1] - 0.55).abs() < 1e-11);
        assert!((c[2] + 0.09).abs() < 1e-10);
    }
}
