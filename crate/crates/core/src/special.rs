//! Small special-function helpers: log-factorials, the regularized upper
//! incomplete gamma function for integer order, and Gauss–Legendre rules.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// ln(n!) by direct summation for small n and Stirling's series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| libm::log(k as f64)).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling for ln Γ(x)
        (x - 0.5) * libm::log(x) - x + 0.5 * libm::log(2.0 * PI) + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x)
            + 1.0 / (1260.0 * x * x * x * x * x)
    }
}

/// Regularized upper incomplete gamma Q(n+1, x) = e^{-x} Σ_{k≤n} x^k/k!.
///
/// This is the fraction of the Fock mass of the n-th orthonormal monomial that
/// lies outside the disk of radius sqrt(x/π).
pub fn gamma_q_int(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let ln_x = libm::log(x);
    // Sum in log space around the largest term to avoid overflow.
    let mut acc = 0.0;
    let mut max_ln = f64::NEG_INFINITY;
    let terms: Vec<f64> = (0..=n)
        .map(|k| {
            let t = k as f64 * ln_x - ln_factorial(k) - x;
            if t > max_ln {
                max_ln = t;
            }
            t
        })
        .collect();
    for t in &terms {
        acc += libm::exp(t - max_ln);
    }
    let q = libm::exp(max_ln + libm::log(acc));
    q.min(1.0)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
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
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
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
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ln_factorial_branches_agree() {
        let direct: f64 = (2..=40).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(40) - direct).abs() < 1e-12);
    }

    #[test]
    fn gamma_q_limits() {
        assert!((gamma_q_int(0, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((gamma_q_int(3, 0.0) - 1.0).abs() < 1e-15);
        // Q(2, x) = e^{-x}(1 + x)
        assert!((gamma_q_int(1, 3.0) - 4.0 * (-3.0f64).exp()).abs() < 1e-14);
    }
}
