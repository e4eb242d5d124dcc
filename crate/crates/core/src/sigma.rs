//! Weierstrass σ-function of the square lattice ℤ + iℤ.
//!
//! The production path reduces an argument to the fundamental square
//! `[-1/2, 1/2]²` with the quasi-periodicity law
//!
//! ```text
//! σ(z + m + in) = (-1)^{m+n+mn} · exp((m·η₁ + n·η₂)(z + (m+in)/2)) · σ(z)
//! ```
//!
//! and evaluates the reduced value through the Jacobi θ₁ series with nome
//! `q = e^{-π}`. Values are carried as complex logarithms so that
//! `|σ(z)| ~ e^{π|z|²/2}` never overflows for moderate `|z|`.
//!
//! [`direct_product`] is the independent route: the symmetric truncated
//! Weierstrass product with Richardson extrapolation in the truncation size.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // f64 math methods when built without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::FockPoint;

/// Quasi-periods for the full periods 1 and i.
///
/// `σ(z+1) = -σ(z)·e^{η₁(z+1/2)}` and `σ(z+i) = -σ(z)·e^{η₂(z+i/2)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiPeriods {
    pub eta1: C64,
    pub eta2: C64,
}

impl QuasiPeriods {
    /// Solves the Legendre relation `η₁ω₂ − η₂ω₁ = 2πi` (ω₁ = 1, ω₂ = i)
    /// together with the rotation law `σ(iz) = iσ(z)`, which forces
    /// `ζ(iz) = −iζ(z)` and hence `η₂ = −i·η₁`.
    pub fn derive() -> Self {
        let omega1 = C64::new(1.0, 0.0);
        let omega2 = C64::new(0.0, 1.0);
        let rotation = C64::new(0.0, -1.0);
        let eta1 = C64::new(0.0, 2.0 * PI) / (omega2 - rotation * omega1);
        QuasiPeriods {
            eta1,
            eta2: rotation * eta1,
        }
    }

    /// η for the lattice vector m + in.
    pub fn eta(&self, m: i64, n: i64) -> C64 {
        self.eta1 * m as f64 + self.eta2 * n as f64
    }
}

/// Logarithm of a complex value: `re = ln|v|`, `im = arg v`. Zero is
/// represented with `re = -∞`.
pub type LogValue = C64;

/// Nearest lattice point to `z` as integer coordinates.
pub fn nearest_lattice(z: C64) -> (i64, i64) {
    (z.re.round() as i64, z.im.round() as i64)
}

/// Euclidean distance from `z` to ℤ + iℤ.
pub fn lattice_distance(z: C64) -> f64 {
    let (m, n) = nearest_lattice(z);
    (z - C64::new(m as f64, n as f64)).norm()
}

/// Returns the lattice coordinates of `w` if it is (to 1e-9) a point of ℤ + iℤ.
pub fn as_lattice_point(w: C64) -> Option<(i64, i64)> {
    let (m, n) = nearest_lattice(w);
    if (w - C64::new(m as f64, n as f64)).norm() < 1e-9 {
        Some((m, n))
    } else {
        None
    }
}

fn lattice_sign(m: i64, n: i64) -> f64 {
    if (m + n + m * n).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

const THETA_TERMS: usize = 7;

/// Evaluator for σ, σ₀ and related quantities on the square lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEvaluator {
    eta: QuasiPeriods,
    /// q^{(n+1/2)²}·(−1)^n for n < THETA_TERMS
    theta_weights: [f64; THETA_TERMS],
    /// ln(π·θ₁'(0))
    ln_norm: f64,
}

impl Default for SigmaEvaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl SigmaEvaluator {
    pub fn new() -> Self {
        let eta = QuasiPeriods::derive();
        // θ-function nome for τ = ω₂/ω₁ = i
        let ln_q = -PI;
        let mut theta_weights = [0.0; THETA_TERMS];
        let mut theta1_prime = 0.0;
        for (n, w) in theta_weights.iter_mut().enumerate() {
            let k = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *w = sign * (ln_q * k * k).exp();
            theta1_prime += 2.0 * *w * (2.0 * n as f64 + 1.0);
        }
        SigmaEvaluator {
            eta,
            theta_weights,
            ln_norm: (PI * theta1_prime).ln(),
        }
    }

    pub fn quasi_periods(&self) -> QuasiPeriods {
        self.eta
    }

    /// σ(h)/h for `h` in (a neighbourhood of) the fundamental square, via
    /// `σ(h) = e^{η₁h²/2}·θ₁(πh)/(π·θ₁'(0))`.
    fn ln_sigma_over_h_cell(&self, h: C64) -> LogValue {
        // θ₁(πh)/h = 2 Σ (−1)^n q^{(n+1/2)²} sin((2n+1)πh)/h
        let mut s = C64::new(0.0, 0.0);
        for (n, w) in self.theta_weights.iter().enumerate() {
            let k = (2 * n + 1) as f64 * PI;
            s += sin_over(k, h) * (2.0 * w);
        }
        self.eta.eta1 * h * h * 0.5 + s.ln() - self.ln_norm
    }

    /// ln σ(z).
    pub fn ln_sigma(&self, z: C64) -> LogValue {
        let (m, n) = nearest_lattice(z);
        let w = C64::new(m as f64, n as f64);
        let h = z - w;
        if h.norm() == 0.0 {
            return C64::new(f64::NEG_INFINITY, 0.0);
        }
        self.ln_translation(m, n, h) + self.ln_sigma_over_h_cell(h) + h.ln()
    }

    /// ln of ε_w·e^{η(w)(h + w/2)}, the factor with σ(w + h) = factor·σ(h).
    fn ln_translation(&self, m: i64, n: i64, h: C64) -> LogValue {
        let w = C64::new(m as f64, n as f64);
        let sign = if lattice_sign(m, n) > 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, PI)
        };
        sign + self.eta.eta(m, n) * (h + w * 0.5)
    }

    /// σ(z). Overflows to infinity for |z| beyond roughly 21.
    pub fn sigma(&self, z: C64) -> C64 {
        exp_log(self.ln_sigma(z))
    }

    /// ln of σ(z)/(z − w) for a lattice point w (given by coordinates).
    /// Accurate also as z → w, where it tends to ln σ'(w).
    pub fn ln_sigma_div(&self, z: C64, m: i64, n: i64) -> LogValue {
        let w = C64::new(m as f64, n as f64);
        let h = z - w;
        if h.norm() <= 0.5 {
            self.ln_translation(m, n, h) + self.ln_sigma_over_h_cell(h)
        } else {
            self.ln_sigma(z) - h.ln()
        }
    }

    /// ln σ₀(z) where σ₀(z) = σ(z)/z and σ₀(0) = 1.
    pub fn ln_sigma0(&self, z: C64) -> LogValue {
        self.ln_sigma_div(z, 0, 0)
    }

    pub fn sigma0(&self, z: C64) -> C64 {
        exp_log(self.ln_sigma0(z))
    }

    /// ln of σ₀(z)/(z − w) for a nonzero lattice point w, removable
    /// singularity at z = w included.
    pub fn ln_sigma0_div(&self, z: C64, m: i64, n: i64) -> LogValue {
        let w = C64::new(m as f64, n as f64);
        if (z - w).norm() <= 0.5 {
            self.ln_sigma_div(z, m, n) - z.ln()
        } else {
            self.ln_sigma0(z) - (z - w).ln()
        }
    }

    /// ln σ'(w) for the lattice point with coordinates (m, n):
    /// σ'(w) = ε_w·e^{η(w)·w/2}·σ'(0), σ'(0) = 1.
    pub fn ln_sigma_prime_coords(&self, m: i64, n: i64) -> LogValue {
        self.ln_translation(m, n, C64::new(0.0, 0.0))
    }

    /// σ'(w) and σ₀'(w) = σ'(w)/w at a nonzero lattice point, both in log form.
    pub fn sigma_prime_lattice(&self, w: FockPoint) -> Result<SigmaPrime> {
        let (m, n) = as_lattice_point(w.w)
            .filter(|&(m, n)| (m, n) != (0, 0))
            .ok_or_else(|| Error::NotALatticePoint(alloc::format!("{}", w.w)))?;
        let ln_sigma_prime = self.ln_sigma_prime_coords(m, n);
        let lw = C64::new(m as f64, n as f64).ln();
        Ok(SigmaPrime {
            ln_sigma_prime,
            ln_sigma0_prime: ln_sigma_prime - lw,
        })
    }

    /// |σ(z)|·e^{−π|z|²/2}/dist(z, 𝒵), extended by continuity on the lattice.
    pub fn growth_ratio(&self, z: C64) -> f64 {
        let (m, n) = nearest_lattice(z);
        let h = z - C64::new(m as f64, n as f64);
        // The translation factor cancels against e^{−π|z|²/2} up to e^{−π|h|²/2}.
        let l = self.ln_sigma_over_h_cell(h);
        (l.re - PI * h.norm_sqr() * 0.5).exp()
    }

    /// Supremum and infimum of [`Self::growth_ratio`] over a `k × k` grid of
    /// the fundamental square. The ratio is doubly periodic, so these bound it
    /// on the whole plane up to grid resolution.
    pub fn growth_range_on_cell(&self, k: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=k {
            for j in 0..=k {
                let z = C64::new(-0.5 + i as f64 / k as f64, -0.5 + j as f64 / k as f64);
                let r = self.growth_ratio(z);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        (lo, hi)
    }
}

impl SigmaEvaluator {
    /// Mean of the doubly periodic function `|σ(z)|²e^{−π|z|²}` over a
    /// period cell, by the `k × k` periodic trapezoid rule.
    pub fn cell_mean_mass(&self, k: usize) -> f64 {
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                let h = C64::new(-0.5 + (i as f64 + 0.5) / k as f64, -0.5 + (j as f64 + 0.5) / k as f64);
                s += (2.0 * self.ln_sigma(h).re - PI * h.norm_sqr()).exp();
            }
        }
        s / (k * k) as f64
    }
}

/// σ'(w) data at a lattice point, in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPrime {
    pub ln_sigma_prime: LogValue,
    pub ln_sigma0_prime: LogValue,
}

impl SigmaPrime {
    pub fn sigma_prime(&self) -> C64 {
        exp_log(self.ln_sigma_prime)
    }
    pub fn sigma0_prime(&self) -> C64 {
        exp_log(self.ln_sigma0_prime)
    }
}

/// sin(k·h)/h with the h → 0 limit handled.
fn sin_over(k: f64, h: C64) -> C64 {
    let x = h * k;
    if x.norm() < 1e-3 {
        let x2 = x * x;
        (C64::new(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0) * k
    } else {
        x.sin() / h
    }
}

/// e^{l} with the `-∞` real part mapped to an exact zero.
pub fn exp_log(l: LogValue) -> C64 {
    if l.re == f64::NEG_INFINITY {
        C64::new(0.0, 0.0)
    } else {
        l.exp()
    }
}

/// Symmetric truncated product `z·Π_{0<max(|m|,|n|)≤L} (1 − z/λ)`.
///
/// Over a square that is invariant under λ ↦ iλ the convergence factors
/// `e^{z/λ + z²/(2λ²)}` multiply to one, and each rotation orbit
/// {λ, iλ, −λ, −iλ} contributes `1 − z⁴/λ⁴`.
pub fn truncated_product(z: C64, l: usize) -> C64 {
    let z4 = z * z * z * z;
    let mut p = z;
    let l = l as i64;
    for m in 1..=l {
        for n in 0..=l {
            let lam = C64::new(m as f64, n as f64);
            let lam2 = lam * lam;
            p *= C64::new(1.0, 0.0) - z4 / (lam2 * lam2);
        }
    }
    p
}

/// Direct-product σ(z): truncated symmetric products at the given sizes,
/// extrapolated to L → ∞ by Neville's scheme in `(L + 1/2)^{-2}`.
///
/// The square-shell remainder of `ln σ_L` expands in even powers of
/// `1/(L + 1/2)` (midpoint-rule structure of the shell sums), so each
/// extra size removes one more term.
pub fn direct_product(z: C64, sizes: &[usize]) -> C64 {
    let hs: Vec<f64> = sizes
        .iter()
        .map(|&l| {
            let m = l as f64 + 0.5;
            1.0 / (m * m)
        })
        .collect();
    let mut vals: Vec<C64> = sizes.iter().map(|&l| truncated_product(z, l)).collect();
    neville_at_zero(&hs, &mut vals)
}

/// Polynomial extrapolation of (h_i, v_i) to h = 0.
pub fn neville_at_zero(h: &[f64], v: &mut [C64]) -> C64 {
    let n = v.len();
    for k in 1..n {
        for i in 0..n - k {
            v[i] = (v[i + 1] * h[i] - v[i] * h[i + k]) / (h[i] - h[i + k]);
        }
    }
    v[0]
}

/// Default sizes used by the direct-product oracle.
pub const DIRECT_SIZES: [usize; 4] = [40, 80, 120, 160];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasi_periods_from_legendre() {
        let q = QuasiPeriods::derive();
        assert!((q.eta1 - C64::new(PI, 0.0)).norm() < 1e-15);
        assert!((q.eta2 - C64::new(0.0, -PI)).norm() < 1e-15);
    }

    #[test]
    fn sigma_basic_identities() {
        let s = SigmaEvaluator::new();
        assert_eq!(s.sigma(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        for m in -4..=4 {
            for n in -4..=4 {
                let v = s.sigma(C64::new(m as f64, n as f64));
                assert_eq!(v, C64::new(0.0, 0.0));
            }
        }
        assert!((s.sigma0(C64::new(0.0, 0.0)) - 1.0).norm() < 1e-15);
        let z = C64::new(0.31, -0.22);
        assert!((s.sigma(-z) + s.sigma(z)).norm() < 1e-14);
        // σ(iz) = iσ(z)
        let iz = C64::new(0.0, 1.0) * z;
        assert!((s.sigma(iz) - C64::new(0.0, 1.0) * s.sigma(z)).norm() < 1e-14);
    }

    #[test]
    fn sigma_matches_direct_product_near_origin() {
        let s = SigmaEvaluator::new();
        for z in [
            C64::new(0.5, 0.0),
            C64::new(0.3, 0.4),
            C64::new(-1.2, 0.7),
            C64::new(2.3, -1.9),
        ] {
            let a = s.sigma(z);
            let b = direct_product(z, &DIRECT_SIZES);
            assert!((a - b).norm() / a.norm() < 1e-10, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn sigma_prime_at_one_is_negative_real() {
        let s = SigmaEvaluator::new();
        let sp = s.sigma_prime_lattice(FockPoint::new(C64::new(1.0, 0.0))).unwrap();
        let v = sp.sigma_prime();
        assert!((v - C64::new(-(PI / 2.0).exp(), 0.0)).norm() < 1e-12);
        assert!(s.sigma_prime_lattice(FockPoint::new(C64::new(0.5, 0.0))).is_err());
        assert!(s.sigma_prime_lattice(FockPoint::new(C64::new(0.0, 0.0))).is_err());
    }

    #[test]
    fn removable_quotient_is_continuous() {
        let s = SigmaEvaluator::new();
        let w = C64::new(2.0, 1.0);
        let at = exp_log(s.ln_sigma0_div(w, 2, 1));
        let near = exp_log(s.ln_sigma0_div(w + C64::new(1e-7, 0.0), 2, 1));
        assert!((at - near).norm() / at.norm() < 1e-5);
        let sp = s.sigma_prime_lattice(FockPoint::new(w)).unwrap();
        assert!((at - sp.sigma0_prime()).norm() / at.norm() < 1e-13);
    }
}
