//! The Bargmann transform `L²(ℝ) → 𝓕`,
//!
//! ```text
//! 𝓑f(z) = 2^{1/4} ∫ f(t)·e^{−πt²}·e^{2πtz}·e^{−πz²/2} dt,
//! ```
//!
//! in closed form on Gaussian atoms and Hermite expansions, and by trapezoid
//! quadrature on sampled inputs.
//!
//! Completing the square gives, for the atom at `(x, y)` and `w = x − iy`,
//! `𝓑(atom)(z) = 2^{−1/4}·e^{iπxy}·e^{−π|w|²/2}·e^{π·conj(w)·z}`. The
//! unimodular factor `e^{iπxy}` is the same whether one starts from the
//! integral form above or from the windowed form
//! `2^{1/4}e^{−iπxy}e^{π|z|²/2}∫f(t)e^{2πiyt}e^{−π(t−x)²}dt`: the two
//! exponents agree identically.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // f64 math methods when built without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{ln_kernel_norm, phase_to_fock, FockFunction, PhasePoint, Primitive, TaylorPolicy};

/// 2^{1/4}
pub const FOURTH_ROOT_2: f64 = 1.189_207_115_002_721;

/// Phase of `𝓑h_n` relative to `e_n(z) = (πⁿ/n!)^{1/2}zⁿ`. Measured by
/// quadrature of the defining integral at z = 1 for n ≤ 20 (see the
/// `hermite_phase_is_one` test): every phase is +1.
pub const HERMITE_PHASE: f64 = 1.0;

/// The time–frequency shifted Gaussian `t ↦ e^{2πiyt}·e^{−π(t−x)²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborAtom {
    pub location: PhasePoint,
}

impl GaborAtom {
    pub fn new(x: f64, y: f64) -> Self {
        GaborAtom {
            location: PhasePoint::new(x, y),
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        let PhasePoint { x, y } = self.location;
        C64::from_polar((-PI * (t - x) * (t - x)).exp(), 2.0 * PI * y * t)
    }

    /// ‖atom‖₂² = 2^{−1/2} for every location.
    pub fn norm_sqr(&self) -> f64 {
        1.0 / SQRT_2
    }
}

/// `∫ a(t)·conj(b(t)) dt`.
///
/// With `m = (x₁+x₂)/2`: `(t−x₁)² + (t−x₂)² = 2(t−m)² + (x₁−x₂)²/2`, and
/// `∫e^{−2πs²+2πiηs}ds = 2^{−1/2}e^{−πη²/2}`, so
/// `⟨a, b⟩ = 2^{−1/2}·e^{−π(Δx²+Δy²)/2}·e^{iπ(y₁−y₂)(x₁+x₂)}`.
pub fn atom_inner(a: &GaborAtom, b: &GaborAtom) -> C64 {
    let (p, q) = (a.location, b.location);
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    C64::from_polar((-0.5 * PI * (dx * dx + dy * dy)).exp() / SQRT_2, PI * dy * (p.x + q.x))
}

/// `𝓑(atom) = 2^{−1/4}·e^{iπxy}·k_w/‖k_w‖` with `w = x − iy`.
pub fn bargmann_atom(a: &GaborAtom) -> FockFunction {
    let w = phase_to_fock(a.location).w;
    let PhasePoint { x, y } = a.location;
    let c = C64::from_polar((-ln_kernel_norm(w)).exp() / FOURTH_ROOT_2, PI * x * y);
    FockFunction::from_terms(vec_one(c, Primitive::Kernel(w)), TaylorPolicy::Tolerance(1e-13))
        .expect("normalized kernels have convergent Taylor data")
}

fn vec_one(c: C64, p: Primitive) -> Vec<(C64, Primitive)> {
    let mut v = Vec::with_capacity(1);
    v.push((c, p));
    v
}

/// A finite combination `Σ c_n h_n` of the Hermite functions orthonormal in
/// `L²(ℝ)` and adapted to the weight `e^{−πt²}`:
/// `h_0(t) = 2^{1/4}e^{−πt²}`,
/// `h_{n+1} = (2/(n+1))^{1/2}·u·h_n − (n/(n+1))^{1/2}·h_{n−1}`, `u = (2π)^{1/2}t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    pub coeffs: Vec<C64>,
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<C64>) -> Self {
        HermiteExpansion { coeffs }
    }

    /// The single basis function `h_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = alloc::vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        HermiteExpansion { coeffs }
    }

    /// ‖f‖₂ from the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, t: f64) -> C64 {
        hermite_functions(self.coeffs.len().saturating_sub(1), t)
            .iter()
            .zip(&self.coeffs)
            .map(|(h, c)| c * *h)
            .sum()
    }

    /// Samples on the uniform grid `t_j = −T + j·step`.
    pub fn sample(&self, half_width: f64, step: f64) -> SampledFunction {
        SampledFunction::from_fn(half_width, step, |t| self.eval(t))
    }
}

/// `h_0(t), …, h_n(t)` by the three-term recurrence.
pub fn hermite_functions(n: usize, t: f64) -> Vec<f64> {
    let u = (2.0 * PI).sqrt() * t;
    let mut h = Vec::with_capacity(n + 1);
    h.push(FOURTH_ROOT_2 * (-PI * t * t).exp());
    if n >= 1 {
        h.push(SQRT_2 * u * h[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// `𝓑(Σ c_n h_n) = Σ c_n·e_n`, i.e. `𝓑h_n = (πⁿ/n!)^{1/2}·zⁿ`.
pub fn bargmann_transform(f: &HermiteExpansion) -> FockFunction {
    FockFunction::from_orthonormal_coeffs(f.coeffs.iter().map(|c| c * HERMITE_PHASE).collect())
}

/// A complex function sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub start: f64,
    pub step: f64,
    pub values: Vec<C64>,
}

/// Default grid: step 1/64 on [−12, 12].
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
pub const DEFAULT_STEP: f64 = 1.0 / 64.0;

impl SampledFunction {
    pub fn from_fn(half_width: f64, step: f64, f: impl Fn(f64) -> C64) -> Self {
        let n = (2.0 * half_width / step).round() as usize;
        let values = (0..=n).map(|j| f(-half_width + j as f64 * step)).collect();
        SampledFunction {
            start: -half_width,
            step,
            values,
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len().saturating_sub(1)) as f64
    }

    /// Trapezoid ‖f‖₂ on the grid.
    pub fn l2_norm(&self) -> f64 {
        let n = self.values.len();
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
                w * v.norm_sqr()
            })
            .sum();
        (s * self.step).sqrt()
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub value: C64,
    pub error_bound: f64,
}

/// `𝓑f(z)` by the trapezoid rule on the samples.
///
/// The error estimate is the difference to the rule on every other sample
/// plus a Gaussian-tail term that assumes `|f| ≤ max|samples|` off the grid.
pub fn bargmann_pointwise(f: &SampledFunction, z: C64, tolerance: f64) -> Result<PointValue> {
    if f.values.is_empty() {
        return Ok(PointValue {
            value: C64::new(0.0, 0.0),
            error_bound: 0.0,
        });
    }
    let sup = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (x, y) = (z.re, z.im);
    // ∫_{t∉[a,b]} |kernel| = 2^{1/4}e^{π|z|²/2}·(erfc(√π(b−x)) + erfc(√π(x−a)))/2
    let (a, b) = (f.start, f.end());
    let tail = sup
        * FOURTH_ROOT_2
        * (0.5 * PI * (x * x + y * y)).exp()
        * 0.5
        * (libm::erfc(PI.sqrt() * (b - x)) + libm::erfc(PI.sqrt() * (x - a)));
    if tail > tolerance {
        return Err(Error::DomainTooSmall { tail, tolerance });
    }
    let kernel = |t: f64| -> C64 {
        ((C64::new(-PI * t * t, 0.0) + z * (2.0 * PI * t) - z * z * (0.5 * PI)).exp()) * FOURTH_ROOT_2
    };
    let n = f.values.len();
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for (j, v) in f.values.iter().enumerate() {
        let t = f.start + j as f64 * f.step;
        let term = v * kernel(t);
        let edge = j == 0 || j + 1 == n;
        fine += if edge { term * 0.5 } else { term };
        if j % 2 == 0 {
            let cedge = j == 0 || j + 2 >= n;
            coarse += if cedge { term * 0.5 } else { term };
        }
    }
    fine *= f.step;
    coarse *= 2.0 * f.step;
    let quad_err = if n > 4 { (fine - coarse).norm() } else { f64::INFINITY };
    Ok(PointValue {
        value: fine,
        error_bound: quad_err + tail,
    })
}
