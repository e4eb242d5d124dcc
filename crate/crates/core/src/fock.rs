//! Phase-plane and Fock-space domain types, and the two inner-product engines.
//!
//! The Fock space carries the inner product
//! `⟨F, G⟩ = ∫ F(z)·conj(G(z))·e^{−π|z|²} dm(z)`, in which the monomials are
//! orthogonal with `‖zⁿ‖² = n!/πⁿ` and `k_w(z) = e^{π·conj(w)·z}` reproduces
//! point values: `⟨F, k_w⟩ = F(w)`.
//!
//! A [`FockFunction`] is held twice: as a sum of closed-form [`Primitive`]s
//! (exact pointwise evaluation) and as a truncated expansion in the
//! orthonormal monomials `e_n(z) = (πⁿ/n!)^{1/2} zⁿ` with a bound on the Fock
//! norm of the discarded tail.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // f64 math methods when built without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::sigma::{as_lattice_point, exp_log, LogValue, SigmaEvaluator};
use crate::special::{composite_gauss, gamma_q_int, ln_factorial};

/// Hard cap on the adaptive Taylor degree.
pub const MAX_TAYLOR_DEGREE: usize = 512;

/// A time–frequency location: `x` the time shift, `y` the frequency shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        PhasePoint { x, y }
    }
}

/// A point of the Fock plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockPoint {
    pub w: C64,
}

impl FockPoint {
    pub fn new(w: C64) -> Self {
        FockPoint { w }
    }

    pub fn from_lattice(m: i64, n: i64) -> Self {
        FockPoint::new(C64::new(m as f64, n as f64))
    }
}

/// Maps the atom location `(x, y)` to the kernel point `w = x − i·y`.
///
/// With this convention the Bargmann transform of the atom at `(x, y)` is
/// `2^{−1/4}·e^{iπxy}·k_w/‖k_w‖`.
pub fn phase_to_fock(p: PhasePoint) -> FockPoint {
    FockPoint::new(C64::new(p.x, -p.y))
}

/// Inverse of [`phase_to_fock`].
pub fn fock_to_phase(w: FockPoint) -> PhasePoint {
    PhasePoint::new(w.w.re, -w.w.im)
}

/// ln ‖k_w‖ = π|w|²/2.
pub fn ln_kernel_norm(w: C64) -> f64 {
    0.5 * PI * w.norm_sqr()
}

/// `e^{π·conj(w)·z}·σ₀(z − a)·Π(z − ν_j)/Π(z − a − d_k)`.
///
/// `a` is the shift, `ν_j` the numerator roots and `d_k` distinct nonzero
/// lattice points: every denominator factor cancels a zero of `σ₀(· − a)`, so
/// the product is entire.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaProduct {
    pub shift: C64,
    pub numerator: Vec<C64>,
    pub denominator: Vec<(i64, i64)>,
}

impl SigmaProduct {
    /// σ₀(z)/(z − w) for a nonzero lattice point `w`.
    pub fn quotient(w: (i64, i64)) -> Self {
        SigmaProduct {
            shift: C64::new(0.0, 0.0),
            numerator: Vec::new(),
            denominator: vec![w],
        }
    }

    pub fn ln_eval(&self, sigma: &SigmaEvaluator, z: C64) -> LogValue {
        let u = z - self.shift;
        let near = self
            .denominator
            .iter()
            .position(|&(m, n)| (u - C64::new(m as f64, n as f64)).norm() <= 0.5);
        let mut l = PI * self.shift.conj() * z;
        match near {
            Some(k) => {
                let (m, n) = self.denominator[k];
                l += sigma.ln_sigma0_div(u, m, n);
                for (j, &(m, n)) in self.denominator.iter().enumerate() {
                    if j != k {
                        l -= (u - C64::new(m as f64, n as f64)).ln();
                    }
                }
            }
            None => {
                l += sigma.ln_sigma0(u);
                for &(m, n) in &self.denominator {
                    l -= (u - C64::new(m as f64, n as f64)).ln();
                }
            }
        }
        for &nu in &self.numerator {
            l += (z - nu).ln();
        }
        l
    }

    /// Exponent `p` with `|F(z)| ≲ e^{π|z|²/2}·|z|^p`.
    pub fn growth_power(&self) -> i64 {
        self.numerator.len() as i64 - self.denominator.len() as i64 - 1
    }

    fn max_feature(&self) -> f64 {
        let mut r = self.shift.norm();
        for &nu in &self.numerator {
            r = r.max(nu.norm());
        }
        for &(m, n) in &self.denominator {
            r = r.max((self.shift + C64::new(m as f64, n as f64)).norm());
        }
        r
    }

    /// Upper bound for max_{|z|=ρ}|F(z)| in log form, using
    /// `|σ(u)| ≤ c·dist(u, 𝒵)·e^{π|u|²/2}` with `dist ≤ 2^{−1/2}`.
    fn ln_max_modulus_bound(&self, rho: f64, growth_sup: f64) -> f64 {
        let a = self.shift.norm();
        let mut l = growth_sup.ln() - 0.5 * 2f64.ln() + 0.5 * PI * (rho * rho + a * a) - (rho - a).ln();
        for &nu in &self.numerator {
            l += (rho + nu.norm()).ln();
        }
        for &(m, n) in &self.denominator {
            l -= (rho - (self.shift + C64::new(m as f64, n as f64)).norm()).ln();
        }
        l
    }
}

/// Closed-form building blocks of a [`FockFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Constant,
    Monomial(u32),
    /// `k_a(z) = e^{π·conj(a)·z}`
    Kernel(C64),
    Sigma(SigmaProduct),
}

impl Primitive {
    pub fn eval(&self, sigma: &SigmaEvaluator, z: C64) -> C64 {
        match self {
            Primitive::Constant => C64::new(1.0, 0.0),
            Primitive::Monomial(n) => z.powu(*n),
            Primitive::Kernel(a) => (PI * a.conj() * z).exp(),
            Primitive::Sigma(sp) => exp_log(sp.ln_eval(sigma, z)),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Primitive::Constant | Primitive::Monomial(_) => 0.0,
            Primitive::Kernel(a) => a.norm(),
            Primitive::Sigma(sp) => sp.max_feature(),
        }
    }
}

/// How the Taylor part of a [`FockFunction`] is truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaylorPolicy {
    /// Grow the degree until the tail bound is below the tolerance, failing at
    /// [`MAX_TAYLOR_DEGREE`].
    Tolerance(f64),
    /// Fixed degree; whatever tail bound results is recorded.
    Degree(usize),
}

impl Default for TaylorPolicy {
    fn default() -> Self {
        TaylorPolicy::Tolerance(1e-12)
    }
}

/// An entire function in the Fock space, carried as primitives plus a
/// certified truncated expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct FockFunction {
    terms: Vec<(C64, Primitive)>,
    /// Coordinates in the orthonormal monomial basis `e_n`.
    coeffs: Vec<C64>,
    tail: f64,
    /// Lowest degree at which the tail may have components.
    tail_from: usize,
    sigma: SigmaEvaluator,
}

impl FockFunction {
    pub fn zero() -> Self {
        FockFunction {
            terms: Vec::new(),
            coeffs: Vec::new(),
            tail: 0.0,
            tail_from: 0,
            sigma: SigmaEvaluator::new(),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_terms(vec![(c, Primitive::Constant)], TaylorPolicy::default())
            .expect("constants have exact Taylor data")
    }

    pub fn monomial(n: u32) -> Self {
        Self::from_terms(
            vec![(C64::new(1.0, 0.0), Primitive::Monomial(n))],
            TaylorPolicy::default(),
        )
        .expect("monomials have exact Taylor data")
    }

    /// `k_a`, Taylor truncated to a 1e-12 tail (relative to ‖k_a‖).
    pub fn kernel(a: C64) -> Self {
        let tol = 1e-12 * ln_kernel_norm(a).exp();
        Self::from_terms(
            vec![(C64::new(1.0, 0.0), Primitive::Kernel(a))],
            TaylorPolicy::Tolerance(tol),
        )
        .expect("kernels inside the supported range have convergent Taylor data")
    }

    /// `k_a/‖k_a‖`.
    pub fn normalized_kernel(a: C64) -> Self {
        let c = C64::new((-ln_kernel_norm(a)).exp(), 0.0);
        Self::from_terms(vec![(c, Primitive::Kernel(a))], TaylorPolicy::Tolerance(1e-12))
            .expect("normalized kernels have convergent Taylor data")
    }

    /// Builds the function from primitives and computes its Taylor data
    /// under `policy`.
    pub fn from_terms(terms: Vec<(C64, Primitive)>, policy: TaylorPolicy) -> Result<Self> {
        let sigma = SigmaEvaluator::new();
        let mut coeffs: Vec<C64> = Vec::new();
        let mut tail = 0.0;
        let mut tail_from = usize::MAX;
        for (c, p) in &terms {
            let (pc, pt) = primitive_taylor(p, policy, &sigma)?;
            if coeffs.len() < pc.len() {
                coeffs.resize(pc.len(), C64::new(0.0, 0.0));
            }
            for (dst, src) in coeffs.iter_mut().zip(&pc) {
                *dst += c * src;
            }
            tail += c.norm() * pt;
            if pt > 0.0 {
                tail_from = tail_from.min(pc.len());
            }
        }
        Ok(FockFunction {
            terms,
            tail_from: tail_from.min(coeffs.len()),
            coeffs,
            tail,
            sigma,
        })
    }

    /// A Taylor-only function given by orthonormal-basis coordinates (no
    /// closed form beyond the polynomial itself).
    pub fn from_orthonormal_coeffs(coeffs: Vec<C64>) -> Self {
        // Polynomials are exact: store them as weighted monomials too.
        let mut terms = Vec::new();
        for (n, c) in coeffs.iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                let scale = (0.5 * (n as f64 * PI.ln() - ln_factorial(n))).exp();
                terms.push((c * scale, Primitive::Monomial(n as u32)));
            }
        }
        FockFunction {
            terms,
            tail_from: coeffs.len(),
            coeffs,
            tail: 0.0,
            sigma: SigmaEvaluator::new(),
        }
    }

    pub fn terms(&self) -> &[(C64, Primitive)] {
        &self.terms
    }

    /// Coordinates in the orthonormal monomial basis.
    pub fn orthonormal_coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Ordinary Taylor coefficient `a_n` (so that `F(z) ≈ Σ a_n zⁿ`).
    pub fn taylor_coefficient(&self, n: usize) -> C64 {
        let b = self.coeffs.get(n).copied().unwrap_or_default();
        b * (0.5 * (n as f64 * PI.ln() - ln_factorial(n))).exp()
    }

    /// Truncation degree of the Taylor part.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Fock-norm bound for the discarded Taylor tail.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    /// `Σ c_a k_a` if every term is a kernel (constants count as `k_0`).
    pub fn as_kernel_combination(&self) -> Option<Vec<(C64, C64)>> {
        self.terms
            .iter()
            .map(|(c, p)| match p {
                Primitive::Kernel(a) => Some((*c, *a)),
                Primitive::Constant => Some((*c, C64::new(0.0, 0.0))),
                _ => None,
            })
            .collect()
    }

    /// Exact evaluation from the primitives.
    pub fn eval(&self, z: C64) -> C64 {
        self.terms.iter().map(|(c, p)| c * p.eval(&self.sigma, z)).sum()
    }

    /// Evaluation of the truncated expansion, and the pointwise bound
    /// `‖tail‖·e^{π|z|²/2}` on the discarded part.
    pub fn eval_taylor(&self, z: C64) -> (C64, f64) {
        let mut e = C64::new(1.0, 0.0);
        let step = z * PI.sqrt();
        let mut acc = C64::new(0.0, 0.0);
        for (n, b) in self.coeffs.iter().enumerate() {
            if n > 0 {
                e = e * step / (n as f64).sqrt();
            }
            acc += b * e;
        }
        (acc, self.tail * (0.5 * PI * z.norm_sqr()).exp())
    }

    pub fn scale(&self, c: C64) -> Self {
        FockFunction {
            terms: self.terms.iter().map(|(a, p)| (a * c, p.clone())).collect(),
            coeffs: self.coeffs.iter().map(|b| b * c).collect(),
            tail: self.tail * c.norm(),
            tail_from: self.tail_from,
            sigma: self.sigma,
        }
    }

    /// `self + other`
    pub fn add(&self, other: &FockFunction) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![C64::new(0.0, 0.0); n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or_default() + other.coeffs.get(i).copied().unwrap_or_default();
        }
        FockFunction {
            terms,
            coeffs,
            tail: self.tail + other.tail,
            tail_from: match (self.tail > 0.0, other.tail > 0.0) {
                (true, true) => self.tail_from.min(other.tail_from),
                (true, false) => self.tail_from,
                (false, true) => other.tail_from,
                (false, false) => n,
            },
            sigma: self.sigma,
        }
    }

    /// Σ c_i F_i
    pub fn linear_combination(parts: &[(C64, FockFunction)]) -> Self {
        parts
            .iter()
            .fold(FockFunction::zero(), |acc, (c, f)| acc.add(&f.scale(*c)))
    }

    fn taylor_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Taylor data (orthonormal coordinates, tail bound) of one primitive.
fn primitive_taylor(p: &Primitive, policy: TaylorPolicy, sigma: &SigmaEvaluator) -> Result<(Vec<C64>, f64)> {
    match p {
        Primitive::Constant => Ok((vec![C64::new(1.0, 0.0)], 0.0)),
        Primitive::Monomial(n) => {
            let n = *n as usize;
            let mut c = vec![C64::new(0.0, 0.0); n + 1];
            c[n] = C64::new((0.5 * (ln_factorial(n) - n as f64 * PI.ln())).exp(), 0.0);
            Ok((c, 0.0))
        }
        Primitive::Kernel(a) => kernel_taylor(*a, policy),
        Primitive::Sigma(sp) => sigma_taylor(sp, policy, sigma),
    }
}

/// `k_a = Σ (√π·conj(a))ⁿ/√(n!) · e_n`; the squared tail is a Poisson tail
/// with mean π|a|².
fn kernel_taylor(a: C64, policy: TaylorPolicy) -> Result<(Vec<C64>, f64)> {
    let step = a.conj() * PI.sqrt();
    let x = PI * a.norm_sqr();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let tail_after = |n: usize, last_sqr: f64| -> f64 {
        // Σ_{k>n} x^k/k! ≤ t_{n+1}/(1 − x/(n+2)) once n + 2 > x
        let next = last_sqr * x / (n as f64 + 1.0);
        if (n as f64 + 2.0) > x {
            (next / (1.0 - x / (n as f64 + 2.0))).sqrt()
        } else {
            f64::INFINITY
        }
    };
    let mut cur = C64::new(1.0, 0.0);
    loop {
        let n = coeffs.len() - 1;
        let tail = tail_after(n, cur.norm_sqr());
        match policy {
            TaylorPolicy::Tolerance(tol) if tail <= tol => return Ok((coeffs, tail)),
            TaylorPolicy::Degree(d) if n >= d => return Ok((coeffs, tail)),
            TaylorPolicy::Tolerance(tol) if n >= MAX_TAYLOR_DEGREE => {
                return Err(Error::TaylorCap {
                    cap: MAX_TAYLOR_DEGREE,
                    tolerance: tol,
                })
            }
            _ => {}
        }
        cur = cur * step / ((n + 1) as f64).sqrt();
        coeffs.push(cur);
    }
}

/// Taylor data of a σ-product from Cauchy integrals on saddle-point circles.
fn sigma_taylor(sp: &SigmaProduct, policy: TaylorPolicy, sigma: &SigmaEvaluator) -> Result<(Vec<C64>, f64)> {
    let growth_sup = sigma.growth_range_on_cell(64).1 * 1.001;
    let degree = match policy {
        TaylorPolicy::Degree(d) => d.min(MAX_TAYLOR_DEGREE),
        TaylorPolicy::Tolerance(tol) => {
            let mut d = 16;
            loop {
                if sigma_tail_bound(sp, d, growth_sup) <= tol {
                    break d;
                }
                if d >= MAX_TAYLOR_DEGREE {
                    return Err(Error::TaylorCap {
                        cap: MAX_TAYLOR_DEGREE,
                        tolerance: tol,
                    });
                }
                d = (2 * d).min(MAX_TAYLOR_DEGREE);
            }
        }
    };
    let coeffs = cauchy_coefficients(|z| sp.ln_eval(sigma, z), degree, sp.max_feature());
    Ok((coeffs, sigma_tail_bound(sp, degree, growth_sup)))
}

/// Orthonormal coordinates b_0..b_degree of an entire function given in log
/// form, by trapezoidal Cauchy integrals on circles of radius ≈ √(n/π).
pub(crate) fn cauchy_coefficients<F>(ln_f: F, degree: usize, feature: f64) -> Vec<C64>
where
    F: Fn(C64) -> LogValue,
{
    const BLOCK: usize = 16;
    let mut out = vec![C64::new(0.0, 0.0); degree + 1];
    let mut n0 = 0;
    while n0 <= degree {
        let n1 = (n0 + BLOCK).min(degree + 1);
        let mid = 0.5 * (n0 + n1) as f64;
        let rho = (mid / PI).sqrt().max(0.75).max(0.5 * feature.min(4.0));
        let m = (2 * n1 + 128).next_power_of_two();
        let scale = 0.5 * PI * rho * rho;
        let samples: Vec<C64> = (0..m)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / m as f64;
                exp_log(ln_f(C64::from_polar(rho, theta)) - scale)
            })
            .collect();
        for (n, slot) in out.iter_mut().enumerate().take(n1).skip(n0) {
            let mut acc = C64::new(0.0, 0.0);
            let rot = C64::from_polar(1.0, -2.0 * PI * n as f64 / m as f64);
            let mut tw = C64::new(1.0, 0.0);
            for s in &samples {
                acc += s * tw;
                tw *= rot;
            }
            acc /= m as f64;
            // a_n = acc·e^{scale}/ρⁿ; b_n = a_n·√(n!/πⁿ)
            let ln_factor = scale - n as f64 * rho.ln() + 0.5 * (ln_factorial(n) - n as f64 * PI.ln());
            *slot = acc * ln_factor.exp();
        }
        n0 = n1;
    }
    out
}

/// Bound on `(Σ_{n>N} |b_n|²)^{1/2}` from Cauchy estimates on the circles
/// `ρ_n = √(n/π)`: `|b_n|² ≤ M(ρ_n)²·n!/nⁿ`.
fn sigma_tail_bound(sp: &SigmaProduct, degree: usize, growth_sup: f64) -> f64 {
    let p = sp.growth_power();
    // terms decay like n^{1/2 + p}; summable only for p ≤ −2
    if p > -2 {
        return f64::INFINITY;
    }
    let feature = sp.max_feature();
    let term = |n: usize| -> f64 {
        let rho = (n as f64 / PI).sqrt();
        let l = 2.0 * sp.ln_max_modulus_bound(rho, growth_sup) - PI * rho * rho + ln_factorial(n)
            - n as f64 * (n as f64 / PI).ln()
            - n as f64 * PI.ln()
            + PI * rho * rho;
        l.exp()
    };
    // first n whose circle clears every feature point
    let n_start = (degree + 1).max((PI * (2.0 * feature + 1.0).powi(2)).ceil() as usize);
    let mut sum = 0.0;
    let mut n = degree + 1;
    // below n_start the bound at ρ_n is unusable; bound with the start circle
    let start_term = term(n_start);
    if n < n_start {
        sum += start_term * (n_start - n) as f64 * 4.0;
        n = n_start;
    }
    let stop = n.max(1) * 64;
    while n < stop {
        sum += term(n);
        n += 1;
    }
    // remainder ∫_{stop}^∞ A·x^q with q = 1/2 + p
    let q = 0.5 + p as f64;
    let a = term(stop) / (stop as f64).powf(q) * 1.1;
    sum += a * (stop as f64).powf(q + 1.0) / (-(q + 1.0));
    sum.sqrt()
}

/// Inner product with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct {
    pub value: C64,
    pub error_bound: f64,
}

/// `⟨F, G⟩ = Σ_n b_n(F)·conj(b_n(G))` over the shared truncation.
///
/// Writing `F = P_F + T_F` (stored expansion plus tail), the tail `T_F` only
/// has components of degree `≥ tail_from(F)`, so the neglected part
/// `⟨P_F, T_G⟩ + ⟨T_F, P_G⟩ + ⟨T_F, T_G⟩` is bounded by
/// `‖P_F^{≥tail_from(G)}‖·t_G + t_F·‖P_G^{≥tail_from(F)}‖ + t_F·t_G`.
/// Stored coefficients beyond the shared range pair with the other side's
/// tail only, and are covered by the same terms. Floating-point summation
/// adds `(n + 8)·ε·Σ|b_n(F)||b_n(G)|`, which dominates when the terms cancel.
pub fn fock_inner_taylor(f: &FockFunction, g: &FockFunction) -> Result<InnerProduct> {
    if !f.tail.is_finite() || !g.tail.is_finite() {
        return Err(Error::UnboundedTail);
    }
    let shared = f.coeffs.len().min(g.coeffs.len());
    let value: C64 = f.coeffs[..shared]
        .iter()
        .zip(&g.coeffs[..shared])
        .map(|(a, b)| a * b.conj())
        .sum();
    let from = |h: &FockFunction, k: usize| -> f64 {
        h.coeffs
            .get(k..)
            .map_or(0.0, |s| s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
    };
    let magnitude: f64 = f.coeffs[..shared]
        .iter()
        .zip(&g.coeffs[..shared])
        .map(|(a, b)| a.norm() * b.norm())
        .sum();
    let mut error_bound = f.tail * g.tail + (shared + 8) as f64 * f64::EPSILON * magnitude;
    if g.tail > 0.0 {
        error_bound += from(f, g.tail_from) * g.tail;
    }
    if f.tail > 0.0 {
        error_bound += f.tail * from(g, f.tail_from);
    }
    Ok(InnerProduct { value, error_bound })
}

/// Fock norm with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norm {
    pub value: f64,
    pub error_bound: f64,
}

/// `‖F‖ = ⟨F, F⟩^{1/2}`; the true norm is within `error_bound` (the tail bound).
pub fn fock_norm(f: &FockFunction) -> Result<Norm> {
    if !f.tail.is_finite() {
        return Err(Error::UnboundedTail);
    }
    let s = f.taylor_norm_sqr();
    let value = s.sqrt();
    Ok(Norm {
        value,
        error_bound: f.tail,
    })
}

/// Anything that can be integrated by the quadrature engine.
pub trait Entire {
    fn eval(&self, z: C64) -> C64;

    /// Upper bound on `∫_{|z|>r} |F|² e^{−π|z|²} dm`; infinite if unknown.
    fn outer_mass(&self, _r: f64) -> f64 {
        f64::INFINITY
    }

    /// Largest modulus of a feature point (kernel centre, shift, pole).
    fn feature_radius(&self) -> f64 {
        0.0
    }
}

impl Entire for FockFunction {
    fn eval(&self, z: C64) -> C64 {
        FockFunction::eval(self, z)
    }

    /// Monomials stay orthogonal on annuli, so the mass outside `r` is
    /// `Σ |b_n|²·Q(n+1, πr²)` for the Taylor part.
    fn outer_mass(&self, r: f64) -> f64 {
        let x = PI * r * r;
        let m: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, c)| c.norm_sqr() * gamma_q_int(n, x))
            .sum();
        let s = m.sqrt() + self.tail;
        s * s
    }

    fn feature_radius(&self) -> f64 {
        self.terms.iter().map(|(_, p)| p.scale()).fold(0.0, f64::max)
    }
}

/// Closure adaptor for [`Entire`] with a declared tail model.
pub struct EntireFn<F> {
    pub f: F,
    pub feature: f64,
    /// `outer(r)` bounds the mass outside radius r.
    pub outer: Option<fn(f64) -> f64>,
}

impl<F: Fn(C64) -> C64> Entire for EntireFn<F> {
    fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }
    fn outer_mass(&self, r: f64) -> f64 {
        self.outer.map_or(f64::INFINITY, |o| o(r))
    }
    fn feature_radius(&self) -> f64 {
        self.feature
    }
}

/// Polar-grid quadrature configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Cutoff radius; `None` picks `max(6, 2·feature + 2)`.
    pub radius: Option<f64>,
    /// Convergence tolerance relative to `(∫|F|²)^{1/2}(∫|G|²)^{1/2}`.
    pub tolerance: f64,
    pub max_angular: usize,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radius: None,
            tolerance: 1e-8,
            max_angular: 8192,
            max_panels: 1024,
        }
    }
}

impl QuadratureSpec {
    pub fn with_radius(radius: f64) -> Self {
        QuadratureSpec {
            radius: Some(radius),
            ..Default::default()
        }
    }
}

/// Result of [`fock_inner_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    /// Refinement difference plus the tail bound beyond `radius`.
    pub error_bound: f64,
    pub tail_bound: f64,
    pub radius: f64,
    pub angular_points: usize,
    pub panels: usize,
}

const GAUSS_ORDER: usize = 16;

/// `∫_{|z|≤R} F·conj(G)·e^{−π|z|²} dm` on a polar grid: trapezoid in angle,
/// composite Gauss–Legendre in radius, both refined by doubling.
pub fn fock_inner_quadrature(f: &dyn Entire, g: &dyn Entire, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    let radius = spec
        .radius
        .unwrap_or_else(|| 6f64.max(2.0 * f.feature_radius().max(g.feature_radius()) + 2.0));
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("radius {radius}")));
    }
    let mut angular = 64usize;
    let mut panels = (radius.ceil() as usize).max(2);
    let (mut cur, _) = polar_rule(f, g, radius, angular, panels);
    let mut scale;
    let mut diff;
    loop {
        let (next, s) = polar_rule(f, g, radius, 2 * angular, panels);
        diff = (next - cur).norm();
        cur = next;
        scale = s;
        angular *= 2;
        if diff <= spec.tolerance * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        if angular >= spec.max_angular {
            return Err(Error::GridTooCoarse {
                achieved: diff / scale,
                wanted: spec.tolerance,
            });
        }
    }
    let mut angular_diff = diff;
    loop {
        let (next, s) = polar_rule(f, g, radius, angular, 2 * panels);
        diff = (next - cur).norm();
        cur = next;
        scale = s;
        panels *= 2;
        if diff <= spec.tolerance * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        if panels >= spec.max_panels {
            return Err(Error::GridTooCoarse {
                achieved: diff / scale,
                wanted: spec.tolerance,
            });
        }
    }
    // one final angular check on the refined radial grid
    let (check, _) = polar_rule(f, g, radius, angular / 2, panels);
    angular_diff = angular_diff.max((check - cur).norm());
    let tail = (f.outer_mass(radius) * g.outer_mass(radius)).sqrt();
    Ok(QuadratureResult {
        value: cur,
        error_bound: diff + angular_diff + tail,
        tail_bound: tail,
        radius,
        angular_points: angular,
        panels,
    })
}

/// One evaluation of the polar rule; also returns the Cauchy–Schwarz scale.
fn polar_rule(f: &dyn Entire, g: &dyn Entire, radius: f64, angular: usize, panels: usize) -> (C64, f64) {
    let nodes = composite_gauss(0.0, radius, panels, GAUSS_ORDER);
    let dtheta = 2.0 * PI / angular as f64;
    let mut acc = C64::new(0.0, 0.0);
    let mut mf = 0.0;
    let mut mg = 0.0;
    for (r, wr) in nodes {
        let weight = wr * r * (-PI * r * r).exp() * dtheta;
        let mut ring = C64::new(0.0, 0.0);
        let mut rf = 0.0;
        let mut rg = 0.0;
        for j in 0..angular {
            let z = C64::from_polar(r, j as f64 * dtheta);
            let a = f.eval(z);
            let b = g.eval(z);
            ring += a * b.conj();
            rf += a.norm_sqr();
            rg += b.norm_sqr();
        }
        acc += ring * weight;
        mf += rf * weight;
        mg += rg * weight;
    }
    (acc, (mf * mg).sqrt())
}

/// Result of [`disk_mass`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassResult {
    pub value: f64,
    /// Difference to the previous refinement level.
    pub error_bound: f64,
    pub angular_points: usize,
    pub panels: usize,
}

/// `∫_{|z|≤R} |F(z)|²·e^{−π|z|²} dm` for `F` given in log form, so that the
/// integrand never overflows. Same polar rule and refinement as
/// [`fock_inner_quadrature`], with relative tolerance `tolerance`.
pub fn disk_mass(
    ln_f: &dyn Fn(C64) -> LogValue,
    radius: f64,
    tolerance: f64,
    spec: &QuadratureSpec,
) -> Result<MassResult> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("radius {radius}")));
    }
    let rule = |angular: usize, panels: usize| -> f64 {
        let dtheta = 2.0 * PI / angular as f64;
        composite_gauss(0.0, radius, panels, GAUSS_ORDER)
            .into_iter()
            .map(|(r, wr)| {
                let ring: f64 = (0..angular)
                    .map(|j| {
                        let l = ln_f(C64::from_polar(r, j as f64 * dtheta));
                        (2.0 * l.re - PI * r * r).exp()
                    })
                    .sum();
                ring * wr * r * dtheta
            })
            .sum()
    };
    let mut angular = 64usize.max((8.0 * radius).ceil() as usize).next_power_of_two();
    let mut panels = (2.0 * radius).ceil() as usize;
    let mut cur = rule(angular, panels);
    let mut angular_diff;
    loop {
        let next = rule(2 * angular, panels);
        angular_diff = (next - cur).abs();
        cur = next;
        angular *= 2;
        if angular_diff <= tolerance * cur.abs() {
            break;
        }
        if angular >= spec.max_angular {
            return Err(Error::GridTooCoarse {
                achieved: angular_diff / cur.abs(),
                wanted: tolerance,
            });
        }
    }
    let mut diff;
    loop {
        let next = rule(angular, 2 * panels);
        diff = (next - cur).abs();
        cur = next;
        panels *= 2;
        if diff <= tolerance * cur.abs() {
            break;
        }
        if panels >= spec.max_panels {
            return Err(Error::GridTooCoarse {
                achieved: diff / cur.abs(),
                wanted: tolerance,
            });
        }
    }
    Ok(MassResult {
        value: cur,
        error_bound: diff + angular_diff,
        angular_points: angular,
        panels,
    })
}

/// A finite list of distinct Fock points inside a truncation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<FockPoint>,
    truncation_radius: f64,
}

impl PointSet {
    /// Distinct points; fails on duplicates.
    pub fn new(points: Vec<FockPoint>, truncation_radius: f64) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(p.w.re.is_finite() && p.w.im.is_finite()) {
                return Err(Error::InvalidArgument(alloc::format!("non-finite point {}", p.w)));
            }
            if points[..i].iter().any(|q| q.w == p.w) {
                return Err(Error::InvalidArgument(alloc::format!("duplicate point {}", p.w)));
            }
        }
        Ok(PointSet {
            points,
            truncation_radius,
        })
    }

    /// `{m + in : |m + in| ≤ R}` minus `exclude`, ordered by modulus then
    /// coordinates.
    pub fn lattice(radius: f64, exclude: &[(i64, i64)]) -> Self {
        Self::lattice_where(radius, |m, n| !exclude.contains(&(m, n)))
    }

    /// Lattice points within `radius` accepted by `keep`.
    pub fn lattice_where(radius: f64, keep: impl Fn(i64, i64) -> bool) -> Self {
        let r = radius.max(0.0).floor() as i64;
        let mut pts: Vec<(i64, i64)> = Vec::new();
        for m in -r..=r {
            for n in -r..=r {
                if ((m * m + n * n) as f64) <= radius * radius && keep(m, n) {
                    pts.push((m, n));
                }
            }
        }
        pts.sort_by_key(|&(m, n)| (m * m + n * n, m, n));
        PointSet {
            points: pts.into_iter().map(|(m, n)| FockPoint::from_lattice(m, n)).collect(),
            truncation_radius: radius,
        }
    }

    pub fn points(&self) -> &[FockPoint] {
        &self.points
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points with modulus at most `r`.
    pub fn within(&self, r: f64) -> impl Iterator<Item = &FockPoint> {
        self.points.iter().filter(move |p| p.w.norm() <= r)
    }

    /// First point lying on ℤ + iℤ, if any.
    pub fn lattice_hit(&self) -> Option<FockPoint> {
        self.points.iter().copied().find(|p| as_lattice_point(p.w).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn phase_convention_examples() {
        assert_eq!(phase_to_fock(PhasePoint::new(0.0, 0.0)).w, c(0.0, -0.0));
        assert_eq!(phase_to_fock(PhasePoint::new(1.0, 0.0)).w, c(1.0, 0.0));
        assert_eq!(phase_to_fock(PhasePoint::new(0.0, 1.0)).w, c(0.0, -1.0));
        let p = PhasePoint::new(-0.3, 2.7);
        assert_eq!(fock_to_phase(phase_to_fock(p)), p);
    }

    #[test]
    fn taylor_inner_on_monomials() {
        let one = FockFunction::constant(c(1.0, 0.0));
        let z = FockFunction::monomial(1);
        assert!((fock_inner_taylor(&one, &one).unwrap().value - 1.0).norm() < 1e-15);
        assert_eq!(fock_inner_taylor(&z, &one).unwrap().value, c(0.0, 0.0));
        assert!((fock_inner_taylor(&z, &z).unwrap().value - 1.0 / PI).norm() < 1e-15);
        let n = fock_norm(&z).unwrap();
        assert!((n.value - PI.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn kernel_norm_and_reproducing() {
        let k1 = FockFunction::kernel(c(1.0, 0.0));
        let n = fock_norm(&k1).unwrap();
        assert!((n.value - (PI / 2.0).exp()).abs() < 1e-9);
        let f = FockFunction::linear_combination(&[
            (c(0.5, 0.2), FockFunction::monomial(3)),
            (c(-1.0, 0.0), FockFunction::kernel(c(0.3, -0.7))),
        ]);
        let w = c(1.1, 0.4);
        let r = fock_inner_taylor(&f, &FockFunction::kernel(w)).unwrap();
        assert!((r.value - f.eval(w)).norm() <= r.error_bound + 1e-12 * f.eval(w).norm());
    }

    #[test]
    fn infinite_tail_is_reported() {
        let sp = SigmaProduct {
            shift: c(0.0, 0.0),
            numerator: Vec::new(),
            denominator: Vec::new(),
        };
        let f = FockFunction::from_terms(vec![(c(1.0, 0.0), Primitive::Sigma(sp))], TaylorPolicy::Degree(32)).unwrap();
        assert!(f.tail_bound().is_infinite());
        assert_eq!(fock_inner_taylor(&f, &f), Err(Error::UnboundedTail));
        let err = FockFunction::from_terms(
            vec![(c(1.0, 0.0), Primitive::Sigma(SigmaProduct::quotient((1, 0))))],
            TaylorPolicy::Tolerance(1e-8),
        );
        assert!(matches!(
            err,
            Err(Error::TaylorCap {
                cap: MAX_TAYLOR_DEGREE,
                ..
            })
        ));
    }

    #[test]
    fn sigma_quotient_taylor_matches_primitive() {
        let f = FockFunction::from_terms(
            vec![(c(1.0, 0.0), Primitive::Sigma(SigmaProduct::quotient((1, 1))))],
            TaylorPolicy::Degree(96),
        )
        .unwrap();
        for z in [c(0.2, 0.1), c(-0.6, 0.3), c(0.9, -0.4)] {
            let (t, _) = f.eval_taylor(z);
            let e = f.eval(z);
            assert!((t - e).norm() < 1e-9 * e.norm().max(1.0), "{z}: {t} vs {e}");
        }
        assert!(f.tail_bound().is_finite());
    }

    #[test]
    fn quadrature_basic_cases() {
        let k0 = FockFunction::kernel(c(0.0, 0.0));
        let r = fock_inner_quadrature(&k0, &k0, &QuadratureSpec::with_radius(4.0)).unwrap();
        assert!((r.value - 1.0).norm() < 1e-8);
        let z = FockFunction::monomial(1);
        let z2 = FockFunction::monomial(2);
        let r = fock_inner_quadrature(&z, &z2, &QuadratureSpec::with_radius(5.0)).unwrap();
        assert!(r.value.norm() < 1e-8);
    }

    #[test]
    fn quadrature_without_tail_model_reports_infinite_budget() {
        let f = EntireFn {
            f: |z: C64| z,
            feature: 0.0,
            outer: None,
        };
        let r = fock_inner_quadrature(&f, &f, &QuadratureSpec::default()).unwrap();
        assert!((r.value.re - 1.0 / PI).abs() < 1e-10);
        assert!(r.error_bound.is_infinite());
    }

    #[test]
    fn point_set_lattice_enumeration() {
        let p = PointSet::lattice(2.0, &[(0, 0)]);
        // |w| ≤ 2: 13 points, minus the origin
        assert_eq!(p.len(), 12);
        assert!(PointSet::new(vec![FockPoint::new(c(1.0, 0.0)); 2], 2.0).is_err());
        assert_eq!(p.lattice_hit(), Some(FockPoint::new(c(-1.0, 0.0))));
    }
}
