//! Formal kernel series, numerical checks of the coefficient estimates and
//! of the interchange identity, and finite-section reconstructions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
#[allow(unused_imports)] // f64 math methods when built without std
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bargmann::{bargmann_atom, bargmann_transform, GaborAtom, HermiteExpansion, FOURTH_ROOT_2};
use crate::dual::{coefficient, generating_function, GeneratingFunction, GeneratorSpec};
use crate::error::{Error, Result};
use crate::fock::{
    disk_mass, fock_norm, ln_kernel_norm, FockFunction, FockPoint, InnerProduct, PointSet, QuadratureSpec, SigmaProduct,
};
use crate::linalg::solve_psd;
use crate::sigma::{exp_log, LogValue, SigmaEvaluator};

/// A scalar result field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(C64),
}

/// A report parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(i64),
    Real(f64),
    Complex(C64),
    Text(String),
}

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub op: String,
    pub params: BTreeMap<String, Param>,
    pub value: Value,
    /// Reference value or bound the computed value is compared with.
    pub reference: Option<Value>,
    pub error_bound: f64,
    pub truncation_radius: Option<f64>,
    pub pass: bool,
    /// Auxiliary measured quantities.
    pub measurements: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn new(op: &str, value: Value) -> Self {
        VerificationReport {
            op: op.to_string(),
            params: BTreeMap::new(),
            value,
            reference: None,
            error_bound: 0.0,
            truncation_radius: None,
            pass: false,
            measurements: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, p: Param) -> Self {
        self.params.insert(key.to_string(), p);
        self
    }

    pub fn measure(mut self, key: &str, v: f64) -> Self {
        self.measurements.insert(key.to_string(), v);
        self
    }

    pub fn reference(mut self, v: Value) -> Self {
        self.reference = Some(v);
        self
    }

    pub fn radius(mut self, r: f64) -> Self {
        self.truncation_radius = Some(r);
        self
    }

    pub fn budget(mut self, e: f64) -> Self {
        self.error_bound = e;
        self
    }

    pub fn pass(mut self, p: bool) -> Self {
        self.pass = p;
        self
    }
}

/// Scaling of numerical pass thresholds.
///
/// Every agreement threshold is stated for a working tolerance of 1e-8 and
/// multiplied by `tolerance/1e-8`; structural ratios (shell stability,
/// boundedness windows) are fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub tolerance: f64,
}

pub const REFERENCE_TOLERANCE: f64 = 1e-8;

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tolerance: REFERENCE_TOLERANCE,
        }
    }
}

impl VerifyConfig {
    pub fn threshold(&self, intrinsic: f64) -> f64 {
        intrinsic * (self.tolerance / REFERENCE_TOLERANCE)
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn uniform_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

/// `Σ c_j k_{a_j}` with `count` centres uniform in the disk of radius
/// `radius` and coefficients uniform in the square `[−1, 1]²`.
pub fn random_kernel_combination(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> FockFunction {
    let parts: Vec<(C64, FockFunction)> = (0..count)
        .map(|_| {
            let a = uniform_in_disk(rng, radius);
            (uniform_complex(rng), FockFunction::kernel(a))
        })
        .collect();
    FockFunction::linear_combination(&parts)
}

/// Hermite expansion of the given degree with coefficients uniform in `[−1, 1]²`.
pub fn random_hermite(rng: &mut ChaCha8Rng, degree: usize) -> HermiteExpansion {
    HermiteExpansion::new((0..=degree).map(|_| uniform_complex(rng)).collect())
}

/// `count` atoms with locations uniform in the phase-plane disk of radius
/// `radius`.
pub fn random_atoms(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<(C64, GaborAtom)> {
    (0..count)
        .map(|_| {
            let p = uniform_in_disk(rng, radius);
            (uniform_complex(rng), GaborAtom::new(p.re, p.im))
        })
        .collect()
}

/// `‖Σ c_a k_a‖` from `⟨k_a, k_b⟩ = e^{π·conj(a)·b}`.
pub fn kernel_combination_norm(parts: &[(C64, C64)]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for &(ca, a) in parts {
        for &(cb, b) in parts {
            s += ca * cb.conj() * (PI * a.conj() * b).exp();
        }
    }
    s.re.max(0.0).sqrt()
}

fn source_norm(s: &FockFunction) -> Result<f64> {
    match s.as_kernel_combination() {
        Some(parts) => Ok(kernel_combination_norm(&parts)),
        None => fock_norm(s).map(|n| n.value),
    }
}

/// Truncated formal expansion `Σ b_w k̂_w` of a Fock function.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    pub spec: GeneratorSpec,
    pub radius: f64,
    pub coefficients: Vec<(FockPoint, InnerProduct)>,
    pub source_norm: f64,
}

impl FormalSeries {
    /// Indices whose coefficient modulus exceeds `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<FockPoint> {
        self.coefficients
            .iter()
            .filter(|(_, b)| b.value.norm() > threshold)
            .map(|(w, _)| *w)
            .collect()
    }

    /// `Σ b_w k̂_w` as a Fock function.
    pub fn partial_sum(&self) -> FockFunction {
        let parts: Vec<(C64, FockFunction)> = self
            .coefficients
            .iter()
            .filter(|(_, b)| b.value != C64::new(0.0, 0.0))
            .map(|(w, b)| (b.value, FockFunction::normalized_kernel(w.w)))
            .collect();
        FockFunction::linear_combination(&parts)
    }
}

/// Coefficients `b_w = ⟨S, F_w⟩` for every `w ∈ Λ` with `|w| ≤ radius`.
pub fn assemble_series(s: &FockFunction, spec: &GeneratorSpec, radius: f64) -> Result<FormalSeries> {
    let g = generating_function(spec)?;
    let points = spec.zeros_within(radius)?;
    let coefficients = points
        .points()
        .iter()
        .map(|w| coefficient(s, &g, *w).map(|b| (*w, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalSeries {
        spec: spec.clone(),
        radius,
        coefficients,
        source_norm: source_norm(s)?,
    })
}

/// Ratio limit for "stable across dyadic shells".
pub const SHELL_STABILITY: f64 = 1.25;

fn shell_stable(inner: f64, outer: f64) -> (bool, f64) {
    if outer == 0.0 {
        return (true, 1.0);
    }
    if inner == 0.0 {
        return (false, f64::INFINITY);
    }
    let r = outer / inner;
    (r <= SHELL_STABILITY, r)
}

/// `sup_{2 ≤ |w| ≤ R} |b_w|²/(‖S‖²·log(1 + |w|))` over the lattice system,
/// compared with the same supremum over `2 ≤ |w| ≤ R/2`.
pub fn verify_coeff_bound(s: &FockFunction, radius: f64) -> Result<VerificationReport> {
    let spec = GeneratorSpec::LatticeMinusOrigin;
    let series = assemble_series(s, &spec, radius)?;
    let n2 = series.source_norm * series.source_norm;
    let mut sup = 0.0f64;
    let mut sup_half = 0.0f64;
    let mut arg = 0.0;
    let mut budget = 0.0f64;
    for (w, b) in &series.coefficients {
        let r = w.w.norm();
        if r < 2.0 {
            continue;
        }
        let q = if n2 > 0.0 {
            b.value.norm_sqr() / (n2 * (1.0 + r).ln())
        } else {
            0.0
        };
        if q > sup {
            sup = q;
            arg = r;
        }
        if r <= 0.5 * radius {
            sup_half = sup_half.max(q);
        }
        if n2 > 0.0 {
            budget = budget.max((2.0 * b.value.norm() + b.error_bound) * b.error_bound / (n2 * (1.0 + r).ln()));
        }
    }
    let (stable, ratio) = shell_stable(sup_half, sup);
    Ok(VerificationReport::new("coeff_bound", Value::Real(sup))
        .radius(radius)
        .budget(budget)
        .measure("sup_half_radius", sup_half)
        .measure("shell_ratio", ratio)
        .measure("argmax_modulus", arg)
        .measure("source_norm", series.source_norm)
        .pass(stable && sup.is_finite()))
}

/// `(∫_{|z|<2|w|}|σ₀|²e^{−π|z|²}dm)/log(1 + |w|)` for each modulus, with
/// consecutive ratios required to stay within [`SHELL_STABILITY`].
pub fn verify_sigma_mass_growth(moduli: &[f64], tolerance: f64) -> Result<Vec<VerificationReport>> {
    let sigma = SigmaEvaluator::new();
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    for &w in moduli {
        let m = disk_mass(&|z| sigma.ln_sigma0(z), 2.0 * w, tolerance, &spec)?;
        let ratio = m.value / (1.0 + w).ln();
        let (stable, step) = match prev {
            Some(p) => {
                let r = p.max(ratio) / p.min(ratio);
                (r <= SHELL_STABILITY, r)
            }
            None => (true, 1.0),
        };
        prev = Some(ratio);
        out.push(
            VerificationReport::new("sigma_mass_growth", Value::Real(ratio))
                .param("w_modulus", Param::Real(w))
                .radius(2.0 * w)
                .budget(m.error_bound / (1.0 + w).ln())
                .measure("disk_mass", m.value)
                .measure("shell_ratio", step)
                .pass(stable && ratio.is_finite()),
        );
    }
    Ok(out)
}

/// `4e^{π/4}/π`: sub-mean-value bound for `Σ_{w∈𝒵}|H(w)|²e^{−π|w|²} ≤ C‖H‖²`
/// using the disjoint disks of radius 1/2 around lattice points.
pub const SAMPLING_CONSTANT: f64 = 2.792_570_893_278_385;

/// `Σ_{w∈𝒵∖{0}, |w|≤R} |H(w)|²e^{−π|w|²}`.
pub fn sampling_partial_sum(h: &FockFunction, radius: f64) -> f64 {
    PointSet::lattice(radius, &[(0, 0)])
        .points()
        .iter()
        .map(|w| {
            let v = h.eval(w.w).norm() * (-ln_kernel_norm(w.w)).exp();
            v * v
        })
        .sum()
}

pub fn verify_sampling_sum(h: &FockFunction, radius: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let total = sampling_partial_sum(h, radius);
    let next = sampling_partial_sum(h, radius + 2.0);
    let increment = next - total;
    let norm = source_norm(h)?;
    let measured_c = if norm > 0.0 { next / (norm * norm) } else { 0.0 };
    let pass = increment <= cfg.threshold(1e-8) * total.max(1.0)
        && next <= SAMPLING_CONSTANT * norm * norm * (1.0 + 1e-12) + 1e-300;
    Ok(VerificationReport::new("sampling_sum", Value::Real(total))
        .radius(radius)
        .budget(increment.abs())
        .reference(Value::Real(SAMPLING_CONSTANT * norm * norm))
        .measure("next_radius_sum", next)
        .measure("increment", increment)
        .measure("measured_constant", measured_c)
        .measure("source_norm", norm)
        .pass(pass))
}

/// `(θ₃(e^{−π}))² − 1 = Σ_{w∈𝒵∖{0}} e^{−π|w|²}`.
pub fn theta_lattice_sum() -> f64 {
    let q = (-PI).exp();
    let theta: f64 = 1.0 + 2.0 * (1..20).map(|n| q.powi(n * n)).sum::<f64>();
    theta * theta - 1.0
}

/// `F(z)/((z−λ₁)(z−λ₂)(z−λ₃))` with removable points resolved.
fn divided_product(g: &GeneratingFunction, lambdas: &[C64]) -> Result<SigmaProduct> {
    let mut sp = g.product().clone();
    let a = sp.shift;
    for (i, &l) in lambdas.iter().enumerate() {
        if lambdas[..i].iter().any(|&p| (p - l).norm() <= 1e-9) {
            return Err(Error::InvalidArgument(alloc::format!("{l} repeated")));
        }
        if !g.spec().contains(l) {
            return Err(Error::NotAZero(alloc::format!("{l}")));
        }
        if let Some(k) = sp.numerator.iter().position(|&nu| (nu - l).norm() <= 1e-9) {
            sp.numerator.remove(k);
        } else {
            let u = l - a;
            sp.denominator.push((u.re.round() as i64, u.im.round() as i64));
        }
    }
    Ok(sp)
}

/// Identity `⟨Q, S⟩ = Σ_{w∈𝒵∖{0}} Q(w)·conj(b_w)/‖k_w‖` with
/// `Q = F/((z−λ₁)(z−λ₂)(z−λ₃))` and `b_w` the lattice-system coefficients
/// of `S`. The left side is exact for kernel combinations.
///
/// The truncation tail assumes `|Q(w)·b_w|/‖k_w‖ ≤ A/|w|⁴` beyond `R`, with
/// `A` twice the largest `|w|⁴·|term|` on the outer half of the disk, so that
/// `Σ_{|w|>R} ≤ πA/(R − 1)²`.
pub fn verify_interchange(
    spec: &GeneratorSpec,
    s: &FockFunction,
    lambdas: [C64; 3],
    radius: f64,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    spec.check_disjoint_from_lattice()?;
    let parts = s
        .as_kernel_combination()
        .ok_or_else(|| Error::InvalidArgument("S must be a kernel combination".into()))?;
    let g = generating_function(spec)?;
    let q = divided_product(&g, &lambdas)?;
    let sigma = SigmaEvaluator::new();
    let ln_q = |z: C64| -> LogValue { q.ln_eval(&sigma, z) };
    let mut lhs = C64::new(0.0, 0.0);
    for &(c, a) in &parts {
        if c != C64::new(0.0, 0.0) {
            lhs += exp_log(c.conj().ln() + ln_q(a));
        }
    }
    let lattice = generating_function(&GeneratorSpec::LatticeMinusOrigin)?;
    let outer = radius + 2.0;
    let mut rhs = C64::new(0.0, 0.0);
    let mut rhs_next = C64::new(0.0, 0.0);
    let mut envelope = 0.0f64;
    let mut abs_sum = 0.0;
    for w in PointSet::lattice(outer, &[(0, 0)]).points() {
        let b = coefficient(s, &lattice, *w)?;
        if b.value == C64::new(0.0, 0.0) {
            continue;
        }
        let t = exp_log(ln_q(w.w) - ln_kernel_norm(w.w) + b.value.conj().ln());
        let r = w.w.norm();
        rhs_next += t;
        if r <= radius {
            rhs += t;
            abs_sum += t.norm();
            if r > 0.5 * radius {
                envelope = envelope.max(t.norm() * r.powi(4));
            }
        }
    }
    let tail = PI * 2.0 * envelope / ((radius - 1.0) * (radius - 1.0));
    let rounding = 1e-13 * (abs_sum + lhs.norm());
    let diff = (lhs - rhs).norm();
    let increment = (rhs_next - rhs).norm();
    let rel = if lhs.norm() > 0.0 { diff / lhs.norm() } else { diff };
    let budget = tail + cfg.threshold(1e-5) * lhs.norm() + rounding;
    let pass = diff <= budget && increment <= tail + rounding;
    Ok(VerificationReport::new("interchange", Value::Complex(rhs))
        .reference(Value::Complex(lhs))
        .radius(radius)
        .budget(budget)
        .measure("relative_difference", rel)
        .measure("tail_estimate", tail)
        .measure("next_radius_increment", increment)
        .pass(pass))
}

/// Default cutoff for the `σ₀(z)/(z − w)` norm.
pub const W_SIGMA_RADIUS: f64 = 16.0;

/// `|w|·‖σ₀(z)/(z − w)‖²`.
///
/// The disk part is integrated up to `radius`. Beyond it,
/// `|σ₀(z)/(z−w)|²e^{−π|z|²} = P(z)/(|z|²|z−w|²)` with `P` doubly periodic
/// of mean `κ`, and `∫_{|z|>R} dm/(|z|²|z−w|²) = (π/|w|²)·ln(R²/(R² − |w|²))`.
/// Five percent of that correction is added to the error budget.
pub fn verify_w_sigma_norm(w: FockPoint, radius: f64, tolerance: f64) -> Result<VerificationReport> {
    let sigma = SigmaEvaluator::new();
    let (m, n) = crate::sigma::as_lattice_point(w.w)
        .filter(|&p| p != (0, 0))
        .ok_or_else(|| Error::NotALatticePoint(alloc::format!("{}", w.w)))?;
    let a2 = w.w.norm_sqr();
    if !(radius * radius > 2.0 * a2) {
        return Err(Error::InvalidArgument(alloc::format!(
            "radius {radius} too small for |w| = {}",
            w.w.norm()
        )));
    }
    let mass = disk_mass(
        &|z| sigma.ln_sigma0_div(z, m, n),
        radius,
        tolerance,
        &QuadratureSpec::default(),
    )?;
    let kappa = sigma.cell_mean_mass(32);
    let tail = kappa * PI / a2 * (radius * radius / (radius * radius - a2)).ln();
    let modulus = w.w.norm();
    let value = modulus * (mass.value + tail);
    let at_pole = exp_log(sigma.ln_sigma0_div(w.w, m, n)).norm();
    Ok(VerificationReport::new("w_sigma_norm", Value::Real(value))
        .param("w", Param::Complex(w.w))
        .radius(radius)
        .budget(modulus * (mass.error_bound + 0.05 * tail))
        .measure("disk_part", mass.value)
        .measure("tail_correction", tail)
        .measure("cell_mean_mass", kappa)
        .measure("integrand_at_w", at_pole)
        .pass(value.is_finite() && at_pole.is_finite() && at_pole > 0.0))
}

/// Boundedness window for `|w|·‖σ₀(z)/(z−w)‖²` across moduli.
pub const W_SIGMA_WINDOW: (f64, f64) = (0.2, 5.0);

/// The per-point reports plus one report on the ratio last/first.
pub fn verify_w_sigma_family(points: &[FockPoint], radius: f64, tolerance: f64) -> Result<Vec<VerificationReport>> {
    let mut reports = points
        .iter()
        .map(|w| verify_w_sigma_norm(*w, radius, tolerance))
        .collect::<Result<Vec<_>>>()?;
    if let (Some(first), Some(last)) = (reports.first(), reports.last()) {
        let (Value::Real(a), Value::Real(b)) = (first.value, last.value) else {
            unreachable!("w_sigma_norm reports real values")
        };
        let ratio = b / a;
        let pass = ratio >= W_SIGMA_WINDOW.0 && ratio <= W_SIGMA_WINDOW.1;
        let budget = ratio * (first.error_bound / a + last.error_bound / b);
        reports.push(
            VerificationReport::new("w_sigma_ratio", Value::Real(ratio))
                .param("w_first", Param::Complex(points[0].w))
                .param("w_last", Param::Complex(points[points.len() - 1].w))
                .radius(radius)
                .budget(budget)
                .pass(pass),
        );
    }
    Ok(reports)
}

/// A time-domain input for reconstruction experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Hermite(HermiteExpansion),
    Atoms(Vec<(C64, GaborAtom)>),
}

impl Signal {
    /// `𝓑f`.
    pub fn to_fock(&self) -> FockFunction {
        match self {
            Signal::Hermite(h) => bargmann_transform(h),
            Signal::Atoms(list) => {
                let parts: Vec<(C64, FockFunction)> = list.iter().map(|(c, a)| (*c, bargmann_atom(a))).collect();
                FockFunction::linear_combination(&parts)
            }
        }
    }
}

/// Condition number above which a section counts as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e12;

/// Orthogonal projection of `𝓑f` onto `span{k̂_λ : λ ∈ Λ, |λ| ≤ R}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionReconstruction {
    pub points: Vec<FockPoint>,
    /// Coefficients on the normalized kernels `k̂_λ`.
    pub kernel_coefficients: Vec<C64>,
    pub fock: FockFunction,
    /// `‖f − reconstruction‖₂ = ‖𝓑f − Σ α_λ k̂_λ‖_𝓕`.
    pub residual: f64,
    pub residual_error: f64,
    pub condition: f64,
    pub regularization: f64,
    pub ill_conditioned: bool,
}

impl SectionReconstruction {
    /// Coefficients on the time-domain atoms: `k̂_w = 2^{1/4}e^{−iπxy}·𝓑(atom)`.
    pub fn atom_coefficients(&self) -> Vec<(C64, GaborAtom)> {
        self.points
            .iter()
            .zip(&self.kernel_coefficients)
            .map(|(p, a)| {
                let ph = crate::fock::fock_to_phase(*p);
                let c = a * C64::from_polar(FOURTH_ROOT_2, -PI * ph.x * ph.y);
                (c, GaborAtom::new(ph.x, ph.y))
            })
            .collect()
    }
}

/// Least-squares reconstruction from the section `Λ ∩ {|w| ≤ R}`.
///
/// The normal equations `Σ_μ α_μ⟨k̂_μ, k̂_λ⟩ = ⟨𝓑f, k̂_λ⟩ = 𝓑f(λ)/‖k_λ‖`
/// are solved spectrally with a Tikhonov floor of 1e-12·‖G‖.
pub fn finite_section_reconstruct(f: &Signal, spec: &GeneratorSpec, radius: f64) -> Result<SectionReconstruction> {
    spec.validate()?;
    let s = f.to_fock();
    let section = spec.zeros_within(radius)?;
    let pts = section.points().to_vec();
    let n = pts.len();
    let gram = crate::dual::gram_matrix(&section)?;
    // M[λ, μ] = ⟨k̂_μ, k̂_λ⟩
    let m = DMatrix::from_fn(n, n, |i, j| gram[(j, i)]);
    let rhs = DVector::from_fn(n, |i, _| {
        let z = pts[i].w;
        match s.as_kernel_combination() {
            Some(parts) => parts
                .iter()
                .map(|&(c, a)| exp_log(c.ln() + PI * a.conj() * z - ln_kernel_norm(z)))
                .sum(),
            None => s.eval(z) * (-ln_kernel_norm(z)).exp(),
        }
    });
    let sol = solve_psd(&m, &rhs, 1e-12);
    let alpha: Vec<C64> = sol.x.iter().copied().collect();
    let parts: Vec<(C64, FockFunction)> = pts
        .iter()
        .zip(&alpha)
        .map(|(p, a)| (*a, FockFunction::normalized_kernel(p.w)))
        .collect();
    let approx = FockFunction::linear_combination(&parts);
    let diff = s.add(&approx.scale(C64::new(-1.0, 0.0)));
    let r = fock_norm(&diff)?;
    Ok(SectionReconstruction {
        points: pts,
        kernel_coefficients: alpha,
        fock: approx,
        residual: r.value,
        residual_error: r.error_bound,
        condition: sol.condition,
        regularization: sol.regularization,
        ill_conditioned: sol.condition > ILL_CONDITIONED,
    })
}

/// Reconstruction residuals over a sequence of radii, with the trend check
/// (`strict`: strictly decreasing, otherwise non-increasing up to the
/// residual error bounds).
pub fn verify_reconstruction_trend(
    f: &Signal,
    spec: &GeneratorSpec,
    radii: &[f64],
    strict: bool,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("reconstruction_trend", Value::Real(0.0));
    let mut residuals = Vec::new();
    let mut budget = 0.0f64;
    let mut worst_condition = 1.0f64;
    for &r in radii {
        let rec = finite_section_reconstruct(f, spec, r)?;
        residuals.push(rec.residual);
        budget = budget.max(rec.residual_error);
        worst_condition = worst_condition.max(rec.condition);
        report = report.measure(&alloc::format!("residual_r{r}"), rec.residual);
    }
    let ok = residuals
        .windows(2)
        .all(|p| if strict { p[1] < p[0] } else { p[1] <= p[0] + budget });
    report.value = Value::Real(residuals.last().copied().unwrap_or(0.0));
    Ok(report
        .param("strict", Param::Int(strict as i64))
        .radius(radii.last().copied().unwrap_or(0.0))
        .budget(budget)
        .measure("worst_condition", worst_condition)
        .pass(ok))
}

/// For `count` seeded nonzero elements `Σ α_λ k̂_λ` of the section span,
/// the coefficient vector `(b_λ)` must be nonzero. By biorthogonality it
/// equals `α`; the largest deviation is reported.
pub fn verify_injectivity(
    spec: &GeneratorSpec,
    radius: f64,
    count: usize,
    seed: u64,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let g = generating_function(spec)?;
    let section = spec.zeros_within(radius)?;
    let mut rng = seeded_rng(seed);
    let mut min_norm = f64::INFINITY;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let alpha: Vec<C64> = section.points().iter().map(|_| uniform_complex(&mut rng)).collect();
        let parts: Vec<(C64, FockFunction)> = section
            .points()
            .iter()
            .zip(&alpha)
            .map(|(p, a)| (*a, FockFunction::normalized_kernel(p.w)))
            .collect();
        let s = FockFunction::linear_combination(&parts);
        let mut norm = 0.0;
        for (p, a) in section.points().iter().zip(&alpha) {
            let b = coefficient(&s, &g, *p)?;
            norm += b.value.norm_sqr();
            worst = worst.max((b.value - a).norm() / a.norm());
        }
        min_norm = min_norm.min(norm.sqrt());
    }
    Ok(VerificationReport::new("injectivity", Value::Real(min_norm))
        .param("count", Param::Int(count as i64))
        .param("seed", Param::Int(seed as i64))
        .radius(radius)
        .budget(worst)
        .measure("worst_relative_deviation", worst)
        .pass(min_norm > 0.0 && worst <= cfg.threshold(1e-8)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sampling_constant_value() {
        assert!((SAMPLING_CONSTANT - 4.0 * (PI / 4.0).exp() / PI).abs() < 1e-15);
    }

    #[test]
    fn series_of_normalized_kernels() {
        let spec = GeneratorSpec::LatticeMinusOrigin;
        let s = FockFunction::normalized_kernel(c(1.0, 0.0)).add(&FockFunction::normalized_kernel(c(2.0, 0.0)));
        let series = assemble_series(&s, &spec, 4.0).unwrap();
        let support = series.support(1e-10);
        assert_eq!(support.len(), 2);
        for (w, b) in &series.coefficients {
            let expect = if support.contains(w) { 1.0 } else { 0.0 };
            assert!((b.value - expect).norm() < 1e-12);
        }
        let zero = assemble_series(&FockFunction::zero(), &spec, 3.0).unwrap();
        assert!(zero.coefficients.iter().all(|(_, b)| b.value == c(0.0, 0.0)));
    }

    #[test]
    fn kernel_norm_closed_form() {
        let parts = [(c(1.0, 0.5), c(0.3, -0.2)), (c(-0.4, 0.0), c(1.1, 0.7))];
        let f = FockFunction::linear_combination(&[
            (parts[0].0, FockFunction::kernel(parts[0].1)),
            (parts[1].0, FockFunction::kernel(parts[1].1)),
        ]);
        let t = fock_norm(&f).unwrap();
        assert!((kernel_combination_norm(&parts) - t.value).abs() <= t.error_bound + 1e-12);
    }

    #[test]
    fn divided_product_resolves_lambda() {
        let spec = GeneratorSpec::ShiftedLatticeMinusPoint(c(0.5, 0.5));
        let g = generating_function(&spec).unwrap();
        let l = [c(-0.5, -0.5), c(-0.5, 0.5), c(0.5, -0.5)];
        let q = divided_product(&g, &l).unwrap();
        let sigma = SigmaEvaluator::new();
        let z = c(0.9, 1.7);
        let direct = g.eval(z) / ((z - l[0]) * (z - l[1]) * (z - l[2]));
        assert!((exp_log(q.ln_eval(&sigma, z)) - direct).norm() < 1e-12 * direct.norm());
        assert!(exp_log(q.ln_eval(&sigma, l[1])).norm().is_finite());
        assert!(divided_product(&g, &[l[0], l[0], l[1]]).is_err());
    }
}
