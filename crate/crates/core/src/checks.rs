//! Named verification suites built from the individual checks.
//!
//! A suite is a list of [`Task`]s; each task is independent and produces
//! one or more [`VerificationReport`]s, so callers may run tasks in parallel
//! and concatenate the results in task order.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // f64 math methods when built without std
use num_traits::Float;
use rand::Rng;

use crate::bargmann::{
    atom_inner, bargmann_atom, bargmann_pointwise, bargmann_transform, GaborAtom, SampledFunction, DEFAULT_HALF_WIDTH,
    DEFAULT_STEP,
};
use crate::dual::{generating_function, min_singular_value, upper_density, GeneratorSpec};
use crate::error::{Error, Result};
use crate::fock::{
    fock_inner_quadrature, fock_inner_taylor, fock_norm, FockFunction, FockPoint, PointSet, QuadratureSpec,
};
use crate::series::*;
use crate::sigma::{direct_product, lattice_distance, SigmaEvaluator, DIRECT_SIZES};
use crate::special::ln_factorial;

/// Inputs shared by every task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub verify: VerifyConfig,
    /// Truncation radius for lattice sums and sections.
    pub radius: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            verify: VerifyConfig::default(),
            radius: 8.0,
            seed: 0,
        }
    }
}

/// Suite names accepted by [`suite_tasks`].
pub const SUITES: [&str; 10] = [
    "biorth",
    "bound",
    "sampling",
    "interchange",
    "sigma",
    "fock",
    "bargmann",
    "gram",
    "reconstruct",
    "all",
];

/// One independent unit of verification work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    BiorthLattice,
    BiorthShifted,
    BiorthPerturbed,
    BiorthRatio,
    CoeffBound,
    SigmaMassGrowth,
    WSigmaNorm,
    SamplingConstant,
    SamplingFamily,
    InterchangeKernel,
    InterchangeFamily,
    SigmaQuasiPeriodicity,
    SigmaMethodAgreement,
    SigmaPrime,
    GrowthRange,
    GrowthPeriodicity,
    MonomialNorms,
    EngineAgreement,
    Reproducing,
    Unitarity,
    Intertwining,
    KernelImage,
    GramTrend,
    Density,
    ReconstructHermite,
    ReconstructAtoms,
    Injectivity,
}

/// Tasks of a named suite, in output order.
pub fn suite_tasks(name: &str) -> Result<Vec<Task>> {
    use Task::*;
    Ok(match name {
        "biorth" => vec![BiorthLattice, BiorthShifted, BiorthPerturbed, BiorthRatio],
        "bound" => vec![CoeffBound, SigmaMassGrowth, WSigmaNorm],
        "sampling" => vec![SamplingConstant, SamplingFamily],
        "interchange" => vec![InterchangeKernel, InterchangeFamily],
        "sigma" => vec![
            SigmaQuasiPeriodicity,
            SigmaMethodAgreement,
            SigmaPrime,
            GrowthRange,
            GrowthPeriodicity,
        ],
        "fock" => vec![MonomialNorms, EngineAgreement, Reproducing],
        "bargmann" => vec![Unitarity, Intertwining, KernelImage],
        "gram" => vec![GramTrend, Density],
        "reconstruct" => vec![ReconstructHermite, ReconstructAtoms, Injectivity],
        "all" => {
            let mut all = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                all.extend(suite_tasks(s)?);
            }
            all
        }
        other => return Err(Error::InvalidArgument(alloc::format!("unknown suite {other:?}"))),
    })
}

impl Task {
    pub fn run(self, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
        use Task::*;
        let v = &cfg.verify;
        match self {
            BiorthLattice => one(check_biorthogonality(&GeneratorSpec::LatticeMinusOrigin, cfg.radius, v)),
            BiorthShifted => one(check_biorthogonality(
                &GeneratorSpec::ShiftedLatticeMinusPoint(C64::new(0.5, 0.5)),
                cfg.radius,
                v,
            )),
            BiorthPerturbed => one(check_biorthogonality(&example_perturbation(), cfg.radius, v)),
            BiorthRatio => one(check_biorth_ratio(cfg.radius, v)),
            CoeffBound => (0..5)
                .map(|i| {
                    let mut rng = seeded_rng(cfg.seed.wrapping_add(i));
                    let s = random_kernel_combination(&mut rng, 5, 2.0);
                    verify_coeff_bound(&s, cfg.radius)
                        .map(|r| r.param("seed", crate::series::Param::Int(cfg.seed.wrapping_add(i) as i64)))
                })
                .collect(),
            SigmaMassGrowth => verify_sigma_mass_growth(&[2.0, 4.0, 8.0], 1e-9),
            WSigmaNorm => {
                let pts: Vec<FockPoint> = [1, 2, 4, 6].iter().map(|&m| FockPoint::from_lattice(m, 0)).collect();
                verify_w_sigma_family(&pts, W_SIGMA_RADIUS, 1e-9)
            }
            SamplingConstant => one(check_sampling_constant(v)),
            SamplingFamily => {
                let mut rng = seeded_rng(cfg.seed);
                let inputs = [
                    ("zero", FockFunction::zero()),
                    ("z", FockFunction::monomial(1)),
                    ("random_kernels", random_kernel_combination(&mut rng, 3, 1.5)),
                ];
                inputs
                    .iter()
                    .map(|(name, h)| {
                        verify_sampling_sum(h, cfg.radius, v)
                            .map(|r| r.param("input", crate::series::Param::Text(String::from(*name))))
                    })
                    .collect()
            }
            InterchangeKernel => {
                let (spec, l) = interchange_setup()?;
                one(
                    verify_interchange(&spec, &FockFunction::kernel(C64::new(2.0, 0.0)), l, cfg.radius, v)
                        .map(|r| r.param("input", crate::series::Param::Text("k2".into()))),
                )
            }
            InterchangeFamily => {
                let (spec, l) = interchange_setup()?;
                let mut rng = seeded_rng(cfg.seed);
                let inputs = [
                    ("zero", FockFunction::zero()),
                    ("k_0.3+0.2i", FockFunction::kernel(C64::new(0.3, 0.2))),
                    ("random_kernels", random_kernel_combination(&mut rng, 4, 1.5)),
                ];
                inputs
                    .iter()
                    .map(|(name, s)| {
                        verify_interchange(&spec, s, l, cfg.radius, v)
                            .map(|r| r.param("input", crate::series::Param::Text(String::from(*name))))
                    })
                    .collect()
            }
            SigmaQuasiPeriodicity => one(check_quasi_periodicity(cfg.seed, 1000, v)),
            SigmaMethodAgreement => one(check_method_agreement(3.0, 25, v)),
            SigmaPrime => one(check_sigma_prime_modulus(5.0, v)),
            GrowthRange => one(check_growth_range(6.0, 200)),
            GrowthPeriodicity => one(check_growth_periodicity(cfg.seed, 200, v)),
            MonomialNorms => one(check_monomial_norms(20, v)),
            EngineAgreement => one(check_engine_agreement(cfg.seed, 100)),
            Reproducing => one(check_reproducing(cfg.seed, 50, v)),
            Unitarity => one(check_unitarity(cfg.seed, 100, 12, v)),
            Intertwining => one(check_intertwining(3.0, 7, v)),
            KernelImage => one(check_kernel_image(v)),
            GramTrend => one(check_gram_trend(&[2.0, 3.0, 4.0, 5.0])),
            Density => one(check_density()),
            ReconstructHermite => one(verify_reconstruction_trend(
                &Signal::Hermite(crate::bargmann::HermiteExpansion::basis(3)),
                &GeneratorSpec::LatticeMinusOrigin,
                &[2.0, 3.0, 4.0, 5.0],
                true,
            )),
            ReconstructAtoms => {
                let atoms = random_atoms(&mut seeded_rng(cfg.seed), 5, 2.0);
                one(verify_reconstruction_trend(
                    &Signal::Atoms(atoms),
                    &GeneratorSpec::LatticeMinusOrigin,
                    &[3.0, 4.0, 5.0],
                    false,
                ))
            }
            Injectivity => one(verify_injectivity(
                &GeneratorSpec::LatticeMinusOrigin,
                3.0,
                50,
                cfg.seed,
                v,
            )),
        }
    }
}

fn one(r: Result<VerificationReport>) -> Result<Vec<VerificationReport>> {
    r.map(|r| vec![r])
}

/// `(𝒵 ∖ {0} ∖ {1, 2i}) ∪ {1.3, −0.4 + 0.6i}`.
pub fn example_perturbation() -> GeneratorSpec {
    GeneratorSpec::Perturbation {
        removed: vec![(1, 0), (0, 2)],
        added: vec![C64::new(1.3, 0.0), C64::new(-0.4, 0.6)],
    }
}

/// Shifted lattice `0.5 + 0.5i + (𝒵 ∖ {0})` and its three zeros nearest the
/// origin (ties broken by real, then imaginary part).
pub fn interchange_setup() -> Result<(GeneratorSpec, [C64; 3])> {
    let spec = GeneratorSpec::ShiftedLatticeMinusPoint(C64::new(0.5, 0.5));
    let pts = spec.zeros_within(1.0)?;
    let p = pts.points();
    Ok((spec, [p[0].w, p[1].w, p[2].w]))
}

/// `max |⟨k̂_μ, F_λ⟩ − δ_{λμ}|` over `λ, μ ∈ Λ ∩ {|z| ≤ R}`.
pub fn check_biorthogonality(spec: &GeneratorSpec, radius: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let g = generating_function(spec)?;
    let pts = spec.zeros_within(radius)?;
    let mut worst = 0.0f64;
    for l in pts.points() {
        let e = g.biorth_element(*l)?;
        for m in pts.points() {
            let expect = if l == m { 1.0 } else { 0.0 };
            worst = worst.max((e.pairing(*m) - expect).norm());
        }
    }
    let threshold = cfg.threshold(1e-10);
    let kind = match spec {
        GeneratorSpec::LatticeMinusOrigin => "lattice_minus_origin",
        GeneratorSpec::ShiftedLatticeMinusPoint(_) => "shifted_lattice",
        GeneratorSpec::Perturbation { .. } => "perturbation",
    };
    Ok(VerificationReport::new("biorthogonality", Value::Real(worst))
        .param("spec", Param::Text(kind.into()))
        .param("points", Param::Int(pts.len() as i64))
        .reference(Value::Real(0.0))
        .radius(radius)
        .budget(threshold)
        .pass(worst <= threshold))
}

/// `‖k_w‖/|σ₀'(w)| = |w|` on the lattice section.
pub fn check_biorth_ratio(radius: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let g = generating_function(&GeneratorSpec::LatticeMinusOrigin)?;
    let mut worst = 0.0f64;
    for w in PointSet::lattice(radius, &[(0, 0)]).points() {
        let e = g.biorth_element(*w)?;
        worst = worst.max((e.ln_scale().re.exp() / w.w.norm() - 1.0).abs());
    }
    let threshold = cfg.threshold(1e-8);
    Ok(VerificationReport::new("biorth_norm_ratio", Value::Real(worst))
        .reference(Value::Real(0.0))
        .radius(radius)
        .budget(threshold)
        .pass(worst <= threshold))
}

/// `Σ_{0<|w|≤6} e^{−π|w|²}` against 0.18034 ± 1e-4, cross-checked with
/// `θ₃(e^{−π})² − 1`.
pub fn check_sampling_constant(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let one = FockFunction::constant(C64::new(1.0, 0.0));
    let sum = sampling_partial_sum(&one, 6.0);
    let theta = theta_lattice_sum();
    let pass = (sum - 0.18034).abs() <= 1e-4 && (sum - theta).abs() <= cfg.threshold(1e-12);
    Ok(VerificationReport::new("sampling_constant", Value::Real(sum))
        .reference(Value::Real(0.18034))
        .radius(6.0)
        .budget(1e-4)
        .measure("theta_squared_minus_one", theta)
        .pass(pass))
}

/// Direct-product residuals of `σ(z+1) = −σ(z)e^{η₁(z+1/2)}` and
/// `σ(z+i) = −σ(z)e^{η₂(z+i/2)}` on seeded points of the period cell.
pub fn check_quasi_periodicity(seed: u64, count: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let q = SigmaEvaluator::new().quasi_periods();
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    for _ in 0..count {
        let z = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let s = direct_product(z, &DIRECT_SIZES);
        for (omega, eta) in [(one, q.eta1), (i, q.eta2)] {
            let lhs = direct_product(z + omega, &DIRECT_SIZES);
            let rhs = -s * (eta * (z + omega * 0.5)).exp();
            worst = worst.max((lhs - rhs).norm() / lhs.norm());
        }
    }
    let threshold = cfg.threshold(1e-10);
    Ok(VerificationReport::new("sigma_quasi_periodicity", Value::Real(worst))
        .param("points", Param::Int(count as i64))
        .param("seed", Param::Int(seed as i64))
        .reference(Value::Real(0.0))
        .budget(threshold)
        .pass(worst <= threshold))
}

/// Relative agreement of the reduced evaluator with the direct product on a
/// `k × k` grid of `[−R, R]²` restricted to `|z| ≤ R`, lattice points skipped.
pub fn check_method_agreement(radius: f64, k: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let s = SigmaEvaluator::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for a in 0..k {
        for b in 0..k {
            let z = C64::new(
                -radius + 2.0 * radius * a as f64 / (k - 1) as f64,
                -radius + 2.0 * radius * b as f64 / (k - 1) as f64,
            );
            if z.norm() > radius || lattice_distance(z) < 1e-9 {
                continue;
            }
            let r = s.sigma(z);
            let d = direct_product(z, &DIRECT_SIZES);
            worst = worst.max((r - d).norm() / d.norm());
            count += 1;
        }
    }
    let threshold = cfg.threshold(1e-10);
    Ok(VerificationReport::new("sigma_method_agreement", Value::Real(worst))
        .param("points", Param::Int(count))
        .reference(Value::Real(0.0))
        .radius(radius)
        .budget(threshold)
        .pass(worst <= threshold))
}

/// `|σ'(w)|` against `e^{π|w|²/2}` over lattice points with `1 ≤ |w| ≤ R`,
/// compared in log space. Each derivative is a 32-node trapezoid rule for
/// the Cauchy integral on `|z − w| = 1/4`, which converges geometrically.
pub fn check_sigma_prime_modulus(radius: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let s = SigmaEvaluator::new();
    let mut worst = 0.0f64;
    let mut worst_closed = 0.0f64;
    for w in PointSet::lattice(radius, &[(0, 0)]).points() {
        if w.w.norm() < 1.0 {
            continue;
        }
        let d = contour_derivative(|z| s.sigma(z), w.w, 0.25, 32);
        let expect = 0.5 * PI * w.w.norm_sqr();
        worst = worst.max((d.norm().ln() - expect).exp_m1().abs());
        let sp = s.sigma_prime_lattice(*w)?;
        worst_closed = worst_closed.max((sp.ln_sigma_prime.re - expect).exp_m1().abs());
    }
    let worst = worst.max(worst_closed);
    let threshold = cfg.threshold(1e-8);
    Ok(VerificationReport::new("sigma_prime_modulus", Value::Real(worst))
        .reference(Value::Real(0.0))
        .radius(radius)
        .budget(threshold)
        .measure("closed_form_deviation", worst_closed)
        .pass(worst <= threshold))
}

/// `f'(w)` from the trapezoid rule on `|z − w| = r` with `n` nodes.
pub fn contour_derivative(f: impl Fn(C64) -> C64, w: C64, r: f64, n: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let u = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += f(w + u * r) / (u * r);
    }
    acc / n as f64
}

/// `[c₁, c₂]` of the growth ratio over a `k × k` grid of `[−R, R]²` within
/// `|z| ≤ R`; the value is `c₂/c₁`.
pub fn check_growth_range(radius: f64, k: usize) -> Result<VerificationReport> {
    let (lo, hi) = growth_range_on_disk(radius, k);
    Ok(VerificationReport::new("growth_ratio_range", Value::Real(hi / lo))
        .reference(Value::Real(10.0))
        .radius(radius)
        .measure("c1", lo)
        .measure("c2", hi)
        .pass(hi / lo <= 10.0 && lo > 0.0))
}

pub fn growth_range_on_disk(radius: f64, k: usize) -> (f64, f64) {
    let s = SigmaEvaluator::new();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            let z = C64::new(
                -radius + 2.0 * radius * a as f64 / (k - 1) as f64,
                -radius + 2.0 * radius * b as f64 / (k - 1) as f64,
            );
            if z.norm() > radius {
                continue;
            }
            let g = s.growth_ratio(z);
            lo = lo.min(g);
            hi = hi.max(g);
        }
    }
    (lo, hi)
}

/// `|σ(z)|e^{−π|z|²/2}/dist(z, 𝒵)` evaluated from `ln σ` with the full
/// quasi-periodic factors, at `z`, `z + 1` and `z + i`.
pub fn check_growth_periodicity(seed: u64, count: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let s = SigmaEvaluator::new();
    let ratio = |z: C64| (s.ln_sigma(z).re - 0.5 * PI * z.norm_sqr()).exp() / lattice_distance(z);
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let z = C64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if lattice_distance(z) < 1e-6 {
            continue;
        }
        let r0 = ratio(z);
        for shift in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            worst = worst.max((ratio(z + shift) - r0).abs());
        }
    }
    let threshold = cfg.threshold(1e-9);
    Ok(VerificationReport::new("growth_ratio_periodicity", Value::Real(worst))
        .param("points", Param::Int(count as i64))
        .reference(Value::Real(0.0))
        .budget(threshold)
        .pass(worst <= threshold))
}

/// Quadrature engine against `‖zⁿ‖² = n!/πⁿ` for `n ≤ nmax`.
pub fn check_monomial_norms(nmax: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let spec = QuadratureSpec {
        tolerance: 1e-12,
        ..QuadratureSpec::default()
    };
    let mut worst = 0.0f64;
    let mut budget = 0.0f64;
    for n in 0..=nmax {
        let f = FockFunction::monomial(n);
        let q = fock_inner_quadrature(&f, &f, &spec)?;
        let exact = (ln_factorial(n as usize) - n as f64 * PI.ln()).exp();
        worst = worst.max((q.value - exact).norm() / exact);
        budget = budget.max(q.error_bound / exact);
    }
    let threshold = cfg.threshold(1e-8);
    Ok(VerificationReport::new("monomial_norms", Value::Real(worst))
        .param("max_degree", Param::Int(nmax as i64))
        .reference(Value::Real(0.0))
        .budget(budget.max(threshold))
        .pass(worst <= threshold))
}

/// Seeded `c₁k_{a₁} + c₂k_{a₂} + c₃zᵈ` with `|a_j| ≤ 1.5` and `d ≤ 6`.
pub fn random_mixed_combination(rng: &mut rand_chacha::ChaCha8Rng) -> FockFunction {
    let mut f = random_kernel_combination(rng, 2, 1.5);
    let d = rng.gen_range(0..=6u32);
    let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    f = f.add(&FockFunction::monomial(d).scale(c));
    f
}

/// Taylor and quadrature engines on seeded pairs: the worst ratio of the
/// discrepancy to the sum of both error bounds (pass when ≤ 1), plus
/// conjugate symmetry of the Taylor engine.
pub fn check_engine_agreement(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut rng = seeded_rng(seed);
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut worst_sym = 0.0f64;
    for _ in 0..count {
        let f = random_mixed_combination(&mut rng);
        let g = random_mixed_combination(&mut rng);
        let t = fock_inner_taylor(&f, &g)?;
        let q = fock_inner_quadrature(&f, &g, &spec)?;
        let allowed = t.error_bound + q.error_bound + 1e-13 * (t.value.norm() + 1.0);
        worst = worst.max((t.value - q.value).norm() / allowed);
        let back = fock_inner_taylor(&g, &f)?;
        worst_sym = worst_sym.max((back.value.conj() - t.value).norm() / (t.value.norm() + 1.0));
    }
    Ok(VerificationReport::new("engine_agreement", Value::Real(worst))
        .param("pairs", Param::Int(count as i64))
        .param("seed", Param::Int(seed as i64))
        .reference(Value::Real(1.0))
        .budget(1.0)
        .measure("conjugate_symmetry", worst_sym)
        .pass(worst <= 1.0 && worst_sym <= 1e-13))
}

/// `|⟨F, k_w⟩ − F(w)|` against the combined error bound for seeded `F` and
/// `|w| ≤ 4`; value is the worst ratio (pass when ≤ 1).
pub fn check_reproducing(seed: u64, count: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let f = random_mixed_combination(&mut rng);
        let w = C64::from_polar(4.0 * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>());
        let k = FockFunction::kernel(w);
        let ip = fock_inner_taylor(&f, &k)?;
        let exact = f.eval(w);
        let allowed = ip.error_bound + cfg.threshold(1e-14) * (exact.norm() + ip.value.norm());
        worst = worst.max((ip.value - exact).norm() / allowed);
    }
    Ok(VerificationReport::new("reproducing_property", Value::Real(worst))
        .param("count", Param::Int(count as i64))
        .reference(Value::Real(1.0))
        .radius(4.0)
        .budget(1.0)
        .pass(worst <= 1.0))
}

/// `|‖𝓑f‖_𝓕/‖f‖₂ − 1|` for seeded Hermite expansions, with `‖f‖₂` from the
/// sampled time-domain function.
pub fn check_unitarity(seed: u64, count: usize, degree: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let f = random_hermite(&mut rng, degree);
        let l2 = f.sample(DEFAULT_HALF_WIDTH, DEFAULT_STEP).l2_norm();
        let n = fock_norm(&bargmann_transform(&f))?;
        worst = worst.max((n.value / l2 - 1.0).abs());
    }
    let threshold = cfg.threshold(1e-6);
    Ok(VerificationReport::new("bargmann_unitarity", Value::Real(worst))
        .param("count", Param::Int(count as i64))
        .param("degree", Param::Int(degree as i64))
        .reference(Value::Real(0.0))
        .budget(threshold)
        .pass(worst <= threshold))
}

/// Atoms on a `k × k` grid of `[−a, a]²`: `|⟨atom_λ, atom_μ⟩|` against
/// `2^{−1/2}e^{−π|λ−μ|²/2}` and the Fock-side Taylor pairing of the images
/// against `atom_inner`.
pub fn check_intertwining(half_width: f64, k: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut atoms = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let x = -half_width + 2.0 * half_width * a as f64 / (k - 1) as f64;
            let y = -half_width + 2.0 * half_width * b as f64 / (k - 1) as f64;
            atoms.push(GaborAtom::new(x, y));
        }
    }
    let images: Vec<FockFunction> = atoms.iter().map(bargmann_atom).collect();
    let mut worst_modulus = 0.0f64;
    let mut worst_pairing = 0.0f64;
    for (i, a) in atoms.iter().enumerate() {
        for (j, b) in atoms.iter().enumerate() {
            let v = atom_inner(a, b);
            let d2 = (a.location.x - b.location.x).powi(2) + (a.location.y - b.location.y).powi(2);
            let gram = (-0.5 * PI * d2).exp() / core::f64::consts::SQRT_2;
            worst_modulus = worst_modulus.max((v.norm() - gram).abs());
            let t = fock_inner_taylor(&images[i], &images[j])?;
            worst_pairing = worst_pairing.max((t.value - v).norm());
        }
    }
    let worst = worst_modulus.max(worst_pairing);
    let threshold = cfg.threshold(1e-7);
    Ok(VerificationReport::new("atom_kernel_intertwining", Value::Real(worst))
        .param("atoms", Param::Int(atoms.len() as i64))
        .reference(Value::Real(0.0))
        .budget(threshold)
        .measure("modulus_deviation", worst_modulus)
        .measure("fock_pairing_deviation", worst_pairing)
        .pass(worst <= threshold))
}

/// Pointwise quadrature of atoms against the closed form on a 10 × 10 grid
/// of `z` with `|z| ≤ 3`.
pub fn check_kernel_image(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    for atom in [
        GaborAtom::new(1.0, 0.0),
        GaborAtom::new(-0.7, 1.4),
        GaborAtom::new(2.0, -1.5),
    ] {
        let samples = SampledFunction::from_fn(DEFAULT_HALF_WIDTH, DEFAULT_STEP, |t| atom.eval(t));
        let closed = bargmann_atom(&atom);
        for a in 0..10 {
            for b in 0..10 {
                let z = C64::new(-2.1 + 4.2 * a as f64 / 9.0, -2.1 + 4.2 * b as f64 / 9.0);
                if z.norm() > 3.0 {
                    continue;
                }
                let p = bargmann_pointwise(&samples, z, 1e-10)?;
                worst = worst.max((p.value - closed.eval(z)).norm());
            }
        }
    }
    let threshold = cfg.threshold(1e-8);
    Ok(VerificationReport::new("bargmann_kernel_image", Value::Real(worst))
        .reference(Value::Real(0.0))
        .radius(3.0)
        .budget(threshold)
        .pass(worst <= threshold))
}

/// Minimum singular values of lattice-minus-origin Gram sections; passes
/// when strictly decreasing.
pub fn check_gram_trend(radii: &[f64]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gram_min_singular_trend", Value::Real(0.0));
    let mut values = Vec::new();
    for &r in radii {
        let s = min_singular_value(&PointSet::lattice(r, &[(0, 0)]))?;
        values.push(s.value);
        report = report.measure(&alloc::format!("min_singular_r{r}"), s.value);
    }
    report.value = Value::Real(values.last().copied().unwrap_or(0.0));
    let ok = values.windows(2).all(|p| p[1] < p[0]);
    Ok(report.radius(radii.last().copied().unwrap_or(0.0)).pass(ok))
}

/// Upper density of the full lattice and of the lattice with every second
/// column removed, at r = 20.
pub fn check_density() -> Result<VerificationReport> {
    let full = upper_density(&PointSet::lattice(20.0, &[]), &[20.0])?[0];
    let half = upper_density(&PointSet::lattice_where(20.0, |m, _| m.rem_euclid(2) == 0), &[20.0])?[0];
    let pass = (full - 1.0).abs() <= 0.05 && (half - 0.5).abs() <= 0.05;
    Ok(VerificationReport::new("upper_density", Value::Real(full))
        .reference(Value::Real(1.0))
        .radius(20.0)
        .budget(0.05)
        .measure("every_second_column", half)
        .pass(pass))
}
