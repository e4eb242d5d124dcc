//! Generating functions, biorthogonal families and Gram diagnostics for
//! systems of normalized reproducing kernels `k̂_λ = k_λ/‖k_λ‖`.
//!
//! A generating function `F` for `Λ` vanishes simply on `Λ`, and
//! `F_λ(z) = ‖k_λ‖·F(z)/((z − λ)·F'(λ))` is then biorthogonal to the kernels:
//! `⟨k̂_μ, F_λ⟩ = conj(F_λ(μ))/‖k_μ‖ = δ_{λμ}`. Every pairing below goes
//! through that point evaluation, in log form.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{
    fock_inner_taylor, ln_kernel_norm, FockFunction, FockPoint, InnerProduct, PointSet, Primitive, SigmaProduct,
    TaylorPolicy,
};
use crate::linalg::hermitian_eigen;
use crate::sigma::{as_lattice_point, exp_log, LogValue, SigmaEvaluator};

/// Maximum number of removed plus added points in a perturbation.
pub const MAX_PERTURBATION: usize = 8;

/// Largest point set accepted by [`gram_matrix`].
pub const MAX_GRAM_POINTS: usize = 2000;

/// Distance below which two points are treated as equal.
const POINT_EPS: f64 = 1e-9;

/// A point set `Λ` described through its generating function.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `𝒵 ∖ {0}`, generated by `σ₀`.
    LatticeMinusOrigin,
    /// `a + (𝒵 ∖ {0})`, generated by `e^{π·conj(a)·z}·σ₀(z − a)`.
    ShiftedLatticeMinusPoint(C64),
    /// `(𝒵 ∖ {0} ∖ removed) ∪ added`, generated by
    /// `σ₀(z)·Π(z − added)/Π(z − removed)`.
    Perturbation { removed: Vec<(i64, i64)>, added: Vec<C64> },
}

impl GeneratorSpec {
    pub fn shift(&self) -> C64 {
        match self {
            GeneratorSpec::ShiftedLatticeMinusPoint(a) => *a,
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::LatticeMinusOrigin => Ok(()),
            GeneratorSpec::ShiftedLatticeMinusPoint(a) => {
                if a.re.is_finite() && a.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("non-finite shift {a}")))
                }
            }
            GeneratorSpec::Perturbation { removed, added } => {
                let count = removed.len() + added.len();
                if count > MAX_PERTURBATION {
                    return Err(Error::InvalidPerturbation(format!(
                        "{count} moved points exceed the limit of {MAX_PERTURBATION}"
                    )));
                }
                for (i, &(m, n)) in removed.iter().enumerate() {
                    if (m, n) == (0, 0) {
                        return Err(Error::InvalidPerturbation(
                            "the origin is not a zero and cannot be removed".into(),
                        ));
                    }
                    if removed[..i].contains(&(m, n)) {
                        return Err(Error::InvalidPerturbation(format!("{m}+{n}i removed twice")));
                    }
                }
                for (i, &nu) in added.iter().enumerate() {
                    if !(nu.re.is_finite() && nu.im.is_finite()) {
                        return Err(Error::InvalidPerturbation(format!("non-finite point {nu}")));
                    }
                    if added[..i].iter().any(|&p| (p - nu).norm() <= POINT_EPS) {
                        return Err(Error::InvalidPerturbation(format!("{nu} added twice")));
                    }
                    if let Some((m, n)) = as_lattice_point(nu) {
                        if (m, n) != (0, 0) && !removed.contains(&(m, n)) {
                            return Err(Error::InvalidPerturbation(format!(
                                "{nu} collides with an existing zero"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Whether `z` belongs to `Λ` (to within 1e-9).
    pub fn contains(&self, z: C64) -> bool {
        self.zero_kind(z).is_some()
    }

    fn zero_kind(&self, z: C64) -> Option<ZeroKind> {
        match self {
            GeneratorSpec::LatticeMinusOrigin => as_lattice_point(z).filter(|&p| p != (0, 0)).map(ZeroKind::Lattice),
            GeneratorSpec::ShiftedLatticeMinusPoint(a) => {
                as_lattice_point(z - a).filter(|&p| p != (0, 0)).map(ZeroKind::Lattice)
            }
            GeneratorSpec::Perturbation { removed, added } => {
                if let Some(k) = added.iter().position(|&nu| (nu - z).norm() <= POINT_EPS) {
                    return Some(ZeroKind::Added(k));
                }
                as_lattice_point(z)
                    .filter(|&p| p != (0, 0) && !removed.contains(&p))
                    .map(ZeroKind::Lattice)
            }
        }
    }

    /// `Λ ∩ {|z| ≤ r}`.
    pub fn zeros_within(&self, r: f64) -> Result<PointSet> {
        match self {
            GeneratorSpec::LatticeMinusOrigin => Ok(PointSet::lattice(r, &[(0, 0)])),
            GeneratorSpec::ShiftedLatticeMinusPoint(a) => {
                let reach = r + a.norm() + 1.0;
                let base = PointSet::lattice(reach, &[(0, 0)]);
                let mut pts: Vec<FockPoint> = base
                    .points()
                    .iter()
                    .map(|p| FockPoint::new(p.w + a))
                    .filter(|p| p.w.norm() <= r)
                    .collect();
                sort_points(&mut pts);
                PointSet::new(pts, r)
            }
            GeneratorSpec::Perturbation { removed, added } => {
                let mut pts: Vec<FockPoint> = PointSet::lattice(r, &[(0, 0)])
                    .points()
                    .iter()
                    .copied()
                    .filter(|p| as_lattice_point(p.w).map_or(true, |q| !removed.contains(&q)))
                    .collect();
                pts.extend(added.iter().filter(|nu| nu.norm() <= r).map(|&nu| FockPoint::new(nu)));
                sort_points(&mut pts);
                PointSet::new(pts, r)
            }
        }
    }

    /// Fails with `LatticeCollision` unless `Λ ∩ 𝒵 = ∅`.
    pub fn check_disjoint_from_lattice(&self) -> Result<()> {
        match self {
            GeneratorSpec::ShiftedLatticeMinusPoint(a) => match as_lattice_point(*a) {
                Some((m, n)) => Err(Error::LatticeCollision(format!(
                    "{}",
                    C64::new((m + 1) as f64, n as f64)
                ))),
                None => Ok(()),
            },
            _ => Err(Error::LatticeCollision("1".into())),
        }
    }
}

fn sort_points(pts: &mut [FockPoint]) {
    pts.sort_by(|p, q| {
        p.w.norm_sqr()
            .total_cmp(&q.w.norm_sqr())
            .then(p.w.re.total_cmp(&q.w.re))
            .then(p.w.im.total_cmp(&q.w.im))
    });
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ZeroKind {
    /// Zero of `σ₀(· − a)` at `a + m + in`.
    Lattice((i64, i64)),
    /// The k-th added point.
    Added(usize),
}

/// Closed-form generating function of a [`GeneratorSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    spec: GeneratorSpec,
    product: SigmaProduct,
    sigma: SigmaEvaluator,
}

pub fn generating_function(spec: &GeneratorSpec) -> Result<GeneratingFunction> {
    spec.validate()?;
    let product = match spec {
        GeneratorSpec::LatticeMinusOrigin => SigmaProduct {
            shift: C64::new(0.0, 0.0),
            numerator: Vec::new(),
            denominator: Vec::new(),
        },
        GeneratorSpec::ShiftedLatticeMinusPoint(a) => SigmaProduct {
            shift: *a,
            numerator: Vec::new(),
            denominator: Vec::new(),
        },
        GeneratorSpec::Perturbation { removed, added } => SigmaProduct {
            shift: C64::new(0.0, 0.0),
            numerator: added.clone(),
            denominator: removed.clone(),
        },
    };
    Ok(GeneratingFunction {
        spec: spec.clone(),
        product,
        sigma: SigmaEvaluator::new(),
    })
}

impl GeneratingFunction {
    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn product(&self) -> &SigmaProduct {
        &self.product
    }

    pub fn ln_eval(&self, z: C64) -> LogValue {
        self.product.ln_eval(&self.sigma, z)
    }

    pub fn eval(&self, z: C64) -> C64 {
        exp_log(self.ln_eval(z))
    }

    pub fn zeros_within(&self, r: f64) -> Result<PointSet> {
        self.spec.zeros_within(r)
    }

    /// `p` with `|F(z)| ≍ dist(z, Λ)·e^{π|z|²/2}·|z|^p` at infinity. The
    /// quotients `F(z)/(z − λ)` lie in the Fock space exactly when `p ≤ −1`.
    pub fn growth_power(&self) -> i64 {
        self.product.growth_power()
    }

    /// `ln F'(λ)` in closed form: quasi-periodicity for `σ'` at lattice
    /// points and the product rule for the rational factor.
    pub fn ln_derivative(&self, lambda: C64) -> Result<LogValue> {
        let kind = self.kind(lambda)?;
        let sp = &self.product;
        let a = sp.shift;
        Ok(match kind {
            ZeroKind::Lattice((m, n)) => {
                let w = C64::new(m as f64, n as f64);
                let mut l = PI * a.conj() * lambda + self.sigma.ln_sigma_prime_coords(m, n) - w.ln();
                for &nu in &sp.numerator {
                    l += (lambda - nu).ln();
                }
                for &(p, q) in &sp.denominator {
                    l -= C64::new((m - p) as f64, (n - q) as f64).ln();
                }
                l
            }
            ZeroKind::Added(k) => {
                let mut rest = sp.clone();
                rest.numerator.remove(k);
                rest.ln_eval(&self.sigma, lambda)
            }
        })
    }

    pub fn derivative(&self, lambda: C64) -> Result<C64> {
        self.ln_derivative(lambda).map(exp_log)
    }

    fn kind(&self, lambda: C64) -> Result<ZeroKind> {
        self.spec
            .zero_kind(lambda)
            .ok_or_else(|| Error::NotAZero(format!("{lambda}")))
    }

    /// `F(z)/(z − λ)` as a σ-product.
    fn quotient(&self, kind: ZeroKind) -> SigmaProduct {
        let mut sp = self.product.clone();
        match kind {
            ZeroKind::Lattice(w) => sp.denominator.push(w),
            ZeroKind::Added(k) => {
                sp.numerator.remove(k);
            }
        }
        sp
    }

    /// The biorthogonal element attached to `λ ∈ Λ`.
    pub fn biorth_element(&self, lambda: FockPoint) -> Result<BiorthogonalElement> {
        let kind = self.kind(lambda.w)?;
        let ln_scale = C64::new(ln_kernel_norm(lambda.w), 0.0) - self.ln_derivative(lambda.w)?;
        Ok(BiorthogonalElement {
            lambda,
            product: self.quotient(kind),
            ln_scale,
            sigma: self.sigma,
        })
    }
}

/// `F_λ(z) = ‖k_λ‖·F(z)/((z − λ)·F'(λ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalElement {
    lambda: FockPoint,
    product: SigmaProduct,
    ln_scale: LogValue,
    sigma: SigmaEvaluator,
}

impl BiorthogonalElement {
    pub fn lambda(&self) -> FockPoint {
        self.lambda
    }

    /// `ln(‖k_λ‖/F'(λ))`
    pub fn ln_scale(&self) -> LogValue {
        self.ln_scale
    }

    pub fn ln_eval(&self, z: C64) -> LogValue {
        self.ln_scale + self.product.ln_eval(&self.sigma, z)
    }

    pub fn eval(&self, z: C64) -> C64 {
        exp_log(self.ln_eval(z))
    }

    /// `⟨k̂_μ, F_λ⟩ = conj(F_λ(μ))·e^{−π|μ|²/2}`.
    pub fn pairing(&self, mu: FockPoint) -> C64 {
        exp_log(self.ln_eval(mu.w).conj() - ln_kernel_norm(mu.w))
    }

    /// The element as a [`FockFunction`] with Taylor data under `policy`.
    pub fn to_fock_function(&self, policy: TaylorPolicy) -> Result<FockFunction> {
        FockFunction::from_terms(
            alloc::vec![(exp_log(self.ln_scale), Primitive::Sigma(self.product.clone()))],
            policy,
        )
    }
}

/// Taylor degree used for σ-quotients on the cross-check path.
pub const COEFFICIENT_TAYLOR_DEGREE: usize = 160;

/// `b_w = ⟨S, F_w⟩`.
///
/// For `S = Σ c_a k_a` this is `Σ c_a·conj(F_w(a))` by the reproducing
/// property and the error bound is a rounding estimate. Any other `S` goes
/// through [`coefficient_taylor`].
pub fn coefficient(s: &FockFunction, g: &GeneratingFunction, w: FockPoint) -> Result<InnerProduct> {
    let element = g.biorth_element(w)?;
    match s.as_kernel_combination() {
        Some(parts) => Ok(kernel_pairing(&parts, &element)),
        None => coefficient_taylor(s, &element, TaylorPolicy::Degree(COEFFICIENT_TAYLOR_DEGREE)),
    }
}

/// `⟨Σ c_a k_a, F⟩ = Σ c_a·conj(F(a))` for a biorthogonal element `F`.
pub fn kernel_pairing(parts: &[(C64, C64)], element: &BiorthogonalElement) -> InnerProduct {
    let mut value = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &(c, a) in parts {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let t = exp_log(c.ln() + element.ln_eval(a).conj());
        value += t;
        scale += t.norm();
    }
    InnerProduct {
        value,
        error_bound: 64.0 * f64::EPSILON * scale,
    }
}

/// `⟨S, F_w⟩` through the Taylor engine.
pub fn coefficient_taylor(
    s: &FockFunction,
    element: &BiorthogonalElement,
    policy: TaylorPolicy,
) -> Result<InnerProduct> {
    let f = element.to_fock_function(policy)?;
    fock_inner_taylor(s, &f)
}

/// Gram matrix `⟨k̂_λ, k̂_μ⟩ = e^{π·conj(λ)·μ − π|λ|²/2 − π|μ|²/2}`, indexed
/// `(λ, μ)`.
pub fn gram_matrix(points: &PointSet) -> Result<DMatrix<C64>> {
    if points.len() > MAX_GRAM_POINTS {
        return Err(Error::TooManyPoints {
            count: points.len(),
            limit: MAX_GRAM_POINTS,
        });
    }
    let p = points.points();
    Ok(DMatrix::from_fn(p.len(), p.len(), |i, j| {
        let (l, m) = (p[i].w, p[j].w);
        (PI * (l.conj() * m) - 0.5 * PI * (l.norm_sqr() + m.norm_sqr())).exp()
    }))
}

/// Smallest singular value of a Gram section with its conditioning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularValue {
    pub value: f64,
    pub largest: f64,
    /// `value` is at the level of rounding noise relative to `largest`.
    pub rank_deficient: bool,
}

pub fn min_singular_value(points: &PointSet) -> Result<SingularValue> {
    let g = gram_matrix(points)?;
    let eig = hermitian_eigen(&g);
    let (Some(&lo), Some(&hi)) = (eig.values.first(), eig.values.last()) else {
        return Ok(SingularValue {
            value: 0.0,
            largest: 0.0,
            rank_deficient: true,
        });
    };
    // singular values of a PSD matrix are its eigenvalues; negative values
    // are rounding artefacts
    let value = lo.abs();
    Ok(SingularValue {
        value,
        largest: hi,
        rank_deficient: value <= 1e-13 * hi * (points.len() as f64),
    })
}

/// `#(Λ ∩ {|z| ≤ r})/(πr²)` for each radius.
pub fn upper_density(points: &PointSet, radii: &[f64]) -> Result<Vec<f64>> {
    for pair in radii.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
        }
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    Ok(radii
        .iter()
        .map(|&r| points.within(r).count() as f64 / (PI * r * r))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lattice() -> GeneratingFunction {
        generating_function(&GeneratorSpec::LatticeMinusOrigin).unwrap()
    }

    #[test]
    fn generating_function_examples() {
        let g = lattice();
        assert_eq!(g.eval(c(2.0, -1.0)), c(0.0, 0.0));
        assert!((g.eval(c(0.0, 0.0)) - 1.0).norm() < 1e-15);
        let s = generating_function(&GeneratorSpec::ShiftedLatticeMinusPoint(c(0.5, 0.5))).unwrap();
        assert_eq!(s.eval(c(0.5, 1.5)), c(0.0, 0.0));
        assert!(s.eval(c(0.5, 0.5)).norm() > 0.5);
        let p = generating_function(&GeneratorSpec::Perturbation {
            removed: alloc::vec![(1, 0)],
            added: alloc::vec![c(1.3, 0.0)],
        })
        .unwrap();
        assert_eq!(p.eval(c(1.3, 0.0)), c(0.0, 0.0));
        assert!(p.eval(c(1.0, 0.0)).norm() > 1e-3);
        assert!(p.spec().contains(c(1.3, 0.0)));
        assert!(!p.spec().contains(c(1.0, 0.0)));
    }

    #[test]
    fn perturbation_validation() {
        let bad = GeneratorSpec::Perturbation {
            removed: alloc::vec![],
            added: alloc::vec![c(2.0, 0.0)],
        };
        assert!(matches!(generating_function(&bad), Err(Error::InvalidPerturbation(_))));
        let many = GeneratorSpec::Perturbation {
            removed: (1..=5).map(|k| (k, 0)).collect(),
            added: (0..4).map(|k| c(0.5 + k as f64, 0.5)).collect(),
        };
        assert!(matches!(generating_function(&many), Err(Error::InvalidPerturbation(_))));
        let moved_back = GeneratorSpec::Perturbation {
            removed: alloc::vec![(1, 0)],
            added: alloc::vec![c(1.0, 0.0)],
        };
        let g = generating_function(&moved_back).unwrap();
        let e = g.biorth_element(FockPoint::new(c(1.0, 0.0))).unwrap();
        assert!((e.pairing(FockPoint::new(c(1.0, 0.0))) - 1.0).norm() < 1e-12);
    }

    /// Derivatives against a central difference on the generating function.
    #[test]
    fn closed_form_derivatives() {
        let specs = [
            GeneratorSpec::LatticeMinusOrigin,
            GeneratorSpec::ShiftedLatticeMinusPoint(c(0.5, 0.5)),
            GeneratorSpec::Perturbation {
                removed: alloc::vec![(1, 0), (0, 2)],
                added: alloc::vec![c(1.3, 0.0), c(-0.4, 0.6)],
            },
        ];
        for spec in &specs {
            let g = generating_function(spec).unwrap();
            for p in g.zeros_within(3.0).unwrap().points() {
                let lam = p.w;
                let h = 1e-5;
                let fd = (g.eval(lam + h) - g.eval(lam - h)) / (2.0 * h);
                let d = g.derivative(lam).unwrap();
                assert!(
                    (fd - d).norm() < 1e-7 * d.norm().max(1.0),
                    "{spec:?} at {lam}: {fd} vs {d}"
                );
            }
            assert!(matches!(g.derivative(c(0.25, 0.1)), Err(Error::NotAZero(_))));
        }
    }

    #[test]
    fn biorthogonality_exact_path() {
        let g = lattice();
        let pts = g.zeros_within(3.0).unwrap();
        for l in pts.points() {
            let e = g.biorth_element(*l).unwrap();
            for m in pts.points() {
                let v = e.pairing(*m);
                let expect = if l == m { 1.0 } else { 0.0 };
                assert!((v - expect).norm() < 1e-12);
            }
            // ‖k_w‖/|σ₀'(w)| = |w|
            let ratio = e.ln_scale().re.exp();
            assert!((ratio - l.w.norm()).abs() < 1e-10 * l.w.norm());
        }
    }

    #[test]
    fn kernel_coefficients_match_taylor_path() {
        let g = lattice();
        let a = c(0.3, 0.2);
        let s = FockFunction::kernel(a);
        for (m, n) in [(1, 0), (0, -1), (1, 1), (-2, 1)] {
            let w = FockPoint::from_lattice(m, n);
            let exact = coefficient(&s, &g, w).unwrap();
            let e = g.biorth_element(w).unwrap();
            assert!((exact.value - e.eval(a).conj()).norm() < 1e-14);
            let t = coefficient_taylor(&s, &e, TaylorPolicy::Degree(160)).unwrap();
            assert!(
                (t.value - exact.value).norm() < 1e-7,
                "{m},{n}: {} vs {}",
                t.value,
                exact.value
            );
            assert!((t.value - exact.value).norm() <= t.error_bound + 1e-12);
        }
        let zero = FockFunction::zero();
        assert_eq!(
            coefficient(&zero, &g, FockPoint::from_lattice(1, 0)).unwrap().value,
            c(0.0, 0.0)
        );
    }

    #[test]
    fn gram_examples() {
        let pts = PointSet::new(
            alloc::vec![FockPoint::new(c(0.0, 0.0)), FockPoint::new(c(1.0, 0.0))],
            1.0,
        )
        .unwrap();
        let g = gram_matrix(&pts).unwrap();
        assert!((g[(0, 0)] - 1.0).norm() < 1e-15);
        assert!((g[(0, 1)].norm() - (-PI / 2.0).exp()).abs() < 1e-15);
        let s = min_singular_value(&pts).unwrap();
        assert!((s.value - (1.0 - (-PI / 2.0).exp())).abs() < 1e-14);
        let one = PointSet::new(alloc::vec![FockPoint::new(c(2.0, 1.0))], 3.0).unwrap();
        assert!((min_singular_value(&one).unwrap().value - 1.0).abs() < 1e-15);
        let big = PointSet::lattice(26.0, &[]);
        assert!(matches!(gram_matrix(&big), Err(Error::TooManyPoints { .. })));
    }

    #[test]
    fn density_examples() {
        let full = PointSet::lattice(20.0, &[]);
        let d = upper_density(&full, &[5.0, 10.0, 20.0]).unwrap();
        assert!((d[2] - 1.0).abs() < 0.05);
        let half = PointSet::lattice_where(20.0, |m, _| m.rem_euclid(2) == 0);
        assert!((upper_density(&half, &[20.0]).unwrap()[0] - 0.5).abs() < 0.05);
        let empty = PointSet::new(Vec::new(), 10.0).unwrap();
        assert_eq!(upper_density(&empty, &[3.0]).unwrap(), alloc::vec![0.0]);
        assert!(upper_density(&full, &[3.0, 2.0]).is_err());
    }

    #[test]
    fn lattice_disjointness() {
        assert!(GeneratorSpec::ShiftedLatticeMinusPoint(c(0.5, 0.5))
            .check_disjoint_from_lattice()
            .is_ok());
        assert!(matches!(
            GeneratorSpec::LatticeMinusOrigin.check_disjoint_from_lattice(),
            Err(Error::LatticeCollision(_))
        ));
        assert!(GeneratorSpec::ShiftedLatticeMinusPoint(c(1.0, 0.0))
            .check_disjoint_from_lattice()
            .is_err());
    }
}
