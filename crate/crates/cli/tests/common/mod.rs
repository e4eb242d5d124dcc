//! Reference implementations used only by the tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

/// `θ₁(v, e^{−π})` and its `v`-derivative. Terms peak near `n ≈ |Im v|/π`
/// and are negligible six steps beyond.
pub fn theta1(v: C64) -> (C64, C64) {
    let mut s = C64::new(0.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    let terms = (v.im.abs() / PI).ceil() as usize + 7;
    for n in 0..terms {
        let k = (2 * n + 1) as f64;
        let a = (-PI * (n as f64 + 0.5).powi(2)).exp() * if n % 2 == 0 { 2.0 } else { -2.0 };
        s += a * (v * k).sin();
        d += a * k * (v * k).cos();
    }
    (s, d)
}

fn theta1_prime_zero() -> f64 {
    theta1(C64::new(0.0, 0.0)).1.re
}

/// Weierstrass σ of `ℤ + iℤ` through the theta series.
pub fn sigma(z: C64) -> C64 {
    (0.5 * PI * z * z).exp() * theta1(PI * z).0 / (PI * theta1_prime_zero())
}

/// `σ'(w)` at a lattice point `w`.
pub fn sigma_prime_at_zero(w: C64) -> C64 {
    (0.5 * PI * w * w).exp() * theta1(PI * w).1 / theta1_prime_zero()
}

pub fn lattice_distance(z: C64) -> f64 {
    (z - C64::new(z.re.round(), z.im.round())).norm()
}

pub fn growth_ratio(z: C64) -> f64 {
    sigma(z).norm() * (-0.5 * PI * z.norm_sqr()).exp() / lattice_distance(z)
}

/// `F_λ(z) = ‖k_λ‖·G(z)/((z − λ)G'(λ))` for `G = σ(z)/z`, valid off `λ`.
pub fn lattice_biorth(lambda: C64, z: C64) -> C64 {
    let g = sigma(z) / z;
    let gp = sigma_prime_at_zero(lambda) / lambda;
    (0.5 * PI * lambda.norm_sqr()).exp() * g / ((z - lambda) * gp)
}

/// `F_λ(λ)` as the mean of `F_λ` over a small circle.
pub fn lattice_biorth_at_pole(lambda: C64) -> C64 {
    let n = 32;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let z = lambda + C64::from_polar(0.25, 2.0 * PI * k as f64 / n as f64);
        acc += lattice_biorth(lambda, z);
    }
    acc / n as f64
}

/// Lattice points `m + in` with `0 < |m + in| ≤ r`.
pub fn lattice_points(r: f64) -> Vec<C64> {
    let k = r.floor() as i64;
    let mut out = Vec::new();
    for m in -k..=k {
        for n in -k..=k {
            let w = C64::new(m as f64, n as f64);
            if (m, n) != (0, 0) && w.norm() <= r {
                out.push(w);
            }
        }
    }
    out
}

/// `‖Σ c_j k_{a_j}‖`.
pub fn kernel_norm(parts: &[(C64, C64)]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for &(c, a) in parts {
        for &(d, b) in parts {
            s += c * d.conj() * (PI * a.conj() * b).exp();
        }
    }
    s.re.sqrt()
}

/// Sup of `|b_w|²/(‖S‖²log(1 + |w|))` over `2 ≤ |w| ≤ r` for the lattice
/// system, with `b_w = Σ c_j conj(F_w(a_j))`.
pub fn coeff_bound(parts: &[(C64, C64)], r: f64) -> f64 {
    let n2 = kernel_norm(parts).powi(2);
    lattice_points(r)
        .into_iter()
        .filter(|w| w.norm() >= 2.0)
        .map(|w| {
            let b: C64 = parts.iter().map(|&(c, a)| c * lattice_biorth(w, a).conj()).sum();
            b.norm_sqr() / (n2 * (1.0 + w.norm()).ln())
        })
        .fold(0.0, f64::max)
}

/// Lower-triangular `L` with `A = L·L*` for a Hermitian positive definite
/// matrix stored row-major.
pub fn cholesky(a: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            if i == j {
                assert!(s.re > 0.0, "matrix is not positive definite");
                l[i][i] = C64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j].re;
            }
        }
    }
    l
}

/// Solves `L·L*·x = b`.
pub fn cholesky_solve(l: &[Vec<C64>], b: &[C64]) -> Vec<C64> {
    let n = l.len();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i][k] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i][i].re;
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let t = l[k][i].conj() * y[k];
            y[i] -= t;
        }
        y[i] /= l[i][i].re;
    }
    y
}

/// `⟨k̂_λ, k̂_μ⟩ = e^{π·conj(λ)μ − π|λ|²/2 − π|μ|²/2}` for row `λ`, column `μ`.
pub fn normalized_gram(points: &[C64]) -> Vec<Vec<C64>> {
    points
        .iter()
        .map(|l| {
            points
                .iter()
                .map(|m| (PI * l.conj() * m - 0.5 * PI * (l.norm_sqr() + m.norm_sqr())).exp())
                .collect()
        })
        .collect()
}

/// Smallest eigenvalue of a Hermitian positive definite matrix by inverse
/// iteration with a Rayleigh-quotient estimate.
pub fn min_eigenvalue(a: &[Vec<C64>]) -> f64 {
    let n = a.len();
    let l = cholesky(a);
    let mut x: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + 0.01 * i as f64, 0.3 - 0.002 * i as f64))
        .collect();
    for _ in 0..400 {
        let y = cholesky_solve(&l, &x);
        let norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
    }
    let ax: Vec<C64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * x[j]).sum()).collect();
    x.iter().zip(&ax).map(|(u, v)| (u.conj() * v).re).sum()
}
