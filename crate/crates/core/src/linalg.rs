//! Hermitian eigen-solves on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, ordered like `values`.
    pub vectors: DMatrix<C64>,
}

pub fn hermitian_eigen(m: &DMatrix<C64>) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Solution of a Hermitian positive semidefinite system `G·x = b`.
#[derive(Debug, Clone)]
pub struct PsdSolve {
    pub x: DVector<C64>,
    /// λ_max/λ_min of `G` (infinite when λ_min ≤ 0).
    pub condition: f64,
    /// Tikhonov shift that was added to every eigenvalue (0 if none).
    pub regularization: f64,
}

/// Solves `G·x = b` spectrally. When the smallest eigenvalue falls below
/// `rel_floor·λ_max`, the system `(G + εI)·x = b` with `ε = rel_floor·λ_max`
/// is solved instead.
pub fn solve_psd(g: &DMatrix<C64>, b: &DVector<C64>, rel_floor: f64) -> PsdSolve {
    let eig = hermitian_eigen(g);
    let n = eig.values.len();
    if n == 0 {
        return PsdSolve {
            x: DVector::zeros(0),
            condition: 1.0,
            regularization: 0.0,
        };
    }
    let lmax = eig.values[n - 1].max(0.0);
    let lmin = eig.values[0];
    let condition = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    let eps = rel_floor * lmax;
    let regularization = if lmin < eps { eps } else { 0.0 };
    let v = &eig.vectors;
    let proj = v.adjoint() * b;
    let scaled = DVector::from_fn(n, |i, _| {
        let l = eig.values[i].max(0.0) + regularization;
        if l > 0.0 {
            proj[i] / l
        } else {
            C64::new(0.0, 0.0)
        }
    });
    PsdSolve {
        x: v * scaled,
        condition,
        regularization,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_eigenvalues() {
        let c = C64::new(0.3, 0.4);
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), c, c.conj(), C64::new(1.0, 0.0)]);
        let e = hermitian_eigen(&m);
        assert!((e.values[0] - 0.5).abs() < 1e-14);
        assert!((e.values[1] - 1.5).abs() < 1e-14);
        let r = &e.vectors
            * DMatrix::from_diagonal(&DVector::from_fn(2, |i, _| C64::new(e.values[i], 0.0)))
            * e.vectors.adjoint();
        assert!((r - m).norm() < 1e-14);
    }

    #[test]
    fn solve_and_regularize() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        );
        let b = DVector::from_row_slice(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let s = solve_psd(&m, &b, 1e-12);
        assert_eq!(s.regularization, 0.0);
        assert!((&m * &s.x - &b).norm() < 1e-14);
        assert!((s.condition - 3.0).abs() < 1e-12);
        let singular = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        let s = solve_psd(&singular, &b, 1e-12);
        assert!(s.regularization > 0.0);
        assert!(s.x.iter().all(|v| v.re.is_finite()));
    }
}
