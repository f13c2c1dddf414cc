//! Small dense complex matrix helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&v| c(v, 0.0)))
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending
/// order with matching eigenvector columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    eigh(m).0
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigvalsh(m).last().copied().unwrap_or(0.0)
}

/// `V f(Λ) V†` for a Hermitian matrix `V Λ V†`.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for k in 0..n {
        let s = f(vals[k]);
        for r in 0..n {
            scaled[(r, k)] *= s;
        }
    }
    scaled * vecs.adjoint()
}

/// Square root of a PSD matrix; negative eigenvalues from drift are clipped to 0.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |v| v.max(0.0).sqrt())
}

/// Inverse square root, or `None` when the smallest eigenvalue is below `floor`.
pub fn psd_inverse_sqrt(m: &CMatrix, floor: f64) -> Option<CMatrix> {
    if min_eigenvalue(m) < floor {
        return None;
    }
    Some(hermitian_map(m, |v| 1.0 / v.sqrt()))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// `Tr_B ρ` for `ρ` on `C^{d_a} ⊗ C^{d_b}` (row index `i * d_b + j`).
pub fn partial_trace_b(rho: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |i, k| {
        (0..d_b).map(|j| rho[(i * d_b + j, k * d_b + j)]).sum()
    })
}

/// `Tr_A ρ` for `ρ` on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace_a(rho: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_b, d_b, |j, l| {
        (0..d_a).map(|i| rho[(i * d_b + j, i * d_b + l)]).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_descending_and_reconstructs() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -2.0), c(0.0, 2.0), c(3.0, 0.0)]);
        let (vals, vecs) = eigh(&m);
        assert!(vals[0] >= vals[1]);
        let d = CMatrix::from_diagonal(&CVector::from_iterator(2, vals.iter().map(|&v| c(v, 0.0))));
        let back = &vecs * d * vecs.adjoint();
        assert!(max_abs_diff(&back, &m) < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 1.0), c(0.7, -0.1)],
        );
        let p = &a * a.adjoint();
        let r = psd_sqrt(&p);
        assert!(max_abs_diff(&(&r * &r), &p) < 1e-12);
        let inv = psd_inverse_sqrt(&p, 1e-10).unwrap();
        assert!(max_abs_diff(&(&inv * &p * &inv), &identity(2)) < 1e-12);
        assert!(psd_inverse_sqrt(&CMatrix::zeros(2, 2), 1e-10).is_none());
    }

    #[test]
    fn partial_traces_of_product() {
        let a = real_matrix(2, 2, &[0.75, 0.0, 0.0, 0.25]);
        let b = real_matrix(3, 3, &[0.5, 0.1, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0, 0.2]);
        let rho = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace_b(&rho, 2, 3), &a) < 1e-15);
        assert!(max_abs_diff(&partial_trace_a(&rho, 2, 3), &b) < 1e-15);
    }
}
