//! Dense Hermitian eigensolver and matrix products, delegated to faer.

use faer::{Mat, Side};

use crate::{CMatrix, C64};

fn to_faer(a: &CMatrix) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
/// Only the lower triangle is read.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = to_faer(a).self_adjoint_eigen(Side::Lower).expect("Hermitian eigensolver failed to converge");
    let values = (0..a.nrows()).map(|i| eig.S()[i].re).collect();
    (values, from_faer(eig.U()))
}

/// a * b
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let out = to_faer(a) * to_faer(b);
    from_faer(out.as_ref())
}

/// a^dag * b
pub fn matmul_adj(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let out = to_faer(a).adjoint() * to_faer(b);
    from_faer(out.as_ref())
}
