//! Standard (Dirac) representation of the gamma matrices and spin operators.

use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4};

use crate::C64;

pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// The Dirac matrices in the block form where gamma0 = diag(1, 1, -1, -1).
#[derive(Debug, Clone)]
pub struct DiracMatrixSet {
    pub gamma0: Mat4,
    pub gamma: [Mat4; 3],
    pub alpha: [Mat4; 3],
    /// Spin matrices Sigma; the spin operator is Sigma / 2.
    pub sigma: [Mat4; 3],
    /// sigma^{mu nu} = i [gamma^mu, gamma^nu] / 2, indexed by (mu, nu) with 0 the time index.
    pub sigma_munu: [[Mat4; 4]; 4],
}

impl DiracMatrixSet {
    /// gamma^mu with mu = 0 the time component.
    pub fn gamma_mu(&self, mu: usize) -> &Mat4 {
        if mu == 0 {
            &self.gamma0
        } else {
            &self.gamma[mu - 1]
        }
    }
}

/// Minkowski metric with signature (+, -, -, -).
pub fn metric(mu: usize, nu: usize) -> f64 {
    match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    }
}

pub fn pauli_matrices() -> [Mat2; 3] {
    [Mat2::new(ZERO, ONE, ONE, ZERO), Mat2::new(ZERO, -I, I, ZERO), Mat2::new(ONE, ZERO, ZERO, -ONE)]
}

fn blocks(tl: &Mat2, tr: &Mat2, bl: &Mat2, br: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(tl);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(tr);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(bl);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(br);
    m
}

pub fn build_dirac_matrices() -> DiracMatrixSet {
    let s = pauli_matrices();
    let id = Mat2::identity();
    let zero = Mat2::zeros();

    let gamma0 = blocks(&id, &zero, &zero, &(-id));
    let gamma = s.map(|si| blocks(&zero, &si, &(-si), &zero));
    let alpha = gamma.map(|g| gamma0 * g);

    // Sigma^i = (i/2) eps^{ijk} gamma^j gamma^k = i gamma^j gamma^k for cyclic (i, j, k).
    let sigma = [0usize, 1, 2].map(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        gamma[j] * gamma[k] * I
    });

    let gmu = |mu: usize| if mu == 0 { gamma0 } else { gamma[mu - 1] };
    let mut sigma_munu = [[Mat4::zeros(); 4]; 4];
    for (mu, row) in sigma_munu.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            *entry = (gmu(mu) * gmu(nu) - gmu(nu) * gmu(mu)) * (I * 0.5);
        }
    }

    DiracMatrixSet { gamma0, gamma, alpha, sigma, sigma_munu }
}

/// Shared instance of the standard representation.
pub fn dirac() -> &'static DiracMatrixSet {
    static SET: OnceLock<DiracMatrixSet> = OnceLock::new();
    SET.get_or_init(build_dirac_matrices)
}

/// Spin-half rotation exp(-i theta Sigma_y / 2) about the y axis.
pub fn spin_rotation_y(theta: f64) -> Mat4 {
    let (s, c) = (0.5 * theta).sin_cos();
    Mat4::identity() * C64::new(c, 0.0) - dirac().sigma[1] * C64::new(0.0, s)
}

/// Largest entrywise modulus of a 4x4 matrix.
pub fn max_abs4(m: &Mat4) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
