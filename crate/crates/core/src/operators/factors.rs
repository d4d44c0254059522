//! Single-factor matrices: longitudinal (z) and transverse (x, y) position and
//! momentum operators between the functions that make up a primitive basis.

use std::f64::consts::PI;

use crate::landau::{pi_ladder, radial_moment, Orbital};
use crate::{CMatrix, C64};

/// Longitudinal functions: periodic plane waves or oscillator (Hermite) functions.
#[derive(Debug, Clone, PartialEq)]
pub enum ZFunctions {
    /// e^{i k z} / sqrt(d) with k = 2 pi n_z / d for n_z in [-n_max, n_max].
    PlaneWaves { d: f64, n_max: u32 },
    /// Hermite functions of length `ell`, quanta 0..=j_max.
    Oscillator { ell: f64, j_max: u32 },
}

#[derive(Debug, Clone)]
pub struct ZTable {
    pub functions: ZFunctions,
    /// Label per index: n_z for plane waves, quanta for oscillator functions.
    pub labels: Vec<i64>,
    pub z: CMatrix,
    pub pz: CMatrix,
}

impl ZTable {
    pub fn new(functions: ZFunctions) -> Self {
        match functions {
            ZFunctions::PlaneWaves { d, n_max } => {
                let labels: Vec<i64> = (-(n_max as i64)..=n_max as i64).collect();
                let k = |n: i64| 2.0 * PI * n as f64 / d;
                let dim = labels.len();
                // <n'| z |n> = \int z e^{i(k_n - k_n') z} dz / d over [-d/2, d/2)
                //            = (-1)^{n - n'} / (i (k_n - k_n')), zero on the diagonal.
                let z = CMatrix::from_fn(dim, dim, |r, c| {
                    if r == c {
                        C64::new(0.0, 0.0)
                    } else {
                        let dn = labels[c] - labels[r];
                        let sign = if dn % 2 == 0 { 1.0 } else { -1.0 };
                        C64::new(0.0, -sign / (k(labels[c]) - k(labels[r])))
                    }
                });
                let pz =
                    CMatrix::from_fn(
                        dim,
                        dim,
                        |r, c| {
                            if r == c {
                                C64::new(k(labels[r]), 0.0)
                            } else {
                                C64::new(0.0, 0.0)
                            }
                        },
                    );
                Self { functions, labels, z, pz }
            }
            ZFunctions::Oscillator { ell, j_max } => {
                let dim = j_max as usize + 1;
                let labels = (0..dim as i64).collect();
                let mut z = CMatrix::zeros(dim, dim);
                let mut pz = CMatrix::zeros(dim, dim);
                for j in 0..dim - 1 {
                    let root = ((j + 1) as f64 / 2.0).sqrt();
                    z[(j + 1, j)] = C64::new(ell * root, 0.0);
                    z[(j, j + 1)] = C64::new(ell * root, 0.0);
                    pz[(j + 1, j)] = C64::new(0.0, root / ell);
                    pz[(j, j + 1)] = C64::new(0.0, -root / ell);
                }
                Self { functions, labels, z, pz }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Quanta carried by a longitudinal function (zero for plane waves).
    pub fn quanta(&self, index: usize) -> u32 {
        match self.functions {
            ZFunctions::PlaneWaves { .. } => 0,
            ZFunctions::Oscillator { .. } => self.labels[index] as u32,
        }
    }
}

/// Transverse Landau orbitals with exact position and canonical-momentum matrix elements.
#[derive(Debug, Clone)]
pub struct OrbitalTable {
    pub alpha: f64,
    pub charge_sign: i8,
    pub orbitals: Vec<Orbital>,
    pub x: CMatrix,
    pub y: CMatrix,
    pub px: CMatrix,
    pub py: CMatrix,
}

impl OrbitalTable {
    pub fn new(orbitals: Vec<Orbital>, alpha: f64, charge_sign: i8) -> Self {
        let dim = orbitals.len();
        let index = |o: Orbital| orbitals.iter().position(|&q| q == o);
        let mut x = CMatrix::zeros(dim, dim);
        let mut y = CMatrix::zeros(dim, dim);
        for (c, &oc) in orbitals.iter().enumerate() {
            for (r, &or) in orbitals.iter().enumerate() {
                let dm = or.m - oc.m;
                if dm.abs() != 1 {
                    continue;
                }
                let radial = radial_moment(or, oc, 1, alpha);
                x[(r, c)] = C64::new(0.5 * radial, 0.0);
                // sin(phi) = (e^{i phi} - e^{-i phi}) / 2i
                y[(r, c)] = C64::new(0.0, -0.5 * radial * dm as f64);
            }
        }
        let mut pi_plus = CMatrix::zeros(dim, dim);
        let mut pi_minus = CMatrix::zeros(dim, dim);
        for (c, &oc) in orbitals.iter().enumerate() {
            if let Some((coef, target)) = pi_ladder(true, oc, charge_sign, alpha) {
                if let Some(r) = index(target) {
                    pi_plus[(r, c)] = coef;
                }
            }
            if let Some((coef, target)) = pi_ladder(false, oc, charge_sign, alpha) {
                if let Some(r) = index(target) {
                    pi_minus[(r, c)] = coef;
                }
            }
        }
        let half = C64::new(0.5, 0.0);
        let pi_x = (&pi_plus + &pi_minus) * half;
        let pi_y = (&pi_plus - &pi_minus) * C64::new(0.0, -0.5);
        let coupling = C64::new(charge_sign as f64 * alpha * alpha, 0.0);
        let px = pi_x - &y * coupling;
        let py = pi_y + &x * coupling;
        Self { alpha, charge_sign, orbitals, x, y, px, py }
    }

    pub fn dim(&self) -> usize {
        self.orbitals.len()
    }

    /// All orbitals with 2n + |m| <= max_quanta, ordered by (m, n).
    pub fn shell_orbitals(max_quanta: u32) -> Vec<Orbital> {
        let q = max_quanta as i32;
        let mut out = Vec::new();
        for m in -q..=q {
            let mut n = 0u32;
            while 2 * n + m.unsigned_abs() <= max_quanta {
                out.push(Orbital::new(n, m));
                n += 1;
            }
        }
        out
    }
}
