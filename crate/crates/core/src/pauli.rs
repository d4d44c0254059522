//! Dirac-Pauli Hamiltonian with an anomalous magnetic moment in the rotating field.
//!
//! H(t) = alpha.(p - qA(t)) + beta - mu_a beta Sigma.B(t) + i mu_a gamma.E(t), with
//! E(t) = -(1/2) dB/dt x r. The field magnitude is taken as B = b (unit reference
//! charge), so for a neutral particle `b` still sets the field strength while the
//! charge coupling is switched off.

use crate::error::{Error, Result};
use crate::evolution::w_diagonal;
use crate::landau::PhysicalConfig;
use crate::operators::{
    diagonalize, hamiltonian_terms, max_abs, EigenSolution, ModeBasis, OperatorMatrix, PlaneOp, Term, ZOp,
};
use crate::spinor::dirac;
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliConfig {
    pub base: PhysicalConfig,
    pub mu_a: f64,
    /// +1, -1, or 0 for a neutral particle.
    pub charge: i8,
}

impl PauliConfig {
    pub fn new(base: PhysicalConfig, mu_a: f64, charge: i8) -> Result<Self> {
        base.validate()?;
        if !matches!(charge, -1..=1) {
            return Err(Error::InvalidConfig(format!("charge must be -1, 0 or +1, got {charge}")));
        }
        if !mu_a.is_finite() {
            return Err(Error::InvalidConfig("mu_a must be finite".into()));
        }
        Ok(Self { base, mu_a, charge })
    }

    fn coupling(&self) -> f64 {
        self.charge as f64 * 0.5 * self.base.b
    }
}

/// Kronecker terms of the Dirac-Pauli Hamiltonian at time t.
pub fn pauli_terms(t: f64, pcfg: &PauliConfig) -> Vec<Term> {
    let d = dirac();
    let cfg = &pcfg.base;
    let n = cfg.field_direction(t);
    let mut terms = hamiltonian_terms(n, pcfg.coupling());
    if pcfg.mu_a == 0.0 {
        return terms;
    }
    let field = cfg.b;
    for (axis, &ni) in n.iter().enumerate() {
        if ni != 0.0 {
            terms.push(Term::new(d.gamma0 * d.sigma[axis], ZOp::One, PlaneOp::One, -pcfg.mu_a * field * ni));
        }
    }
    // dn/dt has no z component.
    let (st, _) = cfg.theta_b.sin_cos();
    let (sw, cw) = (cfg.omega * t).sin_cos();
    let ndot = [-cfg.omega * st * sw, cfg.omega * st * cw];
    let k = 0.5 * pcfg.mu_a * field;
    let ig = |axis: usize| d.gamma[axis] * C64::new(0.0, 1.0);
    let efield = [
        Term::new(ig(0), ZOp::Z, PlaneOp::One, -k * ndot[1]),
        Term::new(ig(1), ZOp::Z, PlaneOp::One, k * ndot[0]),
        Term::new(ig(2), ZOp::One, PlaneOp::Y, -k * ndot[0]),
        Term::new(ig(2), ZOp::One, PlaneOp::X, k * ndot[1]),
    ];
    terms.extend(efield.into_iter().filter(|t| t.coef.norm() != 0.0));
    terms
}

fn check_basis(basis: &ModeBasis, pcfg: &PauliConfig) -> Result<()> {
    pcfg.base.validate()?;
    if basis.cfg.b != pcfg.base.b || basis.cfg.d != pcfg.base.d {
        return Err(Error::ConfigMismatch);
    }
    if pcfg.charge != 0 && pcfg.charge != basis.cfg.charge_sign {
        return Err(Error::ConfigMismatch);
    }
    Ok(())
}

pub fn h_pauli_matrix(t: f64, basis: &ModeBasis, pcfg: &PauliConfig) -> Result<OperatorMatrix> {
    check_basis(basis, pcfg)?;
    Ok(OperatorMatrix {
        entries: basis.project(&pauli_terms(t, pcfg)),
        basis_labels: basis.labels.clone(),
        hermitian: true,
    })
}

/// max_t |W(t)^dag H(t) W(t) - H(0)|_max over the sampled times.
pub fn verify_pauli_invariance(times: &[f64], basis: &ModeBasis, pcfg: &PauliConfig) -> Result<f64> {
    let h0 = h_pauli_matrix(0.0, basis, pcfg)?.entries;
    let mj = basis.mj();
    let mut worst: f64 = 0.0;
    for &t in times {
        let ht = h_pauli_matrix(t, basis, pcfg)?.entries;
        let w = w_diagonal(t, &mj, pcfg.base.omega);
        let back = CMatrix::from_fn(ht.nrows(), ht.ncols(), |r, c| w[r].conj() * ht[(r, c)] * w[c]);
        worst = worst.max(max_abs(&(back - &h0)));
    }
    Ok(worst)
}

/// Spectrum of H_pauli(0) - omega J_z in the truncated basis (exploratory).
pub fn diagonalize_pauli_heff(basis: &ModeBasis, pcfg: &PauliConfig) -> Result<EigenSolution> {
    let mut h = h_pauli_matrix(0.0, basis, pcfg)?.entries;
    for (i, mj) in basis.mj().iter().enumerate() {
        h[(i, i)] -= C64::new(pcfg.base.omega * mj, 0.0);
    }
    Ok(diagonalize(&h))
}
