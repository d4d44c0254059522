//! Rotating-frame time evolution and cyclic-state phases.
//!
//! With W(t) = exp(-i omega t J_z) the Schrodinger equation for H(t) = W H(0) W^dag
//! reduces to the time-independent H_eff = H(0) - omega J_z, so
//! U(t) = W(t) exp(-i H_eff t). W(T) = -1 on half-odd-integer m_j, which makes every
//! eigenvector of H_eff a cyclic state with total phase -E T - pi.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::matmul;
use crate::operators::{diagonalize, EigenSolution, OperatorMatrix, TiltedSystem};
use crate::{CMatrix, CVector, C64};

/// Angles this close to -pi are treated as sitting on the cut and reported as +pi.
const BRANCH_SLACK: f64 = 1e-13;

/// Reduce an angle to the branch (-pi, pi].
pub fn reduce_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI + BRANCH_SLACK {
        y - 2.0 * PI
    } else {
        y.min(PI)
    }
}

/// Distance between two angles on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    reduce_phase(a - b).abs()
}

/// Slow-rotation geometric phase -m_j Omega_B with Omega_B = 2 pi (1 - cos theta).
pub fn solid_angle_phase(mj: f64, theta_b: f64) -> f64 {
    reduce_phase(-mj * solid_angle(theta_b))
}

pub fn solid_angle(theta_b: f64) -> f64 {
    2.0 * PI * (1.0 - theta_b.cos())
}

/// Diagonal of W(t).
pub fn w_diagonal(t: f64, mj: &[f64], omega: f64) -> Vec<C64> {
    mj.iter().map(|&m| C64::from_polar(1.0, -omega * t * m)).collect()
}

pub fn w_matrix(t: f64, mj: &[f64], omega: f64) -> OperatorMatrix {
    let d = DVector::from_vec(w_diagonal(t, mj, omega));
    OperatorMatrix { entries: CMatrix::from_diagonal(&d), basis_labels: Vec::new(), hermitian: false }
}

/// W(t) H(0) W(t)^dag, built from diagonal sandwiches.
pub fn rotate_hamiltonian(h0: &CMatrix, t: f64, mj: &[f64], omega: f64) -> CMatrix {
    let w = w_diagonal(t, mj, omega);
    CMatrix::from_fn(h0.nrows(), h0.ncols(), |r, c| w[r] * h0[(r, c)] * w[c].conj())
}

/// Closed-form propagator U(t) = W(t) exp(-i H_eff t) from one spectral decomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub spectrum: EigenSolution,
    pub mj: Vec<f64>,
    pub omega: f64,
}

impl Propagator {
    pub fn new(heff: &CMatrix, mj: &[f64], omega: f64) -> Self {
        Self { spectrum: diagonalize(heff), mj: mj.to_vec(), omega }
    }

    pub fn from_system(sys: &TiltedSystem) -> Self {
        Self { spectrum: sys.eigen.clone(), mj: sys.mj.clone(), omega: sys.cfg.omega }
    }

    pub fn evolve(&self, psi0: &CVector, t: f64) -> CVector {
        let v = &self.spectrum.vectors;
        let mut coeffs = v.adjoint() * psi0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= C64::from_polar(1.0, -self.spectrum.values[k] * t);
        }
        let mut out = v * coeffs;
        for (c, w) in out.iter_mut().zip(w_diagonal(t, &self.mj, self.omega)) {
            *c *= w;
        }
        out
    }
}

pub fn evolve_closed_form(psi0: &CVector, t: f64, propagator: &Propagator) -> CVector {
    propagator.evolve(psi0, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-12, initial_step: 1e-3, min_step: 1e-12, max_steps: 50_000_000 }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B_LOW: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Adaptive Dormand-Prince state for i d/dt psi = H(t) psi with
/// H(t) = W(t) H(0) W(t)^dag, advancing every column of the state at once.
struct Stepper<'a> {
    h0: &'a CMatrix,
    mj: &'a [f64],
    omega: f64,
    opts: &'a IntegratorOptions,
    t: f64,
    y: CMatrix,
    k1: CMatrix,
    h: f64,
    err_prev: f64,
    steps: usize,
}

impl<'a> Stepper<'a> {
    fn new(psi0: &CMatrix, h0: &'a CMatrix, mj: &'a [f64], omega: f64, opts: &'a IntegratorOptions) -> Self {
        let mut s = Self {
            h0,
            mj,
            omega,
            opts,
            t: 0.0,
            y: psi0.clone(),
            k1: CMatrix::zeros(0, 0),
            h: opts.initial_step,
            err_prev: 1e-4,
            steps: 0,
        };
        s.k1 = s.rhs(0.0, psi0);
        s
    }

    fn rhs(&self, t: f64, y: &CMatrix) -> CMatrix {
        let w = w_diagonal(t, self.mj, self.omega);
        let mut u = y.clone();
        for (r, wr) in w.iter().enumerate() {
            let wc = wr.conj();
            u.row_mut(r).iter_mut().for_each(|z| *z *= wc);
        }
        let mut out = matmul(self.h0, &u);
        let minus_i = C64::new(0.0, -1.0);
        for (r, wr) in w.iter().enumerate() {
            let f = *wr * minus_i;
            out.row_mut(r).iter_mut().for_each(|z| *z *= f);
        }
        out
    }

    /// Integrate from the current time to `t_end` (either direction), landing on it exactly.
    fn advance_to(&mut self, t_end: f64) -> Result<()> {
        if t_end == self.t {
            return Ok(());
        }
        let direction = (t_end - self.t).signum();
        self.h = self.h.abs() * direction;
        let beta = 0.04;
        let alpha = 0.2 - 0.75 * beta;
        while (t_end - self.t) * direction > 0.0 {
            if self.steps >= self.opts.max_steps {
                return Err(Error::StepFailure { t: self.t });
            }
            self.steps += 1;
            let (t, h) = (self.t, self.h);
            let landing = (t + h - t_end) * direction >= 0.0;
            let h = if landing { t_end - t } else { h };
            let mut k: Vec<CMatrix> = Vec::with_capacity(7);
            k.push(self.k1.clone());
            for s in 1..7 {
                let mut stage = self.y.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        stage += kj * C64::new(h * A[s][j], 0.0);
                    }
                }
                k.push(self.rhs(t + C[s] * h, &stage));
            }
            // Fifth-order solution uses the last tableau row (first-same-as-last).
            let mut y_new = self.y.clone();
            for j in 0..6 {
                if A[6][j] != 0.0 {
                    y_new += &k[j] * C64::new(h * A[6][j], 0.0);
                }
            }
            let mut err_vec = CMatrix::zeros(self.y.nrows(), self.y.ncols());
            for j in 0..7 {
                let bj = if j < 6 { A[6][j] } else { 0.0 };
                let e = bj - B_LOW[j];
                if e != 0.0 {
                    err_vec += &k[j] * C64::new(h * e, 0.0);
                }
            }
            let mut acc = 0.0;
            for (idx, e) in err_vec.iter().enumerate() {
                let scale = self.opts.atol + self.opts.rtol * self.y[idx].norm().max(y_new[idx].norm());
                acc += (e.norm() / scale).powi(2);
            }
            let err = (acc / err_vec.len() as f64).sqrt();

            let mut next = h;
            if err <= 1.0 {
                self.t = if landing { t_end } else { t + h };
                self.y = y_new;
                self.k1 = k.swap_remove(6);
                let fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-alpha) * self.err_prev.powf(beta) };
                next *= fac.clamp(0.2, 5.0);
                self.err_prev = err.max(1e-4);
                // A shortened landing step says nothing about the controller's preferred size.
                if landing {
                    next = next.abs().max(self.h.abs()) * direction;
                }
            } else {
                next *= (0.9 * err.powf(-alpha)).clamp(0.2, 1.0);
            }
            if next.abs() < self.opts.min_step {
                return Err(Error::StepFailure { t: self.t });
            }
            self.h = next;
        }
        Ok(())
    }
}

/// Adaptive Dormand-Prince integration of i d/dt psi = H(t) psi from t = 0 to `t_end`
/// with H(t) = W(t) H(0) W(t)^dag, for every column of `psi0` at once.
pub fn brute_force_evolve_many(
    psi0: &CMatrix,
    t_end: f64,
    h0: &CMatrix,
    mj: &[f64],
    omega: f64,
    opts: &IntegratorOptions,
) -> Result<CMatrix> {
    let mut stepper = Stepper::new(psi0, h0, mj, omega, opts);
    stepper.advance_to(t_end)?;
    Ok(stepper.y)
}

/// States at each of the nondecreasing sample times, from one continuous integration.
pub fn brute_force_samples(
    psi0: &CMatrix,
    times: &[f64],
    h0: &CMatrix,
    mj: &[f64],
    omega: f64,
    opts: &IntegratorOptions,
) -> Result<Vec<CMatrix>> {
    let mut stepper = Stepper::new(psi0, h0, mj, omega, opts);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        stepper.advance_to(t)?;
        out.push(stepper.y.clone());
    }
    Ok(out)
}

pub fn brute_force_evolve(
    psi0: &CVector,
    t_end: f64,
    h0: &CMatrix,
    mj: &[f64],
    omega: f64,
    opts: &IntegratorOptions,
) -> Result<CVector> {
    let m = CMatrix::from_column_slice(psi0.len(), 1, psi0.as_slice());
    let out = brute_force_evolve_many(&m, t_end, h0, mj, omega, opts)?;
    Ok(out.column(0).into_owned())
}

/// Phases of one cyclic state over a period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    /// Eigenvalue of H_eff.
    pub energy: f64,
    pub jz_expect: f64,
    pub period: f64,
    /// Total phase: argument of <psi(0)|psi(T)>, reduced.
    pub delta: f64,
    /// Dynamic phase -T <H(0)>, unreduced.
    pub beta_unreduced: f64,
    pub beta: f64,
    /// Geometric phase delta - beta, reduced.
    pub gamma: f64,
    pub solid_angle: f64,
    /// <H(t)>, constant along the cyclic solution.
    pub h_expect: f64,
    /// max_t |<H(t)> - <H(0)>| over sampled times.
    pub h_drift: f64,
    /// |psi(T) - e^{i(-E T - pi)} psi(0)|.
    pub cyclic_defect: f64,
}

impl PhaseReport {
    /// -E T - pi reduced.
    pub fn delta_formula(&self) -> f64 {
        reduce_phase(-self.energy * self.period - PI)
    }

    /// -pi + 2 pi <j_z> reduced.
    pub fn gamma_formula(&self) -> f64 {
        reduce_phase(-PI + 2.0 * PI * self.jz_expect)
    }

    /// |delta - beta - gamma| on the circle.
    pub fn decomposition_defect(&self) -> f64 {
        phase_distance(self.delta - self.beta_unreduced, self.gamma)
    }
}

const PHASE_RESIDUAL_LIMIT: f64 = 1e-9;

/// Phase bookkeeping for an eigenpair of H_eff, measured on the evolved state.
pub fn phase_report(energy: f64, vector: &CVector, sys: &TiltedSystem, propagator: &Propagator) -> Result<PhaseReport> {
    let h0 = &sys.h0;
    let omega = propagator.omega;
    let mj = &propagator.mj;
    let heff_v = {
        let mut hv = h0 * vector;
        for (i, c) in hv.iter_mut().enumerate() {
            *c -= vector[i] * C64::new(omega * mj[i], 0.0);
        }
        hv
    };
    let residual = (heff_v - vector * C64::new(energy, 0.0)).norm();
    if residual > PHASE_RESIDUAL_LIMIT {
        return Err(Error::ResidualTooLarge { residual, limit: PHASE_RESIDUAL_LIMIT });
    }
    let period = 2.0 * PI / omega;
    let jz_expect: f64 = vector.iter().zip(mj).map(|(c, m)| c.norm_sqr() * m).sum();
    let psi_t = propagator.evolve(vector, period);
    let delta = vector.dotc(&psi_t).arg();
    let cyclic = C64::from_polar(1.0, -energy * period - PI);
    let cyclic_defect = (&psi_t - vector * cyclic).norm();

    let expect = |t: f64| {
        let psi = propagator.evolve(vector, t);
        let h = rotate_hamiltonian(h0, t, mj, omega);
        psi.dotc(&(h * &psi)).re
    };
    let h_expect = expect(0.0);
    let h_drift = (1..=4).map(|k| (expect(period * k as f64 / 4.0) - h_expect).abs()).fold(0.0, f64::max);
    let beta_unreduced = -period * h_expect;
    let gamma = reduce_phase(delta - beta_unreduced);
    Ok(PhaseReport {
        energy,
        jz_expect,
        period,
        delta,
        beta_unreduced,
        beta: reduce_phase(beta_unreduced),
        gamma,
        solid_angle: solid_angle(sys.cfg.theta_b),
        h_expect,
        h_drift,
        cyclic_defect,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: CVector,
    pub norm: f64,
    pub j_expect: [f64; 3],
    pub h_expect: f64,
}

/// Lab-frame <j> and <H(t)> along the closed-form solution.
pub fn j_trajectory(
    psi0: &CVector,
    times: &[f64],
    sys: &TiltedSystem,
    propagator: &Propagator,
) -> Vec<TrajectorySample> {
    times
        .iter()
        .map(|&t| {
            let psi = propagator.evolve(psi0, t);
            let jx = psi.dotc(&(&sys.jx * &psi)).re;
            let jy = psi.dotc(&(&sys.jy * &psi)).re;
            let jz: f64 = psi.iter().zip(&sys.mj).map(|(c, m)| c.norm_sqr() * m).sum();
            let h = rotate_hamiltonian(&sys.h0, t, &sys.mj, sys.cfg.omega);
            let h_expect = psi.dotc(&(h * &psi)).re;
            TrajectorySample { t, norm: psi.norm(), state: psi, j_expect: [jx, jy, jz], h_expect }
        })
        .collect()
}
