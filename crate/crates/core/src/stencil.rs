//! Second-order central-difference application of the Dirac Hamiltonian to a
//! pointwise spinor field, used as an independent check of closed-form modes.

use crate::landau::DiracSpinor;
use crate::spinor::dirac;
use crate::C64;

/// Apply H(n) = alpha.(p - qA) + beta with qA = coupling * (n x r) at point r.
pub fn apply_dirac_fd<F>(field: &F, r: [f64; 3], h: f64, direction: [f64; 3], coupling: f64) -> DiracSpinor
where
    F: Fn([f64; 3]) -> DiracSpinor,
{
    let d = dirac();
    let centre = field(r);
    let q_a = [
        coupling * (direction[1] * r[2] - direction[2] * r[1]),
        coupling * (direction[2] * r[0] - direction[0] * r[2]),
        coupling * (direction[0] * r[1] - direction[1] * r[0]),
    ];
    let mut out = d.gamma0 * centre;
    for axis in 0..3 {
        let mut fwd = r;
        let mut bwd = r;
        fwd[axis] += h;
        bwd[axis] -= h;
        let grad = (field(fwd) - field(bwd)) / C64::new(2.0 * h, 0.0);
        let kinetic = grad * C64::new(0.0, -1.0) - centre * C64::new(q_a[axis], 0.0);
        out += d.alpha[axis] * kinetic;
    }
    out
}

/// Relative residual sqrt(sum |H f - E f|^2 / sum |f|^2) over the sample points.
pub fn relative_residual<F>(
    field: &F,
    energy: f64,
    points: &[[f64; 3]],
    h: f64,
    direction: [f64; 3],
    coupling: f64,
) -> f64
where
    F: Fn([f64; 3]) -> DiracSpinor,
{
    let (mut num, mut den) = (0.0, 0.0);
    for &p in points {
        let f = field(p);
        let hf = apply_dirac_fd(field, p, h, direction, coupling);
        num += (hf - f * C64::new(energy, 0.0)).norm_squared();
        den += f.norm_squared();
    }
    (num / den).sqrt()
}

/// Observed convergence order log2(r_coarse / r_fine) for successive halvings.
pub fn observed_orders(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Deterministic sample points on a Cartesian lattice, keeping those inside radius `rho_max`.
pub fn lattice_points(rho_max: f64, z_half: f64, per_axis: usize) -> Vec<[f64; 3]> {
    let mut pts = Vec::new();
    let step = |i: usize, half: f64| -half + 2.0 * half * (i as f64 + 0.37) / per_axis as f64;
    for i in 0..per_axis {
        for j in 0..per_axis {
            for k in 0..per_axis {
                let p = [step(i, rho_max), step(j, rho_max), step(k, z_half)];
                if p[0].hypot(p[1]) <= rho_max {
                    pts.push(p);
                }
            }
        }
    }
    pts
}
