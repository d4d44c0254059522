//! Closed-form relativistic Landau modes for a uniform field along z.
//!
//! Units: hbar = c = M = 1. The field enters through b = |q|B and the inverse
//! magnetic length alpha = sqrt(b / 2); the symmetric gauge gives
//! qA = eps alpha^2 (-y, x, 0) with eps the charge sign.

use std::f64::consts::PI;

use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::special::{factorial_ratio, gauss_laguerre};
use crate::spinor::spin_rotation_y;
use crate::C64;

pub use crate::special::laguerre;

/// Four-component amplitude (u_up, u_down, v_up, v_down).
pub type DiracSpinor = Vector4<C64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Dimensionless field strength |q|B.
    pub b: f64,
    /// Sign of the charge, +1 or -1.
    pub charge_sign: i8,
    /// Tilt of the field from the rotation axis, in [0, pi].
    pub theta_b: f64,
    /// Rotation rate of the field about z.
    pub omega: f64,
    /// Box length along z (periodic).
    pub d: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self { b: 0.5, charge_sign: 1, theta_b: PI / 3.0, omega: 0.01, d: 10.0 * PI }
    }
}

impl PhysicalConfig {
    pub fn new(b: f64, charge_sign: i8, theta_b: f64, omega: f64, d: f64) -> Result<Self> {
        let cfg = Self { b, charge_sign, theta_b, omega, d };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::InvalidConfig(format!("b must be positive, got {}", self.b)));
        }
        if self.charge_sign != 1 && self.charge_sign != -1 {
            return Err(Error::InvalidConfig(format!("charge_sign must be +1 or -1, got {}", self.charge_sign)));
        }
        if !(self.theta_b.is_finite() && (0.0..=PI).contains(&self.theta_b)) {
            return Err(Error::InvalidConfig(format!("theta_b must lie in [0, pi], got {}", self.theta_b)));
        }
        if !self.omega.is_finite() {
            return Err(Error::InvalidConfig("omega must be finite".into()));
        }
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::InvalidConfig(format!("d must be positive, got {}", self.d)));
        }
        Ok(())
    }

    /// Inverse magnetic length.
    pub fn alpha(&self) -> f64 {
        (0.5 * self.b).sqrt()
    }

    pub fn eps(&self) -> f64 {
        self.charge_sign as f64
    }

    /// qB/2 in the symmetric gauge, eps alpha^2.
    pub fn coupling(&self) -> f64 {
        self.eps() * 0.5 * self.b
    }

    /// Period 2 pi / omega of the field rotation.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Unit field direction at time t.
    pub fn field_direction(&self, t: f64) -> [f64; 3] {
        let (st, ct) = self.theta_b.sin_cos();
        let (sw, cw) = (self.omega * t).sin_cos();
        [st * cw, st * sw, ct]
    }

    pub fn with_theta(mut self, theta_b: f64) -> Self {
        self.theta_b = theta_b;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn value(self) -> f64 {
        0.5 * self.twice() as f64
    }

    /// 2 m_s.
    pub fn twice(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn from_twice(t: i32) -> Option<Self> {
        match t {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n_z: i64,
    pub n_rho: u32,
    pub m: i32,
    pub m_s: Spin,
    pub energy_sign: i8,
}

impl QuantumNumbers {
    pub fn new(n_z: i64, n_rho: u32, m: i32, m_s: Spin, energy_sign: i8) -> Result<Self> {
        let qn = Self { n_z, n_rho, m, m_s, energy_sign };
        qn.validate()?;
        Ok(qn)
    }

    pub fn validate(&self) -> Result<()> {
        if self.energy_sign != 1 && self.energy_sign != -1 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "energy_sign must be +1 or -1, got {}",
                self.energy_sign
            )));
        }
        Ok(())
    }

    /// 2 m_j, always odd.
    pub fn twice_mj(&self) -> i32 {
        2 * self.m + self.m_s.twice()
    }

    pub fn mj(&self) -> f64 {
        0.5 * self.twice_mj() as f64
    }

    pub fn k_z(&self, d: f64) -> f64 {
        2.0 * PI * self.n_z as f64 / d
    }

    /// Integer Landau bracket 2 n_rho + |m| + 1 - eps (m + 2 m_s).
    pub fn landau_bracket(&self, charge_sign: i8) -> i64 {
        let eps = charge_sign as i64;
        2 * self.n_rho as i64 + self.m.unsigned_abs() as i64 + 1 - eps * (self.m as i64 + self.m_s.twice() as i64)
    }

    /// True for the E0 = -1 family, decided by integer arithmetic only.
    pub fn is_special(&self, charge_sign: i8) -> bool {
        let eps = charge_sign as i32;
        self.energy_sign == -1
            && self.n_z == 0
            && self.n_rho == 0
            && self.m == eps * self.m.abs()
            && self.m_s.twice() == eps
    }

    pub fn orbital(&self) -> Orbital {
        Orbital { n: self.n_rho, m: self.m }
    }
}

/// Unperturbed energy of a Landau mode.
pub fn energy0(qn: &QuantumNumbers, cfg: &PhysicalConfig) -> f64 {
    if qn.is_special(cfg.charge_sign) {
        return -1.0;
    }
    let bracket = qn.landau_bracket(cfg.charge_sign);
    assert!(bracket >= 0 && bracket % 2 == 0, "Landau bracket must be a nonnegative even integer");
    let k = qn.k_z(cfg.d);
    qn.energy_sign as f64 * (1.0 + k * k + cfg.b * bracket as f64).sqrt()
}

/// Transverse Landau orbital psi_{n,m}, identical to a 2D oscillator state of length 1/alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbital {
    pub n: u32,
    pub m: i32,
}

impl Orbital {
    pub fn new(n: u32, m: i32) -> Self {
        Self { n, m }
    }

    /// Oscillator quanta 2n + |m|.
    pub fn quanta(&self) -> u32 {
        2 * self.n + self.m.unsigned_abs()
    }

    pub fn norm_const(&self, alpha: f64) -> f64 {
        alpha * (2.0 * factorial_ratio(self.n, self.m.unsigned_abs())).sqrt()
    }

    /// Radial profile with the Gaussian factor stripped, as a function of s = alpha rho.
    pub fn stripped_profile(&self, alpha: f64, s: f64) -> f64 {
        let am = self.m.unsigned_abs();
        self.norm_const(alpha) * s.powi(am as i32) * laguerre(self.n, am, s * s)
    }

    /// Full radial profile R(rho); psi = R e^{i m phi} / sqrt(2 pi).
    pub fn radial(&self, alpha: f64, rho: f64) -> f64 {
        let s = alpha * rho;
        self.stripped_profile(alpha, s) * (-0.5 * s * s).exp()
    }

    pub fn value(&self, alpha: f64, rho: f64, phi: f64) -> C64 {
        let angular = C64::from_polar(1.0, self.m as f64 * phi) / (2.0 * PI).sqrt();
        angular * self.radial(alpha, rho)
    }
}

/// Radial moment \int_0^inf rho^{1+power} R_a R_b d rho, exact by Gauss-Laguerre quadrature
/// whenever the integrand is a polynomial in rho^2 times the Gaussian.
pub fn radial_moment(a: Orbital, b: Orbital, power: u32, alpha: f64) -> f64 {
    let degree = a.n + b.n + (a.m.unsigned_abs() + b.m.unsigned_abs() + power).div_ceil(2);
    let rule = gauss_laguerre(degree as usize + 4);
    // rho d rho = s ds / alpha^2 and x = s^2, so the measure becomes dx / (2 alpha^2).
    let scale = 1.0 / (2.0 * alpha * alpha) / alpha.powi(power as i32);
    scale
        * rule.integrate(|x| {
            let s = x.sqrt();
            s.powi(power as i32) * a.stripped_profile(alpha, s) * b.stripped_profile(alpha, s)
        })
}

/// Action of pi_+ (raising = true) or pi_- on an orbital: returns the coefficient and the
/// single orbital it maps to, or None when the orbital is annihilated.
pub fn pi_ladder(raising: bool, orb: Orbital, charge_sign: i8, alpha: f64) -> Option<(C64, Orbital)> {
    if charge_sign < 0 {
        // Mirror symmetry: reflecting m and the charge swaps the roles of pi_+ and pi_-.
        let mirrored = Orbital { n: orb.n, m: -orb.m };
        return pi_ladder(!raising, mirrored, 1, alpha).map(|(c, t)| (c, Orbital { n: t.n, m: -t.m }));
    }
    let i2a = C64::new(0.0, 2.0 * alpha);
    let n = orb.n as f64;
    let am = orb.m.unsigned_abs() as f64;
    if raising {
        if orb.m >= 0 {
            if orb.n == 0 {
                None
            } else {
                Some((i2a * n.sqrt(), Orbital { n: orb.n - 1, m: orb.m + 1 }))
            }
        } else {
            Some((-i2a * (n + am).sqrt(), Orbital { n: orb.n, m: orb.m + 1 }))
        }
    } else if orb.m >= 1 {
        Some((-i2a * (n + 1.0).sqrt(), Orbital { n: orb.n + 1, m: orb.m - 1 }))
    } else {
        Some((i2a * (n + am + 1.0).sqrt(), Orbital { n: orb.n, m: orb.m - 1 }))
    }
}

/// One term c * psi_orbital * e^{i k z} / sqrt(d) in a given spinor component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorTerm {
    pub component: usize,
    pub orbital: Orbital,
    pub coef: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandauMode {
    pub qn: QuantumNumbers,
    pub energy0: f64,
    /// Overall normalization constant of the leading two-spinor.
    pub norm_const: f64,
    pub k_z: f64,
    pub terms: Vec<SpinorTerm>,
    pub cfg: PhysicalConfig,
}

impl LandauMode {
    pub fn is_special(&self) -> bool {
        self.qn.is_special(self.cfg.charge_sign)
    }

    /// Evaluate in cylindrical coordinates.
    pub fn evaluate(&self, rho: f64, phi: f64, z: f64) -> DiracSpinor {
        let alpha = self.cfg.alpha();
        let plane = C64::from_polar(1.0 / self.cfg.d.sqrt(), self.k_z * z);
        let mut out = DiracSpinor::zeros();
        for t in &self.terms {
            out[t.component] += t.coef * t.orbital.value(alpha, rho, phi) * plane;
        }
        out
    }

    pub fn evaluate_xyz(&self, r: [f64; 3]) -> DiracSpinor {
        self.evaluate(r[0].hypot(r[1]), r[1].atan2(r[0]), r[2])
    }

    /// exp(-i theta j_y) applied pointwise: S(theta) zeta(R_y(-theta) r).
    pub fn evaluate_rotated(&self, theta: f64, r: [f64; 3]) -> DiracSpinor {
        let (s, c) = theta.sin_cos();
        let back = [c * r[0] - s * r[2], r[1], s * r[0] + c * r[2]];
        spin_rotation_y(theta) * self.evaluate_xyz(back)
    }
}

/// Build the closed-form mode for any valid quantum numbers.
pub fn build_mode(qn: &QuantumNumbers, cfg: &PhysicalConfig) -> Result<LandauMode> {
    qn.validate()?;
    cfg.validate()?;
    if qn.is_special(cfg.charge_sign) {
        build_special_mode(qn, cfg)
    } else {
        build_regular_mode(qn, cfg)
    }
}

/// Upper spinor from the Landau orbital, lower spinor v = sigma.pi u / (E + 1).
pub fn build_regular_mode(qn: &QuantumNumbers, cfg: &PhysicalConfig) -> Result<LandauMode> {
    if qn.is_special(cfg.charge_sign) {
        return Err(Error::DegenerateBranch);
    }
    let alpha = cfg.alpha();
    let e = energy0(qn, cfg);
    let k = qn.k_z(cfg.d);
    let orb = qn.orbital();
    let cu = ((e + 1.0) / (2.0 * e)).sqrt();
    let lower = C64::new(cu / (e + 1.0), 0.0);

    let mut terms = Vec::with_capacity(3);
    match qn.m_s {
        Spin::Up => {
            terms.push(SpinorTerm { component: 0, orbital: orb, coef: C64::new(cu, 0.0) });
            if qn.n_z != 0 {
                terms.push(SpinorTerm { component: 2, orbital: orb, coef: lower * k });
            }
            if let Some((c, target)) = pi_ladder(true, orb, cfg.charge_sign, alpha) {
                terms.push(SpinorTerm { component: 3, orbital: target, coef: lower * c });
            }
        }
        Spin::Down => {
            terms.push(SpinorTerm { component: 1, orbital: orb, coef: C64::new(cu, 0.0) });
            if let Some((c, target)) = pi_ladder(false, orb, cfg.charge_sign, alpha) {
                terms.push(SpinorTerm { component: 2, orbital: target, coef: lower * c });
            }
            if qn.n_z != 0 {
                terms.push(SpinorTerm { component: 3, orbital: orb, coef: -lower * k });
            }
        }
    }
    let norm_const = cu * orb.norm_const(alpha);
    Ok(LandauMode { qn: *qn, energy0: e, norm_const, k_z: k, terms, cfg: *cfg })
}

/// E0 = -1 family: the lower spinor carries the orbital and sigma.pi annihilates it,
/// so the upper spinor vanishes identically.
fn build_special_mode(qn: &QuantumNumbers, cfg: &PhysicalConfig) -> Result<LandauMode> {
    let orb = qn.orbital();
    let component = match qn.m_s {
        Spin::Up => 2,
        Spin::Down => 3,
    };
    debug_assert!(pi_ladder(qn.m_s == Spin::Up, orb, cfg.charge_sign, cfg.alpha()).is_none());
    Ok(LandauMode {
        qn: *qn,
        energy0: -1.0,
        norm_const: orb.norm_const(cfg.alpha()),
        k_z: 0.0,
        terms: vec![SpinorTerm { component, orbital: orb, coef: C64::new(1.0, 0.0) }],
        cfg: *cfg,
    })
}

/// <a|b> over the periodic box: analytic in z and phi, Gauss-Laguerre in rho.
pub fn inner_product(a: &LandauMode, b: &LandauMode) -> Result<C64> {
    if a.cfg != b.cfg {
        return Err(Error::ConfigMismatch);
    }
    if a.qn.n_z != b.qn.n_z {
        return Ok(C64::new(0.0, 0.0));
    }
    let alpha = a.cfg.alpha();
    let mut sum = C64::new(0.0, 0.0);
    for ta in &a.terms {
        for tb in b.terms.iter().filter(|tb| tb.component == ta.component && tb.orbital.m == ta.orbital.m) {
            sum += ta.coef.conj() * tb.coef * radial_moment(ta.orbital, tb.orbital, 0, alpha);
        }
    }
    Ok(sum)
}
