//! Product space of (longitudinal function) x (transverse orbital) x (spinor
//! component), and assembly of operators written as sums of Kronecker terms.

use std::collections::HashMap;

use super::factors::{OrbitalTable, ZTable};
use crate::spinor::{dirac, Mat4};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Primitive {
    pub z: usize,
    pub orbital: usize,
    pub component: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZOp {
    One,
    Z,
    Pz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneOp {
    One,
    X,
    Y,
    Px,
    Py,
    /// Orbital angular momentum about z, diagonal with eigenvalue m.
    Lz,
}

/// coef * (dirac matrix) (x) (z factor) (x) (transverse factor)
#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub dirac: Mat4,
    pub z: ZOp,
    pub plane: PlaneOp,
    pub coef: C64,
}

impl Term {
    pub fn new(dirac: Mat4, z: ZOp, plane: PlaneOp, coef: f64) -> Self {
        Self { dirac, z, plane, coef: C64::new(coef, 0.0) }
    }
}

#[derive(Debug, Clone)]
pub struct PrimitiveSpace {
    pub z: ZTable,
    pub orbitals: OrbitalTable,
    pub states: Vec<Primitive>,
    index: HashMap<Primitive, usize>,
    by_component: [Vec<usize>; 4],
}

impl PrimitiveSpace {
    pub fn new(z: ZTable, orbitals: OrbitalTable, states: Vec<Primitive>) -> Self {
        let index = states.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut by_component: [Vec<usize>; 4] = Default::default();
        for (i, p) in states.iter().enumerate() {
            by_component[p.component].push(i);
        }
        Self { z, orbitals, states, index, by_component }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn position(&self, p: &Primitive) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Twice the total angular momentum projection of a primitive state.
    pub fn twice_mj(&self, index: usize) -> i32 {
        let p = self.states[index];
        let spin = if p.component.is_multiple_of(2) { 1 } else { -1 };
        2 * self.orbitals.orbitals[p.orbital].m + spin
    }

    /// Oscillator quanta of a primitive (transverse plus longitudinal).
    pub fn quanta(&self, index: usize) -> u32 {
        let p = self.states[index];
        self.z.quanta(p.z) + self.orbitals.orbitals[p.orbital].quanta()
    }

    fn z_element(&self, op: ZOp, r: usize, c: usize) -> C64 {
        match op {
            ZOp::One => {
                if r == c {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            ZOp::Z => self.z.z[(r, c)],
            ZOp::Pz => self.z.pz[(r, c)],
        }
    }

    fn plane_element(&self, op: PlaneOp, r: usize, c: usize) -> C64 {
        let t = &self.orbitals;
        match op {
            PlaneOp::One | PlaneOp::Lz => {
                if r == c {
                    let value = if op == PlaneOp::Lz { t.orbitals[r].m as f64 } else { 1.0 };
                    C64::new(value, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            PlaneOp::X => t.x[(r, c)],
            PlaneOp::Y => t.y[(r, c)],
            PlaneOp::Px => t.px[(r, c)],
            PlaneOp::Py => t.py[(r, c)],
        }
    }

    /// Dense matrix of a sum of Kronecker terms over all primitives.
    pub fn assemble(&self, terms: &[Term]) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for term in terms {
            for cr in 0..4 {
                for cc in 0..4 {
                    let d = term.dirac[(cr, cc)] * term.coef;
                    if d.norm() == 0.0 {
                        continue;
                    }
                    for &r in &self.by_component[cr] {
                        let pr = self.states[r];
                        for &c in &self.by_component[cc] {
                            let pc = self.states[c];
                            let zf = self.z_element(term.z, pr.z, pc.z);
                            if zf.norm() == 0.0 {
                                continue;
                            }
                            let pf = self.plane_element(term.plane, pr.orbital, pc.orbital);
                            if pf.norm() == 0.0 {
                                continue;
                            }
                            out[(r, c)] += d * zf * pf;
                        }
                    }
                }
            }
        }
        out
    }
}

fn identity4() -> Mat4 {
    Mat4::identity()
}

/// Total angular momentum components j = l + Sigma / 2.
pub fn angular_momentum_terms(axis: usize) -> Vec<Term> {
    let d = dirac();
    let spin = Term::new(d.sigma[axis] * C64::new(0.5, 0.0), ZOp::One, PlaneOp::One, 1.0);
    let id = identity4();
    match axis {
        0 => vec![Term::new(id, ZOp::Pz, PlaneOp::Y, 1.0), Term::new(id, ZOp::Z, PlaneOp::Py, -1.0), spin],
        1 => vec![Term::new(id, ZOp::Z, PlaneOp::Px, 1.0), Term::new(id, ZOp::Pz, PlaneOp::X, -1.0), spin],
        _ => vec![Term::new(id, ZOp::One, PlaneOp::Lz, 1.0), spin],
    }
}

/// alpha . p, the field-free kinetic operator.
pub fn kinetic_terms() -> Vec<Term> {
    let d = dirac();
    vec![
        Term::new(d.alpha[0], ZOp::One, PlaneOp::Px, 1.0),
        Term::new(d.alpha[1], ZOp::One, PlaneOp::Py, 1.0),
        Term::new(d.alpha[2], ZOp::Pz, PlaneOp::One, 1.0),
    ]
}

/// Dirac Hamiltonian beta + alpha.(p - qA) for a uniform field along `n`, with
/// qA = coupling * (n x r). A zero coupling gives the free Hamiltonian.
pub fn hamiltonian_terms(n: [f64; 3], coupling: f64) -> Vec<Term> {
    let d = dirac();
    let mut terms = kinetic_terms();
    terms.push(Term::new(d.gamma0, ZOp::One, PlaneOp::One, 1.0));
    if coupling != 0.0 {
        let c = coupling;
        // -alpha_x c (n_y z - n_z y)
        terms.push(Term::new(d.alpha[0], ZOp::Z, PlaneOp::One, -c * n[1]));
        terms.push(Term::new(d.alpha[0], ZOp::One, PlaneOp::Y, c * n[2]));
        // -alpha_y c (n_z x - n_x z)
        terms.push(Term::new(d.alpha[1], ZOp::One, PlaneOp::X, -c * n[2]));
        terms.push(Term::new(d.alpha[1], ZOp::Z, PlaneOp::One, c * n[0]));
        // -alpha_z c (n_x y - n_y x)
        terms.push(Term::new(d.alpha[2], ZOp::One, PlaneOp::Y, -c * n[0]));
        terms.push(Term::new(d.alpha[2], ZOp::One, PlaneOp::X, c * n[1]));
    }
    terms.retain(|t| t.coef.norm() != 0.0);
    terms
}
