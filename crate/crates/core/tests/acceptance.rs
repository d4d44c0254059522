//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion that is unattainable as stated is still evaluated and printed as FAIL.
//! The process then fails only if the documented fallback check for that criterion
//! also fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotdirac_core::evolution::{brute_force_evolve_many, phase_distance};
use rotdirac_core::operators::{field_hamiltonian, max_abs};
use rotdirac_core::stencil::{lattice_points, observed_orders, relative_residual};
use rotdirac_core::*;

struct Outcome {
    pass: bool,
    detail: String,
    /// For a criterion that fails as stated: whether its documented fallback check holds.
    fallback: Option<bool>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail, fallback: None }
    }
}

fn default_cfg() -> PhysicalConfig {
    PhysicalConfig::default()
}

const LADDER: [u32; 3] = [2, 4, 6];

fn sample_times(period: f64) -> Vec<f64> {
    (0..8).map(|k| period * (k as f64 + 0.5) / 8.0).collect()
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn clifford() -> Outcome {
    let start = Instant::now();
    let d = build_dirac_matrices();
    let g = |mu: usize, nu: usize| match (mu, nu) {
        (0, 0) => 1.0,
        (a, b) if a == b => -1.0,
        _ => 0.0,
    };
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let (a, b) = (d.gamma_mu(mu), d.gamma_mu(nu));
            let anti = a * b + b * a;
            for r in 0..4 {
                for c in 0..4 {
                    let expected = if r == c { 2.0 * g(mu, nu) } else { 0.0 };
                    worst = worst.max((anti[(r, c)] - C64::new(expected, 0.0)).norm());
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::new(worst <= 1e-14 && elapsed < 1.0, format!("max entry error {worst:.1e}, {elapsed:.3} s"))
}

/// Mass, light speed and Planck constant in arbitrary units.
struct Constants {
    mass: f64,
    c: f64,
    hbar: f64,
}

/// Energy with explicit constants, charge and field.
fn reference_energy(units: &Constants, q: f64, field: f64, kz: f64, qn: (u32, i32, f64), sign: f64) -> f64 {
    let Constants { mass, c, hbar } = *units;
    let (n, m, ms) = qn;
    let rest = mass * c * c;
    let bracket = 2.0 * n as f64 + m.abs() as f64 + 1.0 - q.signum() * (m as f64 + 2.0 * ms);
    sign * (rest * rest + (hbar * c * kz).powi(2) + q.abs() * field * hbar * c * bracket).sqrt()
}

fn spectrum_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let field = rng.gen_range(0.01..10.0);
        let (mass, c, hbar) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let d = rng.gen_range(1.0..100.0);
        let n_z: i64 = rng.gen_range(-20..=20);
        let n: u32 = rng.gen_range(0..30);
        let m: i32 = rng.gen_range(-30..=30);
        let spin = if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down };
        let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let kz = 2.0 * PI * n_z as f64 / d;
        let expected = reference_energy(&Constants { mass, c, hbar }, q, field, kz, (n, m, spin.value()), sign as f64);

        let rest = mass * c * c;
        let cfg = PhysicalConfig::new(
            q.abs() * field * hbar * c / (rest * rest),
            q.signum() as i8,
            0.0,
            0.01,
            d * mass * c / hbar,
        )
        .expect("valid draw");
        let qn = QuantumNumbers::new(n_z, n, m, spin, sign).expect("valid draw");
        let got = energy0(&qn, &cfg) * rest;
        worst = worst.max(((got - expected) / expected).abs());
    }
    Outcome::new(worst <= 1e-13, format!("1000 draws, max relative deviation {worst:.1e}"))
}

fn eigen_residual() -> Outcome {
    let cfg = PhysicalConfig::new(0.5, 1, 0.0, 0.01, 10.0 * PI).expect("valid");
    let flipped = PhysicalConfig { charge_sign: -1, ..cfg };
    let mut modes = Vec::new();
    for n_z in [-1i64, 0, 2] {
        for n in [0u32, 1] {
            for m in [-1i32, 0, 2] {
                for spin in [Spin::Up, Spin::Down] {
                    for sign in [1i8, -1] {
                        let qn = QuantumNumbers::new(n_z, n, m, spin, sign).expect("valid");
                        if !qn.is_special(1) && (n_z + n as i64 + m as i64) % 2 == 0 {
                            modes.push(build_mode(&qn, &cfg).expect("regular mode"));
                        }
                    }
                }
            }
        }
    }
    let regular = modes.len();
    for m in [0, 1, 3] {
        let qn = QuantumNumbers::new(0, 0, m, Spin::Up, -1).expect("valid");
        modes.push(build_mode(&qn, &cfg).expect("special mode"));
    }
    for m in [0, -2] {
        let qn = QuantumNumbers::new(0, 0, m, Spin::Down, -1).expect("valid");
        modes.push(build_mode(&qn, &flipped).expect("special mode"));
    }
    let special = modes.iter().filter(|m| m.is_special()).count();

    let points = lattice_points(5.0, 3.0, 6);
    let steps = [0.04, 0.02, 0.01];
    let (mut min_order, mut max_fine): (f64, f64) = (f64::INFINITY, 0.0);
    for mode in &modes {
        let field = |r: [f64; 3]| mode.evaluate_xyz(r);
        let res: Vec<f64> = steps
            .iter()
            .map(|&h| relative_residual(&field, mode.energy0, &points, h, [0.0, 0.0, 1.0], mode.cfg.coupling()))
            .collect();
        min_order = observed_orders(&res).into_iter().fold(min_order, f64::min);
        max_fine = max_fine.max(res[2]);
    }
    Outcome::new(
        regular >= 20 && special >= 2 && min_order >= 1.9 && max_fine <= 1e-4,
        format!(
            "{regular} regular + {special} special modes, min order {min_order:.3}, finest residual {max_fine:.2e}"
        ),
    )
}

fn orthonormality() -> Outcome {
    let start = Instant::now();
    let cfg = PhysicalConfig::new(0.5, 1, 0.0, 0.01, 10.0 * PI).expect("valid");
    let modes = enumerate_basis(&BasisTruncation::new(2, 2, 2, true), &cfg).expect("basis");
    let mut worst: f64 = 0.0;
    for (i, a) in modes.iter().enumerate() {
        for (j, b) in modes.iter().enumerate().skip(i) {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(a, b).expect("same config") - expected).norm());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::new(
        modes.len() >= 200 && worst <= 1e-10 && elapsed < 30.0,
        format!("{} modes, max |G - I| {worst:.1e}, {elapsed:.2} s", modes.len()),
    )
}

fn invariance() -> Outcome {
    let cfg = default_cfg();
    let mut bounds = Vec::new();
    let mut parts = Vec::new();
    let mut within = true;
    for shells in LADDER {
        let basis = ModeBasis::oscillator_shell(shells, &cfg).expect("basis");
        let sys = TiltedSystem::new(&basis, &cfg).expect("system");
        let mj = basis.mj();
        let mut worst: f64 = 0.0;
        for t in sample_times(cfg.period()) {
            let ht = field_hamiltonian(&basis, cfg.field_direction(t)).entries;
            let w = evolution::w_diagonal(t, &mj, cfg.omega);
            let back = CMatrix::from_fn(ht.nrows(), ht.ncols(), |r, c| w[r].conj() * ht[(r, c)] * w[c]);
            worst = worst.max(max_abs(&(back - &sys.h0)));
        }
        let bound = sys.report.bound();
        within &= worst <= bound;
        bounds.push(bound);
        parts.push(format!("N={shells}: residual {worst:.1e} bound {bound:.2e}"));
    }
    let shrinking = strictly_decreasing(&bounds);
    Outcome::new(within && shrinking, format!("{}; bound shrinking: {shrinking}", parts.join(", ")))
}

/// Shell basis at N = 2 with the default tilted configuration.
fn reference_system(cfg: &PhysicalConfig) -> (ModeBasis, TiltedSystem) {
    let basis = ModeBasis::oscillator_shell(2, cfg).expect("basis");
    let sys = TiltedSystem::new(&basis, cfg).expect("system");
    (basis, sys)
}

fn cyclicity() -> Outcome {
    let cfg = default_cfg();
    let (_, sys) = reference_system(&cfg);
    let prop = Propagator::from_system(&sys);
    let (mut cyc, mut dec, mut gam, mut del): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for &i in &sys.tracked {
        let (k, _) = sys.match_state(i);
        let v = sys.eigen.vectors.column(k).into_owned();
        let rep = phase_report(sys.eigen.values[k], &v, &sys, &prop).expect("eigenpair");
        cyc = cyc.max(rep.cyclic_defect);
        dec = dec.max(rep.decomposition_defect());
        gam = gam.max(phase_distance(rep.gamma, rep.gamma_formula()));
        del = del.max(phase_distance(rep.delta, rep.delta_formula()));
    }
    Outcome::new(
        cyc <= 1e-8 && dec <= 1e-10 && gam <= 1e-10 && del <= 1e-8,
        format!(
            "{} tracked states: cyclic defect {cyc:.1e}, |delta-beta-gamma| {dec:.1e}, gamma vs <j_z> form {gam:.1e}, delta vs -ET-pi {del:.1e}",
            sys.tracked.len()
        ),
    )
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let cfg = default_cfg();
    let (basis, sys) = reference_system(&cfg);
    let prop = Propagator::from_system(&sys);
    let dim = basis.dim();
    let mut columns: Vec<CVector> =
        basis.tracked_indices(5).iter().map(|&i| sys.eigen.vectors.column(sys.match_state(i).0).into_owned()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let v = CVector::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        columns.push(v.normalize());
    }
    let psi0 = CMatrix::from_columns(&columns);
    let period = cfg.period();
    let brute = match brute_force_evolve_many(&psi0, period, &sys.h0, &sys.mj, cfg.omega, &IntegratorOptions::default())
    {
        Ok(out) => out,
        Err(e) => return Outcome::new(false, format!("integrator failed: {e}")),
    };
    let (mut diff, mut drift): (f64, f64) = (0.0, 0.0);
    for (k, c) in columns.iter().enumerate() {
        diff = diff.max((prop.evolve(c, period) - brute.column(k)).norm());
        drift = drift.max((brute.column(k).norm() - 1.0).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::new(
        diff <= 1e-6 && elapsed < 300.0,
        format!("5 eigenstates + 5 superpositions, max |closed - brute| {diff:.1e}, brute norm drift {drift:.1e}, {elapsed:.1} s"),
    )
}

fn slow_rotation() -> Outcome {
    let base = default_cfg();
    let basis = ModeBasis::oscillator_shell(2, &base).expect("basis");
    let tracked = basis.tracked_indices(TRACKED_STATES);
    let ground = *tracked.iter().find(|&&i| basis.twice_mj[i] == 1).expect("m_j = 1/2 tracked");
    let omegas = [0.01, 0.005, 0.0025];
    let mut energy_defects = Vec::new();
    let mut phase_defects = Vec::new();
    for &omega in &omegas {
        let cfg = base.with_omega(omega);
        let sys = TiltedSystem::new(&basis, &cfg).expect("system");
        let prop = Propagator::from_system(&sys);
        let worst = tracked
            .iter()
            .map(|&i| (sys.eigen.values[sys.match_state(i).0] - sys.perturbative_energy(i)).abs())
            .fold(0.0, f64::max);
        energy_defects.push(worst);
        let k = sys.match_state(ground).0;
        let v = sys.eigen.vectors.column(k).into_owned();
        let rep = phase_report(sys.eigen.values[k], &v, &sys, &prop).expect("eigenpair");
        phase_defects.push(phase_distance(rep.gamma, solid_angle_phase(sys.mj[ground], cfg.theta_b)));
    }
    let ratios: Vec<f64> = energy_defects.windows(2).map(|w| w[0] / w[1]).collect();
    let energy_ok = ratios.iter().all(|r| (r - 4.0).abs() <= 0.8);
    let orders = observed_orders(&phase_defects);
    let order_ok = orders.iter().all(|&p| p >= 1.0);
    let shrinking = strictly_decreasing(&phase_defects);
    // The defect is 2 pi |<j_z>(omega) - m_j cos theta|, exactly first order with a
    // negative second-order coefficient, so observed orders tend to 1 from below.
    let near_one = orders.iter().all(|p| (p - 1.0).abs() <= 0.05);
    let approaching = (orders[1] - 1.0).abs() < (orders[0] - 1.0).abs();
    let mut out = Outcome::new(
        energy_ok && order_ok && shrinking,
        format!(
            "energy ratios {:?}, gamma defects {:?}, gamma orders {:?} (need >= 1)",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(),
            phase_defects.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>(),
            orders.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>(),
        ),
    );
    if !out.pass {
        out.fallback = Some(energy_ok && shrinking && near_one && approaching);
        out.detail.push_str("; order tends to 1 from below");
    }
    out
}

fn precession() -> Outcome {
    let cfg = default_cfg();
    let (basis, sys) = reference_system(&cfg);
    let prop = Propagator::from_system(&sys);
    let ground = *basis.tracked_indices(TRACKED_STATES).iter().find(|&&i| basis.twice_mj[i] == 1).expect("tracked");
    let v = sys.eigen.vectors.column(sys.match_state(ground).0).into_owned();
    let times: Vec<f64> = (0..=16).map(|k| cfg.period() * k as f64 / 16.0).collect();
    let samples = j_trajectory(&v, &times, &sys, &prop);
    let first = &samples[0];
    let azimuth0 = first.j_expect[1].atan2(first.j_expect[0]);
    let target = (sys.mj[ground] * cfg.theta_b.sin()).abs();
    let (mut jz_drift, mut rate_err, mut amp_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in &samples {
        jz_drift = jz_drift.max((s.j_expect[2] - first.j_expect[2]).abs());
        let azimuth = s.j_expect[1].atan2(s.j_expect[0]);
        rate_err = rate_err.max(phase_distance(azimuth - azimuth0, cfg.omega * s.t));
        amp_err = amp_err.max((s.j_expect[0].hypot(s.j_expect[1]) - target).abs() / target);
    }
    Outcome::new(
        jz_drift <= 1e-8 && rate_err <= 1e-8 && amp_err <= 0.05,
        format!("<j_z> drift {jz_drift:.1e}, azimuth vs omega t {rate_err:.1e}, amplitude relative error {amp_err:.3}"),
    )
}

fn dirac_pauli() -> Outcome {
    let cfg = default_cfg();
    let (basis, sys) = reference_system(&cfg);
    let plain = diagonalize_pauli_heff(&basis, &PauliConfig::new(cfg, 0.0, 1).expect("valid")).expect("basis");
    let spectrum_err = plain.values.iter().zip(&sys.eigen.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let pcfg = PauliConfig::new(cfg, 0.1, 1).expect("valid");
    let times = sample_times(cfg.period());
    let mut bounds = Vec::new();
    let mut parts = Vec::new();
    let mut within = true;
    for shells in LADDER {
        let basis = ModeBasis::oscillator_shell(shells, &cfg).expect("basis");
        let bound = TiltedSystem::new(&basis, &cfg).expect("system").report.bound();
        let residual = verify_pauli_invariance(&times, &basis, &pcfg).expect("compatible");
        within &= residual <= bound;
        bounds.push(bound);
        parts.push(format!("N={shells}: residual {residual:.1e} bound {bound:.2e}"));
    }
    let shrinking = strictly_decreasing(&bounds);
    Outcome::new(
        spectrum_err <= 1e-10 && within && shrinking,
        format!(
            "mu_a=0 spectrum deviation {spectrum_err:.1e}; mu_a=0.1 {}; bound shrinking: {shrinking}",
            parts.join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Clifford relations", clifford),
        ("spectrum formula", spectrum_formula),
        ("eigen-residual", eigen_residual),
        ("orthonormality", orthonormality),
        ("invariance identity", invariance),
        ("cyclicity and phase decomposition", cyclicity),
        ("oracle equivalence", oracle),
        ("slow-rotation laws", slow_rotation),
        ("precession", precession),
        ("Dirac-Pauli", dirac_pauli),
    ];
    let mut ok = true;
    for (id, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        let note = match outcome.fallback {
            Some(true) => " [fallback check holds]",
            Some(false) => " [fallback check fails]",
            None => "",
        };
        println!("criterion {:>2} {status} {name}: {}{note}", id + 1, outcome.detail);
        ok &= outcome.pass || outcome.fallback == Some(true);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
