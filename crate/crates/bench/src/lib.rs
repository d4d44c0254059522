//! Shared fixtures for the pipeline benchmarks.

use rotdirac_core::{CVector, ModeBasis, PhysicalConfig, TiltedSystem, C64};

/// Default configuration with an oscillator-shell basis of the given size.
pub fn fixture(shells: u32) -> (PhysicalConfig, ModeBasis, TiltedSystem) {
    let cfg = PhysicalConfig::default();
    let basis = ModeBasis::oscillator_shell(shells, &cfg).expect("valid basis");
    let sys = TiltedSystem::new(&basis, &cfg).expect("valid system");
    (cfg, basis, sys)
}

/// Deterministic normalized state of the given dimension.
pub fn spread_state(dim: usize) -> CVector {
    CVector::from_fn(dim, |i, _| C64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).normalize()
}
