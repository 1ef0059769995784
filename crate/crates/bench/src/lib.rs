//! Fixtures shared by the kernel benchmarks in `benches/`.

use std::sync::Arc;

use urkit_core::dynamics::profile::OscillatorProfile;
use urkit_core::random::{self, DEFAULT_SEED};
use urkit_core::{CMatrix, SqueezeParams, StateVector, C64};

/// Complex Gaussian `n × n` matrix from the default seed.
pub fn gaussian_matrix(n: usize) -> CMatrix {
    random::matrix(&mut random::rng(DEFAULT_SEED), n)
}

/// A moderately squeezed coherent state at cutoff `n`.
pub fn stoler_state(n: usize) -> StateVector {
    urkit_core::states::canonical_ss(C64::new(0.8, -0.3), SqueezeParams::from_r_theta(0.6, 0.9), n)
        .expect("fixture parameters fit the cutoff")
}

/// `ω(t) = 1 + 0.3 sin 2t`.
pub fn driven_profile() -> OscillatorProfile {
    OscillatorProfile::omega(1.0, Arc::new(|t: f64| 1.0 + 0.3 * (2.0 * t).sin())).expect("profile is regular")
}
