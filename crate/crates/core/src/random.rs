//! Seeded random states, parameters and matrices for sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hilbert::{BasisSpec, StateVector};
use crate::matrixkit::{c, CMatrix, CVector, C64};
use crate::states::SqueezeParams;

/// Seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 42;

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_c64(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point in the disk `|z| ≤ radius`.
pub fn disk(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

/// Shell squeeze `u = cosh r`, `v = sinh r e^{iθ}` with `r ∈ [0, r_max]`,
/// times a random global phase.
pub fn squeeze(rng: &mut impl Rng, r_max: f64) -> SqueezeParams {
    let r = r_max * rng.random::<f64>();
    let th = std::f64::consts::TAU * rng.random::<f64>();
    let ph = C64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>());
    let s = SqueezeParams::from_r_theta(r, th);
    SqueezeParams { u: s.u * ph, v: s.v * ph }
}

/// Gaussian random vector supported on the levels with total excitation
/// below `support` (and below the tail region), so that ladder operators act
/// exactly on it.
pub fn pure_state(rng: &mut impl Rng, basis: BasisSpec, support: usize) -> Result<StateVector> {
    let d = basis.dim();
    let cap = if basis.is_truncated() {
        support.min(basis.tail_start().saturating_sub(1)).max(1)
    } else {
        usize::MAX
    };
    let v = CVector::from_fn(d, |i, _| {
        if basis.levels(i).iter().sum::<usize>() < cap {
            normal_c64(rng)
        } else {
            c(0.0, 0.0)
        }
    });
    StateVector::from_amplitudes(v, basis)
}

/// Complex Gaussian matrix.
pub fn matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| normal_c64(rng))
}
