//! Observable-weighted overlap `g` and the distance `D² = 2(1 − g)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Operator, StateVector};
use crate::matrixkit::{psd_min_eig, CMatrix, CVector};

/// Smallest eigenvalue an observable may have to weight the overlap.
pub const POSITIVITY_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub g: f64,
    #[serde(rename = "D2")]
    pub d_sq: f64,
    pub observable: String,
}

impl DistanceResult {
    pub fn distance(&self) -> f64 {
        self.d_sq.sqrt()
    }
}

fn is_identity(m: &CMatrix) -> bool {
    m.nrows() == m.ncols()
        && m.iter()
            .enumerate()
            .all(|(idx, z)| {
                let (i, j) = (idx % m.nrows(), idx / m.nrows());
                if i == j {
                    z.re == 1.0 && z.im == 0.0
                } else {
                    z.re == 0.0 && z.im == 0.0
                }
            })
}

/// Checks that `X` may weight the overlap: the identity, or Hermitian with
/// smallest eigenvalue above [`POSITIVITY_FLOOR`].
pub fn check_positive(x: &Operator) -> Result<()> {
    if is_identity(&x.matrix) {
        return Ok(());
    }
    let min = psd_min_eig(&x.matrix).map_err(|e| Error::InvalidObservable(format!("{}: {e}", x.label)))?;
    if !(min > POSITIVITY_FLOOR) {
        return Err(Error::InvalidObservable(format!(
            "{} has minimum eigenvalue {min:.3e}, needs > {POSITIVITY_FLOOR:e}",
            x.label
        )));
    }
    Ok(())
}

/// `g = |⟨ψ₂|X²|ψ₁⟩| / √(⟨ψ₁|X²|ψ₁⟩⟨ψ₂|X²|ψ₂⟩)`, computed from the vectors
/// `Xψ`. Symmetric in the two states and exactly 1 for identical inputs.
pub fn g_overlap(psi1: &StateVector, psi2: &StateVector, x: &Operator) -> Result<DistanceResult> {
    psi1.check_same(&x.basis)?;
    psi2.check_same(&x.basis)?;
    check_positive(x)?;
    let (v1, v2): (CVector, CVector) = if is_identity(&x.matrix) {
        (psi1.amplitudes.clone(), psi2.amplitudes.clone())
    } else {
        (x.apply(&psi1.amplitudes), x.apply(&psi2.amplitudes))
    };
    let n1 = v1.dotc(&v1).re;
    let n2 = v2.dotc(&v2).re;
    let num = v2.dotc(&v1).norm();
    // √(n·n) == n exactly in IEEE arithmetic, so identical states give g = 1
    let g = (num / (n1 * n2).sqrt()).clamp(0.0, 1.0);
    Ok(DistanceResult {
        g,
        d_sq: 2.0 * (1.0 - g),
        observable: x.label.clone(),
    })
}
