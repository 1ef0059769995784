//! Minimizing states by direct diagonalization of complex combinations of
//! observables, plus least-squares minimizer certificates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{su11_rep, BasisSpec, Operator, StateVector};
use crate::matrixkit::{c, eigen_general, kernel_vector, least_singular_vector, CMatrix, CVector, HermitianEigen, C64, I, ZERO};
use crate::moments::{centered_vectors, MomentOptions, MomentReport, ObservableSet, StateRef, means_and_gram};
use crate::states::{check_tail, principal_sqrt, su11_cs, su11_intelligent, IntelligentParams, Normalizability};
use crate::urcheck::{is_saturated, pair_key, PairGaps};

/// Largest matrix handed to the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 512;

/// Eigenvectors with more tail mass than this are treated as truncation
/// artifacts.
pub const PHYSICAL_TAIL: f64 = 1e-6;

/// `Ã = Σ β_j X_j`.
#[derive(Debug, Clone)]
pub struct CombinationSpec {
    pub beta: Vec<C64>,
    pub observables: ObservableSet,
}

impl CombinationSpec {
    pub fn new(beta: Vec<C64>, observables: ObservableSet) -> Result<Self> {
        if beta.len() != observables.len() {
            return Err(invalid(format!(
                "{} coefficients for {} observables",
                beta.len(),
                observables.len()
            )));
        }
        if beta.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(invalid("coefficients must be finite"));
        }
        if beta.iter().all(|b| b.norm() == 0.0) {
            return Err(invalid("at least one coefficient must be nonzero"));
        }
        Ok(CombinationSpec { beta, observables })
    }

    /// `u(X − iY) + v(X + iY) = (u+v)X + i(v−u)Y`.
    pub fn pair_form(u: C64, v: C64, x: &Operator, y: &Operator) -> Result<Self> {
        Self::new(vec![u + v, I * (v - u)], ObservableSet::pair(x, y)?)
    }

    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.observables.basis().dim(), self.observables.basis().dim());
        for (b, op) in self.beta.iter().zip(&self.observables.ops) {
            m += &op.matrix * *b;
        }
        m
    }

    pub fn operator(&self) -> Result<Operator> {
        Operator::new("A", self.matrix(), self.observables.basis())
    }
}

/// One eigenpair of a combination.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub eigenvalue: C64,
    pub state: StateVector,
    /// `‖Ãψ − zψ‖` relative to the largest matrix entry.
    pub residual: f64,
    /// Distance to the nearest other eigenvalue, relative to the largest
    /// matrix entry.
    pub separation: f64,
    /// Set when the eigenvalue is nearly degenerate or the residual is
    /// large, i.e. the pencil is close to defective at this point.
    pub degraded: bool,
}

#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Physical eigenstates, ordered by eigenvalue (real part, then imaginary).
    pub states: Vec<Eigenstate>,
    /// Eigenvectors dropped as truncation artifacts.
    pub rejected: Vec<Eigenstate>,
}

/// All eigenpairs of `Σ β_j X_j` on the truncated space, split into
/// physical and truncation-dominated ones.
pub fn solve_combination_eigenstates(spec: &CombinationSpec) -> Result<EigenSolution> {
    let basis = spec.observables.basis();
    if basis.dim() > MAX_DENSE_DIM {
        return Err(invalid(format!(
            "dense eigensolve limited to dimension {MAX_DENSE_DIM}, got {}",
            basis.dim()
        )));
    }
    let m = spec.matrix();
    let pairs = eigen_general(&m)?;
    let mut states = Vec::new();
    let mut rejected = Vec::new();
    for p in pairs {
        let state = StateVector::from_amplitudes(p.vector, basis)?;
        let degraded = p.residual > 1e-10 || p.separation < 1e-8;
        let e = Eigenstate {
            eigenvalue: p.value,
            state,
            residual: p.residual,
            separation: p.separation,
            degraded,
        };
        if e.state.tail_mass > PHYSICAL_TAIL {
            rejected.push(e);
        } else {
            states.push(e);
        }
    }
    let key = |e: &Eigenstate| (e.eigenvalue.re, e.eigenvalue.im);
    states.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    rejected.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    Ok(EigenSolution { states, rejected })
}

/// Eigenvector of `Σ β_j X_j` for a prescribed eigenvalue `z`, on the
/// observables' basis: the better of the truncated-recurrence kernel and the
/// least singular vector of `Ã − z`. Returns the state and `‖(Ã − z)ψ‖`.
pub fn eigenvector_at(spec: &CombinationSpec, z: C64) -> Result<(StateVector, f64)> {
    let basis = spec.observables.basis();
    if basis.dim() > MAX_DENSE_DIM {
        return Err(invalid(format!(
            "dense eigensolve limited to dimension {MAX_DENSE_DIM}, got {}",
            basis.dim()
        )));
    }
    let m = spec.matrix();
    let (v1, r1) = kernel_vector(&m, z)?;
    let (v2, r2) = least_singular_vector(&m, z)?;
    let (v, res) = if r1 <= r2 { (v1, r1) } else { (v2, r2) };
    Ok((StateVector::from_amplitudes(v, basis)?, res))
}

/// Best-fit eigen-relation for one pair `(X_i, X_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCertificate {
    /// `(β_i, β_j)` with unit norm and the first nonzero entry real positive.
    pub beta: [C64; 2],
    pub z: C64,
    /// `min ‖(β_i X_i + β_j X_j − z)ψ‖` over unit `β` and complex `z`.
    pub residual: f64,
    pub schr_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every pair saturates the Schrödinger relation.
    PairwiseMinimizer,
    /// Only the full Robertson relation is saturated.
    RobertsonMinimizer,
    NotMinimizing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pairs: BTreeMap<String, PairCertificate>,
    pub robertson_gap: f64,
    pub verdict: Verdict,
}

fn gauge(mut b: [C64; 2]) -> [C64; 2] {
    let n = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    b[0] /= n;
    b[1] /= n;
    let lead = if b[0].norm() > 1e-12 { b[0] } else { b[1] };
    let ph = lead.conj() / lead.norm();
    [b[0] * ph, b[1] * ph]
}

/// For every pair, the complex combination that comes closest to having
/// `ψ` as an eigenvector, its residual and Schrödinger gap; plus the
/// Robertson gap of the whole set.
pub fn minimizer_certificate(state: &StateVector, obs: &ObservableSet) -> Result<Certificate> {
    let (means, g) = means_and_gram(obs, StateRef::Pure(state), &MomentOptions::default())?;
    let (_, vecs) = centered_vectors(obs, state);
    let rep = MomentReport::from_gram(means.clone(), &g)?;
    let n = obs.len();
    if n < 2 {
        return Err(invalid("a certificate needs at least two observables"));
    }
    let mut pairs = BTreeMap::new();
    let mut all_pairs = true;
    for i in 0..n {
        for j in i + 1..n {
            // ‖Σβδφ‖² = β† G₂ β on the 2×2 block
            let block = CMatrix::from_fn(2, 2, |a, b| {
                let (p, q) = ([i, j][a], [i, j][b]);
                g[(p, q)]
            });
            let eig = HermitianEigen::new(&((&block + block.adjoint()) * c(0.5, 0.0)))?;
            let beta = gauge([eig.vectors[(0, 0)], eig.vectors[(1, 0)]]);
            let z = beta[0] * means[i] + beta[1] * means[j];
            // the norm of the residual vector keeps full precision, √λ_min does not
            let residual = (&vecs[i] * beta[0] + &vecs[j] * beta[1]).norm();
            let gaps = PairGaps::from_matrices(&rep.sigma, &rep.commut, i, j);
            all_pairs &= gaps.saturated.schr;
            pairs.insert(
                pair_key(i, j),
                PairCertificate {
                    beta,
                    z,
                    residual,
                    schr_gap: gaps.schr_gap,
                },
            );
        }
    }
    let cs = crate::matrixkit::char_coeffs_real(&rep.sigma)?;
    let cc = crate::matrixkit::char_coeffs_real(&rep.commut)?;
    let diag_prod: f64 = (0..n).map(|i| rep.sigma[(i, i)]).product();
    let robertson_gap = cs[n] - cc[n];
    let verdict = if all_pairs {
        Verdict::PairwiseMinimizer
    } else if is_saturated(cs[n], cc[n], diag_prod) {
        Verdict::RobertsonMinimizer
    } else {
        Verdict::NotMinimizing
    };
    Ok(Certificate {
        pairs,
        robertson_gap,
        verdict,
    })
}

/// Residual `‖(Σβ_jX_j − z)ψ‖` of an explicit eigen-relation.
pub fn combination_residual(state: &StateVector, spec: &CombinationSpec, z: C64) -> Result<f64> {
    state.check_same(&spec.observables.basis())?;
    let (means, vecs) = centered_vectors(&spec.observables, state);
    let mut r = CVector::zeros(state.dim());
    let mut shift = ZERO;
    for ((b, v), m) in spec.beta.iter().zip(&vecs).zip(&means) {
        r += v * *b;
        shift += *b * *m;
    }
    r += &state.amplitudes * (shift - z);
    Ok(r.norm())
}

fn check_eigenvalue(p: &IntelligentParams) -> Result<()> {
    match p.normalizability() {
        Normalizability::None => Err(invalid("normalizability |w ± l| < 2|u| violated for both branches")),
        Normalizability::Free => Ok(()),
        Normalizability::Quantized { stable_l } => {
            let m = -(p.k + p.z / stable_l);
            let mr = m.re.round();
            if mr < 0.0 || (m - c(mr, 0.0)).norm() > 1e-8 * m.norm().max(1.0) {
                return Err(Error::NotNormalizable(format!(
                    "z must equal −l_s(k+m) with l_s = {stable_l}; got z = {}",
                    p.z
                )));
            }
            Ok(())
        }
    }
}

/// Eigenstate of `u K₋ + v K₊ + w K₃` with eigenvalue `z` from the kernel of
/// the truncated eigen-recurrence. Works at `l = 0`, where the closed form
/// degenerates.
pub fn su11_intelligent_solver(p: &IntelligentParams, n: usize) -> Result<StateVector> {
    let p = IntelligentParams::new(p.z, p.u, p.v, p.w, p.k)?;
    check_eigenvalue(&p)?;
    let basis = BasisSpec::su11(p.k, n)?;
    let len = 2 * n.max(16);
    if len > 4 * MAX_DENSE_DIM {
        return Err(invalid(format!("cutoff {n} too large for the kernel solver")));
    }
    let r = su11_rep(p.k, len)?;
    let m = &r.km.matrix * p.u + &r.kp.matrix * p.v + &r.k3.matrix * p.w;
    // Dropping the last row follows the recurrence, which is right when both
    // branches decay; with one growing branch the least singular vector of
    // the full matrix is the stable choice. Keep whichever fits better.
    let (v1, r1) = kernel_vector(&m, p.z)?;
    let (v2, r2) = least_singular_vector(&m, p.z)?;
    let (v, res) = if r1 <= r2 { (v1, r1) } else { (v2, r2) };
    let scale = p.u.norm().max(p.v.norm()).max(p.w.norm()) * len as f64;
    if !(res <= 1e-6 * scale) {
        return Err(Error::Numeric(format!("kernel residual {res:.2e} too large")));
    }
    check_tail(StateVector::from_work_vector(&v, basis)?)
}

/// Closed form where it applies, kernel solver at `l = 0` or `w = −l_s`.
pub fn su11_intelligent_any(p: &IntelligentParams, n: usize) -> Result<StateVector> {
    match su11_intelligent(p, n) {
        Err(Error::DegenerateParameter(_)) => su11_intelligent_solver(p, n),
        other => other,
    }
}

/// The coherent state `|ξ;k⟩` that is an eigenvector of `u K₋ + v K₊` with
/// eigenvalue `z = −2k√(−uv)`; then `ξ = −√(−uv)/u`, so `ξ² = −v/u`.
pub fn pair_form_cs(u: C64, v: C64, k: f64, n: usize) -> Result<(C64, StateVector)> {
    if !(u.norm() > v.norm()) {
        return Err(invalid(format!(
            "pair-form eigenstates exist for |u| > |v| only, got |u| = {}, |v| = {}",
            u.norm(),
            v.norm()
        )));
    }
    let s = principal_sqrt(-u * v);
    let xi = -s / u;
    let z = -s * (2.0 * k);
    Ok((z, su11_cs(xi, k, n)?))
}

/// Parameters `(u, v, w)` of `u K₋ + v K₊ + w K₃` whose `z = 0` eigenstate is
/// `|ξ;k⟩` with `ξ = −tanh r·e^{iθ}`: `u = cosh²r`, `v = sinh²r·e^{2iθ}`,
/// `w = sinh 2r·e^{iθ}`.
pub fn cs_reduction_params(r: f64, theta: f64) -> (C64, C64, C64) {
    (
        c(r.cosh().powi(2), 0.0),
        C64::from_polar(r.sinh().powi(2), 2.0 * theta),
        C64::from_polar((2.0 * r).sinh(), theta),
    )
}

/// Smallest equal variance found by [`equal_variance_floor`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCandidate {
    pub delta0_sq: f64,
    pub ratio: f64,
    pub phase: f64,
}

/// Scan `u K₋ + v K₊` eigenstates over `|v|/|u| ∈ [0, 0.95]` and phases and
/// report the smallest equal variance `(ΔK₁)² = (ΔK₂)²` met, with the
/// parameters where it occurs. A candidate value for the squeezing floor of
/// the family, not a proven infimum.
pub fn equal_variance_floor(k: f64, n: usize, grid: usize) -> Result<ThresholdCandidate> {
    let obs = ObservableSet::su11(k, n)?;
    let mut best = ThresholdCandidate {
        delta0_sq: f64::INFINITY,
        ratio: 0.0,
        phase: 0.0,
    };
    for a in 0..grid {
        let ratio = 0.95 * a as f64 / (grid.max(2) - 1) as f64;
        for b in 0..grid {
            let phase = 2.0 * std::f64::consts::PI * b as f64 / grid as f64;
            let (_, s) = match pair_form_cs(c(1.0, 0.0), C64::from_polar(ratio, phase), k, n) {
                Ok(x) => x,
                Err(Error::Truncation { .. }) => continue,
                Err(e) => return Err(e),
            };
            let rep = crate::moments::moment_report(&obs, &s)?;
            let (x2, y2) = (rep.sigma[(0, 0)], rep.sigma[(1, 1)]);
            if (x2 - y2).abs() <= 1e-9 * x2.max(y2) && x2 < best.delta0_sq {
                best = ThresholdCandidate {
                    delta0_sq: x2,
                    ratio,
                    phase,
                };
            }
        }
    }
    if !best.delta0_sq.is_finite() {
        return Err(Error::Numeric("no equal-variance point on the scan grid".into()));
    }
    Ok(best)
}
