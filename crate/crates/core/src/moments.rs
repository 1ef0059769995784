//! First and second moments: means, uncertainty matrix σ, mean-commutator
//! matrix C and the Robertson matrix R = σ + iC, for pure and mixed states.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{boson_rep, su11_rep, su2_rep, tensor_rep, BasisSpec, DensityMatrix, Operator, StateVector};
use crate::matrixkit::{c, hermitian_defect, inverse, psd_min_eig, CMatrix, CVector, RMatrix, C64, I, ZERO};
use crate::states::SqueezeParams;

/// Ordered list of Hermitian observables on one basis. Canonical sets are
/// ordered (q₁..q_s, p₁..p_s).
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub name: String,
    pub ops: Vec<Operator>,
}

impl ObservableSet {
    pub fn new(name: impl Into<String>, ops: Vec<Operator>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| invalid("empty observable set"))?;
        for op in &ops {
            if op.basis != first.basis {
                return Err(Error::BasisMismatch(format!(
                    "{} on {} vs {} on {}",
                    op.label,
                    op.basis.describe(),
                    first.label,
                    first.basis.describe()
                )));
            }
            let d = hermitian_defect(&op.matrix);
            if d > 1e-12 {
                return Err(invalid(format!("{} is not Hermitian (defect {d:.2e})", op.label)));
            }
        }
        Ok(ObservableSet {
            name: name.into(),
            ops,
        })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn basis(&self) -> BasisSpec {
        self.ops[0].basis
    }

    pub fn labels(&self) -> Vec<String> {
        self.ops.iter().map(|o| o.label.clone()).collect()
    }

    /// (q, p) for one mode or (q₁, q₂, p₁, p₂) for two.
    pub fn canonical(s: usize, cutoff: usize) -> Result<Self> {
        match s {
            1 => {
                let b = boson_rep(cutoff)?;
                Self::new("canonical", vec![b.q, b.p])
            }
            2 => {
                let t = tensor_rep(2, cutoff)?;
                let mut ops = t.q;
                ops.extend(t.p);
                Self::new("canonical:2", ops)
            }
            _ => Err(Error::UnsupportedScale(format!("canonical set with s = {s}"))),
        }
    }

    /// (K₁, K₂, K₃) in D⁺(k).
    pub fn su11(k: f64, cutoff: usize) -> Result<Self> {
        let r = su11_rep(k, cutoff)?;
        Self::new(format!("su11:{k}"), vec![r.k1, r.k2, r.k3])
    }

    /// (J₁, J₂, J₃) for spin j.
    pub fn su2(j: f64) -> Result<Self> {
        let r = su2_rep(j)?;
        Self::new(format!("su2:{j}"), vec![r.j1, r.j2, r.j3])
    }

    /// Quadratures of a²: X = (a² + a†²)/2, Y = (a² − a†²)/(2i).
    pub fn a2_quadratures(cutoff: usize) -> Result<Self> {
        let b = boson_rep(cutoff)?;
        let a2 = &b.a.matrix * &b.a.matrix;
        let ad2 = a2.adjoint();
        let x = (&a2 + &ad2) * c(0.5, 0.0);
        let y = (&a2 - &ad2) * c(0.0, -0.5);
        let basis = b.a.basis;
        Self::new(
            "a2-quadratures",
            vec![Operator::new("X", x, basis)?, Operator::new("Y", y, basis)?],
        )
    }

    /// Look up a set by registry name: `canonical[:s]`, `su11[:k]`,
    /// `su2[:j]`, `a2-quadratures`. `cutoff` is the per-mode cutoff for
    /// truncated spaces.
    pub fn from_name(name: &str, cutoff: usize) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let num = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad parameter {a:?} in observable set {name:?}"))),
            }
        };
        match head {
            "canonical" => {
                let s = num(1.0)?;
                if s != s.round() || s < 1.0 {
                    return Err(invalid(format!("mode count must be a positive integer, got {s}")));
                }
                Self::canonical(s as usize, cutoff)
            }
            "su11" => Self::su11(num(0.5)?, cutoff),
            "su2" => Self::su2(num(0.5)?),
            "a2-quadratures" if arg.is_none() => Self::a2_quadratures(cutoff),
            _ => Err(invalid(format!("unknown observable set {name:?}"))),
        }
    }

    /// Two-element set `(X, Y)`.
    pub fn pair(x: &Operator, y: &Operator) -> Result<Self> {
        Self::new(format!("{},{}", x.label, y.label), vec![x.clone(), y.clone()])
    }

    /// The set `X'_i = Σ_j T_ij X_j` for a real matrix `T`.
    pub fn transformed(&self, t: &RMatrix) -> Result<Self> {
        let n = self.len();
        if t.nrows() != n || t.ncols() != n {
            return Err(invalid(format!("frame matrix must be {n}x{n}")));
        }
        let mut ops = Vec::with_capacity(n);
        for i in 0..n {
            let terms: Vec<(C64, &Operator)> = (0..n).map(|j| (c(t[(i, j)], 0.0), &self.ops[j])).collect();
            ops.push(Operator::combination(&format!("T{i}"), &terms)?);
        }
        Self::new(format!("{}·T", self.name), ops)
    }
}

/// A pure or mixed state.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

impl StateRef<'_> {
    pub fn basis(&self) -> BasisSpec {
        match self {
            StateRef::Pure(s) => s.basis,
            StateRef::Mixed(s) => s.basis,
        }
    }

    pub fn tail_mass(&self) -> f64 {
        match self {
            StateRef::Pure(s) => s.tail_mass,
            StateRef::Mixed(s) => s.tail_mass(),
        }
    }
}

/// Limits applied before moments are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    /// States with a larger tail mass are refused.
    pub tail_limit: f64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { tail_limit: 1e-8 }
    }
}

impl MomentOptions {
    /// Accept any tail mass.
    pub fn unchecked() -> Self {
        MomentOptions {
            tail_limit: f64::INFINITY,
        }
    }
}

/// Means, σ, C, R = σ + iC and their PSD certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub means: Vec<f64>,
    pub sigma: RMatrix,
    pub commut: RMatrix,
    pub robertson: CMatrix,
    pub sigma_min_eig: f64,
    pub robertson_min_eig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdJson {
    pub sigma_min_eig: f64,
    pub robertson_min_eig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReportJson {
    pub means: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub commut: Vec<Vec<f64>>,
    pub psd: PsdJson,
}

pub(crate) fn rows(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect()
}

impl MomentReport {
    pub fn to_json(&self) -> MomentReportJson {
        MomentReportJson {
            means: self.means.clone(),
            sigma: rows(&self.sigma),
            commut: rows(&self.commut),
            psd: PsdJson {
                sigma_min_eig: self.sigma_min_eig,
                robertson_min_eig: self.robertson_min_eig,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Build from a raw second-moment matrix `G_ij = ⟨(X_i−⟨X_i⟩)(X_j−⟨X_j⟩)⟩`.
    pub(crate) fn from_gram(means: Vec<f64>, g: &CMatrix) -> Result<Self> {
        let n = means.len();
        let sigma = RMatrix::from_fn(n, n, |i, j| 0.5 * (g[(i, j)].re + g[(j, i)].re));
        let commut = RMatrix::from_fn(n, n, |i, j| 0.5 * (g[(i, j)].im - g[(j, i)].im));
        let robertson = CMatrix::from_fn(n, n, |i, j| c(sigma[(i, j)], commut[(i, j)]));
        let sigma_min_eig = psd_min_eig(&sigma.map(|x| c(x, 0.0)))?;
        let robertson_min_eig = psd_min_eig(&robertson)?;
        Ok(MomentReport {
            means,
            sigma,
            commut,
            robertson,
            sigma_min_eig,
            robertson_min_eig,
        })
    }
}

fn check_state(obs: &ObservableSet, state: StateRef<'_>, opts: &MomentOptions) -> Result<()> {
    if obs.basis() != state.basis() {
        return Err(Error::BasisMismatch(format!(
            "observables on {} but state on {}",
            obs.basis().describe(),
            state.basis().describe()
        )));
    }
    let tail = state.tail_mass();
    if tail > opts.tail_limit {
        return Err(Error::Truncation {
            tail_mass: tail,
            limit: opts.tail_limit,
            cutoff: state.basis().cutoff(),
        });
    }
    Ok(())
}

/// Pure-state centered vectors `δφ_i = (X_i − ⟨X_i⟩)ψ` and the means.
pub(crate) fn centered_vectors(obs: &ObservableSet, psi: &StateVector) -> (Vec<f64>, Vec<CVector>) {
    let mut means = Vec::with_capacity(obs.len());
    let mut vecs = Vec::with_capacity(obs.len());
    for op in &obs.ops {
        let xv = op.apply(&psi.amplitudes);
        let m = psi.amplitudes.dotc(&xv).re;
        vecs.push(xv - &psi.amplitudes * c(m, 0.0));
        means.push(m);
    }
    (means, vecs)
}

/// Means and the second-moment matrix `G = σ + iC` (unsymmetrized).
pub(crate) fn means_and_gram(
    obs: &ObservableSet,
    state: StateRef<'_>,
    opts: &MomentOptions,
) -> Result<(Vec<f64>, CMatrix)> {
    check_state(obs, state, opts)?;
    let n = obs.len();
    match state {
        StateRef::Pure(psi) => {
            let (means, vecs) = centered_vectors(obs, psi);
            let g = CMatrix::from_fn(n, n, |i, j| vecs[i].dotc(&vecs[j]));
            Ok((means, g))
        }
        StateRef::Mixed(rho) => {
            let rx: Vec<CMatrix> = obs.ops.iter().map(|op| &rho.matrix * &op.matrix).collect();
            let means: Vec<f64> = rx.iter().map(|m| m.trace().re).collect();
            let mut g = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // tr(ρ X_i X_j) = Σ_ab (ρX_i)_ab (X_j)_ba
                    let xj = &obs.ops[j].matrix;
                    let mut t = ZERO;
                    for a in 0..rx[i].nrows() {
                        for b in 0..rx[i].ncols() {
                            t += rx[i][(a, b)] * xj[(b, a)];
                        }
                    }
                    g[(i, j)] = t - c(means[i] * means[j], 0.0);
                }
            }
            Ok((means, g))
        }
    }
}

/// Moment report with the default tail limit.
pub fn moment_report<'a>(obs: &ObservableSet, state: impl Into<StateRef<'a>>) -> Result<MomentReport> {
    moment_report_with(obs, state.into(), &MomentOptions::default())
}

pub fn moment_report_with(obs: &ObservableSet, state: StateRef<'_>, opts: &MomentOptions) -> Result<MomentReport> {
    let (means, g) = means_and_gram(obs, state, opts)?;
    MomentReport::from_gram(means, &g)
}

/// Closed-form uncertainty matrix of the eigenstates of `Ã = ℬX⃗`:
/// `σ = ℬ⁻¹ [[0, C̃], [C̃ᵀ, 0]] ℬ⁻ᵀ` with
/// `ℬ = [[u+v, i(u−v)], [u*+v*, i(v*−u*)]]` and `C̃ = ½⟨[Ã, Ã†]⟩`.
pub fn gaussian_sigma(u: &CMatrix, v: &CMatrix, ct: &CMatrix) -> Result<CMatrix> {
    let s = u.nrows();
    for (name, m) in [("u", u), ("v", v), ("C̃", ct)] {
        if m.nrows() != s || m.ncols() != s {
            return Err(invalid(format!("{name} must be {s}x{s}")));
        }
    }
    let mut b = CMatrix::zeros(2 * s, 2 * s);
    let uc = u.map(|z| z.conj());
    let vc = v.map(|z| z.conj());
    b.view_mut((0, 0), (s, s)).copy_from(&(u + v));
    b.view_mut((0, s), (s, s)).copy_from(&((u - v) * I));
    b.view_mut((s, 0), (s, s)).copy_from(&(&uc + &vc));
    b.view_mut((s, s), (s, s)).copy_from(&((&vc - &uc) * I));
    let bi = inverse(&b).ok_or_else(|| invalid("block matrix ℬ is singular"))?;
    let cond = crate::matrixkit::max_abs(&b) * crate::matrixkit::max_abs(&bi);
    if !cond.is_finite() || cond > 1e14 {
        return Err(invalid(format!("block matrix ℬ is numerically singular (cond ≈ {cond:.2e})")));
    }
    let mut mid = CMatrix::zeros(2 * s, 2 * s);
    mid.view_mut((0, s), (s, s)).copy_from(ct);
    mid.view_mut((s, 0), (s, s)).copy_from(&ct.transpose());
    Ok(&bi * mid * bi.transpose())
}

/// `(Δq², Δp², Δpq) = (½|u−v|², ½|u+v|², Im(u v*))` for the eigenstates of
/// `u a + v a†` with `a = (q + ip)/√2`.
pub fn uv_moments(sq: &SqueezeParams) -> (f64, f64, f64) {
    let (u, v) = (sq.u, sq.v);
    (
        0.5 * (u - v).norm_sqr(),
        0.5 * (u + v).norm_sqr(),
        (u * v.conj()).im,
    )
}
