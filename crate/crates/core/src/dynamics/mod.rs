//! Nonstationary oscillator: the classical amplitude `ε(t)`, the squeeze
//! parameters `u(t), v(t)` it induces, closed-form Gaussian wave functions,
//! and the classical Hamilton flow of means and widths.

pub mod expr;
pub mod ode;
pub mod profile;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{boson_rep, BasisSpec, StateVector};
use crate::matrixkit::{c, CVector, HermitianEigen, C64, I};
use crate::moments::{moment_report_with, uv_moments, MomentOptions, ObservableSet};
use crate::states::SqueezeParams;
use crate::urcheck::PairGaps;
pub use ode::Tolerances;
pub use profile::{Derivatives, OscillatorProfile, ProfileKind, ProfileSpec, ScalarFn, Spline};

/// Largest Wronskian drift accepted along a trajectory.
pub const WRONSKIAN_TOL: f64 = 1e-8;

/// `Ω²(t)` of the profile.
pub fn effective_frequency(profile: &OscillatorProfile, t: f64) -> Result<f64> {
    profile.check_time(t)?;
    profile.omega_sq(t)
}

/// `ε(0) = 1/√ω₀`, `ε̇(0) = i√ω₀`, which start from `u = 1`, `v = 0`.
pub fn canonical_initial(omega0: f64) -> (C64, C64) {
    (c(1.0 / omega0.sqrt(), 0.0), c(0.0, omega0.sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonTrajectory {
    pub t: Vec<f64>,
    pub eps: Vec<C64>,
    pub deps: Vec<C64>,
    /// `max |ε*ε̇ − εε̇* − 2i|` over the grid.
    pub wronskian_drift: f64,
}

fn wronskian_defect(e: C64, de: C64) -> f64 {
    // ε*ε̇ − εε̇* = 2i Im(ε*ε̇)
    2.0 * ((e.conj() * de).im - 1.0).abs()
}

fn check_grid(profile: &OscillatorProfile, ts: &[f64]) -> Result<()> {
    if ts.is_empty() {
        return Err(invalid("time grid is empty"));
    }
    if ts.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(invalid("time grid must be nondecreasing"));
    }
    for &t in [ts[0], *ts.last().unwrap()].iter() {
        profile.check_time(t)?;
    }
    Ok(())
}

/// Integrates `ε̈ + Ω²(t)ε = 0` from `t_grid[0]` with the given initial data.
pub fn integrate_epsilon(
    profile: &OscillatorProfile,
    t_grid: &[f64],
    eps0: C64,
    deps0: C64,
) -> Result<EpsilonTrajectory> {
    integrate_epsilon_with(profile, t_grid, eps0, deps0, &Tolerances::default())
}

pub fn integrate_epsilon_with(
    profile: &OscillatorProfile,
    t_grid: &[f64],
    eps0: C64,
    deps0: C64,
    tol: &Tolerances,
) -> Result<EpsilonTrajectory> {
    check_grid(profile, t_grid)?;
    let w0 = wronskian_defect(eps0, deps0);
    if w0 > 1e-12 {
        return Err(invalid(format!("initial Wronskian differs from 2i by {w0:.3e}")));
    }
    let rhs = |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let w2 = profile.omega_sq(t)?;
        Ok([y[2], y[3], -w2 * y[0], -w2 * y[1]])
    };
    let y0 = [eps0.re, eps0.im, deps0.re, deps0.im];
    let ys = ode::integrate(rhs, t_grid[0], y0, t_grid, tol)?;
    let eps: Vec<C64> = ys.iter().map(|y| c(y[0], y[1])).collect();
    let deps: Vec<C64> = ys.iter().map(|y| c(y[2], y[3])).collect();
    let drift = eps
        .iter()
        .zip(&deps)
        .map(|(e, d)| wronskian_defect(*e, *d))
        .fold(0.0, f64::max);
    if drift > WRONSKIAN_TOL {
        return Err(Error::StepSize(format!(
            "Wronskian drift {drift:.3e} exceeds {WRONSKIAN_TOL:e}"
        )));
    }
    Ok(EpsilonTrajectory {
        t: t_grid.to_vec(),
        eps,
        deps,
        wronskian_drift: drift,
    })
}

/// `u = (√ω₀ ε + ε̇/(i√ω₀))/2`, `v = u − √ω₀ ε` at every sample.
pub fn uv_trajectory(traj: &EpsilonTrajectory, omega0: f64) -> Vec<SqueezeParams> {
    let s = omega0.sqrt();
    traj.eps
        .iter()
        .zip(&traj.deps)
        .map(|(e, d)| {
            let u = (e * s + d / (I * s)) * 0.5;
            SqueezeParams { u, v: u - e * s }
        })
        .collect()
}

/// One row of the trajectory CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    #[serde(rename = "re(eps)")]
    pub re_eps: f64,
    #[serde(rename = "im(eps)")]
    pub im_eps: f64,
    #[serde(rename = "re(u)")]
    pub re_u: f64,
    #[serde(rename = "im(u)")]
    pub im_u: f64,
    #[serde(rename = "re(v)")]
    pub re_v: f64,
    #[serde(rename = "im(v)")]
    pub im_v: f64,
    pub dq2: f64,
    pub dp2: f64,
    pub dpq: f64,
}

pub fn trajectory_rows(traj: &EpsilonTrajectory, omega0: f64) -> Vec<TrajectoryRow> {
    uv_trajectory(traj, omega0)
        .into_iter()
        .enumerate()
        .map(|(i, sq)| {
            let (dq2, dp2, dpq) = uv_moments(&sq);
            TrajectoryRow {
                t: traj.t[i],
                re_eps: traj.eps[i].re,
                im_eps: traj.eps[i].im,
                re_u: sq.u.re,
                im_u: sq.u.im,
                re_v: sq.v.re,
                im_v: sq.v.im,
                dq2,
                dp2,
                dpq,
            }
        })
        .collect()
}

fn principal_inv_sqrt_branch(z: C64, prev: Option<C64>) -> C64 {
    let s = z.sqrt();
    match prev {
        Some(p) if (s - p).norm() > (-s - p).norm() => -s,
        _ => s,
    }
}

fn check_gaussian(sq: &SqueezeParams) -> Result<()> {
    let scale = sq.u.norm().max(sq.v.norm());
    if (sq.u - sq.v).norm() <= 1e-14 * scale {
        return Err(Error::DegenerateParameter("u = v: infinitely squeezed Gaussian".into()));
    }
    if !(sq.u.norm() > sq.v.norm()) {
        return Err(invalid(format!(
            "Gaussian needs |u| > |v|, got |u| = {}, |v| = {}",
            sq.u.norm(),
            sq.v.norm()
        )));
    }
    Ok(())
}

fn gaussian(alpha: C64, sq: &SqueezeParams, root: C64, xs: &[f64]) -> Vec<C64> {
    let (u, v) = (sq.u, sq.v);
    let pref = std::f64::consts::PI.powf(-0.25) / root;
    let w = (u + v) / (u - v);
    let x0 = alpha * std::f64::consts::SQRT_2 / (u + v);
    let phase = ((u.conj() + v.conj()) / (u + v) * alpha * alpha - alpha.norm_sqr()) * 0.5;
    xs.iter()
        .map(|&x| {
            let d = c(x, 0.0) - x0;
            pref * (-(w * d * d) * 0.5 + phase).exp()
        })
        .collect()
}

/// Closed-form wave function `⟨x|α, u, v⟩` (with `l₀ = 1`) on the grid,
/// principal branch of `(u − v)^{−1/2}`. Inputs off the shell
/// `|u|² − |v|² = 1` are rescaled, with `α` taken as the eigenvalue of the
/// given `ua + va†`.
pub fn wavefunction(alpha: C64, sq: &SqueezeParams, xs: &[f64]) -> Result<Vec<C64>> {
    check_gaussian(sq)?;
    let s = sq.shell_scale();
    let n = sq.normalized();
    Ok(gaussian(alpha / s, &n, (n.u - n.v).sqrt(), xs))
}

/// Wave functions along a trajectory, with the branch of `(u − v)^{1/2}`
/// chosen by continuity from the previous sample.
pub fn wavefunction_track(alpha: C64, sqs: &[SqueezeParams], xs: &[f64]) -> Result<Vec<Vec<C64>>> {
    let mut prev = None;
    let mut out = Vec::with_capacity(sqs.len());
    for sq in sqs {
        check_gaussian(sq)?;
        let s = sq.shell_scale();
        let n = sq.normalized();
        let root = principal_inv_sqrt_branch(n.u - n.v, prev);
        prev = Some(root);
        out.push(gaussian(alpha / s, &n, root, xs));
    }
    Ok(out)
}

/// `⟨a⟩` in the eigenstate of `ua + va†` with eigenvalue `α` on the shell.
pub fn ladder_mean(alpha: C64, sq: &SqueezeParams) -> C64 {
    let d = sq.u.norm_sqr() - sq.v.norm_sqr();
    (sq.u.conj() * alpha - sq.v * alpha.conj()) / d
}

/// Means and widths `(⟨q⟩, ⟨p⟩, q̃ = Δq, p̃ = Δpq/Δq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPhasePoint {
    pub q_mean: f64,
    pub p_mean: f64,
    pub q_tilde: f64,
    pub p_tilde: f64,
}

impl ClassicalPhasePoint {
    /// Phase point of the eigenstate of `ua + va†` with eigenvalue `α`.
    pub fn from_state(alpha: C64, sq: &SqueezeParams) -> Self {
        let n = sq.normalized();
        let a = ladder_mean(alpha / sq.shell_scale(), &n);
        let (dq2, _, dpq) = uv_moments(&n);
        let qt = dq2.sqrt();
        ClassicalPhasePoint {
            q_mean: std::f64::consts::SQRT_2 * a.re,
            p_mean: std::f64::consts::SQRT_2 * a.im,
            q_tilde: qt,
            p_tilde: dpq / qt,
        }
    }

    /// `ℋ = g₁(⟨p⟩² + p̃² + 1/(4q̃²)) + 2g₂(⟨p⟩⟨q⟩ + p̃q̃) + g₃(⟨q⟩² + q̃²)`.
    pub fn energy(&self, g: [f64; 3]) -> f64 {
        let (q, p, qt, pt) = (self.q_mean, self.p_mean, self.q_tilde, self.p_tilde);
        g[0] * (p * p + pt * pt + 1.0 / (4.0 * qt * qt)) + 2.0 * g[1] * (p * q + pt * qt) + g[2] * (q * q + qt * qt)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTrajectory {
    pub t: Vec<f64>,
    pub points: Vec<ClassicalPhasePoint>,
    /// `ℋ` along the flow.
    pub energy: Vec<f64>,
}

/// Hamilton equations of `ℋ` (times ω₀) for both canonical pairs.
pub fn classical_flow(
    profile: &OscillatorProfile,
    init: ClassicalPhasePoint,
    t_grid: &[f64],
) -> Result<ClassicalTrajectory> {
    check_grid(profile, t_grid)?;
    if !(init.q_tilde > 0.0) {
        return Err(Error::SingularProfile(format!("q̃(0) = {} must be positive", init.q_tilde)));
    }
    let w0 = profile.omega0;
    let rhs = |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let [q, p, qt, pt] = *y;
        if !(qt > 1e-12) {
            return Err(Error::SingularProfile(format!("width q̃ collapsed to {qt:e} at t = {t}")));
        }
        let [g1, g2, g3] = profile.coefficients(t)?;
        Ok([
            w0 * (2.0 * g1 * p + 2.0 * g2 * q),
            -w0 * (2.0 * g2 * p + 2.0 * g3 * q),
            w0 * (2.0 * g1 * pt + 2.0 * g2 * qt),
            -w0 * (-g1 / (2.0 * qt * qt * qt) + 2.0 * g2 * pt + 2.0 * g3 * qt),
        ])
    };
    let y0 = [init.q_mean, init.p_mean, init.q_tilde, init.p_tilde];
    let ys = ode::integrate(rhs, t_grid[0], y0, t_grid, &Tolerances::default())?;
    let mut points = Vec::with_capacity(ys.len());
    let mut energy = Vec::with_capacity(ys.len());
    for (y, &t) in ys.iter().zip(t_grid) {
        let pt = ClassicalPhasePoint {
            q_mean: y[0],
            p_mean: y[1],
            q_tilde: y[2],
            p_tilde: y[3],
        };
        energy.push(pt.energy(profile.coefficients(t)?));
        points.push(pt);
    }
    Ok(ClassicalTrajectory {
        t: t_grid.to_vec(),
        points,
        energy,
    })
}

/// Position-space wave function of Fock amplitudes via Hermite functions.
pub fn fock_to_position(amplitudes: &CVector, xs: &[f64]) -> Vec<C64> {
    let n = amplitudes.len();
    xs.iter()
        .map(|&x| {
            let mut prev = 0.0;
            let mut cur = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
            let mut acc = amplitudes[0] * cur;
            for k in 1..n {
                let kf = k as f64;
                let next = (2.0 / kf).sqrt() * x * cur - ((kf - 1.0) / kf).sqrt() * prev;
                prev = cur;
                cur = next;
                acc += amplitudes[k] * cur;
            }
            acc
        })
        .collect()
}

/// Largest deviation of `ln Ψ` from its least-squares quadratic fit over
/// grid points where `|Ψ|² ≥ 10⁻⁶ max|Ψ|²`, with the phase unwrapped along
/// the grid. Zero for any Gaussian of the form above.
pub fn quadratic_log_fit_residual(xs: &[f64], psi: &[C64]) -> Result<f64> {
    let peak = psi.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    let keep: Vec<usize> = (0..xs.len()).filter(|&i| psi[i].norm_sqr() >= 1e-6 * peak).collect();
    if keep.len() < 4 {
        return Err(invalid("too few grid points carry the wave function"));
    }
    let mut re = Vec::with_capacity(keep.len());
    let mut im = Vec::with_capacity(keep.len());
    let mut last: Option<f64> = None;
    for &i in &keep {
        let l = psi[i].ln();
        let mut ph = l.im;
        if let Some(p) = last {
            ph += (2.0 * std::f64::consts::PI) * ((p - ph) / (2.0 * std::f64::consts::PI)).round();
        }
        last = Some(ph);
        re.push(l.re);
        im.push(ph);
    }
    let a = nalgebra::DMatrix::from_fn(keep.len(), 3, |r, col| xs[keep[r]].powi(col as i32));
    let qr = a.clone().qr();
    let mut worst: f64 = 0.0;
    for ys in [&re, &im] {
        let b = nalgebra::DVector::from_column_slice(ys);
        let qtb = qr.q().transpose() * &b;
        let coef = qr
            .r()
            .solve_upper_triangular(&qtb)
            .ok_or_else(|| Error::Numeric("quadratic fit is singular".into()))?;
        let fit = &a * coef;
        worst = worst.max((fit - b).amax());
    }
    Ok(worst)
}

/// Result of evolving a state under `½(p² + q²) + λq⁴` in Fock space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepartureRun {
    pub lambda: f64,
    pub t: Vec<f64>,
    /// Schrödinger gap of `(q, p)`; zero exactly on the squeezed-state family.
    pub schr_gap: Vec<f64>,
    /// Deviation of `ln Ψ(x)` from a quadratic.
    pub log_fit_residual: Vec<f64>,
    pub max_tail: f64,
}

/// Evolves `glauber(α)` under `½(p² + q²) + λq⁴` on Fock(N) and records how
/// far it leaves the Gaussian family. `λ = 0` is the control run.
pub fn quartic_departure(lambda: f64, alpha: C64, t_grid: &[f64], n: usize) -> Result<DepartureRun> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("quartic coupling must be >= 0, got {lambda}")));
    }
    // the quartic term is built on a larger space so q⁴ is exact on the kept levels
    let big = n + 4;
    let b = boson_rep(big)?;
    let q2 = &b.q.matrix * &b.q.matrix;
    let h_big = (&b.p.matrix * &b.p.matrix + &q2) * c(0.5, 0.0) + (&q2 * &q2) * c(lambda, 0.0);
    let h = h_big.view((0, 0), (n, n)).into_owned();
    let eig = HermitianEigen::new(&h)?;
    let psi0 = crate::states::glauber(alpha, n)?;
    let basis = BasisSpec::fock(n)?;
    let obs = ObservableSet::canonical(1, n)?;
    let xs: Vec<f64> = (0..=400).map(|i| -8.0 + 16.0 * i as f64 / 400.0).collect();
    let opts = MomentOptions { tail_limit: 1e-6 };
    let mut out = DepartureRun {
        lambda,
        t: t_grid.to_vec(),
        schr_gap: Vec::new(),
        log_fit_residual: Vec::new(),
        max_tail: 0.0,
    };
    for &t in t_grid {
        let v = eig.apply_phase_exp(t, &psi0.amplitudes);
        let s = StateVector::from_amplitudes(v, basis)?;
        out.max_tail = out.max_tail.max(s.tail_mass);
        let rep = moment_report_with(&obs, (&s).into(), &opts)?;
        out.schr_gap.push(PairGaps::from_matrices(&rep.sigma, &rep.commut, 0, 1).schr_gap);
        let psi = fock_to_position(&s.amplitudes, &xs);
        out.log_fit_residual.push(quadratic_log_fit_residual(&xs, &psi)?);
    }
    Ok(out)
}
