//! Constructors for the coherent, squeezed and intelligent state families.
//!
//! Every constructor returns a normalized `StateVector` whose `tail_mass`
//! counts the weight at levels ≥ ⌊0.9N⌋ of the untruncated state (the part
//! cut away by the cutoff included). Constructors refuse states whose tail
//! exceeds [`TAIL_LIMIT`].

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{BasisSpec, StateVector};
use crate::matrixkit::{c, CMatrix, CVector, HermitianEigen, C64, ONE, ZERO};
use crate::specfun::{self, dd::DDComplex};

/// Largest tail mass a constructor accepts.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Coefficients of the squeezing operator `u a + v a†` (or the su(1,1)
/// analogue `u K₋ + v K₊`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub u: C64,
    pub v: C64,
}

impl SqueezeParams {
    pub fn new(u: C64, v: C64) -> Result<Self> {
        if !(u.re.is_finite() && u.im.is_finite() && v.re.is_finite() && v.im.is_finite()) {
            return Err(invalid("squeeze parameters must be finite"));
        }
        if u.norm() <= v.norm() {
            return Err(invalid(format!(
                "squeezed states need |u| > |v|, got |u| = {}, |v| = {}",
                u.norm(),
                v.norm()
            )));
        }
        Ok(SqueezeParams { u, v })
    }

    pub fn identity() -> Self {
        SqueezeParams { u: ONE, v: ZERO }
    }

    /// `u = cosh r`, `v = sinh r · e^{iθ}`.
    pub fn from_r_theta(r: f64, theta: f64) -> Self {
        SqueezeParams {
            u: c(r.cosh(), 0.0),
            v: C64::from_polar(r.sinh(), theta),
        }
    }

    /// `√(|u|² − |v|²)`.
    pub fn shell_scale(&self) -> f64 {
        (self.u.norm_sqr() - self.v.norm_sqr()).sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.u.norm_sqr() - self.v.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// Rescaled onto the shell `|u|² − |v|² = 1`.
    pub fn normalized(&self) -> Self {
        let s = self.shell_scale();
        SqueezeParams {
            u: self.u / s,
            v: self.v / s,
        }
    }

    /// Squeeze parameter ζ of `exp(ζK₊ − ζ*K₋)`, with `cosh|ζ| = |u|` on the
    /// shell and `arg ζ = arg v − arg u − π`.
    pub fn zeta(&self) -> C64 {
        let n = self.normalized();
        let r = n.u.norm().max(1.0).acosh();
        if r == 0.0 {
            return ZERO;
        }
        C64::from_polar(r, n.v.arg() - n.u.arg() - PI)
    }
}

/// Which realization of su(1,1) an exponential acts in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algebra {
    /// K₊ = a†²/2, K₋ = a²/2 on Fock space.
    Boson,
    /// Discrete series D⁺(k).
    Discrete(f64),
}

type GenKey = (u64, usize);

fn generator_cache() -> &'static Mutex<HashMap<GenKey, Arc<HermitianEigen>>> {
    static CACHE: OnceLock<Mutex<HashMap<GenKey, Arc<HermitianEigen>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Spectral decomposition of `H = i(K₊ − K₋)` on `dim` levels, cached.
fn squeeze_generator(alg: Algebra, dim: usize) -> Result<Arc<HermitianEigen>> {
    let key = match alg {
        Algebra::Boson => (u64::MAX, dim),
        Algebra::Discrete(k) => (k.to_bits(), dim),
    };
    if let Some(e) = generator_cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    // K₊ − K₋ is real antisymmetric with a single off-diagonal band.
    let mut h = CMatrix::zeros(dim, dim);
    match alg {
        Algebra::Boson => {
            for n in 0..dim.saturating_sub(2) {
                let x = 0.5 * (((n + 1) * (n + 2)) as f64).sqrt();
                h[(n + 2, n)] = c(0.0, x);
                h[(n, n + 2)] = c(0.0, -x);
            }
        }
        Algebra::Discrete(k) => {
            for n in 0..dim.saturating_sub(1) {
                let nf = n as f64;
                let x = ((nf + 1.0) * (2.0 * k + nf)).sqrt();
                h[(n + 1, n)] = c(0.0, x);
                h[(n, n + 1)] = c(0.0, -x);
            }
        }
    }
    let e = Arc::new(HermitianEigen::new(&h)?);
    generator_cache().lock().unwrap().insert(key, e.clone());
    Ok(e)
}

fn rotation_phase(alg: Algebra, level: usize, phi: f64) -> C64 {
    let t = match alg {
        Algebra::Boson => 0.5 * level as f64,
        Algebra::Discrete(_) => level as f64,
    };
    C64::from_polar(1.0, phi * t)
}

/// `exp(ζK₊ − ζ*K₋) x` for a vector on the levels of `alg`.
///
/// Uses `exp(ζK₊ − ζ*K₋) = R exp(|ζ|(K₊ − K₋)) R†` with the level rotation
/// `R = e^{i arg ζ · n̂/2}` (boson) or `e^{i arg ζ · m}` (discrete series),
/// and a cached eigendecomposition of `i(K₊ − K₋)`. The result is exact for
/// the truncated generator; pad `x` with empty levels to keep the
/// truncation boundary far from the support.
pub fn apply_su11_exp(alg: Algebra, zeta: C64, x: &CVector) -> Result<CVector> {
    let r = zeta.norm();
    if r == 0.0 {
        return Ok(x.clone());
    }
    let phi = zeta.arg();
    let gen = squeeze_generator(alg, x.len())?;
    let mut y = x.clone();
    for (n, yi) in y.iter_mut().enumerate() {
        *yi *= rotation_phase(alg, n, -phi);
    }
    // exp(r(K₊−K₋)) = exp(−i r H) with H = i(K₊−K₋)
    let mut y = gen.apply_phase_exp(r, &y);
    for (n, yi) in y.iter_mut().enumerate() {
        *yi *= rotation_phase(alg, n, phi);
    }
    Ok(y)
}

/// Dense matrix of `ζK₊ − ζ*K₋` on `dim` levels (for exponentiation by Padé).
pub fn su11_generator_matrix(alg: Algebra, zeta: C64, dim: usize) -> CMatrix {
    let mut g = CMatrix::zeros(dim, dim);
    match alg {
        Algebra::Boson => {
            for n in 0..dim.saturating_sub(2) {
                let x = 0.5 * (((n + 1) * (n + 2)) as f64).sqrt();
                g[(n + 2, n)] = zeta * x;
                g[(n, n + 2)] = -zeta.conj() * x;
            }
        }
        Algebra::Discrete(k) => {
            for n in 0..dim.saturating_sub(1) {
                let nf = n as f64;
                let x = ((nf + 1.0) * (2.0 * k + nf)).sqrt();
                g[(n + 1, n)] = zeta * x;
                g[(n, n + 1)] = -zeta.conj() * x;
            }
        }
    }
    g
}

pub(crate) fn check_tail(s: StateVector) -> Result<StateVector> {
    if s.tail_mass > TAIL_LIMIT {
        return Err(Error::Truncation {
            tail_mass: s.tail_mass,
            limit: TAIL_LIMIT,
            cutoff: s.basis.cutoff(),
        });
    }
    Ok(s)
}

/// Build a work vector from log-magnitudes and phases of a series, extended
/// past `n` until the terms are negligible, then truncate to `basis`.
fn series_state(
    basis: BasisSpec,
    ln_abs: impl Fn(usize) -> f64,
    phase: impl Fn(usize) -> f64,
) -> Result<StateVector> {
    let n = basis.dim();
    let cap = 20 * n + 2000;
    let mut logs: Vec<f64> = Vec::with_capacity(2 * n);
    let mut max_log = f64::NEG_INFINITY;
    for m in 0..cap {
        let l = ln_abs(m);
        if l.is_nan() {
            return Err(Error::Numeric(format!("series term {m} is NaN")));
        }
        max_log = max_log.max(l);
        logs.push(l);
        let decreasing = m == 0 || l <= logs[m - 1];
        if m + 1 >= n && decreasing && l < max_log - 50.0 {
            break;
        }
    }
    if !max_log.is_finite() {
        return Err(Error::Numeric("series has no finite terms".into()));
    }
    let work = CVector::from_iterator(
        logs.len(),
        logs.iter()
            .enumerate()
            .map(|(m, &l)| C64::from_polar((l - max_log).exp(), phase(m))),
    );
    StateVector::from_work_vector(&work, basis)
}

fn coherent_work(beta: C64, len: usize) -> CVector {
    let r = beta.norm();
    let th = beta.arg();
    CVector::from_fn(len, |n, _| {
        if r == 0.0 {
            return if n == 0 { ONE } else { ZERO };
        }
        let l = -0.5 * r * r + n as f64 * r.ln() - 0.5 * specfun::ln_factorial(n);
        C64::from_polar(l.exp(), n as f64 * th)
    })
}

fn work_dim(n: usize) -> usize {
    2 * n.max(16)
}

/// Glauber coherent state `|α⟩`, amplitudes `e^{−|α|²/2} αⁿ/√n!`.
pub fn glauber(alpha: C64, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::fock(n)?;
    let a = alpha.norm();
    let need = a * a + 10.0 * a + 20.0;
    if !(n as f64 > need) {
        return Err(Error::Truncation {
            tail_mass: poisson_tail(a * a, basis.tail_start()),
            limit: TAIL_LIMIT,
            cutoff: n,
        });
    }
    let th = alpha.arg();
    let s = series_state(
        basis,
        |m| {
            if a == 0.0 {
                return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            -0.5 * a * a + m as f64 * a.ln() - 0.5 * specfun::ln_factorial(m)
        },
        |m| m as f64 * th,
    )?;
    check_tail(s)
}

/// Poisson upper tail `P(n ≥ m)` for mean `mu`, summed directly.
fn poisson_tail(mu: f64, m: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut n = m;
    loop {
        let l = -mu + n as f64 * mu.ln() - specfun::ln_factorial(n);
        let t = l.exp();
        total += t;
        if (n as f64 > mu && t < 1e-30 * total.max(1e-300)) || n > m + 100_000 {
            return total.min(1.0);
        }
        n += 1;
    }
}

/// Squeezed coherent (Stoler) state: the eigenvector of `u a + v a†` with
/// eigenvalue `α`, built as `e^{i arg u} S(ζ) D(β)|0⟩`.
///
/// The parameters are rescaled onto `|u|² − |v|² = 1` first; `α` is the
/// eigenvalue for the operator as given, so on the shell it is rescaled too.
pub fn canonical_ss(alpha: C64, sq: SqueezeParams, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::fock(n)?;
    let sq = SqueezeParams::new(sq.u, sq.v)?;
    let scale = sq.shell_scale();
    let nq = sq.normalized();
    let alpha = alpha / scale;
    let beta = alpha * C64::from_polar(1.0, -nq.u.arg());
    let dim = work_dim(n);
    let work = coherent_work(beta, dim);
    let work = apply_su11_exp(Algebra::Boson, sq.zeta(), &work)? * C64::from_polar(1.0, nq.u.arg());
    check_tail(StateVector::from_work_vector(&work, basis)?)
}

/// Squeezed Fock state `S(ζ)|m⟩`, the eigenvector of `A†A` with eigenvalue
/// `m` for `A = u a + v a†` on the shell.
pub fn squeezed_fock(m: usize, sq: SqueezeParams, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::fock(n)?;
    if m >= n {
        return Err(invalid(format!("Fock level {m} outside cutoff {n}")));
    }
    let sq = SqueezeParams::new(sq.u, sq.v)?.normalized();
    let dim = work_dim(n);
    let mut work = CVector::zeros(dim);
    work[m] = ONE;
    let work = apply_su11_exp(Algebra::Boson, sq.zeta(), &work)? * C64::from_polar(1.0, sq.u.arg());
    check_tail(StateVector::from_work_vector(&work, basis)?)
}

/// Barut–Girardello state: eigenvector of K₋ with eigenvalue `z`,
/// amplitudes `N zⁿ / √(n! Γ(2k+n))`.
pub fn bg_cs(z: C64, k: f64, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::su11(k, n)?;
    let a = z.norm();
    let th = z.arg();
    let s = series_state(
        basis,
        |m| {
            if a == 0.0 {
                return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            m as f64 * a.ln() - 0.5 * (specfun::ln_factorial(m) + statrs::function::gamma::ln_gamma(2.0 * k + m as f64))
        },
        |m| m as f64 * th,
    )?;
    check_tail(s)
}

/// Closed-form normalization `N_BG = √(Γ(2k) / 0F1(2k; |z|²))`.
pub fn bg_normalization(z: C64, k: f64) -> Result<f64> {
    let f = specfun::hyp0f1(2.0 * k, z.norm_sqr())?;
    Ok((statrs::function::gamma::gamma(2.0 * k) / f).sqrt())
}

/// Perelomov su(1,1) coherent state `(1−|ξ|²)^k exp(ξK₊)|k,k⟩`.
pub fn su11_cs(xi: C64, k: f64, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::su11(k, n)?;
    let a = xi.norm();
    if !(a < 1.0) {
        return Err(invalid(format!("su(1,1) CS needs |ξ| < 1, got {a}")));
    }
    let th = xi.arg();
    let s = series_state(
        basis,
        |m| {
            if a == 0.0 {
                return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            k * (1.0 - a * a).ln() + m as f64 * a.ln()
                + 0.5 * (specfun::ln_pochhammer(2.0 * k, m) - specfun::ln_factorial(m))
        },
        |m| m as f64 * th,
    )?;
    check_tail(s)
}

/// Group-parameter ζ with `exp(ζK₊ − ζ*K₋)|k,k⟩ = |ξ;k⟩`: `ξ = e^{i arg ζ} tanh|ζ|`.
pub fn su11_zeta_for_xi(xi: C64) -> C64 {
    if xi.norm() == 0.0 {
        return ZERO;
    }
    C64::from_polar(xi.norm().atanh(), xi.arg())
}

/// Smallest cutoff from `start` (growing by ~25%) at which `build`
/// succeeds with tail mass ≤ `target`.
pub fn with_auto_cutoff(
    start: usize,
    max: usize,
    target: f64,
    build: impl Fn(usize) -> Result<StateVector>,
) -> Result<StateVector> {
    let mut n = start.max(2);
    let mut last_err = None;
    while n <= max {
        match build(n) {
            Ok(s) if s.tail_mass <= target => return Ok(s),
            Ok(s) => {
                last_err = Some(Error::Truncation {
                    tail_mass: s.tail_mass,
                    limit: target,
                    cutoff: n,
                })
            }
            Err(e @ Error::Truncation { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        n += (n / 4).max(8);
    }
    Err(last_err.unwrap_or_else(|| invalid("empty cutoff range")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Normalized `|α⟩ ± |−α⟩`, eigenvectors of `a²` with eigenvalue `α²`.
pub fn even_odd_cs(alpha: C64, parity: Parity, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::fock(n)?;
    let a = alpha.norm();
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    if a == 0.0 && parity == Parity::Odd {
        return Err(invalid("odd coherent state is the null vector at α = 0"));
    }
    if !(n as f64 > a * a + 10.0 * a + 20.0) {
        return Err(Error::Truncation {
            tail_mass: poisson_tail(a * a, basis.tail_start()),
            limit: TAIL_LIMIT,
            cutoff: n,
        });
    }
    let th = alpha.arg();
    let s = series_state(
        basis,
        |m| {
            if m % 2 != want {
                return f64::NEG_INFINITY;
            }
            if a == 0.0 {
                return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            m as f64 * a.ln() - 0.5 * specfun::ln_factorial(m)
        },
        |m| m as f64 * th,
    )?;
    check_tail(s)
}

/// Spin coherent state `exp(τJ₊)|j,−j⟩`, normalized.
pub fn su2_cs(tau: C64, j: f64) -> Result<StateVector> {
    let basis = BasisSpec::su2(j)?;
    let d = basis.dim();
    let two_j = d - 1;
    let a = tau.norm();
    let logs: Vec<f64> = (0..d)
        .map(|i| {
            if a == 0.0 {
                return if i == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            let ln_binom = specfun::ln_factorial(two_j) - specfun::ln_factorial(i) - specfun::ln_factorial(two_j - i);
            i as f64 * a.ln() + 0.5 * ln_binom
        })
        .collect();
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v = CVector::from_fn(d, |i, _| C64::from_polar((logs[i] - mx).exp(), i as f64 * tau.arg()));
    StateVector::from_amplitudes(v, basis)
}

/// Parameters of an eigenstate of `u K₋ + v K₊ + w K₃` with eigenvalue `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntelligentParams {
    pub z: C64,
    pub u: C64,
    pub v: C64,
    pub w: C64,
    pub k: f64,
}

/// Principal square root: nonnegative real part, ties toward nonnegative
/// imaginary part.
pub fn principal_sqrt(x: C64) -> C64 {
    let s = x.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// How the eigen-recurrence of an intelligent state behaves at large n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalizability {
    /// Both characteristic ratios lie inside the unit disk: every `z` works.
    Free,
    /// One ratio inside: `z` must equal `−l_s (k + m)` for the stable branch.
    Quantized { stable_l: C64 },
    /// Neither ratio inside.
    None,
}

impl IntelligentParams {
    pub fn new(z: C64, u: C64, v: C64, w: C64, k: f64) -> Result<Self> {
        for (name, x) in [("z", z), ("u", u), ("v", v), ("w", w)] {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        if !(k > 0.0) {
            return Err(invalid(format!("Bargmann index must be > 0, got {k}")));
        }
        if u.norm() == 0.0 {
            return Err(invalid("u must be nonzero"));
        }
        Ok(IntelligentParams { z, u, v, w, k })
    }

    /// Member `m` of the discrete family: sets `z = −l_s (k + m)` on the
    /// stable branch. Requires exactly one stable ratio.
    pub fn quantized(u: C64, v: C64, w: C64, k: f64, m: usize) -> Result<Self> {
        let p = IntelligentParams::new(ZERO, u, v, w, k)?;
        match p.normalizability() {
            Normalizability::Quantized { stable_l } => Ok(IntelligentParams {
                z: -stable_l * (k + m as f64),
                ..p
            }),
            Normalizability::Free => Err(invalid(
                "both ratios are stable: every z is allowed, no quantization",
            )),
            Normalizability::None => Err(invalid(
                "normalizability |w ± l| < 2|u| violated for both branches",
            )),
        }
    }

    /// `l = √(w² − 4uv)`, principal branch.
    pub fn l(&self) -> C64 {
        principal_sqrt(self.w * self.w - self.u * self.v * 4.0)
    }

    /// Whether the Robertson-minimizing subfamily conditions `Im w = 0`,
    /// `v = u*` hold (to 1e−12 relative).
    pub fn is_hermitian_combination(&self) -> bool {
        let s = self.u.norm().max(self.w.norm());
        self.w.im.abs() <= 1e-12 * s && (self.v - self.u.conj()).norm() <= 1e-12 * s
    }

    pub fn normalizability(&self) -> Normalizability {
        let l = self.l();
        let two_u = 2.0 * self.u.norm();
        let plus = (self.w + l).norm() < two_u;
        let minus = (self.w - l).norm() < two_u;
        match (plus, minus) {
            (true, true) => Normalizability::Free,
            (true, false) => Normalizability::Quantized { stable_l: l },
            (false, true) => Normalizability::Quantized { stable_l: -l },
            (false, false) => Normalizability::None,
        }
    }
}

/// Eigenstate of `u K₋ + v K₊ + w K₃` with eigenvalue `z`, amplitudes
/// `∝ (−(l+w)/2u)ⁿ √((2k)ₙ/n!) ₂F₁(k + z/l, −n; 2k; 2l/(l+w))`.
///
/// The polynomial is summed in double-double arithmetic. When only one
/// branch ratio is stable the state exists only on the discrete set
/// `z = −l_s(k+m)`, where the series terminates.
pub fn su11_intelligent(p: &IntelligentParams, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::su11(p.k, n)?;
    let p = IntelligentParams::new(p.z, p.u, p.v, p.w, p.k)?;
    let scale = p.u.norm().max(p.v.norm()).max(p.w.norm());
    let l = p.l();
    // l is the root of a difference, so its noise floor is √ε·scale rather
    // than ε·scale; compare l² against the rounding level of w² − 4uv.
    let floor = 64.0 * f64::EPSILON * (p.w.norm_sqr()).max(4.0 * p.u.norm() * p.v.norm());
    if l.norm() <= 1e-10 * scale || l.norm_sqr() <= floor {
        return Err(Error::DegenerateParameter(format!(
            "l = √(w² − 4uv) ≈ 0 ({:.3e}); construct this state with the eigen-solver",
            l.norm()
        )));
    }
    let (ls, a_param) = match p.normalizability() {
        Normalizability::None => {
            return Err(invalid(format!(
                "normalizability |w ± l| < 2|u| violated: |w+l| = {:.6}, |w−l| = {:.6}, 2|u| = {:.6}",
                (p.w + l).norm(),
                (p.w - l).norm(),
                2.0 * p.u.norm()
            )))
        }
        Normalizability::Free => {
            let ls = if (p.w + l).norm() <= (p.w - l).norm() { l } else { -l };
            (ls, DDComplex::from(p.z / ls + p.k))
        }
        Normalizability::Quantized { stable_l } => {
            let mval = -(p.k + p.z / stable_l);
            let mr = mval.re.round();
            let tol = 1e-8 * mval.norm().max(1.0);
            if mr < 0.0 || (mval - c(mr, 0.0)).norm() > tol {
                return Err(Error::NotNormalizable(format!(
                    "only one stable branch: z must equal −l_s(k+m) with l_s = {stable_l}, m = 0, 1, …; got z = {}",
                    p.z
                )));
            }
            (stable_l, DDComplex::from(-mr))
        }
    };
    if (ls + p.w).norm() <= 1e-12 * scale {
        return Err(Error::DegenerateParameter(
            "w = −l makes the ratio vanish (v = 0); construct this state with the eigen-solver".into(),
        ));
    }
    let r = -(ls + p.w) / (p.u * 2.0);
    let x = DDComplex::from(ls * 2.0) / DDComplex::from(ls + p.w);
    let two_k = DDComplex::from(2.0 * p.k);
    let ln_r = r.norm().ln();
    let arg_r = r.arg();
    let len = 2 * n.max(16);
    let mut logs = Vec::with_capacity(len);
    let mut phases = Vec::with_capacity(len);
    for m in 0..len {
        let f = specfun::gauss2f1_terminating_dd_exact(a_param, m, two_k, x)?;
        let lf = f.norm().ln();
        let l_amp = m as f64 * ln_r
            + 0.5 * (specfun::ln_pochhammer(2.0 * p.k, m) - specfun::ln_factorial(m))
            + lf;
        logs.push(l_amp);
        phases.push(m as f64 * arg_r + f.arg());
    }
    let mx = logs.iter().cloned().filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return Err(Error::Numeric("intelligent-state series vanished".into()));
    }
    let work = CVector::from_fn(len, |m, _| {
        if logs[m].is_finite() {
            C64::from_polar((logs[m] - mx).exp(), phases[m])
        } else {
            ZERO
        }
    });
    check_tail(StateVector::from_work_vector(&work, basis)?)
}

/// Forward three-term recurrence for the same amplitudes, an independent
/// route used for cross-checks. Stable only when both ratios are inside the
/// unit disk.
pub fn su11_intelligent_recurrence(p: &IntelligentParams, n: usize) -> Result<StateVector> {
    let basis = BasisSpec::su11(p.k, n)?;
    let k = p.k;
    let mut cs = vec![ZERO; n];
    cs[0] = ONE;
    for m in 0..n - 1 {
        let mf = m as f64;
        let mut rhs = (p.z - p.w * (k + mf)) * cs[m];
        if m > 0 {
            rhs -= p.v * (mf * (2.0 * k + mf - 1.0)).sqrt() * cs[m - 1];
        }
        cs[m + 1] = rhs / (p.u * ((mf + 1.0) * (2.0 * k + mf)).sqrt());
    }
    StateVector::from_amplitudes(CVector::from_vec(cs), basis)
}
