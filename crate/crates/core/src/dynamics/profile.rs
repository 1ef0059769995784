//! Time profiles of the quadratic Hamiltonian
//! `H(t) = g₁(t)p² + g₂(t)(pq+qp) + g₃(t)q²` (in units of ω₀), given either
//! as a frequency `ω(t)` or as the three coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use crate::error::{invalid, Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Step for first derivatives by central differences.
pub const FD_STEP: f64 = 1e-5;

/// Step for second derivatives; about ε^{1/4}, where truncation and
/// cancellation errors balance.
pub const FD_STEP2: f64 = 1.2e-4;

#[derive(Clone)]
pub struct Derivatives {
    pub dg1: ScalarFn,
    pub ddg1: ScalarFn,
    pub dg2: ScalarFn,
}

#[derive(Clone)]
pub enum ProfileKind {
    /// `H = ½(p² + ω²(t)q²/ω₀²)`.
    Omega(ScalarFn),
    G123 {
        g: [ScalarFn; 3],
        derivs: Option<Derivatives>,
    },
}

#[derive(Clone)]
pub struct OscillatorProfile {
    pub omega0: f64,
    pub kind: ProfileKind,
    /// Time interval the profile is defined on, when bounded.
    pub domain: Option<(f64, f64)>,
    pub description: String,
}

impl fmt::Debug for OscillatorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OscillatorProfile")
            .field("omega0", &self.omega0)
            .field("description", &self.description)
            .field("domain", &self.domain)
            .finish()
    }
}

fn check_omega0(omega0: f64) -> Result<()> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(invalid(format!("omega0 must be positive and finite, got {omega0}")));
    }
    Ok(())
}

fn central(f: &ScalarFn, t: f64) -> f64 {
    (f(t + FD_STEP) - f(t - FD_STEP)) / (2.0 * FD_STEP)
}

fn second(f: &ScalarFn, t: f64) -> f64 {
    (f(t + FD_STEP2) - 2.0 * f(t) + f(t - FD_STEP2)) / (FD_STEP2 * FD_STEP2)
}

impl OscillatorProfile {
    pub fn constant(omega: f64) -> Result<Self> {
        check_omega0(omega)?;
        Ok(OscillatorProfile {
            omega0: omega,
            kind: ProfileKind::Omega(Arc::new(move |_| omega)),
            domain: None,
            description: format!("omega = {omega}"),
        })
    }

    pub fn omega(omega0: f64, f: ScalarFn) -> Result<Self> {
        check_omega0(omega0)?;
        Ok(OscillatorProfile {
            omega0,
            kind: ProfileKind::Omega(f),
            domain: None,
            description: "omega(t)".into(),
        })
    }

    /// `ω = before` for `t < t_step`, `after` from `t_step` on; `ω₀ = before`.
    pub fn frequency_step(before: f64, after: f64, t_step: f64) -> Result<Self> {
        check_omega0(before)?;
        check_omega0(after)?;
        Ok(OscillatorProfile {
            omega0: before,
            kind: ProfileKind::Omega(Arc::new(move |t| if t < t_step { before } else { after })),
            domain: None,
            description: format!("omega step {before} -> {after} at t = {t_step}"),
        })
    }

    pub fn g123(omega0: f64, g1: ScalarFn, g2: ScalarFn, g3: ScalarFn) -> Result<Self> {
        check_omega0(omega0)?;
        Ok(OscillatorProfile {
            omega0,
            kind: ProfileKind::G123 {
                g: [g1, g2, g3],
                derivs: None,
            },
            domain: None,
            description: "g1, g2, g3".into(),
        })
    }

    /// Supply closed-form `ġ₁`, `g̈₁`, `ġ₂` instead of finite differences.
    pub fn with_derivatives(mut self, d: Derivatives) -> Result<Self> {
        match &mut self.kind {
            ProfileKind::G123 { derivs, .. } => {
                *derivs = Some(d);
                Ok(self)
            }
            ProfileKind::Omega(_) => Err(invalid("derivatives apply to g123 profiles only")),
        }
    }

    pub fn is_frequency_form(&self) -> bool {
        matches!(self.kind, ProfileKind::Omega(_))
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(invalid(format!("time must be finite, got {t}")));
        }
        if let Some((a, b)) = self.domain {
            if t < a || t > b {
                return Err(invalid(format!("t = {t} outside the profile range [{a}, {b}]")));
            }
        }
        Ok(())
    }

    /// `(g₁, g₂, g₃)` at `t`.
    pub fn coefficients(&self, t: f64) -> Result<[f64; 3]> {
        match &self.kind {
            ProfileKind::Omega(w) => {
                let om = w(t);
                if !(om > 0.0) || !om.is_finite() {
                    return Err(Error::SingularProfile(format!("omega({t}) = {om} is not positive")));
                }
                Ok([0.5, 0.0, om * om / (2.0 * self.omega0 * self.omega0)])
            }
            ProfileKind::G123 { g, .. } => {
                let v = [g[0](t), g[1](t), g[2](t)];
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::SingularProfile(format!("non-finite coefficient at t = {t}")));
                }
                Ok(v)
            }
        }
    }

    /// Squared effective frequency of `ε̈ + Ω²ε = 0`:
    /// `4ω₀²g₁g₃ + 2ω₀g₂ġ₁/g₁ + g̈₁/(2g₁) − 3ġ₁²/(4g₁²) − 4ω₀²g₂² − 2ω₀ġ₂`.
    pub fn omega_sq(&self, t: f64) -> Result<f64> {
        match &self.kind {
            ProfileKind::Omega(w) => {
                let om = w(t);
                if !(om > 0.0) || !om.is_finite() {
                    return Err(Error::SingularProfile(format!("omega({t}) = {om} is not positive")));
                }
                Ok(om * om)
            }
            ProfileKind::G123 { g, derivs } => {
                let w0 = self.omega0;
                let (g1, g2, g3) = (g[0](t), g[1](t), g[2](t));
                if g1 == 0.0 || !g1.is_finite() {
                    return Err(Error::SingularProfile(format!("g1({t}) = {g1}")));
                }
                let (dg1, ddg1, dg2) = match derivs {
                    Some(d) => ((d.dg1)(t), (d.ddg1)(t), (d.dg2)(t)),
                    None => (central(&g[0], t), second(&g[0], t), central(&g[1], t)),
                };
                let v = 4.0 * w0 * w0 * g1 * g3 + 2.0 * w0 * g2 * dg1 / g1 + ddg1 / (2.0 * g1)
                    - 3.0 * dg1 * dg1 / (4.0 * g1 * g1)
                    - 4.0 * w0 * w0 * g2 * g2
                    - 2.0 * w0 * dg2;
                if !v.is_finite() {
                    return Err(Error::SingularProfile(format!("Omega^2 not finite at t = {t}")));
                }
                Ok(v)
            }
        }
    }
}

/// Natural cubic spline through `(t_i, y_i)`.
#[derive(Debug, Clone)]
pub struct Spline {
    t: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    pub fn new(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if n < 2 || y.len() != n {
            return Err(invalid("spline needs at least two samples and matching lengths"));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().chain(&y).any(|x| !x.is_finite()) {
            return Err(invalid("sample times must be finite and strictly increasing"));
        }
        // tridiagonal solve for second derivatives, m_0 = m_{n-1} = 0
        let mut m = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut sub = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = t[i] - t[i - 1];
                let h1 = t[i + 1] - t[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                sub[i - 1] = h0;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..k {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * (t[i + 1] - t[i]);
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - (t[i + 2] - t[i + 1]) * m[i + 2]) / diag[i];
            }
        }
        Ok(Spline { t, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        let i = match self.t.partition_point(|&ti| ti <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let a = (t1 - x) / h;
        let b = (x - t0) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// JSON description of a profile:
/// `{kind: "omega"|"g123", omega0, samples | expressions}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kind: String,
    pub omega0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expressions: Option<BTreeMap<String, String>>,
}

impl ProfileSpec {
    fn names(&self) -> Result<&'static [&'static str]> {
        match self.kind.as_str() {
            "omega" => Ok(&["omega"]),
            "g123" => Ok(&["g1", "g2", "g3"]),
            k => Err(invalid(format!("unknown profile kind {k:?}"))),
        }
    }

    pub fn build(&self) -> Result<OscillatorProfile> {
        check_omega0(self.omega0)?;
        let names = self.names()?;
        let (fns, domain, desc): (Vec<ScalarFn>, Option<(f64, f64)>, String) = match (&self.samples, &self.expressions) {
            (Some(s), None) => {
                let t = s.get("t").ok_or_else(|| invalid("samples need a \"t\" column"))?.clone();
                let mut fns = Vec::new();
                for name in names {
                    let y = s.get(*name).ok_or_else(|| invalid(format!("samples need a {name:?} column")))?;
                    let sp = Arc::new(Spline::new(t.clone(), y.clone())?);
                    fns.push(Arc::new(move |x| sp.eval(x)) as ScalarFn);
                }
                (fns, Some((t[0], *t.last().unwrap())), format!("{} samples", self.kind))
            }
            (None, Some(e)) => {
                let mut fns = Vec::new();
                let mut parts = Vec::new();
                for name in names {
                    let src = e.get(*name).ok_or_else(|| invalid(format!("expressions need {name:?}")))?;
                    let ex = Arc::new(Expr::parse(src)?);
                    parts.push(format!("{name} = {src}"));
                    fns.push(Arc::new(move |x| ex.eval(x)) as ScalarFn);
                }
                (fns, None, parts.join(", "))
            }
            _ => return Err(invalid("profile needs exactly one of \"samples\" or \"expressions\"")),
        };
        let mut p = if self.kind == "omega" {
            OscillatorProfile::omega(self.omega0, fns[0].clone())?
        } else {
            OscillatorProfile::g123(self.omega0, fns[0].clone(), fns[1].clone(), fns[2].clone())?
        };
        p.domain = domain;
        p.description = desc;
        Ok(p)
    }
}
