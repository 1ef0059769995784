//! State JSON records and the registry of named state families.
//!
//! A record is `{family, params, basis, amplitudes, tail_mass}` with complex
//! numbers written as `[re, im]`. Floats are written in shortest round-trip
//! form, so reading a record back gives the identical state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{BasisSpec, StateVector};
use crate::matrixkit::{c, CVector, C64};
use crate::states::{self, IntelligentParams, Parity, SqueezeParams};

/// A parameter value: real, complex `[re, im]`, or text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex([f64; 2]),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<C64> for ParamValue {
    fn from(z: C64) -> Self {
        ParamValue::Complex([z.re, z.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub family: String,
    pub params: BTreeMap<String, ParamValue>,
    pub basis: BasisSpec,
    pub amplitudes: Vec<[f64; 2]>,
    pub tail_mass: f64,
}

impl StateRecord {
    pub fn new(family: impl Into<String>, params: BTreeMap<String, ParamValue>, state: &StateVector) -> Self {
        StateRecord {
            family: family.into(),
            params,
            basis: state.basis,
            amplitudes: state.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
            tail_mass: state.tail_mass,
        }
    }

    /// The stored state, amplitudes taken verbatim (no renormalization).
    pub fn to_state(&self) -> Result<StateVector> {
        if self.amplitudes.len() != self.basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} amplitudes for basis {} of dimension {}",
                self.amplitudes.len(),
                self.basis.describe(),
                self.basis.dim()
            )));
        }
        let v = CVector::from_iterator(self.amplitudes.len(), self.amplitudes.iter().map(|a| c(a[0], a[1])));
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("state record has non-finite amplitudes"));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("state record is not normalized (norm {norm})")));
        }
        if !(self.tail_mass >= 0.0) {
            return Err(invalid("tail_mass must be >= 0"));
        }
        Ok(StateVector {
            amplitudes: v,
            basis: self.basis,
            tail_mass: self.tail_mass,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state records always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| invalid(format!("bad state JSON: {e}")))
    }
}

/// Named state families with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Glauber { alpha: C64 },
    CanonicalSs { alpha: C64, sq: SqueezeParams },
    SqueezedFock { m: usize, sq: SqueezeParams },
    BgCs { z: C64, k: f64 },
    Su11Cs { xi: C64, k: f64 },
    EvenOddCs { alpha: C64, parity: Parity },
    Su2Cs { tau: C64, j: f64 },
    Intelligent(IntelligentParams),
}

/// Family names accepted by [`Family::from_params`].
pub const FAMILY_NAMES: [&str; 9] = [
    "glauber",
    "canonical-ss",
    "squeezed-fock",
    "bg-cs",
    "su11-cs",
    "even-cs",
    "odd-cs",
    "su2-cs",
    "intelligent",
];

fn get_complex(p: &BTreeMap<String, ParamValue>, key: &str, default: Option<C64>) -> Result<C64> {
    match p.get(key) {
        Some(ParamValue::Real(x)) => Ok(c(*x, 0.0)),
        Some(ParamValue::Complex([a, b])) => Ok(c(*a, *b)),
        Some(ParamValue::Text(s)) => parse_complex(s),
        None => default.ok_or_else(|| invalid(format!("missing parameter {key:?}"))),
    }
}

fn get_real(p: &BTreeMap<String, ParamValue>, key: &str, default: Option<f64>) -> Result<f64> {
    match p.get(key) {
        Some(ParamValue::Real(x)) => Ok(*x),
        Some(ParamValue::Text(s)) => s.trim().parse().map_err(|_| invalid(format!("parameter {key:?} must be real"))),
        Some(ParamValue::Complex(_)) => Err(invalid(format!("parameter {key:?} must be real"))),
        None => default.ok_or_else(|| invalid(format!("missing parameter {key:?}"))),
    }
}

/// Parses `1.5`, `0.3+0.4i`, `-2i`, `0.5,0.1` (re,im) and `i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || invalid(format!("cannot parse complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once(',') {
        return Ok(c(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(c(t.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let mut cut = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            cut = Some(i);
            break;
        }
    }
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse().map_err(|_| bad()),
        }
    };
    match cut {
        Some(i) => Ok(c(body[..i].parse().map_err(|_| bad())?, imag(&body[i..])?)),
        None => Ok(c(0.0, imag(body)?)),
    }
}

fn squeeze(p: &BTreeMap<String, ParamValue>) -> Result<SqueezeParams> {
    if p.contains_key("r") {
        let r = get_real(p, "r", None)?;
        let th = get_real(p, "theta", Some(0.0))?;
        return Ok(SqueezeParams::from_r_theta(r, th));
    }
    SqueezeParams::new(
        get_complex(p, "u", Some(c(1.0, 0.0)))?,
        get_complex(p, "v", Some(c(0.0, 0.0)))?,
    )
}

impl Family {
    pub fn from_params(name: &str, p: &BTreeMap<String, ParamValue>) -> Result<Family> {
        Ok(match name {
            "glauber" => Family::Glauber {
                alpha: get_complex(p, "alpha", None)?,
            },
            "canonical-ss" => Family::CanonicalSs {
                alpha: get_complex(p, "alpha", Some(c(0.0, 0.0)))?,
                sq: squeeze(p)?,
            },
            "squeezed-fock" => {
                let m = get_real(p, "m", None)?;
                if !(m >= 0.0 && m.fract() == 0.0) {
                    return Err(invalid(format!("Fock level m must be a nonnegative integer, got {m}")));
                }
                Family::SqueezedFock {
                    m: m as usize,
                    sq: squeeze(p)?,
                }
            }
            "bg-cs" => Family::BgCs {
                z: get_complex(p, "z", None)?,
                k: get_real(p, "k", None)?,
            },
            "su11-cs" => Family::Su11Cs {
                xi: get_complex(p, "xi", None)?,
                k: get_real(p, "k", None)?,
            },
            "even-cs" | "odd-cs" => Family::EvenOddCs {
                alpha: get_complex(p, "alpha", None)?,
                parity: if name == "even-cs" { Parity::Even } else { Parity::Odd },
            },
            "su2-cs" => Family::Su2Cs {
                tau: get_complex(p, "tau", None)?,
                j: get_real(p, "j", None)?,
            },
            "intelligent" => Family::Intelligent(IntelligentParams::new(
                get_complex(p, "z", Some(c(0.0, 0.0)))?,
                get_complex(p, "u", None)?,
                get_complex(p, "v", None)?,
                get_complex(p, "w", None)?,
                get_real(p, "k", None)?,
            )?),
            other => {
                return Err(invalid(format!(
                    "unknown family {other:?}; expected one of {}",
                    FAMILY_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Glauber { .. } => "glauber",
            Family::CanonicalSs { .. } => "canonical-ss",
            Family::SqueezedFock { .. } => "squeezed-fock",
            Family::BgCs { .. } => "bg-cs",
            Family::Su11Cs { .. } => "su11-cs",
            Family::EvenOddCs { parity: Parity::Even, .. } => "even-cs",
            Family::EvenOddCs { parity: Parity::Odd, .. } => "odd-cs",
            Family::Su2Cs { .. } => "su2-cs",
            Family::Intelligent(_) => "intelligent",
        }
    }

    /// Canonical parameter map stored in the record.
    pub fn params(&self) -> BTreeMap<String, ParamValue> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: ParamValue| {
            m.insert(k.to_string(), v);
        };
        match self {
            Family::Glauber { alpha } | Family::EvenOddCs { alpha, .. } => put("alpha", (*alpha).into()),
            Family::CanonicalSs { alpha, sq } => {
                put("alpha", (*alpha).into());
                put("u", sq.u.into());
                put("v", sq.v.into());
            }
            Family::SqueezedFock { m: lvl, sq } => {
                put("m", (*lvl as f64).into());
                put("u", sq.u.into());
                put("v", sq.v.into());
            }
            Family::BgCs { z, k } => {
                put("z", (*z).into());
                put("k", (*k).into());
            }
            Family::Su11Cs { xi, k } => {
                put("xi", (*xi).into());
                put("k", (*k).into());
            }
            Family::Su2Cs { tau, j } => {
                put("tau", (*tau).into());
                put("j", (*j).into());
            }
            Family::Intelligent(p) => {
                put("z", p.z.into());
                put("u", p.u.into());
                put("v", p.v.into());
                put("w", p.w.into());
                put("k", p.k.into());
            }
        }
        m
    }

    /// Builds the state. `cutoff` is ignored for su(2), which is exact.
    pub fn build(&self, cutoff: usize) -> Result<StateVector> {
        match self {
            Family::Glauber { alpha } => states::glauber(*alpha, cutoff),
            Family::CanonicalSs { alpha, sq } => states::canonical_ss(*alpha, *sq, cutoff),
            Family::SqueezedFock { m, sq } => states::squeezed_fock(*m, *sq, cutoff),
            Family::BgCs { z, k } => states::bg_cs(*z, *k, cutoff),
            Family::Su11Cs { xi, k } => states::su11_cs(*xi, *k, cutoff),
            Family::EvenOddCs { alpha, parity } => states::even_odd_cs(*alpha, *parity, cutoff),
            Family::Su2Cs { tau, j } => states::su2_cs(*tau, *j),
            Family::Intelligent(p) => crate::intelligent::su11_intelligent_any(p, cutoff),
        }
    }

    pub fn record(&self, cutoff: usize) -> Result<StateRecord> {
        Ok(StateRecord::new(self.name(), self.params(), &self.build(cutoff)?))
    }
}
