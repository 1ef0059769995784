//! Truncated Hilbert spaces and matrix representations of the boson algebra,
//! su(1,1) discrete series D⁺(k), su(2) spin-j and two-mode products.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrixkit::{c, hermitian_defect, CMatrix, CVector, C64, ONE};

/// Basis of a truncated (or, for su(2), exact) representation space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisSpec {
    /// Fock levels |0⟩..|N−1⟩.
    Fock { n: usize },
    /// Discrete-series levels |k, k+m⟩, m = 0..N−1.
    Su11 { k: f64, n: usize },
    /// Spin states |j, m⟩, m = −j..j; `two_j = 2j`.
    Su2 { two_j: usize },
    /// Product of `s` Fock spaces with `n` levels each, mode 1 most significant.
    Multimode { s: usize, n: usize },
}

impl BasisSpec {
    pub fn fock(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("cutoff must be >= 2, got {n}")));
        }
        Ok(BasisSpec::Fock { n })
    }

    pub fn su11(k: f64, n: usize) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(invalid(format!("Bargmann index must be > 0, got {k}")));
        }
        if n < 2 {
            return Err(invalid(format!("cutoff must be >= 2, got {n}")));
        }
        Ok(BasisSpec::Su11 { k, n })
    }

    pub fn su2(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j >= 1.0) || two_j != two_j.round() || two_j > 1e6 {
            return Err(invalid(format!("spin must be a positive half-integer, got {j}")));
        }
        Ok(BasisSpec::Su2 {
            two_j: two_j as usize,
        })
    }

    pub fn multimode(s: usize, n: usize) -> Result<Self> {
        if s > 2 {
            return Err(Error::UnsupportedScale(format!(
                "at most two modes are supported, got {s}"
            )));
        }
        if s == 0 {
            return Err(invalid("mode count must be 1 or 2"));
        }
        if n < 2 {
            return Err(invalid(format!("cutoff must be >= 2, got {n}")));
        }
        Ok(BasisSpec::Multimode { s, n })
    }

    pub fn dim(&self) -> usize {
        match *self {
            BasisSpec::Fock { n } | BasisSpec::Su11 { n, .. } => n,
            BasisSpec::Su2 { two_j } => two_j + 1,
            BasisSpec::Multimode { s, n } => n.pow(s as u32),
        }
    }

    /// Per-mode cutoff (the dimension for single-mode bases).
    pub fn cutoff(&self) -> usize {
        match *self {
            BasisSpec::Multimode { n, .. } => n,
            _ => self.dim(),
        }
    }

    pub fn is_truncated(&self) -> bool {
        !matches!(self, BasisSpec::Su2 { .. })
    }

    /// First level counted in the tail: ⌊0.9·N⌋.
    pub fn tail_start(&self) -> usize {
        (9 * self.cutoff()) / 10
    }

    /// Per-mode occupation levels of a basis index.
    pub fn levels(&self, index: usize) -> Vec<usize> {
        match *self {
            BasisSpec::Multimode { s, n } => {
                let mut out = vec![0; s];
                let mut rem = index;
                for m in (0..s).rev() {
                    out[m] = rem % n;
                    rem /= n;
                }
                out
            }
            _ => vec![index],
        }
    }

    fn in_tail_from(&self, index: usize, m: usize) -> bool {
        self.levels(index).iter().any(|&l| l >= m)
    }

    pub fn same_space(&self, other: &BasisSpec) -> bool {
        self == other
    }

    pub fn describe(&self) -> String {
        match *self {
            BasisSpec::Fock { n } => format!("fock(N={n})"),
            BasisSpec::Su11 { k, n } => format!("su11(k={k}, N={n})"),
            BasisSpec::Su2 { two_j } => format!("su2(j={})", two_j as f64 / 2.0),
            BasisSpec::Multimode { s, n } => format!("multimode(s={s}, N={n})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    s: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    n: Option<usize>,
}

impl Serialize for BasisSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let b = match *self {
            BasisSpec::Fock { n } => BasisJson {
                kind: "fock".into(),
                k: None,
                j: None,
                s: None,
                n: Some(n),
            },
            BasisSpec::Su11 { k, n } => BasisJson {
                kind: "su11".into(),
                k: Some(k),
                j: None,
                s: None,
                n: Some(n),
            },
            BasisSpec::Su2 { two_j } => BasisJson {
                kind: "su2".into(),
                k: None,
                j: Some(two_j as f64 / 2.0),
                s: None,
                n: None,
            },
            BasisSpec::Multimode { s, n } => BasisJson {
                kind: "multimode".into(),
                k: None,
                j: None,
                s: Some(s),
                n: Some(n),
            },
        };
        b.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BasisSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let b = BasisJson::deserialize(de)?;
        let need_n = || b.n.ok_or_else(|| D::Error::missing_field("N"));
        let r = match b.kind.as_str() {
            "fock" => BasisSpec::fock(need_n()?),
            "su11" => BasisSpec::su11(b.k.ok_or_else(|| D::Error::missing_field("k"))?, need_n()?),
            "su2" => BasisSpec::su2(b.j.ok_or_else(|| D::Error::missing_field("j"))?),
            "multimode" => BasisSpec::multimode(b.s.unwrap_or(1), need_n()?),
            other => return Err(D::Error::custom(format!("unknown basis kind {other:?}"))),
        };
        r.map_err(D::Error::custom)
    }
}

/// Labeled matrix acting on a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub label: String,
    pub matrix: CMatrix,
    pub basis: BasisSpec,
}

impl Operator {
    pub fn new(label: impl Into<String>, matrix: CMatrix, basis: BasisSpec) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::BasisMismatch(format!(
                "matrix is {}x{}, basis {} has dimension {d}",
                matrix.nrows(),
                matrix.ncols(),
                basis.describe()
            )));
        }
        Ok(Operator {
            label: label.into(),
            matrix,
            basis,
        })
    }

    fn raw(label: &str, matrix: CMatrix, basis: BasisSpec) -> Self {
        Operator {
            label: label.into(),
            matrix,
            basis,
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    pub fn dagger(&self, label: &str) -> Operator {
        Operator::raw(label, self.matrix.adjoint(), self.basis)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermitian_defect(&self.matrix) <= tol
    }

    pub fn identity(basis: BasisSpec) -> Operator {
        let d = basis.dim();
        Operator::raw("I", CMatrix::identity(d, d), basis)
    }

    /// Complex linear combination `Σ β_i X_i` over operators on one basis.
    pub fn combination(label: &str, terms: &[(C64, &Operator)]) -> Result<Operator> {
        let first = terms
            .first()
            .ok_or_else(|| invalid("empty operator combination"))?
            .1;
        let mut m = CMatrix::zeros(first.matrix.nrows(), first.matrix.ncols());
        for (b, op) in terms {
            if op.basis != first.basis {
                return Err(Error::BasisMismatch(format!(
                    "{} on {} vs {} on {}",
                    op.label,
                    op.basis.describe(),
                    first.label,
                    first.basis.describe()
                )));
            }
            m += &op.matrix * *b;
        }
        Ok(Operator::raw(label, m, first.basis))
    }

    pub fn product(&self, other: &Operator, label: &str) -> Result<Operator> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{} and {} live on different bases",
                self.label, other.label
            )));
        }
        Ok(Operator::raw(label, &self.matrix * &other.matrix, self.basis))
    }
}

/// Boson ladder operators and quadratures on Fock(N).
#[derive(Debug, Clone)]
pub struct BosonRep {
    pub a: Operator,
    pub ad: Operator,
    pub q: Operator,
    pub p: Operator,
    pub n: Operator,
}

fn lowering(n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for m in 1..n {
        a[(m - 1, m)] = c((m as f64).sqrt(), 0.0);
    }
    a
}

fn quadratures(a: &CMatrix) -> (CMatrix, CMatrix) {
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (a + &ad) * c(s, 0.0);
    // p = (a − a†)/(i√2) = −i (a − a†)/√2
    let p = (a - &ad) * c(0.0, -s);
    (q, p)
}

pub fn boson_rep(n: usize) -> Result<BosonRep> {
    let basis = BasisSpec::fock(n)?;
    let a = lowering(n);
    let (q, p) = quadratures(&a);
    let num = CMatrix::from_diagonal(&CVector::from_fn(n, |m, _| c(m as f64, 0.0)));
    Ok(BosonRep {
        ad: Operator::raw("a†", a.adjoint(), basis),
        a: Operator::raw("a", a, basis),
        q: Operator::raw("q", q, basis),
        p: Operator::raw("p", p, basis),
        n: Operator::raw("n", num, basis),
    })
}

/// su(1,1) generators in the discrete series D⁺(k).
#[derive(Debug, Clone)]
pub struct Su11Rep {
    pub k1: Operator,
    pub k2: Operator,
    pub k3: Operator,
    pub kp: Operator,
    pub km: Operator,
}

impl Su11Rep {
    fn from_ladder(kp: CMatrix, k3: CMatrix, basis: BasisSpec) -> Self {
        let km = kp.adjoint();
        let k1 = (&kp + &km) * c(0.5, 0.0);
        // K₂ = (K₊ − K₋)/(2i)
        let k2 = (&kp - &km) * c(0.0, -0.5);
        Su11Rep {
            k1: Operator::raw("K1", k1, basis),
            k2: Operator::raw("K2", k2, basis),
            k3: Operator::raw("K3", k3, basis),
            kp: Operator::raw("K+", kp, basis),
            km: Operator::raw("K-", km, basis),
        }
    }

    pub fn basis(&self) -> BasisSpec {
        self.k3.basis
    }
}

pub fn su11_rep(k: f64, n: usize) -> Result<Su11Rep> {
    let basis = BasisSpec::su11(k, n)?;
    let mut kp = CMatrix::zeros(n, n);
    for m in 0..n - 1 {
        let mf = m as f64;
        kp[(m + 1, m)] = c(((mf + 1.0) * (2.0 * k + mf)).sqrt(), 0.0);
    }
    let k3 = CMatrix::from_diagonal(&CVector::from_fn(n, |m, _| c(k + m as f64, 0.0)));
    Ok(Su11Rep::from_ladder(kp, k3, basis))
}

/// The bosonic realization K₋ = a²/2, K₊ = a†²/2, K₃ = a†a/2 + ¼ restricted
/// to the even (k = ¼) or odd (k = ¾) Fock sector, with su(1,1) level m
/// identified with Fock level 2m or 2m+1.
pub fn su11_bosonic(k: f64, n: usize) -> Result<Su11Rep> {
    let parity = if k == 0.25 {
        0
    } else if k == 0.75 {
        1
    } else {
        return Err(invalid(format!(
            "bosonic realization exists only for k = 1/4 or 3/4, got {k}"
        )));
    };
    let basis = BasisSpec::su11(k, n)?;
    let nf = 2 * n + 2;
    let a = lowering(nf);
    let ad = a.adjoint();
    let kp_f = &ad * &ad * c(0.5, 0.0);
    let k3_f = (&ad * &a) * c(0.5, 0.0) + CMatrix::identity(nf, nf) * c(0.25, 0.0);
    let idx = |m: usize| 2 * m + parity;
    let kp = CMatrix::from_fn(n, n, |r, col| kp_f[(idx(r), idx(col))]);
    let k3 = CMatrix::from_fn(n, n, |r, col| k3_f[(idx(r), idx(col))]);
    Ok(Su11Rep::from_ladder(kp, k3, basis))
}

/// su(2) spin-j generators; basis order m = −j, …, j.
#[derive(Debug, Clone)]
pub struct Su2Rep {
    pub j1: Operator,
    pub j2: Operator,
    pub j3: Operator,
    pub jp: Operator,
    pub jm: Operator,
}

pub fn su2_rep(j: f64) -> Result<Su2Rep> {
    let basis = BasisSpec::su2(j)?;
    let d = basis.dim();
    let m_of = |i: usize| i as f64 - j;
    let mut jp = CMatrix::zeros(d, d);
    for i in 0..d - 1 {
        let m = m_of(i);
        jp[(i + 1, i)] = c(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j3 = CMatrix::from_diagonal(&CVector::from_fn(d, |i, _| c(m_of(i), 0.0)));
    let j1 = (&jp + &jm) * c(0.5, 0.0);
    let j2 = (&jp - &jm) * c(0.0, -0.5);
    Ok(Su2Rep {
        j1: Operator::raw("J1", j1, basis),
        j2: Operator::raw("J2", j2, basis),
        j3: Operator::raw("J3", j3, basis),
        jp: Operator::raw("J+", jp, basis),
        jm: Operator::raw("J-", jm, basis),
    })
}

/// Ladder operators and quadratures of `s` independent modes.
#[derive(Debug, Clone)]
pub struct TensorRep {
    pub a: Vec<Operator>,
    pub q: Vec<Operator>,
    pub p: Vec<Operator>,
}

pub fn tensor_rep(s: usize, n: usize) -> Result<TensorRep> {
    let basis = BasisSpec::multimode(s, n)?;
    let a1 = lowering(n);
    let id = CMatrix::identity(n, n);
    let mut a = Vec::new();
    let mut q = Vec::new();
    let mut p = Vec::new();
    for mode in 0..s {
        let mut m = if mode == 0 { a1.clone() } else { id.clone() };
        for other in 1..s {
            let f = if other == mode { &a1 } else { &id };
            m = m.kronecker(f);
        }
        let (qm, pm) = quadratures(&m);
        a.push(Operator::raw(&format!("a{}", mode + 1), m, basis));
        q.push(Operator::raw(&format!("q{}", mode + 1), qm, basis));
        p.push(Operator::raw(&format!("p{}", mode + 1), pm, basis));
    }
    Ok(TensorRep { a, q, p })
}

/// Normalized vector on a basis, with its truncation certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: CVector,
    pub basis: BasisSpec,
    pub tail_mass: f64,
}

impl StateVector {
    /// Normalize `amplitudes` and record the tail mass of the result.
    pub fn from_amplitudes(amplitudes: CVector, basis: BasisSpec) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} amplitudes for basis {} of dimension {}",
                amplitudes.len(),
                basis.describe(),
                basis.dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite amplitudes".into()));
        }
        let nrm = amplitudes.norm();
        if nrm == 0.0 {
            return Err(invalid("null state vector"));
        }
        let amplitudes = amplitudes / c(nrm, 0.0);
        let mut s = StateVector {
            amplitudes,
            basis,
            tail_mass: 0.0,
        };
        if basis.is_truncated() {
            s.tail_mass = tail_mass(&s, basis.tail_start());
        }
        Ok(s)
    }

    /// Truncate an oversized single-mode work vector to `basis`. The tail
    /// certificate counts the mass at levels ≥ ⌊0.9N⌋ of the work vector,
    /// including everything cut away.
    pub fn from_work_vector(work: &CVector, basis: BasisSpec) -> Result<Self> {
        let d = basis.dim();
        if matches!(basis, BasisSpec::Multimode { s: 2, .. }) || work.len() < d {
            return Err(invalid("work vector must be single-mode and at least the basis size"));
        }
        let total = work.norm_squared();
        if total == 0.0 || !total.is_finite() {
            return Err(Error::Numeric("work vector has zero or non-finite norm".into()));
        }
        let start = basis.tail_start();
        let tail: f64 = work.iter().skip(start).map(|z| z.norm_sqr()).sum::<f64>() / total;
        let mut s = Self::from_amplitudes(work.rows(0, d).into_owned(), basis)?;
        s.tail_mass = tail;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`, the ray overlap.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn expect(&self, op: &Operator) -> Result<C64> {
        self.check_same(&op.basis)?;
        Ok(self.amplitudes.dotc(&op.apply(&self.amplitudes)))
    }

    /// `‖(L − λ)ψ‖` for an operator `L`.
    pub fn eigen_residual(&self, op: &Operator, lambda: C64) -> Result<f64> {
        self.check_same(&op.basis)?;
        let v = op.apply(&self.amplitudes) - &self.amplitudes * lambda;
        Ok(v.norm())
    }

    pub(crate) fn check_same(&self, basis: &BasisSpec) -> Result<()> {
        if &self.basis != basis {
            return Err(Error::BasisMismatch(format!(
                "state on {} vs {}",
                self.basis.describe(),
                basis.describe()
            )));
        }
        Ok(())
    }
}

/// Σ |amplitude|² over basis indices where some mode level is ≥ `m`.
pub fn tail_mass(psi: &StateVector, m: usize) -> f64 {
    psi.amplitudes
        .iter()
        .enumerate()
        .filter(|(i, _)| psi.basis.in_tail_from(*i, m))
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

/// Hermitian, unit-trace, positive semidefinite matrix on a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
    pub basis: BasisSpec,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, basis: BasisSpec) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::BasisMismatch(format!(
                "density matrix is {}x{}, basis has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermitian_defect(&matrix);
        if defect > 1e-12 {
            return Err(invalid(format!("density matrix not Hermitian (defect {defect:.2e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > 1e-12 {
            return Err(invalid(format!("density matrix trace {tr} != 1")));
        }
        let min = crate::matrixkit::psd_min_eig(&matrix)?;
        if min < -1e-10 {
            return Err(invalid(format!("density matrix not PSD (min eigenvalue {min:.3e})")));
        }
        Ok(DensityMatrix { matrix, basis })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = &psi.amplitudes;
        DensityMatrix {
            matrix: v * v.adjoint(),
            basis: psi.basis,
        }
    }

    /// Convex mixture `Σ w_i |ψ_i⟩⟨ψ_i|`, weights normalized to sum 1.
    pub fn mixture(weights: &[f64], states: &[StateVector]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(invalid("mixture needs one weight per state"));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(invalid("mixture weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(invalid("mixture weights sum to zero"));
        }
        let basis = states[0].basis;
        let d = basis.dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            s.check_same(&basis)?;
            m += &s.amplitudes * s.amplitudes.adjoint() * c(w / total, 0.0);
        }
        Ok(DensityMatrix { matrix: m, basis })
    }

    /// Maximally mixed state on an exact (su(2)) or truncated basis.
    pub fn maximally_mixed(basis: BasisSpec) -> Self {
        let d = basis.dim();
        DensityMatrix {
            matrix: CMatrix::identity(d, d) * c(1.0 / d as f64, 0.0),
            basis,
        }
    }

    pub fn expect(&self, op: &Operator) -> Result<C64> {
        if self.basis != op.basis {
            return Err(Error::BasisMismatch(format!(
                "state on {} vs operator on {}",
                self.basis.describe(),
                op.basis.describe()
            )));
        }
        Ok((&self.matrix * &op.matrix).trace())
    }

    pub fn tail_mass(&self) -> f64 {
        if !self.basis.is_truncated() {
            return 0.0;
        }
        let m = self.basis.tail_start();
        (0..self.basis.dim())
            .filter(|&i| self.basis.in_tail_from(i, m))
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }
}

/// Commutator `[A, B]` as a matrix.
pub fn commutator(a: &Operator, b: &Operator) -> Result<CMatrix> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch(format!(
            "{} and {} live on different bases",
            a.label, b.label
        )));
    }
    Ok(&a.matrix * &b.matrix - &b.matrix * &a.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixkit::{max_abs, I, ZERO};

    fn basis_state(basis: BasisSpec, i: usize) -> StateVector {
        let mut v = CVector::zeros(basis.dim());
        v[i] = ONE;
        StateVector::from_amplitudes(v, basis).unwrap()
    }

    #[test]
    fn ladder_convention() {
        let b = boson_rep(8).unwrap();
        assert_eq!(b.a.matrix[(0, 1)], ONE);
        assert_eq!(b.ad.matrix[(1, 0)], ONE);
        let vac = basis_state(b.q.basis, 0);
        let q2 = b.q.product(&b.q, "q2").unwrap();
        assert!((vac.expect(&q2).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!(boson_rep(1).is_err());
    }

    #[test]
    fn canonical_commutator_on_low_levels() {
        let b = boson_rep(16).unwrap();
        let comm = commutator(&b.q, &b.p).unwrap();
        // defect is confined to the top level
        for i in 0..15 {
            assert!((comm[(i, i)] - I).norm() < 1e-12);
        }
        assert!((comm[(15, 15)] - I).norm() > 1.0);
    }

    #[test]
    fn su11_lowest_weight() {
        let r = su11_rep(0.5, 10).unwrap();
        assert!((r.kp.matrix[(1, 0)] - ONE).norm() < 1e-15);
        let low = basis_state(r.basis(), 0);
        let comm = commutator(&r.k1, &r.k2).unwrap();
        let e = low.amplitudes.dotc(&(&comm * &low.amplitudes));
        assert!((e - c(0.0, -0.5)).norm() < 1e-12);
        assert!(su11_rep(0.0, 10).is_err());
        assert!(su11_rep(-1.0, 10).is_err());
    }

    #[test]
    fn su11_structure_constants_away_from_top() {
        let k = 1.5;
        let r = su11_rep(k, 12).unwrap();
        let km_kp = commutator(&r.km, &r.kp).unwrap();
        let k3k = commutator(&r.k3, &r.kp).unwrap();
        for i in 0..11 {
            for j in 0..11 {
                let want = if i == j { r.k3.matrix[(i, j)] * 2.0 } else { ZERO };
                assert!((km_kp[(i, j)] - want).norm() < 1e-12);
                assert!((k3k[(i, j)] - r.kp.matrix[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn bosonic_realization_matches_irrep() {
        for &k in &[0.25, 0.75] {
            let b = su11_bosonic(k, 20).unwrap();
            let r = su11_rep(k, 20).unwrap();
            assert!(max_abs(&(&b.kp.matrix - &r.kp.matrix)) < 1e-12);
            assert!(max_abs(&(&b.k3.matrix - &r.k3.matrix)) < 1e-12);
            assert!(max_abs(&(&b.k1.matrix - &r.k1.matrix)) < 1e-12);
        }
        let b = su11_bosonic(0.25, 4).unwrap();
        assert!((b.k3.matrix[(2, 2)] - c(4.0 / 2.0 + 0.25, 0.0)).norm() < 1e-15);
        assert!(su11_bosonic(0.5, 4).is_err());
    }

    #[test]
    fn su2_algebra_is_exact() {
        for &j in &[0.5, 1.0, 1.5, 3.0] {
            let r = su2_rep(j).unwrap();
            let comm = commutator(&r.j1, &r.j2).unwrap();
            assert!(max_abs(&(&comm - &r.j3.matrix * I)) < 1e-14);
            let cas = &r.j1.matrix * &r.j1.matrix + &r.j2.matrix * &r.j2.matrix + &r.j3.matrix * &r.j3.matrix;
            let d = r.j3.basis.dim();
            assert!(max_abs(&(cas - CMatrix::identity(d, d) * c(j * (j + 1.0), 0.0))) < 1e-12);
        }
        let half = su2_rep(0.5).unwrap();
        let ev = half.j1.matrix.clone().symmetric_eigenvalues();
        let mut ev: Vec<f64> = ev.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
        assert!(su2_rep(0.3).is_err());
        assert!(su2_rep(0.0).is_err());
    }

    #[test]
    fn hermitian_labels() {
        let b = boson_rep(30).unwrap();
        let s = su11_rep(0.75, 30).unwrap();
        let j = su2_rep(2.5).unwrap();
        for op in [&b.q, &b.p, &b.n, &s.k1, &s.k2, &s.k3, &j.j1, &j.j2, &j.j3] {
            assert!(op.is_hermitian(1e-14), "{}", op.label);
        }
    }

    #[test]
    fn two_modes_commute() {
        let t = tensor_rep(2, 6).unwrap();
        let basis = t.a[0].basis;
        let vac = basis_state(basis, 0);
        let a1ad2 = commutator(&t.a[0], &t.a[1].dagger("a2†")).unwrap();
        assert!(vac.amplitudes.dotc(&(&a1ad2 * &vac.amplitudes)).norm() < 1e-15);
        let prod = &t.a[0].matrix * t.a[0].matrix.adjoint();
        assert!((vac.amplitudes.dotc(&(&prod * &vac.amplitudes)) - ONE).norm() < 1e-15);
        assert!(matches!(tensor_rep(3, 4), Err(Error::UnsupportedScale(_))));
        assert_eq!(basis.levels(6 * 2 + 5), vec![2, 5]);
    }

    #[test]
    fn tail_mass_examples() {
        let vac = basis_state(BasisSpec::fock(10).unwrap(), 0);
        for m in 1..10 {
            assert_eq!(tail_mass(&vac, m), 0.0);
        }
    }

    #[test]
    fn basis_json_round_trip() {
        for b in [
            BasisSpec::fock(5).unwrap(),
            BasisSpec::su11(0.25, 7).unwrap(),
            BasisSpec::su2(1.5).unwrap(),
            BasisSpec::multimode(2, 4).unwrap(),
        ] {
            let s = serde_json::to_string(&b).unwrap();
            let back: BasisSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(b, back);
        }
        assert!(serde_json::from_str::<BasisSpec>(r#"{"kind":"su11","k":-1,"N":4}"#).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let b = BasisSpec::su2(0.5).unwrap();
        let mm = DensityMatrix::maximally_mixed(b);
        assert!(DensityMatrix::new(mm.matrix.clone(), b).is_ok());
        let bad = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(bad, b).is_err());
    }
}
