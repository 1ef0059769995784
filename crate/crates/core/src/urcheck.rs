//! Uncertainty relations as signed gaps (LHS − RHS): pairwise sum,
//! Heisenberg–Robertson and Schrödinger forms, characteristic orders of the
//! (possibly multi-state) moment matrices, and the complementary form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{Operator, StateVector};
use crate::matrixkit::{char_coeffs_real, RMatrix};
use crate::moments::{moment_report_with, MomentOptions, MomentReport, ObservableSet, StateRef};

/// Relative tolerance below which a gap counts as saturated.
pub const SATURATION_TOL: f64 = 1e-9;

/// Most states accepted by the extended (summed) relations.
pub const MAX_STATES: usize = 8;

/// `|gap| / max(|lhs|, |rhs|, floor) ≤ SATURATION_TOL`.
pub fn is_saturated(lhs: f64, rhs: f64, floor: f64) -> bool {
    let scale = lhs.abs().max(rhs.abs()).max(floor).max(1e-300);
    ((lhs - rhs).abs() / scale) <= SATURATION_TOL
}

/// Elementary symmetric polynomial `e_r` of `xs`.
fn elementary_symmetric(xs: &[f64], r: usize) -> f64 {
    let mut e = vec![0.0; r + 1];
    e[0] = 1.0;
    for &x in xs {
        for k in (1..=r).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    e[r]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSaturation {
    pub sum: bool,
    pub heis: bool,
    pub schr: bool,
}

/// Gaps of the three pairwise relations for observables `X_i`, `X_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairGaps {
    pub var_x: f64,
    pub var_y: f64,
    pub cov: f64,
    /// `|⟨[X, Y]⟩|`
    pub comm_abs: f64,
    pub sum_gap: f64,
    pub heis_gap: f64,
    pub schr_gap: f64,
    pub saturated: PairSaturation,
}

impl PairGaps {
    /// From σ and C with `C_ij = ⟨[X_i, X_j]⟩ / 2i`.
    pub fn from_matrices(sigma: &RMatrix, commut: &RMatrix, i: usize, j: usize) -> Self {
        let (vx, vy, cov) = (sigma[(i, i)], sigma[(j, j)], sigma[(i, j)]);
        let cij = commut[(i, j)];
        let comm_abs = 2.0 * cij.abs();
        let prod = vx * vy;
        let c2 = cij * cij;
        PairGaps {
            var_x: vx,
            var_y: vy,
            cov,
            comm_abs,
            sum_gap: vx + vy - comm_abs,
            heis_gap: prod - c2,
            schr_gap: prod - cov * cov - c2,
            saturated: PairSaturation {
                sum: is_saturated(vx + vy, comm_abs, 0.0),
                heis: is_saturated(prod, c2, 0.0),
                schr: is_saturated(prod, cov * cov + c2, 0.0),
            },
        }
    }
}

/// Pairwise gaps for `X`, `Y` in one state.
pub fn pair_ur_gaps<'a>(x: &Operator, y: &Operator, state: impl Into<StateRef<'a>>) -> Result<PairGaps> {
    let set = ObservableSet::pair(x, y)?;
    let rep = moment_report_with(&set, state.into(), &MomentOptions::default())?;
    Ok(PairGaps::from_matrices(&rep.sigma, &rep.commut, 0, 1))
}

/// One characteristic order `C_r(Σσ) ≥ C_r(ΣC)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderGap {
    pub c_sigma: f64,
    pub c_comm: f64,
    pub gap: f64,
    pub saturated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplementaryPair {
    pub r: usize,
    pub alpha: f64,
    #[serde(rename = "P2")]
    pub p_sq: f64,
    #[serde(rename = "V2")]
    pub v_sq: f64,
}

impl ComplementaryPair {
    pub fn total(&self) -> f64 {
        self.p_sq + self.v_sq
    }
}

/// Characteristic and pairwise gaps of one observable set over 1..8 states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct URReport {
    pub observables: Vec<String>,
    pub n_states: usize,
    pub orders: BTreeMap<usize, OrderGap>,
    /// Keyed by `"i,j"` with zero-based indices into `observables`.
    pub pairs: BTreeMap<String, PairGaps>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complementary: Option<ComplementaryPair>,
}

impl URReport {
    pub fn order(&self, r: usize) -> Option<&OrderGap> {
        self.orders.get(&r)
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairGaps> {
        self.pairs.get(&pair_key(i, j))
    }

    /// Smallest gap over all orders and pair relations.
    pub fn min_gap(&self) -> f64 {
        let orders = self.orders.values().map(|o| o.gap);
        let pairs = self.pairs.values().flat_map(|p| [p.sum_gap, p.heis_gap, p.schr_gap]);
        orders.chain(pairs).fold(f64::INFINITY, f64::min)
    }
}

pub fn pair_key(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

/// Which orders and options a report covers.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Orders to evaluate; all of `1..=n` when `None`.
    pub orders: Option<Vec<usize>>,
    pub moments: MomentOptions,
}

/// Summed moment matrices `(Σσ_m, ΣC_m)` over the states.
pub fn summed_moments(obs: &ObservableSet, states: &[StateRef<'_>], opts: &MomentOptions) -> Result<(RMatrix, RMatrix)> {
    if states.is_empty() || states.len() > MAX_STATES {
        return Err(invalid(format!(
            "extended relations take 1..={MAX_STATES} states, got {}",
            states.len()
        )));
    }
    let n = obs.len();
    let mut sigma = RMatrix::zeros(n, n);
    let mut commut = RMatrix::zeros(n, n);
    for s in states {
        let rep = moment_report_with(obs, *s, opts)?;
        sigma += &rep.sigma;
        commut += &rep.commut;
    }
    Ok((sigma, commut))
}

/// Gaps from already-summed matrices.
pub fn report_from_matrices(
    labels: Vec<String>,
    n_states: usize,
    sigma: &RMatrix,
    commut: &RMatrix,
    orders: Option<&[usize]>,
) -> Result<URReport> {
    let n = sigma.nrows();
    if n < 2 {
        return Err(invalid("uncertainty relations need at least two observables"));
    }
    let all: Vec<usize> = (1..=n).collect();
    let orders = orders.unwrap_or(&all);
    let cs = char_coeffs_real(sigma)?;
    let cc = char_coeffs_real(commut)?;
    let diag: Vec<f64> = (0..n).map(|i| sigma[(i, i)]).collect();
    let mut out = BTreeMap::new();
    for &r in orders {
        if r == 0 || r > n {
            return Err(invalid(format!("order {r} outside 1..={n}")));
        }
        let (a, b) = (cs[r], cc[r]);
        out.insert(
            r,
            OrderGap {
                c_sigma: a,
                c_comm: b,
                gap: a - b,
                saturated: is_saturated(a, b, elementary_symmetric(&diag, r)),
            },
        );
    }
    let mut pairs = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.insert(pair_key(i, j), PairGaps::from_matrices(sigma, commut, i, j));
        }
    }
    Ok(URReport {
        observables: labels,
        n_states,
        orders: out,
        pairs,
        complementary: None,
    })
}

/// Characteristic-order report. With several states the moment matrices
/// are summed entrywise before coefficients are taken.
pub fn char_ur_report(obs: &ObservableSet, states: &[StateRef<'_>], opts: &ReportOptions) -> Result<URReport> {
    let (sigma, commut) = summed_moments(obs, states, &opts.moments)?;
    report_from_matrices(obs.labels(), states.len(), &sigma, &commut, opts.orders.as_deref())
}

/// Single-state report from an existing moment report.
pub fn report_from_moments(labels: Vec<String>, rep: &MomentReport, orders: Option<&[usize]>) -> Result<URReport> {
    report_from_matrices(labels, 1, &rep.sigma, &rep.commut, orders)
}

/// Two-state Schrödinger form for one pair:
/// `½[ΔXX₁ΔYY₂ + ΔXX₂ΔYY₁] − ΔXY₁ΔXY₂ − ¼⟨[X,Y]⟩₁⟨[Y,X]⟩₂`.
pub fn two_state_schrodinger<'a, 'b>(
    x: &Operator,
    y: &Operator,
    psi1: impl Into<StateRef<'a>>,
    psi2: impl Into<StateRef<'b>>,
) -> Result<f64> {
    let set = ObservableSet::pair(x, y)?;
    let o = MomentOptions::default();
    let r1 = moment_report_with(&set, psi1.into(), &o)?;
    let r2 = moment_report_with(&set, psi2.into(), &o)?;
    Ok(two_state_gap(&r1, &r2, 0, 1))
}

/// Same form evaluated on moment reports for the pair `(i, j)`.
pub fn two_state_gap(r1: &MomentReport, r2: &MomentReport, i: usize, j: usize) -> f64 {
    let (s1, s2) = (&r1.sigma, &r2.sigma);
    // ⟨[X,Y]⟩ = 2i C_ij, so −¼⟨[X,Y]⟩₁⟨[Y,X]⟩₂ = −C₁C₂
    0.5 * (s1[(i, i)] * s2[(j, j)] + s2[(i, i)] * s1[(j, j)])
        - s1[(i, j)] * s2[(i, j)]
        - r1.commut[(i, j)] * r2.commut[(i, j)]
}

/// `⟨ψ₁|X²|ψ₁⟩⟨ψ₂|X²|ψ₂⟩ − |⟨ψ₁|X²|ψ₂⟩|²`, evaluated through `Xψ` so the
/// Schwarz structure is exact.
pub fn one_observable_two_state(x: &Operator, psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    for psi in [psi1, psi2] {
        if x.basis != psi.basis {
            return Err(Error::BasisMismatch(format!(
                "{} on {} but state on {}",
                x.label,
                x.basis.describe(),
                psi.basis.describe()
            )));
        }
        if psi.tail_mass > MomentOptions::default().tail_limit {
            return Err(Error::Truncation {
                tail_mass: psi.tail_mass,
                limit: MomentOptions::default().tail_limit,
                cutoff: psi.basis.cutoff(),
            });
        }
    }
    let v1 = x.apply(&psi1.amplitudes);
    let v2 = x.apply(&psi2.amplitudes);
    Ok(v1.norm_squared() * v2.norm_squared() - v1.dotc(&v2).norm_sqr())
}

/// `P² = 1 − C_r(σ)/α`, `V² = C_r(C)/α`.
pub fn complementary(report: &URReport, r: usize, alpha: f64) -> Result<ComplementaryPair> {
    let o = report
        .order(r)
        .ok_or_else(|| invalid(format!("order {r} not present in the report")))?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidScale(format!("alpha_{r} must be positive, got {alpha}")));
    }
    if alpha < o.c_sigma {
        return Err(Error::InvalidScale(format!(
            "alpha_{r} = {alpha} is below C_{r}(sigma) = {}",
            o.c_sigma
        )));
    }
    Ok(ComplementaryPair {
        r,
        alpha,
        p_sq: 1.0 - o.c_sigma / alpha,
        v_sq: o.c_comm / alpha,
    })
}

/// Default scale for a family of reports: the largest `C_r(σ)` seen.
pub fn default_alpha(reports: &[URReport], r: usize) -> Result<f64> {
    let m = reports
        .iter()
        .filter_map(|rep| rep.order(r).map(|o| o.c_sigma))
        .fold(f64::NEG_INFINITY, f64::max);
    if !(m > 0.0) {
        return Err(Error::InvalidScale(format!("no positive C_{r}(sigma) in the family")));
    }
    Ok(m)
}

/// Variances `σ_ii` of a report, read back from its pair records.
pub fn variances(report: &URReport) -> Vec<f64> {
    let n = report.observables.len();
    (0..n)
        .filter_map(|i| {
            if i + 1 < n {
                report.pair(i, i + 1).map(|p| p.var_x)
            } else {
                report.pair(i - 1, i).map(|p| p.var_y)
            }
        })
        .collect()
}

/// Scale for unbounded sets: the largest `e_r(σ₁₁, …, σ_nn)` in the family.
/// By Hadamard's inequality every order-r principal minor of a PSD matrix is
/// at most the product of its diagonal, so this bounds `C_r(σ)` member-wise.
pub fn hadamard_alpha(reports: &[URReport], r: usize) -> Result<f64> {
    let m = reports
        .iter()
        .map(|rep| elementary_symmetric(&variances(rep), r))
        .fold(f64::NEG_INFINITY, f64::max);
    if !(m > 0.0) {
        return Err(Error::InvalidScale(format!("no positive variance scale at order {r}")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{boson_rep, su11_rep, BasisSpec, DensityMatrix};
    use crate::matrixkit::{c, CVector, ONE, ZERO};
    use crate::states::{bg_cs, canonical_ss, glauber, su11_cs, SqueezeParams};

    fn fock(n: usize, cutoff: usize) -> StateVector {
        let mut v = CVector::zeros(cutoff);
        v[n] = ONE;
        StateVector::from_amplitudes(v, BasisSpec::fock(cutoff).unwrap()).unwrap()
    }

    #[test]
    fn glauber_saturates_all_pair_forms() {
        let b = boson_rep(64).unwrap();
        let s = glauber(c(1.2, -0.7), 64).unwrap();
        let g = pair_ur_gaps(&b.q, &b.p, &s).unwrap();
        assert!(g.sum_gap.abs() < 1e-10 && g.heis_gap.abs() < 1e-10 && g.schr_gap.abs() < 1e-10);
        assert!(g.saturated.sum && g.saturated.heis && g.saturated.schr);
    }

    #[test]
    fn bg_cs_pair() {
        let r = su11_rep(0.5, 96).unwrap();
        let s = bg_cs(c(1.0, 0.5), 0.5, 96).unwrap();
        let g = pair_ur_gaps(&r.k1, &r.k2, &s).unwrap();
        assert!(g.sum_gap.abs() < 1e-9);
        assert!(g.schr_gap.abs() < 1e-9);
        assert_eq!(g.saturated.heis, g.cov.abs() < 1e-6);
    }

    #[test]
    fn squeezed_with_correlation_is_only_schrodinger_minimal() {
        let b = boson_rep(128).unwrap();
        let s = canonical_ss(c(0.3, 0.0), SqueezeParams::from_r_theta(0.6, 1.0), 128).unwrap();
        let g = pair_ur_gaps(&b.q, &b.p, &s).unwrap();
        assert!(g.schr_gap.abs() < 1e-10);
        assert!(g.heis_gap > 1e-3);
        assert!(!g.saturated.heis && g.saturated.schr);
    }

    #[test]
    fn su11_cs_orders_saturated() {
        let k = 1.0;
        let obs = ObservableSet::su11(k, 160).unwrap();
        let s = su11_cs(c(0.4, 0.3), k, 160).unwrap();
        let rep = char_ur_report(&obs, &[(&s).into()], &ReportOptions::default()).unwrap();
        assert!(rep.order(2).unwrap().gap.abs() < 1e-9);
        assert!(rep.order(3).unwrap().gap.abs() < 1e-9);
        assert!(rep.order(2).unwrap().saturated && rep.order(3).unwrap().saturated);
        assert!(!rep.order(1).unwrap().saturated);
        assert!(rep.order(1).unwrap().c_comm.abs() < 1e-15);
    }

    #[test]
    fn two_equally_squeezed_states_saturate_extended_det() {
        let obs = ObservableSet::canonical(1, 128).unwrap();
        let sq = SqueezeParams::from_r_theta(0.5, 0.0);
        let s1 = canonical_ss(c(0.5, 0.2), sq, 128).unwrap();
        let s2 = canonical_ss(c(-0.3, 0.6), sq, 128).unwrap();
        let rep = char_ur_report(&obs, &[(&s1).into(), (&s2).into()], &ReportOptions::default()).unwrap();
        assert!(rep.order(2).unwrap().gap.abs() < 1e-9);
        // differently squeezed: strictly positive
        let s3 = canonical_ss(ZERO, SqueezeParams::from_r_theta(0.5, 2.0), 128).unwrap();
        let rep = char_ur_report(&obs, &[(&s1).into(), (&s3).into()], &ReportOptions::default()).unwrap();
        assert!(rep.order(2).unwrap().gap > 1e-3);
    }

    #[test]
    fn extended_det_decomposes_into_single_and_two_state_gaps() {
        let obs = ObservableSet::canonical(1, 48).unwrap();
        let s1 = glauber(c(0.5, 0.0), 48).unwrap();
        let s2 = fock(1, 48);
        let rep = char_ur_report(&obs, &[(&s1).into(), (&s2).into()], &ReportOptions::default()).unwrap();
        let m1 = moment_report_with(&obs, (&s1).into(), &MomentOptions::default()).unwrap();
        let m2 = moment_report_with(&obs, (&s2).into(), &MomentOptions::default()).unwrap();
        let g1 = PairGaps::from_matrices(&m1.sigma, &m1.commut, 0, 1).schr_gap;
        let g2 = PairGaps::from_matrices(&m2.sigma, &m2.commut, 0, 1).schr_gap;
        let g19 = two_state_gap(&m1, &m2, 0, 1);
        assert!((rep.order(2).unwrap().gap - (g1 + g2 + 2.0 * g19)).abs() < 1e-13);
    }

    #[test]
    fn two_state_forms_examples() {
        let b = boson_rep(32).unwrap();
        let v = fock(0, 32);
        assert!(two_state_schrodinger(&b.q, &b.p, &v, &v).unwrap().abs() < 1e-15);
        // Fock pair: (n₁+½)(n₂+½) − ¼
        let g = two_state_schrodinger(&b.q, &b.p, &fock(1, 32), &fock(3, 32)).unwrap();
        assert!((g - (1.5 * 3.5 - 0.25)).abs() < 1e-12);
        let s = glauber(c(0.3, 0.1), 32).unwrap();
        let single = pair_ur_gaps(&b.q, &b.p, &s).unwrap().schr_gap;
        assert!((two_state_schrodinger(&b.q, &b.p, &s, &s).unwrap() - single).abs() < 1e-15);

        assert!(one_observable_two_state(&b.q, &v, &v).unwrap().abs() < 1e-15);
        let g = one_observable_two_state(&b.q, &v, &fock(2, 32)).unwrap();
        assert!((g - 0.75).abs() < 1e-14);
    }

    #[test]
    fn complementary_spin_half() {
        let obs = ObservableSet::su2(0.5).unwrap();
        let two = ObservableSet::new("J1,J2", obs.ops[..2].to_vec()).unwrap();
        let basis = two.basis();
        // basis order m = −j..j, so |↑⟩ is the last vector
        let mut up = CVector::zeros(2);
        up[1] = ONE;
        let up = StateVector::from_amplitudes(up, basis).unwrap();
        let rep = char_ur_report(&two, &[(&up).into()], &ReportOptions::default()).unwrap();
        let cp = complementary(&rep, 2, 1.0 / 16.0).unwrap();
        assert!(cp.p_sq.abs() < 1e-15 && (cp.v_sq - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(basis);
        let rep = char_ur_report(&two, &[(&mixed).into()], &ReportOptions::default()).unwrap();
        let cp = complementary(&rep, 2, 1.0 / 16.0).unwrap();
        assert!(cp.v_sq.abs() < 1e-15 && cp.total() <= 1.0 + 1e-12);
        assert!(matches!(complementary(&rep, 2, 1e-3), Err(Error::InvalidScale(_))));
        assert!(matches!(complementary(&rep, 2, -1.0), Err(Error::InvalidScale(_))));
    }

    #[test]
    fn rejects_bad_state_counts_and_orders() {
        let obs = ObservableSet::canonical(1, 16).unwrap();
        let v = fock(0, 16);
        assert!(char_ur_report(&obs, &[], &ReportOptions::default()).is_err());
        let many: Vec<StateRef> = (0..9).map(|_| (&v).into()).collect();
        assert!(char_ur_report(&obs, &many, &ReportOptions::default()).is_err());
        let opts = ReportOptions {
            orders: Some(vec![3]),
            ..Default::default()
        };
        assert!(char_ur_report(&obs, &[(&v).into()], &opts).is_err());
    }

    #[test]
    fn odd_commutator_determinant_vanishes() {
        let obs = ObservableSet::su11(0.5, 96).unwrap();
        let s = bg_cs(c(0.7, -0.4), 0.5, 96).unwrap();
        let rep = char_ur_report(&obs, &[(&s).into()], &ReportOptions::default()).unwrap();
        assert!(rep.order(3).unwrap().c_comm.abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let obs = ObservableSet::canonical(1, 16).unwrap();
        let v = fock(0, 16);
        let rep = char_ur_report(&obs, &[(&v).into()], &ReportOptions::default()).unwrap();
        let j = serde_json::to_value(&rep).unwrap();
        assert!(j["orders"]["2"]["saturated"].as_bool().unwrap());
        assert!(j["pairs"]["0,1"]["schr_gap"].is_number());
        assert_eq!(j["observables"][1], "p");
    }
}
