use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::hilbert::{su11_rep, BasisSpec};
use crate::intelligent::{minimizer_certificate, Verdict};
use crate::matrixkit::CVector;
use crate::moments::{moment_report, ObservableSet};
use crate::random;
use crate::states::{
    apply_su11_exp, bg_cs, canonical_ss, glauber, su11_cs, su11_intelligent, with_auto_cutoff, Algebra,
    IntelligentParams, SqueezeParams,
};
use crate::urcheck::{char_ur_report, report_from_moments, PairGaps, ReportOptions};
use crate::StateVector;

fn rel(gap: f64, scale: f64) -> f64 {
    gap / scale.max(1e-30)
}

/// Sum ⇒ Heisenberg ⇒ Schrödinger, in relative gaps: by AM–GM the
/// Heisenberg gap is at most twice the sum gap, and the Schrödinger gap never
/// exceeds the Heisenberg one.
fn check_chain(p: &PairGaps) -> std::result::Result<(), String> {
    let s = rel(p.sum_gap, p.var_x + p.var_y);
    let h = rel(p.heis_gap, p.var_x * p.var_y);
    let c = rel(p.schr_gap, p.var_x * p.var_y);
    if !(h <= 2.0 * s.max(0.0) + 1e-12 || s > 1e-6) {
        return Err(format!("heis {h:e} vs sum {s:e}"));
    }
    if !(c <= h + 1e-12) {
        return Err(format!("schr {c:e} vs heis {h:e}"));
    }
    if p.saturated.sum && !(p.saturated.heis || h <= 2.0 * 1e-9) {
        return Err("sum saturated without heis".into());
    }
    if p.saturated.heis && !p.saturated.schr {
        return Err("heis saturated without schr".into());
    }
    Ok(())
}

fn robertson(u: C64, w: f64, k: f64, m: usize) -> StateVector {
    let p = IntelligentParams::quantized(u, u.conj(), C64::new(w, 0.0), k, m).unwrap();
    with_auto_cutoff(64, 480, 1e-14, |n| su11_intelligent(&p, n)).unwrap()
}

/// `exp(ζK₊ − ζ*K₋)ψ` on a basis with `extra` additional empty levels.
fn boost(psi: &StateVector, k: f64, zeta: C64, extra: usize) -> StateVector {
    let n = psi.dim() + extra;
    let x = CVector::from_fn(n, |m, _| if m < psi.dim() { psi.amplitudes[m] } else { C64::new(0.0, 0.0) });
    let y = apply_su11_exp(Algebra::Discrete(k), zeta, &x).unwrap();
    StateVector::from_amplitudes(y, BasisSpec::su11(k, n).unwrap()).unwrap()
}

/// `ξ` of the coherent state with the same `⟨K₋⟩/⟨K₃⟩ = 2ξ/(1 + |ξ|²)`.
fn xi_from_means(s: &StateVector, k: f64) -> C64 {
    let r = su11_rep(k, s.dim()).unwrap();
    let q = s.expect(&r.km).unwrap() / s.expect(&r.k3).unwrap().re;
    // |ξ| solves |q| = 2t/(1 + t²) on t < 1
    let a = q.norm();
    let t = if a < 1e-15 { 0.0 } else { (1.0 - (1.0 - a * a).max(0.0).sqrt()) / a };
    C64::from_polar(t, q.arg())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pair_chain_is_monotone(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let n = 96;
        let fock = BasisSpec::fock(n).unwrap();
        let disc = BasisSpec::su11(0.75, n).unwrap();
        let alpha = random::disk(&mut rng, 1.0);
        let sq = random::squeeze(&mut rng, 0.5);
        let states = vec![
            random::pure_state(&mut rng, fock, 12).unwrap(),
            glauber(alpha, n).unwrap(),
            canonical_ss(alpha, sq, n).unwrap(),
            random::pure_state(&mut rng, disc, 12).unwrap(),
            bg_cs(random::disk(&mut rng, 2.0), 0.75, n).unwrap(),
            su11_cs(random::disk(&mut rng, 0.5), 0.75, n).unwrap(),
            robertson(C64::new(0.4, 0.2), 2.0, 0.75, 1),
        ];
        for s in &states {
            let obs = match s.basis {
                BasisSpec::Fock { n } => ObservableSet::canonical(1, n).unwrap(),
                _ => ObservableSet::su11(0.75, s.dim()).unwrap(),
            };
            let rep = report_from_moments(obs.labels(), &moment_report(&obs, s).unwrap(), None).unwrap();
            for p in rep.pairs.values() {
                prop_assert!(check_chain(p).is_ok(), "{}: {:?}", obs.name, check_chain(p));
            }
        }
    }

    #[test]
    fn extended_minimizers_stay_minimizers_under_the_group(
        ua in 0.2f64..0.7, uph in 0.0f64..6.3, dw in 0.5f64..1.5, sign in prop::bool::ANY,
        k in prop::sample::select(vec![0.5, 0.75, 1.0]), m1 in 0usize..3, m2 in 0usize..3,
        zr in 0.0f64..0.5, zph in 0.0f64..6.3,
    ) {
        let u = C64::from_polar(ua, uph);
        let w = (2.0 * ua + dw) * if sign { 1.0 } else { -1.0 };
        let a = robertson(u, w, k, m1);
        let b = robertson(u, w, k, m2);
        let n = a.dim().max(b.dim());
        let pad = |s: &StateVector| boost(s, k, C64::new(0.0, 0.0), n - s.dim());
        let (a, b) = (pad(&a), pad(&b));
        let zeta = C64::from_polar(zr, zph);
        let (ua_, ub_) = (boost(&a, k, zeta, n), boost(&b, k, zeta, n));
        prop_assert!(ua_.tail_mass < 1e-12 && ub_.tail_mass < 1e-12);
        let opts = ReportOptions { orders: Some(vec![3]), ..Default::default() };
        let obs = ObservableSet::su11(k, n).unwrap();
        let before = char_ur_report(&obs, &[(&a).into(), (&b).into()], &opts).unwrap();
        let obs = ObservableSet::su11(k, 2 * n).unwrap();
        let after = char_ur_report(&obs, &[(&ua_).into(), (&ub_).into()], &opts).unwrap();
        let (g0, g1) = (before.order(3).unwrap(), after.order(3).unwrap());
        prop_assert!(g0.saturated, "before: {:?}", g0);
        prop_assert!(g1.saturated, "after: {:?}", g1);
        prop_assert!(g1.c_comm.abs() <= 1e-12 * g1.c_sigma.abs().max(1.0));
    }

    #[test]
    fn pairwise_certificate_iff_coherent_ray(seed in any::<u64>(), family in 0usize..5) {
        let mut rng = random::rng(seed);
        let k = 0.5;
        let n = 128;
        let s = match family {
            0 => su11_cs(random::disk(&mut rng, 0.6), k, n).unwrap(),
            // BG states: coherent only at z = 0
            1 => bg_cs(random::disk(&mut rng, 2.0), k, n).unwrap(),
            2 => bg_cs(C64::new(0.0, 0.0), k, n).unwrap(),
            3 => {
                let u = random::disk(&mut rng, 0.6) + C64::new(0.1, 0.0);
                let r = robertson(u, 2.0 * u.norm() + 0.8, k, 1);
                boost(&r, k, C64::new(0.0, 0.0), n.saturating_sub(r.dim()))
            }
            _ => random::pure_state(&mut rng, BasisSpec::su11(k, n).unwrap(), 12).unwrap(),
        };
        let obs = ObservableSet::su11(k, s.dim()).unwrap();
        let cert = minimizer_certificate(&s, &obs).unwrap();
        let certified = cert.pairs.values().all(|p| p.residual <= 1e-8);
        let xi = xi_from_means(&s, k);
        let cs = su11_cs(xi, k, s.dim()).unwrap();
        let is_ray = cs.overlap(&s).unwrap() >= 1.0 - 1e-8;
        prop_assert_eq!(certified, is_ray, "family {} verdict {:?}", family, cert.verdict);
        prop_assert_eq!(cert.verdict == Verdict::PairwiseMinimizer, is_ray);
    }
}

#[test]
fn odd_order_commutator_invariant_vanishes() {
    let mut rng = random::rng(random::DEFAULT_SEED);
    for obs in [
        ObservableSet::su11(0.5, 32).unwrap(),
        ObservableSet::su11(1.5, 32).unwrap(),
        ObservableSet::su2(1.0).unwrap(),
        ObservableSet::su2(2.5).unwrap(),
    ] {
        for _ in 0..50 {
            let s = random::pure_state(&mut rng, obs.basis(), 16).unwrap();
            let rep = char_ur_report(&obs, &[(&s).into()], &ReportOptions::default()).unwrap();
            let o = rep.order(3).unwrap();
            let scale = moment_report(&obs, &s).unwrap().commut.amax().powi(3).max(1.0);
            assert!(o.c_comm.abs() <= 1e-12 * scale, "{}: {}", obs.name, o.c_comm);
        }
    }
}

#[test]
fn squeezed_vacuum_pair_saturates_extended_relation() {
    let obs = ObservableSet::canonical(1, 160).unwrap();
    for r in [0.0, 0.3, 0.7] {
        let sq = SqueezeParams::from_r_theta(r, 0.0);
        let a = canonical_ss(C64::new(0.4, -0.2), sq, 160).unwrap();
        let b = canonical_ss(C64::new(-0.9, 0.5), sq, 160).unwrap();
        let rep = char_ur_report(&obs, &[(&a).into(), (&b).into()], &ReportOptions::default()).unwrap();
        assert!(rep.order(2).unwrap().saturated, "r = {r}: {:?}", rep.order(2));
    }
}
