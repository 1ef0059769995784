use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;

use crate::hilbert::{boson_rep, su11_rep, BasisSpec, Operator};
use crate::matrixkit::{CMatrix, CVector};
use crate::moments::{moment_report, ObservableSet};
use crate::random;
use crate::specfun::{gauss2f1_terminating_dd, ln_factorial, ln_pochhammer};
use crate::states::{
    bg_cs, canonical_ss, glauber, principal_sqrt, squeezed_fock, su11_cs, su11_intelligent, IntelligentParams,
    Normalizability, SqueezeParams,
};
use crate::StateVector;

fn shell(r: f64, th: f64, phase: f64) -> SqueezeParams {
    let s = SqueezeParams::from_r_theta(r, th);
    let ph = C64::from_polar(1.0, phase);
    SqueezeParams { u: s.u * ph, v: s.v * ph }
}

/// Amplitudes of the intelligent state written with an explicit choice of
/// branch `l` (either sign), without any normalization.
fn branch_amplitudes(p: &IntelligentParams, l: C64, n: usize) -> CVector {
    let r = -(l + p.w) / (p.u * 2.0);
    let x = l * 2.0 / (l + p.w);
    let a = p.z / l + p.k;
    CVector::from_fn(n, |m, _| {
        let f = gauss2f1_terminating_dd(a, m, C64::new(2.0 * p.k, 0.0), x).unwrap();
        let w = (0.5 * (ln_pochhammer(2.0 * p.k, m) - ln_factorial(m))).exp();
        r.powu(m as u32) * f * w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_ordering_on_the_unit_shell(r in 0.0f64..1.0, th in 0.0f64..6.3, ph in 0.0f64..6.3, ar in -1.2f64..1.2, ai in -1.2f64..1.2) {
        let sq = shell(r, th, ph);
        let s = canonical_ss(C64::new(ar, ai), sq, 256).unwrap();
        let rep = moment_report(&ObservableSet::canonical(1, 256).unwrap(), &s).unwrap();
        let (dq2, dp2, dpq) = (rep.sigma[(0, 0)], rep.sigma[(1, 1)], rep.sigma[(0, 1)]);
        prop_assert!(0.25 * (dq2 + dp2).powi(2) >= dq2 * dp2 - 1e-10);
        prop_assert!(dq2 * dp2 >= dq2 * dp2 - dpq * dpq - 1e-10);
        prop_assert!((dq2 * dp2 - dpq * dpq - 0.25).abs() <= 1e-10);
    }

    #[test]
    fn sum_identity_and_its_minimizer(r in 0.0f64..1.0, th in 0.0f64..6.3, ar in -1.2f64..1.2, ai in -1.2f64..1.2) {
        let sq = SqueezeParams::from_r_theta(r, th);
        let s = canonical_ss(C64::new(ar, ai), sq, 256).unwrap();
        let rep = moment_report(&ObservableSet::canonical(1, 256).unwrap(), &s).unwrap();
        let total = rep.sigma[(0, 0)] + rep.sigma[(1, 1)];
        prop_assert!((total - sq.u.norm_sqr() - sq.v.norm_sqr()).abs() <= 1e-10);
        prop_assert!(total >= 1.0 - 1e-10);
        // equality exactly for the Glauber states
        prop_assert_eq!((total - 1.0).abs() <= 1e-10, sq.v.norm() <= 1e-5);
    }

    #[test]
    fn constructors_are_normalized_eigenstates(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let n = 192;
        let b = boson_rep(n).unwrap();
        let alpha = random::disk(&mut rng, 1.5);
        let sq = random::squeeze(&mut rng, 0.8);

        let g = glauber(alpha, n).unwrap();
        prop_assert!((g.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(g.eigen_residual(&b.a, alpha).unwrap() <= 1e-8);

        let s = canonical_ss(alpha, sq, n).unwrap();
        let a_uv = Operator::combination("A", &[(sq.u, &b.a), (sq.v, &b.ad)]).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(s.eigen_residual(&a_uv, alpha).unwrap() <= 1e-8);

        let m = rng.random_range(0..4usize);
        let f = squeezed_fock(m, sq, n).unwrap();
        let ad_a = a_uv.dagger("A†").product(&a_uv, "A†A").unwrap();
        prop_assert!(f.eigen_residual(&ad_a, C64::new(m as f64, 0.0)).unwrap() <= 1e-8);

        let k = [0.25, 0.5, 1.0, 2.0][rng.random_range(0..4usize)];
        let rep = su11_rep(k, n).unwrap();
        let z = random::disk(&mut rng, 2.0);
        let bg = bg_cs(z, k, n).unwrap();
        prop_assert!(bg.eigen_residual(&rep.km, z).unwrap() <= 1e-8);
        let xi = random::disk(&mut rng, 0.6);
        let cs = su11_cs(xi, k, n).unwrap();
        prop_assert!((cs.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(cs.tail_mass <= 1e-12);
    }

    #[test]
    fn both_square_root_branches_give_the_same_ray(
        ur in 0.5f64..1.5, ui in -0.5f64..0.5, vr in -0.8f64..0.8, vi in -0.8f64..0.8,
        wr in -1.0f64..1.0, wi in -0.3f64..0.3, zr in -1.0f64..1.0, zi in -1.0f64..1.0, k in 0.25f64..2.0,
    ) {
        let p = IntelligentParams::new(C64::new(zr, zi), C64::new(ur, ui), C64::new(vr, vi), C64::new(wr, wi), k).unwrap();
        let l = p.l();
        prop_assume!(l.norm() > 1e-3 && (l + p.w).norm() > 1e-3 && (p.w - l).norm() > 1e-3);
        prop_assume!(p.normalizability() == Normalizability::Free);
        let n = 40;
        let a = branch_amplitudes(&p, l, n);
        let b = branch_amplitudes(&p, -l, n);
        let ov = a.dotc(&b).norm() / (a.norm() * b.norm());
        prop_assert!((1.0 - ov).abs() <= 1e-10, "overlap {}", ov);
        // the principal branch is the one the constructor documents
        prop_assert_eq!(l, principal_sqrt(p.w * p.w - p.u * p.v * 4.0));
        prop_assert!(l.re > 0.0 || (l.re == 0.0 && l.im >= 0.0));
        if let Ok(s) = su11_intelligent(&p, 96) {
            let trunc = CVector::from_fn(n, |m, _| s.amplitudes[m]);
            let ov = trunc.dotc(&a).norm() / (trunc.norm() * a.norm());
            prop_assert!((1.0 - ov).abs() <= 1e-8);
        }
    }
}

#[test]
fn resolution_of_unity_on_low_levels() {
    // stratified Monte Carlo in (|α|², arg α) over |α| ≤ 4
    let levels = 8;
    let grid = 400;
    let r2_max = 16.0;
    let mut rng = random::rng(random::DEFAULT_SEED);
    let mut acc = CMatrix::zeros(levels, levels);
    for i in 0..grid {
        for j in 0..grid {
            let r2 = r2_max * (i as f64 + rng.random::<f64>()) / grid as f64;
            let th = std::f64::consts::TAU * (j as f64 + rng.random::<f64>()) / grid as f64;
            let alpha = C64::from_polar(r2.sqrt(), th);
            let s = glauber(alpha, 96).unwrap();
            let v = CVector::from_fn(levels, |m, _| s.amplitudes[m]);
            acc += &v * v.adjoint();
        }
    }
    // d²α/π = d(|α|²) dθ / 2π, so the measure of the disk is r2_max
    let est = acc * C64::new(r2_max / (grid * grid) as f64, 0.0);
    for m in 0..levels {
        for n in 0..levels {
            let target = if m == n { 1.0 } else { 0.0 };
            assert!((est[(m, n)] - target).norm() <= 0.02, "({m},{n}): {}", est[(m, n)]);
        }
    }
}

#[test]
fn su11_cs_generator_means() {
    // ⟨K₋⟩ = 2kξ/(1 − |ξ|²), ⟨K₃⟩ = k(1 + |ξ|²)/(1 − |ξ|²)
    let basis = BasisSpec::su11(0.75, 128).unwrap();
    let rep = su11_rep(0.75, 128).unwrap();
    for xi in [C64::new(0.3, 0.1), C64::new(-0.5, 0.2), C64::new(0.0, 0.6)] {
        let s: StateVector = su11_cs(xi, 0.75, 128).unwrap();
        assert_eq!(s.basis, basis);
        let d = 1.0 - xi.norm_sqr();
        let km = s.expect(&rep.km).unwrap();
        let k3 = s.expect(&rep.k3).unwrap();
        assert!((km - xi * (1.5 / d)).norm() < 1e-10, "{km}");
        assert!((k3.re - 0.75 * (2.0 - d) / d).abs() < 1e-10, "{k3}");
    }
}
