use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::hilbert::{boson_rep, commutator, su11_bosonic, su11_rep, su2_rep, tail_mass};
use crate::matrixkit::{char_coeffs, det, principal_minor_sum, CMatrix};
use crate::random;
use crate::specfun::{gauss2f1_terminating, gauss2f1_terminating_horner, hyp0f1};
use crate::StateVector;

fn expect_matrix(s: &StateVector, m: &CMatrix) -> C64 {
    s.amplitudes.dotc(&(m * &s.amplitudes))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_equal_minor_sums(seed in any::<u64>(), n in 1usize..=6) {
        let m = random::matrix(&mut random::rng(seed), n);
        let c = char_coeffs(&m).unwrap().coeffs;
        prop_assert_eq!(c.len(), n + 1);
        prop_assert_eq!(c[0], C64::new(1.0, 0.0));
        for r in 1..=n {
            let minors = principal_minor_sum(&m, r).unwrap();
            let rel = (c[r] - minors).norm() / minors.norm().max(1.0);
            prop_assert!(rel <= 1e-10, "r = {}: {} vs {}", r, c[r], minors);
        }
    }

    #[test]
    fn coefficients_are_similarity_invariant(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = random::rng(seed);
        let m = random::matrix(&mut rng, n);
        let t = loop {
            let t = random::matrix(&mut rng, n);
            let s = t.clone().singular_values();
            if s.max() / s.min() < 20.0 {
                break t;
            }
        };
        let tm = t.clone().try_inverse().unwrap() * &m * &t;
        let a = char_coeffs(&m).unwrap().coeffs;
        let b = char_coeffs(&tm).unwrap().coeffs;
        for r in 0..=n {
            prop_assert!((a[r] - b[r]).norm() <= 1e-8 * a[r].norm().max(1.0));
        }
    }

    #[test]
    fn odd_antisymmetric_determinants_vanish(seed in any::<u64>(), half in 0usize..4) {
        let n = 2 * half + 1;
        let g = random::matrix(&mut random::rng(seed), n).map(|z| C64::new(z.re, 0.0));
        let a = &g - g.transpose();
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(det(&a).unwrap().norm() <= 1e-12 * scale.powi(n as i32));
        let c = char_coeffs(&a).unwrap().coeffs;
        prop_assert!(c[n].norm() <= 1e-12 * scale.powi(n as i32).max(1.0));
    }

    #[test]
    fn ladder_commutators_hold_on_low_states(seed in any::<u64>(), k in 0.25f64..3.0) {
        let mut rng = random::rng(seed);
        let n = 40;
        let b = boson_rep(n).unwrap();
        let s = random::pure_state(&mut rng, b.a.basis, 30).unwrap();
        prop_assert!(tail_mass(&s, 36) < 1e-14);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        prop_assert!((expect_matrix(&s, &commutator(&b.a, &b.ad).unwrap()) - one).norm() <= 1e-10);
        prop_assert!((expect_matrix(&s, &commutator(&b.q, &b.p).unwrap()) - i).norm() <= 1e-10);

        let r = su11_rep(k, n).unwrap();
        let s = random::pure_state(&mut rng, r.basis(), 30).unwrap();
        let km_kp = commutator(&r.km, &r.kp).unwrap();
        prop_assert!((expect_matrix(&s, &km_kp) - expect_matrix(&s, &(&r.k3.matrix * C64::new(2.0, 0.0)))).norm() <= 1e-10);
        let k3_kp = commutator(&r.k3, &r.kp).unwrap();
        prop_assert!((expect_matrix(&s, &k3_kp) - expect_matrix(&s, &r.kp.matrix)).norm() <= 1e-10);
        let k1_k2 = commutator(&r.k1, &r.k2).unwrap();
        prop_assert!((expect_matrix(&s, &k1_k2) + i * expect_matrix(&s, &r.k3.matrix)).norm() <= 1e-10);
    }

    #[test]
    fn spin_commutators_are_exact(twice_j in 1usize..12) {
        let j = twice_j as f64 / 2.0;
        let r = su2_rep(j).unwrap();
        let i = C64::new(0.0, 1.0);
        prop_assert!((commutator(&r.j1, &r.j2).unwrap() - &r.j3.matrix * i).iter().all(|z| z.norm() <= 1e-12));
        prop_assert!((commutator(&r.jp, &r.jm).unwrap() - &r.j3.matrix * C64::new(2.0, 0.0)).iter().all(|z| z.norm() <= 1e-12));
        for op in [&r.j1, &r.j2, &r.j3] {
            prop_assert!(op.is_hermitian(1e-14));
        }
    }

    #[test]
    fn terminating_2f1_forward_and_horner_agree(
        a in 0.1f64..5.0, ai in -0.5f64..0.5, c in 0.2f64..6.0, ci in -0.5f64..0.5,
        n in 0usize..60, x in -1.0f64..0.0, xi in -0.2f64..0.2,
    ) {
        // x in the left half-plane keeps every term of one sign, so both
        // orders of summation are well conditioned
        let (a, c, x) = (C64::new(a, ai * 0.01), C64::new(c, ci * 0.01), C64::new(x, xi * 0.01));
        let f = gauss2f1_terminating(a, n, c, x).unwrap();
        let h = gauss2f1_terminating_horner(a, n, c, x).unwrap();
        prop_assert!((f - h).norm() <= 1e-13 * f.norm(), "{} vs {}", f, h);
    }

    #[test]
    fn hyp0f1_contiguous_recurrence(c in 0.3f64..20.0, x in 0.0f64..50.0) {
        let f0 = hyp0f1(c, x).unwrap();
        let f1 = hyp0f1(c + 1.0, x).unwrap();
        let f2 = hyp0f1(c + 2.0, x).unwrap();
        let rhs = f1 + x / (c * (c + 1.0)) * f2;
        let scale = f0.abs().max(f1.abs()).max((x / (c * (c + 1.0)) * f2).abs());
        prop_assert!((f0 - rhs).abs() <= 1e-12 * scale);
    }
}

#[test]
fn bosonic_realization_matches_discrete_series_entrywise() {
    for k in [0.25, 0.75] {
        let a = su11_rep(k, 30).unwrap();
        let b = su11_bosonic(k, 30).unwrap();
        for (x, y) in [(&a.kp, &b.kp), (&a.km, &b.km), (&a.k1, &b.k1), (&a.k2, &b.k2), (&a.k3, &b.k3)] {
            assert!((&x.matrix - &y.matrix).iter().all(|z| z.norm() <= 1e-12), "{}", x.label);
        }
    }
}

#[test]
fn labelled_hermitian_operators() {
    let b = boson_rep(32).unwrap();
    let s = su11_rep(0.8, 32).unwrap();
    for op in [&b.q, &b.p, &b.n, &s.k1, &s.k2, &s.k3] {
        assert!(op.is_hermitian(1e-14), "{}", op.label);
    }
}
