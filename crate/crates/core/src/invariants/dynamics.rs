use std::sync::Arc;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::dynamics::{
    canonical_initial, fock_to_position, integrate_epsilon, quadratic_log_fit_residual, uv_trajectory,
    wavefunction_track, OscillatorProfile,
};
use crate::hilbert::{boson_rep, Operator};
use crate::states::canonical_ss;

fn wobble(a: f64, b: f64, c: f64) -> OscillatorProfile {
    OscillatorProfile::omega(1.0, Arc::new(move |t: f64| 1.0 + a * (b * t).sin() + c * (0.5 * t).cos() - c)).unwrap()
}

fn grid(t1: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t1 * i as f64 / n as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shell_and_invariant_eigenvalue_are_conserved(
        a in 0.0f64..0.4, b in 0.5f64..3.0, c in 0.0f64..0.2, ar in -1.0f64..1.0, ai in -1.0f64..1.0,
    ) {
        let p = wobble(a, b, c);
        let ts = grid(3.0, 30);
        let (e0, d0) = canonical_initial(1.0);
        let uv = uv_trajectory(&integrate_epsilon(&p, &ts, e0, d0).unwrap(), 1.0);
        let n = 160;
        let bo = boson_rep(n).unwrap();
        let alpha = C64::new(ar, ai);
        for sq in &uv {
            prop_assert!((sq.u.norm_sqr() - sq.v.norm_sqr() - 1.0).abs() <= 1e-8);
            let s = canonical_ss(alpha, *sq, n).unwrap();
            let a_t = Operator::combination("A(t)", &[(sq.u, &bo.a), (sq.v, &bo.ad)]).unwrap();
            prop_assert!(s.eigen_residual(&a_t, alpha).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn squeezed_family_is_stable(a in 0.0f64..0.4, b in 0.5f64..3.0, ar in -1.0f64..1.0, ai in -1.0f64..1.0) {
        let p = wobble(a, b, 0.0);
        let ts = grid(3.0, 12);
        let (e0, d0) = canonical_initial(1.0);
        let uv = uv_trajectory(&integrate_epsilon(&p, &ts, e0, d0).unwrap(), 1.0);
        let xs: Vec<f64> = (0..=1200).map(|i| -14.0 + 28.0 * i as f64 / 1200.0).collect();
        let alpha = C64::new(ar, ai);
        let closed = wavefunction_track(alpha, &uv, &xs).unwrap();
        for (sq, psi) in uv.iter().zip(&closed) {
            // independent route: Fock amplitudes mapped through Hermite functions
            let s = canonical_ss(alpha, *sq, 128).unwrap();
            let f = fock_to_position(&s.amplitudes, &xs);
            prop_assert!(quadratic_log_fit_residual(&xs, &f).unwrap() <= 1e-6);
            prop_assert!(quadratic_log_fit_residual(&xs, psi).unwrap() <= 1e-6);
            let dx = xs[1] - xs[0];
            let ov: C64 = f.iter().zip(psi).map(|(x, y)| x.conj() * y).sum::<C64>() * dx;
            prop_assert!((ov.norm() - 1.0).abs() <= 1e-8, "overlap {}", ov.norm());
        }
    }
}
