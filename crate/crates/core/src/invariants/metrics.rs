use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::hilbert::{boson_rep, BasisSpec, Operator};
use crate::matrixkit::CMatrix;
use crate::metrics::g_overlap;
use crate::random;
use crate::StateVector;

fn weights(rng: &mut random::SweepRng, basis: BasisSpec) -> Vec<Operator> {
    let n = basis.dim();
    let b = boson_rep(n).unwrap();
    let shifted = &b.n.matrix + CMatrix::identity(n, n);
    let g = random::matrix(rng, n);
    let pd = g.adjoint() * &g + CMatrix::identity(n, n) * C64::new(0.1, 0.0);
    vec![
        Operator::identity(basis),
        Operator::new("n+1", shifted, basis).unwrap(),
        Operator::new("B†B+0.1", pd, basis).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_symmetric(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let basis = BasisSpec::fock(16).unwrap();
        let a = random::pure_state(&mut rng, basis, 12).unwrap();
        let b = random::pure_state(&mut rng, basis, 12).unwrap();
        for x in weights(&mut rng, basis) {
            let ab = g_overlap(&a, &b, &x).unwrap();
            let ba = g_overlap(&b, &a, &x).unwrap();
            prop_assert_eq!(ab.d_sq, ba.d_sq);
            prop_assert!((0.0..=2.0).contains(&ab.d_sq));
            prop_assert!((ab.d_sq - 2.0 * (1.0 - ab.g)).abs() <= 1e-15);
        }
    }

    #[test]
    fn small_distance_means_same_ray(seed in any::<u64>(), log_eps in -12.0f64..-2.0, phase in 0.0f64..6.3) {
        let mut rng = random::rng(seed);
        let basis = BasisSpec::fock(16).unwrap();
        let a = random::pure_state(&mut rng, basis, 12).unwrap();
        let noise = random::pure_state(&mut rng, basis, 12).unwrap();
        let v = &a.amplitudes * C64::from_polar(1.0, phase) + &noise.amplitudes * C64::new(10f64.powf(log_eps), 0.0);
        let b = StateVector::from_amplitudes(v, basis).unwrap();
        let ov = a.overlap(&b).unwrap();
        for x in weights(&mut rng, basis) {
            let r = g_overlap(&a, &b, &x).unwrap();
            if r.distance() <= 1e-8 {
                prop_assert!(ov >= 1.0 - 1e-6, "{}: D = {:e}, overlap {}", r.observable, r.distance(), ov);
            }
        }
    }
}
