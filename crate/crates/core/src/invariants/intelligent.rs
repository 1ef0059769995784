use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::hilbert::su11_rep;
use crate::intelligent::{eigenvector_at, pair_form_cs, CombinationSpec};
use crate::moments::ObservableSet;
use crate::states::{bg_cs, su11_cs};

const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lowering_eigenvalue_of_bg_states_is_recovered(zr in 0.0f64..3.0, zph in 0.0f64..6.3, k in prop::sample::select(vec![0.25, 0.5, 1.0, 2.0])) {
        let n = 96;
        let z = C64::from_polar(zr, zph);
        let s = bg_cs(z, k, n).unwrap();
        let r = su11_rep(k, n).unwrap();
        // least-squares eigenvalue ⟨ψ|K₋|ψ⟩ minimizes ‖(K₋ − z)ψ‖
        let z_rec = s.expect(&r.km).unwrap();
        prop_assert!((z_rec - z).norm() <= 1e-8, "{} vs {}", z_rec, z);
        // and the eigenvector solve at that eigenvalue returns the same ray
        let spec = CombinationSpec::new(vec![ONE, -I, C64::new(0.0, 0.0)], ObservableSet::su11(k, n).unwrap()).unwrap();
        let (e, _) = eigenvector_at(&spec, z_rec).unwrap();
        prop_assert!(e.overlap(&s).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn pair_form_eigenstates_are_coherent_states(
        ur in 0.5f64..1.5, uph in 0.0f64..6.3, ratio in 0.0f64..0.6, vph in 0.0f64..6.3, k in 0.25f64..2.0,
    ) {
        let n = 128;
        let u = C64::from_polar(ur, uph);
        let v = C64::from_polar(ur * ratio, vph);
        let (z, s) = pair_form_cs(u, v, k, n).unwrap();
        let root = (-u * v).sqrt();
        // z = −2k√(−uv) on either root, with ξ = z/(2ku) so that ξ² = −v/u
        prop_assert!((z * z - root * root * (4.0 * k * k)).norm() <= 1e-10 * (1.0 + z.norm_sqr()));
        let xi = z / (u * (2.0 * k));
        prop_assert!((xi * xi + v / u).norm() <= 1e-10);
        let cs = su11_cs(xi, k, n).unwrap();
        prop_assert!(cs.overlap(&s).unwrap() >= 1.0 - 1e-8);
        let spec = CombinationSpec::new(
            vec![u + v, (v - u) * I, C64::new(0.0, 0.0)],
            ObservableSet::su11(k, n).unwrap(),
        ).unwrap();
        // u K₋ + v K₊ = (u + v) K₁ + i(v − u) K₂
        let (e, res) = eigenvector_at(&spec, z).unwrap();
        prop_assert!(res <= 1e-8 * n as f64);
        prop_assert!(e.overlap(&cs).unwrap() >= 1.0 - 1e-8);
    }
}
