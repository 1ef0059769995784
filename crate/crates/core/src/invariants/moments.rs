use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::hilbert::{tensor_rep, DensityMatrix, Operator};
use crate::matrixkit::{CMatrix, CVector};
use crate::StateVector;
use crate::moments::{gaussian_sigma, moment_report, uv_moments, ObservableSet};
use crate::random;
use crate::states::{canonical_ss, glauber, SqueezeParams};

fn sets(n: usize) -> Vec<ObservableSet> {
    vec![
        ObservableSet::canonical(1, n).unwrap(),
        ObservableSet::su11(0.5, n).unwrap(),
        ObservableSet::su11(1.25, n).unwrap(),
        ObservableSet::su2(1.0).unwrap(),
        ObservableSet::su2(1.5).unwrap(),
        ObservableSet::a2_quadratures(n).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sigma_and_robertson_matrix_are_psd(seed in any::<u64>(), mix in 0.0f64..1.0) {
        let mut rng = random::rng(seed);
        for obs in sets(20) {
            let s1 = random::pure_state(&mut rng, obs.basis(), 10).unwrap();
            let s2 = random::pure_state(&mut rng, obs.basis(), 10).unwrap();
            let rep = moment_report(&obs, &s1).unwrap();
            prop_assert!(rep.sigma_min_eig >= -1e-10);
            prop_assert!(rep.robertson_min_eig >= -1e-10);
            prop_assert!((&rep.sigma - rep.sigma.transpose()).amax() == 0.0);
            prop_assert!((&rep.commut + rep.commut.transpose()).amax() == 0.0);
            let rho = DensityMatrix::mixture(&[mix, 1.0 - mix], &[s1, s2]).unwrap();
            let rep = moment_report(&obs, &rho).unwrap();
            prop_assert!(rep.sigma_min_eig >= -1e-10);
            prop_assert!(rep.robertson_min_eig >= -1e-10);
        }
    }

    #[test]
    fn linear_frame_covariance(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        for obs in sets(20) {
            let n = obs.len();
            let t = loop {
                let t = DMatrix::from_fn(n, n, |_, _| random::normal_c64(&mut rng).re);
                if t.determinant().abs() > 0.1 {
                    break t;
                }
            };
            let s = random::pure_state(&mut rng, obs.basis(), 10).unwrap();
            let a = moment_report(&obs, &s).unwrap();
            let b = moment_report(&obs.transformed(&t).unwrap(), &s).unwrap();
            let scale = 1.0 + a.sigma.amax() * t.amax() * t.amax();
            prop_assert!((&b.sigma - &t * &a.sigma * t.transpose()).amax() <= 1e-10 * scale);
            prop_assert!((&b.commut - &t * &a.commut * t.transpose()).amax() <= 1e-10 * scale);
        }
    }

    #[test]
    fn symplectic_frames_preserve_robertson_equality(
        r in 0.0f64..0.8, th in 0.0f64..TAU, ar in -1.0f64..1.0, ai in -1.0f64..1.0,
        l00 in -2.0f64..2.0, l01 in -2.0f64..2.0, l10 in -2.0f64..2.0,
    ) {
        prop_assume!(l00.abs() > 0.2);
        // det Λ = 1 fixes the last entry
        let l11 = (1.0 + l01 * l10) / l00;
        let lam = DMatrix::from_row_slice(2, 2, &[l00, l01, l10, l11]);
        let obs = ObservableSet::canonical(1, 96).unwrap();
        let s = canonical_ss(C64::new(ar, ai), SqueezeParams::from_r_theta(r, th), 96).unwrap();
        let a = moment_report(&obs, &s).unwrap();
        let b = moment_report(&obs.transformed(&lam).unwrap(), &s).unwrap();
        let scale = 1.0 + lam.amax().powi(4);
        prop_assert!((a.sigma.determinant() - a.commut.determinant()).abs() <= 1e-9);
        prop_assert!((b.sigma.determinant() - b.commut.determinant()).abs() <= 1e-9 * scale);
    }

    #[test]
    fn gaussian_sigma_matches_single_mode_eigenstates(r in 0.0f64..1.0, th in 0.0f64..TAU, ar in -1.0f64..1.0, ai in -1.0f64..1.0) {
        let sq = SqueezeParams::from_r_theta(r, th);
        let s = canonical_ss(C64::new(ar, ai), sq, 128).unwrap();
        let rep = moment_report(&ObservableSet::canonical(1, 128).unwrap(), &s).unwrap();
        let g = gaussian_sigma(
            &CMatrix::from_element(1, 1, sq.u),
            &CMatrix::from_element(1, 1, sq.v),
            &CMatrix::identity(1, 1),
        )
        .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((g[(i, j)].re - rep.sigma[(i, j)]).abs() <= 1e-8);
                prop_assert!(g[(i, j)].im.abs() <= 1e-12);
            }
        }
        let (dq2, dp2, dpq) = uv_moments(&sq);
        // chain ¼(Δp² + Δq²)² ≥ Δp²Δq² ≥ Δp²Δq² − Δpq² = ¼
        prop_assert!(0.25 * (dq2 + dp2).powi(2) >= dq2 * dp2 - 1e-10);
        prop_assert!((dq2 * dp2 - dpq * dpq - 0.25).abs() <= 1e-10);
        prop_assert!((dq2 + dp2 - sq.u.norm_sqr() - sq.v.norm_sqr()).abs() <= 1e-12);
    }
}

/// `exp(i·sign·G) x` by scaled Taylor steps.
fn exp_action(g: &CMatrix, sign: f64, x: &CVector) -> CVector {
    let norm = g.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let steps = (norm / 0.5).ceil().max(1.0) as usize;
    let h = C64::new(0.0, sign / steps as f64);
    let mut y = x.clone();
    for _ in 0..steps {
        let mut term = y.clone();
        let mut acc = y.clone();
        for k in 1..40 {
            term = g * &term * (h / k as f64);
            acc += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        y = acc;
    }
    y
}

/// Two-mode Bogoliubov transform from a small quadratic generator: returns
/// `(u, v)` with `U a_μ U† = Σ u_μν a_ν + v_μν a_ν†` and the state `U|0⟩`.
fn two_mode_gaussian(seed: u64, n: usize) -> (CMatrix, CMatrix, StateVector) {
    let mut rng = random::rng(seed);
    let t = tensor_rep(2, n).unwrap();
    let basis = t.a[0].basis;
    let dim = basis.dim();
    let mut g = CMatrix::zeros(dim, dim);
    let idx = |l: [usize; 2]| l[0] * n + l[1];
    for mu in 0..2 {
        for nu in 0..2 {
            let h = random::normal_c64(&mut rng) * 0.08;
            let k = random::normal_c64(&mut rng) * 0.08;
            // h a†_μ a_ν + k a†_μ a†_ν, plus the Hermitian conjugate
            for i in 0..dim {
                let l = [i / n, i % n];
                if l[nu] > 0 {
                    let mut m = l;
                    let mut amp = (m[nu] as f64).sqrt();
                    m[nu] -= 1;
                    if m[mu] + 1 < n {
                        amp *= (m[mu] as f64 + 1.0).sqrt();
                        m[mu] += 1;
                        g[(idx(m), i)] += h * amp;
                        g[(i, idx(m))] += h.conj() * amp;
                    }
                }
                let mut m = l;
                if m[nu] + 1 < n {
                    let mut amp = (m[nu] as f64 + 1.0).sqrt();
                    m[nu] += 1;
                    if m[mu] + 1 < n {
                        amp *= (m[mu] as f64 + 1.0).sqrt();
                        m[mu] += 1;
                        g[(idx(m), i)] += k * amp;
                        g[(i, idx(m))] += k.conj() * amp;
                    }
                }
            }
        }
    }
    // only U†|0⟩ and U†|1_ν⟩ are needed: u_μν = ⟨0|U a_μ U†|1_ν⟩,
    // v_μν = ⟨1_ν|U a_μ U†|0⟩, and U|0⟩ = (U†)†|0⟩ by Hermiticity of G
    let unit = |k: usize| {
        let mut e = CVector::zeros(dim);
        e[k] = C64::new(1.0, 0.0);
        e
    };
    let back = |k: usize| exp_action(&g, 1.0, &unit(k));
    let w0 = back(0);
    let w1 = [back(idx([1, 0])), back(idx([0, 1]))];
    let psi = StateVector::from_amplitudes(exp_action(&g, -1.0, &unit(0)), basis).unwrap();
    let mut u = CMatrix::zeros(2, 2);
    let mut v = CMatrix::zeros(2, 2);
    for mu in 0..2 {
        let a = &t.a[mu].matrix;
        for nu in 0..2 {
            u[(mu, nu)] = w0.dotc(&(a * &w1[nu]));
            v[(mu, nu)] = w1[nu].dotc(&(a * &w0));
        }
    }
    (u, v, psi)
}

#[test]
fn two_mode_gaussian_sigma_is_symplectic_and_matches_fock_moments() {
    let n = 24;
    let obs = ObservableSet::canonical(2, n).unwrap();
    let j = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0,
    ]);
    for seed in 0..4 {
        let (u, v, psi) = two_mode_gaussian(seed, n);
        assert!(psi.tail_mass < 1e-10, "tail {}", psi.tail_mass);
        // Bogoliubov conditions u u† − v v† = I
        assert!((&u * u.adjoint() - &v * v.adjoint() - CMatrix::identity(2, 2)).camax() < 1e-8);
        let g = gaussian_sigma(&u, &v, &CMatrix::identity(2, 2)).unwrap();
        assert!(g.iter().all(|z| z.im.abs() < 1e-10));
        let sig = g.map(|z| z.re);
        let two = &sig * 2.0;
        assert!((&two * &j * two.transpose() - &j).amax() < 1e-9);
        let rep = moment_report(&obs, &psi).unwrap();
        assert!((&rep.sigma - &sig).amax() < 1e-8, "{} vs {}", rep.sigma, sig);
    }
}

#[test]
fn commutators_hold_in_expectation_on_low_states() {
    let n = 48;
    let b = crate::hilbert::boson_rep(n).unwrap();
    let s = glauber(C64::new(1.2, -0.7), n).unwrap();
    assert!(s.tail_mass < 1e-14);
    let comm = |x: &Operator, y: &Operator| &x.matrix * &y.matrix - &y.matrix * &x.matrix;
    let qp = s.amplitudes.dotc(&(comm(&b.q, &b.p) * &s.amplitudes));
    assert!((qp - C64::new(0.0, 1.0)).norm() < 1e-10);
    let aad = s.amplitudes.dotc(&(comm(&b.a, &b.ad) * &s.amplitudes));
    assert!((aad - C64::new(1.0, 0.0)).norm() < 1e-10);
}
