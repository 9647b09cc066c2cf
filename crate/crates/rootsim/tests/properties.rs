//! Property tests for the kernel and root-structure invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use rootsim::algebra::{decompose, weyl_act, AlgebraElement, AlgebraId};
use rootsim::functionals::{activity, curvature, root_profile};
use rootsim::linalg::{commutator, expm_skew, logm_unitary, op_dist, op_norm, CMat};
use rootsim::rep::Representation;
use rootsim::splitting::strang;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn entry() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
}

fn cmat(n: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(entry(), n * n).prop_map(move |v| CMat::from_rows(n, n, &v).unwrap())
}

/// Traceless skew-Hermitian matrix with entries of order one.
fn skew(n: usize) -> impl Strategy<Value = CMat> {
    cmat(n).prop_map(|a| {
        let anti = a.sub(&a.adjoint()).unwrap().scale_re(0.5);
        let tr = anti.trace() / c(anti.rows() as f64, 0.0);
        let mut out = anti;
        for i in 0..out.rows() {
            out.set(i, i, out.get(i, i) - tr);
        }
        out
    })
}

fn element(algebra: AlgebraId) -> impl Strategy<Value = AlgebraElement> {
    skew(algebra.dim()).prop_map(move |m| AlgebraElement::new(algebra, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn op_norm_is_submultiplicative(a in cmat(4), b in cmat(4)) {
        let ab = a.mul(&b).unwrap();
        let bound = op_norm(&a).unwrap() * op_norm(&b).unwrap();
        prop_assert!(op_norm(&ab).unwrap() <= bound + 1e-10);
    }

    #[test]
    fn expm_skew_is_unitary(z in skew(5)) {
        let u = expm_skew(&z).unwrap();
        let defect = op_dist(&u.mul(&u.adjoint()).unwrap(), &CMat::identity(5)).unwrap();
        prop_assert!(defect <= 1e-12);
    }

    #[test]
    fn log_inverts_exp_inside_principal_ball(z in skew(4)) {
        let nrm = op_norm(&z).unwrap();
        let target = std::f64::consts::PI - 0.1;
        let z = if nrm > target { z.scale_re(target / nrm) } else { z };
        let back = logm_unitary(&expm_skew(&z).unwrap()).unwrap();
        prop_assert!(op_dist(&back, &z).unwrap() <= 1e-9);
    }

    #[test]
    fn commutator_is_antisymmetric_exactly(a in cmat(3), b in cmat(3)) {
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        // ab - ba vs ba - ab: identical floats up to sign
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(ab.get(i, j), -ba.get(i, j));
            }
        }
    }

    #[test]
    fn commutator_is_bilinear(a in cmat(3), b in cmat(3), x in cmat(3), s in -2.0f64..2.0) {
        let lhs = commutator(&a.add(&b.scale_re(s)).unwrap(), &x).unwrap();
        let rhs = commutator(&a, &x).unwrap().add(&commutator(&b, &x).unwrap().scale_re(s)).unwrap();
        prop_assert!(op_dist(&lhs, &rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn decompose_reconstruct_is_identity(x in element(AlgebraId::Sun(4))) {
        let d = decompose(&x);
        prop_assert!(op_dist(&d.reconstruct(), &x.mat).unwrap() <= 1e-12);
    }

    #[test]
    fn activity_orders_are_monotone(x in element(AlgebraId::Sun(3))) {
        let rep = Representation::defining(AlgebraId::Sun(3)).unwrap();
        let p = root_profile(&rep, &x).unwrap();
        let a1 = activity(&p, 1.0).unwrap();
        let a2 = activity(&p, 2.0).unwrap();
        let ainf = activity(&p, f64::INFINITY).unwrap();
        prop_assert!(ainf <= a2 + 1e-12 && a2 <= a1 + 1e-12);
        // counting bound with |Delta| = 6
        prop_assert!(a1 <= 6f64.sqrt() * a2 + 1e-10);
    }

    #[test]
    fn root_operator_norm_below_activity(x in element(AlgebraId::Sun(4))) {
        let rep = Representation::defining(AlgebraId::Sun(4)).unwrap();
        let d = decompose(&x);
        let b = d.root_element();
        let a1 = activity(&root_profile(&rep, &x).unwrap(), 1.0).unwrap();
        prop_assert!(op_norm(&b.mat).unwrap() <= a1 + 1e-10);
    }

    #[test]
    fn weyl_action_preserves_functionals(x in element(AlgebraId::Sun(3)), k in 0usize..6) {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let rep = Representation::defining(AlgebraId::Sun(3)).unwrap();
        let y = weyl_act(AlgebraId::Sun(3), &perms[k], &x).unwrap();
        let (px, py) = (root_profile(&rep, &x).unwrap(), root_profile(&rep, &y).unwrap());
        for p in [1.0, 2.0, f64::INFINITY] {
            prop_assert!((activity(&px, p).unwrap() - activity(&py, p).unwrap()).abs() <= 1e-10);
        }
        prop_assert!((curvature(&px) - curvature(&py)).abs() <= 1e-10);
        prop_assert!((x.norm() - y.norm()).abs() <= 1e-12);
    }

    #[test]
    fn strang_inverse_is_negative_time(x in element(AlgebraId::Sun(3)), t in 0.01f64..1.0) {
        let rep = Representation::defining(AlgebraId::Sun(3)).unwrap();
        let d = decompose(&x);
        let fwd = strang(&rep, &d, t).unwrap();
        let bwd = strang(&rep, &d, -t).unwrap();
        prop_assert!(op_dist(&fwd.mul(&bwd).unwrap(), &CMat::identity(3)).unwrap() <= 1e-12);
    }
}
