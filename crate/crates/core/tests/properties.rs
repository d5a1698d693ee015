//! Property tests for the algebraic laws.

use num_complex::Complex64;
use proptest::prelude::*;

use vnlab_core::ap_groups::Ap4Group;
use vnlab_core::group_algebra::{AlgebraElement, GroupAlgebra};
use vnlab_core::nc_torus::TorusElement;
use vnlab_core::square_group::{concatenate, integrate, normal_form};

fn letter_strategy() -> impl Strategy<Value = (u8, i64, bool)> {
    (0u8..4, -3i64..=3, any::<bool>())
}

fn word_strategy() -> impl Strategy<Value = Vec<(u8, i64, bool)>> {
    prop::collection::vec(letter_strategy(), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concatenation_inverse_cancels(word in word_strategy(), letter in letter_strategy()) {
        let group = Ap4Group::new([1, 2]);
        let nf = group.word(&word);
        let sym = group.base().symbol(letter.0, letter.1, letter.2);
        let roundtrip = concatenate(&concatenate(&nf, &sym, group.base()), &sym.inverse(), group.base());
        prop_assert_eq!(roundtrip, nf);
    }

    #[test]
    fn group_mul_associative(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
        let group = Ap4Group::new([1, 3]);
        let (x, y, z) = (group.word(&a), group.word(&b), group.word(&c));
        let left = group.mul(&group.mul(&x, &y), &z);
        let right = group.mul(&x, &group.mul(&y, &z));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn integral_reconstructs_normal_form(word in word_strategy()) {
        let group = Ap4Group::new([1, 2, 4]);
        let nf = group.word(&word);
        let rebuilt = normal_form(&integrate(nf.connection()), group.base());
        prop_assert_eq!(rebuilt, nf);
    }

    #[test]
    fn shift_is_homomorphism(a in word_strategy(), b in word_strategy(), k in -4i64..=4) {
        let group = Ap4Group::new([2]);
        let (x, y) = (group.word(&a), group.word(&b));
        let lhs = group.shift(&group.mul(&x, &y), k);
        let rhs = group.mul(&group.shift(&x, k), &group.shift(&y, k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn algebra_trace_is_tracial(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4),
        words in prop::collection::vec(word_strategy(), 1..4),
    ) {
        let alg = GroupAlgebra::new(Ap4Group::new([1]));
        let n = coeffs.len().min(words.len());
        let mut x = AlgebraElement::zero();
        let mut y = AlgebraElement::zero();
        for i in 0..n {
            let g = alg.group().word(&words[i]);
            let c = Complex64::new(coeffs[i].0, coeffs[i].1);
            x = alg.add(&x, &alg.scaled(g.clone(), c));
            y = alg.add(&y, &alg.scaled(alg.group().inverse(&g), c.conj()));
        }
        let xy = alg.trace(&alg.mul(&x, &y));
        let yx = alg.trace(&alg.mul(&y, &x));
        prop_assert!((xy - yx).norm() < 1e-9);
    }

    #[test]
    fn torus_adjoint_antihomomorphism(
        m1 in (-4i64..=4, -4i64..=4, -1.0f64..1.0, -1.0f64..1.0),
        m2 in (-4i64..=4, -4i64..=4, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let d = 9;
        let x = TorusElement::monomial(d, m1.0, m1.1, Complex64::new(m1.2, m1.3));
        let y = TorusElement::monomial(d, m2.0, m2.1, Complex64::new(m2.2, m2.3));
        let lhs = x.mul(&y).adjoint();
        let rhs = y.adjoint().mul(&x.adjoint());
        for (hk, v) in lhs.coefficients() {
            prop_assert!((v - rhs.coefficient(hk.0, hk.1)).norm() < 1e-12);
        }
        for (hk, v) in rhs.coefficients() {
            prop_assert!((v - lhs.coefficient(hk.0, hk.1)).norm() < 1e-12);
        }
    }

    #[test]
    fn torus_trace_positive_on_squares(
        entries in prop::collection::vec((-4i64..=4, -4i64..=4, -1.0f64..1.0), 1..5),
    ) {
        let d = 7;
        let mut x = TorusElement::zero(d);
        for (h, k, c) in entries {
            x = x.add(&TorusElement::monomial(d, h, k, Complex64::new(c, 0.0)));
        }
        let v = x.mul(&x.adjoint()).trace();
        prop_assert!(v.im.abs() < 1e-10);
        prop_assert!(v.re >= -1e-10);
    }
}
