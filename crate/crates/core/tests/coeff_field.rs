use proptest::prelude::*;
use qgauss::coeff::{rat, LaurentPoly};
use qgauss::{QCoeff, Rational};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i32..=4, -5i64..=5), 0..4)
        .prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(e, c)| (e, Rational::from_integer(c.into())))))
}

fn coeff() -> impl Strategy<Value = QCoeff> {
    (laurent(), laurent()).prop_map(|(n, d)| {
        if d.is_zero() {
            QCoeff::from_laurent(n)
        } else {
            QCoeff::new(n, d).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &QCoeff::one(), a.clone());
    }

    #[test]
    fn inverses(a in coeff(), b in coeff()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!(&(&b / &a) * &a, b);
    }

    #[test]
    fn normalized_equality_is_structural(a in coeff(), b in coeff()) {
        prop_assume!(!b.is_zero());
        let x = &(&a * &b) / &b;
        prop_assert_eq!(x.numerator(), a.numerator());
        prop_assert_eq!(x.denominator(), a.denominator());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in coeff(), b in coeff(), s in 2i64..6) {
        let s0 = rat(s, 3);
        let (Ok(x), Ok(y)) = (a.eval_at(&s0), b.eval_at(&s0)) else { return Ok(()) };
        prop_assert_eq!((&a * &b).eval_at(&s0).unwrap(), &x * &y);
        prop_assert_eq!((&a + &b).eval_at(&s0).unwrap(), x + y);
    }
}

#[test]
fn named_constants() {
    assert_eq!(&QCoeff::q() - &QCoeff::q_pow(-1), QCoeff::lambda());
    assert_eq!(&QCoeff::s_pow(1) * &QCoeff::s_pow(1), QCoeff::q());
    assert!(QCoeff::zero().inv().is_err());
    assert_eq!(QCoeff::q().pow(-2).unwrap(), QCoeff::q_pow(-2));
}
