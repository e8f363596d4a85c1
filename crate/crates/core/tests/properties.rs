use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use unit_twist_core::approx::continued_fraction;
use unit_twist_core::exactnum::{parse_rational, CertifiedReal, PrecisionPolicy};
use unit_twist_core::numfield::{AlgebraicField, FieldElement};
use unit_twist_core::twistform::{enum_solutions, twist_form};
use unit_twist_core::unitgrp::{cubic_family, biquadratic_family};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn encloses(x: &CertifiedReal, q: &BigRational) -> bool {
    x.lo().to_rational() <= *q && *q <= x.hi().to_rational()
}

fn cubic() -> AlgebraicField {
    AlgebraicField::from_i64(&[1, 0, -3, -1]).unwrap()
}

fn element(field: &AlgebraicField, c: &[i64]) -> FieldElement {
    FieldElement::from_i64_coords(field, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_ops_enclose_rationals(a in -10_000i64..10_000, b in 1i64..500, c in -10_000i64..10_000, d in 1i64..500, prec in 24u32..200) {
        let (x, y) = (rat(a, b), rat(c, d));
        let (bx, by) = (CertifiedReal::from_rational(&x, prec), CertifiedReal::from_rational(&y, prec));
        prop_assert!(encloses(&bx, &x));
        prop_assert!(encloses(&(&bx + &by), &(&x + &y)));
        prop_assert!(encloses(&(&bx - &by), &(&x - &y)));
        prop_assert!(encloses(&(&bx * &by), &(&x * &y)));
        if !y.is_zero() {
            prop_assert!(encloses(&bx.div_ball(&by).unwrap(), &(&x / &y)));
        }
    }

    #[test]
    fn sqrt_squares_back(n in 1i64..1_000_000, prec in 32u32..256) {
        let s = CertifiedReal::from_int(n, prec).sqrt().unwrap();
        let sq = &s * &s;
        prop_assert!(sq.contains_int(&BigInt::from(n)));
    }

    #[test]
    fn exp_log_round_trip(n in 1i64..100_000) {
        let x = CertifiedReal::from_int(n, 128);
        let back = x.log().unwrap().exp().unwrap();
        prop_assert!(back.contains_int(&BigInt::from(n)));
    }

    #[test]
    fn field_ring_laws(a in prop::collection::vec(-9i64..9, 3), b in prop::collection::vec(-9i64..9, 3), c in prop::collection::vec(-9i64..9, 3)) {
        let f = cubic();
        let (x, y, z) = (element(&f, &a), element(&f, &b), element(&f, &c));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
        prop_assert_eq!(x.add(&y).unwrap().trace(), x.trace() + y.trace());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inverse().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn conjugates_match_trace(a in prop::collection::vec(-9i64..9, 3)) {
        let f = cubic();
        let x = element(&f, &a);
        let conj = x.conjugates(128).unwrap();
        let mut s = CertifiedReal::zero(128);
        for c in &conj {
            s = &s + &c.re;
        }
        prop_assert!(encloses(&s, &x.trace()));
    }

    #[test]
    fn dyadic_cf_terminates(p in -100_000i64..100_000, k in 0u32..20) {
        let x = rat(p, 1 << k);
        let cf = continued_fraction(&|bits| Ok(CertifiedReal::from_rational(&x, bits)), 64, &PrecisionPolicy::default()).unwrap();
        prop_assert!(cf.terminated);
        prop_assert_eq!(cf.convergents.last().unwrap(), &x);
    }

    /// A ball around a non-dyadic rational certifies every quotient but the last.
    #[test]
    fn rational_cf_prefix(p in -100_000i64..100_000, q in 1i64..10_000) {
        let x = rat(p, q);
        let mut quotients = Vec::new();
        let mut t = x.clone();
        loop {
            let a = t.floor();
            quotients.push(a.to_integer());
            let f = &t - a;
            if f.is_zero() {
                break;
            }
            t = f.recip();
        }
        let k = quotients.len() - 1;
        let cf = continued_fraction(&|bits| Ok(CertifiedReal::from_rational(&x, bits)), k, &PrecisionPolicy::default()).unwrap();
        prop_assert_eq!(&cf.partial_quotients[..], &quotients[..k]);
        for w in cf.convergents.windows(2) {
            prop_assert!(w[0].denom() <= w[1].denom());
        }
    }

    #[test]
    fn twisted_form_vanishes_nowhere_on_primitive_pairs(n in 0i64..4, p in -300i64..300, q in 1i64..300) {
        prop_assume!(p.gcd(&q) == 1);
        let c = cubic_family(2).unwrap();
        let form = twist_form(&c.omega(), &c.eps0.pow(n).unwrap(), "e").unwrap();
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let f = form.eval(&p, &q);
        prop_assert!(!f.is_zero());
        let prod = form.fpq_certified(&p, &q).unwrap();
        prop_assert!(prod.contains_int(&f.abs()));
    }

    #[test]
    fn thue_solutions_satisfy_equation(k in -50i64..50, bound in 1u64..60) {
        prop_assume!(k != 0);
        let f = AlgebraicField::from_i64(&[1, 0, 0, -3]).unwrap();
        let form = twist_form(&FieldElement::generator(&f), &FieldElement::one(&f), "1").unwrap();
        for s in enum_solutions(&form, k, bound).unwrap() {
            prop_assert_eq!(form.eval(&BigInt::from(s.x), &BigInt::from(s.y)), BigInt::from(k));
            prop_assert!(s.x.unsigned_abs() <= bound && s.y.unsigned_abs() <= bound);
            prop_assert_eq!(s.xy_zero, s.x == 0 || s.y == 0);
        }
    }

    #[test]
    fn exponent_round_trip(b1 in -12i64..12, b2 in -12i64..12, neg in any::<bool>()) {
        let fam = biquadratic_family(2).unwrap();
        let basis = fam.basis().unwrap();
        let zeta = FieldElement::from_int(&fam.field, if neg { -1 } else { 1 });
        let e = basis.unit_from_exponents(&[b1, b2], &zeta).unwrap();
        let ev = basis.recover_exponents(&e).unwrap();
        prop_assert_eq!(ev.exponents, vec![b1, b2]);
        prop_assert_eq!(ev.torsion, zeta);
    }

    #[test]
    fn rational_strings_round_trip(p in any::<i64>(), q in 1i64..i64::MAX) {
        let x = rat(p, q);
        let s = if x.denom().is_one() { x.numer().to_string() } else { format!("{}/{}", x.numer(), x.denom()) };
        prop_assert_eq!(parse_rational(&s).unwrap(), x.clone());
        prop_assert!(x.denom().is_positive());
    }
}
