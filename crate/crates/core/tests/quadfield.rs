use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use veech_core::quadfield::{format_rational, parse_rational};
use veech_core::{Field, FieldSpec, QuadNum, Rational};

fn fields() -> Vec<Field> {
    vec![
        FieldSpec::sqrt_quarter(8).unwrap(),
        FieldSpec::sqrt_quarter(12).unwrap(),
        FieldSpec::half_one_plus_sqrt(5).unwrap(),
        FieldSpec::half_one_plus_sqrt(17).unwrap(),
    ]
}

fn rat() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=60).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn quad() -> impl Strategy<Value = (usize, Rational, Rational)> {
    (0usize..4, rat(), rat())
}

fn mk(idx: usize, r: Rational, i: Rational) -> QuadNum {
    QuadNum::new(&fields()[idx], r, i)
}

// Exact sign of r + i·w through an independent route: w is the positive root
// of w² - f·w - e, so r + i·w = r + i·f/2 + (i/2)·√(f² + 4e).
fn oracle_sign(x: &QuadNum) -> i8 {
    let f = x.field();
    let disc = f.f() * f.f() + f.e() * BigInt::from(4);
    let p = x.r() + x.i() * f.f() / BigInt::from(2);
    let q = x.i() / BigInt::from(2);
    let sp = p.cmp(&Rational::zero()) as i8;
    let sq = q.cmp(&Rational::zero()) as i8;
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // opposite signs: compare p² with q²·disc
    let lhs = &p * &p;
    let rhs = &q * &q * &disc;
    match lhs.cmp(&rhs) {
        core::cmp::Ordering::Greater => sp,
        core::cmp::Ordering::Less => sq,
        core::cmp::Ordering::Equal => 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sign_is_multiplicative((idx, ar, ai) in quad(), (br, bi) in (rat(), rat())) {
        let a = mk(idx, ar, ai);
        let b = mk(idx, br, bi);
        prop_assert_eq!((&a * &b).sign(), a.sign() * b.sign());
        prop_assert_eq!(a.sign(), oracle_sign(&a));
    }

    #[test]
    fn sign_agrees_with_float_intervals((idx, ar, ai) in quad(), (br, bi) in (rat(), rat())) {
        let a = mk(idx, ar, ai);
        let b = mk(idx, br, bi);
        let s = &a + &b;
        let fl = s.to_f64();
        let err = 1e-9 * (a.to_f64().abs() + b.to_f64().abs() + 1.0);
        if fl > err { prop_assert_eq!(s.sign(), 1); }
        if fl < -err { prop_assert_eq!(s.sign(), -1); }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arithmetic_matches_float_shadow((idx, ar, ai) in quad(), (br, bi) in (rat(), rat())) {
        let a = mk(idx, ar, ai);
        let b = mk(idx, br, bi);
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()));
        prop_assert!(rel((&a + &b).to_f64(), a.to_f64() + b.to_f64()));
        prop_assert!(rel((&a - &b).to_f64(), a.to_f64() - b.to_f64()));
        prop_assert!(rel((&a * &b).to_f64(), a.to_f64() * b.to_f64()));
    }

    #[test]
    fn floor_brackets((idx, ar, ai) in quad()) {
        let a = mk(idx, ar, ai);
        let n = a.floor();
        let f = a.field().clone();
        prop_assert!(QuadNum::from_bigint(&f, n.clone()) <= a);
        prop_assert!(a < QuadNum::from_bigint(&f, n.clone() + BigInt::one()));
        prop_assert_eq!(a.floor_exact(), n);
    }

    #[test]
    fn reduce_mod_reconstructs((idx, ar, ai) in quad(), (pr, pi) in (rat(), rat())) {
        let a = mk(idx, ar, ai);
        let p = mk(idx, pr, pi).abs();
        prop_assume!(!p.is_zero());
        let (q, rem) = a.reduce_mod(&p).unwrap();
        let f = a.field().clone();
        prop_assert_eq!(&(&p * &QuadNum::from_bigint(&f, q)) + &rem, a);
        prop_assert!(rem.sign() >= 0);
        prop_assert_eq!((&p - &rem).sign(), 1);
    }

    #[test]
    fn text_round_trip((idx, ar, ai) in quad()) {
        let a = mk(idx, ar, ai);
        let f = a.field().clone();
        prop_assert_eq!(QuadNum::parse(&f, &a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(parse_rational(&format_rational(a.r())).unwrap(), a.r().clone());
    }
}

#[test]
fn reduce_mod_rejects_nonpositive_modulus() {
    let f = FieldSpec::sqrt_quarter(8).unwrap();
    let a = QuadNum::from_int(&f, 3);
    assert!(a.reduce_mod(&QuadNum::zero(&f)).is_err());
    assert!(a.reduce_mod(&(-&QuadNum::w(&f))).is_err());
}
