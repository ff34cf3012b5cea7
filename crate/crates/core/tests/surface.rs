use num_bigint::BigInt;
use proptest::prelude::*;
use veech_core::sample::{sample_point, PointClass};
use veech_core::surface::Direction;
use veech_core::{Gen, GeneratorWord, Letter, Spin, Surface, SurfacePoint, SurfaceProto};

fn surface(idx: usize) -> Surface {
    match idx {
        0 => SurfaceProto::l8(),
        1 => SurfaceProto::new(5, Spin::Minus).unwrap(),
        2 => SurfaceProto::new(17, Spin::Plus).unwrap(),
        _ => SurfaceProto::new(12, Spin::Zero).unwrap(),
    }
}

fn point(idx: usize, class: PointClass, n: i64, seed: u64) -> SurfacePoint {
    let mut state = seed | 1;
    let mut pick = |lo: i64, hi: i64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        lo + (state % ((hi - lo + 1) as u64)) as i64
    };
    sample_point(&surface(idx), class, n, 200, &mut pick).unwrap()
}

fn word_strategy() -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec((any::<bool>(), -6i64..=6), 0..=20).prop_map(|v| {
        GeneratorWord::from_letters(
            v.into_iter()
                .map(|(a, e)| Letter::new(if a { Gen::A } else { Gen::B }, e)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn actions_compose(idx in 0usize..4, n in 1i64..=12, seed in any::<u64>(), k1 in -40i64..40, k2 in -40i64..40) {
        let p = point(idx, PointClass::Generic, n, seed);
        prop_assert_eq!(p.apply_a(k1).apply_a(k2), p.apply_a(k1 + k2));
        prop_assert_eq!(p.apply_b(k1).apply_b(k2), p.apply_b(k1 + k2));
    }

    #[test]
    fn deltas_match_subtraction(idx in 0usize..4, n in 1i64..=12, seed in any::<u64>(), k in -60i64..60) {
        let p = point(idx, PointClass::Generic, n, seed);
        prop_assert_eq!(p.delta_a(k), p.apply_a(k).y().i() - p.y().i());
        prop_assert_eq!(p.delta_b(k), p.apply_b(k).x().i() - p.x().i());
    }

    #[test]
    fn generators_fix_their_coordinate(idx in 0usize..4, n in 1i64..=12, seed in any::<u64>(), k in -60i64..60) {
        let p = point(idx, PointClass::Generic, n, seed);
        let a = p.apply_a(k);
        prop_assert_eq!(a.x(), p.x());
        prop_assert_eq!(a.x().i(), p.x().i());
        let b = p.apply_b(k);
        prop_assert_eq!(b.y(), p.y());
    }

    #[test]
    fn words_preserve_n(idx in 0usize..4, n in 1i64..=12, seed in any::<u64>(), w in word_strategy()) {
        let p = point(idx, PointClass::Generic, n, seed);
        let q = p.apply_word(&w);
        prop_assert_eq!(q.n_value(), p.n_value());
        prop_assert_eq!(q.apply_word(&w.inverse()), p);
    }

    #[test]
    fn periodicity_is_rational_splitting_ratio(idx in 0usize..4, n in 1i64..=12, seed in any::<u64>()) {
        let p = point(idx, PointClass::Generic, n, seed);
        prop_assert_eq!(p.is_a_periodic(), p.splitting_ratio(Direction::Vertical).is_rational());
        prop_assert_eq!(p.is_b_periodic(), p.splitting_ratio(Direction::Horizontal).is_rational());
    }

    #[test]
    fn periodic_orbits_close_within_n_steps(idx in 0usize..4, n in 1i64..=8, seed in any::<u64>()) {
        let p = point(idx, PointClass::APeriodicOnly, n, seed);
        let big_n: i64 = p.n_value().try_into().unwrap();
        prop_assert_eq!(p.apply_a(big_n), p.clone());
        let mut q = p.clone();
        let mut period = 0;
        for step in 1..=big_n {
            q = q.apply_a(1);
            if q == p { period = step; break; }
        }
        prop_assert!(period > 0 && big_n % period == 0);
        let p = point(idx, PointClass::BPeriodicOnly, n, seed);
        let big_n: i64 = p.n_value().try_into().unwrap();
        prop_assert_eq!(p.apply_b(big_n), p);
    }

    #[test]
    fn aperiodic_points_never_return(idx in 0usize..4, n in 1i64..=8, seed in any::<u64>(), k in 1i64..50) {
        let p = point(idx, PointClass::Aperiodic, n, seed);
        prop_assert_ne!(p.apply_a(k), p.clone());
        prop_assert_ne!(p.apply_b(k), p);
    }
}

// Periodicity conditions written out per prototype, used as an oracle for
// the splitting-ratio implementation.
fn listed_a_periodic(p: &SurfacePoint) -> bool {
    let one = veech_core::Rational::from_integer(BigInt::from(1));
    let (xr, xi) = (p.x().r(), p.x().i());
    if p.in_left_cylinder() {
        return xi == &veech_core::Rational::from_integer(BigInt::from(0));
    }
    match p.surface().spin() {
        Spin::Minus => xr + xi == one,
        _ => xr == &one,
    }
}

fn listed_b_periodic(p: &SurfacePoint) -> bool {
    let one = veech_core::Rational::from_integer(BigInt::from(1));
    let (yr, yi) = (p.y().r(), p.y().i());
    if p.in_lower_cylinder() {
        return yi == &veech_core::Rational::from_integer(BigInt::from(0));
    }
    match p.surface().spin() {
        Spin::Zero => yr == &(&one - yi),
        Spin::Plus => yr + yi * BigInt::from(2) == one,
        Spin::Minus => yr + yi == one,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]
    #[test]
    fn periodicity_matches_listed_conditions(idx in 0usize..3, n in 1i64..=6, seed in any::<u64>(), class in 0usize..4) {
        let class = [PointClass::Generic, PointClass::APeriodicOnly, PointClass::BPeriodicOnly, PointClass::Aperiodic][class];
        let p = point(idx, class, n, seed);
        prop_assert_eq!(p.is_a_periodic(), listed_a_periodic(&p));
        prop_assert_eq!(p.is_b_periodic(), listed_b_periodic(&p));
    }
}

#[test]
fn spec_points_on_l8() {
    let s = SurfaceProto::l8();
    let p: SurfacePoint = SurfacePoint::from_parts(
        &s,
        ["1", "1/2", "1/4", "0"].map(|t| veech_core::quadfield::parse_rational(t).unwrap()),
    )
    .unwrap();
    assert_eq!(p.apply_a(3), p);
    assert!(p.is_a_periodic());
}
