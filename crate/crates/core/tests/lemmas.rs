use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veech_core::lemmas::{
    above_i64, ceil_i64, check_growth_under_a, check_growth_under_b, check_sign_a, check_sign_b,
    check_three_of_four, point_thresholds,
};
use veech_core::sample::{sample_point, PointClass};
use veech_core::{Spin, Surface, SurfaceProto};

fn prototypes() -> Vec<Surface> {
    vec![
        SurfaceProto::l8(),
        SurfaceProto::new(12, Spin::Zero).unwrap(),
        SurfaceProto::new(5, Spin::Minus).unwrap(),
        SurfaceProto::new(13, Spin::Minus).unwrap(),
        SurfaceProto::new(17, Spin::Plus).unwrap(),
        SurfaceProto::new(41, Spin::Plus).unwrap(),
    ]
}

fn run(seed: u64, per_surface: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in prototypes() {
        for _ in 0..per_surface {
            let n = rng.random_range(1..=6);
            let mut pick = |lo: i64, hi: i64| rng.random_range(lo..=hi);
            let a = sample_point(&s, PointClass::APeriodicOnly, n, 40, &mut pick).unwrap();
            let b = sample_point(&s, PointClass::BPeriodicOnly, n, 40, &mut pick).unwrap();
            let g = sample_point(&s, PointClass::Aperiodic, n, 40, &mut pick).unwrap();
            let ta = point_thresholds(&a);
            let tb = point_thresholds(&b);
            let tg = point_thresholds(&g);
            let j = rng.random_range(0..30);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            check_growth_under_b(&a, sign * (ceil_i64(&ta.l0) + j)).unwrap();
            check_growth_under_a(&b, sign * (ceil_i64(&tb.k0) + j)).unwrap();
            check_sign_a(&b, above_i64(&tb.k0) + j).unwrap();
            check_sign_a(&g, above_i64(&tg.k0) + j).unwrap();
            check_sign_b(&a, above_i64(&ta.l0) + j).unwrap();
            check_sign_b(&g, above_i64(&tg.l0) + j).unwrap();
            let k = above_i64(&tg.k1) + rng.random_range(0..30);
            let l = above_i64(&tg.l1) + rng.random_range(0..30);
            check_three_of_four(&g, k, l).unwrap();
        }
    }
}

#[test]
fn lemmas_hold_on_all_prototypes() {
    run(1, 150);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn lemmas_hold_for_arbitrary_seeds(seed in any::<u64>()) {
        run(seed, 5);
    }
}
