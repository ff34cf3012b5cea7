use nalgebra::DMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veech_core::graph::{regular_tree_ball, SimpleGraph};
use veech_core::spectral::{
    cheeger_sandwich_check, dirichlet_cheeger, dirichlet_mu0, inner_exact, laplacian_apply_exact,
    quadratic_form_exact, regular_tree_spectral_bottom, root_looped_ball_support, tree_ball_support,
    DirichletOperator,
};
use veech_core::Rational;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.add_edge(i, j);
            }
        }
        if rng.random_bool(0.1) {
            g.add_edge(i, i);
        }
    }
    g
}

fn random_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(BigInt::from(rng.random_range(-50..=50)), BigInt::from(rng.random_range(1..=9))))
        .collect()
}

fn oracle_min_eigen(op: &DirichletOperator) -> f64 {
    let d = op.dense();
    let n = d.len();
    let m = DMatrix::from_fn(n, n, |i, j| d[i][j]);
    m.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[test]
fn exact_identities_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=14);
        let g = random_graph(&mut rng, n, 0.3);
        let a = random_rationals(&mut rng, n);
        let b = random_rationals(&mut rng, n);
        let la = laplacian_apply_exact(&g, &a).unwrap();
        let lb = laplacian_apply_exact(&g, &b).unwrap();
        assert_eq!(inner_exact(&la, &b), inner_exact(&a, &lb));
        assert_eq!(inner_exact(&lb, &b), quadratic_form_exact(&g, &b).unwrap());
        assert!(quadratic_form_exact(&g, &b).unwrap() >= Rational::from_integer(0.into()));
        // constants per component are in the kernel
        let (_, labels) = g.component_labels();
        let c: Vec<Rational> = labels.iter().map(|&l| Rational::from_integer(BigInt::from(l as i64 * 3 - 1))).collect();
        assert!(laplacian_apply_exact(&g, &c).unwrap().iter().all(|v| *v == Rational::from_integer(0.into())));
    }
}

#[test]
fn dirichlet_matches_dense_oracle_and_sandwich_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..150 {
        let n = rng.random_range(2..=16);
        let p = rng.random_range(0.15..0.6);
        let g = random_graph(&mut rng, n, p);
        let mut support: Vec<bool> = (0..n).map(|_| rng.random_bool(0.7)).collect();
        support[0] = true;
        let op = DirichletOperator::new(&g, &support).unwrap();
        let v = dirichlet_mu0(&g, &support).unwrap();
        assert!((v.mu0 - oracle_min_eigen(&op)).abs() < 1e-9);
        let (c, _) = dirichlet_cheeger(&g, &support).unwrap();
        let c = num_traits::ToPrimitive::to_f64(&c).unwrap();
        let k = g.max_degree().max(1);
        let r = cheeger_sandwich_check(c, k, v.mu0, 1e-9);
        assert!(r.holds(), "{r:?}");
    }
}

#[test]
fn complete_bipartite_toy_case() {
    for k in 2..=6 {
        let n = 2 * k;
        let g = SimpleGraph::from_edges(n, (0..k).flat_map(|i| (k..n).map(move |j| (i, j))));
        for dropped in 0..2 {
            let mut support = vec![true; n];
            support[..dropped].iter_mut().for_each(|s| *s = false);
            let op = DirichletOperator::new(&g, &support).unwrap();
            let v = dirichlet_mu0(&g, &support).unwrap();
            assert!((v.mu0 - oracle_min_eigen(&op)).abs() < 1e-9);
            let (c, _) = dirichlet_cheeger(&g, &support).unwrap();
            let c = num_traits::ToPrimitive::to_f64(&c).unwrap();
            assert!(cheeger_sandwich_check(c, k, v.mu0, 1e-9).holds());
            if dropped == 0 {
                assert!(v.mu0.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn lanczos_agrees_with_dense_on_tree_balls() {
    for r in 2..=4 {
        let (g, s) = tree_ball_support(4, r);
        let op = DirichletOperator::new(&g, &s).unwrap();
        let v = dirichlet_mu0(&g, &s).unwrap();
        assert!((v.mu0 - oracle_min_eigen(&op)).abs() < 1e-8, "radius {r}");
    }
}

#[test]
fn tree_balls_decrease_toward_the_spectral_bottom() {
    let bottom = regular_tree_spectral_bottom(4);
    assert!((bottom - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-15);
    let mut prev = f64::INFINITY;
    for r in [1, 3, 5, 7] {
        let (g, s) = tree_ball_support(4, r);
        let v = dirichlet_mu0(&g, &s).unwrap();
        assert!(v.mu0 < prev);
        assert!(v.mu0 >= bottom - 1e-6);
        let rep = cheeger_sandwich_check(2.0 / 3.0, 4, v.mu0, 0.0);
        assert!(rep.upper_holds && rep.lower_holds);
        prev = v.mu0;
    }
    // radius 3 reference value from the radial reduction
    let (g, s) = tree_ball_support(4, 3);
    assert!((dirichlet_mu0(&g, &s).unwrap().mu0 - 1.06648).abs() < 1e-4);
}

#[test]
fn root_looped_balls_stay_in_the_bracket() {
    let mut prev = f64::INFINITY;
    for r in [2, 4, 6] {
        let (g, s) = root_looped_ball_support(r);
        let v = dirichlet_mu0(&g, &s).unwrap();
        assert!(v.mu0 < prev);
        assert!(cheeger_sandwich_check(2.0 / 3.0, 4, v.mu0, 0.0).holds());
        prev = v.mu0;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn growing_support_lowers_mu0(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=40);
        let g = random_graph(&mut rng, n, 0.2);
        let small: Vec<bool> = (0..n).map(|i| i == 0 || rng.random_bool(0.4)).collect();
        let big: Vec<bool> = small.iter().map(|&s| s || rng.random_bool(0.5)).collect();
        let a = dirichlet_mu0(&g, &small).unwrap().mu0;
        let b = dirichlet_mu0(&g, &big).unwrap().mu0;
        prop_assert!(b <= a + 1e-9);
    }
}

#[test]
fn tree_ball_sizes() {
    let (g, _) = regular_tree_ball(4, 3);
    assert_eq!(g.vertex_count(), 1 + 4 + 12 + 36);
}
