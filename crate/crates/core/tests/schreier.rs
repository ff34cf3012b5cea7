use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veech_core::graph::{
    cheeger_of_set, min_rooted_connected_cheeger, regular_tree_ball, root_looped_tree_ball, tree_cheeger_profile,
    SimpleGraph,
};
use veech_core::sample::{sample_point, PointClass};
use veech_core::schreier::{build_g2, classify_component, expand_ball, unit_generators, Edge, OrbitGraph, ShapeKind, Violation};
use veech_core::{Gen, Letter, Rational, Spin, Surface, SurfacePoint, SurfaceProto};

fn classify_many(s: &Surface, seed: u64, count: usize, radius: usize) -> Vec<ShapeKind> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds = Vec::new();
    for i in 0..count {
        let n = 1 + (i % 3) as i64;
        let class = [PointClass::Generic, PointClass::APeriodicOnly, PointClass::BPeriodicOnly][i % 3];
        let mut pick = |lo: i64, hi: i64| rng.random_range(lo..=hi);
        let p = sample_point(s, class, n, 50, &mut pick).unwrap();
        let (ball, _) = build_g2(&p, radius, 100_000).unwrap();
        let shape = classify_component(&ball);
        assert_ne!(shape.kind, ShapeKind::Other, "start {p:?}: {:?}", shape.violations);
        kinds.push(shape.kind);
    }
    kinds
}

#[test]
fn g2_balls_on_l8_are_trees() {
    let kinds = classify_many(&SurfaceProto::l8(), 3, 60, 3);
    assert!(kinds.contains(&ShapeKind::Tree4));
    assert!(kinds.contains(&ShapeKind::RootLooped4));
}

#[test]
fn g2_balls_on_other_prototypes_are_trees() {
    classify_many(&SurfaceProto::new(5, Spin::Minus).unwrap(), 5, 24, 2);
    classify_many(&SurfaceProto::new(17, Spin::Plus).unwrap(), 6, 24, 2);
}

#[test]
fn square_is_other() {
    let s = SurfaceProto::l8();
    let pts: Vec<_> = ["1/3,1/7,1/5,2/9", "1/3,1/7,1/5,1/9", "1/4,1/7,1/5,1/9", "1/4,1/7,1/5,2/9"]
        .iter()
        .map(|t| {
            let parts: Vec<Rational> = t.split(',').map(|x| veech_core::quadfield::parse_rational(x).unwrap()).collect();
            SurfacePoint::from_parts(&s, [0, 1, 2, 3].map(|i| parts[i].clone())).unwrap()
        })
        .collect();
    let mut edges = Vec::new();
    for (u, v, g) in [(0, 1, Gen::A), (1, 2, Gen::B), (3, 2, Gen::A), (0, 3, Gen::B)] {
        edges.push(Edge { from: u, to: v, label: Letter::new(g, 1) });
        edges.push(Edge { from: v, to: u, label: Letter::new(g, -1) });
    }
    let ball = OrbitGraph::from_parts(pts, edges, 0, 3).unwrap();
    let shape = classify_component(&ball);
    assert_eq!(shape.kind, ShapeKind::Other);
    assert!(shape.violations.iter().any(|v| matches!(v, Violation::Cycle { .. })));
}

#[test]
fn finite_orbit_is_other() {
    let s = SurfaceProto::l8();
    let p = SurfacePoint::from_parts(
        &s,
        ["1/2", "0", "1/2", "0"].map(|t| veech_core::quadfield::parse_rational(t).unwrap()),
    )
    .unwrap();
    let ball = expand_ball(&p, &unit_generators(), 2, 1000).unwrap();
    let shape = classify_component(&ball);
    assert_eq!(shape.kind, ShapeKind::Other);
    assert!(shape.violations.iter().any(|v| matches!(v, Violation::MultiEdge { .. })));
}

#[test]
fn cheeger_constants_of_model_trees() {
    let (rl, depth) = root_looped_tree_ball(5);
    let allowed: Vec<bool> = depth.iter().map(|&d| d <= 4).collect();
    let r = min_rooted_connected_cheeger(&rl, 0, &allowed, 12);
    assert_eq!(r.min, Rational::new(2.into(), 3.into()));
    assert_eq!(cheeger_of_set(&rl, &r.witness).unwrap(), r.min);
    let p = tree_cheeger_profile(2, 8);
    let diff = (p[7].clone() - Rational::new(2.into(), 3.into())).to_string();
    assert_eq!(diff, "2/39363");
    let (t, depth) = regular_tree_ball(4, 2);
    let ball: Vec<usize> = (0..t.vertex_count()).filter(|&v| depth[v] <= 1).collect();
    assert_eq!(cheeger_of_set(&t, &ball).unwrap(), Rational::new(4.into(), 5.into()));
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[test]
fn component_sandwich_and_edge_omission() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let n = rng.random_range(2..14);
        let g = random_graph(&mut rng, n, 0.25);
        let set: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if set.is_empty() {
            continue;
        }
        let (lo, c, hi) = veech_core::graph::component_sandwich(&g, &set).unwrap();
        assert!(lo <= c && c <= hi);
        let mut h = g.clone();
        let edges: Vec<_> = g.edges().collect();
        for (u, v) in edges {
            if rng.random_bool(0.3) {
                h.remove_edge(u, v);
            }
        }
        assert!(cheeger_of_set(&h, &set).unwrap() <= c);
    }
}

#[test]
fn exact_tree_minimum_matches_enumeration() {
    use veech_core::graph::min_rooted_subtree_cheeger;
    let (rl, depth) = root_looped_tree_ball(5);
    let allowed: Vec<bool> = depth.iter().map(|&d| d <= 4).collect();
    let (c, witness) = min_rooted_subtree_cheeger(&rl, 0, &allowed).unwrap();
    assert_eq!(c, Rational::new(2.into(), 3.into()));
    assert_eq!(cheeger_of_set(&rl, &witness).unwrap(), c);
    // random trees against the bounded enumerator run to full size
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let n = rng.random_range(1..=11);
        let mut g = SimpleGraph::new(n + 3);
        for v in 1..n {
            let p = rng.random_range(0..v);
            g.add_edge(p, v);
        }
        // a few vertices outside the allowed set hang off the tree
        for extra in n..n + 3 {
            let p = rng.random_range(0..n);
            g.add_edge(p, extra);
        }
        let allowed: Vec<bool> = (0..n + 3).map(|v| v < n).collect();
        let root = rng.random_range(0..n);
        let (c, w) = min_rooted_subtree_cheeger(&g, root, &allowed).unwrap();
        let e = min_rooted_connected_cheeger(&g, root, &allowed, n);
        assert_eq!(c, e.min);
        assert_eq!(cheeger_of_set(&g, &w).unwrap(), c);
        assert!(w.contains(&root));
    }
    // a cycle is rejected
    let sq = SimpleGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
    assert!(min_rooted_subtree_cheeger(&sq, 0, &[true; 4]).is_none());
}
