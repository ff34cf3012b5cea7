//! Orbit balls in the Schreier graph of the Veech group acting on a point,
//! the pruned graph `G''` and the shape classification of its components.
//!
//! Vertices are orbit points keyed by their exact canonical coordinates.
//! A generator list `S` of signed powers gives directed edges `v → g(v)`;
//! the undirected simple view collapses `g` and `g⁻¹` edges, multi-edges and
//! marks loops.
//!
//! `G''` keeps only the edges labelled `A^±k`, `B^±l` (with `k`, `l` the
//! exponents from [`thresholds`]) and drops the points that are periodic
//! under both `A` and `B`. Those points only carry loops in `G''`, so no
//! other vertex loses an edge by their removal.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::graph::{GraphError, SimpleGraph};
use crate::quadfield::Rational;
use crate::surface::{thresholds, PointKey, SurfacePoint};
use crate::word::{Gen, Letter};

/// Default limit on the number of vertices of an explored ball.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Letter,
}

#[derive(Clone, Debug)]
pub struct OrbitGraph {
    vertices: Vec<SurfacePoint>,
    index: BTreeMap<PointKey, usize>,
    depth: Vec<usize>,
    edges: Vec<Edge>,
    generators: Vec<Letter>,
    radius: usize,
    root: usize,
}

#[derive(Clone, Debug)]
pub enum ExploreError {
    /// The vertex cap was reached; `partial` holds the ball explored so far.
    ResourceCap { cap: usize, partial: alloc::boxed::Box<OrbitGraph> },
    /// No vertex of `G''` was found near the start point.
    NoAdmissibleStart { searched: usize },
}

impl fmt::Display for ExploreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExploreError::ResourceCap { cap, partial } => write!(
                f,
                "vertex cap {cap} reached (partial ball with {} vertices)",
                partial.vertex_count()
            ),
            ExploreError::NoAdmissibleStart { searched } => {
                write!(f, "no point outside the doubly periodic set within {searched} points")
            }
        }
    }
}

impl core::error::Error for ExploreError {}

/// Sort key for deterministic BFS order: generator first, then the sign of
/// the exponent (positive before negative), then its size.
fn letter_order(l: &Letter) -> (Gen, bool, i64) {
    (l.gen, l.exp < 0, l.exp.abs())
}

impl OrbitGraph {
    fn with_root(root: SurfacePoint, generators: &[Letter]) -> Self {
        let mut gens = generators.to_vec();
        gens.sort_by_key(letter_order);
        gens.dedup();
        let mut index = BTreeMap::new();
        index.insert(root.key(), 0);
        OrbitGraph {
            vertices: vec![root],
            index,
            depth: vec![0],
            edges: Vec::new(),
            generators: gens,
            radius: 0,
            root: 0,
        }
    }

    /// Assembles a graph from explicit vertices and directed edges, e.g. one
    /// read back from a file. Depths are breadth-first distances from `root`
    /// along edges in either direction; vertices farther than `radius` count
    /// as frontier. Duplicate points are rejected.
    pub fn from_parts(
        vertices: Vec<SurfacePoint>,
        edges: Vec<Edge>,
        root: usize,
        radius: usize,
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        if root >= n {
            return Err(GraphError::VertexOutOfRange(root));
        }
        let mut index = BTreeMap::new();
        for (v, p) in vertices.iter().enumerate() {
            if index.insert(p.key(), v).is_some() {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        if let Some(e) = edges.iter().find(|e| e.from >= n || e.to >= n) {
            return Err(GraphError::VertexOutOfRange(e.from.max(e.to)));
        }
        let view = SimpleGraph::from_edges(n, edges.iter().map(|e| (e.from, e.to)));
        let depth = view.distances(root);
        let mut generators: Vec<Letter> = edges.iter().map(|e| e.label).collect();
        generators.sort_by_key(letter_order);
        generators.dedup();
        Ok(OrbitGraph {
            vertices,
            index,
            depth,
            edges,
            generators,
            radius,
            root,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[SurfacePoint] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &SurfacePoint {
        &self.vertices[v]
    }

    pub fn index_of(&self, key: &PointKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn generators(&self) -> &[Letter] {
        &self.generators
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Vertices at maximal depth; their neighbourhoods are not expanded.
    pub fn frontier(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.depth[v] >= self.radius).collect()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.depth[v] < self.radius
    }

    /// Undirected simple view with loops marked.
    pub fn simple_view(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.vertex_count(), self.edges.iter().map(|e| (e.from, e.to)))
    }

    /// Outgoing edges of `v`, in generator order.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.from == v)
    }
}

/// Breadth-first ball of radius `radius` around `p` under the letters `gens`.
///
/// `admit` decides which points become vertices; edges to rejected points are
/// dropped. The root is always admitted.
pub fn expand_ball_filtered<F>(
    p: &SurfacePoint,
    gens: &[Letter],
    radius: usize,
    cap: usize,
    admit: F,
) -> Result<OrbitGraph, ExploreError>
where
    F: Fn(&SurfacePoint) -> bool,
{
    let mut g = OrbitGraph::with_root(p.clone(), gens);
    let gens = g.generators.clone();
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let d = g.depth[u];
        if d >= radius {
            continue;
        }
        for &l in &gens {
            let img = g.vertices[u].apply(l);
            let key = img.key();
            let v = match g.index.get(&key) {
                Some(&v) => v,
                None => {
                    if !admit(&img) {
                        continue;
                    }
                    if g.vertices.len() >= cap {
                        g.radius = d;
                        return Err(ExploreError::ResourceCap {
                            cap,
                            partial: alloc::boxed::Box::new(g),
                        });
                    }
                    let v = g.vertices.len();
                    g.vertices.push(img);
                    g.index.insert(key, v);
                    g.depth.push(d + 1);
                    queue.push_back(v);
                    v
                }
            };
            g.edges.push(Edge { from: u, to: v, label: l });
        }
    }
    g.radius = radius;
    Ok(g)
}

/// Breadth-first ball of radius `radius` around `p` under the letters `gens`.
pub fn expand_ball(p: &SurfacePoint, gens: &[Letter], radius: usize, cap: usize) -> Result<OrbitGraph, ExploreError> {
    expand_ball_filtered(p, gens, radius, cap, |_| true)
}

/// `A^±1, B^±1`.
pub fn unit_generators() -> [Letter; 4] {
    [
        Letter::new(Gen::A, 1),
        Letter::new(Gen::A, -1),
        Letter::new(Gen::B, 1),
        Letter::new(Gen::B, -1),
    ]
}

pub fn is_doubly_periodic(p: &SurfacePoint) -> bool {
    p.is_a_periodic() && p.is_b_periodic()
}

/// The generators `A^±k, B^±l` of `G''` for orbit points with invariant `n`.
pub fn g2_generators(p: &SurfacePoint) -> [Letter; 4] {
    let n = p.n_value().to_i64().expect("N fits in i64");
    let t = thresholds(p.surface(), n);
    [
        Letter::new(Gen::A, t.k),
        Letter::new(Gen::A, -t.k),
        Letter::new(Gen::B, t.l),
        Letter::new(Gen::B, -t.l),
    ]
}

/// How the root of a `G''` ball was chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootChoice {
    /// Unit-generator steps from the start point to the first point that is
    /// not doubly periodic (0 if the start is admissible).
    pub escape_steps: usize,
    /// `G''` edges followed downhill in `s` to reach the root.
    pub descent: Vec<Letter>,
}

/// Ball of radius `radius` in `G''` around the vertex of minimal `s` in the
/// component of `p`.
///
/// If `p` is periodic under both generators the nearest other orbit point
/// (in the `A^±1, B^±1` metric) is used instead. From there the walk follows
/// `G''` edges to strictly smaller `s` while possible; the point where it
/// stops is the root of the returned ball.
pub fn build_g2(p: &SurfacePoint, radius: usize, cap: usize) -> Result<(OrbitGraph, RootChoice), ExploreError> {
    let (start, escape_steps) = admissible_start(p, cap)?;
    let gens = g2_generators(&start);
    let mut cur = start;
    let mut descent = Vec::new();
    loop {
        let s = cur.s_value();
        let best = gens
            .iter()
            .map(|&l| (l, cur.apply(l)))
            .filter(|(_, q)| !is_doubly_periodic(q))
            .map(|(l, q)| (q.s_value(), l, q))
            .filter(|(sq, _, _)| sq < &s)
            .min_by(|a, b| a.0.cmp(&b.0).then(letter_order(&a.1).cmp(&letter_order(&b.1))));
        match best {
            Some((_, l, q)) => {
                descent.push(l);
                cur = q;
            }
            None => break,
        }
    }
    let g = expand_ball_filtered(&cur, &gens, radius, cap, |q| !is_doubly_periodic(q))?;
    Ok((g, RootChoice { escape_steps, descent }))
}

fn admissible_start(p: &SurfacePoint, cap: usize) -> Result<(SurfacePoint, usize), ExploreError> {
    if !is_doubly_periodic(p) {
        return Ok((p.clone(), 0));
    }
    let gens = unit_generators();
    let mut seen = BTreeMap::new();
    seen.insert(p.key(), 0usize);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(u) = queue.pop_front() {
        let d = seen[&u.key()];
        for l in gens {
            let q = u.apply(l);
            if seen.contains_key(&q.key()) {
                continue;
            }
            if !is_doubly_periodic(&q) {
                return Ok((q, d + 1));
            }
            if seen.len() >= cap {
                return Err(ExploreError::NoAdmissibleStart { searched: seen.len() });
            }
            seen.insert(q.key(), d + 1);
            queue.push_back(q.clone());
        }
    }
    // the whole orbit is doubly periodic (finite orbit of a periodic point)
    Err(ExploreError::NoAdmissibleStart { searched: seen.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Tree4,
    RootLooped4,
    Other,
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeKind::Tree4 => "Tree4",
            ShapeKind::RootLooped4 => "RootLooped4",
            ShapeKind::Other => "Other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An edge joins two vertices that were already connected.
    Cycle { from: usize, to: usize },
    /// Two generators map `from` to the same vertex `to ≠ from`.
    MultiEdge { from: usize, to: usize },
    /// A loop somewhere other than the root, or a second loop at the root.
    Loop { at: usize, label: Letter },
    /// Interior vertex with the wrong number of edges (loops count twice).
    Degree { at: usize, degree: usize },
    /// `s` does not increase from parent to child.
    SNotIncreasing { parent: usize, child: usize, s_parent: Rational, s_child: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { from, to } => write!(f, "cycle closed by edge {from}-{to}"),
            Violation::MultiEdge { from, to } => write!(f, "multiple edges {from}-{to}"),
            Violation::Loop { at, label } => write!(f, "unexpected loop {label} at {at}"),
            Violation::Degree { at, degree } => write!(f, "interior vertex {at} has degree {degree}"),
            Violation::SNotIncreasing { parent, child, s_parent, s_child } => {
                write!(f, "s({parent}) = {s_parent} >= s({child}) = {s_child}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComponentShape {
    pub kind: ShapeKind,
    pub violations: Vec<Violation>,
    /// Neighbour of the root with the same `s`. Then the minimum of `s` on
    /// the component is attained on this edge and `s` increases strictly
    /// away from it.
    pub tie_edge: Option<usize>,
    pub vertices: usize,
    pub radius: usize,
}

impl ComponentShape {
    pub fn summary(&self) -> String {
        alloc::format!(
            "{} (vertices {}, radius {}, violations {})",
            self.kind,
            self.vertices,
            self.radius,
            self.violations.len()
        )
    }
}

/// Classifies a ball of `G''` (as produced by [`build_g2`]) as a piece of the
/// 4-valent tree, of the root-looped 4-valent tree, or neither.
///
/// Checked: the positive-exponent edges form a tree with at most one loop,
/// located at the root; every interior vertex has degree 4 counting a loop
/// twice; `s` strictly increases from each vertex to its children in the
/// breadth-first tree, which for a tree covers every non-backtracking path
/// from the root.
///
/// A loop-free component may have its minimal `s` on an edge rather than a
/// vertex: at most one neighbour of a point periodic under neither generator
/// fails to increase `s`, and two adjacent points may each be that neighbour
/// for the other. One such neighbour of the root is accepted and reported in
/// [`ComponentShape::tie_edge`].
pub fn classify_component(ball: &OrbitGraph) -> ComponentShape {
    let n = ball.vertex_count();
    let root = ball.root();
    let mut violations = Vec::new();
    // `u --g^e--> v` and `v --g^-e--> u` are the same geometric edge; key it
    // by the endpoint it leaves with a positive exponent
    let mut keys = BTreeMap::new();
    for e in ball.edges() {
        let key = if e.label.exp > 0 { (e.from, e.to, e.label.gen) } else { (e.to, e.from, e.label.gen) };
        keys.entry(key).or_insert(e.label);
    }
    let mut dsu: Vec<usize> = (0..n).collect();
    fn find(d: &mut [usize], mut x: usize) -> usize {
        while d[x] != x {
            d[x] = d[d[x]];
            x = d[x];
        }
        x
    }
    let mut loops = 0usize;
    let mut pairs = BTreeMap::new();
    for (&(u, v, _), &label) in &keys {
        if u == v {
            loops += 1;
            if u != root || loops > 1 {
                violations.push(Violation::Loop { at: u, label });
            }
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if pairs.insert(pair, ()).is_some() {
            violations.push(Violation::MultiEdge { from: pair.0, to: pair.1 });
            continue;
        }
        let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
        if a == b {
            violations.push(Violation::Cycle { from: u, to: v });
        } else {
            dsu[a] = b;
        }
    }
    // an interior vertex has one out-edge per generator, a loop under A^k
    // being a loop under A^-k as well; missing edges point at removed
    // doubly periodic points
    let mut out_degree = vec![0usize; n];
    for e in ball.edges() {
        out_degree[e.from] += 1;
    }
    for (v, &d) in out_degree.iter().enumerate() {
        if ball.is_interior(v) && d != 4 {
            violations.push(Violation::Degree { at: v, degree: d });
        }
    }
    let mut tie_edge = None;
    for e in ball.edges() {
        if e.from == e.to || ball.depth(e.to) != ball.depth(e.from) + 1 {
            continue;
        }
        let (sp, sc) = (ball.vertex(e.from).s_value(), ball.vertex(e.to).s_value());
        if e.from == root && sc == sp && tie_edge.is_none() && loops == 0 {
            tie_edge = Some(e.to);
            continue;
        }
        if sc <= sp {
            violations.push(Violation::SNotIncreasing {
                parent: e.from,
                child: e.to,
                s_parent: sp,
                s_child: sc,
            });
        }
    }
    let kind = if !violations.is_empty() {
        ShapeKind::Other
    } else if loops == 1 {
        ShapeKind::RootLooped4
    } else {
        ShapeKind::Tree4
    };
    ComponentShape {
        kind,
        violations,
        tie_edge,
        vertices: n,
        radius: ball.radius(),
    }
}
