//! Finite simple graphs and vertex-boundary Cheeger quotients.
//!
//! The boundary of `M` is the set of vertices of `M` that have a neighbour
//! outside `M`, so `c(M) = |∂M| / |M|`. Loops are recorded but never make a
//! vertex a boundary vertex.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::quadfield::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    EmptySet,
    VertexOutOfRange(usize),
    DuplicateVertex(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptySet => f.write_str("vertex set must be nonempty"),
            GraphError::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            GraphError::DuplicateVertex(v) => write!(f, "vertex {v} repeats an earlier vertex"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Undirected simple graph on `0..n` with optional loop markers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    looped: Vec<bool>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
            looped: vec![false; n],
        }
    }

    /// Collapses duplicate edges; `u == v` marks a loop.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.looped.push(false);
        self.adj.len() - 1
    }

    /// Adds `{u, v}` unless present. Returns whether the edge is new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            let fresh = !self.looped[u];
            self.looped[u] = true;
            return fresh;
        }
        if self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            let had = self.looped[u];
            self.looped[u] = false;
            return had;
        }
        let Some(pos) = self.adj[u].iter().position(|&x| x == v) else {
            return false;
        };
        self.adj[u].swap_remove(pos);
        let pos = self.adj[v].iter().position(|&x| x == u).expect("symmetric adjacency");
        self.adj[v].swap_remove(pos);
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Non-loop degree.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.looped[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Component label for every vertex, labels in order of first vertex.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().0 <= 1
    }

    /// Breadth-first distances from `root`, `usize::MAX` when unreachable.
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Subgraph induced by `keep`, with the old-to-new index map.
    pub fn induced(&self, keep: &[bool]) -> (SimpleGraph, Vec<Option<usize>>) {
        let mut map = vec![None; self.vertex_count()];
        let mut next = 0;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut g = SimpleGraph::new(next);
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.add_edge(a, b);
            }
        }
        for (v, &l) in self.looped.iter().enumerate() {
            if let (true, Some(a)) = (l, map[v]) {
                g.add_edge(a, a);
            }
        }
        (g, map)
    }
}

/// Number of vertices of `members` (given as a membership mask) that have a
/// neighbour outside.
pub fn boundary_size(g: &SimpleGraph, mask: &[bool]) -> usize {
    (0..g.vertex_count())
        .filter(|&v| mask[v] && g.neighbors(v).iter().any(|&u| !mask[u]))
        .count()
}

/// `c(M) = |∂M| / |M|`.
pub fn cheeger_of_set(g: &SimpleGraph, set: &[usize]) -> Result<Rational, GraphError> {
    let mut mask = vec![false; g.vertex_count()];
    let mut size = 0usize;
    for &v in set {
        if v >= g.vertex_count() {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if !mask[v] {
            mask[v] = true;
            size += 1;
        }
    }
    if size == 0 {
        return Err(GraphError::EmptySet);
    }
    Ok(Rational::new(BigInt::from(boundary_size(g, &mask)), BigInt::from(size)))
}

/// Minimum of `c(M)` over all nonempty vertex subsets. Exponential; meant for
/// graphs with at most ~20 vertices.
pub fn brute_force_cheeger(g: &SimpleGraph) -> Result<(Rational, Vec<usize>), GraphError> {
    let n = g.vertex_count();
    assert!(n <= 24, "brute force Cheeger search is limited to 24 vertices");
    if n == 0 {
        return Err(GraphError::EmptySet);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut best: Option<(usize, usize, u32)> = None;
    for m in 1u32..(1u32 << n) {
        let size = m.count_ones() as usize;
        let bnd = (0..n).filter(|&v| m >> v & 1 == 1 && nbr[v] & !m != 0).count();
        let better = match best {
            None => true,
            Some((b, s, _)) => bnd * s < b * size,
        };
        if better {
            best = Some((bnd, size, m));
        }
    }
    let (b, s, m) = best.expect("at least one subset");
    let set = (0..n).filter(|&v| m >> v & 1 == 1).collect();
    Ok((Rational::new(BigInt::from(b), BigInt::from(s)), set))
}

/// Ball of radius `radius` in the `degree`-regular tree. Vertex 0 is the
/// root; vertices are numbered level by level. Returns the graph and the
/// depth of every vertex.
pub fn regular_tree_ball(degree: usize, radius: usize) -> (SimpleGraph, Vec<usize>) {
    tree_ball(radius, |depth| if depth == 0 { degree } else { degree - 1 }, false)
}

/// Ball in the root-looped 4-valent tree: the root carries a loop and two
/// children, every other vertex has three children.
pub fn root_looped_tree_ball(radius: usize) -> (SimpleGraph, Vec<usize>) {
    tree_ball(radius, |depth| if depth == 0 { 2 } else { 3 }, true)
}

fn tree_ball(radius: usize, children: impl Fn(usize) -> usize, root_loop: bool) -> (SimpleGraph, Vec<usize>) {
    let mut g = SimpleGraph::new(1);
    let mut depth = vec![0usize];
    if root_loop {
        g.add_edge(0, 0);
    }
    let mut level = vec![0usize];
    for d in 0..radius {
        let mut next = Vec::new();
        for &u in &level {
            for _ in 0..children(d) {
                let v = g.add_vertex();
                depth.push(d + 1);
                g.add_edge(u, v);
                next.push(v);
            }
        }
        level = next;
    }
    (g, depth)
}

/// `c(B_n)` for balls around a vertex of the `2k`-regular tree, `n = 1..=n_max`,
/// from the counts `|B_n| = 1 + 2k((2k-1)^n - 1)/(2k - 2)` and
/// `|∂B_n| = 2k(2k-1)^(n-1)`. For `k = 1` (the line) `c(B_n) = 2/(2n+1)`.
pub fn tree_cheeger_profile(k: u32, n_max: u32) -> Vec<Rational> {
    assert!(k >= 1, "k must be positive");
    let deg = BigInt::from(2 * k);
    let branch = BigInt::from(2 * k - 1);
    (1..=n_max)
        .map(|n| {
            if k == 1 {
                return Rational::new(BigInt::from(2), BigInt::from(2 * n + 1));
            }
            let pow = num_traits::pow(branch.clone(), n as usize);
            let size = BigInt::one() + &deg * (&pow - BigInt::one()) / (&branch - BigInt::one());
            let bnd = &deg * num_traits::pow(branch.clone(), n as usize - 1);
            Rational::new(bnd, size)
        })
        .collect()
}

/// Result of an exhaustive search over connected vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSearch {
    pub min: Rational,
    pub witness: Vec<usize>,
    /// Number of connected sets examined.
    pub examined: u64,
}

/// Minimum of `c(M)` over connected sets `M` with `root ∈ M ⊆ allowed` and
/// `|M| ≤ max_size`. The boundary is taken in the whole graph `g`, so vertices
/// outside `allowed` still count as outside neighbours.
pub fn min_rooted_connected_cheeger(
    g: &SimpleGraph,
    root: usize,
    allowed: &[bool],
    max_size: usize,
) -> SubsetSearch {
    assert!(allowed[root], "root must be allowed");
    let n = g.vertex_count();
    let mut st = Search {
        g,
        allowed,
        max_size,
        in_set: vec![false; n],
        banned: vec![false; n],
        inner_nbrs: vec![0; n],
        set: Vec::new(),
        boundary: 0,
        best: (usize::MAX, 1, Vec::new()),
        examined: 0,
    };
    st.banned[root] = true;
    st.push(root);
    let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&v| allowed[v]).collect();
    for &v in &ext {
        st.banned[v] = true;
    }
    st.recurse(ext);
    let (b, s, witness) = st.best;
    SubsetSearch {
        min: Rational::new(BigInt::from(b), BigInt::from(s)),
        witness,
        examined: st.examined,
    }
}

struct Search<'a> {
    g: &'a SimpleGraph,
    allowed: &'a [bool],
    max_size: usize,
    in_set: Vec<bool>,
    // vertices already in the set or queued in some extension list
    banned: Vec<bool>,
    inner_nbrs: Vec<usize>,
    set: Vec<usize>,
    boundary: usize,
    best: (usize, usize, Vec<usize>),
    examined: u64,
}

impl Search<'_> {
    fn is_boundary(&self, v: usize) -> bool {
        self.inner_nbrs[v] < self.g.degree(v)
    }

    fn push(&mut self, v: usize) {
        self.in_set[v] = true;
        self.set.push(v);
        for &u in self.g.neighbors(v) {
            if self.in_set[u] {
                let was = self.is_boundary(u);
                self.inner_nbrs[u] += 1;
                if was && !self.is_boundary(u) {
                    self.boundary -= 1;
                }
            }
            if u != v && self.in_set[u] {
                self.inner_nbrs[v] += 1;
            }
        }
        if self.is_boundary(v) {
            self.boundary += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.set.pop().expect("nonempty");
        if self.is_boundary(v) {
            self.boundary -= 1;
        }
        self.in_set[v] = false;
        self.inner_nbrs[v] = 0;
        for &u in self.g.neighbors(v) {
            if self.in_set[u] {
                let was = self.is_boundary(u);
                self.inner_nbrs[u] -= 1;
                if !was && self.is_boundary(u) {
                    self.boundary += 1;
                }
            }
        }
    }

    fn record(&mut self) {
        self.examined += 1;
        let (b, s, _) = &self.best;
        let size = self.set.len();
        if self.best.2.is_empty() || self.boundary * s < b * size {
            let mut w = self.set.clone();
            w.sort_unstable();
            self.best = (self.boundary, size, w);
        }
    }

    fn recurse(&mut self, mut ext: Vec<usize>) {
        self.record();
        if self.set.len() == self.max_size {
            return;
        }
        while let Some(v) = ext.pop() {
            let mut added = Vec::new();
            for &u in self.g.neighbors(v) {
                if self.allowed[u] && !self.banned[u] {
                    self.banned[u] = true;
                    added.push(u);
                }
            }
            let mut next = ext.clone();
            next.extend_from_slice(&added);
            self.push(v);
            self.recurse(next);
            self.pop();
            for u in added {
                self.banned[u] = false;
            }
        }
    }
}

/// Minimum of `c(M)` over all connected `M` with `root ∈ M ⊆ allowed`, when
/// the subgraph induced by `allowed` is a tree. The boundary is taken in
/// `g`. Exact: Dinkelbach iteration on the ratio, each step minimizing
/// `|∂M| - λ|M|` over rooted subtrees by dynamic programming. Returns `None`
/// if `allowed` does not induce a tree containing `root`.
pub fn min_rooted_subtree_cheeger(g: &SimpleGraph, root: usize, allowed: &[bool]) -> Option<(Rational, Vec<usize>)> {
    let n = g.vertex_count();
    if !allowed[root] {
        return None;
    }
    // parent pointers and a BFS order over the allowed part
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &u in g.neighbors(v) {
            if !allowed[u] || u == parent[v] {
                continue;
            }
            if seen[u] {
                return None;
            }
            seen[u] = true;
            parent[u] = v;
            order.push(u);
        }
    }
    if order.len() != allowed.iter().filter(|&&a| a).count() {
        return None;
    }
    let outside: Vec<bool> = (0..n).map(|v| g.neighbors(v).iter().any(|&u| !allowed[u])).collect();
    let kids: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().filter(|&u| allowed[u] && parent[u] == v).collect())
        .collect();
    let ratio = |set: &[usize]| {
        let mut mask = vec![false; n];
        set.iter().for_each(|&v| mask[v] = true);
        Rational::new(BigInt::from(boundary_size(g, &mask)), BigInt::from(set.len()))
    };
    let mut best_set = vec![root];
    let mut lambda = ratio(&best_set);
    loop {
        // cost[v]: min of Σ_{u ∈ M} (b(u) - λ) over subtrees M rooted at v;
        // full[v]: whether the optimum keeps every child (so b(v) = 0)
        let mut cost = vec![Rational::zero(); n];
        let mut full = vec![false; n];
        for &v in order.iter().rev() {
            let mut all = Rational::zero();
            let mut some = Rational::one();
            for &c in &kids[v] {
                all += &cost[c];
                if cost[c] < Rational::zero() {
                    some += &cost[c];
                }
            }
            if !outside[v] && all <= some {
                cost[v] = all - &lambda;
                full[v] = true;
            } else {
                cost[v] = some - &lambda;
            }
        }
        let mut set = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            set.push(v);
            for &c in &kids[v] {
                if full[v] || cost[c] < Rational::zero() {
                    stack.push(c);
                }
            }
        }
        if cost[root] >= Rational::zero() {
            best_set.sort_unstable();
            return Some((lambda, best_set));
        }
        lambda = ratio(&set);
        best_set = set;
    }
}

/// Checks that `c` is between the smallest and largest `c(M_i)` over the
/// parts of `set` in the connected components of `g`.
pub fn component_sandwich(g: &SimpleGraph, set: &[usize]) -> Result<(Rational, Rational, Rational), GraphError> {
    let c = cheeger_of_set(g, set)?;
    let (_, label) = g.component_labels();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut seen = alloc::collections::BTreeMap::new();
    for &v in set {
        let idx = *seen.entry(label[v]).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[idx].push(v);
    }
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for p in &parts {
        let ci = cheeger_of_set(g, p)?;
        if lo.as_ref().map_or(true, |l| &ci < l) {
            lo = Some(ci.clone());
        }
        if hi.as_ref().map_or(true, |h| &ci > h) {
            hi = Some(ci);
        }
    }
    let zero = Rational::zero();
    Ok((lo.unwrap_or(zero.clone()), c, hi.unwrap_or(zero)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cheeger_examples() {
        let (t, depth) = regular_tree_ball(4, 3);
        let ball1: Vec<usize> = (0..t.vertex_count()).filter(|&v| depth[v] <= 1).collect();
        assert_eq!(cheeger_of_set(&t, &ball1).unwrap(), q(4, 5));
        let all: Vec<usize> = (0..t.vertex_count()).collect();
        assert_eq!(cheeger_of_set(&t, &all).unwrap(), q(0, 1));
        assert_eq!(cheeger_of_set(&t, &[]), Err(GraphError::EmptySet));
        let (rl, _) = root_looped_tree_ball(3);
        assert_eq!(cheeger_of_set(&rl, &[0, 1, 2]).unwrap(), q(2, 3));
    }

    #[test]
    fn tree_profile_values() {
        let p = tree_cheeger_profile(2, 8);
        assert_eq!(p[0], q(4, 5));
        assert_eq!(p[7], q(8748, 13121));
        assert!(p.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(tree_cheeger_profile(1, 3), [q(2, 3), q(2, 5), q(2, 7)]);
    }

    #[test]
    fn profile_matches_explicit_balls() {
        for (k, n_max) in [(2u32, 4u32), (3, 3)] {
            let profile = tree_cheeger_profile(k, n_max);
            let (t, depth) = regular_tree_ball(2 * k as usize, n_max as usize + 1);
            for n in 1..=n_max as usize {
                let ball: Vec<usize> = (0..t.vertex_count()).filter(|&v| depth[v] <= n).collect();
                assert_eq!(cheeger_of_set(&t, &ball).unwrap(), profile[n - 1]);
            }
        }
    }

    #[test]
    fn exhaustive_search_counts_connected_sets() {
        // path 0-1-2-3 rooted at 1: {1},{0,1},{1,2},{0,1,2},{1,2,3},{0,1,2,3}
        let g = SimpleGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let r = min_rooted_connected_cheeger(&g, 1, &[true; 4], 4);
        assert_eq!(r.examined, 6);
        assert_eq!(r.min, q(0, 1));
        let r = min_rooted_connected_cheeger(&g, 1, &[true; 4], 3);
        assert_eq!(r.examined, 5);
        assert_eq!(r.min, q(1, 3));
    }

    #[test]
    fn brute_force_on_cycle() {
        let g = SimpleGraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert_eq!(brute_force_cheeger(&g).unwrap().0, q(0, 1));
        let g = SimpleGraph::from_edges(6, (0..5).map(|i| (i, i + 1)));
        // the whole path is a component, c = 0
        assert_eq!(brute_force_cheeger(&g).unwrap().0, q(0, 1));
    }
}
