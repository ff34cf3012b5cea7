//! Combinatorial Laplacian, Rayleigh quotients and Dirichlet eigenvalues.
//!
//! `Δb(i) = Σ_{j ~ i} (b(i) - b(j))`, loops ignored. For a support `U ⊆ V`
//! the Dirichlet form is `q` restricted to functions vanishing off `U`, so
//! its matrix on `U` has the full degree in `G` on the diagonal.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::graph::SimpleGraph;
use crate::quadfield::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralError {
    ZeroFunction,
    EmptySupport,
    LengthMismatch { expected: usize, got: usize },
    NoConvergence { estimate: f64, residual: f64, iterations: usize },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::ZeroFunction => f.write_str("Rayleigh quotient of the zero function"),
            SpectralError::EmptySupport => f.write_str("support must be nonempty"),
            SpectralError::LengthMismatch { expected, got } => {
                write!(f, "vertex function has {got} values, graph has {expected} vertices")
            }
            SpectralError::NoConvergence { estimate, residual, iterations } => write!(
                f,
                "eigensolver did not converge after {iterations} iterations: estimate {estimate}, residual {residual:e}"
            ),
        }
    }
}

impl core::error::Error for SpectralError {}

fn check_len(g: &SimpleGraph, n: usize) -> Result<(), SpectralError> {
    if g.vertex_count() == n {
        Ok(())
    } else {
        Err(SpectralError::LengthMismatch { expected: g.vertex_count(), got: n })
    }
}

pub fn laplacian_apply(g: &SimpleGraph, b: &[f64]) -> Result<Vec<f64>, SpectralError> {
    check_len(g, b.len())?;
    Ok((0..b.len())
        .map(|i| g.neighbors(i).iter().map(|&j| b[i] - b[j]).sum())
        .collect())
}

pub fn laplacian_apply_exact(g: &SimpleGraph, b: &[Rational]) -> Result<Vec<Rational>, SpectralError> {
    check_len(g, b.len())?;
    Ok((0..b.len())
        .map(|i| g.neighbors(i).iter().fold(Rational::zero(), |acc, &j| acc + (&b[i] - &b[j])))
        .collect())
}

pub fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inner_exact(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `q(b) = Σ_{{i,j} ∈ E} (b(i) - b(j))²`.
pub fn quadratic_form(g: &SimpleGraph, b: &[f64]) -> Result<f64, SpectralError> {
    check_len(g, b.len())?;
    Ok(g.edges().map(|(i, j)| (b[i] - b[j]) * (b[i] - b[j])).sum())
}

pub fn quadratic_form_exact(g: &SimpleGraph, b: &[Rational]) -> Result<Rational, SpectralError> {
    check_len(g, b.len())?;
    Ok(g.edges().fold(Rational::zero(), |acc, (i, j)| {
        let d = &b[i] - &b[j];
        acc + &d * &d
    }))
}

/// `‖∇b‖² / ‖b‖²`.
pub fn rayleigh(g: &SimpleGraph, b: &[f64]) -> Result<f64, SpectralError> {
    let q = quadratic_form(g, b)?;
    let n2 = inner(b, b);
    if n2 == 0.0 {
        return Err(SpectralError::ZeroFunction);
    }
    Ok(q / n2)
}

pub fn rayleigh_exact(g: &SimpleGraph, b: &[Rational]) -> Result<Rational, SpectralError> {
    let q = quadratic_form_exact(g, b)?;
    let n2 = inner_exact(b, b);
    if n2.is_zero() {
        return Err(SpectralError::ZeroFunction);
    }
    Ok(q / n2)
}

/// Dirichlet operator on a support, in local indices.
#[derive(Clone, Debug)]
pub struct DirichletOperator {
    /// Support vertices in increasing order.
    pub vertices: Vec<usize>,
    diag: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl DirichletOperator {
    pub fn new(g: &SimpleGraph, support: &[bool]) -> Result<Self, SpectralError> {
        check_len(g, support.len())?;
        let vertices: Vec<usize> = (0..support.len()).filter(|&v| support[v]).collect();
        if vertices.is_empty() {
            return Err(SpectralError::EmptySupport);
        }
        let mut local = vec![usize::MAX; support.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let diag = vertices.iter().map(|&v| g.degree(v) as f64).collect();
        let adj = vertices
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&u| support[u]).map(|&u| local[u]).collect())
            .collect();
        Ok(DirichletOperator { vertices, diag, adj })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..x.len() {
            y[i] = self.diag[i] * x[i] - self.adj[i].iter().map(|&j| x[j]).sum::<f64>();
        }
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            for &j in &self.adj[i] {
                m[i][j] -= 1.0;
            }
        }
        m
    }
}

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix by
/// cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&i| v[r][i]).collect()).collect();
    (values, vectors)
}

/// Smallest Dirichlet eigenvalue with its eigenvector and residual.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletValue {
    pub mu0: f64,
    /// `‖L x - μ0 x‖` for the unit Ritz vector `x`.
    pub residual: f64,
    pub iterations: usize,
    /// Eigenvector on the support, in [`DirichletOperator::vertices`] order.
    pub vector: Vec<f64>,
}

/// Residual tolerance relative to the largest possible degree.
pub const RESIDUAL_TOL: f64 = 1e-9;
const DENSE_LIMIT: usize = 150;
const KRYLOV_MAX: usize = 300;
const RESTARTS: usize = 20;

fn normalize(x: &mut [f64]) -> f64 {
    let n = libm::sqrt(inner(x, x));
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

fn residual(op: &DirichletOperator, x: &[f64], theta: f64) -> f64 {
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    libm::sqrt(y.iter().zip(x).map(|(a, b)| (a - theta * b) * (a - theta * b)).sum())
}

/// One Lanczos run from `start` with full reorthogonalization; returns the
/// smallest Ritz pair.
fn lanczos(op: &DirichletOperator, start: &[f64], steps: usize) -> (f64, Vec<f64>, usize) {
    let n = op.dim();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = start.to_vec();
    normalize(&mut q);
    let mut w = vec![0.0; n];
    for j in 0..steps.min(n) {
        op.apply(&q, &mut w);
        let a = inner(&w, &q);
        alpha.push(a);
        basis.push(q.clone());
        // two passes of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nb = normalize(&mut w);
        if nb < 1e-12 || j + 1 == steps.min(n) {
            break;
        }
        beta.push(nb);
        core::mem::swap(&mut q, &mut w);
    }
    let m = alpha.len();
    let mut t = vec![vec![0.0; m]; m];
    for i in 0..m {
        t[i][i] = alpha[i];
        if i + 1 < m {
            t[i][i + 1] = beta[i];
            t[i + 1][i] = beta[i];
        }
    }
    let (vals, vecs) = jacobi_eigen(&t);
    let mut x = vec![0.0; n];
    for (i, b) in basis.iter().enumerate() {
        let c = vecs[i][0];
        x.iter_mut().zip(b).for_each(|(v, y)| *v += c * y);
    }
    normalize(&mut x);
    (vals[0], x, m)
}

/// Smallest eigenvalue of the Dirichlet form on `support`: dense Jacobi for
/// small supports, restarted Lanczos from the constant function otherwise.
/// The constant start has positive overlap with the positive ground state
/// of every component.
pub fn dirichlet_mu0(g: &SimpleGraph, support: &[bool]) -> Result<DirichletValue, SpectralError> {
    let op = DirichletOperator::new(g, support)?;
    let n = op.dim();
    let tol = RESIDUAL_TOL * (g.max_degree().max(1) as f64);
    if n <= DENSE_LIMIT {
        let (vals, vecs) = jacobi_eigen(&op.dense());
        let x: Vec<f64> = (0..n).map(|r| vecs[r][0]).collect();
        let res = residual(&op, &x, vals[0]);
        if res > tol {
            return Err(SpectralError::NoConvergence { estimate: vals[0], residual: res, iterations: 0 });
        }
        return Ok(DirichletValue { mu0: vals[0], residual: res, iterations: 0, vector: x });
    }
    let mut start = vec![1.0; n];
    let mut total = 0;
    let mut last = (f64::NAN, f64::INFINITY);
    for _ in 0..RESTARTS {
        let (theta, x, m) = lanczos(&op, &start, KRYLOV_MAX);
        total += m;
        let res = residual(&op, &x, theta);
        last = (theta, res);
        if res <= tol {
            return Ok(DirichletValue { mu0: theta, residual: res, iterations: total, vector: x });
        }
        start = x;
    }
    Err(SpectralError::NoConvergence { estimate: last.0, residual: last.1, iterations: total })
}

/// `min |∂M| / |M|` over nonempty `M ⊆ support`, the boundary taken in the
/// whole graph. Exhaustive; at most 24 support vertices.
pub fn dirichlet_cheeger(g: &SimpleGraph, support: &[bool]) -> Result<(Rational, Vec<usize>), SpectralError> {
    check_len(g, support.len())?;
    let verts: Vec<usize> = (0..support.len()).filter(|&v| support[v]).collect();
    let n = verts.len();
    if n == 0 {
        return Err(SpectralError::EmptySupport);
    }
    assert!(n <= 24, "exhaustive Cheeger search is limited to 24 support vertices");
    let mut local = vec![usize::MAX; support.len()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    // vertices with a neighbour outside the support are boundary in every M
    let outside: Vec<bool> = verts.iter().map(|&v| g.neighbors(v).iter().any(|&u| !support[u])).collect();
    let nbr: Vec<u32> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&u| support[u]).fold(0u32, |m, &u| m | (1 << local[u])))
        .collect();
    let mut best = (usize::MAX, 1usize, 0u32);
    for m in 1u32..(1u32 << n) {
        let size = m.count_ones() as usize;
        let bnd = (0..n).filter(|&i| m >> i & 1 == 1 && (outside[i] || nbr[i] & !m != 0)).count();
        if best.0 == usize::MAX || bnd * best.1 < best.0 * size {
            best = (bnd, size, m);
        }
    }
    let set = (0..n).filter(|&i| best.2 >> i & 1 == 1).map(|i| verts[i]).collect();
    Ok((Rational::new(best.0.into(), best.1.into()), set))
}

/// Outcome of comparing an eigenvalue estimate with `c²/(2k)` and `k·c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub c: f64,
    pub k: usize,
    pub mu0: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Compares `mu0` with `c²/(2k)` and `k·c`, allowing `slack` for rounding.
pub fn cheeger_sandwich_check(c: f64, k: usize, mu0: f64, slack: f64) -> SandwichReport {
    let lower = c * c / (2.0 * k as f64);
    let upper = k as f64 * c;
    SandwichReport {
        c,
        k,
        mu0,
        lower,
        upper,
        lower_holds: lower <= mu0 + slack,
        upper_holds: mu0 <= upper + slack,
    }
}

/// Ball of radius `r` as support inside the ball of radius `r + 1`, so that
/// every support vertex keeps its full degree.
pub fn tree_ball_support(degree: usize, radius: usize) -> (SimpleGraph, Vec<bool>) {
    let (g, depth) = crate::graph::regular_tree_ball(degree, radius + 1);
    let support = depth.iter().map(|&d| d <= radius).collect();
    (g, support)
}

/// Same for the root-looped 4-valent tree.
pub fn root_looped_ball_support(radius: usize) -> (SimpleGraph, Vec<bool>) {
    let (g, depth) = crate::graph::root_looped_tree_ball(radius + 1);
    let support = depth.iter().map(|&d| d <= radius).collect();
    (g, support)
}

/// Bottom of the spectrum of the `k`-regular tree, `k - 2√(k-1)`.
pub fn regular_tree_spectral_bottom(k: usize) -> f64 {
    k as f64 - 2.0 * libm::sqrt((k - 1) as f64)
}
