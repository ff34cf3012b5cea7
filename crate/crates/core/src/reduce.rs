//! Reduction of connection points of `L_8` into the finite set
//!
//! ```text
//! S = { P : |x_i| ≤ 35 + 24w and |y_i| ≤ 35 + 24w }
//! ```
//!
//! by a recorded word in `A`, `B`, and the bracketing of the number of orbits
//! in `P_N ∩ S` between the component count of `G_N` and the number of
//! components of the graph joining each `Q ∈ S` to `reduce(g∘Q)`.
//!
//! One iteration picks the first matching case:
//!
//! 1. `P` periodic under `B`: apply `A⁻¹ B⁻¹ A`.
//! 2. `P` periodic under `A`: apply `B⁻¹ A⁻¹ B`.
//! 3. `|x_i| < |y_i|`: `k = ⌈1/(|x_i| w)⌉` if `x < 1`, else `k = 1`; apply
//!    `A^k` if `|y_i(A^k P)| ≤ |y_i(A^-k P)|`, else `A^-k`.
//! 4. `|x_i| ≥ |y_i|`: `l = ⌈1/(|y_i| (w-1))⌉` if `y < 1`, else `l = 1`; the
//!    same choice between `B^l` and `B^-l` on `x_i`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::modn::{self, ModNAction};
use crate::quadfield::{QuadNum, Rational};
use crate::surface::{numerator_range, PointKey, Surface, SurfacePoint};
use crate::word::{Gen, GeneratorWord, Letter};

/// Safety net behind the progress check.
pub const ITERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceError {
    /// The algorithm is defined for `L_8` only.
    WrongSurface,
    /// `max(|x_i|, |y_i|)` did not drop below its value two iterations
    /// earlier. Never expected; indicates a bug.
    NoProgress { iteration: u64, point: PointKey },
    IterationCap,
    /// Enumeration of `S ∩ P_N` would exceed the cap.
    ResourceCap { estimate: u64, cap: u64 },
    /// A reduced point is missing from the enumeration of `S ∩ P_N`.
    Inconsistent(PointKey),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::WrongSurface => f.write_str("reduction is implemented for L8 only"),
            ReduceError::NoProgress { iteration, point } => {
                write!(f, "no progress at iteration {iteration}, point {point}")
            }
            ReduceError::IterationCap => write!(f, "iteration cap {ITERATION_CAP} reached"),
            ReduceError::ResourceCap { estimate, cap } => {
                write!(f, "about {estimate} points to enumerate, above the cap {cap}")
            }
            ReduceError::Inconsistent(p) => write!(f, "reduced point {p} is not in the enumerated set"),
        }
    }
}

impl core::error::Error for ReduceError {}

/// The bound `35 + 24w` on the irrational parts.
pub fn s_bound(surface: &Surface) -> QuadNum {
    QuadNum::new(
        surface.field(),
        Rational::from_integer(BigInt::from(35)),
        Rational::from_integer(BigInt::from(24)),
    )
}

// 35 + 24·√2 = 68.941125496954...; exact comparisons only near the boundary
fn within_bound(q: &Rational, bound: &QuadNum) -> bool {
    let a = q.abs();
    let approx = a.to_f64().unwrap_or(f64::INFINITY);
    let b = bound.to_f64();
    if approx < b - 1e-6 {
        return true;
    }
    if approx > b + 1e-6 {
        return false;
    }
    bound.add_rational(&-a).sign() >= 0
}

fn check_surface(p: &SurfacePoint) -> Result<(), ReduceError> {
    if p.surface().is_l8() {
        Ok(())
    } else {
        Err(ReduceError::WrongSurface)
    }
}

/// `|x_i| ≤ 35 + 24w` and `|y_i| ≤ 35 + 24w`.
pub fn in_s(p: &SurfacePoint) -> Result<bool, ReduceError> {
    check_surface(p)?;
    let bound = s_bound(p.surface());
    Ok(within_bound(p.x().i(), &bound) && within_bound(p.y().i(), &bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub case: u8,
    /// Signed exponent chosen in cases 3 and 4; `1` in cases 1 and 2.
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceResult {
    pub input: SurfacePoint,
    /// Composition-order word with `apply_word(input, word) = output`.
    pub word: GeneratorWord,
    pub output: SurfacePoint,
    pub steps: u64,
    pub trace: Vec<TraceStep>,
    /// `max(|x_i|, |y_i|)` before each iteration and after the last.
    pub measure: Vec<Rational>,
}

fn measure(p: &SurfacePoint) -> Rational {
    let (a, b) = (p.x().i().abs(), p.y().i().abs());
    if a > b {
        a
    } else {
        b
    }
}

/// `⌈1 / (t·c)⌉` for rational `t > 0` and a positive field element `c`.
fn ceil_recip(t: &Rational, c: &QuadNum) -> i64 {
    let v = c.scale(t).recip().expect("nonzero");
    v.ceil().to_i64().expect("exponent fits in i64")
}

/// One iteration of the algorithm: the case, the step word and the image.
pub fn reduction_step(p: &SurfacePoint) -> (TraceStep, GeneratorWord, SurfacePoint) {
    use Gen::{A, B};
    let word = |ls: &[(Gen, i64)]| GeneratorWord::from_letters(ls.iter().map(|&(g, e)| Letter::new(g, e)));
    if p.is_b_periodic() {
        let w = word(&[(A, -1), (B, -1), (A, 1)]);
        let q = p.apply_word(&w);
        return (TraceStep { case: 1, exponent: 1 }, w, q);
    }
    if p.is_a_periodic() {
        let w = word(&[(B, -1), (A, -1), (B, 1)]);
        let q = p.apply_word(&w);
        return (TraceStep { case: 2, exponent: 1 }, w, q);
    }
    let f = p.surface().field().clone();
    let one = Rational::one();
    let (xi, yi) = (p.x().i().abs(), p.y().i().abs());
    if xi < yi {
        let k = if p.x().add_rational(&-&one).is_negative() {
            ceil_recip(&xi, &QuadNum::w(&f))
        } else {
            1
        };
        let (qp, qm) = (p.apply_a(k), p.apply_a(-k));
        let (e, q) = if qp.y().i().abs() <= qm.y().i().abs() { (k, qp) } else { (-k, qm) };
        (TraceStep { case: 3, exponent: e }, word(&[(A, e)]), q)
    } else {
        let l = if p.y().add_rational(&-&one).is_negative() {
            ceil_recip(&yi, &(&QuadNum::w(&f) - &QuadNum::one(&f)))
        } else {
            1
        };
        let (qp, qm) = (p.apply_b(l), p.apply_b(-l));
        let (e, q) = if qp.x().i().abs() <= qm.x().i().abs() { (l, qp) } else { (-l, qm) };
        (TraceStep { case: 4, exponent: e }, word(&[(B, e)]), q)
    }
}

/// Runs the algorithm to completion.
///
/// The progress check requires, for every iteration `t`, that one of the
/// next two measures is strictly below the measure at `t`.
pub fn reduce(p: &SurfacePoint) -> Result<ReduceResult, ReduceError> {
    check_surface(p)?;
    let mut cur = p.clone();
    let mut word = GeneratorWord::new();
    let mut trace = Vec::new();
    let mut measures = Vec::new();
    let mut steps = 0u64;
    while !in_s(&cur)? {
        if steps >= ITERATION_CAP {
            return Err(ReduceError::IterationCap);
        }
        measures.push(measure(&cur));
        let (t, w, q) = reduction_step(&cur);
        word.prepend(&w);
        trace.push(t);
        cur = q;
        steps += 1;
        let m = measure(&cur);
        let len = measures.len();
        // the measure from two iterations back must have been beaten by now
        if len >= 2 && m >= measures[len - 2] && measures[len - 1] >= measures[len - 2] {
            return Err(ReduceError::NoProgress {
                iteration: steps,
                point: cur.key(),
            });
        }
    }
    measures.push(measure(&cur));
    Ok(ReduceResult {
        input: p.clone(),
        word,
        output: cur,
        steps,
        trace,
        measure: measures,
    })
}

/// Irrational-part numerators allowed in `S` for denominator `n`.
fn numerator_bound(surface: &Surface, n: &BigInt) -> BigInt {
    s_bound(surface).scale(&Rational::from_integer(n.clone())).floor()
}

/// All points of `S` with `N(P) = n`, in increasing key order.
pub fn enumerate_s(surface: &Surface, n: u32, cap: u64) -> Result<Vec<SurfacePoint>, ReduceError> {
    if !surface.is_l8() {
        return Err(ReduceError::WrongSurface);
    }
    let nb = BigInt::from(n);
    let m = numerator_bound(surface, &nb);
    let side = (BigInt::from(2) * &m + BigInt::from(1)).to_u64().unwrap_or(u64::MAX);
    // y_r and x_r contribute at most about H·n and W·n choices each
    let estimate = side
        .saturating_mul(side)
        .saturating_mul(2 * n as u64 + 1)
        .saturating_mul(3 * n as u64 + 1);
    if estimate > cap {
        return Err(ReduceError::ResourceCap { estimate, cap });
    }
    let f = surface.field().clone();
    let zero = QuadNum::zero(&f);
    let one = QuadNum::one(&f);
    let mut out = Vec::new();
    let mi = m.to_i64().expect("bound fits in i64");
    for yi_num in -mi..=mi {
        let yi = Rational::new(BigInt::from(yi_num), nb.clone());
        let y_off = QuadNum::new(&f, Rational::zero(), yi.clone());
        let Some((ylo, yhi)) = numerator_range(&nb, &y_off, &zero, surface.height()) else {
            continue;
        };
        let mut yr_num = ylo.clone();
        while yr_num <= yhi {
            let y = QuadNum::new(&f, Rational::new(yr_num.clone(), nb.clone()), yi.clone());
            yr_num += 1;
            let ys = y.add_rational(&-Rational::one()).sign();
            for xi_num in -mi..=mi {
                let xi = Rational::new(BigInt::from(xi_num), nb.clone());
                let x_off = QuadNum::new(&f, Rational::zero(), xi.clone());
                // y = 1 admits 0 < x < 1 only; the rest of that line is glued to y = 0
                let x_hi = if ys < 0 { surface.width() } else { &one };
                let Some((xlo, xhi)) = numerator_range(&nb, &x_off, &zero, x_hi) else {
                    continue;
                };
                let mut xr_num = xlo;
                while xr_num <= xhi {
                    let x = QuadNum::new(&f, Rational::new(xr_num.clone(), nb.clone()), xi.clone());
                    xr_num += 1;
                    if let Ok(p) = SurfacePoint::new(surface, x, y.clone()) {
                        if p.n_value() == nb {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|p| p.key());
    Ok(out)
}

/// Lower and upper bracket for the number of orbits meeting `S ∩ P_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitBracket {
    pub n: u32,
    /// `C(N)`, components of `G_N`.
    pub lower: usize,
    /// Components of the reduction graph `H` on `S ∩ P_N`.
    pub upper: usize,
    /// Number of points of `S ∩ P_N`.
    pub points: usize,
    /// `H`-component of each point of [`OrbitBracket::points_in_order`].
    pub class_of: Vec<usize>,
    /// Points of `S ∩ P_N` in increasing key order.
    pub points_in_order: Vec<PointKey>,
    /// `H`-components containing a point not periodic under both `A` and `B`.
    pub upper_excluding_doubly_periodic: usize,
    /// `H`-components containing a point off the horizontal and vertical
    /// saddle connections (`x, y ∉ {0, 1}`). Points on them are fixed by one
    /// generator and tend to be isolated in `H`.
    pub upper_off_saddle_connections: usize,
    /// Size of each `H`-component.
    pub class_sizes: Vec<usize>,
    /// Every `H`-component lies in a single `G_N` component.
    pub consistent_with_modn: bool,
    /// Longest reduction performed while building `H`.
    pub max_steps: u64,
}

/// `x ∈ {0, 1}` or `y ∈ {0, 1}`.
pub fn on_saddle_connection(p: &SurfacePoint) -> bool {
    let f = p.surface().field();
    let (zero, one) = (QuadNum::zero(f), QuadNum::one(f));
    *p.x() == zero || *p.x() == one || *p.y() == zero || *p.y() == one
}

/// Hook for parallel drivers: reduce `g∘Q` for all four unit generators.
pub fn neighbor_reductions(q: &SurfacePoint) -> Result<[SurfacePoint; 4], ReduceError> {
    let mut out = Vec::with_capacity(4);
    for l in crate::schreier::unit_generators() {
        out.push(reduce(&q.apply(l))?.output);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

/// Builds `H` and the bracket. `neighbors` maps each point of `S ∩ P_N`
/// to its reduced generator images; pass [`neighbor_reductions`] or a
/// precomputed (e.g. parallel) table via [`orbit_class_bracket_with`].
pub fn orbit_class_bracket(surface: &Surface, n: u32, cap: u64) -> Result<OrbitBracket, ReduceError> {
    let points = enumerate_s(surface, n, cap)?;
    let mut nbrs = Vec::with_capacity(points.len());
    let mut max_steps = 0;
    for q in &points {
        let mut row = Vec::with_capacity(4);
        for l in crate::schreier::unit_generators() {
            let r = reduce(&q.apply(l))?;
            max_steps = max_steps.max(r.steps);
            row.push(r.output);
        }
        nbrs.push(row);
    }
    orbit_class_bracket_with(n, &points, &nbrs, max_steps)
}

/// Assembles the bracket from points and their reduced neighbours.
pub fn orbit_class_bracket_with(
    n: u32,
    points: &[SurfacePoint],
    neighbors: &[Vec<SurfacePoint>],
    max_steps: u64,
) -> Result<OrbitBracket, ReduceError> {
    let index: BTreeMap<PointKey, usize> = points.iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, row) in neighbors.iter().enumerate() {
        for r in row {
            let key = r.key();
            let j = *index.get(&key).ok_or(ReduceError::Inconsistent(key))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_id = BTreeMap::new();
    let mut class_of = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let r = find(&mut parent, i);
        let next = class_id.len();
        class_of.push(*class_id.entry(r).or_insert(next));
    }
    let upper = class_id.len();
    let mut class_sizes = alloc::vec![0usize; upper];
    let mut has_free = alloc::vec![false; upper];
    let mut has_open = alloc::vec![false; upper];
    for (i, p) in points.iter().enumerate() {
        class_sizes[class_of[i]] += 1;
        if !crate::schreier::is_doubly_periodic(p) {
            has_free[class_of[i]] = true;
        }
        if !on_saddle_connection(p) {
            has_open[class_of[i]] = true;
        }
    }
    let comps = modn::components(n).map_err(|_| ReduceError::ResourceCap { estimate: (n as u64).pow(4), cap: modn::DEFAULT_TUPLE_CAP })?;
    let labels = modn::component_labels(&ModNAction::L8, n, modn::DEFAULT_TUPLE_CAP)
        .map_err(|_| ReduceError::ResourceCap { estimate: (n as u64).pow(4), cap: modn::DEFAULT_TUPLE_CAP })?;
    let mut label_of_class: Vec<Option<u32>> = alloc::vec![None; upper];
    let mut consistent = true;
    for (i, p) in points.iter().enumerate() {
        let lab = modn::label_of(&labels, &modn::project(p));
        match label_of_class[class_of[i]] {
            None => label_of_class[class_of[i]] = Some(lab),
            Some(l) if l != lab => consistent = false,
            Some(_) => {}
        }
    }
    Ok(OrbitBracket {
        n,
        lower: comps.count,
        upper,
        points: points.len(),
        class_of,
        points_in_order: points.iter().map(|p| p.key()).collect(),
        upper_excluding_doubly_periodic: has_free.iter().filter(|&&b| b).count(),
        upper_off_saddle_connections: has_open.iter().filter(|&&b| b).count(),
        class_sizes,
        consistent_with_modn: consistent,
        max_steps,
    })
}
