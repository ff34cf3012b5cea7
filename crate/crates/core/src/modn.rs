//! The orbit-invariant graph `G_N` on residue vectors.
//!
//! A point with `N(P) = N` is written as `((a + b·w)/N, (c + d·w)/N)`; the
//! numerators modulo `N` form a vector `[a, b, c, d]` with
//! `gcd(a, b, c, d, N) = 1`. The generators act on it linearly: the mod
//! operations of the surface actions subtract integer combinations of `1` and
//! `w` from a coordinate, which are multiples of `N` in numerator form. For
//! `L_8` this gives
//!
//! ```text
//! A∘[a,b,c,d] = [a, b, c+2b, d+a]
//! B∘[a,b,c,d] = [a+c+2d, b+c+d, c, d]      (mod N)
//! ```
//!
//! For other prototypes the same derivation with the shears `α`, `β` and
//! `w² = e + f·w` is used: `(c + d·w) += α·(a + b·w)` and
//! `(a + b·w) += β·(c + d·w)`. Only the `L_8` coefficients are checked
//! against published component counts.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::quadfield::Rational;
use crate::surface::{SurfacePoint, SurfaceProto};
use crate::word::Gen;

/// Default limit on `N⁴`.
pub const DEFAULT_TUPLE_CAP: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModNError {
    ZeroModulus,
    /// `gcd(a, b, c, d, N) ≠ 1`.
    NotPrimitive,
    /// `N⁴` exceeds the configured cap.
    ResourceCap { n: u32, tuples: u64, cap: u64 },
    /// Shear or field coefficients are not integers.
    NonIntegral,
}

impl fmt::Display for ModNError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModNError::ZeroModulus => f.write_str("N must be at least 1"),
            ModNError::NotPrimitive => f.write_str("gcd(a, b, c, d, N) must be 1"),
            ModNError::ResourceCap { n, tuples, cap } => {
                write!(f, "N = {n} needs {tuples} tuples, above the cap {cap}")
            }
            ModNError::NonIntegral => f.write_str("surface constants are not integral"),
        }
    }
}

impl core::error::Error for ModNError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModNVec {
    n: u32,
    v: [u32; 4],
}

impl ModNVec {
    pub fn new(n: u32, v: [i64; 4]) -> Result<Self, ModNError> {
        if n == 0 {
            return Err(ModNError::ZeroModulus);
        }
        let v = v.map(|x| x.rem_euclid(n as i64) as u32);
        let g = v.iter().fold(n, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(ModNError::NotPrimitive);
        }
        Ok(ModNVec { n, v })
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn components(&self) -> [u32; 4] {
        self.v
    }

    fn index(&self) -> usize {
        let n = self.n as usize;
        self.v.iter().fold(0usize, |acc, &x| acc * n + x as usize)
    }

    fn from_index(n: u32, mut idx: usize) -> Self {
        let mut v = [0u32; 4];
        for slot in v.iter_mut().rev() {
            *slot = (idx % n as usize) as u32;
            idx /= n as usize;
        }
        ModNVec { n, v }
    }
}

impl fmt::Display for ModNVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.v;
        write!(f, "[{a},{b},{c},{d}] mod {}", self.n)
    }
}

/// Integer coefficients of the linear action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModNAction {
    alpha: (i64, i64),
    beta: (i64, i64),
    e: i64,
    f: i64,
}

impl ModNAction {
    /// Coefficients for `L_8`: `α = w`, `β = 1 + w`, `w² = 2`.
    pub const L8: ModNAction = ModNAction {
        alpha: (0, 1),
        beta: (1, 1),
        e: 2,
        f: 0,
    };

    /// Coefficients derived from a prototype's shears.
    pub fn for_surface(s: &SurfaceProto) -> Result<Self, ModNError> {
        let int = |q: &Rational| -> Result<i64, ModNError> {
            if q.is_integer() {
                q.to_integer().to_i64().ok_or(ModNError::NonIntegral)
            } else {
                Err(ModNError::NonIntegral)
            }
        };
        let field = s.field();
        // α = H and β = W on every prototype
        let alpha = s.height();
        let beta = s.width();
        debug_assert_eq!(s.gen_a().0[1][0], *alpha);
        debug_assert_eq!(s.gen_b().0[0][1], *beta);
        Ok(ModNAction {
            alpha: (int(alpha.r())?, int(alpha.i())?),
            beta: (int(beta.r())?, int(beta.i())?),
            e: int(field.e())?,
            f: int(field.f())?,
        })
    }

    // (p + q·w)·(r + i·w)
    fn mul(&self, (r, i): (i64, i64), p: i64, q: i64) -> (i64, i64) {
        (r * p + i * self.e * q, r * q + i * p + i * self.f * q)
    }

    pub fn act(&self, v: &ModNVec, g: Gen, exp: i64) -> ModNVec {
        let n = v.n as i64;
        let [a, b, c, d] = v.v.map(|x| x as i64);
        let m = exp.rem_euclid(n);
        let out = match g {
            Gen::A => {
                let (dc, dd) = self.mul(self.alpha, a, b);
                [a, b, c + m * dc.rem_euclid(n), d + m * dd.rem_euclid(n)]
            }
            Gen::B => {
                let (da, db) = self.mul(self.beta, c, d);
                [a + m * da.rem_euclid(n), b + m * db.rem_euclid(n), c, d]
            }
        };
        ModNVec {
            n: v.n,
            v: out.map(|x| x.rem_euclid(n) as u32),
        }
    }
}

/// `A∘v` or `B∘v` with the `L_8` coefficients.
pub fn act(v: &ModNVec, g: Gen) -> ModNVec {
    ModNAction::L8.act(v, g, 1)
}

/// Inverse generator action with the `L_8` coefficients.
pub fn act_inv(v: &ModNVec, g: Gen) -> ModNVec {
    ModNAction::L8.act(v, g, -1)
}

/// Numerators of `(x_r, x_i, y_r, y_i)` over the common denominator `N(P)`,
/// reduced mod `N(P)`.
pub fn project(p: &SurfacePoint) -> ModNVec {
    let n = p.n_value();
    let nums = p.parts().map(|q| {
        let num = q.numer() * (&n / q.denom());
        num.mod_floor(&n).to_i64().expect("residue fits in i64")
    });
    let n = n.abs().to_u32().expect("N fits in u32");
    ModNVec::new(n, nums).expect("numerators of a reduced point are primitive")
}

/// Components of `G_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModNComponents {
    pub n: u32,
    pub vertex_count: u64,
    pub count: usize,
    /// Smallest vector of each component, in increasing order.
    pub representatives: Vec<ModNVec>,
}

fn check_cap(n: u32, cap: u64) -> Result<usize, ModNError> {
    if n == 0 {
        return Err(ModNError::ZeroModulus);
    }
    let tuples = (n as u64).pow(4);
    if tuples > cap {
        return Err(ModNError::ResourceCap { n, tuples, cap });
    }
    Ok(tuples as usize)
}

fn primitive_mask(n: u32, total: usize) -> Vec<bool> {
    (0..total)
        .map(|idx| {
            let v = ModNVec::from_index(n, idx);
            v.v.iter().fold(n, |g, &x| g.gcd(&x)) == 1
        })
        .collect()
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Images of vertex `idx` under `A` and `B` as dense indices.
pub fn images(action: &ModNAction, n: u32, idx: usize) -> [usize; 2] {
    let v = ModNVec::from_index(n, idx);
    [action.act(&v, Gen::A, 1).index(), action.act(&v, Gen::B, 1).index()]
}

/// Connected components by union-find over the dense index. `edges` may be
/// supplied precomputed (e.g. in parallel); otherwise they are generated.
pub fn components_union_find(
    action: &ModNAction,
    n: u32,
    cap: u64,
    edges: Option<&[[usize; 2]]>,
) -> Result<ModNComponents, ModNError> {
    let total = check_cap(n, cap)?;
    let valid = primitive_mask(n, total);
    let mut parent: Vec<u32> = (0..total as u32).collect();
    for idx in 0..total {
        if !valid[idx] {
            continue;
        }
        let img = match edges {
            Some(e) => e[idx],
            None => images(action, n, idx),
        };
        for j in img {
            let (a, b) = (find(&mut parent, idx as u32), find(&mut parent, j as u32));
            if a != b {
                // keep the smaller index as root so representatives are canonical
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    let mut reps = Vec::new();
    let mut vertex_count = 0u64;
    for idx in 0..total {
        if valid[idx] {
            vertex_count += 1;
            if find(&mut parent, idx as u32) == idx as u32 {
                reps.push(ModNVec::from_index(n, idx));
            }
        }
    }
    Ok(ModNComponents {
        n,
        vertex_count,
        count: reps.len(),
        representatives: reps,
    })
}

/// Connected components by breadth-first labelling with explicit inverse
/// actions; independent of the union-find route.
pub fn components_bfs(action: &ModNAction, n: u32, cap: u64) -> Result<ModNComponents, ModNError> {
    let total = check_cap(n, cap)?;
    let valid = primitive_mask(n, total);
    let mut label = vec![u32::MAX; total];
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    let mut vertex_count = 0u64;
    for s in 0..total {
        if !valid[s] {
            continue;
        }
        vertex_count += 1;
        if label[s] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(ModNVec::from_index(n, s));
        label[s] = c;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let v = ModNVec::from_index(n, u);
            for (g, e) in [(Gen::A, 1), (Gen::A, -1), (Gen::B, 1), (Gen::B, -1)] {
                let w = action.act(&v, g, e).index();
                if label[w] == u32::MAX {
                    label[w] = c;
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(ModNComponents {
        n,
        vertex_count,
        count: reps.len(),
        representatives: reps,
    })
}

/// `C(N)` for `L_8`.
pub fn components(n: u32) -> Result<ModNComponents, ModNError> {
    components_union_find(&ModNAction::L8, n, DEFAULT_TUPLE_CAP, None)
}

/// Component label of every primitive vector, `u32::MAX` for the others.
pub fn component_labels(action: &ModNAction, n: u32, cap: u64) -> Result<Vec<u32>, ModNError> {
    let total = check_cap(n, cap)?;
    let valid = primitive_mask(n, total);
    let mut parent: Vec<u32> = (0..total as u32).collect();
    for idx in (0..total).filter(|&i| valid[i]) {
        for j in images(action, n, idx) {
            let (a, b) = (find(&mut parent, idx as u32), find(&mut parent, j as u32));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    Ok((0..total)
        .map(|i| if valid[i] { find(&mut parent, i as u32) } else { u32::MAX })
        .collect())
}

/// Label lookup for a vector in the output of [`component_labels`].
pub fn label_of(labels: &[u32], v: &ModNVec) -> u32 {
    labels[v.index()]
}

/// Whether `A` and `B` permute the primitive vectors.
pub fn is_bijective(action: &ModNAction, n: u32, cap: u64) -> Result<bool, ModNError> {
    let total = check_cap(n, cap)?;
    let valid = primitive_mask(n, total);
    for g in [Gen::A, Gen::B] {
        let mut hit = vec![false; total];
        for idx in (0..total).filter(|&i| valid[i]) {
            let j = action.act(&ModNVec::from_index(n, idx), g, 1).index();
            if !valid[j] || hit[j] {
                return Ok(false);
            }
            hit[j] = true;
        }
    }
    Ok(true)
}

/// `#{v ∈ (ℤ/N)⁴ : gcd(v, N) = 1} = N⁴ ∏_{p | N} (1 - p⁻⁴)`.
pub fn primitive_count(n: u32) -> u64 {
    let mut count = (n as u64).pow(4);
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            count = count / (p as u64).pow(4) * ((p as u64).pow(4) - 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        count = count / (m as u64).pow(4) * ((m as u64).pow(4) - 1);
    }
    count
}

/// One coprime pair `(N, M)` in the multiplicativity probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativityRow {
    pub n: u32,
    pub m: u32,
    pub c_nm: usize,
    pub c_n_times_c_m: usize,
}

impl MultiplicativityRow {
    pub fn holds(&self) -> bool {
        self.c_nm == self.c_n_times_c_m
    }
}

/// Compares `C(NM)` with `C(N)·C(M)` for coprime `1 < N < M`, `NM ≤ max`,
/// given the table `counts[k-1] = C(k)`.
pub fn multiplicativity(counts: &[usize]) -> Vec<MultiplicativityRow> {
    let max = counts.len() as u32;
    let mut rows = Vec::new();
    for n in 2..=max {
        for m in n + 1..=max / n {
            if n.gcd(&m) == 1 {
                rows.push(MultiplicativityRow {
                    n,
                    m,
                    c_nm: counts[(n * m - 1) as usize],
                    c_n_times_c_m: counts[(n - 1) as usize] * counts[(m - 1) as usize],
                });
            }
        }
    }
    rows
}

/// `C(N)` for `N = 1..=max`.
pub fn table(max: u32) -> Result<Vec<usize>, ModNError> {
    (1..=max).map(|n| components(n).map(|c| c.count)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark_examples() {
        let v = ModNVec::new(2, [1, 0, 1, 1]).unwrap();
        assert_eq!(act(&v, Gen::A).components(), [1, 0, 1, 0]);
        let one = ModNVec::new(1, [0, 0, 0, 0]).unwrap();
        assert_eq!(act(&one, Gen::A), one);
        assert_eq!(act(&one, Gen::B), one);
        let v = ModNVec::new(7, [3, 5, 1, 6]).unwrap();
        assert_eq!(act(&v, Gen::A).components(), [3, 5, (1 + 10) % 7, (6 + 3) % 7]);
        assert_eq!(act(&v, Gen::B).components(), [(3 + 1 + 12) % 7, (5 + 1 + 6) % 7, 1, 6]);
        for g in [Gen::A, Gen::B] {
            assert_eq!(act_inv(&act(&v, g), g), v);
        }
        assert_eq!(ModNVec::new(2, [0, 0, 0, 0]), Err(ModNError::NotPrimitive));
    }

    #[test]
    fn small_table() {
        assert_eq!(table(4).unwrap(), [1, 5, 1, 8]);
        assert_eq!(components(2).unwrap().vertex_count, 15);
    }

    #[test]
    fn union_find_and_bfs_agree() {
        for n in 1..=9 {
            let a = components_union_find(&ModNAction::L8, n, DEFAULT_TUPLE_CAP, None).unwrap();
            let b = components_bfs(&ModNAction::L8, n, DEFAULT_TUPLE_CAP).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.vertex_count, primitive_count(n));
            assert!(is_bijective(&ModNAction::L8, n, DEFAULT_TUPLE_CAP).unwrap());
        }
    }

    #[test]
    fn l8_action_matches_surface_derivation() {
        let s = SurfaceProto::l8();
        assert_eq!(ModNAction::for_surface(&s).unwrap(), ModNAction::L8);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            components_union_find(&ModNAction::L8, 30, 1000, None),
            Err(ModNError::ResourceCap { .. })
        ));
    }
}
