//! Prototype surfaces `L_{D,ε}` and the exact action of their horizontal and
//! vertical parabolic generators on points.
//!
//! Every prototype is an L-shaped polygon made of a lower rectangle
//! `[0, W] × [0, 1]` and an upper rectangle `[0, 1] × [1, H]`, opposite
//! sides glued by translation:
//!
//! | ε  | field `w`        | `W`   | `H`   | `A`              | `B`              |
//! |----|------------------|-------|-------|------------------|------------------|
//! | 0  | `√(D/4)`         | `1+w` | `w`   | `[[1,0],[w,1]]`  | `[[1,1+w],[0,1]]`|
//! | +1 | `(1+√D)/2`       | `1+w` | `w-1` | `[[1,0],[w-1,1]]`| `[[1,1+w],[0,1]]`|
//! | -1 | `(1+√D)/2`       | `w`   | `w`   | `[[1,0],[w,1]]`  | `[[1,w],[0,1]]`  |
//!
//! `W` is the circumference of the lower horizontal cylinder and `H` the
//! circumference of the left vertical cylinder; the upper and the right
//! cylinders have circumference 1. For ε = ±1 the rectangle sizes are read
//! off the mod-periods of the generator actions.
//!
//! A point is stored by its canonical representative: on glued sides the
//! copy with smaller coordinates is used. The canonical region is
//!
//! ```text
//! 0 ≤ y < 1, 0 ≤ x < W      (lower rectangle, bottom edge included)
//! y = 1,     0 < x < 1      (segment shared by both rectangles)
//! 1 < y < H, 0 ≤ x < 1      (upper rectangle)
//! ```
//!
//! minus the corners `(0,0)`, `(1,0)`, `(0,1)`, which are the singularity.
//! `y ≤ 1` belongs to the lower cylinder and `x ≤ 1` to the left cylinder;
//! on the boundary lines both formulas agree.
//!
//! Actions use the closed per-cylinder formulas, e.g. for `B^l`
//!
//! ```text
//! x' = x + l·β·y       mod W   if y ≤ 1
//! x' = x + l·β·(y - 1) mod 1   if y > 1
//! ```
//!
//! and symmetrically for `A^k` with `α`, `H` and the roles of `x` and `y`
//! exchanged. The matrices are kept for determinant checks only.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::quadfield::{format_rational, Field, FieldSpec, QuadError, QuadNum, Rational};
use crate::word::{Gen, GeneratorWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceError {
    InvalidPrototype(&'static str),
    /// Coordinates from a different field than the surface's.
    FieldMismatch,
    /// The point lies outside the canonical fundamental polygon.
    Outside,
    /// The point is the cone point of the surface.
    Singular,
    Quad(QuadError),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::InvalidPrototype(why) => write!(f, "invalid prototype: {why}"),
            SurfaceError::FieldMismatch => f.write_str("coordinates are not in the surface's field"),
            SurfaceError::Outside => f.write_str("point is outside the canonical L-polygon"),
            SurfaceError::Singular => f.write_str("point is the singularity"),
            SurfaceError::Quad(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SurfaceError {}

impl From<QuadError> for SurfaceError {
    fn from(e: QuadError) -> Self {
        SurfaceError::Quad(e)
    }
}

/// The spin invariant ε of the prototype.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Zero,
    Plus,
    Minus,
}

impl Spin {
    pub fn from_i8(eps: i8) -> Option<Spin> {
        match eps {
            0 => Some(Spin::Zero),
            1 => Some(Spin::Plus),
            -1 => Some(Spin::Minus),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Spin::Zero => 0,
            Spin::Plus => 1,
            Spin::Minus => -1,
        }
    }
}

/// 2×2 matrix over the trace field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix2(pub [[QuadNum; 2]; 2]);

impl Matrix2 {
    pub fn det(&self) -> QuadNum {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }
}

#[derive(Debug)]
pub struct SurfaceProto {
    d: i64,
    spin: Spin,
    field: Field,
    one: QuadNum,
    width: QuadNum,
    height: QuadNum,
    width_recip: QuadNum,
    height_recip: QuadNum,
    shear_a: QuadNum,
    shear_b: QuadNum,
    gen_a: Matrix2,
    gen_b: Matrix2,
}

/// Shared handle to a prototype surface.
pub type Surface = Arc<SurfaceProto>;

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = libm::sqrt(n as f64) as i64;
    (r.saturating_sub(1)..=r + 1).any(|c| c >= 0 && c * c == n)
}

impl SurfaceProto {
    pub fn new(d: i64, spin: Spin) -> Result<Surface, SurfaceError> {
        if d < 5 {
            return Err(SurfaceError::InvalidPrototype("D must be at least 5"));
        }
        if is_square(d) {
            return Err(SurfaceError::InvalidPrototype("D must not be a square"));
        }
        let field = match spin {
            Spin::Zero if d % 4 == 0 => FieldSpec::sqrt_quarter(d)?,
            Spin::Zero => return Err(SurfaceError::InvalidPrototype("L_D needs D ≡ 0 mod 4")),
            Spin::Minus if d % 4 == 1 => FieldSpec::half_one_plus_sqrt(d)?,
            Spin::Minus => return Err(SurfaceError::InvalidPrototype("L_{D,-1} needs D ≡ 1 mod 4")),
            Spin::Plus if d % 8 == 1 => FieldSpec::half_one_plus_sqrt(d)?,
            Spin::Plus => return Err(SurfaceError::InvalidPrototype("L_{D,+1} needs D ≡ 1 mod 8")),
        };
        let one = QuadNum::one(&field);
        let w = QuadNum::w(&field);
        let (width, height, shear_a, shear_b) = match spin {
            Spin::Zero => (&one + &w, w.clone(), w.clone(), &one + &w),
            Spin::Plus => (&one + &w, &w - &one, &w - &one, &one + &w),
            Spin::Minus => (w.clone(), w.clone(), w.clone(), w.clone()),
        };
        if height.cmp_exact(&one)? != Ordering::Greater || width.cmp_exact(&one)? != Ordering::Greater {
            return Err(SurfaceError::InvalidPrototype("degenerate L-shape"));
        }
        let zero = QuadNum::zero(&field);
        let gen_a = Matrix2([[one.clone(), zero.clone()], [shear_a.clone(), one.clone()]]);
        let gen_b = Matrix2([[one.clone(), shear_b.clone()], [zero, one.clone()]]);
        Ok(Arc::new(SurfaceProto {
            d,
            spin,
            width_recip: width.recip()?,
            height_recip: height.recip()?,
            field,
            one,
            width,
            height,
            shear_a,
            shear_b,
            gen_a,
            gen_b,
        }))
    }

    /// The surface `L_8`, `w = √2`.
    pub fn l8() -> Surface {
        SurfaceProto::new(8, Spin::Zero).expect("L_8 is a valid prototype")
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_l8(&self) -> bool {
        self.d == 8 && self.spin == Spin::Zero
    }

    /// Circumferences of the (lower, upper) horizontal cylinders.
    pub fn h_periods(&self) -> (QuadNum, QuadNum) {
        (self.width.clone(), self.one.clone())
    }

    /// Circumferences of the (left, right) vertical cylinders.
    pub fn v_periods(&self) -> (QuadNum, QuadNum) {
        (self.height.clone(), self.one.clone())
    }

    /// Total width `W` of the L-polygon.
    pub fn width(&self) -> &QuadNum {
        &self.width
    }

    /// Total height `H` of the L-polygon.
    pub fn height(&self) -> &QuadNum {
        &self.height
    }

    pub fn gen_a(&self) -> &Matrix2 {
        &self.gen_a
    }

    pub fn gen_b(&self) -> &Matrix2 {
        &self.gen_b
    }

    pub fn w(&self) -> QuadNum {
        QuadNum::w(&self.field)
    }

    /// Short name such as `L8`, `L17+` or `L5-`.
    pub fn name(&self) -> alloc::string::String {
        match self.spin {
            Spin::Zero => alloc::format!("L{}", self.d),
            Spin::Plus => alloc::format!("L{}+", self.d),
            Spin::Minus => alloc::format!("L{}-", self.d),
        }
    }
}

fn cmp_one(a: &QuadNum) -> Ordering {
    let s = a.add_rational(&-Rational::one()).sign();
    s.cmp(&0)
}

/// `t mod p` for a positive period with precomputed reciprocal.
fn reduce_by(t: &QuadNum, p: &QuadNum, p_recip: &QuadNum) -> (BigInt, QuadNum) {
    let q = if p.is_rational() && p.r().is_one() {
        t.floor()
    } else {
        (t * p_recip).floor()
    };
    let rem = t - &p.scale(&Rational::from_integer(q.clone()));
    (q, rem)
}

/// Canonical key of a point: `(x_r, x_i, y_r, y_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointKey(pub [Rational; 4]);

impl fmt::Display for PointKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(
            f,
            "{},{},{},{}",
            format_rational(a),
            format_rational(b),
            format_rational(c),
            format_rational(d)
        )
    }
}

/// Horizontal cylinders are permuted by `B`, vertical ones by `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// A nonsingular point of a prototype surface in canonical coordinates.
#[derive(Clone)]
pub struct SurfacePoint {
    x: QuadNum,
    y: QuadNum,
    surface: Surface,
}

impl PartialEq for SurfacePoint {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for SurfacePoint {}

impl fmt::Debug for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfacePoint({}; x={}, y={})", self.surface.name(), self.x, self.y)
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl SurfacePoint {
    /// Validates canonical coordinates.
    pub fn new(surface: &Surface, x: QuadNum, y: QuadNum) -> Result<Self, SurfaceError> {
        let field = surface.field();
        let probe = QuadNum::zero(field);
        if !x.same_field(&probe) || !y.same_field(&probe) {
            return Err(SurfaceError::FieldMismatch);
        }
        locate(surface, &x, &y)?;
        Ok(SurfacePoint {
            x,
            y,
            surface: surface.clone(),
        })
    }

    /// Accepts any point of the closed L-polygon and replaces boundary
    /// points by their canonical representative.
    pub fn canonicalize(surface: &Surface, x: QuadNum, y: QuadNum) -> Result<Self, SurfaceError> {
        let (mut x, mut y) = (x, y);
        let zero = QuadNum::zero(surface.field());
        for _ in 0..2 {
            let ys = cmp_one(&y);
            let xs = cmp_one(&x);
            if y == surface.height && xs != Ordering::Greater {
                y = zero.clone();
            } else if ys == Ordering::Equal && xs == Ordering::Greater && x <= surface.width {
                y = zero.clone();
            }
            let ys = cmp_one(&y);
            if x == surface.width && ys != Ordering::Greater {
                x = zero.clone();
            } else if xs == Ordering::Equal && ys == Ordering::Greater && y <= surface.height {
                x = zero.clone();
            }
        }
        SurfacePoint::new(surface, x, y)
    }

    /// Builds a point from `[x_r, x_i, y_r, y_i]`.
    pub fn from_parts(surface: &Surface, parts: [Rational; 4]) -> Result<Self, SurfaceError> {
        let [xr, xi, yr, yi] = parts;
        let f = surface.field();
        SurfacePoint::new(surface, QuadNum::new(f, xr, xi), QuadNum::new(f, yr, yi))
    }

    pub fn x(&self) -> &QuadNum {
        &self.x
    }

    pub fn y(&self) -> &QuadNum {
        &self.y
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn parts(&self) -> [Rational; 4] {
        [self.x.r().clone(), self.x.i().clone(), self.y.r().clone(), self.y.i().clone()]
    }

    pub fn key(&self) -> PointKey {
        PointKey(self.parts())
    }

    /// `y ≤ 1`: the point lies in the lower horizontal cylinder.
    pub fn in_lower_cylinder(&self) -> bool {
        cmp_one(&self.y) != Ordering::Greater
    }

    /// `x ≤ 1`: the point lies in the left vertical cylinder.
    pub fn in_left_cylinder(&self) -> bool {
        cmp_one(&self.x) != Ordering::Greater
    }

    /// `A^k`, together with the number of periods subtracted by the mod.
    fn shear_a(&self, k: i64) -> (SurfacePoint, BigInt) {
        if k == 0 {
            return (self.clone(), BigInt::zero());
        }
        let s = &*self.surface;
        let (q, y) = if self.in_left_cylinder() {
            let t = &self.y + &(&s.shear_a * &self.x).scale_int(k);
            reduce_by(&t, &s.height, &s.height_recip)
        } else {
            let t = &self.y + &(&s.shear_a * &(&self.x - &s.one)).scale_int(k);
            reduce_by(&t, &s.one, &s.one)
        };
        let p = SurfacePoint {
            x: self.x.clone(),
            y,
            surface: self.surface.clone(),
        };
        (p, q)
    }

    fn shear_b(&self, l: i64) -> (SurfacePoint, BigInt) {
        if l == 0 {
            return (self.clone(), BigInt::zero());
        }
        let s = &*self.surface;
        let (q, x) = if self.in_lower_cylinder() {
            let t = &self.x + &(&s.shear_b * &self.y).scale_int(l);
            reduce_by(&t, &s.width, &s.width_recip)
        } else {
            let t = &self.x + &(&s.shear_b * &(&self.y - &s.one)).scale_int(l);
            reduce_by(&t, &s.one, &s.one)
        };
        let p = SurfacePoint {
            x,
            y: self.y.clone(),
            surface: self.surface.clone(),
        };
        (p, q)
    }

    pub fn apply_a(&self, k: i64) -> SurfacePoint {
        self.shear_a(k).0
    }

    pub fn apply_b(&self, l: i64) -> SurfacePoint {
        self.shear_b(l).0
    }

    pub fn apply(&self, letter: Letter) -> SurfacePoint {
        match letter.gen {
            Gen::A => self.apply_a(letter.exp),
            Gen::B => self.apply_b(letter.exp),
        }
    }

    /// Applies a word; its rightmost letter acts first.
    pub fn apply_word(&self, word: &GeneratorWord) -> SurfacePoint {
        word.application_order().fold(self.clone(), |p, l| p.apply(l))
    }

    /// Change of the irrational part of `y` under `A^k`.
    ///
    /// Closed form: `k·irr(α·x) - q·irr(H)` in the left cylinder and
    /// `k·irr(α·(x-1))` in the right one, `q` the number of periods removed.
    pub fn delta_a(&self, k: i64) -> Rational {
        let (_, q) = self.shear_a(k);
        let s = &*self.surface;
        let kq = Rational::from_integer(BigInt::from(k));
        if self.in_left_cylinder() {
            (&s.shear_a * &self.x).i() * &kq - s.height.i() * Rational::from_integer(q)
        } else {
            (&s.shear_a * &(&self.x - &s.one)).i() * &kq
        }
    }

    /// Change of the irrational part of `x` under `B^l`.
    pub fn delta_b(&self, l: i64) -> Rational {
        let (_, q) = self.shear_b(l);
        let s = &*self.surface;
        let lq = Rational::from_integer(BigInt::from(l));
        if self.in_lower_cylinder() {
            (&s.shear_b * &self.y).i() * &lq - s.width.i() * Rational::from_integer(q)
        } else {
            (&s.shear_b * &(&self.y - &s.one)).i() * &lq
        }
    }

    /// Height of the point in its cylinder divided by the cylinder height.
    /// Horizontal cylinders are measured in `y`, vertical ones in `x`.
    pub fn splitting_ratio(&self, dir: Direction) -> QuadNum {
        let s = &*self.surface;
        match dir {
            Direction::Horizontal if self.in_lower_cylinder() => self.y.clone(),
            Direction::Horizontal => {
                let h = &s.height - &s.one;
                (&self.y - &s.one).checked_div(&h).expect("upper cylinder has positive height")
            }
            Direction::Vertical if self.in_left_cylinder() => self.x.clone(),
            Direction::Vertical => {
                let h = &s.width - &s.one;
                (&self.x - &s.one).checked_div(&h).expect("right cylinder has positive width")
            }
        }
    }

    /// Finite orbit under `⟨A⟩`: the vertical splitting ratio is rational.
    pub fn is_a_periodic(&self) -> bool {
        self.splitting_ratio(Direction::Vertical).is_rational()
    }

    /// Finite orbit under `⟨B⟩`: the horizontal splitting ratio is rational.
    pub fn is_b_periodic(&self) -> bool {
        self.splitting_ratio(Direction::Horizontal).is_rational()
    }

    /// `s(P) = |x_i| + |y_i|`.
    pub fn s_value(&self) -> Rational {
        self.x.i().abs() + self.y.i().abs()
    }

    /// Least common denominator of `x_r, x_i, y_r, y_i`.
    pub fn n_value(&self) -> BigInt {
        [self.x.r(), self.x.i(), self.y.r(), self.y.i()]
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }
}

fn locate(surface: &SurfaceProto, x: &QuadNum, y: &QuadNum) -> Result<(), SurfaceError> {
    let xs = cmp_one(x);
    let ys = cmp_one(y);
    let x0 = x.sign();
    let y0 = y.sign();
    let corner_x = x0 == 0 || xs == Ordering::Equal;
    let corner_y = y0 == 0 || ys == Ordering::Equal;
    if corner_x && corner_y {
        return Err(SurfaceError::Singular);
    }
    if x0 < 0 || y0 < 0 {
        return Err(SurfaceError::Outside);
    }
    let inside = match ys {
        Ordering::Less => x < &surface.width,
        Ordering::Equal => xs == Ordering::Less,
        Ordering::Greater => y < &surface.height && xs == Ordering::Less,
    };
    if inside {
        Ok(())
    } else {
        Err(SurfaceError::Outside)
    }
}

/// Inclusive range of numerators `a` with `lo ≤ a/n + offset < hi`, or
/// `None` when empty.
pub fn numerator_range(
    n: &BigInt,
    offset: &QuadNum,
    lo: &QuadNum,
    hi: &QuadNum,
) -> Option<(BigInt, BigInt)> {
    let nq = Rational::from_integer(n.clone());
    let first = (lo - offset).scale(&nq).ceil();
    let last = (hi - offset).scale(&nq).ceil() - BigInt::one();
    (first <= last).then_some((first, last))
}

/// Builds a canonical point with prescribed irrational parts and denominator
/// `n` for the rational parts. `pick(lo, hi)` chooses a numerator from the
/// inclusive range it is given, first for `y_r`, then for `x_r`.
pub fn point_with_irrational_parts<F>(
    surface: &Surface,
    n: &BigInt,
    x_i: Rational,
    y_i: Rational,
    mut pick: F,
) -> Result<SurfacePoint, SurfaceError>
where
    F: FnMut(&BigInt, &BigInt) -> BigInt,
{
    let field = surface.field();
    let zero = QuadNum::zero(field);
    let y_off = QuadNum::new(field, Rational::zero(), y_i.clone());
    let (lo, hi) = numerator_range(n, &y_off, &zero, surface.height()).ok_or(SurfaceError::Outside)?;
    let y_r = Rational::new(pick(&lo, &hi), n.clone());
    let y = QuadNum::new(field, y_r, y_i);
    let x_hi = if cmp_one(&y) == Ordering::Less {
        surface.width().clone()
    } else {
        QuadNum::one(field)
    };
    let x_off = QuadNum::new(field, Rational::zero(), x_i.clone());
    let (lo, hi) = numerator_range(n, &x_off, &zero, &x_hi).ok_or(SurfaceError::Outside)?;
    let x_r = Rational::new(pick(&lo, &hi), n.clone());
    SurfacePoint::new(surface, QuadNum::new(field, x_r, x_i), y)
}

/// Exponent thresholds from the growth lemmas together with the exponents
/// used for `G''`: the smallest multiples of `N` strictly above `k1`, `l1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub n: i64,
    pub k0: QuadNum,
    pub l0: QuadNum,
    pub k1: QuadNum,
    pub l1: QuadNum,
    pub k: i64,
    pub l: i64,
}

fn qmax(items: Vec<QuadNum>) -> QuadNum {
    items
        .into_iter()
        .reduce(|a, b| if b > a { b } else { a })
        .expect("non-empty")
}

fn smallest_multiple_above(n: i64, bound: &QuadNum) -> i64 {
    let m = bound.scale(&Rational::new(BigInt::one(), BigInt::from(n))).floor() + BigInt::one();
    i64::try_from(m * BigInt::from(n)).expect("threshold exponent fits in i64")
}

/// Lower bounds for `|Δ_{A^k}| / (|k|·|x_i|)` and `|Δ_{B^l}| / (|l|·|y_i|)`
/// in the left and lower cylinders, up to the additive error `r ∈ (-1, 1)`.
pub fn growth_coefficients(surface: &SurfaceProto) -> (QuadNum, QuadNum) {
    let w = surface.w();
    let one = QuadNum::one(surface.field());
    let two = QuadNum::from_int(surface.field(), 2);
    match surface.spin {
        Spin::Zero => (w.clone(), &w - &one),
        // the lower-cylinder coefficient is |2 - w| = w - 2 since w > 2
        Spin::Plus => (w.clone(), &w - &two),
        Spin::Minus => (&w - &one, &w - &one),
    }
}

pub fn thresholds(surface: &SurfaceProto, n: i64) -> Thresholds {
    assert!(n >= 1, "N must be positive");
    let f = surface.field();
    let (ca, cb) = growth_coefficients(surface);
    let int = |v: i64| QuadNum::from_int(f, v);
    let over = |num: i64, c: &QuadNum| int(num).checked_div(c).expect("positive coefficient");
    let k0 = qmax(alloc::vec![over(3 * n, &ca), int(2 * n + 1)]);
    let l0 = qmax(alloc::vec![over(3 * n, &cb), int(2 * n + 1)]);
    let k1 = qmax(alloc::vec![over(2 + n, &ca), k0.clone(), over(2 * (n + 1), &ca)]);
    let l1 = qmax(alloc::vec![over(2 + n, &cb), l0.clone(), over(2 * (n + 1), &cb)]);
    Thresholds {
        n,
        k: smallest_multiple_above(n, &k1),
        l: smallest_multiple_above(n, &l1),
        k0,
        l0,
        k1,
        l1,
    }
}
