//! Construction of connection points from integer draws.
//!
//! The core crate has no random number generator; callers pass a `pick`
//! closure returning an integer from an inclusive range. The companion crate
//! feeds it from a seeded ChaCha stream, tests feed it from proptest.
//!
//! Generic points: the irrational parts get numerators uniform in
//! `[-bound, bound]` over the denominator `N`, then `y_r` is drawn from the
//! numerators that keep `y` in `[0, H)`, then `x_r` from those that keep the
//! point inside the L-polygon. Draws that hit the singularity or a glued edge
//! are retried.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::quadfield::{QuadNum, Rational};
use crate::surface::{numerator_range, Surface, SurfacePoint};

/// Inclusive-range integer source.
pub trait Pick {
    fn pick(&mut self, lo: i64, hi: i64) -> i64;
}

impl<F: FnMut(i64, i64) -> i64> Pick for F {
    fn pick(&mut self, lo: i64, hi: i64) -> i64 {
        self(lo, hi)
    }
}

/// Which family of points to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Generic,
    /// Periodic under `A`, not under `B`.
    APeriodicOnly,
    /// Periodic under `B`, not under `A`.
    BPeriodicOnly,
    /// Periodic under neither generator.
    Aperiodic,
}

const MAX_ATTEMPTS: usize = 10_000;

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn pick_big<P: Pick>(rng: &mut P, lo: &BigInt, hi: &BigInt) -> BigInt {
    let lo = lo.to_i64().expect("numerator range fits in i64");
    let hi = hi.to_i64().expect("numerator range fits in i64");
    BigInt::from(rng.pick(lo, hi))
}

/// Generic point with denominator dividing `n` and irrational numerators
/// bounded by `bound`.
pub fn generic_point<P: Pick>(surface: &Surface, n: i64, bound: i64, rng: &mut P) -> Option<SurfacePoint> {
    let nb = BigInt::from(n);
    for _ in 0..MAX_ATTEMPTS {
        let xi = ratio(rng.pick(-bound, bound), n);
        let yi = ratio(rng.pick(-bound, bound), n);
        let p = crate::surface::point_with_irrational_parts(surface, &nb, xi, yi, |lo, hi| {
            pick_big(rng, lo, hi)
        });
        if let Ok(p) = p {
            return Some(p);
        }
    }
    None
}

/// A point in the lower cylinder or anywhere, with prescribed `x`.
fn point_with_x<P: Pick>(
    surface: &Surface,
    n: i64,
    bound: i64,
    x: &QuadNum,
    lower_only: bool,
    rng: &mut P,
) -> Option<SurfacePoint> {
    let field = surface.field();
    let nb = BigInt::from(n);
    let zero = QuadNum::zero(field);
    let one = QuadNum::one(field);
    let top = if lower_only { &one } else { surface.height() };
    let yi = ratio(rng.pick(-bound, bound), n);
    let off = QuadNum::new(field, Rational::zero(), yi.clone());
    let (lo, hi) = numerator_range(&nb, &off, &zero, top)?;
    let yr = Rational::new(pick_big(rng, &lo, &hi), nb);
    SurfacePoint::canonicalize(surface, x.clone(), QuadNum::new(field, yr, yi)).ok()
}

fn point_with_y<P: Pick>(
    surface: &Surface,
    n: i64,
    bound: i64,
    y: &QuadNum,
    left_only: bool,
    rng: &mut P,
) -> Option<SurfacePoint> {
    let field = surface.field();
    let nb = BigInt::from(n);
    let zero = QuadNum::zero(field);
    let one = QuadNum::one(field);
    let lower = y < &one;
    let right = if left_only || !lower { &one } else { surface.width() };
    let xi = ratio(rng.pick(-bound, bound), n);
    let off = QuadNum::new(field, Rational::zero(), xi.clone());
    let (lo, hi) = numerator_range(&nb, &off, &zero, right)?;
    let xr = Rational::new(pick_big(rng, &lo, &hi), nb);
    SurfacePoint::canonicalize(surface, QuadNum::new(field, xr, xi), y.clone()).ok()
}

/// `x` with rational vertical splitting ratio `a/n`, in the left cylinder
/// (`x = a/n`) or the right one (`x = 1 + (a/n)(W - 1)`).
fn periodic_coordinate(base: &QuadNum, span: &QuadNum, n: i64, a: i64, second: bool) -> QuadNum {
    let t = ratio(a, n);
    if second {
        base + &span.scale(&t)
    } else {
        QuadNum::from_rational(base.field(), t)
    }
}

/// Draws a point of the requested class. `None` only if no admissible point
/// exists for these parameters (e.g. periodic classes need `n ≥ 2` in the
/// second cylinder).
pub fn sample_point<P: Pick>(
    surface: &Surface,
    class: PointClass,
    n: i64,
    bound: i64,
    rng: &mut P,
) -> Option<SurfacePoint> {
    let field = surface.field().clone();
    let one = QuadNum::one(&field);
    for _ in 0..MAX_ATTEMPTS {
        let candidate = match class {
            PointClass::Generic => generic_point(surface, n, bound, rng),
            PointClass::Aperiodic => generic_point(surface, n, bound, rng)
                .filter(|p| !p.is_a_periodic() && !p.is_b_periodic()),
            PointClass::APeriodicOnly => {
                let second = rng.pick(0, 1) == 1;
                let a = if second { rng.pick(1, (n - 1).max(1)) } else { rng.pick(0, n) };
                let span = surface.width() - &one;
                let x = periodic_coordinate(&one, &span, n, a, second);
                point_with_x(surface, n, bound, &x, second, rng).filter(|p| p.is_a_periodic() && !p.is_b_periodic())
            }
            PointClass::BPeriodicOnly => {
                let second = rng.pick(0, 1) == 1;
                let a = if second { rng.pick(1, (n - 1).max(1)) } else { rng.pick(0, n) };
                let span = surface.height() - &one;
                let y = periodic_coordinate(&one, &span, n, a, second);
                point_with_y(surface, n, bound, &y, second, rng).filter(|p| p.is_b_periodic() && !p.is_a_periodic())
            }
        };
        if candidate.is_some() {
            return candidate;
        }
    }
    None
}
