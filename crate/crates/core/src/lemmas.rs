//! Checks of the growth statements for `s(P) = |x_i| + |y_i|`.
//!
//! Each check takes a point and the exponents to try and returns the first
//! violation it finds. Preconditions on the point class are verified and
//! reported as [`LemmaError::Precondition`] rather than silently skipped.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::quadfield::QuadNum;
use crate::surface::{thresholds, PointKey, SurfacePoint, Thresholds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// A-periodic, not B-periodic, `|l| ≥ l0`: `s(P) < s(B^l P)`.
    GrowthUnderB,
    /// B-periodic, not A-periodic, `|k| ≥ k0`: `s(P) < s(A^k P)`.
    GrowthUnderA,
    /// Not A-periodic, `k > k0`: `Δ_{A^k}` and `Δ_{A^-k}` have opposite nonzero signs.
    SignA,
    /// Not B-periodic, `l > l0`: mirror of [`Lemma::SignA`].
    SignB,
    /// Periodic under neither, `k > k1`, `l > l1`: at least three of the four
    /// neighbours `A^±k P`, `B^±l P` have larger `s`.
    ThreeOfFour,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::GrowthUnderB => "growth-under-B",
            Lemma::GrowthUnderA => "growth-under-A",
            Lemma::SignA => "sign-A",
            Lemma::SignB => "sign-B",
            Lemma::ThreeOfFour => "three-of-four",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaError {
    Precondition { lemma: Lemma, point: PointKey, what: &'static str },
    Violation { lemma: Lemma, point: PointKey, exponents: (i64, i64), detail: String },
}

impl fmt::Display for LemmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaError::Precondition { lemma, point, what } => {
                write!(f, "{lemma}: precondition failed at {point}: {what}")
            }
            LemmaError::Violation { lemma, point, exponents, detail } => {
                write!(f, "{lemma}: violated at {point} with exponents {exponents:?}: {detail}")
            }
        }
    }
}

impl core::error::Error for LemmaError {}

/// Smallest integer `≥ t`.
pub fn ceil_i64(t: &QuadNum) -> i64 {
    t.ceil().to_i64().expect("threshold fits in i64")
}

/// Smallest integer `> t`.
pub fn above_i64(t: &QuadNum) -> i64 {
    (t.floor() + BigInt::from(1)).to_i64().expect("threshold fits in i64")
}

/// Thresholds for the point's own `N`.
pub fn point_thresholds(p: &SurfacePoint) -> Thresholds {
    let n = p.n_value().to_i64().expect("N fits in i64");
    thresholds(p.surface(), n)
}

fn pre(lemma: Lemma, p: &SurfacePoint, ok: bool, what: &'static str) -> Result<(), LemmaError> {
    if ok {
        Ok(())
    } else {
        Err(LemmaError::Precondition { lemma, point: p.key(), what })
    }
}

/// `l` must satisfy `|l| ≥ l0`.
pub fn check_growth_under_b(p: &SurfacePoint, l: i64) -> Result<(), LemmaError> {
    let lemma = Lemma::GrowthUnderB;
    pre(lemma, p, p.is_a_periodic() && !p.is_b_periodic(), "point must be A-periodic and not B-periodic")?;
    let t = point_thresholds(p);
    pre(lemma, p, QuadNum::from_int(t.l0.field(), l.abs()) >= t.l0, "|l| must be at least l0")?;
    let s0 = p.s_value();
    let s1 = p.apply_b(l).s_value();
    if s0 < s1 {
        Ok(())
    } else {
        Err(LemmaError::Violation {
            lemma,
            point: p.key(),
            exponents: (0, l),
            detail: alloc::format!("s = {s0}, s(B^l P) = {s1}"),
        })
    }
}

/// `k` must satisfy `|k| ≥ k0`.
pub fn check_growth_under_a(p: &SurfacePoint, k: i64) -> Result<(), LemmaError> {
    let lemma = Lemma::GrowthUnderA;
    pre(lemma, p, p.is_b_periodic() && !p.is_a_periodic(), "point must be B-periodic and not A-periodic")?;
    let t = point_thresholds(p);
    pre(lemma, p, QuadNum::from_int(t.k0.field(), k.abs()) >= t.k0, "|k| must be at least k0")?;
    let s0 = p.s_value();
    let s1 = p.apply_a(k).s_value();
    if s0 < s1 {
        Ok(())
    } else {
        Err(LemmaError::Violation {
            lemma,
            point: p.key(),
            exponents: (k, 0),
            detail: alloc::format!("s = {s0}, s(A^k P) = {s1}"),
        })
    }
}

fn opposite(a: &crate::Rational, b: &crate::Rational) -> bool {
    !a.is_zero() && !b.is_zero() && a.is_positive() != b.is_positive()
}

/// `k` must satisfy `k > k0`.
pub fn check_sign_a(p: &SurfacePoint, k: i64) -> Result<(), LemmaError> {
    let lemma = Lemma::SignA;
    pre(lemma, p, !p.is_a_periodic(), "point must not be A-periodic")?;
    let t = point_thresholds(p);
    pre(lemma, p, QuadNum::from_int(t.k0.field(), k) > t.k0, "k must exceed k0")?;
    let (dp, dm) = (p.delta_a(k), p.delta_a(-k));
    if opposite(&dp, &dm) {
        Ok(())
    } else {
        Err(LemmaError::Violation {
            lemma,
            point: p.key(),
            exponents: (k, 0),
            detail: alloc::format!("Δ(A^k) = {dp}, Δ(A^-k) = {dm}"),
        })
    }
}

/// `l` must satisfy `l > l0`.
pub fn check_sign_b(p: &SurfacePoint, l: i64) -> Result<(), LemmaError> {
    let lemma = Lemma::SignB;
    pre(lemma, p, !p.is_b_periodic(), "point must not be B-periodic")?;
    let t = point_thresholds(p);
    pre(lemma, p, QuadNum::from_int(t.l0.field(), l) > t.l0, "l must exceed l0")?;
    let (dp, dm) = (p.delta_b(l), p.delta_b(-l));
    if opposite(&dp, &dm) {
        Ok(())
    } else {
        Err(LemmaError::Violation {
            lemma,
            point: p.key(),
            exponents: (0, l),
            detail: alloc::format!("Δ(B^l) = {dp}, Δ(B^-l) = {dm}"),
        })
    }
}

/// Number of the four neighbours `A^k P, A^-k P, B^l P, B^-l P` with larger `s`.
pub fn growth_count(p: &SurfacePoint, k: i64, l: i64) -> usize {
    let s0 = p.s_value();
    [p.apply_a(k), p.apply_a(-k), p.apply_b(l), p.apply_b(-l)]
        .iter()
        .filter(|q| q.s_value() > s0)
        .count()
}

/// `k > k1` and `l > l1`.
pub fn check_three_of_four(p: &SurfacePoint, k: i64, l: i64) -> Result<(), LemmaError> {
    let lemma = Lemma::ThreeOfFour;
    pre(lemma, p, !p.is_a_periodic() && !p.is_b_periodic(), "point must be periodic under neither generator")?;
    let t = point_thresholds(p);
    let f = t.k1.field();
    pre(lemma, p, QuadNum::from_int(f, k) > t.k1, "k must exceed k1")?;
    pre(lemma, p, QuadNum::from_int(f, l) > t.l1, "l must exceed l1")?;
    let c = growth_count(p, k, l);
    if c >= 3 {
        Ok(())
    } else {
        Err(LemmaError::Violation {
            lemma,
            point: p.key(),
            exponents: (k, l),
            detail: alloc::format!("only {c} of 4 neighbours grow"),
        })
    }
}
