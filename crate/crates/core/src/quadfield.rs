//! Exact arithmetic in real quadratic fields `ℚ(w)`.
//!
//! A field is described abstractly by the relation `w² = e + f·w` together
//! with the choice of the positive root `w = (f + √(f² + 4e)) / 2`. Every
//! element is stored as `r + i·w` with rational `r` (rational part) and `i`
//! (irrational part), so the representation is unique.
//!
//! All comparisons funnel through [`QuadNum::sign`], which decides the sign
//! of `p + q·√m` by exact rational case analysis.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shared handle to a field description. Elements of the same field hold
/// clones of the same handle.
pub type Field = Arc<FieldSpec>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadError {
    /// Operands belong to different fields.
    MixedFields,
    /// `reduce_mod` was called with a modulus that is not strictly positive.
    NonPositiveModulus,
    DivisionByZero,
    InvalidField(&'static str),
    Parse(String),
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::MixedFields => f.write_str("operands belong to different quadratic fields"),
            QuadError::NonPositiveModulus => f.write_str("modulus must be strictly positive"),
            QuadError::DivisionByZero => f.write_str("division by zero"),
            QuadError::InvalidField(why) => write!(f, "invalid field description: {why}"),
            QuadError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for QuadError {}

/// Which closed form the generator `w` has; informational only, the
/// arithmetic uses `e` and `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldLabel {
    /// `w = √(D/4)`
    SqrtQuarterD,
    /// `w = (1 + √D) / 2`
    HalfOnePlusSqrtD,
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldLabel::SqrtQuarterD => f.write_str("sqrt(D/4)"),
            FieldLabel::HalfOnePlusSqrtD => f.write_str("(1+sqrt(D))/2"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FieldSpec {
    e: Rational,
    f: Rational,
    label: FieldLabel,
    // r + i·w == (r + i·half_f) + (i·surd_scale)·√radicand
    half_f: Rational,
    surd_scale: Rational,
    radicand: BigInt,
    w_approx: f64,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.f == other.f && self.label == other.label
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds the field `ℚ(w)` with `w² = e + f·w`, `w` the positive root.
    pub fn new(e: Rational, f: Rational, label: FieldLabel) -> Result<Self, QuadError> {
        let disc = &f * &f + Rational::from_integer(BigInt::from(4)) * &e;
        if !disc.is_positive() {
            return Err(QuadError::InvalidField("f² + 4e must be positive"));
        }
        // √(u/v) = √(u·v) / v
        let radicand = disc.numer() * disc.denom();
        let root = radicand.sqrt();
        if &root * &root == radicand {
            return Err(QuadError::InvalidField("w is rational"));
        }
        // w > 1  <=>  √disc > 2 - f
        let two_minus_f = Rational::from_integer(BigInt::from(2)) - &f;
        if !two_minus_f.is_negative() && disc <= &two_minus_f * &two_minus_f {
            return Err(QuadError::InvalidField("positive root w must exceed 1"));
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let surd_scale = Rational::new(BigInt::one(), BigInt::from(2) * disc.denom());
        let w_approx = (rat_to_f64(&f) + libm::sqrt(rat_to_f64(&disc))) / 2.0;
        Ok(FieldSpec {
            half_f: &f * &half,
            e,
            f,
            label,
            surd_scale,
            radicand,
            w_approx,
        })
    }

    /// `w = √(D/4)`, i.e. `w² = D/4`.
    pub fn sqrt_quarter(d: i64) -> Result<Field, QuadError> {
        let e = Rational::new(BigInt::from(d), BigInt::from(4));
        FieldSpec::new(e, Rational::zero(), FieldLabel::SqrtQuarterD).map(Arc::new)
    }

    /// `w = (1 + √D)/2`, i.e. `w² = (D - 1)/4 + w`.
    pub fn half_one_plus_sqrt(d: i64) -> Result<Field, QuadError> {
        let e = Rational::new(BigInt::from(d - 1), BigInt::from(4));
        FieldSpec::new(e, Rational::one(), FieldLabel::HalfOnePlusSqrtD).map(Arc::new)
    }

    pub fn e(&self) -> &Rational {
        &self.e
    }

    pub fn f(&self) -> &Rational {
        &self.f
    }

    pub fn label(&self) -> FieldLabel {
        self.label
    }

    /// Radicand `m` (not necessarily square-free) with `w ∈ ℚ + ℚ·√m`.
    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn w_approx(&self) -> f64 {
        self.w_approx
    }
}

/// Element `r + i·w` of a real quadratic field.
#[derive(Clone)]
pub struct QuadNum {
    r: Rational,
    i: Rational,
    field: Field,
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn rat_sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl QuadNum {
    pub fn new(field: &Field, r: Rational, i: Rational) -> Self {
        QuadNum {
            r,
            i,
            field: field.clone(),
        }
    }

    pub fn zero(field: &Field) -> Self {
        QuadNum::new(field, Rational::zero(), Rational::zero())
    }

    pub fn one(field: &Field) -> Self {
        QuadNum::from_int(field, 1)
    }

    /// The generator `w` itself.
    pub fn w(field: &Field) -> Self {
        QuadNum::new(field, Rational::zero(), Rational::one())
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        QuadNum::from_rational(field, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(field: &Field, n: BigInt) -> Self {
        QuadNum::from_rational(field, Rational::from_integer(n))
    }

    pub fn from_rational(field: &Field, r: Rational) -> Self {
        QuadNum::new(field, r, Rational::zero())
    }

    /// Rational part.
    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// Irrational part (coefficient of `w`).
    pub fn i(&self) -> &Rational {
        &self.i
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.i.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.i.is_zero()
    }

    pub fn same_field(&self, other: &QuadNum) -> bool {
        same_field(&self.field, &other.field)
    }

    fn check(&self, other: &QuadNum) -> Result<(), QuadError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(QuadError::MixedFields)
        }
    }

    pub fn checked_add(&self, other: &QuadNum) -> Result<QuadNum, QuadError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &QuadNum) -> Result<QuadNum, QuadError> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &QuadNum) -> Result<QuadNum, QuadError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &QuadNum) -> Result<QuadNum, QuadError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.recip()?))
    }

    fn add_unchecked(&self, other: &QuadNum) -> QuadNum {
        QuadNum::new(&self.field, &self.r + &other.r, &self.i + &other.i)
    }

    fn sub_unchecked(&self, other: &QuadNum) -> QuadNum {
        QuadNum::new(&self.field, &self.r - &other.r, &self.i - &other.i)
    }

    fn mul_unchecked(&self, other: &QuadNum) -> QuadNum {
        // (a + b·w)(c + d·w) = (ac + e·bd) + (ad + bc + f·bd)·w
        let bd = &self.i * &other.i;
        let spec = &*self.field;
        let r = &self.r * &other.r + &spec.e * &bd;
        let mut i = &self.r * &other.i + &self.i * &other.r;
        if !spec.f.is_zero() {
            i += &spec.f * &bd;
        }
        QuadNum::new(&self.field, r, i)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &Rational) -> QuadNum {
        QuadNum::new(&self.field, &self.r * q, &self.i * q)
    }

    pub fn scale_int(&self, n: i64) -> QuadNum {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn add_rational(&self, q: &Rational) -> QuadNum {
        QuadNum::new(&self.field, &self.r + q, self.i.clone())
    }

    /// Galois conjugate, `w ↦ f - w`.
    pub fn conj(&self) -> QuadNum {
        let r = &self.r + &self.i * &self.field.f;
        QuadNum::new(&self.field, r, -&self.i)
    }

    /// Field norm `a·conj(a)`, a rational number.
    pub fn norm(&self) -> Rational {
        // r² + r·i·f - i²·e
        let spec = &*self.field;
        &self.r * &self.r + &self.r * &self.i * &spec.f - &self.i * &self.i * &spec.e
    }

    pub fn recip(&self) -> Result<QuadNum, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        if self.i.is_zero() {
            return Ok(QuadNum::from_rational(&self.field, self.r.recip()));
        }
        let n = self.norm();
        Ok(self.conj().scale(&n.recip()))
    }

    /// Writes the value as `p + q·√m` with `m` the field radicand.
    fn surd_parts(&self) -> (Rational, Rational) {
        let spec = &*self.field;
        let p = &self.r + &self.i * &spec.half_f;
        let q = &self.i * &spec.surd_scale;
        (p, q)
    }

    /// Sign of the value under the real embedding with `w > 0`.
    pub fn sign(&self) -> i8 {
        let (p, q) = self.surd_parts();
        let sp = rat_sign(&p);
        let sq = rat_sign(&q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // signs differ: the larger magnitude wins; p² = q²m is impossible
        let m = Rational::from_integer(self.field.radicand.clone());
        if &p * &p > &q * &q * m {
            sp
        } else {
            sq
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> QuadNum {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison; fails only for operands from different fields.
    pub fn cmp_exact(&self, other: &QuadNum) -> Result<Ordering, QuadError> {
        self.check(other)?;
        Ok(match self.sub_unchecked(other).sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Sign of `self - n` for an integer `n`.
    fn sign_minus_int(&self, n: &BigInt) -> i8 {
        QuadNum::new(&self.field, &self.r - Rational::from_integer(n.clone()), self.i.clone()).sign()
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.r) + rat_to_f64(&self.i) * self.field.w_approx
    }

    /// Largest integer `n` with `n ≤ self`.
    ///
    /// A floating point estimate is corrected by at most two unit steps
    /// using exact sign tests; if that does not settle, the exact integer
    /// square root route is used.
    pub fn floor(&self) -> BigInt {
        if self.i.is_zero() {
            return self.r.floor().to_integer();
        }
        let approx = self.to_f64();
        if approx.is_finite() && libm::fabs(approx) < 4.0e15 {
            let mut n = BigInt::from(libm::floor(approx) as i64);
            for _ in 0..=2 {
                if self.sign_minus_int(&n) < 0 {
                    n -= 1;
                    continue;
                }
                let next = &n + 1;
                if self.sign_minus_int(&next) >= 0 {
                    n = next;
                    continue;
                }
                return n;
            }
        }
        self.floor_exact()
    }

    /// Floor via `A + B·√m` over a common denominator and an integer square
    /// root. Independent of any floating point estimate.
    pub fn floor_exact(&self) -> BigInt {
        if self.i.is_zero() {
            return self.r.floor().to_integer();
        }
        let (p, q) = self.surd_parts();
        let c = p.denom().lcm(q.denom());
        let a = p.numer() * (&c / p.denom());
        let b = q.numer() * (&c / q.denom());
        // b ≠ 0 and m is not a square, so b·√m is irrational and
        // floor((a + b√m)/c) only depends on floor(b√m)
        let s = (&b * &b * &self.field.radicand).sqrt();
        if b.is_positive() {
            (a + s).div_floor(&c)
        } else {
            (a - s - BigInt::one()).div_floor(&c)
        }
    }

    /// Smallest integer `n` with `self ≤ n`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Division with remainder by a positive modulus: returns `(q, rem)` with
    /// `self = q·p + rem` and `0 ≤ rem < p`.
    pub fn reduce_mod(&self, p: &QuadNum) -> Result<(BigInt, QuadNum), QuadError> {
        self.check(p)?;
        if p.sign() <= 0 {
            return Err(QuadError::NonPositiveModulus);
        }
        let quotient = if p.i.is_zero() {
            self.scale(&p.r.recip())
        } else {
            self.mul_unchecked(&p.recip()?)
        };
        let q = quotient.floor();
        let rem = self.sub_unchecked(&p.scale(&Rational::from_integer(q.clone())));
        Ok((q, rem))
    }

    /// Parses the textual form `"r+i*w"` against a known field.
    pub fn parse(field: &Field, s: &str) -> Result<QuadNum, QuadError> {
        let body = s
            .trim()
            .strip_suffix("*w")
            .ok_or_else(|| QuadError::Parse(alloc::format!("missing '*w' suffix in {s:?}")))?;
        // the rational part never contains '+', but may start with '-'
        let split = body
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+')
            .map(|(idx, _)| idx)
            .ok_or_else(|| QuadError::Parse(alloc::format!("missing '+' in {s:?}")))?;
        let r = parse_rational(&body[..split])?;
        let i = parse_rational(&body[split + 1..])?;
        Ok(QuadNum::new(field, r, i))
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, QuadError> {
    let s = s.trim();
    let bad = || QuadError::Parse(alloc::format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(QuadError::Parse(alloc::format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Always `"p/q"`, with `q ≥ 1`, lowest terms.
pub fn format_rational(q: &Rational) -> String {
    let mut out = q.numer().to_string();
    out.push('/');
    out.push_str(&q.denom().to_string());
    out
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*w", format_rational(&self.r), format_rational(&self.i))
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadNum({self} ≈ {:.6})", self.to_f64())
    }
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.i == other.i && self.same_field(other)
    }
}

impl Eq for QuadNum {}

impl PartialOrd for QuadNum {
    /// `None` for operands from different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(&self.field, -&self.r, -&self.i)
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

// Operator forms panic on mixed fields; use the `checked_*` methods where
// operands can come from different surfaces.
macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                assert!(self.same_field(rhs), "mixed quadratic fields");
                self.$inner(rhs)
            }
        }
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sqrt2() -> Field {
        FieldSpec::sqrt_quarter(8).unwrap()
    }

    fn golden() -> Field {
        FieldSpec::half_one_plus_sqrt(5).unwrap()
    }

    fn num(field: &Field, r: (i64, i64), i: (i64, i64)) -> QuadNum {
        QuadNum::new(field, q(r.0, r.1), q(i.0, i.1))
    }

    #[test]
    fn difference_of_squares() {
        let f = sqrt2();
        let a = num(&f, (1, 1), (1, 1));
        let b = num(&f, (-1, 1), (1, 1));
        assert_eq!(&a * &b, QuadNum::one(&f));
        assert_eq!(&a + &QuadNum::zero(&f), a);
    }

    #[test]
    fn golden_defining_relation() {
        let f = golden();
        let a = num(&f, (1, 1), (1, 1));
        let b = num(&f, (-1, 1), (1, 1));
        assert_eq!(&a * &b, QuadNum::w(&f));
    }

    #[test]
    fn sign_examples() {
        let f = sqrt2();
        assert_eq!(num(&f, (3, 1), (-2, 1)).sign(), 1);
        assert_eq!(QuadNum::zero(&f).sign(), 0);
        assert_eq!(num(&f, (-1, 1), (1, 1)).sign(), 1);
        assert_eq!(num(&f, (1, 1), (-1, 1)).sign(), -1);
        // 99 - 70√2 ≈ 0.00505
        assert_eq!(num(&f, (99, 1), (-70, 1)).sign(), 1);
        assert_eq!(num(&f, (-99, 1), (70, 1)).sign(), -1);
    }

    #[test]
    fn sign_in_golden_field_uses_shifted_surd() {
        let f = golden();
        // w - 1.618... : w - 2 < 0, w - 1 > 0
        assert_eq!(num(&f, (-2, 1), (1, 1)).sign(), -1);
        assert_eq!(num(&f, (-1, 1), (1, 1)).sign(), 1);
        // 2 - w > 0 on the positive root even though conj is negative
        assert_eq!(num(&f, (2, 1), (-1, 1)).sign(), 1);
    }

    #[test]
    fn floor_examples() {
        let f = sqrt2();
        assert_eq!(QuadNum::w(&f).floor(), BigInt::from(1));
        assert_eq!(QuadNum::from_rational(&f, q(5, 2)).floor(), BigInt::from(2));
        assert_eq!((-QuadNum::w(&f)).floor(), BigInt::from(-2));
        assert_eq!((-QuadNum::w(&f)).ceil(), BigInt::from(-1));
    }

    #[test]
    fn floor_of_huge_value_falls_back_to_exact_route() {
        let f = sqrt2();
        let big = BigInt::from(10).pow(40);
        let a = QuadNum::new(&f, Rational::from_integer(big.clone()), Rational::from_integer(big));
        assert_eq!(a.floor(), a.floor_exact());
        assert!(a.sign_minus_int(&a.floor()) >= 0);
        assert!(a.sign_minus_int(&(a.floor() + 1)) < 0);
    }

    #[test]
    fn reduce_mod_example() {
        let f = sqrt2();
        let a = num(&f, (5, 1), (2, 1));
        let p = num(&f, (1, 1), (1, 1));
        let (quot, rem) = a.reduce_mod(&p).unwrap();
        assert_eq!(quot, BigInt::from(3));
        assert_eq!(rem, num(&f, (2, 1), (-1, 1)));

        let (quot, rem) = QuadNum::zero(&f).reduce_mod(&p).unwrap();
        assert_eq!((quot, rem.is_zero()), (BigInt::from(0), true));
        let (quot, rem) = p.reduce_mod(&p).unwrap();
        assert_eq!((quot, rem.is_zero()), (BigInt::from(1), true));
    }

    #[test]
    fn reduce_mod_rejects_non_positive_modulus() {
        let f = sqrt2();
        let a = num(&f, (5, 1), (2, 1));
        assert_eq!(a.reduce_mod(&QuadNum::zero(&f)), Err(QuadError::NonPositiveModulus));
        assert_eq!(
            a.reduce_mod(&num(&f, (1, 1), (-1, 1))),
            Err(QuadError::NonPositiveModulus)
        );
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = QuadNum::w(&sqrt2());
        let b = QuadNum::w(&golden());
        assert_eq!(a.checked_add(&b), Err(QuadError::MixedFields));
        assert_eq!(a.checked_mul(&b), Err(QuadError::MixedFields));
        assert_eq!(a.partial_cmp(&b), None);
        // equal specs behind different handles are the same field
        let c = QuadNum::w(&sqrt2());
        assert!(a.checked_sub(&c).unwrap().is_zero());
    }

    #[test]
    fn invalid_fields() {
        assert!(FieldSpec::sqrt_quarter(16).is_err()); // w = 2 rational
        assert!(FieldSpec::sqrt_quarter(2).is_err()); // w < 1
        assert!(FieldSpec::new(q(-1, 1), q(0, 1), FieldLabel::SqrtQuarterD).is_err());
    }

    #[test]
    fn textual_form_round_trips() {
        let f = sqrt2();
        let a = num(&f, (-141, 1), (100, 1));
        assert_eq!(a.to_string(), "-141/1+100/1*w");
        assert_eq!(QuadNum::parse(&f, "-141/1+100/1*w").unwrap(), a);
        let b = num(&f, (1, 2), (-3, 7));
        assert_eq!(b.to_string(), "1/2+-3/7*w");
        assert_eq!(QuadNum::parse(&f, &b.to_string()).unwrap(), b);
        assert!(QuadNum::parse(&f, "1/2+3/0*w").is_err());
        assert!(QuadNum::parse(&f, "1/2").is_err());
    }

    #[test]
    fn recip_and_norm() {
        let f = golden();
        let a = num(&f, (3, 2), (-5, 3));
        let inv = a.recip().unwrap();
        assert_eq!(&a * &inv, QuadNum::one(&f));
        let n = &a * &a.conj();
        assert!(n.is_rational());
        assert_eq!(n.r(), &a.norm());
        assert_eq!(QuadNum::zero(&f).recip(), Err(QuadError::DivisionByZero));
    }
}
