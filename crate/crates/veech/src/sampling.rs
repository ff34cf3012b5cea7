//! Seeded randomness and parsing of surfaces and point literals.
//!
//! Sample `i` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, so every sample is reproducible on its own and the output of
//! a parallel run does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use veech_core::quadfield::parse_rational;
use veech_core::{Spin, Surface, SurfacePoint, SurfaceProto};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown surface {0:?}; expected L<D>, L<D>+ or L<D>-")]
    Surface(String),
    #[error("invalid prototype: {0}")]
    Prototype(String),
    #[error("point literal must be four comma-separated rationals x_r,x_i,y_r,y_i, got {0:?}")]
    PointShape(String),
    #[error("bad coordinate: {0}")]
    Coordinate(String),
    #[error("point {0:?} is not a regular point of the surface: {1}")]
    Point(String, String),
}

/// Generator for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Adapter from a `rand` generator to the core's integer picker.
pub fn picker(rng: &mut ChaCha8Rng) -> impl FnMut(i64, i64) -> i64 + '_ {
    move |lo, hi| rng.random_range(lo..=hi)
}

/// `L8`, `L17+`, `L5-`; the spin suffix is required exactly when `D` is odd.
pub fn parse_surface(name: &str) -> Result<Surface, ParseError> {
    let body = name.trim().strip_prefix('L').ok_or_else(|| ParseError::Surface(name.into()))?;
    let (digits, spin) = match body.as_bytes().last() {
        Some(b'+') => (&body[..body.len() - 1], Spin::Plus),
        Some(b'-') => (&body[..body.len() - 1], Spin::Minus),
        _ => (body, Spin::Zero),
    };
    let d: u32 = digits.parse().map_err(|_| ParseError::Surface(name.into()))?;
    SurfaceProto::new(d as i64, spin).map_err(|e| ParseError::Prototype(e.to_string()))
}

/// Surface from `--D` and `--eps`.
pub fn surface_from_parts(d: u32, eps: i8) -> Result<Surface, ParseError> {
    let spin = Spin::from_i8(eps).ok_or_else(|| ParseError::Prototype(format!("spin must be -1, 0 or 1, got {eps}")))?;
    SurfaceProto::new(d as i64, spin).map_err(|e| ParseError::Prototype(e.to_string()))
}

/// `"x_r,x_i,y_r,y_i"`, e.g. `"-141,100,1/2,0"`.
pub fn parse_point(surface: &Surface, literal: &str) -> Result<SurfacePoint, ParseError> {
    let parts: Vec<&str> = literal.split(',').collect();
    if parts.len() != 4 {
        return Err(ParseError::PointShape(literal.into()));
    }
    let mut q = Vec::with_capacity(4);
    for p in parts {
        q.push(parse_rational(p).map_err(|e| ParseError::Coordinate(e.to_string()))?);
    }
    let parts: [_; 4] = q.try_into().expect("four parts");
    SurfacePoint::from_parts(surface, parts).map_err(|e| ParseError::Point(literal.into(), e.to_string()))
}
