//! Exact combinatorics of parabolic Veech-group actions on L-shaped
//! translation surfaces.
//!
//! The crate is `no_std` (it needs `alloc`). IO, the command line front end
//! and file formats live in the companion `veech` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod graph;
pub mod lemmas;
pub mod modn;
pub mod quadfield;
pub mod reduce;
pub mod sample;
pub mod schreier;
pub mod spectral;
pub mod surface;
pub mod word;

pub use quadfield::{Field, FieldLabel, FieldSpec, QuadError, QuadNum, Rational};
pub use surface::{PointKey, Spin, Surface, SurfaceError, SurfacePoint, SurfaceProto, Thresholds};
pub use word::{Gen, GeneratorWord, Letter};
