//! Isotopism of bilinear maps over finite fields and graded isomorphism
//! of finite graded algebras, with projective labeling heuristics and
//! brute-force oracles for desk-scale verification.

// index loops mirror the tensor subscripts throughout
#![allow(clippy::needless_range_loop)]

pub mod bimap;
pub mod error;
pub mod field;
pub mod gen;
pub mod graded;
pub mod hermitian;
pub mod io;
pub mod isotopism;
pub mod labels;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod rings;
pub mod units;

pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, Scalar};
