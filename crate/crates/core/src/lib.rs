//! Exact-arithmetic engine for weighted projective surfaces and their
//! tilting bundles.
//!
//! The crate models rational surfaces through their Picard lattices,
//! computes line-bundle cohomology exactly, extends to the divisor class
//! group of a weighted surface, and verifies candidate tilting bundles
//! (partial tilting, the 2-hereditary window certificate, Euler matrices,
//! generation scripts). Cox rings provide graded-piece linear algebra for
//! presented bundles and quiver extraction; finite abelian covers induce
//! candidates downstairs through the skew group construction.
//!
//! All arithmetic is exact: lattice coordinates are integers, everything
//! else is `BigRational`. No floating point enters inputs, outputs or any
//! intermediate computation.

pub mod anticanon;
pub mod cohom;
pub mod config;
pub mod cox;
pub mod error;
pub mod exec;
pub mod genscript;
pub mod linalg;
pub mod memo;
pub mod oracle;
pub mod picard;
pub mod presented;
pub mod quiver;
pub mod rat;
pub mod report;
pub mod search;
pub mod skewcovers;
pub mod skewgroup;
pub mod tilting;
pub mod wps;

pub use error::{Error, Result};
