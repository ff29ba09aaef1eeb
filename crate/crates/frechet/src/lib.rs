//! Approximate Fréchet distance for realistic (c-packed) curves.
//!
//! The decider splits both curves into long segments and short pieces,
//! sweeps the free-space diagram region by region, and hands piece pairs to
//! an exact solver on separated one-dimensional curves. Quadratic exact
//! algorithms live in [`baseline`] and double as test oracles.

pub mod baseline;
pub mod cli;
pub mod curves;
pub mod decomposition;
pub mod error;
pub mod freespace;
pub mod onedim;
pub mod search;
pub mod svg;

pub use curves::{Curve, Point};
pub use error::{Error, Result};
