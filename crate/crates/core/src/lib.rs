//! Explicit Baranyai partitions of quadruples.
//!
//! A BP(n, k) partitions all k-subsets of an n-set into parallel classes.
//! This crate builds BP(n, 4) by two recursions (doubling `t -> 2t` for
//! `t = 4, 8 (mod 12)` and quadrupling `t -> 4t` for `t = 0, 3, 6, 9 (mod 12)`),
//! answers single-column and single-entry queries on the doubling chain
//! without listing, and certifies designs exhaustively.

pub mod block;
pub mod combin;
pub mod dlx;
pub mod doubling;
pub mod enumcode;
pub mod config;
pub mod error;
pub mod factor;
pub mod format;
pub mod latin;
pub mod planner;
pub mod lsets;
pub mod quadrupling;
pub mod quadset;
pub mod rsqs;
pub mod seeds;
pub mod verify;

pub use block::{Block, Design, DesignKind, LabeledPoint, ParallelClass, Point};
pub use error::{Error, Result};
