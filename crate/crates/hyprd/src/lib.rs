//! Boundary representations of free groups acting on their Cayley trees.
//!
//! The crate models `F_k` with its word metric, the Patterson-Sullivan measure
//! on the space of ends, and the family `π_s` of boundary representations. On
//! top of that it builds the horospherical partitions, Vitali covers and
//! sampling sets used to bound matrix coefficients, the spectral (rapid decay)
//! inequality for `π_s`, and the 1-cocycle `b_s` of `π_s ⊗ π_s`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cli;
pub mod cocycle;
pub mod config;
pub mod error;
pub mod group;
pub mod rd;
pub mod reps;
pub mod stepfun;
pub mod verify;

pub use error::{Error, Result};
