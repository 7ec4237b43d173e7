//! Simulation toolkit for the adaptive linear reconstruction game.
//!
//! A reconstructor asks unit-vector queries about a hidden point, and an
//! adversary answers each one within a fixed noise level. The set of points
//! consistent with the transcript is an intersection of slabs; this crate
//! maintains it, measures it, and runs strategies and rate experiments on it.

pub mod error;
pub mod experiments;
pub mod game;
pub mod geometry;
pub mod jung_lab;
pub mod nets;
pub mod polytope;
pub mod strategies;

pub use error::{Error, Result};
