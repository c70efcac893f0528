//! Certified Banach G-contractions on uniform spaces with a graph.
//!
//! The carrier is either a labelled finite set or a piecewise-modelled
//! stretch of the real line; the uniform structure comes from a family
//! of pseudometrics, entourages are strict sublevel sets of that family,
//! and a directed graph (always containing every loop) restricts which
//! pairs a contraction must shrink. On top of that sit Picard iteration
//! with entourage-based convergence detection, classification of maps
//! into Picard / weakly-Picard operators, and brute-force validation of
//! the contraction-principle statements on small finite instances.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod graph;
pub mod interval;
pub mod map;
pub mod oracle;
pub mod rat;
pub mod report;
pub mod space;
