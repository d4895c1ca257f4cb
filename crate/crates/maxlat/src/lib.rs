//! Desk-scale computational harmonic analysis on finite spaces of
//! homogeneous type: adjacent dyadic grids, ball and "dyadic" maximal
//! operators, A1-type weights with the Rubio de Francia iteration,
//! Luxemburg–Nakano quasi-norms on variable Lebesgue lattices and their
//! convexifications, and verification suites for the self-improvement
//! bounds tying these together.
//!
//! Everything is exact enumeration over finite point sets, with no sampling
//! in the operators themselves, so every inequality the suites check is
//! evaluated at machine precision and carries an explicit slack.

pub mod cli;
pub mod config;
pub mod error;
pub mod grids;
pub mod lattice;
pub mod maximal;
pub mod numeric;
pub mod pointset;
pub mod report;
pub mod selfimprove;
pub mod space;
pub mod suites;
pub mod weights;

pub use error::{Error, Result};
pub use grids::{build_adjacent_system, choose_delta, AdjacentGridSystem, DyadicCube, Grid};
pub use pointset::PointSet;
pub use report::{CheckRecord, SuiteReport, Verdict};
pub use space::{generate_space, Ball, Space, SpaceKind};
