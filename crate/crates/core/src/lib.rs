//! Maximization of continuous DR-submodular functions over down-closed
//! convex sets.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod objective;
pub mod objectives;
pub mod rng;
pub mod constraints;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{join, meet, BoxDomain, Point, TOL};
pub use objective::{Objective, ObjectiveFlags, SetFunction};
