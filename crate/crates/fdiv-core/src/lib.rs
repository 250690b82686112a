//! Approximate sampling under f-divergence constraints, with the exact
//! oracles, hardness witnesses, online-learning simulators, and estimators
//! that make the guarantees checkable at desk scale.
//!
//! The core objects are a convex [`Generator`] f and finite discrete
//! distributions; everything else is built from the induced divergence
//! D_f(ν‖μ). The [`sampler`] turns a divergence budget into a truncated
//! rejection sampler whose output law is computable in closed form; the
//! [`witness`] constructions certify that its sample complexity cannot be
//! improved; [`online`] plays the smoothed prediction games those bounds
//! govern; and [`estimate`] compares importance-weighted and
//! rejection-based mean estimation under the same budgets.

pub mod complexity;
pub mod dist;
pub mod divergence;
pub mod error;
pub mod estimate;
pub mod generator;
pub mod online;
pub mod quad;
pub mod sampler;
pub mod seeds;
pub mod witness;

pub use dist::{Atom, DiscreteDist};
pub use error::{Error, Result};
pub use generator::Generator;
