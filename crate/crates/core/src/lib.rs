//! Realizing finite groups as exact isometry groups of rational metric spaces.
//!
//! The pipeline: build a group action, compute its pair-orbit classes and
//! symmetrized 2-hull, then perturb an invariant seed metric until distinct
//! classes carry distinct distances. The isometry group of the result is the
//! hull of the action, which an independent oracle confirms.

pub mod classify;
pub mod cli;
pub mod doubling;
pub mod error;
pub mod groups;
pub mod hull;
pub mod io;
pub mod metrics;
pub mod perturb;
pub mod rational;
pub mod rigidify;

pub use error::{Error, Result};
pub use groups::{FiniteGroup, GroupAction, Perm};
pub use metrics::{MetricFunction, RationalMetric};
pub use rational::Rational;
