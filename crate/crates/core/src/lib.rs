//! Coherent, squeezed and intelligent states on truncated Fock, su(1,1)
//! and su(2) spaces, their second moments, and checks of the pairwise and
//! characteristic uncertainty relations they saturate.
//!
//! States are built in [`states`] and [`intelligent`], moments come from
//! [`moments`], and [`urcheck`] turns them into gap reports. [`dynamics`]
//! follows squeezed states through time-dependent quadratic Hamiltonians.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod intelligent;
pub mod io;
pub mod matrixkit;
pub mod metrics;
pub mod moments;
pub mod random;
pub mod specfun;
pub mod states;
pub mod urcheck;

pub use error::{Error, Result};
pub use hilbert::{BasisSpec, DensityMatrix, Operator, StateVector};
pub use matrixkit::{C64, CMatrix, CVector, RMatrix};
pub use moments::{MomentReport, ObservableSet};
pub use states::{IntelligentParams, SqueezeParams};
pub use urcheck::URReport;

#[cfg(test)]
mod invariants;
