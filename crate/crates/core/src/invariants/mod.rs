//! Property tests for the invariants each module promises.

mod dynamics;
mod intelligent;
mod kernel;
mod metrics;
mod moments;
mod states;
mod urcheck;
