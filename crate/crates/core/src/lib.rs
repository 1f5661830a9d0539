//! Simulation and exact analysis of the one-shot Flip-Schelling process on
//! torus random geometric graphs and Erdős–Rényi graphs.
//!
//! * [`rng`]: seeded, splittable streams keyed by (seed, label, trial).
//! * [`graphs`]: graph generators calibrated by expected average degree.
//! * [`fsp`]: the process itself, monochrome fractions, decisiveness, and
//!   exhaustive exact probabilities on small graphs.
//! * [`exactmath`]: binomial and random-walk probabilities, region measures
//!   and the closed-form bounds.
//! * [`harness`]: parallel seeded sweeps, summaries and CSV output.
//! * [`verify`]: property sweeps reduced to pass/fail checks.

pub mod error;
pub mod exactmath;
pub mod fsp;
pub mod graphs;
pub mod harness;
pub mod oracle;
pub mod par;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
