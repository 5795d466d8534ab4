//! Exact analytics and seeded Monte Carlo for waiting times in a
//! reinforcing urn.
//!
//! An urn starts with `b` black and `w` white balls. Balls are drawn
//! uniformly; a white draw is returned together with extra white balls
//! according to a replacement schedule, and the process stops at the first
//! black draw. This crate computes the law of that stopping time exactly
//! (arbitrary-precision rationals throughout), classifies when it is even
//! almost-surely finite under general schedules, and cross-validates the
//! analytics against a deterministic, parallel Monte Carlo engine.
//!
//! Module map:
//!
//! - [`rational`]: canonical arbitrary-precision rationals.
//! - [`exact`]: survival / pmf / moments under the unit rule, including
//!   the `b > r` moment-finiteness criterion.
//! - [`polya`]: the two-color reinforcing count distribution, its
//!   beta-binomial form, and the proportion martingale identity.
//! - [`schedule`]: general replacement schedules, survival products,
//!   finiteness classification, and certified defect brackets.
//! - [`sim`]: counter-seeded, thread-count-independent simulation.
//! - [`oracles`]: independent reference routes (path walks, enumeration,
//!   telescoped series) used by tests and the self-check harness.
//! - [`checks`]: the runnable verification suite behind `urnlab check`.

#![forbid(unsafe_code)]

mod comb;
mod factor;

pub mod checks;
pub mod exact;
pub mod oracles;
pub mod polya;
pub mod rational;
pub mod schedule;
pub mod sim;

pub use exact::{Extended, MomentReport, UrnConfig};
pub use rational::ExactRational;
pub use schedule::{FinitenessVerdict, Schedule};
pub use sim::{Outcome, SimConfig, SimSummary};
