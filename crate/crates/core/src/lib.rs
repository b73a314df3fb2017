//! Exact finite-scale additive combinatorics on sets of integers.
//!
//! * [`set`]: bit-vector backed [`WindowSet`]s with shifts, restriction,
//!   difference sets, sumsets, finite shift unions and gap scans.
//! * [`generators`]: a compact spec grammar for reproducible sets
//!   (progressions, rational Beatty sequences, hashed Bernoulli sets).
//! * [`analysis`]: window density profiles, Banach-density estimates and the
//!   thick / syndetic / piecewise-syndetic predicates.
//! * [`jin`]: shift-cover witnesses showing `(A - B) + F` contains long
//!   intervals with `|F| <= 1/(αβ)`.
//!
//! Densities are exact [`Rational`]s throughout.

pub mod analysis;
pub mod error;
pub mod generators;
pub mod jin;
pub mod rational;
pub mod set;

pub use error::{Error, ParseError, Result};
pub use generators::{parse_spec, NominalDensity, SetSpec};
pub use rational::Rational;
pub use set::{Interval, WindowSet};
