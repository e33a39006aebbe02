//! Exact enumeration of ordered pairs of lattice paths by their number of
//! interior intersections.
//!
//! A pair of n-step paths from the origin, each stepping east or north, ends
//! at `(r, n-r)` and `(s, n-s)` and meets some number `k` of times strictly
//! between the origin and the endpoints. This crate computes the count of
//! such pairs — and its even/odd endpoint sums and row sums — by several
//! independent routes:
//!
//! * [`closedform`] — binomial closed forms, a recurrence, and a
//!   coefficient extractor, all in exact big-integer arithmetic;
//! * [`series`] — truncated bivariate generating series grown from the
//!   functional equation `f = (x+f)(y+f)`;
//! * [`oracle`] — brute-force enumeration of all `4^n` ordered pairs;
//! * [`verify`] — an identity suite that cross-checks every route over
//!   configurable grids and captures the first counterexample.
//!
//! With the default `parallel` feature, the oracle sweep and the
//! verification grids run on rayon; disabling it leaves a sequential build
//! with identical results.

pub mod closedform;
mod error;
pub mod exactmath;
pub mod oracle;
mod par;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exactmath::Integer;
