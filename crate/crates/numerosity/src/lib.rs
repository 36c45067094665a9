//! Surreal-valued numerosities — sizes of infinite subsets of the reals.
//!
//! For a non-negative, growing sequence `{a_k}` without accumulation
//! points, the numerosity is obtained by antidifferencing the term,
//! differentiating, and functionally inverting the result at the germ `w`:
//! counting `{k+1}` (the naturals) gives `w - 1/2`, the squares give
//! `sqrt(36w+3)/6 + 1/2`, powers `a^k` give `ln((a-1)w/ln a)/ln a`.
//! Intervals are counted by length in units of `W` (reals per unit
//! interval) plus an Euler-characteristic finite part. A brute-force
//! counting oracle ties the symbolic germs back to actual counts below
//! finite cutoffs.

pub mod interval;
pub mod invert;
pub mod sequence;

pub use interval::{integers_numerosity, interval_numerosity, Endpoint, Inclusion, IntervalSpec};
pub use invert::{full_numerosity, sequence_from_numerosity, NumerosityResult};
pub use sequence::{antidifference, count_oracle, GeometricForm, SequenceClass, SequenceTerm, INDEX};
