//! Certified zero-set decomposition for polynomial-linear recurrences.
//!
//! A sequence f over the rationals satisfying
//!
//! ```text
//! f(n) = P_1(n) f(n-1) + P_2(n) f(n-2) + ... + P_d(n) f(n-d)
//! ```
//!
//! with polynomial coefficients and a trailing coefficient `P_d` that is a
//! nonzero constant has a zero set `{ n : f(n) = 0 }` that is a finite union
//! of arithmetic progressions together with a finite exceptional set.  This
//! crate computes that decomposition and certifies it:
//!
//! * pick a prime p at which all coefficient values involved are p-adic units
//!   ([`primes`]),
//! * transport the recurrence to a first-order companion system and find the
//!   period b of its mod-p reduction ([`companion`]),
//! * for each residue class c mod b, interpolate the subsequence
//!   `n |-> state(c + bn)` by a p-adic analytic function built as a limit of
//!   polynomials in the binomial-coefficient basis ([`arc`], [`mahler`]),
//! * count the zeros of that function with Strassman-style valuation
//!   bookkeeping on its power-series coefficients ([`strassman`]),
//! * reconcile the per-class verdicts with exact rational evaluation of the
//!   sequence and assemble progressions plus exceptional set ([`zeroset`]).
//!
//! All p-adic arithmetic is truncated at a fixed precision p^W ([`padic`]);
//! every analytic step tracks how far its conclusions are trusted, and the
//! final report distinguishes classes that are fully certified from classes
//! where the budget ran out.
//!
//! The `zeroarc` binary exposes the pipeline on the command line; see the
//! crate README for the input format.

pub mod arc;
pub mod companion;
pub mod error;
pub mod mahler;
pub mod padic;
pub mod primes;
pub mod qpoly;
pub mod recurrence;
pub mod strassman;
pub mod zeroset;

pub use error::Error;
pub use recurrence::RecurrenceSpec;
pub use zeroset::{analyze, AnalysisOptions, ClassStatus, ZeroSetReport};
