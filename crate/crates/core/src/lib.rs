//! Generalized LS-sequences.
//!
//! A parameter tuple `(L_1, ..., L_k)` drives a Kakutani-type splitting of
//! `[0,1)`; the points of the sequence are read off a digit numeration
//! built on the interval counts. The crate provides the roots and closed
//! forms ([`spectral`]), counts ([`counts`]), the numeration
//! ([`numeration`]), the points ([`points`]), a direct partition simulator
//! ([`partition`]), exact discrepancy ([`discrepancy`]) and the explicit
//! bound constants ([`bounds`]).

pub mod bounds;
pub mod coeffs;
pub mod counts;
pub mod discrepancy;
pub mod error;
pub mod numeration;
pub mod partition;
pub mod points;
pub mod spectral;

pub use bounds::{BoundKind, BoundReport};
pub use coeffs::BetaCoeffs;
pub use counts::CountsTable;
pub use discrepancy::DiscrepancyReport;
pub use error::{Error, Result};
pub use numeration::{Digit, DigitExpansion};
pub use partition::Partition;
pub use points::{BetaPoint, ElementaryInterval, LsSequence};
pub use spectral::{solve_spectral, validate_params, Params, Spectral};
