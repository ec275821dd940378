//! Fuzzy numbers as exact piecewise-analytic membership functions.
//!
//! The crate covers alpha-cut arithmetic and the supremum metric
//! ([`arith`]), sup-min convolution with a brute-force grid oracle
//! ([`conv`]), smoother construction ([`smooth`]) and singularity
//! analysis with numerical differentiability checks ([`analysis`]).

pub mod analysis;
pub mod arith;
pub mod cli;
pub mod conv;
pub mod error;
pub mod fuzzy;
pub mod generator;
pub mod io;
pub mod piece;
mod resample;
pub mod side;
pub mod smooth;

pub use error::{Branch, Error, Result};
pub use fuzzy::{AlphaCut, FuzzyNumber, FuzzyNumberData};
pub use generator::Generator;
pub use piece::{HermiteNode, Piece, PieceForm};
pub use side::{SideCurve, SideForm, SideFunctions, SideSegment};

/// Root-finding and pointwise comparison tolerance on the x axis.
pub const TOL_X: f64 = 1e-10;
/// Tolerance for "derivative vanishes" assertions.
pub const TOL_D: f64 = 1e-7;
/// Number of alpha levels used when validating side functions.
pub const VALIDATION_GRID: usize = 101;
/// Alpha nodes used when resampling a side function.
pub const N_RES: usize = 257;
