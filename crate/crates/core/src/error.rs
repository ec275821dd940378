use std::fmt;

use thiserror::Error;

/// Which membership branch a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Left,
    Right,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Left => f.write_str("left"),
            Branch::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: interval [{lo}, {hi}] is malformed")]
    InvalidInterval { what: String, lo: f64, hi: f64 },

    #[error("{branch} branch: gap at piece {piece} near x = {x}")]
    GapInBranch { branch: Branch, piece: usize, x: f64 },

    #[error("{branch} branch: piece {piece} is not monotone at x = {x}")]
    NonMonotonePiece { branch: Branch, piece: usize, x: f64 },

    #[error("{branch} branch: membership reaches {value} instead of 1 at core edge x = {x}")]
    CoreNotReached { branch: Branch, x: f64, value: f64 },

    #[error("{branch} branch: piece {piece} has value {value} outside [0, 1] at x = {x}")]
    ValueOutOfRange { branch: Branch, piece: usize, x: f64, value: f64 },

    #[error("{branch} branch: piece {piece} is a zero plateau inside the declared support at x = {x}")]
    SupportMismatch { branch: Branch, piece: usize, x: f64 },

    #[error("side functions violate clause ({clause}): {detail}")]
    SideFunctionViolation { clause: &'static str, detail: String },

    #[error("grid step {h} is coarser than support width / 8 = {max}")]
    StepTooCoarse { h: f64, max: f64 },

    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("smoother level {level} outside the admissible range ({detail})")]
    LevelsOutOfRange { level: f64, detail: &'static str },

    #[error("degenerate smoother spec: boundary value {value} on the {branch} branch")]
    DegenerateSpec { branch: Branch, value: f64 },

    #[error("{count} singular points exceed the cap of {cap}")]
    InfinitelyManySingularities { count: usize, cap: usize },

    #[error("point {x} lies outside the open support ({lo}, {hi})")]
    PointOutsideSupport { x: f64, lo: f64, hi: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
