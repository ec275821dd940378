//! JSON fuzzy-number files and CSV sampling.
//!
//! A file holds `support`, `core`, `left` and `right` pieces, and after
//! smoothing an optional `smoother_spec` section. Floats are written in
//! shortest round-trip form, so parse and serialize are inverse.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conv::GridFunction;
use crate::error::Error;
use crate::fuzzy::{validate, FuzzyNumber, FuzzyNumberData};
use crate::smooth::SmootherSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyFile {
    #[serde(flatten)]
    pub number: FuzzyNumberData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoother_spec: Option<SmootherSpec>,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: parse error: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{}: {source}", path.display())]
    Invalid { path: PathBuf, source: Error },
}

pub fn parse_file(text: &str) -> Result<FuzzyFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn to_json(file: &FuzzyFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("fuzzy files always serialize");
    s.push('\n');
    s
}

/// Reads and validates a fuzzy-number file.
pub fn read_fuzzy(path: &Path) -> Result<(FuzzyNumber, Option<SmootherSpec>), FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io { path: path.into(), source })?;
    let file = parse_file(&text).map_err(|source| FileError::Parse { path: path.into(), source })?;
    let u = validate(file.number).map_err(|source| FileError::Invalid { path: path.into(), source })?;
    Ok((u, file.smoother_spec))
}

pub fn write_fuzzy(path: &Path, u: &FuzzyNumber, spec: Option<&SmootherSpec>) -> Result<(), FileError> {
    let file = FuzzyFile { number: u.data().clone(), smoother_spec: spec.cloned() };
    fs::write(path, to_json(&file)).map_err(|source| FileError::Io { path: path.into(), source })
}

/// Membership on the grid `s_lo + i h` covering the support.
pub fn sample(u: &FuzzyNumber, h: f64) -> GridFunction {
    let [lo, hi] = u.support();
    let n = ((hi - lo) / h * (1.0 + 1e-12)).floor() as usize + 1;
    GridFunction { x0: lo, h, values: (0..n).map(|i| u.membership(lo + i as f64 * h)).collect() }
}
