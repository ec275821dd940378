//! Validated fuzzy numbers.
//!
//! Membership branches are canonical: the left branch is an ordered list of
//! nondecreasing pieces covering `[s_lo, c_lo]`, the right branch a list of
//! nonincreasing pieces covering `[c_hi, s_hi]`. Membership is 1 on the core
//! and 0 off the support. At a jump the point takes the upper value, which
//! keeps both side functions left-continuous.

use serde::{Deserialize, Serialize};

use crate::error::{Branch, Error, Result};
use crate::piece::{Piece, PieceForm};
use crate::side::SideFunctions;
use crate::{TOL_X, VALIDATION_GRID};

/// Slack on membership range and monotonicity checks.
const VALUE_SLACK: f64 = 1e-12;
/// Slack on contiguity of piece domains.
const DOMAIN_SLACK: f64 = 1e-12;

/// Closed interval `[lo, hi]` of level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCut {
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
}

impl AlphaCut {
    pub fn contains(&self, other: &AlphaCut) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Raw, unvalidated fuzzy-number data as stored in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyNumberData {
    pub support: [f64; 2],
    pub core: [f64; 2],
    #[serde(default)]
    pub left: Vec<Piece>,
    #[serde(default)]
    pub right: Vec<Piece>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FuzzyNumberData", into = "FuzzyNumberData")]
pub struct FuzzyNumber {
    data: FuzzyNumberData,
    sides: SideFunctions,
}

impl PartialEq for FuzzyNumber {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl TryFrom<FuzzyNumberData> for FuzzyNumber {
    type Error = Error;

    fn try_from(data: FuzzyNumberData) -> Result<Self> {
        validate(data)
    }
}

impl From<FuzzyNumber> for FuzzyNumberData {
    fn from(u: FuzzyNumber) -> Self {
        u.data
    }
}

/// Checks branch coverage, piece ranges and monotonicity, the core value and
/// the side-function properties, returning the validated number.
pub fn validate(data: FuzzyNumberData) -> Result<FuzzyNumber> {
    let [s_lo, s_hi] = data.support;
    let [c_lo, c_hi] = data.core;
    if !(s_lo.is_finite() && s_hi.is_finite() && c_lo.is_finite() && c_hi.is_finite()) {
        return Err(Error::InvalidInterval { what: "support/core".into(), lo: s_lo, hi: s_hi });
    }
    if !(c_lo <= c_hi) {
        return Err(Error::InvalidInterval { what: "core".into(), lo: c_lo, hi: c_hi });
    }
    if !(s_lo <= c_lo && c_hi <= s_hi) {
        return Err(Error::InvalidInterval { what: "support".into(), lo: s_lo, hi: s_hi });
    }

    validate_rising(&data.left, s_lo, c_lo, Branch::Left, |k, x| (k, x))?;
    let n_right = data.right.len();
    let mirrored: Vec<Piece> = data.right.iter().rev().map(Piece::reflected).collect();
    validate_rising(&mirrored, -s_hi, -c_hi, Branch::Right, |k, x| (n_right - 1 - k, -x))?;

    let sides = SideFunctions::from_branches(data.core, &data.left, &data.right);
    let u = FuzzyNumber { data, sides };
    u.check_side_properties()?;
    Ok(u)
}

/// Validates a nondecreasing branch on `[start, end]`. `locate` maps a
/// (piece index, x) of the mirrored frame back to the caller's frame.
fn validate_rising(
    pieces: &[Piece],
    start: f64,
    end: f64,
    branch: Branch,
    locate: impl Fn(usize, f64) -> (usize, f64),
) -> Result<()> {
    let close = |a: f64, b: f64| (a - b).abs() <= DOMAIN_SLACK * (1.0 + a.abs().max(b.abs()));
    let gap = |k: usize, x: f64| {
        let (piece, x) = locate(k, x);
        Error::GapInBranch { branch, piece, x }
    };
    if pieces.is_empty() {
        return if close(start, end) { Ok(()) } else { Err(gap(0, start)) };
    }
    let mut prev_end: Option<f64> = None;
    for (k, p) in pieces.iter().enumerate() {
        let expected = if k == 0 { start } else { pieces[k - 1].hi() };
        if !close(p.lo(), expected) {
            return Err(gap(k, expected));
        }
        if !(p.lo() < p.hi()) {
            let (piece, _) = locate(k, p.lo());
            return Err(Error::InvalidInterval { what: format!("{branch} piece {piece} domain"), lo: p.lo(), hi: p.hi() });
        }
        check_piece_shape(p, k, branch, &locate)?;

        let mut last = f64::NEG_INFINITY;
        for i in 0..VALIDATION_GRID {
            let x = p.lo() + (p.hi() - p.lo()) * i as f64 / (VALIDATION_GRID - 1) as f64;
            let v = p.value(x);
            if !(v >= -VALUE_SLACK && v <= 1.0 + VALUE_SLACK) {
                let (piece, x) = locate(k, x);
                return Err(Error::ValueOutOfRange { branch, piece, x, value: v });
            }
            let d = p.derivative(x);
            if v < last - VALUE_SLACK || d < -1e-9 || d.is_nan() {
                let (piece, x) = locate(k, x);
                return Err(Error::NonMonotonePiece { branch, piece, x });
            }
            last = v;
        }
        let (y0, y1) = (p.value(p.lo()), p.value(p.hi()));
        match p.form {
            PieceForm::Constant { value } if value <= 0.0 => {
                let (piece, x) = locate(k, p.lo());
                return Err(Error::SupportMismatch { branch, piece, x });
            }
            PieceForm::Constant { .. } => {}
            _ if !(y1 > y0) => {
                let (piece, x) = locate(k, p.lo());
                return Err(Error::NonMonotonePiece { branch, piece, x });
            }
            _ => {}
        }
        if let Some(prev) = prev_end {
            if y0 < prev - VALUE_SLACK {
                let (piece, x) = locate(k, p.lo());
                return Err(Error::NonMonotonePiece { branch, piece, x });
            }
        }
        prev_end = Some(y1);
    }
    let last = pieces.last().unwrap();
    if !close(last.hi(), end) {
        return Err(gap(pieces.len() - 1, last.hi()));
    }
    let top = last.value(last.hi());
    if (top - 1.0).abs() > 1e-9 {
        let (_, x) = locate(pieces.len() - 1, last.hi());
        return Err(Error::CoreNotReached { branch, x, value: top });
    }
    Ok(())
}

fn check_piece_shape(p: &Piece, k: usize, branch: Branch, locate: &impl Fn(usize, f64) -> (usize, f64)) -> Result<()> {
    let bad = |what: &str| {
        let (piece, _) = locate(k, p.lo());
        Err(Error::InvalidInterval { what: format!("{branch} piece {piece} {what}"), lo: p.lo(), hi: p.hi() })
    };
    match &p.form {
        PieceForm::Hermite { nodes } => {
            if nodes.len() < 2 {
                return bad("needs at least two hermite nodes");
            }
            if nodes.windows(2).any(|w| !(w[0].x < w[1].x)) {
                return bad("hermite nodes not strictly increasing");
            }
            let tol = DOMAIN_SLACK * (1.0 + p.lo().abs().max(p.hi().abs()));
            if (nodes[0].x - p.lo()).abs() > tol || (nodes[nodes.len() - 1].x - p.hi()).abs() > tol {
                return bad("hermite nodes do not span the domain");
            }
            if nodes.iter().any(|n| !(n.alpha.is_finite() && n.slope.is_finite())) {
                return bad("hermite node not finite");
            }
        }
        PieceForm::InverseGenerator { generator, radius, center } => {
            generator.validate()?;
            if !(*radius > 0.0 && radius.is_finite() && center.is_finite()) {
                return bad("generator radius/center invalid");
            }
            if p.lo() < *center && p.hi() > *center {
                return bad("generator piece straddles its center");
            }
        }
        PieceForm::Constant { value } if !value.is_finite() => return bad("constant not finite"),
        PieceForm::Linear { slope, intercept } if !(slope.is_finite() && intercept.is_finite()) => {
            return bad("coefficients not finite")
        }
        PieceForm::Quadratic { a, b, c } if !(a.is_finite() && b.is_finite() && c.is_finite()) => {
            return bad("coefficients not finite")
        }
        _ => {}
    }
    Ok(())
}

impl FuzzyNumber {
    /// Validates raw branches.
    pub fn new(support: [f64; 2], core: [f64; 2], left: Vec<Piece>, right: Vec<Piece>) -> Result<Self> {
        validate(FuzzyNumberData { support, core, left, right })
    }

    /// The crisp number `a`: support and core `{a}`.
    pub fn crisp(a: f64) -> Self {
        FuzzyNumber::new([a, a], [a, a], Vec::new(), Vec::new()).expect("crisp number is valid")
    }

    /// Triangular number with support `[a, c]` and peak `b`.
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        FuzzyNumber::trapezoidal(a, b, b, c)
    }

    /// Trapezoidal number with support `[a, d]` and core `[b, c]`.
    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let left = if a < b { vec![Piece::segment(a, 0.0, b, 1.0)] } else { Vec::new() };
        let right = if c < d { vec![Piece::segment(c, 1.0, d, 0.0)] } else { Vec::new() };
        FuzzyNumber::new([a, d], [b, c], left, right)
    }

    pub fn data(&self) -> &FuzzyNumberData {
        &self.data
    }

    pub fn support(&self) -> [f64; 2] {
        self.data.support
    }

    pub fn core(&self) -> [f64; 2] {
        self.data.core
    }

    pub fn left(&self) -> &[Piece] {
        &self.data.left
    }

    pub fn right(&self) -> &[Piece] {
        &self.data.right
    }

    pub fn branch(&self, branch: Branch) -> &[Piece] {
        match branch {
            Branch::Left => self.left(),
            Branch::Right => self.right(),
        }
    }

    pub fn is_crisp(&self) -> bool {
        self.data.support[0] == self.data.support[1]
    }

    /// `(u(s_lo), u(s_hi))`.
    pub fn boundary_values(&self) -> (f64, f64) {
        let v_l = self.left().first().map_or(1.0, |p| p.value(p.lo()).clamp(0.0, 1.0));
        let v_r = self.right().last().map_or(1.0, |p| p.value(p.hi()).clamp(0.0, 1.0));
        (v_l, v_r)
    }

    pub fn membership(&self, x: f64) -> f64 {
        let [s_lo, s_hi] = self.data.support;
        let [c_lo, c_hi] = self.data.core;
        if x.is_nan() || x < s_lo || x > s_hi {
            return 0.0;
        }
        if x >= c_lo && x <= c_hi {
            return 1.0;
        }
        let pieces = if x < c_lo { self.left() } else { self.right() };
        branch_value(pieces, x).clamp(0.0, 1.0)
    }

    pub fn alpha_cut(&self, alpha: f64) -> AlphaCut {
        let alpha = alpha.clamp(0.0, 1.0);
        if alpha == 0.0 {
            let [lo, hi] = self.data.support;
            return AlphaCut { alpha, lo, hi };
        }
        if alpha == 1.0 {
            let [lo, hi] = self.data.core;
            return AlphaCut { alpha, lo, hi };
        }
        AlphaCut { alpha, lo: self.sides.minus.value(alpha), hi: self.sides.plus.value(alpha) }
    }

    pub fn sides(&self) -> &SideFunctions {
        &self.sides
    }

    pub fn to_side_functions(&self) -> SideFunctions {
        self.sides.clone()
    }

    /// Rebuilds the unique fuzzy number with the given endpoint functions.
    pub fn from_side_functions(s: &SideFunctions) -> Result<Self> {
        let (support, core, left, right) = s.to_branches()?;
        FuzzyNumber::new(support, core, left, right)
    }

    /// Upper bound on the membership slope away from jumps.
    pub fn lipschitz_bound(&self) -> f64 {
        self.left().iter().chain(self.right()).map(Piece::max_abs_slope).fold(0.0, f64::max)
    }

    /// Piece boundaries inside the open support, including the core edges.
    pub fn breakpoints(&self) -> Vec<f64> {
        let [s_lo, s_hi] = self.data.support;
        let mut xs: Vec<f64> = self
            .left()
            .iter()
            .chain(self.right())
            .flat_map(|p| [p.lo(), p.hi()])
            .chain(self.data.core)
            .filter(|&x| x > s_lo && x < s_hi)
            .collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// `x` coordinates where membership jumps inside the open support.
    pub fn jump_abscissae(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for pieces in [self.left(), self.right()] {
            for w in pieces.windows(2) {
                let x = w[0].hi();
                if (w[0].value(x) - w[1].value(x)).abs() > TOL_X {
                    out.push(x);
                }
            }
        }
        out
    }

    fn check_side_properties(&self) -> Result<()> {
        let mut prev: Option<AlphaCut> = None;
        for i in 0..VALIDATION_GRID {
            let alpha = i as f64 / (VALIDATION_GRID - 1) as f64;
            let cut = self.alpha_cut(alpha);
            if let Some(p) = prev {
                if cut.lo < p.lo - TOL_X {
                    return Err(Error::SideFunctionViolation {
                        clause: "i",
                        detail: format!("minus decreases at level {alpha}"),
                    });
                }
                if cut.hi > p.hi + TOL_X {
                    return Err(Error::SideFunctionViolation {
                        clause: "ii",
                        detail: format!("plus increases at level {alpha}"),
                    });
                }
            }
            prev = Some(cut);
        }
        let top = AlphaCut { alpha: 1.0, lo: self.sides.minus.value(1.0), hi: self.sides.plus.value(1.0) };
        if top.lo > top.hi + TOL_X {
            return Err(Error::SideFunctionViolation {
                clause: "iv",
                detail: format!("minus(1) = {} exceeds plus(1) = {}", top.lo, top.hi),
            });
        }
        Ok(())
    }
}

/// Value of a branch at `x`, taking the larger one-sided value at piece boundaries.
fn branch_value(pieces: &[Piece], x: f64) -> f64 {
    let k = pieces.partition_point(|p| p.hi() < x).min(pieces.len() - 1);
    let mut v = pieces[k].value(x);
    if x == pieces[k].hi() {
        if let Some(next) = pieces.get(k + 1) {
            v = v.max(next.value(x));
        }
    }
    v
}
