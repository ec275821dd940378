//! Smoothers: the `w_p` and `Z_p^f` families, and smoothers synthesized to
//! remove the kinks and jumps of a given fuzzy number.

use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisReport, SingularKind};
use crate::error::{Branch, Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::generator::Generator;
use crate::piece::{HermiteNode, Piece};

/// Upper bound on the number of singular points a spec is built from.
pub const SINGULAR_CAP: usize = 64;

/// `1 - (x/p)^2` on `[-p, p]`.
pub fn make_w_p(p: f64) -> Result<FuzzyNumber> {
    check_radius(p)?;
    let a = -1.0 / (p * p);
    FuzzyNumber::new(
        [-p, p],
        [0.0, 0.0],
        vec![Piece::quadratic(-p, 0.0, a, 0.0, 1.0)],
        vec![Piece::quadratic(0.0, p, a, 0.0, 1.0)],
    )
}

/// A `Z_p^f` smoother and whether `f` meets the smoothing criterion
/// `f'(t) -> -inf` as `t -> 1-`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSmoother {
    pub number: FuzzyNumber,
    pub meets_criterion: bool,
}

/// `f^{-1}(|x| / p)` on `[-p, p]`.
pub fn make_z_p_f(f: Generator, p: f64) -> Result<GeneratedSmoother> {
    check_radius(p)?;
    f.validate()?;
    let number = FuzzyNumber::new(
        [-p, p],
        [0.0, 0.0],
        vec![Piece::inverse_generator(-p, 0.0, f, p, 0.0)],
        vec![Piece::inverse_generator(0.0, p, f, p, 0.0)],
    )?;
    Ok(GeneratedSmoother { number, meets_criterion: f.meets_smoothing_criterion() })
}

fn check_radius(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(p))
    }
}

/// A level where the smoother's membership derivative must vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub alpha: f64,
    /// Included as a precaution rather than by an explicit requirement.
    #[serde(default)]
    pub defensive: bool,
}

impl Level {
    pub fn new(alpha: f64) -> Self {
        Level { alpha, defensive: false }
    }

    pub fn defensive(alpha: f64) -> Self {
        Level { alpha, defensive: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmootherSpec {
    pub p: f64,
    /// Membership at `-p`. A value of 1 means an empty left branch.
    pub c_left: f64,
    /// Membership at `p`. A value of 1 means an empty right branch.
    pub c_right: f64,
    pub left_levels: Vec<Level>,
    pub right_levels: Vec<Level>,
}

impl SmootherSpec {
    pub fn left_alphas(&self) -> Vec<f64> {
        self.left_levels.iter().map(|l| l.alpha).collect()
    }

    pub fn right_alphas(&self) -> Vec<f64> {
        self.right_levels.iter().map(|l| l.alpha).collect()
    }
}

/// Builds a smoother with support `[-p, p]`, core `{0}`, boundary values
/// `c_left`, `c_right`, and zero membership slope at every listed level and
/// at level 1.
///
/// Each branch is one monotone cubic Hermite piece through equally spaced
/// nodes carrying the sorted levels. Constrained nodes get slope 0, the
/// outer node the first secant, other nodes the harmonic mean of the
/// adjacent secants.
pub fn synthesize(spec: &SmootherSpec) -> Result<FuzzyNumber> {
    check_radius(spec.p)?;
    let left = rising_branch(spec.p, spec.c_left, &spec.left_levels, Branch::Left)?;
    let right = rising_branch(spec.p, spec.c_right, &spec.right_levels, Branch::Right)?;
    let s_lo = if left.is_empty() { 0.0 } else { -spec.p };
    let s_hi = if right.is_empty() { 0.0 } else { spec.p };
    let right = right.iter().rev().map(Piece::reflected).collect();
    FuzzyNumber::new([s_lo, s_hi], [0.0, 0.0], left, right)
}

/// Rising branch on `[-p, 0]`; the right branch is built mirrored.
fn rising_branch(p: f64, c: f64, levels: &[Level], branch: Branch) -> Result<Vec<Piece>> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::DegenerateSpec { branch, value: c });
    }
    for l in levels {
        if !(l.alpha > 0.0 && l.alpha <= 1.0) {
            return Err(Error::LevelsOutOfRange { level: l.alpha, detail: "levels must lie in (0, 1]" });
        }
        if l.alpha < c {
            return Err(Error::LevelsOutOfRange { level: l.alpha, detail: "level below the boundary value" });
        }
    }
    if c == 1.0 {
        if levels.iter().any(|l| l.alpha < 1.0) {
            return Err(Error::DegenerateSpec { branch, value: c });
        }
        return Ok(Vec::new());
    }

    let mut alphas: Vec<f64> = std::iter::once(c).chain(levels.iter().map(|l| l.alpha)).chain([1.0]).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let n = alphas.len();
    let xs: Vec<f64> = (0..n).map(|k| if k + 1 == n { 0.0 } else { -p + p * k as f64 / (n - 1) as f64 }).collect();
    let secant = |k: usize| (alphas[k + 1] - alphas[k]) / (xs[k + 1] - xs[k]);
    let constrained = |a: f64| a == 1.0 || levels.iter().any(|l| l.alpha == a);

    let nodes = (0..n)
        .map(|k| {
            let slope = if constrained(alphas[k]) {
                0.0
            } else if k == 0 {
                secant(0)
            } else {
                let (d0, d1) = (secant(k - 1), secant(k));
                2.0 * d0 * d1 / (d0 + d1)
            };
            HermiteNode::new(xs[k], alphas[k], slope)
        })
        .collect();
    Ok(vec![Piece::hermite(nodes)])
}

/// The spec whose smoother removes every singular point listed in `report`.
///
/// Boundary values are copied from `u`. A kink at level `a` contributes `a`;
/// a jump contributes its limit on the outer side (`beta` on the left,
/// `gamma` on the right) and, defensively, its attained value. Level 1 is
/// listed when the core edge lies inside the support.
pub fn spec_for(u: &FuzzyNumber, p: f64, report: &AnalysisReport) -> Result<SmootherSpec> {
    check_radius(p)?;
    let count = report.singulars.len();
    if count > SINGULAR_CAP {
        return Err(Error::InfinitelyManySingularities { count, cap: SINGULAR_CAP });
    }
    let (c_left, c_right) = u.boundary_values();
    let [s_lo, s_hi] = u.support();
    let [c_lo, c_hi] = u.core();
    let mut left = Vec::new();
    let mut right = Vec::new();
    if s_lo < c_lo {
        left.push(Level::new(1.0));
    }
    if c_hi < s_hi {
        right.push(Level::new(1.0));
    }
    for s in &report.singulars {
        if s.core_edge {
            continue;
        }
        let levels = if s.side == Branch::Left { &mut left } else { &mut right };
        match s.kind {
            SingularKind::Kink => levels.push(Level::new(s.level)),
            SingularKind::Jump => {
                let outer = if s.side == Branch::Left { s.beta } else { s.gamma };
                levels.push(Level::new(outer.expect("jumps carry both limits")));
                levels.push(Level::defensive(s.level));
            }
        }
    }
    Ok(SmootherSpec { p, c_left, c_right, left_levels: normalize(left), right_levels: normalize(right) })
}

/// Sorts by level and merges duplicates, keeping the non-defensive flag.
fn normalize(mut levels: Vec<Level>) -> Vec<Level> {
    levels.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let mut out: Vec<Level> = Vec::with_capacity(levels.len());
    for l in levels {
        match out.last_mut() {
            Some(last) if last.alpha == l.alpha => last.defensive &= l.defensive,
            _ => out.push(l),
        }
    }
    out
}
