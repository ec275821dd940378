//! The endpoint-function view of a fuzzy number.
//!
//! `minus(alpha)` and `plus(alpha)` are the ends of the alpha-cut. Each is a
//! [`SideCurve`]: consecutive segments over alpha, each flat, affine in
//! alpha, or the inverse of a membership piece. Values are left-continuous:
//! a level equal to a segment's upper bound belongs to that segment.
//! Discontinuities between segments correspond to constant membership
//! pieces; flat segments correspond to membership jumps.

use crate::error::{Error, Result};
use crate::piece::Piece;

const EPS: f64 = 1e-12;
/// Joins between consecutive segments closer than this are treated as
/// continuous. Near level 1 an endpoint can move like `sqrt(1 - alpha)`, so
/// a rounding error of one ulp in a level shows up around `1e-9` in `x`.
const JOIN: f64 = 1e-8;
const LEVEL_EPS: f64 = 1e-14;

#[inline]
fn tol_at(x: f64) -> f64 {
    EPS * (1.0 + x.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SideForm {
    /// Constant endpoint: the membership jumps at `x`.
    Flat { x: f64 },
    /// `x = slope * alpha + intercept`.
    Linear { slope: f64, intercept: f64 },
    /// `x = piece^{-1}(alpha)`.
    Branch(Piece),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideSegment {
    /// Level range `[lo, hi]`.
    pub alpha: [f64; 2],
    pub form: SideForm,
}

impl SideSegment {
    pub fn new(lo: f64, hi: f64, form: SideForm) -> Self {
        SideSegment { alpha: [lo, hi], form }
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        match &self.form {
            SideForm::Flat { x } => *x,
            SideForm::Linear { slope, intercept } => slope * alpha + intercept,
            SideForm::Branch(p) => p.inverse(alpha),
        }
    }

    /// `dx/dalpha` inside the segment. Infinite where the membership is stationary.
    pub fn slope(&self, alpha: f64, increasing: bool) -> f64 {
        match &self.form {
            SideForm::Flat { .. } => 0.0,
            SideForm::Linear { slope, .. } => *slope,
            SideForm::Branch(p) => {
                let d = p.derivative(p.inverse(alpha));
                // rounding near a stationary point can flip the sign
                let stationary = if increasing { !(d > 0.0) } else { !(d < 0.0) };
                if stationary {
                    if increasing {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    1.0 / d
                }
            }
        }
    }

    fn negated(&self) -> SideSegment {
        let form = match &self.form {
            SideForm::Flat { x } => SideForm::Flat { x: -x },
            SideForm::Linear { slope, intercept } => SideForm::Linear { slope: -slope, intercept: -intercept },
            SideForm::Branch(p) => SideForm::Branch(p.reflected()),
        };
        SideSegment { alpha: self.alpha, form }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideCurve {
    pub segments: Vec<SideSegment>,
    /// `true` for the lower endpoint function.
    pub increasing: bool,
}

impl SideCurve {
    pub fn new(segments: Vec<SideSegment>, increasing: bool) -> Self {
        SideCurve { segments, increasing }
    }

    /// Index of the segment holding `alpha` under left-continuity. Bounds
    /// within [`LEVEL_EPS`] of `alpha` count as equal, since levels of
    /// computed breakpoints carry rounding.
    pub fn segment_index(&self, alpha: f64) -> usize {
        let k = self.segments.partition_point(|s| s.alpha[1] < alpha - LEVEL_EPS);
        k.min(self.segments.len() - 1)
    }

    pub fn value(&self, alpha: f64) -> f64 {
        let alpha = alpha.clamp(0.0, 1.0);
        self.segments[self.segment_index(alpha)].eval(alpha)
    }

    /// `lim_{a -> alpha+}` of the curve; equals `value(1)` at `alpha = 1`.
    pub fn right_limit(&self, alpha: f64) -> f64 {
        let alpha = alpha.clamp(0.0, 1.0);
        let k = self.segments.partition_point(|s| s.alpha[1] <= alpha + LEVEL_EPS);
        match self.segments.get(k) {
            Some(seg) => seg.eval(alpha),
            None => self.value(1.0),
        }
    }

    /// Interior segment boundaries.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.alpha[0]).collect()
    }

    /// Segment boundaries plus levels of interior Hermite nodes.
    pub fn levels(&self) -> Vec<f64> {
        let mut out = self.breakpoints();
        for seg in &self.segments {
            if let SideForm::Branch(p) = &seg.form {
                out.extend(p.internal_levels().into_iter().filter(|&a| a > seg.alpha[0] && a < seg.alpha[1]));
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn negated(&self) -> SideCurve {
        SideCurve::new(self.segments.iter().map(SideSegment::negated).collect(), !self.increasing)
    }
}

/// The endpoint-function pair `(minus, plus)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SideFunctions {
    pub minus: SideCurve,
    pub plus: SideCurve,
}

impl SideFunctions {
    pub fn new(minus: Vec<SideSegment>, plus: Vec<SideSegment>) -> Self {
        SideFunctions { minus: SideCurve::new(minus, true), plus: SideCurve::new(plus, false) }
    }

    /// Builds the side functions of validated membership branches.
    pub(crate) fn from_branches(core: [f64; 2], left: &[Piece], right: &[Piece]) -> Self {
        let minus = curve_from_rising(left, core[0]);
        let mirrored: Vec<Piece> = right.iter().rev().map(Piece::reflected).collect();
        let plus = curve_from_rising(&mirrored, -core[1]).negated();
        SideFunctions { minus, plus }
    }

    /// Membership branches `(support, core, left, right)` described by these side functions.
    pub(crate) fn to_branches(&self) -> Result<([f64; 2], [f64; 2], Vec<Piece>, Vec<Piece>)> {
        check_coverage(&self.minus, "minus")?;
        check_coverage(&self.plus, "plus")?;
        let (s_lo, c_lo, left) = rising_from_curve(&self.minus, "i")?;
        let (neg_s_hi, neg_c_hi, mirrored) = rising_from_curve(&self.plus.negated(), "ii")?;
        let right: Vec<Piece> = mirrored.iter().rev().map(Piece::reflected).collect();
        let (s_hi, c_hi) = (-neg_s_hi, -neg_c_hi);
        if c_lo > c_hi + tol_at(c_hi) {
            return Err(Error::SideFunctionViolation {
                clause: "iv",
                detail: format!("minus(1) = {c_lo} exceeds plus(1) = {c_hi}"),
            });
        }
        Ok(([s_lo, s_hi], [c_lo, c_hi.max(c_lo)], left, right))
    }
}

fn check_coverage(curve: &SideCurve, name: &str) -> Result<()> {
    let segs = &curve.segments;
    let violation = |clause, detail: String| Err(Error::SideFunctionViolation { clause, detail });
    let Some(first) = segs.first() else {
        return violation("coverage", format!("{name} has no segments"));
    };
    if first.alpha[0] != 0.0 {
        return violation("iii", format!("{name} starts at level {} instead of 0", first.alpha[0]));
    }
    if segs.last().unwrap().alpha[1] != 1.0 {
        return violation("coverage", format!("{name} ends below level 1"));
    }
    for (k, s) in segs.iter().enumerate() {
        if !(s.alpha[0] <= s.alpha[1]) {
            return violation("coverage", format!("{name} segment {k} has reversed levels"));
        }
        if k > 0 && s.alpha[0] != segs[k - 1].alpha[1] {
            return violation("coverage", format!("{name} segments {} and {k} are not contiguous", k - 1));
        }
        let finite = match &s.form {
            SideForm::Flat { x } => x.is_finite(),
            SideForm::Linear { slope, intercept } => slope.is_finite() && intercept.is_finite(),
            SideForm::Branch(_) => true,
        };
        if !finite {
            return violation("coverage", format!("{name} segment {k} is unbounded"));
        }
    }
    Ok(())
}

/// Side curve of a nondecreasing branch ending at `edge`.
fn curve_from_rising(pieces: &[Piece], edge: f64) -> SideCurve {
    let mut segs = Vec::new();
    let mut level = 0.0_f64;
    // validation accepts a core value within 1e-9 of 1
    let snap = |y: f64| if y >= 1.0 - 1e-9 { 1.0 } else { y.max(0.0) };
    for p in pieces {
        let y0 = snap(p.value(p.lo()));
        let y1 = snap(p.value(p.hi()));
        if y0 > level + EPS {
            segs.push(SideSegment::new(level, y0, SideForm::Flat { x: p.lo() }));
            level = y0;
        }
        if !p.is_constant() && y1 > level {
            segs.push(SideSegment::new(level, y1, SideForm::Branch(p.clone())));
            level = y1;
        }
    }
    if level < 1.0 {
        segs.push(SideSegment::new(level, 1.0, SideForm::Flat { x: edge }));
    } else if let Some(last) = segs.last_mut() {
        last.alpha[1] = 1.0;
    }
    SideCurve::new(segs, true)
}

/// Inverse of [`curve_from_rising`]: returns `(start, edge, pieces)`.
fn rising_from_curve(curve: &SideCurve, clause: &'static str) -> Result<(f64, f64, Vec<Piece>)> {
    let start = curve.segments[0].eval(0.0);
    let mut pieces = Vec::new();
    let mut cursor = start;
    let mut level = 0.0;
    for seg in &curve.segments {
        let [a0, a1] = seg.alpha;
        let flat_x = match &seg.form {
            SideForm::Flat { x } => Some(*x),
            SideForm::Linear { slope, .. } if *slope == 0.0 => Some(seg.eval(a0)),
            _ => None,
        };
        if let SideForm::Linear { slope, .. } = &seg.form {
            if *slope < 0.0 {
                return Err(Error::SideFunctionViolation {
                    clause,
                    detail: format!("segment on [{a0}, {a1}] has slope {slope} of the wrong sign"),
                });
            }
        }
        let x0 = flat_x.unwrap_or_else(|| seg.eval(a0));
        let x1 = flat_x.unwrap_or_else(|| seg.eval(a1));
        let join = JOIN * (1.0 + cursor.abs());
        if x0 < cursor - join || x1 < x0 {
            return Err(Error::SideFunctionViolation {
                clause,
                detail: format!("endpoint moves backwards from {cursor} at level {a0}"),
            });
        }
        // a gap in x at a fixed level is a constant membership piece
        if x0 > cursor + join {
            pieces.push(Piece::constant(cursor, x0, level));
            cursor = x0;
        }
        if flat_x.is_none() && a1 > a0 && x1 > cursor + tol_at(cursor) {
            let piece = match &seg.form {
                SideForm::Linear { slope, intercept } => Piece::linear(cursor, x1, 1.0 / slope, -intercept / slope),
                SideForm::Branch(p) => p.restricted(cursor, x1),
                SideForm::Flat { .. } => unreachable!(),
            };
            pieces.push(piece);
            cursor = x1;
        }
        level = a1;
    }
    Ok((start, cursor, pieces))
}
