//! Alpha-cut arithmetic and the supremum metric.
//!
//! Addition works on endpoint functions: on every level interval between
//! the operands' breakpoints the summed endpoint is flat, affine, a shifted
//! operand piece, or (in general) an adaptively refined Hermite piece with
//! exact node slopes. Products use the same Hermite construction on the
//! extremal corner product.

use crate::fuzzy::FuzzyNumber;
use crate::piece::Piece;
use crate::resample::hermite_from_side;
use crate::side::{SideCurve, SideForm, SideFunctions, SideSegment};

/// Number of uniform levels in the supremum-metric grid.
pub const METRIC_GRID: usize = 1025;

/// `u + v`, level by level.
pub fn add(u: &FuzzyNumber, v: &FuzzyNumber) -> FuzzyNumber {
    let minus = sum_curves(&u.sides().minus, &v.sides().minus);
    let plus = sum_curves(&u.sides().plus, &v.sides().plus);
    FuzzyNumber::from_side_functions(&SideFunctions { minus, plus })
        .expect("sum of valid fuzzy numbers is valid")
}

/// `u - v`: lower end `u^- - v^+`, upper end `u^+ - v^-`.
pub fn sub(u: &FuzzyNumber, v: &FuzzyNumber) -> FuzzyNumber {
    add(u, &neg(v))
}

/// `-u`.
pub fn neg(u: &FuzzyNumber) -> FuzzyNumber {
    let [s_lo, s_hi] = u.support();
    let [c_lo, c_hi] = u.core();
    let left = u.right().iter().rev().map(Piece::reflected).collect();
    let right = u.left().iter().rev().map(Piece::reflected).collect();
    FuzzyNumber::new([-s_hi, -s_lo], [-c_hi, -c_lo], left, right).expect("negation preserves validity")
}

/// `u + t` for a real `t`.
pub fn shift(u: &FuzzyNumber, t: f64) -> FuzzyNumber {
    let [s_lo, s_hi] = u.support();
    let [c_lo, c_hi] = u.core();
    let left = u.left().iter().map(|p| p.shifted(t)).collect();
    let right = u.right().iter().map(|p| p.shifted(t)).collect();
    FuzzyNumber::new([s_lo + t, s_hi + t], [c_lo + t, c_hi + t], left, right)
        .expect("translation preserves validity")
}

/// `lambda * u` for a real `lambda`.
pub fn scale(u: &FuzzyNumber, lambda: f64) -> FuzzyNumber {
    if lambda == 0.0 {
        return FuzzyNumber::crisp(0.0);
    }
    if lambda < 0.0 {
        return neg(&scale(u, -lambda));
    }
    let [s_lo, s_hi] = u.support();
    let [c_lo, c_hi] = u.core();
    let left = u.left().iter().map(|p| p.scaled(lambda)).collect();
    let right = u.right().iter().map(|p| p.scaled(lambda)).collect();
    FuzzyNumber::new([s_lo * lambda, s_hi * lambda], [c_lo * lambda, c_hi * lambda], left, right)
        .expect("dilation preserves validity")
}

/// `u * v`: each cut is spanned by the four endpoint products, since `xy`
/// attains its extrema over a rectangle at a corner.
pub fn mul(u: &FuzzyNumber, v: &FuzzyNumber) -> FuzzyNumber {
    let minus = product_curve(u.sides(), v.sides(), true);
    let plus = product_curve(u.sides(), v.sides(), false);
    FuzzyNumber::from_side_functions(&SideFunctions { minus, plus })
        .expect("product of valid fuzzy numbers is valid")
}

/// Lower (`lower = true`) or upper endpoint of the product cuts. Between
/// breakpoints of the factors every corner product is smooth; switches of
/// the extremal corner are resolved by adaptive refinement.
fn product_curve(us: &SideFunctions, vs: &SideFunctions, lower: bool) -> SideCurve {
    let curves = [&us.minus, &us.plus, &vs.minus, &vs.plus];
    let mut cuts = vec![0.0, 1.0];
    let mut mandatory = Vec::new();
    for c in curves {
        cuts.extend(c.breakpoints());
        mandatory.extend(c.levels());
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (l0, l1) = (w[0], w[1]);
        if !(l1 > l0) {
            continue;
        }
        let mid = 0.5 * (l0 + l1);
        let [am, ap, bm, bp] = curves.map(|c| &c.segments[c.segment_index(mid)]);
        let side = |alpha: f64| {
            let a = [(am.eval(alpha), am.slope(alpha, true)), (ap.eval(alpha), ap.slope(alpha, false))];
            let b = [(bm.eval(alpha), bm.slope(alpha, true)), (bp.eval(alpha), bp.slope(alpha, false))];
            let mut best = (if lower { f64::INFINITY } else { f64::NEG_INFINITY }, 0.0);
            for (x, dx) in a {
                for (y, dy) in b {
                    let prod = x * y;
                    if (lower && prod < best.0) || (!lower && prod > best.0) {
                        best = (prod, product_slope(x, dx, y, dy));
                    }
                }
            }
            best
        };
        let flat = [am, ap, bm, bp].iter().all(|s| matches!(s.form, SideForm::Flat { .. }));
        let (x0, x1) = (side(l0).0, side(l1).0);
        let form = if flat || (x0 == x1 && side(mid).0 == x0) {
            SideForm::Flat { x: x0 }
        } else {
            let sign = if lower { 1.0 } else { -1.0 };
            let piece = hermite_from_side(l0, l1, &mandatory, |alpha| {
                let (x, dx) = side(alpha);
                (sign * x, sign * dx)
            });
            SideForm::Branch(if lower { piece } else { piece.reflected() })
        };
        segments.push(SideSegment::new(l0, l1, form));
    }
    SideCurve::new(segments, lower)
}

/// `d(xy)/dalpha`, where an infinite factor slope dominates.
fn product_slope(x: f64, dx: f64, y: f64, dy: f64) -> f64 {
    let term = |f: f64, dg: f64| if dg.is_infinite() { if f == 0.0 { 0.0 } else { f * dg } } else { f * dg };
    let d = term(y, dx) + term(x, dy);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Sum of two endpoint functions of the same orientation.
fn sum_curves(a: &SideCurve, b: &SideCurve) -> SideCurve {
    let mut cuts = vec![0.0, 1.0];
    cuts.extend(a.breakpoints());
    cuts.extend(b.breakpoints());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (l0, l1) = (w[0], w[1]);
        if !(l1 > l0) {
            continue;
        }
        let mid = 0.5 * (l0 + l1);
        let sa = &a.segments[a.segment_index(mid)];
        let sb = &b.segments[b.segment_index(mid)];
        segments.push(SideSegment::new(l0, l1, sum_segment(sa, sb, l0, l1, a.increasing)));
    }
    SideCurve::new(segments, a.increasing)
}

fn is_affine(seg: &SideSegment) -> bool {
    match &seg.form {
        SideForm::Flat { .. } | SideForm::Linear { .. } => true,
        SideForm::Branch(p) => matches!(p.as_affine(), Some((a, _)) if a != 0.0),
    }
}

fn sum_segment(sa: &SideSegment, sb: &SideSegment, l0: f64, l1: f64, increasing: bool) -> SideForm {
    match (&sa.form, &sb.form) {
        (SideForm::Flat { x }, SideForm::Flat { x: y }) => return SideForm::Flat { x: x + y },
        (SideForm::Flat { x }, SideForm::Branch(p)) | (SideForm::Branch(p), SideForm::Flat { x }) => {
            if p.as_affine().is_none() {
                return SideForm::Branch(p.shifted(*x));
            }
        }
        _ => {}
    }
    if is_affine(sa) && is_affine(sb) {
        // through the exact endpoint sums, so supports add exactly
        let x0 = sa.eval(l0) + sb.eval(l0);
        let x1 = sa.eval(l1) + sb.eval(l1);
        let slope = (x1 - x0) / (l1 - l0);
        return SideForm::Linear { slope, intercept: x0 - slope * l0 };
    }
    let mut mandatory = Vec::new();
    for seg in [sa, sb] {
        if let SideForm::Branch(p) = &seg.form {
            mandatory.extend(p.internal_levels());
        }
    }
    let sign = if increasing { 1.0 } else { -1.0 };
    let piece = hermite_from_side(l0, l1, &mandatory, |alpha| {
        let x = sa.eval(alpha) + sb.eval(alpha);
        let dx = sa.slope(alpha, increasing) + sb.slope(alpha, increasing);
        (sign * x, sign * dx)
    });
    SideForm::Branch(if increasing { piece } else { piece.reflected() })
}

/// Supremum-metric value with a certified bound on what the grid may miss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    /// The true supremum lies in `[value, value + slack]`.
    pub slack: f64,
}

/// `sup_alpha max(|u^- - v^-|, |u^+ - v^+|)`.
pub fn d_inf(u: &FuzzyNumber, v: &FuzzyNumber) -> f64 {
    d_inf_certified(u, v).value
}

/// Evaluates the metric on a uniform grid of [`METRIC_GRID`] levels merged
/// with every breakpoint of both operands, including right limits at
/// breakpoints. On each grid cell the deviation of monotone endpoint
/// functions can exceed the cell's end values by at most half their total
/// variation there, which gives the slack.
pub fn d_inf_certified(u: &FuzzyNumber, v: &FuzzyNumber) -> Distance {
    let (us, vs) = (u.sides(), v.sides());
    let mut levels: Vec<f64> = (0..METRIC_GRID).map(|i| i as f64 / (METRIC_GRID - 1) as f64).collect();
    for curve in [&us.minus, &us.plus, &vs.minus, &vs.plus] {
        levels.extend(curve.breakpoints());
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    struct Sample {
        um: f64,
        vm: f64,
        up: f64,
        vp: f64,
    }
    let at = |alpha: f64| Sample {
        um: us.minus.value(alpha),
        vm: vs.minus.value(alpha),
        up: us.plus.value(alpha),
        vp: vs.plus.value(alpha),
    };
    let after = |alpha: f64| Sample {
        um: us.minus.right_limit(alpha),
        vm: vs.minus.right_limit(alpha),
        up: us.plus.right_limit(alpha),
        vp: vs.plus.right_limit(alpha),
    };
    let dev = |s: &Sample| ((s.um - s.vm).abs(), (s.up - s.vp).abs());

    let mut value = 0.0_f64;
    let mut upper = 0.0_f64;
    let mut prev: Option<Sample> = None;
    for &alpha in &levels {
        let here = if alpha == 0.0 {
            let [ul, uh] = u.support();
            let [vl, vh] = v.support();
            Sample { um: ul, vm: vl, up: uh, vp: vh }
        } else {
            at(alpha)
        };
        let (dm, dp) = dev(&here);
        value = value.max(dm).max(dp);
        if let Some(p) = prev.take() {
            let (pm, pp) = dev(&p);
            let var_m = (here.um - p.um).abs() + (here.vm - p.vm).abs();
            let var_p = (here.up - p.up).abs() + (here.vp - p.vp).abs();
            upper = upper.max(0.5 * (pm + dm + var_m)).max(0.5 * (pp + dp + var_p));
        }
        if alpha < 1.0 {
            let next = after(alpha);
            let (nm, np) = dev(&next);
            value = value.max(nm).max(np);
            prev = Some(next);
        }
    }
    Distance { value, slack: (upper - value).max(0.0) }
}
