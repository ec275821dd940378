//! Singular points, family membership, numerical differentiability checks
//! and approximation schedules.

use std::io::Write;

use serde::Serialize;

use crate::arith::d_inf;
use crate::conv::nabla;
use crate::error::{Branch, Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::piece::Piece;
use crate::smooth::{spec_for, synthesize, SmootherSpec};
use crate::TOL_X;

/// Slope differences at or below this are treated as noise.
pub const KINK_THRESHOLD: f64 = 1e-6;
/// Default tolerance on the final one-sided slope gap.
pub const DEFAULT_DIFF_TOL: f64 = 1e-3;
/// Finite-difference steps, relative to the step scale.
pub const FD_STEPS: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];
/// Uniform probes per branch in [`approximate`].
pub const BRANCH_PROBES: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularKind {
    Kink,
    Jump,
}

impl std::fmt::Display for SingularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SingularKind::Kink => "kink",
            SingularKind::Jump => "jump",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    pub x: f64,
    pub side: Branch,
    pub kind: SingularKind,
    /// `u(x)`; the larger one-sided limit at a jump.
    pub level: f64,
    /// Left limit, for jumps.
    pub beta: Option<f64>,
    /// Right limit, for jumps.
    pub gamma: Option<f64>,
    pub left_slope: Option<f64>,
    pub right_slope: Option<f64>,
    /// Whether `x` is an edge of the core.
    pub core_edge: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub singulars: Vec<SingularPoint>,
    pub in_f_t: bool,
    pub in_f_n: bool,
    pub in_f_c: bool,
    pub in_f_d: bool,
}

impl AnalysisReport {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "x,side,kind,level,beta,gamma,left_slope,right_slope")?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.16e}"));
        for s in &self.singulars {
            writeln!(
                out,
                "{:.16e},{},{},{:.16e},{},{},{},{}",
                s.x,
                s.side,
                s.kind,
                s.level,
                opt(s.beta),
                opt(s.gamma),
                opt(s.left_slope),
                opt(s.right_slope)
            )?;
        }
        Ok(())
    }
}

fn is_kink(l: f64, r: f64) -> bool {
    if l.is_finite() && r.is_finite() {
        (l - r).abs() > KINK_THRESHOLD
    } else {
        l != r
    }
}

fn scan_branch(pieces: &[Piece], side: Branch, out: &mut Vec<SingularPoint>) {
    for w in pieces.windows(2) {
        let x = w[0].hi();
        let (lv, rv) = (w[0].value(x), w[1].value(x));
        if (lv - rv).abs() > TOL_X {
            out.push(SingularPoint {
                x,
                side,
                kind: SingularKind::Jump,
                level: lv.max(rv),
                beta: Some(lv),
                gamma: Some(rv),
                left_slope: None,
                right_slope: None,
                core_edge: false,
            });
            continue;
        }
        let (ls, rs) = (w[0].derivative(x), w[1].derivative(x));
        if is_kink(ls, rs) {
            out.push(SingularPoint {
                x,
                side,
                kind: SingularKind::Kink,
                level: lv.max(rv),
                beta: None,
                gamma: None,
                left_slope: Some(ls),
                right_slope: Some(rs),
                core_edge: false,
            });
        }
    }
}

fn core_edge_kink(x: f64, side: Branch, ls: f64, rs: f64) -> Option<SingularPoint> {
    is_kink(ls, rs).then_some(SingularPoint {
        x,
        side,
        kind: SingularKind::Kink,
        level: 1.0,
        beta: None,
        gamma: None,
        left_slope: Some(ls),
        right_slope: Some(rs),
        core_edge: true,
    })
}

/// Enumerates jumps and kinks at piece boundaries inside the open support,
/// including the core edges, and classifies `u` into the families.
pub fn analyze(u: &FuzzyNumber) -> AnalysisReport {
    let [s_lo, s_hi] = u.support();
    let [c_lo, c_hi] = u.core();
    let mut singulars = Vec::new();
    scan_branch(u.left(), Branch::Left, &mut singulars);

    let left_edge = u.left().last().map(|p| p.derivative(c_lo));
    let right_edge = u.right().first().map(|p| p.derivative(c_hi));
    if c_lo == c_hi {
        if let (Some(ls), Some(rs)) = (left_edge, right_edge) {
            singulars.extend(core_edge_kink(c_lo, Branch::Left, ls, rs));
        }
    } else {
        if let Some(ls) = left_edge {
            singulars.extend(core_edge_kink(c_lo, Branch::Left, ls, 0.0));
        }
        if let Some(rs) = right_edge {
            singulars.extend(core_edge_kink(c_hi, Branch::Right, 0.0, rs));
        }
    }
    scan_branch(u.right(), Branch::Right, &mut singulars);

    let jumps = singulars.iter().any(|s| s.kind == SingularKind::Jump);
    let off_core = singulars.iter().any(|s| !s.core_edge);
    let plateaus = u.left().iter().chain(u.right()).any(Piece::is_constant);
    let continuous_ends = u.boundary_values() == (0.0, 0.0) && s_lo < c_lo && c_hi < s_hi;
    let in_f_c = !jumps && continuous_ends;
    let in_f_n = !off_core;
    let in_f_t = in_f_n && !plateaus;
    let in_f_d = in_f_c && singulars.is_empty();
    AnalysisReport { singulars, in_f_t, in_f_n, in_f_c, in_f_d }
}

/// Outcome of a differentiability probe at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffVerdict {
    pub x: f64,
    pub pass: bool,
    /// One-sided slopes at the smallest step, or the exact derivative.
    pub left_slope: f64,
    pub right_slope: f64,
    /// `|right_slope - left_slope|`.
    pub gap: f64,
}

/// Membership derivative of `u` at `x` from the piece holding `x`, which
/// must be interior to that piece.
fn exact_derivative(u: &FuzzyNumber, x: f64) -> f64 {
    let [c_lo, c_hi] = u.core();
    if x >= c_lo && x <= c_hi {
        return 0.0;
    }
    let pieces = if x < c_lo { u.left() } else { u.right() };
    pieces.iter().find(|p| p.lo() <= x && x <= p.hi()).map_or(0.0, |p| p.derivative(x))
}

/// Probes differentiability at each point with the standard step ladder.
pub fn check_differentiable(u: &FuzzyNumber, points: &[f64], tol: f64) -> Result<Vec<DiffVerdict>> {
    check_differentiable_scaled(u, points, tol, 1.0)
}

/// Like [`check_differentiable`] with every step multiplied by `scale`.
///
/// Points farther than the largest step from any piece boundary use the
/// closed-form derivative. Elsewhere the left and right difference
/// quotients are compared at each step; the verdict passes when their gap
/// does not grow (up to rounding) and ends at most `tol`.
pub fn check_differentiable_scaled(u: &FuzzyNumber, points: &[f64], tol: f64, scale: f64) -> Result<Vec<DiffVerdict>> {
    let [s_lo, s_hi] = u.support();
    let breaks = u.breakpoints();
    let h_max = FD_STEPS[0] * scale;
    points
        .iter()
        .map(|&x| {
            if !(x > s_lo && x < s_hi) {
                return Err(Error::PointOutsideSupport { x, lo: s_lo, hi: s_hi });
            }
            if breaks.iter().all(|b| (b - x).abs() > h_max) && x - h_max > s_lo && x + h_max < s_hi {
                let d = exact_derivative(u, x);
                return Ok(DiffVerdict { x, pass: true, left_slope: d, right_slope: d, gap: 0.0 });
            }
            let fx = u.membership(x);
            let mut pass = true;
            let mut prev_gap = f64::INFINITY;
            let (mut ls, mut rs) = (0.0, 0.0);
            for step in FD_STEPS {
                let h = step * scale;
                let (xl, xr) = (x - h, x + h);
                let (hl, hr) = (x - xl, xr - x);
                ls = (fx - u.membership(xl)) / hl;
                rs = (u.membership(xr) - fx) / hr;
                let gap = (rs - ls).abs();
                let rounding = 8.0 * f64::EPSILON / hl.min(hr) + 1e-12;
                if gap > prev_gap + rounding {
                    pass = false;
                }
                prev_gap = gap;
            }
            let gap = (rs - ls).abs();
            Ok(DiffVerdict { x, pass: pass && gap <= tol, left_slope: ls, right_slope: rs, gap })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub p: f64,
    pub d: f64,
    pub diff_ok: bool,
}

pub fn write_convergence_csv(rows: &[ConvergenceRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "p,d_inf,diff_ok")?;
    for r in rows {
        writeln!(out, "{:.16e},{:.16e},{}", r.p, r.d, r.diff_ok)?;
    }
    Ok(())
}

/// One smoothing step: the spec, its smoother `w`, and `u` convolved with `w`.
#[derive(Debug, Clone)]
pub struct Smoothed {
    pub spec: SmootherSpec,
    pub smoother: FuzzyNumber,
    pub result: FuzzyNumber,
}

pub fn smooth_once(u: &FuzzyNumber, p: f64, report: &AnalysisReport) -> Result<Smoothed> {
    let spec = spec_for(u, p, report)?;
    let smoother = synthesize(&spec)?;
    let result = nabla(u, &smoother);
    Ok(Smoothed { spec, smoother, result })
}

/// Points of `u` convolved with `w` where differentiability is checked: the
/// images of the singular levels of `u` under side-function addition, the
/// core edges, and [`BRANCH_PROBES`] uniform points per branch.
pub fn probe_points(w: &FuzzyNumber, report: &AnalysisReport, v: &FuzzyNumber) -> Vec<f64> {
    let ws = w.sides();
    let mut pts = Vec::new();
    for s in &report.singulars {
        let mut levels = vec![s.level];
        if s.kind == SingularKind::Jump {
            levels.extend(s.beta);
            levels.extend(s.gamma);
        }
        for a in levels {
            let offset = if s.side == Branch::Left { ws.minus.value(a) } else { ws.plus.value(a) };
            pts.push(s.x + offset);
        }
    }
    let [s_lo, s_hi] = v.support();
    let [c_lo, c_hi] = v.core();
    pts.push(c_lo);
    pts.push(c_hi);
    for (a, b) in [(s_lo, c_lo), (c_hi, s_hi)] {
        if b > a {
            let n = BRANCH_PROBES + 1;
            pts.extend((1..n).map(|k| a + (b - a) * k as f64 / n as f64));
        }
    }
    pts.retain(|&x| x > s_lo && x < s_hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Step scale for probing a result smoothed with radius `p`. Curvature of a
/// smoothed result grows like `1/p^2`, so steps shrink accordingly.
pub fn fd_scale(p: f64) -> f64 {
    (p * p).min(1.0)
}

/// Smooths `u` with each radius of `schedule` and reports the distance to
/// `u` and whether the result passed every differentiability probe.
pub fn approximate(u: &FuzzyNumber, schedule: &[f64], tol: f64) -> Result<Vec<ConvergenceRow>> {
    check_schedule(schedule)?;
    let report = analyze(u);
    schedule
        .iter()
        .map(|&p| {
            let s = smooth_once(u, p, &report)?;
            let d = d_inf(u, &s.result);
            let probes = probe_points(&s.smoother, &report, &s.result);
            let verdicts = check_differentiable_scaled(&s.result, &probes, tol, fd_scale(p))?;
            Ok(ConvergenceRow { p, d, diff_ok: verdicts.iter().all(|v| v.pass) })
        })
        .collect()
}

pub fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("schedule is empty".into()));
    }
    if let Some(p) = schedule.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidSchedule(format!("radius {p} is not positive")));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidSchedule("radii must be strictly decreasing".into()));
    }
    Ok(())
}

/// Parses `0.5,0.25,...` or `geometric:<p0>,<n>` (`n` radii halving from `p0`).
pub fn parse_schedule(text: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidSchedule(format!("{text:?}: {why}"));
    let schedule = if let Some(rest) = text.strip_prefix("geometric:") {
        let (p0, n) = rest.split_once(',').ok_or_else(|| bad("expected geometric:<p0>,<n>"))?;
        let p0: f64 = p0.trim().parse().map_err(|_| bad("bad p0"))?;
        let n: u32 = n.trim().parse().map_err(|_| bad("bad n"))?;
        (0..n).map(|k| p0 * 0.5_f64.powi(k as i32)).collect()
    } else {
        text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad("bad number"))).collect::<Result<Vec<_>>>()?
    };
    check_schedule(&schedule)?;
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::make_w_p;

    fn tri() -> FuzzyNumber {
        FuzzyNumber::triangular(0.0, 1.0, 2.0).unwrap()
    }

    fn jump_fixture() -> FuzzyNumber {
        FuzzyNumber::new(
            [0.0, 3.0],
            [2.0, 2.0],
            vec![Piece::segment(0.0, 0.0, 1.0, 0.25), Piece::segment(1.0, 0.75, 2.0, 1.0)],
            vec![Piece::segment(2.0, 1.0, 3.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn triangle_report() {
        let r = analyze(&tri());
        assert_eq!(r.singulars.len(), 1);
        let s = &r.singulars[0];
        assert_eq!((s.x, s.kind, s.left_slope, s.right_slope), (1.0, SingularKind::Kink, Some(1.0), Some(-1.0)));
        assert!(r.in_f_t && r.in_f_n && r.in_f_c && !r.in_f_d);
    }

    #[test]
    fn smoother_report() {
        let r = analyze(&make_w_p(1.0).unwrap());
        assert!(r.singulars.is_empty());
        assert!(r.in_f_d && r.in_f_c && r.in_f_n);
    }

    #[test]
    fn jump_report() {
        let r = analyze(&jump_fixture());
        let j = r.singulars.iter().find(|s| s.kind == SingularKind::Jump).unwrap();
        assert_eq!((j.x, j.beta, j.gamma, j.level), (1.0, Some(0.25), Some(0.75), 0.75));
        assert!(!r.in_f_c && !r.in_f_n);
    }

    #[test]
    fn differentiability_examples() {
        let w = make_w_p(1.0).unwrap();
        let v = check_differentiable(&w, &[0.0], 1e-3).unwrap();
        assert!(v[0].pass && v[0].left_slope.abs() < 1e-3);
        let v = check_differentiable(&tri(), &[1.0], 1e-3).unwrap();
        assert!(!v[0].pass && (v[0].gap - 2.0).abs() < 1e-9);
        let sum = nabla(&tri(), &make_w_p(0.5).unwrap());
        assert!(check_differentiable(&sum, &[1.0], 1e-3).unwrap()[0].pass);
        assert!(matches!(check_differentiable(&tri(), &[2.0], 1e-3), Err(Error::PointOutsideSupport { .. })));
    }

    #[test]
    fn approximate_triangle() {
        let rows = approximate(&tri(), &[0.5, 0.25, 0.125], DEFAULT_DIFF_TOL).unwrap();
        for r in &rows {
            assert!(r.diff_ok, "{r:?}");
            assert!(r.d <= r.p + 1e-12);
        }
    }

    #[test]
    fn approximate_jump() {
        let rows = approximate(&jump_fixture(), &[0.5, 0.25], DEFAULT_DIFF_TOL).unwrap();
        assert!(rows.iter().all(|r| r.diff_ok), "{rows:?}");
        assert!(rows[1].d < rows[0].d);
    }

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule("geometric:1,3").unwrap(), vec![1.0, 0.5, 0.25]);
        assert_eq!(parse_schedule("0.5, 0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_schedule("0.25,0.5").is_err());
        assert!(parse_schedule("geometric:1").is_err());
    }
}
