//! Monotone C1 Hermite materialization of side functions.
//!
//! Arithmetic produces new endpoint functions `x = s(alpha)` that are not in
//! any closed form. They are turned back into membership pieces
//! `alpha = s^{-1}(x)` by cubic Hermite interpolation in `x`. When the exact
//! derivative is available the node slopes are exact (`1 / s'(alpha)`) and
//! nodes are refined adaptively, then scaled into the Fritsch-Carlson
//! monotonicity region.

use crate::piece::{hermite_value, HermiteNode, Piece};
use crate::N_RES;

const MAX_DEPTH: u32 = 30;
const ALPHA_ERR: f64 = 1e-12;
const X_ERR: f64 = 1e-10;

/// Hermite membership piece for a strictly increasing endpoint function on
/// `[a0, a1]`. `side(alpha)` returns `(x, dx/dalpha)`, the derivative may be
/// `+inf` where the membership is stationary. Levels in `mandatory` become nodes.
pub(crate) fn hermite_from_side(a0: f64, a1: f64, mandatory: &[f64], side: impl Fn(f64) -> (f64, f64)) -> Piece {
    let n0 = (((N_RES - 1) as f64) * (a1 - a0)).ceil().max(1.0) as usize;
    let mut levels: Vec<f64> = (0..=n0).map(|i| a0 + (a1 - a0) * i as f64 / n0 as f64).collect();
    levels[n0] = a1;
    // near-duplicate levels make a tiny interval whose secant wrecks the
    // monotonicity scaling of its neighbours; mandatory levels win
    let close = 1e-12;
    let mut extra: Vec<f64> = mandatory.iter().copied().filter(|&a| a > a0 + close && a < a1 - close).collect();
    extra.sort_by(f64::total_cmp);
    extra.dedup_by(|a, b| *a - *b <= close);
    levels.retain(|&g| g == a0 || g == a1 || !extra.iter().any(|&m| (m - g).abs() <= close));
    levels.extend(extra);
    levels.sort_by(f64::total_cmp);

    let node_at = |alpha: f64| {
        let (x, dx) = side(alpha);
        (alpha, x, membership_slope(dx))
    };
    let mut out: Vec<(f64, f64, f64)> = Vec::with_capacity(levels.len() * 2);
    out.push(node_at(levels[0]));
    for &alpha in &levels[1..] {
        let left = *out.last().unwrap();
        let right = node_at(alpha);
        refine(left, right, 0, &side, &mut out);
    }

    let mut nodes: Vec<HermiteNode> = Vec::with_capacity(out.len());
    for (alpha, x, m) in out {
        match nodes.last() {
            Some(last) if x <= last.x => {
                // collapsed x extent: keep the higher level on the existing node
                let n = nodes.len();
                nodes[n - 1].alpha = alpha;
            }
            _ => nodes.push(HermiteNode::new(x, alpha, m)),
        }
    }
    if nodes.len() == 1 {
        let only = nodes[0];
        nodes.push(HermiteNode::new(only.x + f64::EPSILON * (1.0 + only.x.abs()), a1, only.slope));
    }
    enforce_monotone(&mut nodes);
    Piece::hermite(nodes)
}

fn membership_slope(dx_dalpha: f64) -> f64 {
    if dx_dalpha.is_infinite() {
        0.0
    } else if dx_dalpha <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / dx_dalpha
    }
}

fn refine(
    left: (f64, f64, f64),
    right: (f64, f64, f64),
    depth: u32,
    side: &impl Fn(f64) -> (f64, f64),
    out: &mut Vec<(f64, f64, f64)>,
) {
    let (la, lx, lm) = left;
    let (ra, rx, rm) = right;
    let width = rx - lx;
    if depth >= MAX_DEPTH || width <= 1e-13 * (1.0 + lx.abs()) || ra - la <= 1e-15 {
        out.push(right);
        return;
    }
    let delta = (ra - la) / width;
    let cap = |m: f64| if m.is_finite() { m } else { 3.0 * delta };
    let (n0, n1) = (HermiteNode::new(lx, la, cap(lm)), HermiteNode::new(rx, ra, cap(rm)));
    let (p, q) = (n0.slope / delta, n1.slope / delta);
    let mut ok = p * p + q * q <= 9.0;
    if ok {
        for frac in [0.25, 0.5, 0.75] {
            let alpha = la + frac * (ra - la);
            let (x, dx) = side(alpha);
            let err = (hermite_value(&n0, &n1, x) - alpha).abs();
            let x_err = if dx.is_finite() { err * dx } else { 0.0 };
            if err > ALPHA_ERR || x_err > X_ERR {
                ok = false;
                break;
            }
        }
    }
    if ok {
        out.push(right);
        return;
    }
    let mid_alpha = 0.5 * (la + ra);
    let (mx, mdx) = side(mid_alpha);
    let mid = (mid_alpha, mx, membership_slope(mdx));
    refine(left, mid, depth + 1, side, out);
    refine(mid, right, depth + 1, side, out);
}

/// Replaces infinite slopes and scales slopes into the Fritsch-Carlson circle.
fn enforce_monotone(nodes: &mut [HermiteNode]) {
    let n = nodes.len();
    let secant = |i: usize, nodes: &[HermiteNode]| (nodes[i + 1].alpha - nodes[i].alpha) / (nodes[i + 1].x - nodes[i].x);
    for i in 0..n {
        if !nodes[i].slope.is_finite() {
            let mut s = f64::INFINITY;
            if i > 0 {
                s = s.min(3.0 * secant(i - 1, nodes));
            }
            if i + 1 < n {
                s = s.min(3.0 * secant(i, nodes));
            }
            nodes[i].slope = s;
        }
    }
    for i in 0..n - 1 {
        let d = secant(i, nodes);
        if d <= 0.0 {
            nodes[i].slope = 0.0;
            nodes[i + 1].slope = 0.0;
            continue;
        }
        let (p, q) = (nodes[i].slope / d, nodes[i + 1].slope / d);
        let r = p * p + q * q;
        if r > 9.0 {
            let t = 3.0 / r.sqrt();
            nodes[i].slope = t * p * d;
            nodes[i + 1].slope = t * q * d;
        }
    }
}
