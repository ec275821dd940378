//! Analytic membership pieces.
//!
//! A [`Piece`] is one monotone stretch of a membership branch on a closed
//! domain `[lo, hi]`. Every form evaluates value and derivative in closed
//! form; inversion is closed form except for Hermite pieces, which use a
//! safeguarded Newton iteration on the bracketing segment.

use serde::{Deserialize, Serialize};

use crate::generator::Generator;

/// A node of a cubic Hermite membership curve: position, level and slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct HermiteNode {
    pub x: f64,
    pub alpha: f64,
    pub slope: f64,
}

impl HermiteNode {
    pub fn new(x: f64, alpha: f64, slope: f64) -> Self {
        HermiteNode { x, alpha, slope }
    }
}

impl From<[f64; 3]> for HermiteNode {
    fn from(v: [f64; 3]) -> Self {
        HermiteNode::new(v[0], v[1], v[2])
    }
}

impl From<HermiteNode> for [f64; 3] {
    fn from(n: HermiteNode) -> Self {
        [n.x, n.alpha, n.slope]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum PieceForm {
    Constant { value: f64 },
    /// `slope * x + intercept`
    Linear { slope: f64, intercept: f64 },
    /// `a x^2 + b x + c`
    Quadratic { a: f64, b: f64, c: f64 },
    /// `f^{-1}(|x - center| / radius)`
    InverseGenerator { generator: Generator, radius: f64, center: f64 },
    /// Piecewise cubic Hermite through `(x, alpha)` with prescribed slopes.
    Hermite { nodes: Vec<HermiteNode> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub domain: [f64; 2],
    #[serde(flatten)]
    pub form: PieceForm,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, form: PieceForm) -> Self {
        Piece { domain: [lo, hi], form }
    }

    pub fn constant(lo: f64, hi: f64, value: f64) -> Self {
        Piece::new(lo, hi, PieceForm::Constant { value })
    }

    pub fn linear(lo: f64, hi: f64, slope: f64, intercept: f64) -> Self {
        Piece::new(lo, hi, PieceForm::Linear { slope, intercept })
    }

    /// The linear piece through `(x0, y0)` and `(x1, y1)`.
    pub fn segment(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        Piece::linear(x0, x1, slope, y0 - slope * x0)
    }

    pub fn quadratic(lo: f64, hi: f64, a: f64, b: f64, c: f64) -> Self {
        Piece::new(lo, hi, PieceForm::Quadratic { a, b, c })
    }

    pub fn inverse_generator(lo: f64, hi: f64, generator: Generator, radius: f64, center: f64) -> Self {
        Piece::new(lo, hi, PieceForm::InverseGenerator { generator, radius, center })
    }

    /// Hermite piece whose domain is spanned by its first and last node.
    pub fn hermite(nodes: Vec<HermiteNode>) -> Self {
        let lo = nodes.first().map_or(0.0, |n| n.x);
        let hi = nodes.last().map_or(0.0, |n| n.x);
        Piece::new(lo, hi, PieceForm::Hermite { nodes })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.domain[0]
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.domain[1]
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.form, PieceForm::Constant { .. })
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.form {
            PieceForm::Constant { value } => *value,
            PieceForm::Linear { slope, intercept } => slope * x + intercept,
            PieceForm::Quadratic { a, b, c } => (a * x + b) * x + c,
            PieceForm::InverseGenerator { generator, radius, center } => {
                generator.inverse((x - center).abs() / radius)
            }
            PieceForm::Hermite { nodes } => {
                let i = segment_index(nodes, x);
                hermite_value(&nodes[i], &nodes[i + 1], x)
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.form {
            PieceForm::Constant { .. } => 0.0,
            PieceForm::Linear { slope, .. } => *slope,
            PieceForm::Quadratic { a, b, .. } => 2.0 * a * x + b,
            PieceForm::InverseGenerator { generator, radius, center } => {
                let d = x - center;
                let dir = if d > 0.0 {
                    1.0
                } else if d < 0.0 {
                    -1.0
                } else if self.hi() <= *center {
                    -1.0
                } else {
                    1.0
                };
                generator.inverse_derivative(d.abs() / radius) * dir / radius
            }
            PieceForm::Hermite { nodes } => {
                let i = segment_index(nodes, x);
                hermite_derivative(&nodes[i], &nodes[i + 1], x)
            }
        }
    }

    /// The `x` in the domain with `value(x) = alpha`, for a strictly monotone piece.
    ///
    /// Levels outside the piece's range map to the nearer domain end. A
    /// constant piece returns its left end.
    pub fn inverse(&self, alpha: f64) -> f64 {
        let (lo, hi) = (self.lo(), self.hi());
        if !self.is_constant() {
            // decide the ends from end values so rounding at a vertex cannot move them
            let (v_lo, v_hi) = (self.value(lo), self.value(hi));
            let (bottom, top) = if v_hi >= v_lo { (lo, hi) } else { (hi, lo) };
            // fitted coefficients leave end values a few ulps off their levels
            let slack = 1e-13;
            if alpha >= v_lo.max(v_hi) - slack {
                return top;
            }
            if alpha <= v_lo.min(v_hi) + slack {
                return bottom;
            }
        }
        let x = match &self.form {
            PieceForm::Constant { .. } => lo,
            PieceForm::Linear { slope, intercept } => (alpha - intercept) / slope,
            PieceForm::Quadratic { a, b, c } => quadratic_root_in(*a, *b, *c - alpha, lo, hi),
            PieceForm::InverseGenerator { generator, radius, center } => {
                let offset = radius * generator.eval(alpha);
                if hi <= *center {
                    center - offset
                } else {
                    center + offset
                }
            }
            PieceForm::Hermite { nodes } => hermite_inverse(nodes, alpha),
        };
        x.clamp(lo, hi)
    }

    /// `(slope, intercept)` when the piece is affine in `x`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        match &self.form {
            PieceForm::Constant { value } => Some((0.0, *value)),
            PieceForm::Linear { slope, intercept } => Some((*slope, *intercept)),
            PieceForm::Quadratic { a, b, c } if *a == 0.0 => Some((*b, *c)),
            PieceForm::InverseGenerator { generator: Generator::Power { exponent }, radius, center }
            | PieceForm::InverseGenerator {
                generator: Generator::Complement { exponent },
                radius,
                center,
            } if *exponent == 1.0 => {
                // 1 - |x - center| / radius on one side of the center
                let dir = if self.hi() <= *center { 1.0 } else { -1.0 };
                let slope = dir / radius;
                Some((slope, 1.0 - slope * center))
            }
            _ => None,
        }
    }

    /// Translates the piece: the result evaluates to `self.value(x - t)` at `x`.
    pub fn shifted(&self, t: f64) -> Piece {
        let form = match &self.form {
            PieceForm::Constant { value } => PieceForm::Constant { value: *value },
            PieceForm::Linear { slope, intercept } => {
                PieceForm::Linear { slope: *slope, intercept: intercept - slope * t }
            }
            PieceForm::Quadratic { a, b, c } => PieceForm::Quadratic {
                a: *a,
                b: b - 2.0 * a * t,
                c: a * t * t - b * t + c,
            },
            PieceForm::InverseGenerator { generator, radius, center } => PieceForm::InverseGenerator {
                generator: *generator,
                radius: *radius,
                center: center + t,
            },
            PieceForm::Hermite { nodes } => PieceForm::Hermite {
                nodes: nodes.iter().map(|n| HermiteNode::new(n.x + t, n.alpha, n.slope)).collect(),
            },
        };
        Piece::new(self.lo() + t, self.hi() + t, form)
    }

    /// Dilates by `factor > 0`: the result evaluates to `self.value(x / factor)`.
    pub fn scaled(&self, factor: f64) -> Piece {
        debug_assert!(factor > 0.0);
        let form = match &self.form {
            PieceForm::Constant { value } => PieceForm::Constant { value: *value },
            PieceForm::Linear { slope, intercept } => {
                PieceForm::Linear { slope: slope / factor, intercept: *intercept }
            }
            PieceForm::Quadratic { a, b, c } => PieceForm::Quadratic {
                a: a / (factor * factor),
                b: b / factor,
                c: *c,
            },
            PieceForm::InverseGenerator { generator, radius, center } => PieceForm::InverseGenerator {
                generator: *generator,
                radius: radius * factor,
                center: center * factor,
            },
            PieceForm::Hermite { nodes } => PieceForm::Hermite {
                nodes: nodes
                    .iter()
                    .map(|n| HermiteNode::new(n.x * factor, n.alpha, n.slope / factor))
                    .collect(),
            },
        };
        Piece::new(self.lo() * factor, self.hi() * factor, form)
    }

    /// Mirrors about the origin: the result evaluates to `self.value(-x)`.
    pub fn reflected(&self) -> Piece {
        let form = match &self.form {
            PieceForm::Constant { value } => PieceForm::Constant { value: *value },
            PieceForm::Linear { slope, intercept } => {
                PieceForm::Linear { slope: -slope, intercept: *intercept }
            }
            PieceForm::Quadratic { a, b, c } => PieceForm::Quadratic { a: *a, b: -b, c: *c },
            PieceForm::InverseGenerator { generator, radius, center } => PieceForm::InverseGenerator {
                generator: *generator,
                radius: *radius,
                center: -center,
            },
            PieceForm::Hermite { nodes } => PieceForm::Hermite {
                nodes: nodes.iter().rev().map(|n| HermiteNode::new(-n.x, n.alpha, -n.slope)).collect(),
            },
        };
        Piece::new(-self.hi(), -self.lo(), form)
    }

    /// The same function on the sub-domain `[lo, hi]`.
    pub fn restricted(&self, lo: f64, hi: f64) -> Piece {
        match &self.form {
            PieceForm::Hermite { nodes } => {
                let mut kept = Vec::with_capacity(nodes.len());
                kept.push(HermiteNode::new(lo, self.value(lo), self.derivative(lo)));
                kept.extend(nodes.iter().filter(|n| n.x > lo && n.x < hi).copied());
                kept.push(HermiteNode::new(hi, self.value(hi), self.derivative(hi)));
                Piece::new(lo, hi, PieceForm::Hermite { nodes: kept })
            }
            form => Piece::new(lo, hi, form.clone()),
        }
    }

    /// Levels of Hermite nodes strictly inside the domain.
    pub fn internal_levels(&self) -> Vec<f64> {
        match &self.form {
            PieceForm::Hermite { nodes } if nodes.len() > 2 => {
                nodes[1..nodes.len() - 1].iter().map(|n| n.alpha).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Upper bound on `|derivative|` over the domain.
    pub fn max_abs_slope(&self) -> f64 {
        match &self.form {
            PieceForm::Constant { .. } => 0.0,
            PieceForm::Linear { slope, .. } => slope.abs(),
            PieceForm::Hermite { nodes } => nodes
                .windows(2)
                .map(|w| hermite_max_abs_slope(&w[0], &w[1]))
                .fold(0.0, f64::max),
            // derivative magnitude is monotone in x for these forms
            _ => self.derivative(self.lo()).abs().max(self.derivative(self.hi()).abs()),
        }
    }
}

/// Root of `a x^2 + b x + c = 0` nearest to `[lo, hi]`.
fn quadratic_root_in(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> f64 {
    if a == 0.0 {
        return -c / b;
    }
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let sign = if b < 0.0 { -1.0 } else { 1.0 };
    let q = -0.5 * (b + sign * disc.sqrt());
    let r1 = q / a;
    let r2 = if q != 0.0 { c / q } else { r1 };
    let dist = |r: f64| {
        if r < lo {
            lo - r
        } else if r > hi {
            r - hi
        } else {
            0.0
        }
    };
    if dist(r1) <= dist(r2) {
        r1
    } else {
        r2
    }
}

/// Index `i` of the Hermite segment `[nodes[i], nodes[i+1]]` containing `x`.
fn segment_index(nodes: &[HermiteNode], x: f64) -> usize {
    let n = nodes.len();
    debug_assert!(n >= 2);
    let k = nodes.partition_point(|node| node.x <= x);
    k.clamp(1, n - 1) - 1
}

pub(crate) fn hermite_value(n0: &HermiteNode, n1: &HermiteNode, x: f64) -> f64 {
    let h = n1.x - n0.x;
    let t = ((x - n0.x) / h).clamp(0.0, 1.0);
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * n0.alpha + h10 * h * n0.slope + h01 * n1.alpha + h11 * h * n1.slope
}

pub(crate) fn hermite_derivative(n0: &HermiteNode, n1: &HermiteNode, x: f64) -> f64 {
    let h = n1.x - n0.x;
    let t = ((x - n0.x) / h).clamp(0.0, 1.0);
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * (n0.alpha - n1.alpha) / h
        + (3.0 * t2 - 4.0 * t + 1.0) * n0.slope
        + (3.0 * t2 - 2.0 * t) * n1.slope
}

fn hermite_max_abs_slope(n0: &HermiteNode, n1: &HermiteNode) -> f64 {
    let h = n1.x - n0.x;
    let d = (n1.alpha - n0.alpha) / h;
    // derivative in t is quadratic: A t^2 + B t + C
    let a = -6.0 * d + 3.0 * n0.slope + 3.0 * n1.slope;
    let b = 6.0 * d - 4.0 * n0.slope - 2.0 * n1.slope;
    let mut best = n0.slope.abs().max(n1.slope.abs());
    if a != 0.0 {
        let t = -b / (2.0 * a);
        if t > 0.0 && t < 1.0 {
            best = best.max(hermite_derivative(n0, n1, n0.x + t * h).abs());
        }
    }
    best
}

/// Solves `H(x) = alpha` on a monotone Hermite curve.
fn hermite_inverse(nodes: &[HermiteNode], alpha: f64) -> f64 {
    let n = nodes.len();
    let increasing = nodes[n - 1].alpha >= nodes[0].alpha;
    let below = |node: &HermiteNode| if increasing { node.alpha < alpha } else { node.alpha > alpha };
    let k = nodes.partition_point(below);
    if k == 0 {
        return nodes[0].x;
    }
    if k == n {
        return nodes[n - 1].x;
    }
    let (n0, n1) = (&nodes[k - 1], &nodes[k]);
    if nodes[k].alpha == alpha {
        return nodes[k].x;
    }
    solve_monotone(|x| hermite_value(n0, n1, x) - alpha, |x| hermite_derivative(n0, n1, x), n0.x, n1.x)
}

/// Safeguarded Newton iteration for a monotone function with a sign change on `[a, b]`.
pub(crate) fn solve_monotone(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
) -> f64 {
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa.signum() == fb.signum() {
        return if fa.abs() < fb.abs() { a } else { b };
    }
    let rising = fb > fa;
    let mut x = a + (b - a) * (-fa / (fb - fa));
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == rising {
            b = x;
        } else {
            a = x;
        }
        if b - a <= f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d.is_finite() && d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_w1_inverse() {
        let left = Piece::quadratic(-1.0, 0.0, -1.0, 0.0, 1.0);
        let right = Piece::quadratic(0.0, 1.0, -1.0, 0.0, 1.0);
        assert_eq!(left.inverse(0.75), -0.5);
        assert_eq!(right.inverse(0.75), 0.5);
        assert_eq!(right.value(0.5), 0.75);
    }

    #[test]
    fn hermite_reproduces_cubic_exactly() {
        // alpha = x^3 on [0, 1] sampled with exact slopes
        let nodes = vec![
            HermiteNode::new(0.0, 0.0, 0.0),
            HermiteNode::new(0.5, 0.125, 0.75),
            HermiteNode::new(1.0, 1.0, 3.0),
        ];
        let p = Piece::hermite(nodes);
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((p.value(x) - x * x * x).abs() < 1e-14);
            assert!((p.derivative(x) - 3.0 * x * x).abs() < 1e-13);
        }
        assert!((p.inverse(0.343) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn transforms_preserve_values() {
        let pieces = [
            Piece::segment(0.0, 0.1, 2.0, 0.9),
            Piece::quadratic(-1.0, 0.0, -1.0, 0.0, 1.0),
            Piece::inverse_generator(0.0, 2.0, Generator::Cosine, 2.0, 0.0),
            Piece::hermite(vec![HermiteNode::new(0.0, 0.0, 1.0), HermiteNode::new(1.0, 1.0, 0.0)]),
        ];
        for p in &pieces {
            let x = 0.3 * p.lo() + 0.7 * p.hi();
            assert!((p.shifted(1.5).value(x + 1.5) - p.value(x)).abs() < 1e-14);
            assert!((p.scaled(2.5).value(2.5 * x) - p.value(x)).abs() < 1e-14);
            assert!((p.reflected().value(-x) - p.value(x)).abs() < 1e-14);
            assert!((p.reflected().derivative(-x) + p.derivative(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn restricted_hermite_keeps_function() {
        let p = Piece::hermite(vec![
            HermiteNode::new(0.0, 0.0, 0.5),
            HermiteNode::new(1.0, 0.4, 0.4),
            HermiteNode::new(2.0, 1.0, 0.0),
        ]);
        let r = p.restricted(0.25, 1.5);
        for i in 0..=10 {
            let x = 0.25 + 1.25 * i as f64 / 10.0;
            assert!((r.value(x) - p.value(x)).abs() < 1e-15);
            assert!((r.derivative(x) - p.derivative(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn affine_generator_pieces() {
        let left = Piece::inverse_generator(-2.0, 0.0, Generator::one_minus(), 2.0, 0.0);
        let (a, b) = left.as_affine().unwrap();
        assert_eq!((a, b), (0.5, 1.0));
        assert!(Piece::quadratic(0.0, 1.0, -1.0, 0.0, 1.0).as_affine().is_none());
    }

    #[test]
    fn serde_shape() {
        let p = Piece::segment(0.0, 0.0, 1.0, 1.0);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"domain":[0.0,1.0],"kind":"linear","params":{"slope":1.0,"intercept":0.0}}"#);
        let back: Piece = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
