//! Generators `f: [0,1] -> [0,1]` for the `Z_p^f` smoother family.
//!
//! A generator is continuous, strictly decreasing, with `f(0) = 1` and
//! `f(1) = 0`. The smoother membership is `f^{-1}(|x| / p)`, so every
//! variant carries a closed-form inverse and inverse derivative.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `f(t) = (1 - t)^k`. `k = 1/2` gives `sqrt(1 - t)`, `k = 1` gives `1 - t`.
    Power { exponent: f64 },
    /// `f(t) = 1 - t^a`.
    Complement { exponent: f64 },
    /// `f(t) = cos(pi t / 2)`.
    Cosine,
}

impl Generator {
    pub fn sqrt_one_minus() -> Self {
        Generator::Power { exponent: 0.5 }
    }

    pub fn one_minus() -> Self {
        Generator::Power { exponent: 1.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match *self {
            Generator::Power { exponent } => {
                if exponent == 0.5 {
                    (1.0 - t).sqrt()
                } else {
                    (1.0 - t).powf(exponent)
                }
            }
            Generator::Complement { exponent } => 1.0 - t.powf(exponent),
            Generator::Cosine => (FRAC_PI_2 * t).cos(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match *self {
            Generator::Power { exponent } => -exponent * (1.0 - t).powf(exponent - 1.0),
            Generator::Complement { exponent } => -exponent * t.powf(exponent - 1.0),
            Generator::Cosine => -FRAC_PI_2 * (FRAC_PI_2 * t).sin(),
        }
    }

    /// `f^{-1}(s)` for `s` in `[0, 1]`.
    pub fn inverse(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        match *self {
            Generator::Power { exponent } => {
                if exponent == 0.5 {
                    1.0 - s * s
                } else if exponent == 1.0 {
                    1.0 - s
                } else {
                    1.0 - s.powf(1.0 / exponent)
                }
            }
            Generator::Complement { exponent } => (1.0 - s).powf(1.0 / exponent),
            Generator::Cosine => s.acos() / FRAC_PI_2,
        }
    }

    /// Derivative of `f^{-1}` at `s`; may be infinite at the ends of `[0, 1]`.
    pub fn inverse_derivative(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        match *self {
            Generator::Power { exponent } => {
                if exponent == 0.5 {
                    -2.0 * s
                } else if exponent == 1.0 {
                    -1.0
                } else {
                    -(1.0 / exponent) * s.powf(1.0 / exponent - 1.0)
                }
            }
            Generator::Complement { exponent } => {
                -(1.0 / exponent) * (1.0 - s).powf(1.0 / exponent - 1.0)
            }
            Generator::Cosine => -1.0 / (FRAC_PI_2 * (1.0 - s * s).sqrt()),
        }
    }

    /// `lim_{t -> 1-} f'(t)`.
    pub fn limit_derivative_at_one(&self) -> f64 {
        match *self {
            Generator::Power { exponent } if exponent < 1.0 => f64::NEG_INFINITY,
            Generator::Power { exponent } if exponent == 1.0 => -1.0,
            Generator::Power { .. } => 0.0,
            Generator::Complement { exponent } => -exponent,
            Generator::Cosine => -FRAC_PI_2,
        }
    }

    /// Whether `f` is differentiable on the open interval `(0, 1)`.
    pub fn is_differentiable(&self) -> bool {
        true
    }

    /// The smoothing criterion: `f` differentiable and `f'(t) -> -inf` as `t -> 1-`.
    pub fn meets_smoothing_criterion(&self) -> bool {
        self.is_differentiable() && self.limit_derivative_at_one() == f64::NEG_INFINITY
    }

    /// Checks parameters, exact endpoint values and strict decrease on a 101-point grid.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Generator::Power { exponent } | Generator::Complement { exponent } => {
                if !(exponent.is_finite() && exponent > 0.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "exponent must be positive and finite, got {exponent}"
                    )));
                }
            }
            Generator::Cosine => {}
        }
        if self.eval(0.0) != 1.0 {
            return Err(Error::InvalidGenerator(format!("f(0) = {} != 1", self.eval(0.0))));
        }
        // cos(pi/2) is 6e-17 in floating point
        if self.eval(1.0).abs() > 1e-15 {
            return Err(Error::InvalidGenerator(format!("f(1) = {} != 0", self.eval(1.0))));
        }
        let mut prev = self.eval(0.0);
        for i in 1..=100 {
            let t = i as f64 / 100.0;
            let v = self.eval(t);
            if !(v < prev) {
                return Err(Error::InvalidGenerator(format!("not strictly decreasing at t = {t}")));
            }
            prev = v;
        }
        Ok(())
    }
}
