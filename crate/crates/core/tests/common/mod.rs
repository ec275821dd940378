#![allow(dead_code)]

use fuzzsmooth::smooth::{make_w_p, make_z_p_f};
use fuzzsmooth::{FuzzyNumber, Generator, Piece};

pub fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber {
    FuzzyNumber::triangular(a, b, c).unwrap()
}

pub fn trap(a: f64, b: f64, c: f64, d: f64) -> FuzzyNumber {
    FuzzyNumber::trapezoidal(a, b, c, d).unwrap()
}

pub fn w(p: f64) -> FuzzyNumber {
    make_w_p(p).unwrap()
}

pub fn z(f: Generator, p: f64) -> FuzzyNumber {
    make_z_p_f(f, p).unwrap().number
}

/// Left slope 0.5 up to (1, 0.5), then slope 1 up to the core [1.5, 2].
pub fn kink() -> FuzzyNumber {
    FuzzyNumber::new(
        [0.0, 3.0],
        [1.5, 2.0],
        vec![Piece::segment(0.0, 0.0, 1.0, 0.5), Piece::segment(1.0, 0.5, 1.5, 1.0)],
        vec![Piece::segment(2.0, 1.0, 3.0, 0.0)],
    )
    .unwrap()
}

/// Left branch rises to 0.25 at x = 1, jumps to 0.75, reaches 1 at x = 2.
pub fn jump() -> FuzzyNumber {
    FuzzyNumber::new(
        [0.0, 3.0],
        [2.0, 2.0],
        vec![Piece::segment(0.0, 0.0, 1.0, 0.25), Piece::segment(1.0, 0.75, 2.0, 1.0)],
        vec![Piece::segment(2.0, 1.0, 3.0, 0.0)],
    )
    .unwrap()
}

/// Right-branch jump from 0.6 down to 0.2 at x = 2, with a curved left branch.
pub fn right_jump() -> FuzzyNumber {
    FuzzyNumber::new(
        [-1.0, 3.0],
        [0.0, 1.0],
        vec![Piece::quadratic(-1.0, 0.0, -1.0, 0.0, 1.0)],
        vec![Piece::segment(1.0, 1.0, 2.0, 0.6), Piece::segment(2.0, 0.2, 3.0, 0.0)],
    )
    .unwrap()
}

/// Left plateau at level 0.5 on [1, 2].
pub fn plateau() -> FuzzyNumber {
    FuzzyNumber::new(
        [0.0, 4.0],
        [3.0, 3.0],
        vec![Piece::segment(0.0, 0.0, 1.0, 0.5), Piece::constant(1.0, 2.0, 0.5), Piece::segment(2.0, 0.5, 3.0, 1.0)],
        vec![Piece::segment(3.0, 1.0, 4.0, 0.0)],
    )
    .unwrap()
}

pub fn corpus() -> Vec<(&'static str, FuzzyNumber)> {
    vec![
        ("tri", tri(0.0, 1.0, 2.0)),
        ("trap", trap(0.0, 1.0, 2.0, 4.0)),
        ("w_1", w(1.0)),
        ("z_lin", z(Generator::one_minus(), 1.0)),
        ("z_cos", z(Generator::Cosine, 0.75)),
        ("kink", kink()),
        ("jump", jump()),
        ("right_jump", right_jump()),
        ("plateau", plateau()),
    ]
}
