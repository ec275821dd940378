mod common;

use common::*;
use fuzzsmooth::analysis::{analyze, check_differentiable};
use fuzzsmooth::arith::{add, d_inf, d_inf_certified, mul, shift};
use fuzzsmooth::conv::nabla;
use fuzzsmooth::smooth::{synthesize, Level, SmootherSpec};
use fuzzsmooth::{FuzzyNumber, TOL_D, TOL_X};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn levels() -> impl Iterator<Item = f64> {
    (0..=100).map(|i| i as f64 / 100.0)
}

prop_compose! {
    fn arb_tri()(a in -5.0..5.0f64, l in 0.1..3.0f64, r in 0.1..3.0f64) -> FuzzyNumber {
        tri(a, a + l, a + l + r)
    }
}

prop_compose! {
    fn arb_trap()(a in -5.0..5.0f64, l in 0.1..3.0f64, m in 0.0..2.0f64, r in 0.1..3.0f64) -> FuzzyNumber {
        trap(a, a + l, a + l + m, a + l + m + r)
    }
}

prop_compose! {
    fn arb_smooth()(p in 0.1..2.0f64, t in -3.0..3.0f64) -> FuzzyNumber {
        shift(&w(p), t)
    }
}

fn arb_number() -> impl Strategy<Value = FuzzyNumber> {
    prop_oneof![arb_tri(), arb_trap(), arb_smooth(), Just(kink()), Just(jump()), Just(right_jump())]
}

fn close_sides(a: &FuzzyNumber, b: &FuzzyNumber, tol: f64) -> Result<(), TestCaseError> {
    for alpha in levels() {
        let (x, y) = (a.alpha_cut(alpha), b.alpha_cut(alpha));
        prop_assert!((x.lo - y.lo).abs() <= tol, "lo at {alpha}: {} vs {}", x.lo, y.lo);
        prop_assert!((x.hi - y.hi).abs() <= tol, "hi at {alpha}: {} vs {}", x.hi, y.hi);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cuts_are_nested(u in arb_number()) {
        let mut prev = u.alpha_cut(0.0);
        for alpha in levels().skip(1) {
            let cut = u.alpha_cut(alpha);
            prop_assert!(prev.contains(&cut), "{prev:?} does not contain {cut:?}");
            prev = cut;
        }
    }

    #[test]
    fn side_function_round_trip(u in arb_number()) {
        let back = FuzzyNumber::from_side_functions(&u.to_side_functions()).unwrap();
        close_sides(&u, &back, 1e-10)?;
        for i in 0..=200 {
            let x = u.support()[0] + (u.support()[1] - u.support()[0]) * i as f64 / 200.0;
            prop_assert!((u.membership(x) - back.membership(x)).abs() <= 1e-10);
        }
    }

    #[test]
    fn add_commutes(u in arb_number(), v in arb_number()) {
        close_sides(&add(&u, &v), &add(&v, &u), TOL_X)?;
    }

    #[test]
    fn add_associates(u in arb_number(), v in arb_number(), x in arb_number()) {
        close_sides(&add(&add(&u, &v), &x), &add(&u, &add(&v, &x)), TOL_X)?;
    }

    #[test]
    fn sum_cuts_are_endpoint_sums(u in arb_number(), v in arb_number()) {
        let s = nabla(&u, &v);
        prop_assert_eq!(s.support(), [u.support()[0] + v.support()[0], u.support()[1] + v.support()[1]]);
        for alpha in levels() {
            let (a, b, c) = (u.alpha_cut(alpha), v.alpha_cut(alpha), s.alpha_cut(alpha));
            prop_assert!((c.lo - (a.lo + b.lo)).abs() <= TOL_X);
            prop_assert!((c.hi - (a.hi + b.hi)).abs() <= TOL_X);
        }
    }

    #[test]
    fn metric_translation_invariant(u in arb_number(), v in arb_number(), t in -4.0..4.0f64) {
        let d = d_inf(&u, &v);
        let dt = d_inf(&shift(&u, t), &shift(&v, t));
        prop_assert!((d - dt).abs() <= TOL_X, "{d} vs {dt}");
    }

    #[test]
    fn metric_symmetry_and_triangle(u in arb_number(), v in arb_number(), x in arb_number()) {
        let (uv, vu) = (d_inf_certified(&u, &v), d_inf_certified(&v, &u));
        prop_assert_eq!(uv.value, vu.value);
        let (ux, xv) = (d_inf_certified(&u, &x), d_inf_certified(&x, &v));
        let slack = 2.0 * (uv.slack + ux.slack + xv.slack);
        prop_assert!(uv.value <= ux.value + xv.value + slack + 1e-12);
    }

    #[test]
    fn synthesized_smoothers_are_differentiable(
        p in 0.05..2.0f64,
        c in prop_oneof![Just(0.0), 0.0..0.5f64],
        raw in proptest::collection::vec(0.5..1.0f64, 0..4),
    ) {
        let lv: Vec<Level> = raw.iter().map(|&a| Level::new(a)).collect();
        let spec = SmootherSpec { p, c_left: c, c_right: c, left_levels: lv.clone(), right_levels: lv };
        let s = synthesize(&spec).unwrap();
        let pts: Vec<f64> = (1..40).map(|k| -p + 2.0 * p * k as f64 / 40.0).collect();
        let verdicts = check_differentiable(&s, &pts, 1e-3 / p.min(1.0)).unwrap();
        prop_assert!(verdicts.iter().all(|v| v.pass), "{verdicts:?}");
        for &a in &raw {
            let cut = s.alpha_cut(a);
            let piece = &s.left()[0];
            prop_assert!(piece.derivative(cut.lo).abs() <= TOL_D);
        }
    }

    #[test]
    fn family_flags_are_consistent(u in arb_number()) {
        let r = analyze(&u);
        prop_assert!(!r.in_f_t || r.in_f_n);
        prop_assert!(!r.in_f_d || (r.in_f_c && r.in_f_n));
        prop_assert!(!r.in_f_d || r.singulars.is_empty());
    }
}

/// Brute-force product: extrema of `xy` over a 200 x 200 grid of each cut.
fn product_cut_oracle(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..200 {
        let x = a.0 + (a.1 - a.0) * i as f64 / 199.0;
        for j in 0..200 {
            let y = b.0 + (b.1 - b.0) * j as f64 / 199.0;
            lo = lo.min(x * y);
            hi = hi.max(x * y);
        }
    }
    (lo, hi)
}

#[test]
fn product_matches_grid_oracle() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (arb_number(), arb_number());
    for _ in 0..20 {
        let (u, v) = strat.new_tree(&mut runner).unwrap().current();
        let m = mul(&u, &v);
        for alpha in levels() {
            let (a, b) = (u.alpha_cut(alpha), v.alpha_cut(alpha));
            let (lo, hi) = product_cut_oracle((a.lo, a.hi), (b.lo, b.hi));
            let c = m.alpha_cut(alpha);
            assert!((c.lo - lo).abs() <= 1e-6 * (1.0 + lo.abs()), "lo at {alpha}: {} vs {lo}", c.lo);
            assert!((c.hi - hi).abs() <= 1e-6 * (1.0 + hi.abs()), "hi at {alpha}: {} vs {hi}", c.hi);
        }
    }
}

#[test]
fn smoother_cuts_scale_with_radius() {
    let base = w(1.0);
    for p in [0.1, 0.5, 2.0] {
        let wp = w(p);
        for alpha in levels() {
            let (a, b) = (wp.alpha_cut(alpha), base.alpha_cut(alpha));
            assert!((a.lo - p * b.lo).abs() <= TOL_X && (a.hi - p * b.hi).abs() <= TOL_X);
        }
    }
}
