//! Acceptance run: one PASS/FAIL line per criterion with pinned tolerances.
//! See the output with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use fuzzsmooth::analysis::{
    analyze, approximate, check_differentiable, probe_points, smooth_once, ConvergenceRow, SingularKind,
};
use fuzzsmooth::arith::d_inf;
use fuzzsmooth::conv::{nabla, oracle_gap};
use fuzzsmooth::io::{parse_file, to_json};
use fuzzsmooth::smooth::make_z_p_f;
use fuzzsmooth::{FuzzyNumber, Generator};

const DIFF_TOL: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        o.detail.push_str(&format!("; {:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
        o.pass &= took < limit;
    }
    o
}

fn convolution_identity() -> Outcome {
    let z_lin = z(Generator::one_minus(), 1.0);
    let pairs: Vec<(&str, FuzzyNumber, FuzzyNumber)> = vec![
        ("tri+trap", tri(0.0, 1.0, 2.0), trap(0.0, 1.0, 2.0, 4.0)),
        ("tri+w1", tri(0.0, 1.0, 2.0), w(1.0)),
        ("trap+w0.5", trap(-1.0, 0.0, 0.5, 1.0), w(0.5)),
        ("w1+zlin", w(1.0), z_lin.clone()),
        ("tri+kink", tri(-1.0, 0.0, 2.0), kink()),
        ("kink+w0.5", kink(), w(0.5)),
        ("jump+tri", jump(), tri(0.0, 1.0, 2.0)),
        ("jump+w1", jump(), w(1.0)),
        ("trap+kink", trap(0.0, 1.0, 2.0, 4.0), kink()),
        ("zlin+jump", z_lin, jump()),
    ];
    let h = 1e-3;
    let mut worst_bound: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut fails = Vec::new();
    for (name, u, v) in &pairs {
        let g = oracle_gap(u, v, h).unwrap();
        let g2 = oracle_gap(u, v, h / 2.0).unwrap();
        let bound = 5.0 * h * (u.lipschitz_bound() + v.lipschitz_bound());
        let ratio = if g > 0.0 { g2 / g } else { 0.0 };
        worst_bound = worst_bound.max(g / bound);
        worst_ratio = worst_ratio.max(ratio);
        if g > bound || ratio > 0.7 {
            fails.push(format!("{name}: gap {g:.3e} bound {bound:.3e} ratio {ratio:.3}"));
        }
    }
    outcome(
        fails.is_empty(),
        format!("10 pairs, max gap/bound {worst_bound:.3} (<= 1), max halving ratio {worst_ratio:.3} (<= 0.7) {fails:?}"),
    )
}

fn metric_exactness() -> Outcome {
    let u = tri(0.0, 1.0, 2.0);
    let mut worst: f64 = 0.0;
    for p in [1.0, 0.5, 0.1] {
        let d = d_inf(&u, &nabla(&u, &w(p)));
        worst = worst.max((d - p).abs());
    }
    outcome(worst <= 1e-9, format!("max |d - p| = {worst:.3e} (tol 1e-9)"))
}

fn smooth_peak() -> Outcome {
    let u = tri(0.0, 1.0, 2.0);
    let wp = w(0.5);
    let v = nabla(&u, &wp);
    let mut pts = probe_points(&wp, &analyze(&u), &v);
    pts.push(1.0);
    let verdicts = check_differentiable(&v, &pts, DIFF_TOL).unwrap();
    let worst = verdicts.iter().map(|v| v.gap).fold(0.0, f64::max);
    let n = verdicts.len();
    outcome(verdicts.iter().all(|v| v.pass), format!("{n} probes incl. x = 1, max gap {worst:.3e} (tol {DIFF_TOL:e})"))
}

fn generator_contrast() -> Outcome {
    let u = tri(0.0, 1.0, 2.0);
    let lin = make_z_p_f(Generator::one_minus(), 1.0).unwrap();
    let v = nabla(&u, &lin.number);
    let at_peak = check_differentiable(&v, &[1.0], DIFF_TOL).unwrap()[0].clone();
    let sq = make_z_p_f(Generator::sqrt_one_minus(), 1.0).unwrap();
    let vs = nabla(&u, &sq.number);
    let smooth = check_differentiable(&vs, &[1.0], DIFF_TOL).unwrap()[0].clone();
    let gap_ok = (at_peak.gap - 1.0).abs() <= 0.05;
    outcome(
        !lin.meets_criterion && sq.meets_criterion && !at_peak.pass && gap_ok && smooth.pass,
        format!(
            "1-t: pass={} gap {:.4} (1 +/- 0.05); sqrt(1-t): pass={} gap {:.3e}",
            at_peak.pass, at_peak.gap, smooth.pass, smooth.gap
        ),
    )
}

fn interior_kink() -> Outcome {
    let u = kink();
    let report = analyze(&u);
    let kinks: Vec<_> = report.singulars.iter().filter(|s| !s.core_edge).collect();
    let mut ok = kinks.len() == 1 && kinks[0].kind == SingularKind::Kink;
    let mut notes = Vec::new();
    for p in [0.5, 0.25] {
        // negative control: the plain smoother carries the kink to x0 + w_p^-(level)
        let wp = w(p);
        let plain = nabla(&u, &wp);
        let mapped = kinks[0].x + wp.sides().minus.value(kinks[0].level);
        let neg = &check_differentiable(&plain, &[mapped], DIFF_TOL).unwrap()[0];
        // positive control: synthesized smoother, at mapped singular points and core edges
        let s = smooth_once(&u, p, &report).unwrap();
        let ws = s.smoother.sides();
        let mut pts: Vec<f64> = report
            .singulars
            .iter()
            .map(|k| k.x + if k.x <= u.core()[0] { ws.minus.value(k.level) } else { ws.plus.value(k.level) })
            .collect();
        pts.extend(s.result.core());
        let pos = check_differentiable(&s.result, &pts, DIFF_TOL).unwrap();
        let pos_gap = pos.iter().map(|v| v.gap).fold(0.0, f64::max);
        ok &= !neg.pass && pos.iter().all(|v| v.pass);
        notes.push(format!("p={p}: plain gap {:.3} fails={}, synthesized max gap {pos_gap:.2e}", neg.gap, !neg.pass));
    }
    outcome(ok, notes.join("; "))
}

fn jump_removed() -> Outcome {
    let u = jump();
    let report = analyze(&u);
    let s = smooth_once(&u, 0.5, &report).unwrap();
    let probes = probe_points(&s.smoother, &report, &s.result);
    let verdicts = check_differentiable(&s.result, &probes, DIFF_TOL).unwrap();
    let diff_ok = verdicts.iter().all(|v| v.pass);
    let h = 1e-5;
    let [lo, hi] = s.result.support();
    let n = ((hi - lo) / h) as usize;
    let mut prev = s.result.membership(lo + h);
    let mut max_step: f64 = 0.0;
    for i in 2..n {
        let m = s.result.membership(lo + i as f64 * h);
        max_step = max_step.max((m - prev).abs());
        prev = m;
    }
    outcome(
        diff_ok && max_step <= 10.0 * h,
        format!("{} probes pass={diff_ok}; max adjacent gap {max_step:.3e} (<= {:.0e})", verdicts.len(), 10.0 * h),
    )
}

fn convergence() -> (Outcome, String) {
    let schedule: Vec<f64> = (1..=10).map(|n| 0.5_f64.powi(n)).collect();
    let mut fails = Vec::new();
    let mut literal_fails = 0;
    for (name, u) in corpus() {
        let rows = approximate(&u, &schedule, DIFF_TOL).unwrap();
        let check = |rows: &[ConvergenceRow]| {
            rows.len() == 10
                && rows.iter().all(|r| r.diff_ok && r.d <= r.p + 1e-9)
                && rows.windows(2).all(|w| w[1].d <= w[0].d)
        };
        if !check(&rows) {
            fails.push(name);
        }
        // the same probes with unscaled finite-difference steps
        let report = analyze(&u);
        for &p in &schedule {
            let s = smooth_once(&u, p, &report).unwrap();
            let probes = probe_points(&s.smoother, &report, &s.result);
            if !check_differentiable(&s.result, &probes, DIFF_TOL).unwrap().iter().all(|v| v.pass) {
                literal_fails += 1;
            }
        }
    }
    let n = corpus().len();
    (
        outcome(fails.is_empty(), format!("{n} fixtures x 10 radii, failing fixtures {fails:?}")),
        format!("unscaled step ladder: {literal_fails} of {} rows fail the probe", n * 10),
    )
}

fn structure() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, u) in corpus() {
        let mut prev = u.alpha_cut(0.0);
        for i in 1..=100 {
            let cut = u.alpha_cut(i as f64 / 100.0);
            if !prev.contains(&cut) {
                ok = false;
                notes.push(format!("{name}: cuts not nested"));
            }
            prev = cut;
        }
        let back = FuzzyNumber::from_side_functions(&u.to_side_functions()).unwrap();
        let err = (0..=100)
            .map(|i| {
                let (a, b) = (u.alpha_cut(i as f64 / 100.0), back.alpha_cut(i as f64 / 100.0));
                (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
            })
            .fold(0.0, f64::max);
        if err > 1e-10 {
            ok = false;
            notes.push(format!("{name}: round trip {err:.2e}"));
        }
        let r = analyze(&u);
        if (r.in_f_t && !r.in_f_n) || (r.in_f_d && !(r.in_f_c && r.in_f_n)) {
            ok = false;
            notes.push(format!("{name}: family flags"));
        }
    }
    let mut z_err: f64 = 0.0;
    for p in [0.25, 1.0, 2.0] {
        let (a, b) = (z(Generator::sqrt_one_minus(), p), w(p));
        for i in 0..=1000 {
            let x = -p + 2.0 * p * i as f64 / 1000.0;
            z_err = z_err.max((a.membership(x) - b.membership(x)).abs());
        }
    }
    ok &= z_err <= 1e-10;
    notes.push(format!("sqrt generator vs w_p {z_err:.2e} (tol 1e-10)"));
    outcome(ok, notes.join("; "))
}

fn cli_determinism() -> Outcome {
    let fixtures = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let kink = fixtures.join("kink.fz");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fuzzsmooth"))
            .args(["converge", kink.to_str().unwrap(), "--schedule", "geometric:0.5,4"])
            .env_remove("FUZZ_TOL")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same = a.status.success() && a.stdout == b.stdout;
    let mut round_trip = true;
    for name in ["tri.fz", "kink.fz", "jump.fz", "w1.fz"] {
        let text = std::fs::read_to_string(fixtures.join(name)).unwrap();
        let once = to_json(&parse_file(&text).unwrap());
        round_trip &= to_json(&parse_file(&once).unwrap()) == once;
    }
    outcome(same && round_trip, format!("converge byte-identical={same}; round trip identical={round_trip}"))
}

#[test]
fn acceptance() {
    let (conv, literal) = {
        let mut info = String::new();
        let o = timed(Some(Duration::from_secs(10)), || {
            let (o, i) = convergence();
            info = i;
            o
        });
        (o, info)
    };
    let results = [
        ("1 convolution identity", timed(Some(Duration::from_secs(5)), convolution_identity)),
        ("2 metric exactness", timed(Some(Duration::from_secs(1)), metric_exactness)),
        ("3 smoothed peak", timed(None, smooth_peak)),
        ("4 generator contrast", timed(None, generator_contrast)),
        ("5 interior kink", timed(None, interior_kink)),
        ("6 jump", timed(None, jump_removed)),
        ("7 convergence", conv),
        ("8 structure", timed(None, structure)),
        ("9 cli determinism", timed(None, cli_determinism)),
    ];
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("info 7: {literal}");
    let failed: Vec<_> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
