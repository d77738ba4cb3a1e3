//! Pulse invariants against an independent quadrature oracle, plus the
//! named regime-classification and zero-structure cases.

use ionlab::pulse::{Envelope, PulseClass, PulseShape};
use std::f64::consts::PI;

/// Plain recursive adaptive Simpson, independent of the library's
/// Gauss-Legendre machinery.
fn simpson_rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Integrate across kink positions by splitting there first.
fn simpson_split(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut edges: Vec<f64> = vec![a];
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], tol))
        .sum()
}

fn oracle_b0(p: &PulseShape, t: f64, breaks: &[f64]) -> f64 {
    simpson_split(&|s| p.value(s), 0.0, t, breaks, 1e-13)
}

/// Second-form displacement from the identity c0 = t b0 - int s f(s) ds.
fn oracle_c0(p: &PulseShape, t: f64, breaks: &[f64]) -> f64 {
    let moment = simpson_split(&|s| s * p.value(s), 0.0, t, breaks, 1e-13);
    t * p.momentum_transfer(t).unwrap() - moment
}

fn check_against_oracle(p: &PulseShape, breaks: &[f64]) {
    let tau = p.duration();
    for frac in [0.13, 0.37, 0.5, 0.79, 1.0] {
        let t = frac * tau;
        let b = p.momentum_transfer(t).unwrap();
        let c = p.displacement(t).unwrap();
        let b_ref = oracle_b0(p, t, breaks);
        let c_ref = oracle_c0(p, t, breaks);
        let scale_b = 1.0 + b.abs();
        let scale_c = 1.0 + c.abs();
        assert!(
            (b - b_ref).abs() <= 1e-10 * scale_b,
            "b0({t}) = {b} vs oracle {b_ref}"
        );
        assert!(
            (c - c_ref).abs() <= 1e-10 * scale_c,
            "c0({t}) = {c} vs oracle {c_ref}"
        );
    }
}

#[test]
fn field_evaluation_basics() {
    let rect = PulseShape::rectangular(4.0).unwrap();
    assert_eq!(rect.field_at(5.0, 2.0).unwrap(), 5.0);
    assert_eq!(rect.field_at(5.0, -1.0).unwrap(), 0.0);
    assert_eq!(rect.field_at(5.0, 4.5).unwrap(), 0.0);
    assert!(rect.field_at(f64::NAN, 1.0).is_err());
    assert!(rect.field_at(1.0, f64::INFINITY).is_err());

    let cosp = PulseShape::cosine_cycles(1.0, 1).unwrap();
    assert!((cosp.field_at(1.0, PI).unwrap() + 1.0).abs() < 1e-15);
}

#[test]
fn rectangular_invariants_are_exact() {
    let tau = 3.0;
    let p = PulseShape::rectangular(tau).unwrap();
    assert!((p.momentum_transfer(tau).unwrap() - tau).abs() < 1e-14);
    assert!((p.displacement(tau).unwrap() - tau * tau / 2.0).abs() < 1e-14);
    assert_eq!(p.momentum_transfer(0.0).unwrap(), 0.0);
}

#[test]
fn full_cycle_cosine_invariants_vanish() {
    for cycles in [1u32, 3, 7] {
        let omega = 1.3;
        let p = PulseShape::cosine_cycles(omega, cycles).unwrap();
        let tau = p.duration();
        assert!(p.momentum_transfer(tau).unwrap().abs() < 1e-12);
        assert!(p.displacement(tau).unwrap().abs() < 1e-12);
    }
}

#[test]
fn single_cycle_sine_matches_closed_forms() {
    let omega = 1.7;
    let p = PulseShape::sine_cycles(omega, 1).unwrap();
    let tau = 2.0 * PI / omega;
    // b0(t) = (1 - cos wt)/w stays nonnegative, returns to 0 at tau
    for frac in [0.1, 0.33, 0.5, 0.75, 0.9] {
        let t = frac * tau;
        let want = (1.0 - (omega * t).cos()) / omega;
        let got = p.momentum_transfer(t).unwrap();
        assert!((got - want).abs() < 1e-13, "t={t}");
        assert!(got >= -1e-13);
    }
    assert!(p.momentum_transfer(tau).unwrap().abs() < 1e-13);
    // c0(tau) = 2 pi / w^2
    let c = p.displacement(tau).unwrap();
    assert!((c - 2.0 * PI / omega / omega).abs() < 1e-12, "c0 = {c}");
}

#[test]
fn analytic_kinds_match_quadrature_oracle() {
    let tau = 2.5;
    check_against_oracle(&PulseShape::rectangular(tau).unwrap(), &[]);
    check_against_oracle(
        &PulseShape::trapezoidal(tau, 0.25).unwrap(),
        &[0.625, 1.875],
    );
    check_against_oracle(&PulseShape::sine_squared(tau).unwrap(), &[]);
    check_against_oracle(&PulseShape::gaussian(tau, 1.2, 0.4).unwrap(), &[]);
    check_against_oracle(&PulseShape::cosine_cycles(2.0, 2).unwrap(), &[]);
    check_against_oracle(&PulseShape::sine_cycles(3.0, 1).unwrap(), &[]);
    check_against_oracle(
        &PulseShape::modulated(Envelope::SineSquared, tau, 4.0, 0.3).unwrap(),
        &[],
    );
    check_against_oracle(
        &PulseShape::modulated(Envelope::Trapezoidal { ramp_fraction: 0.2 }, tau, 5.0, 1.1)
            .unwrap(),
        &[0.5, 2.0],
    );
    check_against_oracle(
        &PulseShape::modulated(
            Envelope::Gaussian {
                center: 1.25,
                width: 0.5,
            },
            tau,
            6.0,
            0.0,
        )
        .unwrap(),
        &[],
    );
}

#[test]
fn sampled_waveform_integrates_its_interpolant() {
    let tau = 2.0;
    let n = 160;
    let values: Vec<f64> = (0..=n)
        .map(|i| {
            let t = tau * i as f64 / n as f64;
            (2.2 * t).sin() * (-0.5 * t).exp()
        })
        .collect();
    let p = PulseShape::sampled(tau, values).unwrap();
    let breaks: Vec<f64> = (1..n).map(|i| tau * i as f64 / n as f64).collect();
    check_against_oracle(&p, &breaks);
}

#[test]
fn train_places_segments_with_gaps() {
    let omega = 4.0;
    let cycle = PulseShape::cosine_cycles(omega, 1).unwrap();
    let t_cyc = cycle.duration();
    let gap = 1.0;
    let p = PulseShape::train(
        2.0 * t_cyc + gap,
        vec![(0.0, cycle.clone()), (t_cyc + gap, cycle)],
    )
    .unwrap();
    // field vanishes in the gap
    assert_eq!(p.value(t_cyc + 0.5 * gap), 0.0);
    let breaks = [t_cyc, t_cyc + gap];
    check_against_oracle(&p, &breaks);
    // both invariants return to zero at the end: two balanced segments
    let tau = p.duration();
    assert!(p.momentum_transfer(tau).unwrap().abs() < 1e-12);
    assert!(p.displacement(tau).unwrap().abs() < 1e-12);
}

#[test]
fn classification_of_the_three_reference_pulses() {
    let rect = PulseShape::rectangular(2.0).unwrap();
    let inv = rect.classify(1e-6).unwrap();
    assert_eq!(inv.class, PulseClass::Kicked);
    assert!((inv.b0_tau - 2.0).abs() < 1e-14);
    assert!((inv.a0 * inv.a0 - (inv.b0_tau.powi(2) + inv.c0_tau.powi(2))).abs() < 1e-14);

    let sine = PulseShape::sine_cycles(1.0, 1).unwrap();
    let inv = sine.classify(1e-6).unwrap();
    assert_eq!(inv.class, PulseClass::Displaced);
    assert!((inv.c0_tau - 2.0 * PI).abs() < 1e-10);

    let cosine = PulseShape::cosine_cycles(1.0, 3).unwrap();
    let inv = cosine.classify(1e-6).unwrap();
    assert_eq!(inv.class, PulseClass::Balanced);
    assert!(inv.b0_tau.abs() <= inv.b0_threshold);
    assert!(inv.c0_tau.abs() <= inv.c0_threshold);
}

#[test]
fn classification_is_scale_invariant() {
    let tau = 2.0;
    let n = 200;
    for lambda in [1e-6, 1.0, 1e6] {
        let values: Vec<f64> = (0..=n)
            .map(|i| {
                let t = tau * i as f64 / n as f64;
                lambda * (PI * t / tau).sin().powi(2)
            })
            .collect();
        let p = PulseShape::sampled(tau, values).unwrap();
        let inv = p.classify(1e-6).unwrap();
        assert_eq!(inv.class, PulseClass::Kicked, "lambda = {lambda}");
    }
}

#[test]
fn identically_zero_pulse_is_rejected() {
    let err = PulseShape::sampled(1.0, vec![0.0; 16]);
    assert!(err.is_err());
}

#[test]
fn zero_structure_of_multi_cycle_cosine() {
    let omega = 1.0;
    let cycles = 3u32;
    let p = PulseShape::cosine_cycles(omega, cycles).unwrap();
    let zs = p.zero_structure(512, 1e-8).unwrap();
    assert!(zs.flat_intervals.is_empty(), "{:?}", zs.flat_intervals);
    // zeros at t = 2 pi k / omega, k = 0..=cycles
    assert_eq!(zs.zeros.len(), cycles as usize + 1, "{:?}", zs.zeros);
    for (k, &z) in zs.zeros.iter().enumerate() {
        let want = 2.0 * PI * k as f64 / omega;
        assert!((z - want).abs() < 2.0 * p.duration() / (64.0 * 512.0) + 1e-9, "zero {k}: {z} vs {want}");
    }
    // partition: degenerate flats at both ends, one active stretch
    assert_eq!(zs.partition.len(), 3);
    assert!(zs.partition[0].flat && zs.partition[0].start == zs.partition[0].end);
    assert!(!zs.partition[1].flat);
}

#[test]
fn zero_structure_of_rectangular_pulse() {
    let p = PulseShape::rectangular(2.0).unwrap();
    let zs = p.zero_structure(512, 1e-6).unwrap();
    assert!(zs.flat_intervals.is_empty());
    assert_eq!(zs.zeros, vec![0.0]);
}

#[test]
fn zero_structure_of_gap_train() {
    let omega = 4.0;
    let cycle = PulseShape::cosine_cycles(omega, 1).unwrap();
    let t_cyc = cycle.duration();
    let gap = 2.0;
    let tau = 2.0 * t_cyc + gap;
    let p = PulseShape::train(tau, vec![(0.0, cycle.clone()), (t_cyc + gap, cycle)]).unwrap();
    let zs = p.zero_structure(1024, 1e-8).unwrap();
    assert_eq!(zs.flat_intervals.len(), 1, "{:?}", zs.flat_intervals);
    let (a, b) = zs.flat_intervals[0];
    assert!((a - t_cyc).abs() < 0.05 * gap, "flat start {a} vs {t_cyc}");
    assert!((b - (t_cyc + gap)).abs() < 0.05 * gap);
    // partition tiles [0, tau] and alternates
    let part = &zs.partition;
    assert_eq!(part[0].start, 0.0);
    assert_eq!(part.last().unwrap().end, tau);
    for w in part.windows(2) {
        assert_eq!(w[0].end, w[1].start);
        assert!(w[0].flat != w[1].flat);
    }
    assert_eq!(part.len() % 2, 1);
}

#[test]
fn two_form_identity_holds_across_kinds() {
    let tau = 3.0;
    let shapes: Vec<(PulseShape, Vec<f64>)> = vec![
        (PulseShape::rectangular(tau).unwrap(), vec![]),
        (PulseShape::trapezoidal(tau, 0.3).unwrap(), vec![0.9, 2.1]),
        (PulseShape::sine_squared(tau).unwrap(), vec![]),
        (PulseShape::gaussian(tau, 1.5, 0.5).unwrap(), vec![]),
        (PulseShape::sine_cycles(2.0, 1).unwrap(), vec![]),
    ];
    for (p, breaks) in &shapes {
        let tau = p.duration();
        for frac in [0.21, 0.5, 0.84, 1.0] {
            let t = frac * tau;
            let c = p.displacement(t).unwrap();
            let second_form = oracle_c0(p, t, breaks);
            assert!(
                (c - second_form).abs() <= 1e-10 * (1.0 + c.abs()),
                "{:?} at t={t}: {c} vs {second_form}",
                p.kind()
            );
        }
    }
}
