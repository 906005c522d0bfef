mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use sixj::b6j::*;
use sixj::complexfn::{log_double_sine, ModularParam};
use sixj::geometry::*;
use std::f64::consts::PI;

const I: C = C::new(0.0, 1.0);

fn fast() -> QuadratureConfig {
    QuadratureConfig { tol: 1e-9, ..Default::default() }
}

fn ads_instance() -> SixTuple {
    SixTuple::lengths([1.0, 1.0, 1.0, 1.0, 1.0, 4.5]).unwrap()
}

/// Admissible parameters at `b` from random hyperbolic angles and AdS lengths.
fn random_params(seed: u64, n: usize, b: f64) -> Vec<B6jParams> {
    let mut out = Vec::new();
    let mut r = rng(seed);
    let hyp = hyperbolic_angle_instances(seed, n);
    let ads = lengths_of_class(&mut r, TetraClass::AntiDeSitter, n);
    for k in 0..n {
        let e = if k % 2 == 0 { Entries::HypAngles(hyp[k]) } else { Entries::Lengths(ads[k]) };
        if let Ok(p) = make_params(&e, b) {
            out.push(p);
        }
    }
    out
}

/// Composite Simpson along `Re u = c`, with the double sine called directly.
fn simpson_oracle(p: &B6jParams, c: f64, t: f64, n: usize) -> C {
    let mp = ModularParam::new(p.b).unwrap();
    let ls = |z: C| log_double_sine(z, mp).unwrap();
    let f = |y: f64| {
        let u = C::new(c, y);
        let g: C = p.t.iter().map(|ti| ls(u - ti)).sum::<C>() + p.q.iter().map(|qj| ls(qj - u)).sum::<C>();
        g.exp() * I
    };
    let h = 2.0 * t / n as f64;
    let mut s = f(-t) + f(t);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(-t + k as f64 * h);
    }
    let mut pre = C::new(0.0, 0.0);
    for ti in &p.t {
        for qj in &p.q {
            pre += ls(qj - ti);
        }
    }
    (-0.5 * pre).exp() * s * h / 3.0
}

#[test]
fn length_entries_sit_on_the_half_q_line() {
    let b = 0.3;
    let p = make_params(&Entries::Lengths(SixTuple::lengths([1.0; 6]).unwrap()), b).unwrap();
    let q = b + 1.0 / b;
    for a in p.a {
        assert!((a - C::new(q / 2.0, 1.0 / (0.6 * PI))).norm() < 1e-14);
    }
    // all Re a_k = Q/2, so every gap is Q/2
    for row in p.gaps() {
        for g in row {
            assert!((g - q / 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hyperbolic_angle_gaps_stay_inside() {
    let b = 0.3;
    let q = b + 1.0 / b;
    for th in hyperbolic_angle_instances(3, 30) {
        let p = make_params(&Entries::HypAngles(th), b).unwrap();
        for row in p.gaps() {
            for g in row {
                assert!(g > b / 2.0 - 1e-12 && g < q - b / 2.0 + 1e-12, "gap {g}");
            }
        }
    }
}

#[test]
fn ads_angle_gaps_are_two_valued() {
    let b = 0.1;
    let q = b + 1.0 / b;
    let canonical = angles_from_lengths(&SixTuple::lengths([4.5, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap()).unwrap();
    assert!(matches!(canonical.angle_family().unwrap(), AngleFamily::AntiDeSitter { .. }));
    for th in ads_angle_instances(5, 10).into_iter().chain([canonical]) {
        let p = make_params(&Entries::AdSAngles(th), b).unwrap();
        for t in p.t {
            assert!((t.re - (2.0 * q - b / 2.0)).abs() < 1e-9);
        }
        for row in p.gaps() {
            for g in row {
                assert!((g - b / 2.0).abs() < 1e-9 || (g - (q - b / 2.0)).abs() < 1e-9, "gap {g}");
            }
        }
    }
}

#[test]
fn entries_of_the_wrong_kind_are_rejected() {
    let l = SixTuple::lengths([1.0; 6]).unwrap();
    assert!(make_params(&Entries::HypAngles(l), 0.3).is_err());
    let th = SixTuple::hyperbolic_angles([1.0; 6]).unwrap();
    assert!(make_params(&Entries::AdSAngles(th), 0.3).is_err());
    assert!(make_params(&Entries::Lengths(th), 0.3).is_err());
    assert!(make_params(&Entries::Lengths(l), 1.5).is_err());
}

#[test]
fn inadmissible_tuples_are_rejected() {
    let a = [C::new(0.1, 0.0); 6];
    assert!(matches!(B6jParams::new(a, 0.5), Err(sixj::Error::Domain(_))));
}

#[test]
fn invalid_contours_are_rejected() {
    let p = make_params(&Entries::Lengths(ads_instance()), 0.5).unwrap();
    let (lo, hi) = p.strip();
    assert!(evaluate(&p, &ContourSpec::VerticalLine { c: hi + 0.1 }, &fast()).is_err());
    assert!(evaluate(&p, &ContourSpec::VerticalLine { c: lo }, &fast()).is_err());
    // a detour that pushes the crossing at Im q₄ = 0 past Re q₄
    let bad = ContourSpec::Deformed {
        c: 0.5 * (lo + hi),
        l: 10.0,
        waypoints: vec![Waypoint { im_lo: -0.5, im_hi: 0.5, re_offset: hi - lo }],
    };
    assert!(bad.validate(&p).is_err());
    let unordered = ContourSpec::Deformed {
        c: 0.5 * (lo + hi),
        l: 10.0,
        waypoints: vec![
            Waypoint { im_lo: 1.0, im_hi: 2.0, re_offset: 0.0 },
            Waypoint { im_lo: -2.0, im_hi: -1.0, re_offset: 0.0 },
        ],
    };
    assert!(unordered.validate(&p).is_err());
}

#[test]
fn matches_direct_simpson_oracle() {
    for (e, b) in [
        (Entries::Lengths(SixTuple::lengths([1.0; 6]).unwrap()), 0.5),
        (Entries::HypAngles(SixTuple::hyperbolic_angles([0.5, 0.7, 0.9, 0.5, 0.7, 0.9]).unwrap()), 0.5),
        (Entries::Lengths(ads_instance()), 0.6),
    ] {
        let p = make_params(&e, b).unwrap();
        let ev = evaluate_default(&p, &QuadratureConfig::default()).unwrap();
        let ContourSpec::VerticalLine { c } = ev.contour else { panic!() };
        let oracle = simpson_oracle(&p, c, 8.0, 4000);
        assert!((ev.value - oracle).norm() < 1e-8 * oracle.norm(), "{} vs {}", ev.value, oracle);
    }
}

#[test]
fn frozen_values() {
    let cfg = QuadratureConfig { tol: 1e-12, ..Default::default() };
    let cases = [
        (Entries::Lengths(SixTuple::lengths([1.0; 6]).unwrap()), 0.5, -8.188440108711761),
        (Entries::HypAngles(SixTuple::hyperbolic_angles([0.5, 0.7, 0.9, 0.5, 0.7, 0.9]).unwrap()), 0.3, -11.17463950909848),
        (Entries::Lengths(ads_instance()), 0.4, -19.18885871272332),
    ];
    for (e, b, re) in cases {
        let ev = evaluate_default(&make_params(&e, b).unwrap(), &cfg).unwrap();
        assert!((ev.log_value.re - re).abs() < 1e-9, "{} vs {re}", ev.log_value.re);
        // purely imaginary in this convention: the vertical line gives du = i dy
        assert!((ev.log_value.im.rem_euclid(PI) - PI / 2.0).abs() < 1e-9);
    }
}

#[test]
fn contour_independence_50_instances() {
    let ps = random_params(11, 60, 0.5);
    assert!(ps.len() >= 50);
    for p in ps.iter().take(50) {
        let e1 = evaluate(p, &ContourSpec::vertical_at(p, 0.35), &fast()).unwrap();
        let e2 = evaluate(p, &ContourSpec::vertical_at(p, 0.65), &fast()).unwrap();
        let diff = (e1.value - e2.value).norm();
        assert!(diff <= 3.0 * (e1.abs_error_estimate + e2.abs_error_estimate), "{diff:e}");
    }
}

#[test]
fn deformed_contour_agrees_with_vertical_line() {
    let l = ads_instance();
    let th = angles_from_lengths(&l).unwrap();
    for (e, b) in [(Entries::AdSAngles(th), 0.1), (Entries::AdSAngles(th), 0.15), (Entries::Lengths(l), 0.4)] {
        let p = make_params(&e, b).unwrap();
        let d = ContourSpec::deformed(&p, 0.5, 0.5).unwrap();
        assert!(matches!(&d, ContourSpec::Deformed { waypoints, .. } if waypoints.iter().any(|w| w.re_offset != 0.0)));
        let ed = evaluate(&p, &d, &fast()).unwrap();
        let ev = evaluate_default(&p, &fast()).unwrap();
        let diff = log_rel_diff(ed.log_value, ev.log_value);
        assert!(diff < 3.0 * (ed.rel_error_estimate + ev.rel_error_estimate), "{diff:e}");
    }
}

#[test]
fn tail_bound_is_sound() {
    let p = make_params(&Entries::Lengths(ads_instance()), 0.5).unwrap();
    let c = ContourSpec::vertical_mid(&p);
    let auto = evaluate(&p, &c, &QuadratureConfig::default()).unwrap();
    // shorter truncations, past the peak, so that the tail dominates
    for f in [0.5, 0.6, 0.7] {
        let t = f * auto.truncation.1;
        let short = evaluate(&p, &c, &QuadratureConfig { truncation: Some(t), ..Default::default() }).unwrap();
        let long = evaluate(&p, &c, &QuadratureConfig { truncation: Some(2.0 * t), ..Default::default() }).unwrap();
        let diff = (short.value - long.value).norm();
        assert!(diff < short.tail_bound, "T = {t}: {diff:e} vs {:e}", short.tail_bound);
        // and the bound is not vacuous
        assert!(short.tail_bound < 1e3 * diff);
    }
    // automatic truncation: doubling moves the value by less than the error estimate
    let doubled =
        evaluate(&p, &c, &QuadratureConfig { truncation: Some(2.0 * auto.truncation.1), ..Default::default() })
            .unwrap();
    assert!((auto.value - doubled.value).norm() < auto.abs_error_estimate + doubled.abs_error_estimate);
}

#[test]
fn tetrahedral_symmetry_trivial_and_random() {
    let p = make_params(&Entries::Lengths(SixTuple::lengths([0.7; 6]).unwrap()), 0.5).unwrap();
    let r = check_tetrahedral_symmetry(&p, &fast()).unwrap();
    assert_eq!(r.max_rel_deviation, 0.0);
    for p in random_params(21, 4, 0.5) {
        let r = check_tetrahedral_symmetry(&p, &fast()).unwrap();
        assert!(r.max_rel_deviation < 1e-7, "{r:?}");
        assert!(r.sign_flips.iter().all(|f| !f));
    }
}

#[test]
fn reflection_symmetry() {
    // a_k = Q/2 is a fixed point
    let b = 0.5;
    let q = b + 1.0 / b;
    let mut a = [C::new(q / 2.0, 0.3); 6];
    a[2] = C::new(q / 2.0, 0.0);
    let p = B6jParams::new(a, b).unwrap();
    assert_eq!(p.reflected(2).unwrap(), p);
    assert_eq!(check_reflection_symmetry(&p, 2, &fast()).unwrap().max_rel_deviation, 0.0);
    // lengths: Q − a_k flips i l_k to −i l_k
    let l = ads_instance();
    let p = make_params(&Entries::Lengths(l), b).unwrap();
    let r = p.reflected(5).unwrap();
    assert!((r.a[5] - C::new(q / 2.0, -l.reals()[5] / (2.0 * PI * b))).norm() < 1e-14);
    let rep = check_reflection_symmetry(&p, 5, &fast()).unwrap();
    assert!(rep.max_rel_deviation < 1e-7, "{rep:?}");
    for (k, p) in random_params(31, 6, 0.5).iter().enumerate() {
        let rep = check_reflection_symmetry(p, k % 6, &fast()).unwrap();
        assert!(rep.max_rel_deviation < 1e-7, "{rep:?}");
    }
}

#[test]
fn reflection_preserves_admissibility() {
    for p in random_params(41, 40, 0.4) {
        for k in 0..6 {
            p.reflected(k).unwrap();
        }
    }
}

#[test]
fn predictions_have_the_stated_shape() {
    let l = ads_instance();
    let th = angles_from_lengths(&l).unwrap();
    let pa = asymptotic_prediction(&Geometry::AdSAngles(th), 0.1).unwrap();
    assert!((pa.value().norm() - pa.gram_det.powf(-0.25)).abs() < 1e-12 * pa.value().norm());
    let hyp = SixTuple::hyperbolic_angles([0.5, 0.7, 0.9, 0.5, 0.7, 0.9]).unwrap();
    let ph = asymptotic_prediction(&Geometry::Hyp(hyp), 0.2).unwrap();
    assert!(ph.value().im == 0.0 && ph.value().re > 0.0);
    let pl = asymptotic_prediction(&Geometry::AdSLengths(l), 0.1).unwrap();
    let cov = pl.phase_quantity.unwrap();
    let env = (-pl.exponent_quantity / (PI * 0.01)).exp() / pl.gram_det.powf(0.25);
    let osc = 2.0 * (cov / (PI * 0.01) + PI / 4.0).cos();
    assert!((pl.value().re - env * osc).abs() < 1e-12 * env);
    // class mismatches
    assert!(asymptotic_prediction(&Geometry::HypLengths(l), 0.1).is_err());
    assert!(asymptotic_prediction(&Geometry::AdSLengths(SixTuple::lengths([1.0; 6]).unwrap()), 0.1).is_err());
    assert!(asymptotic_prediction(&Geometry::FlatLengths(l), 0.1).is_err());
}

#[test]
fn hyperbolic_sweep_converges_to_half_i() {
    let th = SixTuple::hyperbolic_angles([0.5, 0.7, 0.9, 0.5, 0.7, 0.9]).unwrap();
    let g = Geometry::Hyp(th);
    let t = asymptotic_sweep(&g, &[0.3, 0.2, 0.15, 0.1], &fast()).unwrap();
    let devs: Vec<f64> = t.rows.iter().map(|r| r.normalized_deviation.unwrap()).collect();
    assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
    let s = t.normalized_loglog_slope.unwrap();
    assert!((1.5..=2.5).contains(&s), "{s}");
    for r in &t.rows {
        assert!((r.modulus_ratio - 0.5).abs() < 0.1);
        assert!((r.phase_difference.abs() - PI / 2.0).abs() < 1e-6);
    }
}

#[test]
fn sweep_rejects_bad_b_lists() {
    let g = Geometry::Hyp(SixTuple::hyperbolic_angles([1.0; 6]).unwrap());
    assert!(asymptotic_sweep(&g, &[0.1, 0.2], &fast()).is_err());
    assert!(asymptotic_sweep(&g, &[0.2, 0.01], &fast()).is_err());
}

#[test]
fn loglog_fit() {
    let pts: Vec<(f64, f64)> = [0.3f64, 0.2, 0.1].iter().map(|b| (b.ln(), (3.0 * b * b).ln())).collect();
    assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    assert!(fit_slope(&pts[..1]).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn admissibility_is_relabel_invariant(l in prop::array::uniform6(0.1f64..3.0), b in 0.1f64..0.9) {
        let p = make_params(&Entries::Lengths(SixTuple::lengths(l).unwrap()), b).unwrap();
        for perm in TETRAHEDRAL_FORMS {
            let q = p.permuted(&perm).unwrap();
            let mut t1: Vec<f64> = p.t.iter().map(|z| z.im).collect();
            let mut t2: Vec<f64> = q.t.iter().map(|z| z.im).collect();
            t1.sort_by(f64::total_cmp);
            t2.sort_by(f64::total_cmp);
            for (x, y) in t1.iter().zip(&t2) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prefactor_is_tetrahedrally_invariant(l in prop::array::uniform6(0.1f64..3.0)) {
        let p = make_params(&Entries::Lengths(SixTuple::lengths(l).unwrap()), 0.5).unwrap();
        let base = log_prefactor(&p).unwrap();
        for perm in TETRAHEDRAL_FORMS {
            let q = log_prefactor(&p.permuted(&perm).unwrap()).unwrap();
            prop_assert!((q - base).norm() < 1e-9);
        }
    }
}
