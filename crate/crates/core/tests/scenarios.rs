use std::f64::consts::{FRAC_PI_6, PI};

use modular_sl3::anosov::{
    anosov_verdict, cartan_gap_scan, default_theta, midpoint_sequence, morse_flat_check,
    peripheral_growth, straightness_report, triangle_report, GrowthModel, Verdict, VerdictConfig,
};
use modular_sl3::charvar::{
    self, act_word, baba, rep_from_coords, schwartz_t, Coordinates, Representation,
};
use modular_sl3::flats::ModelInterval;
use modular_sl3::modgroup::{
    f2_to_mod, random_f2_geodesic, random_reduced_word, F2Letter, GeodesicWindow,
};
use modular_sl3::symspace::distance;
use modular_sl3::GeomError;

fn rep(s: f64, t: f64, theta: f64) -> Representation {
    rep_from_coords(&Coordinates::new(s, t, theta).unwrap())
}

fn on_surface(s: f64, theta: f64) -> Representation {
    rep(s, schwartz_t(s, theta).unwrap(), theta)
}

#[test]
fn reducible_triangle_matches_hyperbolic_trigonometry() {
    // At s = 0 the orbit lies in a totally geodesic hyperbolic plane, scaled
    // by √2, where ρ(b) rotates about the identity and x sits at distance t.
    let t: f64 = 2.0;
    let report = triangle_report(&rep(0.0, t, 0.9)).unwrap();
    let oracle = 2.0 * (1.0 / (3f64.sqrt() * t.cosh())).atan();
    for a in report.angles {
        assert!((a - oracle).abs() < 1e-6, "{a} vs {oracle}");
    }
    let side = 2f64.sqrt() * 2.0 * (t.sinh() * (PI / 3.0).sin()).asinh();
    for s in report.sides {
        assert!((s - report.sides[0]).abs() < 1e-9);
        assert!((s - side).abs() < 1e-9, "{s} vs {side}");
    }
}

#[test]
fn triangle_angle_shrinks_with_t() {
    let angles: Vec<f64> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&t| triangle_report(&rep(1.0, t, 0.5)).unwrap().angles[0])
        .collect();
    assert!(angles.windows(2).all(|w| w[1] < w[0]), "{angles:?}");
}

#[test]
fn triangle_degenerates_at_origin() {
    assert!(matches!(
        triangle_report(&rep(0.0, 0.0, 0.3)),
        Err(GeomError::DegenerateTriangle(_))
    ));
}

#[test]
fn cyclic_window_has_constant_spacing() {
    let r = rep(0.7, 2.5, 1.1);
    let seq = midpoint_sequence(&r, &GeodesicWindow::power(F2Letter::G1, 10)).unwrap();
    let sp = seq.spacings().unwrap();
    let direct = distance(&seq.midpoint(&r, 0).unwrap(), &seq.midpoint(&r, 1).unwrap()).unwrap();
    for d in &sp {
        assert!((d - sp[0]).abs() < 1e-8, "{sp:?}");
    }
    assert!((sp[0] - direct).abs() < 1e-8);
}

#[test]
fn shortest_window_has_one_triple() {
    let r = rep(0.7, 2.5, 1.1);
    let seq = midpoint_sequence(&r, &random_f2_geodesic(3, 4)).unwrap();
    assert_eq!(seq.len(), 3);
    assert!(seq.zeta_angle_at(1).is_ok());
}

#[test]
fn midpoints_are_equivariant() {
    let r = rep(0.6, 1.8, 0.4);
    let window = random_f2_geodesic(8, 21);
    let w = random_reduced_word(3, 5, 2);
    let seq = midpoint_sequence(&r, &window).unwrap();
    let moved = midpoint_sequence(&r, &window.translated(&w)).unwrap();
    let g = f2_to_mod(&w);
    for n in 0..seq.len() {
        let image = g.mul(seq.midpoint_word(n));
        assert_eq!(&image, moved.midpoint_word(n));
    }
    // near the base point the plain action agrees as well
    let image = act_word(&r, &g, &seq.midpoint(&r, 0).unwrap()).unwrap();
    assert!(distance(&image, &moved.midpoint(&r, 0).unwrap()).unwrap() < 1e-8);
}

#[test]
fn straight_far_from_the_fuchsian_locus() {
    let theta = ModelInterval::around_zeta(0.3).unwrap();
    let seq = midpoint_sequence(&rep(1.0, 6.0, 0.5), &random_f2_geodesic(12, 7)).unwrap();
    let report = straightness_report(&seq, &theta).unwrap();
    assert!(
        PI - report.min_zeta_angle < 0.2,
        "{}",
        report.min_zeta_angle
    );
    assert!((report.type_range.0 - FRAC_PI_6).abs() < 0.1);
    assert!((report.type_range.1 - FRAC_PI_6).abs() < 0.1);
    assert!(report.theta_regular);
}

#[test]
fn near_fuchsian_sequences_are_flagged() {
    let theta = default_theta();
    let far = straightness_report(
        &midpoint_sequence(&rep(1.0, 6.0, 0.5), &random_f2_geodesic(12, 7)).unwrap(),
        &theta,
    )
    .unwrap();
    let near = midpoint_sequence(&rep(1.0, 0.05, 0.5), &random_f2_geodesic(12, 7))
        .and_then(|s| straightness_report(&s, &theta));
    match near {
        Ok(r) => assert!(
            !r.theta_regular || r.min_spacing < 0.5 * far.min_spacing,
            "types {:?}, spacing {}",
            r.type_range,
            r.min_spacing
        ),
        Err(e) => assert!(matches!(e, GeomError::NotRegular(_)), "{e}"),
    }
}

#[test]
fn gap_scan_examples() {
    let anosov = cartan_gap_scan(&rep(1.0, 6.0, 0.5), 10, 200_000, 0).unwrap();
    assert!(!anosov.sampled);
    assert_eq!(anosov.records.len(), 1 + 118_096);
    assert_eq!(anosov.records[0].gap(), 0.0);
    assert!(anosov.slope > 0.0);
    assert!(anosov.min_residual >= -1e-9);

    let fuchsian = cartan_gap_scan(&rep(0.0, 3f64.ln() / 2.0, 0.5), 8, 20_000, 0).unwrap();
    assert!(
        fuchsian.slope < 0.1 * anosov.slope,
        "{} vs {}",
        fuchsian.slope,
        anosov.slope
    );
}

#[test]
fn peripheral_growth_examples() {
    let on = peripheral_growth(&on_surface(1.0, 0.5), 200).unwrap();
    assert_eq!(on.model, GrowthModel::Logarithmic);
    assert!((1.5..=2.5).contains(&on.kappa), "{}", on.kappa);

    let off = rep(1.0, 3.0, 0.5);
    assert!(charvar::trace_of(&off, &baba()).unwrap() < -1.0);
    assert_eq!(
        peripheral_growth(&off, 200).unwrap().model,
        GrowthModel::Linear
    );

    assert!(matches!(
        peripheral_growth(&off, 3),
        Err(GeomError::Precondition(_))
    ));
}

#[test]
fn morse_examples() {
    let r = rep(1.0, 6.0, 0.5);
    let m = morse_flat_check(&r, &random_f2_geodesic(12, 0), &default_theta()).unwrap();
    assert!(m.max_distance.is_finite());
    assert!(
        m.max_distance < 0.01 * m.min_spacing,
        "{} vs {}",
        m.max_distance,
        m.min_spacing
    );

    let cyclic = morse_flat_check(
        &rep(0.7, 2.5, 1.1),
        &GeodesicWindow::power(F2Letter::G1, 10),
        &default_theta(),
    )
    .unwrap();
    // the flat is the axis flat of ρ(g₁), so every midpoint sits at the same depth
    for d in &cyclic.distances {
        assert!(
            (d - cyclic.distances[0]).abs() < 1e-6,
            "{:?}",
            cyclic.distances
        );
    }

    // at the type I Fuchsian point the midpoints stray from the flat on the
    // scale of their spacing
    let fuchsian = rep(0.0, 3f64.ln() / 2.0, 0.5);
    if let Ok(m) = morse_flat_check(&fuchsian, &random_f2_geodesic(12, 0), &default_theta()) {
        assert!(m.max_distance > 0.25 * m.min_spacing, "{m:?}");
    }
}

#[test]
fn verdict_examples() {
    let cfg = VerdictConfig::default();
    let v = |s, t, th| anosov_verdict(&Coordinates::new(s, t, th).unwrap(), &cfg).unwrap();
    assert_eq!(v(1.0, 6.0, 0.5).verdict, Verdict::EvidenceAnosov);
    assert_eq!(
        v(1.0, schwartz_t(1.0, 0.5).unwrap(), 0.5).verdict,
        Verdict::EvidenceDegenerate
    );
    assert_ne!(v(0.5, 0.2, 0.5).verdict, Verdict::EvidenceAnosov);
    assert_eq!(v(1.0, 6.0, 0.5), v(1.0, 6.0, 0.5));
}
