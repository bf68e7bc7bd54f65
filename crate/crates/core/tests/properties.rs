use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use modular_sl3::anosov::{cartan_gap_scan, default_theta, midpoint_sequence, straightness_report};
use modular_sl3::charvar::{
    self, baba, characteristic_polynomial, is_reducible, rep_from_coords, schwartz_t,
    trace_baba_closed_form, Coordinates,
};
use modular_sl3::flats::{
    cartan_projection, coords_from_point, iota, point_from_coords, project_to_parallel_set,
    segment_type, zeta_angle, ParallelCoords,
};
use modular_sl3::linalg::Mat3;
use modular_sl3::modgroup::{
    enumerate_f2, f2_to_mod, random_f2_geodesic, random_reduced_word, reduced_word_count, ModWord,
    Syllable,
};
use modular_sl3::symspace::{
    act, angle_at, compose, distance, exp_map, inversion_at, log_map, midpoint, spd_exp, spd_log,
    Isometry, Parity, Point,
};

fn sym(e: [f64; 6]) -> Mat3 {
    Mat3::new(e[0], e[1], e[2], e[1], e[3], e[4], e[2], e[4], e[5])
}

/// Eigenvalue ratio at most `e^{6·1.1} < 10⁶`.
fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform6(-1.1f64..1.1).prop_map(|e| spd_exp(&sym(e)).unwrap())
}

fn parity() -> impl Strategy<Value = Parity> {
    any::<bool>().prop_map(|b| {
        if b {
            Parity::Preserving
        } else {
            Parity::Reversing
        }
    })
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (prop::array::uniform9(-0.8f64..0.8), parity()).prop_map(|(e, par)| {
        let m = Mat3::identity() + Mat3::from_row_slice(&e);
        let m = if m.determinant() < 0.0 { -m } else { m };
        Isometry::normalized(m, par).unwrap()
    })
}

fn rotation() -> impl Strategy<Value = Mat3> {
    prop::array::uniform9(-1.0f64..1.0).prop_map(|e| {
        let q = Mat3::from_row_slice(&e).qr().q();
        if q.determinant() < 0.0 {
            -q
        } else {
            q
        }
    })
}

fn parallel_coords() -> impl Strategy<Value = ParallelCoords> {
    (0.1f64..3.0, 0.0..PI, -1.0f64..1.0, 0.1f64..3.0, 0.0..PI).prop_map(|(s, alpha, r, t, beta)| {
        ParallelCoords {
            s,
            alpha,
            r,
            t,
            beta,
        }
    })
}

fn coordinates() -> impl Strategy<Value = Coordinates> {
    (0.0f64..3.0, 0.0f64..3.0, 0.0..PI).prop_map(|(s, t, th)| Coordinates::new(s, t, th).unwrap())
}

fn raw_word() -> impl Strategy<Value = Vec<Syllable>> {
    prop::collection::vec(
        prop::sample::select(vec![Syllable::A, Syllable::B, Syllable::B2]),
        0..24,
    )
}

fn max_abs(m: &Mat3) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn action_is_associative(g in isometry(), h in isometry(), p in point()) {
        let lhs = act(&compose(&g, &h), &p).unwrap();
        let rhs = act(&g, &act(&h, &p).unwrap()).unwrap();
        prop_assert!(distance(&lhs, &rhs).unwrap() < 1e-10);
    }

    #[test]
    fn inversion_fixes_its_point_and_is_involutive(x in point(), p in point()) {
        let s = inversion_at(&x);
        prop_assert!(distance(&act(&s, &x).unwrap(), &x).unwrap() < 1e-10);
        let back = act(&s, &act(&s, &p).unwrap()).unwrap();
        prop_assert!(distance(&back, &p).unwrap() < 1e-10);
        prop_assert!(max_abs(&(compose(&s, &s).matrix() - Mat3::identity())) < 1e-10);
    }

    #[test]
    fn distance_is_a_metric(p in point(), q in point(), r in point()) {
        let (pq, qp) = (distance(&p, &q).unwrap(), distance(&q, &p).unwrap());
        prop_assert!((pq - qp).abs() < 1e-9);
        prop_assert!(distance(&p, &p).unwrap() < 1e-9);
        let (qr, pr) = (distance(&q, &r).unwrap(), distance(&p, &r).unwrap());
        prop_assert!(pr <= pq + qr + 1e-9);
    }

    #[test]
    fn triangles_are_thin(p in point(), q in point(), r in point()) {
        prop_assume!(distance(&p, &q).unwrap() > 1e-3 && distance(&q, &r).unwrap() > 1e-3
            && distance(&p, &r).unwrap() > 1e-3);
        let sum = angle_at(&p, &q, &r).unwrap() + angle_at(&q, &r, &p).unwrap() + angle_at(&r, &p, &q).unwrap();
        prop_assert!(sum <= PI + 1e-8);
    }

    #[test]
    fn midpoint_is_symmetric_and_equivariant(p in point(), q in point(), g in isometry()) {
        let m = midpoint(&p, &q).unwrap();
        prop_assert!(distance(&m, &midpoint(&q, &p).unwrap()).unwrap() < 1e-10);
        let (dp, dq) = (distance(&m, &p).unwrap(), distance(&m, &q).unwrap());
        prop_assert!((dp - dq).abs() < 1e-9);
        let moved = midpoint(&act(&g, &p).unwrap(), &act(&g, &q).unwrap()).unwrap();
        prop_assert!(distance(&moved, &act(&g, &m).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn exp_and_log_are_inverse(e in prop::array::uniform6(-1.1f64..1.1), p in point(), q in point()) {
        let v = sym(e);
        let v = v - Mat3::identity() * (v.trace() / 3.0);
        let back = spd_log(&spd_exp(&v).unwrap().matrix()).unwrap();
        prop_assert!(max_abs(&(back.matrix() - v)) < 1e-9);
        let w = log_map(&p, &q).unwrap();
        prop_assert!(distance(&exp_map(&p, &w).unwrap(), &q).unwrap() < 1e-9);
    }

    #[test]
    fn cartan_projection_is_bi_invariant(e in prop::array::uniform9(-1.0f64..1.0), k in rotation(), k2 in rotation()) {
        let g = Mat3::identity() * 1.5 + Mat3::from_row_slice(&e);
        prop_assume!(g.determinant().abs() > 1e-3);
        let a = cartan_projection(&g).unwrap();
        let b = cartan_projection(&(k * g * k2)).unwrap();
        prop_assert!(a.lambda.iter().zip(b.lambda.iter()).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn segment_type_is_invariant(p in point(), q in point(), g in isometry()) {
        prop_assume!(distance(&p, &q).unwrap() > 1e-3);
        let g = if g.parity() == Parity::Reversing {
            compose(&g, &inversion_at(&Point::identity()))
        } else {
            g
        };
        let phi = segment_type(&p, &q).unwrap();
        let moved = segment_type(&act(&g, &p).unwrap(), &act(&g, &q).unwrap()).unwrap();
        prop_assert!((phi.value() - moved.value()).abs() < 1e-8);
        let flipped = segment_type(&p, &act(&inversion_at(&p), &q).unwrap()).unwrap();
        prop_assert!((iota(phi).value() - flipped.value()).abs() < 1e-8);
    }

    #[test]
    fn zeta_angle_is_symmetric(p in point(), q in point(), r in point()) {
        prop_assume!(distance(&p, &q).unwrap() > 1e-2 && distance(&p, &r).unwrap() > 1e-2);
        prop_assert!(zeta_angle(&p, &q, &q).unwrap().abs() < 1e-8);
        let (a, b) = (zeta_angle(&p, &q, &r).unwrap(), zeta_angle(&p, &r, &q).unwrap());
        prop_assert!((a - b).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parallel_set_projection(c in parallel_coords(), others in prop::collection::vec(parallel_coords(), 8)) {
        let q = point_from_coords(&c).unwrap();
        let once = project_to_parallel_set(&q).unwrap();
        let twice = project_to_parallel_set(&once.point).unwrap();
        prop_assert!(distance(&once.point, &twice.point).unwrap() < 1e-8);
        for mut o in others {
            o.s = 0.0;
            let competitor = point_from_coords(&o).unwrap();
            prop_assert!(once.distance <= distance(&q, &competitor).unwrap() + 1e-9);
        }
    }

    #[test]
    fn coords_round_trip(c in parallel_coords()) {
        let p = point_from_coords(&c).unwrap();
        let back = point_from_coords(&coords_from_point(&p).unwrap()).unwrap();
        prop_assert!(distance(&p, &back).unwrap() < 1e-8);
    }
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in raw_word()) {
        let w = ModWord::normalize(raw);
        prop_assert_eq!(ModWord::normalize(w.syllables().to_vec()), w);
    }

    #[test]
    fn parity_is_a_homomorphism(x in raw_word(), y in raw_word()) {
        let (u, v) = (ModWord::normalize(x), ModWord::normalize(y));
        let (a1, b1) = u.parity_abelianization();
        let (a2, b2) = v.parity_abelianization();
        prop_assert_eq!(u.mul(&v).parity_abelianization(), ((a1 + a2) % 2, (b1 + b2) % 3));
    }

    #[test]
    fn free_words_land_in_gamma6(len in 0usize..20, seed in any::<u64>()) {
        let w = f2_to_mod(&random_reduced_word(len, seed, 0));
        prop_assert!(w.in_gamma6());
        prop_assert_eq!(w.parity_abelianization(), (0, 0));
    }
}

#[test]
fn enumeration_counts() {
    let mut counts = [0usize; 9];
    for w in enumerate_f2(8) {
        counts[w.len()] += 1;
    }
    for (k, &c) in counts.iter().enumerate().skip(1) {
        assert_eq!(c, reduced_word_count(k));
        assert_eq!(c, 4 * 3usize.pow(k as u32 - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn relators_hold(c in coordinates()) {
        prop_assert!(charvar::relator_residual(&rep_from_coords(&c)) < 1e-10);
    }

    #[test]
    fn closed_form_trace(c in coordinates()) {
        let tr = charvar::trace_of(&rep_from_coords(&c), &baba()).unwrap();
        prop_assert!((tr - trace_baba_closed_form(&c)).abs() < 1e-9);
    }

    #[test]
    fn trace_is_inverse_symmetric(c in coordinates()) {
        let rep = rep_from_coords(&c);
        let w = baba();
        let (fwd, inv) = (charvar::trace_of(&rep, &w).unwrap(), charvar::trace_of(&rep, &w.inverse()).unwrap());
        prop_assert!((fwd - inv).abs() < 1e-10 * fwd.abs().max(1.0));
    }

    #[test]
    fn surface_is_even_about_right_angle(s in 0.0f64..3.0, d in 0.0f64..FRAC_PI_2) {
        let a = schwartz_t(s, FRAC_PI_2 + d).unwrap();
        let b = schwartz_t(s, FRAC_PI_2 - d).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * a.max(1.0));
        let c = schwartz_t(s, 3.0 * FRAC_PI_2 - d).unwrap();
        prop_assert!((a - c).abs() < 1e-12 * a.max(1.0));
    }

    #[test]
    fn on_surface_trace_is_minus_one(s in 0.0f64..2.0, th in 0.0..PI) {
        let c = Coordinates::new(s, schwartz_t(s, th).unwrap(), th).unwrap();
        let tr = charvar::trace_of(&rep_from_coords(&c), &baba()).unwrap();
        prop_assert!((tr + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reducible_iff_s_zero(t in 0.2f64..3.0, th in 0.0..PI, s in 0.2f64..3.0) {
        prop_assert!(is_reducible(&rep_from_coords(&Coordinates::new(0.0, t, th).unwrap()), 1e-7));
        prop_assert!(!is_reducible(&rep_from_coords(&Coordinates::new(s, t, th).unwrap()), 1e-7));
    }

    #[test]
    fn peripheral_element_squares_to_a_unipotent(s in 0.0f64..2.0, th in 0.0..PI) {
        let c = Coordinates::new(s, schwartz_t(s, th).unwrap(), th).unwrap();
        let rep = rep_from_coords(&c);
        let square = baba().pow(2);
        let p = characteristic_polynomial(&rep, &square).unwrap();
        let dev = p.iter().zip([-3.0, 3.0, -1.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-6, "{p:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gap_duality(c in coordinates(), len in 1usize..10, seed in any::<u64>()) {
        let rep = rep_from_coords(&c);
        let w = f2_to_mod(&random_reduced_word(len, seed, 0));
        let fwd = charvar::cartan_of_word(&rep, &w).unwrap();
        let inv = charvar::cartan_of_word(&rep, &w.inverse()).unwrap();
        prop_assert!((fwd.gap12() - inv.gap23()).abs() < 1e-10 * fwd.gap12().max(1.0));
        prop_assert!((fwd.gap23() - inv.gap12()).abs() < 1e-10 * fwd.gap23().max(1.0));
    }

    #[test]
    fn diagnostics_are_translation_invariant(
        s in 0.3f64..2.0, t in 1.0f64..6.0, th in 0.2f64..2.9,
        seed in any::<u64>(), shift in 1usize..6,
    ) {
        let rep = rep_from_coords(&Coordinates::new(s, t, th).unwrap());
        let window = random_f2_geodesic(10, seed);
        let moved = window.translated(&random_reduced_word(shift, seed ^ 1, 1));
        let theta = default_theta();
        let a = straightness_report(&midpoint_sequence(&rep, &window).unwrap(), &theta).unwrap();
        let b = straightness_report(&midpoint_sequence(&rep, &moved).unwrap(), &theta).unwrap();
        prop_assert!((a.min_zeta_angle - b.min_zeta_angle).abs() < 1e-8);
        prop_assert!((a.min_spacing - b.min_spacing).abs() < 1e-8);
        prop_assert!((a.type_range.0 - b.type_range.0).abs() < 1e-8);
    }

    #[test]
    fn gap_scan_is_deterministic(c in coordinates(), seed in any::<u64>()) {
        let rep = rep_from_coords(&c);
        let a = cartan_gap_scan(&rep, 6, 400, seed).unwrap();
        let b = cartan_gap_scan(&rep, 6, 400, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
