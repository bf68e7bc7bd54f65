//! Acceptance run: one PASS/FAIL line per criterion, each at its stated
//! tolerance. Exits nonzero when a criterion outside `KNOWN_FAILURES` fails,
//! or when a known failure starts passing.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modular_sl3::anosov::{
    cartan_gap_scan, midpoint_sequence, peripheral_growth, straightness_report, triangle_report,
    GrowthModel,
};
use modular_sl3::charvar::{
    self, baba, characteristic_polynomial, is_reducible, rep_from_coords, schwartz_t,
    trace_baba_closed_form, Coordinates,
};
use modular_sl3::flats::{
    point_from_coords, project_to_parallel_set, ModelInterval, ParallelCoords,
};
use modular_sl3::linalg::Mat3;
use modular_sl3::modgroup::random_f2_geodesic;
use modular_sl3::symspace::{distance, Point};
use modular_sl3::verify::{self, VerifyConfig};

/// `ρ(baba)` is not unipotent on the surface: its eigenvalues are `1, −1, −1`,
/// and only `ρ(baba)²` is unipotent.
const KNOWN_FAILURES: [usize; 1] = [5];

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn coords(s: f64, t: f64, theta: f64) -> Coordinates {
    Coordinates::new(s, t, theta).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// The closed-form trace evaluated with 256-bit floats.
struct BigTrace {
    cc: Consts,
}

impl BigTrace {
    const P: usize = 256;
    const RM: RoundingMode = RoundingMode::ToEven;

    fn new() -> Self {
        BigTrace {
            cc: Consts::new().unwrap(),
        }
    }

    fn big(x: f64) -> BigFloat {
        BigFloat::from_f64(x, Self::P)
    }

    /// `(−(3/2)cosh 2s cosh 2t + (9/4)cosh² 2s − 3/4 − 3 sin²θ sinh⁴ s sinh² t) − value`.
    fn residual(&mut self, s: f64, t: f64, theta: f64, value: f64) -> f64 {
        let (p, rm) = (Self::P, Self::RM);
        let two = Self::big(2.0);
        let c2s = two.mul(&Self::big(s), p, rm).cosh(p, rm, &mut self.cc);
        let c2t = two.mul(&Self::big(t), p, rm).cosh(p, rm, &mut self.cc);
        let shs = Self::big(s).sinh(p, rm, &mut self.cc);
        let sht = Self::big(t).sinh(p, rm, &mut self.cc);
        let sth = Self::big(theta).sin(p, rm, &mut self.cc);
        let term1 = Self::big(-1.5).mul(&c2s, p, rm).mul(&c2t, p, rm);
        let term2 = Self::big(2.25).mul(&c2s, p, rm).mul(&c2s, p, rm);
        let term4 = Self::big(3.0)
            .mul(&sth.powi(2, p, rm), p, rm)
            .mul(&shs.powi(4, p, rm), p, rm)
            .mul(&sht.powi(2, p, rm), p, rm);
        let exact = term1
            .add(&term2, p, rm)
            .sub(&Self::big(0.75), p, rm)
            .sub(&term4, p, rm);
        let diff = exact.sub(&Self::big(value), p, rm);
        let text = diff.format(Radix::Dec, rm, &mut self.cc).unwrap();
        text.parse::<f64>().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

fn trace_formula() -> Outcome {
    let grid_s = linspace(0.0, 3.0, 20);
    let grid_theta: Vec<f64> = (0..20).map(|k| PI * k as f64 / 20.0).collect();
    let start = Instant::now();
    let mut values = Vec::with_capacity(8000);
    for &s in &grid_s {
        for &t in &grid_s {
            for &th in &grid_theta {
                let rep = rep_from_coords(&coords(s, t, th));
                values.push(((s, t, th), charvar::trace_of(&rep, &baba()).unwrap()));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let mut oracle = BigTrace::new();
    let worst = values
        .iter()
        .map(|&((s, t, th), v)| oracle.residual(s, t, th, v))
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-9 && elapsed < 10.0,
        format!(
            "max |tr − closed form| = {worst:.2e} (tol 1e-9) over 8000 points in {elapsed:.2} s"
        ),
    )
}

fn fuchsian_calibration() -> Outcome {
    let worst = linspace(0.0, 3.0, 7)
        .into_iter()
        .map(|th| (trace_baba_closed_form(&coords(0.0, 3f64.ln() / 2.0, th)) + 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12,
        format!("|closed form + 1| = {worst:.2e} at s = 0, t = ln 3 / 2 (tol 1e-12)"),
    )
}

fn trace_symmetry(rng: &mut ChaCha8Rng) -> Outcome {
    let w = baba();
    let inv = w.inverse();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let rep = rep_from_coords(&coords(
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..PI),
        ));
        let d = charvar::trace_of(&rep, &w).unwrap() - charvar::trace_of(&rep, &inv).unwrap();
        worst = worst.max(d.abs());
    }
    outcome(
        worst < 1e-10,
        format!("max |tr ρ(baba) − tr ρ(baba)⁻¹| = {worst:.2e} over 1000 reps (tol 1e-10)"),
    )
}

fn surface_residual(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    let mut asym = 0.0f64;
    for _ in 0..1000 {
        let (s, th) = (rng.random_range(0.0..2.0), rng.random_range(0.0..PI));
        let t = schwartz_t(s, th).unwrap();
        let tr = charvar::trace_of(&rep_from_coords(&coords(s, t, th)), &baba()).unwrap();
        worst = worst.max((tr + 1.0).abs());
        let d = th - FRAC_PI_2;
        asym = asym.max((t - schwartz_t(s, FRAC_PI_2 - d).unwrap()).abs());
    }
    outcome(
        worst < 1e-12 && asym < 1e-12,
        format!("max |tr + 1| = {worst:.2e} (tol 1e-12), evenness defect {asym:.2e}, s in [0, 2]"),
    )
}

fn unipotency(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (s, th) = (rng.random_range(0.0..2.0), rng.random_range(0.0..PI));
        let rep = rep_from_coords(&coords(s, schwartz_t(s, th).unwrap(), th));
        let c = characteristic_polynomial(&rep, &baba()).unwrap();
        let dev = c
            .iter()
            .zip([-3.0, 3.0, -1.0])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    outcome(
        worst < 1e-6,
        format!("max coefficient deviation from (x − 1)³ = {worst:.2e} over 100 surface points (tol 1e-6)"),
    )
}

fn sym_fn(m: &Mat3, f: impl Fn(f64) -> f64) -> Mat3 {
    let e = SymmetricEigen::new(*m);
    e.eigenvectors * Mat3::from_diagonal(&e.eigenvalues.map(f)) * e.eigenvectors.transpose()
}

fn projection_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let p0 = Mat3::from_diagonal(&nalgebra::Vector3::new(2.0, -1.0, -1.0));
    let p1 = Mat3::from_diagonal(&nalgebra::Vector3::new(0.0, 0.5, -0.5));
    let rot = |a: f64| {
        let (s, c) = a.sin_cos();
        Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
    };
    let mut worst = 0.0f64;
    let mut beaten = 0usize;
    for _ in 0..500 {
        let c = ParallelCoords {
            s: rng.random_range(0.1..3.0),
            alpha: rng.random_range(0.0..PI),
            r: rng.random_range(-1.0..1.0),
            t: rng.random_range(0.1..3.0),
            beta: rng.random_range(0.0..PI),
        };
        let k = rot(c.beta / 2.0);
        let u = p0 * c.r + k * p1 * k.transpose() * c.t;
        let expected = Point::new(sym_fn(&(u * 2.0), f64::exp)).unwrap();
        let q = point_from_coords(&c).unwrap();
        let proj = project_to_parallel_set(&q).unwrap();
        worst = worst.max(distance(&proj.point, &expected).unwrap());

        // block-diagonal competitors: half near the projection, half anywhere
        let centre = sym_fn(&proj.point.matrix(), f64::ln);
        for i in 0..1000 {
            let scale = if i % 2 == 0 { 0.05 } else { 2.0 };
            let (a, b, d) = (
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            );
            let y = Mat3::new(-(a + b), 0.0, 0.0, 0.0, a, d, 0.0, d, b);
            let base = if i % 2 == 0 { centre } else { Mat3::zeros() };
            let n = Point::new(sym_fn(&(base + y), f64::exp)).unwrap();
            if distance(&q, &n).unwrap() < proj.distance {
                beaten += 1;
            }
        }
    }
    outcome(
        worst < 1e-8 && beaten == 0,
        format!("max d(π(q), exp 2u) = {worst:.2e} (tol 1e-8); beaten by {beaten} of 500000 competitors"),
    )
}

fn reducibility() -> Outcome {
    let mut ss = vec![0.0];
    ss.extend(linspace(0.2, 3.0, 14));
    let ts = linspace(0.0, 3.0, 15);
    let mut mismatches = 0;
    for &s in &ss {
        for &t in &ts {
            let rep = rep_from_coords(&coords(s, t, 0.7));
            if is_reducible(&rep, 1e-7) != (s == 0.0) {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches on the 15×15 grid (tol 1e-7)"),
    )
}

fn asymptotic_angles() -> Outcome {
    let theta = ModelInterval::around_zeta(0.3).unwrap();
    let window = random_f2_geodesic(12, 7);
    let mut ok = true;
    let mut final_deficit = 0.0f64;
    let mut lines = Vec::new();
    for s in [0.0, 0.5, 1.0, 2.0] {
        let mut angles = Vec::new();
        let mut deficits = Vec::new();
        for t in [2.0, 4.0, 8.0, 16.0] {
            let rep = rep_from_coords(&coords(s, t, 0.5));
            angles.push(triangle_report(&rep).unwrap().angles[0]);
            let report =
                midpoint_sequence(&rep, &window).and_then(|seq| straightness_report(&seq, &theta));
            deficits.push(report.map_or(f64::INFINITY, |r| PI - r.min_zeta_angle));
        }
        let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        ok &= decreasing(&angles) && decreasing(&deficits) && deficits[3] < 0.2;
        final_deficit = final_deficit.max(deficits[3]);
        lines.push(format!("s={s}: angle {:.2e}→{:.2e}", angles[0], angles[3]));
    }
    outcome(
        ok,
        format!(
            "angle and ζ-deficit decrease along t = 2, 4, 8, 16; worst deficit at t = 16 {final_deficit:.2e} (< 0.2); {}",
            lines.join(", ")
        ),
    )
}

fn gap_growth() -> Outcome {
    let start = Instant::now();
    let anosov = cartan_gap_scan(&rep_from_coords(&coords(1.0, 6.0, 0.5)), 10, 118_096, 0).unwrap();
    let surface = rep_from_coords(&coords(1.0, schwartz_t(1.0, 0.5).unwrap(), 0.5));
    let growth = peripheral_growth(&surface, 200).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let log_model = growth.model == GrowthModel::Logarithmic;
    outcome(
        anosov.slope > 0.0
            && !anosov.sampled
            && log_model
            && (1.5..=2.5).contains(&growth.kappa)
            && elapsed < 60.0,
        format!(
            "slope c = {:.3} over {} words; peripheral model {}, κ = {:.3}; {elapsed:.2} s",
            anosov.slope,
            anosov.records.len() - 1,
            growth.model,
            growth.kappa
        ),
    )
}

fn kernel_suites() -> Outcome {
    let start = Instant::now();
    let results = verify::run(&VerifyConfig {
        filter: Some("symspace".into()),
        ..VerifyConfig::default()
    })
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check.as_str())
        .collect();
    outcome(
        failed.is_empty() && elapsed < 5.0,
        format!(
            "{} checks, failed {:?}, {elapsed:.2} s",
            results.len(),
            failed
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let criteria: Vec<Criterion> = vec![
        ("trace formula", Box::new(|_| trace_formula())),
        ("fuchsian calibration", Box::new(|_| fuchsian_calibration())),
        ("trace symmetry", Box::new(trace_symmetry)),
        ("surface residual", Box::new(surface_residual)),
        ("unipotency on the surface", Box::new(unipotency)),
        ("projection oracle", Box::new(projection_oracle)),
        ("reducibility iff s = 0", Box::new(|_| reducibility())),
        ("asymptotic angles", Box::new(|_| asymptotic_angles())),
        ("gap growth contrast", Box::new(|_| gap_growth())),
        ("kernel property suites", Box::new(|_| kernel_suites())),
    ];
    let mut failed = BTreeSet::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        let o = run(&mut rng);
        println!(
            "{} {n:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed.insert(n);
        }
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.into_iter().collect();
    let unexpected: Vec<_> = failed.difference(&known).collect();
    let fixed: Vec<_> = known.difference(&failed).collect();
    println!(
        "{} passed, {} failed; unexpected failures {unexpected:?}, known failures now passing {fixed:?}",
        10 - failed.len(),
        failed.len()
    );
    if unexpected.is_empty() && fixed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
