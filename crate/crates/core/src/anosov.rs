//! Empirical Anosov diagnostics: the orbit triangle of `ρ(b)`, midpoint
//! sequences along geodesics of Γ₆, straightness, Cartan-gap growth, the
//! growth of the peripheral element, and distances to a maximal flat.
//!
//! Orbit points far from `x` are never assembled as matrices. Midpoints of
//! the orbit are themselves orbit points, and every comparison between two of
//! them is made in the gauge where the first is the identity.

use std::f64::consts::{FRAC_PI_8, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charvar::{
    act_word, baba, centered_factors, gram_scaled, matrix_of, orbit_points_from_x, point_of_factor,
    rep_from_coords, Coordinates, Factor, Representation,
};
use crate::error::{GeomError, Result};
use crate::flats::{
    self, chamber_angle_of, flat_from_flags, project_to_flat, segment_type, zeta_angle,
    ChamberAngle, Flag, ModelInterval,
};
use crate::linalg::{sym_eigen, Mat3, Vec3};
use crate::modgroup::{
    f2_to_mod, random_f2_geodesic, random_reduced_word, reduced_word_count, F2Letter, F2Word,
    GeodesicWindow, ModWord, Syllable,
};
use crate::precise::{dd, DdMat3};
use crate::symspace::{angle_at, distance, midpoint, Point};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    /// Angles at `x`, `ρ(b)x`, `ρ(b²)x`.
    pub angles: [f64; 3],
    /// `d(x, y)`, `d(y, z)`, `d(z, x)`.
    pub sides: [f64; 3],
}

/// The triangle `x, ρ(b)x, ρ(b²)x`.
pub fn triangle_report(rep: &Representation) -> Result<TriangleReport> {
    let x = *rep.x();
    let y = act_word(rep, &"b".parse()?, &x)?;
    let z = act_word(rep, &"B".parse()?, &x)?;
    let sides = [distance(&x, &y)?, distance(&y, &z)?, distance(&z, &x)?];
    if sides[0] < 1e-12 {
        return Err(GeomError::DegenerateTriangle(
            "x is fixed by ρ(b); the triangle collapses".into(),
        ));
    }
    Ok(TriangleReport {
        angles: [
            angle_at(&x, &y, &z)?,
            angle_at(&y, &z, &x)?,
            angle_at(&z, &x, &y)?,
        ],
        sides,
    })
}

/// `c` with `mid(x, ρ(l)x) = ρ(c)x`: since `ρ(a)` is the inversion at `x`,
/// `mid(q, ρ(a)q) = x` for every `q`.
fn midpoint_word(l: F2Letter) -> ModWord {
    use Syllable::*;
    ModWord::normalize(match l {
        F2Letter::G1 => vec![B],
        F2Letter::G2 => vec![B2],
        F2Letter::G1Inv => vec![A, B],
        F2Letter::G2Inv => vec![A, B2],
    })
}

/// Midpoints `m_n = mid(ρ(g_n)x, ρ(g_{n+1})x)` of a geodesic window. Each
/// `m_n` is an orbit point `ρ(h_n)x`, so neighbouring midpoints are compared
/// in the gauge where `m_n` is the identity.
#[derive(Clone, Debug)]
pub struct MidpointSequence {
    window: GeodesicWindow,
    x: Point,
    /// `ρ(l_n) x = ρ(g_n)⁻¹ x_{n+1}`.
    step_images: Vec<Point>,
    /// `ρ(g_n)⁻¹ m_n`.
    local: Vec<Point>,
    /// `h_n` with `m_n = ρ(h_n)x`.
    words: Vec<ModWord>,
    /// `m_{n+1}` seen from `m_n`, for `n < N − 1`.
    forward: Vec<Point>,
    /// `m_n` seen from `m_{n+1}`, for `n < N − 1`.
    backward: Vec<Point>,
}

pub fn midpoint_sequence(
    rep: &Representation,
    window: &GeodesicWindow,
) -> Result<MidpointSequence> {
    let n = window.len();
    if n < 3 {
        return Err(GeomError::Precondition(format!(
            "a midpoint sequence needs at least 3 steps, got {n}"
        )));
    }
    let x = *rep.x();
    let mut step_images = Vec::with_capacity(n);
    let mut local = Vec::with_capacity(n);
    for &l in &window.steps {
        let y = act_word(rep, &l.to_mod(), &x)?;
        local.push(midpoint(&x, &y)?);
        step_images.push(y);
    }
    let words = window
        .elements()
        .iter()
        .zip(&window.steps)
        .map(|(g, &l)| f2_to_mod(g).mul(&midpoint_word(l)))
        .collect();
    // h_n⁻¹ h_{n+1} = c_n⁻¹ l_n c_{n+1}
    let mut rel = Vec::with_capacity(2 * (n - 1));
    for k in 0..n - 1 {
        let (l, c0, c1) = (
            window.steps[k],
            midpoint_word(window.steps[k]),
            midpoint_word(window.steps[k + 1]),
        );
        let w = c0.inverse().mul(&l.to_mod()).mul(&c1);
        rel.push(w.inverse());
        rel.push(w);
    }
    let pts = orbit_points_from_x(rep, &rel)?;
    let (backward, forward) = pts.chunks(2).map(|p| (p[0], p[1])).unzip();
    Ok(MidpointSequence {
        window: window.clone(),
        x,
        step_images,
        local,
        words,
        forward,
        backward,
    })
}

impl MidpointSequence {
    /// Number of midpoints.
    pub fn len(&self) -> usize {
        self.local.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local.is_empty()
    }

    pub fn window(&self) -> &GeodesicWindow {
        &self.window
    }

    /// `ρ(g_n)⁻¹ m_n`.
    pub fn local_midpoint(&self, n: usize) -> &Point {
        &self.local[n]
    }

    /// `h_n` with `m_n = ρ(h_n)x`.
    pub fn midpoint_word(&self, n: usize) -> &ModWord {
        &self.words[n]
    }

    /// `m_n` itself; fails once the orbit leaves the representable range.
    pub fn midpoint(&self, rep: &Representation, n: usize) -> Result<Point> {
        act_word(rep, &self.words[n], &self.x)
    }

    /// `x_n = ρ(g_n) x`.
    pub fn orbit_point(&self, rep: &Representation, n: usize) -> Result<Point> {
        let g = &self.window.elements()[n];
        act_word(rep, &f2_to_mod(g), &self.x)
    }

    /// `max_n |d(m_n, x_n) − d(m_n, x_{n+1})|`.
    pub fn equidistance_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (m, y) in self.local.iter().zip(&self.step_images) {
            worst = worst.max((distance(m, &self.x)? - distance(m, y)?).abs());
        }
        Ok(worst)
    }

    /// `d(m_n, m_{n+1})` for each consecutive pair.
    pub fn spacings(&self) -> Result<Vec<f64>> {
        Ok(self.forward.iter().map(Point::norm).collect())
    }

    /// Chamber angle of the segment `m_n m_{n+1}`, `n < N − 1`.
    pub fn segment_type(&self, n: usize) -> Result<ChamberAngle> {
        segment_type(&Point::identity(), &self.forward[n])
    }

    /// ζ-angle at `m_n` between `m_{n−1}` and `m_{n+1}`, `1 ≤ n ≤ N − 2`.
    pub fn zeta_angle_at(&self, n: usize) -> Result<f64> {
        if n == 0 || n + 1 >= self.len() {
            return Err(GeomError::InvalidArgument(format!(
                "no ζ-angle at index {n}"
            )));
        }
        zeta_angle(&Point::identity(), &self.backward[n - 1], &self.forward[n])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StraightnessReport {
    pub min_zeta_angle: f64,
    pub min_spacing: f64,
    /// Smallest and largest chamber angle of the segments `m_n m_{n+1}`.
    pub type_range: (f64, f64),
    pub theta_interval: ModelInterval,
    /// Whether every segment type lies in the interval.
    pub theta_regular: bool,
    pub zeta_angles: Vec<f64>,
    pub spacings: Vec<f64>,
}

pub fn straightness_report(
    seq: &MidpointSequence,
    theta: &ModelInterval,
) -> Result<StraightnessReport> {
    let with_index = |n: usize, e: GeomError| match e {
        GeomError::NotRegular(msg) => GeomError::NotRegular(format!("segment {n}: {msg}")),
        other => other,
    };
    let mut types = Vec::with_capacity(seq.len() - 1);
    for n in 0..seq.len() - 1 {
        let phi = seq.segment_type(n).map_err(|e| with_index(n, e))?;
        if !phi.is_regular() {
            return Err(GeomError::NotRegular(format!(
                "segment {n}: chamber angle {:.3e} too close to a wall",
                phi.value()
            )));
        }
        types.push(phi);
    }
    let zeta_angles = (1..seq.len() - 1)
        .map(|n| seq.zeta_angle_at(n).map_err(|e| with_index(n, e)))
        .collect::<Result<Vec<_>>>()?;
    let spacings = seq.spacings()?;
    let lo = types
        .iter()
        .map(|p| p.value())
        .fold(f64::INFINITY, f64::min);
    let hi = types
        .iter()
        .map(|p| p.value())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StraightnessReport {
        min_zeta_angle: zeta_angles.iter().copied().fold(f64::INFINITY, f64::min),
        min_spacing: spacings.iter().copied().fold(f64::INFINITY, f64::min),
        type_range: (lo, hi),
        theta_interval: *theta,
        theta_regular: types.iter().all(|p| theta.contains(*p)),
        zeta_angles,
        spacings,
    })
}

/// A matrix kept as `m · e^{log_scale}` with `max |m_ij| = 1`.
#[derive(Clone, Copy, Debug)]
struct ScaledMat {
    m: Mat3,
    log_scale: f64,
}

impl ScaledMat {
    fn identity() -> Self {
        ScaledMat {
            m: Mat3::identity(),
            log_scale: 0.0,
        }
    }

    fn renormalized(m: Mat3, log_scale: f64) -> Self {
        let s = m.amax();
        ScaledMat {
            m: m / s,
            log_scale: log_scale + s.ln(),
        }
    }

    fn mul_right(&self, g: &Mat3) -> Self {
        Self::renormalized(self.m * g, self.log_scale)
    }

    fn mul_left(&self, g: &Mat3) -> Self {
        Self::renormalized(g * self.m, self.log_scale)
    }

    /// `log σ₁`; only the top of the spectrum is used because the rest
    /// underflows relative to `max |m_ij| = 1` on long words.
    fn log_top_singular_value(&self) -> f64 {
        0.5 * sym_eigen(&(self.m.transpose() * self.m)).values[0].ln() + self.log_scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub word: String,
    pub length: usize,
    pub gap12: f64,
    pub gap23: f64,
}

impl GapRecord {
    pub fn gap(&self) -> f64 {
        self.gap12.min(self.gap23)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub records: Vec<GapRecord>,
    /// Smallest `min(λ₁−λ₂, λ₂−λ₃)` at each length `0..=max_len`.
    pub min_gap_by_length: Vec<f64>,
    /// Slope `c` of the lower bound `gap ≥ c·n − C`.
    pub slope: f64,
    /// The constant `C`.
    pub offset: f64,
    /// `min (gap − (c·n − C))` over all records.
    pub min_residual: f64,
    /// Whether some lengths were sampled rather than enumerated.
    pub sampled: bool,
}

fn gap_record(word: &F2Word, g: &ScaledMat, g_inv: &ScaledMat) -> Result<GapRecord> {
    let c = flats::cartan_from_extremes(g.log_top_singular_value(), g_inv.log_top_singular_value());
    Ok(GapRecord {
        word: word.to_string(),
        length: word.len(),
        gap12: c.gap12().max(0.0),
        gap23: c.gap23().max(0.0),
    })
}

struct Generators {
    mats: [Mat3; 4],
    inv: [Mat3; 4],
}

impl Generators {
    fn new(rep: &Representation) -> Result<Self> {
        let mut mats = [Mat3::identity(); 4];
        let mut inv = [Mat3::identity(); 4];
        for l in F2Letter::ALL {
            mats[l.index()] = matrix_of(rep, &l.to_mod())?;
            inv[l.index()] = matrix_of(rep, &l.inverse().to_mod())?;
        }
        Ok(Generators { mats, inv })
    }

    fn evaluate(&self, w: &F2Word) -> (ScaledMat, ScaledMat) {
        w.letters().iter().fold(
            (ScaledMat::identity(), ScaledMat::identity()),
            |(g, gi), l| {
                (
                    g.mul_right(&self.mats[l.index()]),
                    gi.mul_left(&self.inv[l.index()]),
                )
            },
        )
    }
}

fn enumerate_gaps(
    gens: &Generators,
    word: &mut F2Word,
    g: ScaledMat,
    g_inv: ScaledMat,
    max_len: usize,
    out: &mut Vec<GapRecord>,
) -> Result<()> {
    if word.len() == max_len {
        return Ok(());
    }
    for l in F2Letter::ALL {
        if word.letters().last() == Some(&l.inverse()) {
            continue;
        }
        let child = g.mul_right(&gens.mats[l.index()]);
        let child_inv = g_inv.mul_left(&gens.inv[l.index()]);
        word.push(l);
        out.push(gap_record(word, &child, &child_inv)?);
        enumerate_gaps(gens, word, child, child_inv, max_len, out)?;
        word.pop();
    }
    Ok(())
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Cartan gaps of `ρ(w)` for the reduced words `w` of length up to `max_len`
/// in the free generators of Γ₆. All words are enumerated when there are at
/// most `sample_budget` of them; otherwise short lengths are enumerated while
/// they fit in half the budget and the rest is spread evenly over the longer
/// lengths as seeded uniform samples.
pub fn cartan_gap_scan(
    rep: &Representation,
    max_len: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<GapReport> {
    if max_len < 1 || sample_budget < 1 {
        return Err(GeomError::InvalidArgument(
            "max_len and sample_budget must be at least 1".into(),
        ));
    }
    let gens = Generators::new(rep)?;
    let total: usize = (1..=max_len).map(reduced_word_count).sum();
    let mut records = vec![GapRecord {
        word: F2Word::identity().to_string(),
        length: 0,
        gap12: 0.0,
        gap23: 0.0,
    }];
    let sampled = total > sample_budget;
    if !sampled {
        let mut found = Vec::with_capacity(total);
        enumerate_gaps(
            &gens,
            &mut F2Word::identity(),
            ScaledMat::identity(),
            ScaledMat::identity(),
            max_len,
            &mut found,
        )?;
        // Depth-first order restricted to one length is lexicographic.
        found.sort_by_key(|r| r.length);
        records.extend(found);
    } else {
        let mut full_len = 0;
        let mut used = 0;
        while full_len < max_len && used + reduced_word_count(full_len + 1) <= sample_budget / 2 {
            full_len += 1;
            used += reduced_word_count(full_len);
        }
        let mut found = Vec::with_capacity(used);
        enumerate_gaps(
            &gens,
            &mut F2Word::identity(),
            ScaledMat::identity(),
            ScaledMat::identity(),
            full_len,
            &mut found,
        )?;
        found.sort_by_key(|r| r.length);
        records.extend(found);
        let remaining = max_len - full_len;
        let per_length = ((sample_budget - used) / remaining).max(1);
        for len in full_len + 1..=max_len {
            for i in 0..per_length {
                let w = random_reduced_word(len, seed, ((len as u64) << 32) | i as u64);
                let (g, gi) = gens.evaluate(&w);
                records.push(gap_record(&w, &g, &gi)?);
            }
        }
    }
    let mut min_gap_by_length = vec![f64::INFINITY; max_len + 1];
    for r in &records {
        min_gap_by_length[r.length] = min_gap_by_length[r.length].min(r.gap());
    }
    let points: Vec<(f64, f64)> = min_gap_by_length
        .iter()
        .enumerate()
        .map(|(n, &g)| (n as f64, g))
        .collect();
    let hull = lower_hull(&points);
    let slope = match hull.len() {
        0 | 1 => 0.0,
        k => (hull[k - 1].1 - hull[k - 2].1) / (hull[k - 1].0 - hull[k - 2].0),
    };
    let offset = points
        .iter()
        .map(|&(n, g)| slope * n - g)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_residual = records
        .iter()
        .map(|r| r.gap() - (slope * r.length as f64 - offset))
        .fold(f64::INFINITY, f64::min);
    Ok(GapReport {
        records,
        min_gap_by_length,
        slope,
        offset,
        min_residual,
        sampled,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthModel {
    Logarithmic,
    Linear,
}

impl fmt::Display for GrowthModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthModel::Logarithmic => "log",
            GrowthModel::Linear => "linear",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeripheralGrowth {
    /// `(n, gap(ρ(baba)ⁿ))` for `n = 1..=n_max`.
    pub gaps: Vec<(usize, f64)>,
    pub model: GrowthModel,
    /// Coefficient of the better model.
    pub kappa: f64,
    pub kappa_log: f64,
    pub kappa_linear: f64,
    pub residual_log: f64,
    pub residual_linear: f64,
}

/// Least squares through the origin: `(κ, Σ residual²)` for `y ≈ κ·x`.
fn fit_through_origin(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let ssr = xs.iter().zip(ys).map(|(x, y)| (y - k * x).powi(2)).sum();
    (k, ssr)
}

/// Gap `min(λ₁−λ₂, λ₂−λ₃)` of the powers of the peripheral element `ρ(baba)`,
/// classified as logarithmic or linear in `n`.
pub fn peripheral_growth(rep: &Representation, n_max: usize) -> Result<PeripheralGrowth> {
    if n_max < 4 {
        return Err(GeomError::Precondition(format!(
            "n_max must be at least 4, got {n_max}"
        )));
    }
    let w = baba();
    let m = matrix_of(rep, &w)?;
    let m_inv = matrix_of(rep, &w.inverse())?;
    let mut g = ScaledMat::identity();
    let mut gi = ScaledMat::identity();
    let mut gaps = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        g = g.mul_right(&m);
        gi = gi.mul_left(&m_inv);
        let c =
            flats::cartan_from_extremes(g.log_top_singular_value(), gi.log_top_singular_value());
        gaps.push((n, c.gap12().min(c.gap23()).max(0.0)));
    }
    let ys: Vec<f64> = gaps.iter().map(|&(_, g)| g).collect();
    let logs: Vec<f64> = gaps.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let lin: Vec<f64> = gaps.iter().map(|&(n, _)| n as f64).collect();
    let (kappa_log, residual_log) = fit_through_origin(&logs, &ys);
    let (kappa_linear, residual_linear) = fit_through_origin(&lin, &ys);
    let (model, kappa) = if residual_log <= residual_linear {
        (GrowthModel::Logarithmic, kappa_log)
    } else {
        (GrowthModel::Linear, kappa_linear)
    };
    Ok(PeripheralGrowth {
        gaps,
        model,
        kappa,
        kappa_log,
        kappa_linear,
        residual_log,
        residual_linear,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseFlatReport {
    /// Distance of each midpoint to the flat.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    /// Flat displacement between the projections of `m_k` and `m_{k+1}`.
    pub advances: Vec<[f64; 3]>,
    /// Whether each projection step lies in the σ₊ chamber with type in Θ′.
    pub monotone: bool,
    /// Indices `k` where the step from `k` to `k + 1` fails that test.
    pub violations: Vec<usize>,
    pub min_spacing: f64,
}

fn top_right_singular_vector(m: &DdMat3) -> Vec3 {
    let (g, _) = gram_scaled(&m.transpose());
    sym_eigen(&g).vectors.column(0).into_owned()
}

fn apply_dd(m: &DdMat3, v: &Vec3) -> Vec3 {
    Vec3::from_fn(|i, _| f64::from((0..3).fold(dd(0.0), |acc, k| acc + m.0[i][k] * dd(v[k]))))
}

/// The ideal flag of the sector at `m_c` containing `m_e`, seen from `m_k`.
/// With `M_{i→j}` the linear part taking the gauge of `m_i` to that of `m_j`,
/// its point is `M_{k→e}·v` and its line `M_{k→e}⁻ᵀ·y` for `v`, `y` the top
/// right singular vectors of `M_{c→e}` and `M_{c→e}⁻ᵀ`; both products act in
/// their expanding directions.
fn transported_flag(to_end: &Factor, v: &Vec3, y: &Vec3) -> Result<Flag> {
    let point = apply_dd(&to_end.m, v);
    let line = apply_dd(&to_end.m_it, y);
    let (point, line) = (
        (point / point.amax()).normalize(),
        (line / line.amax()).normalize(),
    );
    Flag::new(point, line - point * point.dot(&line))
}

/// Distances of the midpoints to the flat joining the sectors at the window
/// centre `m_c`, `c = N/2`, that contain the first and the last midpoint.
/// Each distance is measured in the gauge where that midpoint is the
/// identity, with the two flags transported there.
pub fn morse_flat_check(
    rep: &Representation,
    window: &GeodesicWindow,
    theta: &ModelInterval,
) -> Result<MorseFlatReport> {
    let seq = midpoint_sequence(rep, window)?;
    let n = seq.len();
    let c = n / 2;
    // Even words, so that the linear parts compose; ρ(a) fixes x.
    let words: Vec<ModWord> = seq
        .words
        .iter()
        .map(|h| {
            if h.parity_abelianization().0 == 0 {
                h.clone()
            } else {
                h.mul(&ModWord::normalize([Syllable::A]))
            }
        })
        .collect();
    let between = |i: usize, j: usize| words[i].inverse().mul(&words[j]);
    let mut rel = vec![between(c, 0), between(c, n - 1)];
    for k in 0..n {
        rel.push(between(k, 0));
        rel.push(between(k, n - 1));
        if k + 1 < n {
            rel.push(between(k, k + 1));
        }
    }
    let f = centered_factors(rep, &rel);
    let (v_minus, y_minus) = (
        top_right_singular_vector(&f[0].m),
        top_right_singular_vector(&f[0].m_it),
    );
    let (v_plus, y_plus) = (
        top_right_singular_vector(&f[1].m),
        top_right_singular_vector(&f[1].m_it),
    );
    let mut distances = Vec::with_capacity(n);
    let mut advances = Vec::with_capacity(n - 1);
    let mut violations = Vec::new();
    let mut idx = 2;
    for k in 0..n {
        let minus = transported_flag(&f[idx], &v_minus, &y_minus)?;
        let plus = transported_flag(&f[idx + 1], &v_plus, &y_plus)?;
        let flat = flat_from_flags(&minus, &plus)?;
        let here = project_to_flat(&Point::identity(), &flat)?;
        distances.push(here.distance);
        if k + 1 < n {
            let next = project_to_flat(&point_of_factor(&f[idx + 2])?, &flat)?;
            let d = next.coords - here.coords;
            let in_chamber = d[0] > d[1] && d[1] > d[2];
            let typed = chamber_angle_of([d[0], d[1], d[2]])
                .map(|phi| theta.contains(phi))
                .unwrap_or(false);
            if !(in_chamber && typed) {
                violations.push(k);
            }
            advances.push([d[0], d[1], d[2]]);
            idx += 3;
        } else {
            idx += 2;
        }
    }
    Ok(MorseFlatReport {
        max_distance: distances.iter().copied().fold(0.0, f64::max),
        distances,
        advances,
        monotone: violations.is_empty(),
        violations,
        min_spacing: seq.spacings()?.into_iter().fold(f64::INFINITY, f64::min),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EvidenceAnosov,
    EvidenceDegenerate,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::EvidenceAnosov => "evidence-anosov",
            Verdict::EvidenceDegenerate => "evidence-degenerate",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Thresholds and budgets of [`anosov_verdict`]. These are heuristics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig {
    pub max_len: usize,
    pub sample_budget: usize,
    pub seed: u64,
    /// Steps of the random geodesic window used for straightness.
    pub window_len: usize,
    /// `Θ = [π/6 − w, π/6 + w]`.
    pub theta_half_width: f64,
    /// Largest accepted `π − min ζ-angle`.
    pub max_zeta_deficit: f64,
    /// The gap slope must reach this multiple of the minimal spacing.
    pub spacing_factor: f64,
    /// Shortest word length for which a positive verdict is allowed.
    pub min_max_len: usize,
    /// Linear peripheral growth slower than this counts as degenerate.
    pub min_peripheral_kappa: f64,
    pub peripheral_n_max: usize,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            max_len: 8,
            sample_budget: 20_000,
            seed: 0,
            window_len: 12,
            theta_half_width: FRAC_PI_8,
            max_zeta_deficit: 0.5,
            spacing_factor: 0.05,
            min_max_len: 8,
            min_peripheral_kappa: 0.05,
            peripheral_n_max: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnosovVerdict {
    pub coordinates: Coordinates,
    pub verdict: Verdict,
    pub gap_slope: f64,
    pub min_zeta_angle: Option<f64>,
    pub min_spacing: Option<f64>,
    pub type_range: Option<(f64, f64)>,
    pub theta_regular: bool,
    pub peripheral_model: GrowthModel,
    pub peripheral_kappa: f64,
    /// Reasons a positive verdict was withheld.
    pub notes: Vec<String>,
}

pub fn anosov_verdict(c: &Coordinates, cfg: &VerdictConfig) -> Result<AnosovVerdict> {
    let rep = rep_from_coords(c);
    let theta = ModelInterval::around_zeta(cfg.theta_half_width)?;
    let mut notes = Vec::new();

    let peripheral = peripheral_growth(&rep, cfg.peripheral_n_max)?;
    let degenerate = match peripheral.model {
        GrowthModel::Logarithmic => {
            notes.push("peripheral gap grows logarithmically".into());
            true
        }
        GrowthModel::Linear if peripheral.kappa < cfg.min_peripheral_kappa => {
            notes.push(format!(
                "peripheral gap slope {:.3e} below threshold",
                peripheral.kappa
            ));
            true
        }
        GrowthModel::Linear => false,
    };

    let window = random_f2_geodesic(cfg.window_len, cfg.seed);
    let straight = midpoint_sequence(&rep, &window).and_then(|s| straightness_report(&s, &theta));
    let straight = match straight {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("straightness unavailable: {e}"));
            None
        }
    };
    let gaps = cartan_gap_scan(&rep, cfg.max_len, cfg.sample_budget, cfg.seed)?;

    let mut positive = !degenerate;
    if cfg.max_len < cfg.min_max_len {
        notes.push(format!("max_len {} below {}", cfg.max_len, cfg.min_max_len));
        positive = false;
    }
    match &straight {
        Some(r) => {
            if gaps.slope < cfg.spacing_factor * r.min_spacing || gaps.slope <= 0.0 {
                notes.push(format!(
                    "gap slope {:.3e} below {} × spacing {:.3e}",
                    gaps.slope, cfg.spacing_factor, r.min_spacing
                ));
                positive = false;
            }
            if r.min_zeta_angle < PI - cfg.max_zeta_deficit {
                notes.push(format!("min ζ-angle {:.4} too small", r.min_zeta_angle));
                positive = false;
            }
            if !r.theta_regular {
                notes.push(format!(
                    "segment types [{:.4}, {:.4}] leave π/6 ± {:.4}",
                    r.type_range.0, r.type_range.1, cfg.theta_half_width
                ));
                positive = false;
            }
        }
        None => positive = false,
    }
    let verdict = if positive {
        Verdict::EvidenceAnosov
    } else if degenerate {
        Verdict::EvidenceDegenerate
    } else {
        Verdict::Inconclusive
    };
    Ok(AnosovVerdict {
        coordinates: *c,
        verdict,
        gap_slope: gaps.slope,
        min_zeta_angle: straight.as_ref().map(|r| r.min_zeta_angle),
        min_spacing: straight.as_ref().map(|r| r.min_spacing),
        type_range: straight.as_ref().map(|r| r.type_range),
        theta_regular: straight.as_ref().is_some_and(|r| r.theta_regular),
        peripheral_model: peripheral.model,
        peripheral_kappa: peripheral.kappa,
        notes,
    })
}

/// The interval `π/6 ± π/8` used by the verdict.
pub fn default_theta() -> ModelInterval {
    ModelInterval::around_zeta(FRAC_PI_8).expect("π/8 < π/6")
}
