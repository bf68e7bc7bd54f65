//! Representations of `PSL₂(ℤ) = ⟨a⟩ * ⟨b⟩` into `Isom(X)` from the
//! coordinates `(s, t, θ)`: `a` acts as the inversion at a point `x` and `b`
//! as the rotation `R_{2π/3}` about the first axis.
//!
//! Matrices of even words are accumulated in double-double arithmetic; the
//! traces involved grow like `e^{4s+2t}` while agreement to `10⁻⁹` is needed.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{GeomError, Result};
use crate::flats::{
    cartan_from_extremes, coords_from_point, point_from_coords, CartanVector, ParallelCoords,
};
use crate::linalg::{self, Mat3};
use crate::modgroup::{ModWord, Syllable};
use crate::precise::{self, dd, third_turn, DdMat3};
use crate::symspace::{act, compose, inversion_at, Isometry, Point};

pub const DEFAULT_FUCHSIAN_TOL: f64 = 1e-9;
/// Largest `|tr ρ(baba) + 1|` accepted as lying on the Schwartz surface.
pub const SURFACE_TOL: f64 = 1e-8;
/// Coefficientwise tolerance of the unipotency test.
pub const UNIPOTENCY_TOL: f64 = 1e-6;

/// Character-variety coordinates, `θ` reduced to `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    s: f64,
    t: f64,
    theta: f64,
}

impl Coordinates {
    pub fn new(s: f64, t: f64, theta: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite() && theta.is_finite()) {
            return Err(GeomError::InvalidArgument(
                "coordinates must be finite".into(),
            ));
        }
        if s < 0.0 || t < 0.0 {
            return Err(GeomError::InvalidArgument(format!(
                "s and t must be non-negative, got s = {s}, t = {t}"
            )));
        }
        Ok(Coordinates {
            s,
            t,
            theta: reduce_mod_pi(theta),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl fmt::Display for Coordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.t, self.theta)
    }
}

fn reduce_mod_pi(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug)]
pub struct Representation {
    coords: Option<Coordinates>,
    x: Point,
    x_dd: DdMat3,
    x_inv_dd: DdMat3,
    /// `B` and `B⁻¹` with `x = B·Bᵀ`.
    sqrt_dd: DdMat3,
    sqrt_inv_dd: DdMat3,
    rot: Isometry,
}

impl Representation {
    /// The representation with `ρ(a)` the inversion at `x` and
    /// `ρ(b) = R_{2π/3}`.
    pub fn with_fixed_point(x: Point) -> Self {
        let to_dd = |m: Mat3| {
            DdMat3(std::array::from_fn(|i| {
                std::array::from_fn(|j| dd(m[(i, j)]))
            }))
        };
        let half = x.log_eigenvalues() * 0.5;
        let frame = to_dd(*x.frame());
        let e = |sign: f64| half.map(|l| dd((sign * l).exp()));
        let sqrt_dd = frame * DdMat3::diagonal(e(1.0).into());
        let sqrt_inv_dd = DdMat3::diagonal(e(-1.0).into()) * frame.transpose();
        Representation {
            coords: None,
            x_dd: to_dd(x.matrix()),
            x_inv_dd: to_dd(x.inverse().matrix()),
            sqrt_dd,
            sqrt_inv_dd,
            x,
            rot: Isometry::rotation(2.0 * FRAC_PI_3),
        }
    }

    /// Coordinates the representation was built from, if any.
    pub fn coordinates(&self) -> Option<Coordinates> {
        self.coords
    }

    /// The fixed point of `ρ(a)`.
    pub fn x(&self) -> &Point {
        &self.x
    }

    pub fn rho_a(&self) -> Isometry {
        inversion_at(&self.x)
    }

    pub fn rho_b(&self) -> Isometry {
        self.rot
    }
}

/// `exp(s·F)` and `exp(−s·F)` for `F = e₀wᵀ + we₀ᵀ`, `w = (0, cos α, sin α)`,
/// using `F³ = F`.
fn fiber_factor(s: TwoFloat, alpha: TwoFloat) -> (DdMat3, DdMat3) {
    let (sa, ca) = alpha.sin_cos();
    let w = [dd(0.0), ca, sa];
    let e0 = [dd(1.0), dd(0.0), dd(0.0)];
    let (sh, ch) = precise::sinh_cosh(s);
    let ch = ch - dd(1.0);
    let mut plus = DdMat3::identity();
    let mut minus = DdMat3::identity();
    for i in 0..3 {
        for j in 0..3 {
            let f = e0[i] * w[j] + w[i] * e0[j];
            let f2 = e0[i] * e0[j] + w[i] * w[j];
            plus.0[i][j] += sh * f + ch * f2;
            minus.0[i][j] += -(sh * f) + ch * f2;
        }
    }
    (plus, minus)
}

/// Gauge `r = 0`, `β = 0`, `α = θ/2`; `x = B·Bᵀ` with
/// `B = exp(t·p₁)·exp(s·R_α f₁ R_{−α})`.
pub fn rep_from_coords(c: &Coordinates) -> Representation {
    let pc = ParallelCoords {
        s: c.s,
        alpha: c.theta / 2.0,
        r: 0.0,
        t: c.t,
        beta: 0.0,
    };
    let x = point_from_coords(&pc).expect("coordinates are validated at construction");
    let half_t = dd(c.t) * dd(0.5);
    let e = precise::exp(half_t);
    let e_inv = precise::exp(-half_t);
    let (f, f_inv) = fiber_factor(dd(c.s), dd(c.theta) * dd(0.5));
    let b = DdMat3::diagonal([dd(1.0), e, e_inv]) * f;
    let b_inv = f_inv * DdMat3::diagonal([dd(1.0), e_inv, e]);
    Representation {
        coords: Some(*c),
        x,
        x_dd: b * b.transpose(),
        x_inv_dd: b_inv.transpose() * b_inv,
        sqrt_dd: b,
        sqrt_inv_dd: b_inv,
        rot: Isometry::rotation(2.0 * FRAC_PI_3),
    }
}

/// Reads `(s, t, θ = 2α − β mod π)` off the fixed point of `ρ(a)`.
pub fn coords_from_rep(rep: &Representation) -> Result<Coordinates> {
    let c = coords_from_point(&rep.x)?;
    Coordinates::new(c.s, c.t, 2.0 * c.alpha - c.beta)
}

pub fn evaluate(rep: &Representation, w: &ModWord) -> Isometry {
    let a = rep.rho_a();
    let b = rep.rot;
    let b2 = compose(&b, &b);
    w.syllables().iter().fold(Isometry::identity(), |acc, s| {
        let g = match s {
            Syllable::A => &a,
            Syllable::B => &b,
            Syllable::B2 => &b2,
        };
        compose(&acc, g)
    })
}

/// `ρ(w)·p`, one syllable at a time, so that only the inversion at `x` and
/// rotations ever act; assembled matrices of long words lose their small
/// singular values.
pub fn act_word(rep: &Representation, w: &ModWord, p: &Point) -> Result<Point> {
    let a = rep.rho_a();
    let b = rep.rot;
    let b2 = Isometry::rotation(4.0 * FRAC_PI_3);
    w.syllables().iter().rev().try_fold(*p, |q, s| {
        let g = match s {
            Syllable::A => &a,
            Syllable::B => &b,
            Syllable::B2 => &b2,
        };
        act(g, &q)
    })
}

/// Double-double matrix of an orientation-preserving word.
fn matrix_dd(rep: &Representation, w: &ModWord) -> Result<DdMat3> {
    if w.parity_abelianization().0 != 0 {
        return Err(GeomError::Parity(format!(
            "word {w} has odd a-count and reverses orientation"
        )));
    }
    let (c, s) = third_turn();
    let r = DdMat3::rotation(c, s);
    let r2 = DdMat3::rotation(c, -s);
    let mut m = DdMat3::identity();
    let mut preserving = true;
    for syl in w.syllables() {
        m = match syl {
            // (M, ε)·(x, −): x itself if ε preserves, else x* = x⁻¹.
            Syllable::A => {
                let f = if preserving { rep.x_dd } else { rep.x_inv_dd };
                preserving = !preserving;
                m * f
            }
            Syllable::B => m * r,
            Syllable::B2 => m * r2,
        };
    }
    Ok(m)
}

/// `ρ` conjugated into the gauge where `x` is the identity: `ρ(a)` becomes
/// `p ↦ p⁻¹` and `ρ(b)` the linear map `B⁻¹RB`, `x = B·Bᵀ`. Each generator is
/// kept together with its inverse transpose.
struct CenteredGenerators {
    b: (DdMat3, DdMat3),
    b2: (DdMat3, DdMat3),
}

impl CenteredGenerators {
    fn new(rep: &Representation) -> Self {
        let (c, s) = third_turn();
        let (bm, bi) = (rep.sqrt_dd, rep.sqrt_inv_dd);
        let conj = |r: DdMat3| (bi * r * bm, bm.transpose() * r * bi.transpose());
        CenteredGenerators {
            b: conj(DdMat3::rotation(c, s)),
            b2: conj(DdMat3::rotation(c, -s)),
        }
    }

    /// `ρ(w)` in the gauge of `x`; the image of the identity is `M·Mᵀ`.
    fn factor(&self, w: &ModWord) -> Factor {
        let mut f = Factor {
            m: DdMat3::identity(),
            m_it: DdMat3::identity(),
            log2_m: 0,
            log2_it: 0,
        };
        let mut preserving = true;
        for syl in w.syllables() {
            let (g, g_it) = match syl {
                Syllable::A => {
                    preserving = !preserving;
                    continue;
                }
                Syllable::B => self.b,
                Syllable::B2 => self.b2,
            };
            // (M, −)·(G, ε) = (M·G⁻ᵀ, −ε)
            if preserving {
                f.m = f.m * g;
                f.m_it = f.m_it * g_it;
            } else {
                f.m = f.m * g_it;
                f.m_it = f.m_it * g;
            }
            f.rescale();
        }
        f
    }
}

/// `M = 2^{log2_m}·m` and `M⁻ᵀ = 2^{log2_it}·m_it`, the scales split off so
/// that long words stay in range.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Factor {
    pub m: DdMat3,
    pub m_it: DdMat3,
    pub log2_m: i32,
    pub log2_it: i32,
}

impl Factor {
    fn rescale(&mut self) {
        let (k, l) = (self.m.magnitude(), self.m_it.magnitude());
        if k.abs() > 64 {
            self.m = self.m.scaled_pow2(-k);
            self.log2_m += k;
        }
        if l.abs() > 64 {
            self.m_it = self.m_it.scaled_pow2(-l);
            self.log2_it += l;
        }
    }
}

/// `M·Mᵀ` for `M = 2^k·m'` with entries of `m'` of order one, and `ln 2^{2k}`.
pub(crate) fn gram_scaled(m: &DdMat3) -> (Mat3, f64) {
    let k = m.magnitude();
    let m = m.scaled_pow2(-k);
    let g = m * m.transpose();
    (g.to_f64(), 2.0 * k as f64 * std::f64::consts::LN_2)
}

/// The point `M·Mᵀ` from `M` and `M⁻ᵀ`: the top eigenvectors of `MMᵀ` and of
/// its inverse `M⁻ᵀM⁻¹` are both well conditioned however large the spread.
pub(crate) fn point_of_factor(f: &Factor) -> Result<Point> {
    let (g, lg) = gram_scaled(&f.m);
    let (h, lh) = gram_scaled(&f.m_it);
    let lg = lg + 2.0 * f.log2_m as f64 * std::f64::consts::LN_2;
    let lh = lh + 2.0 * f.log2_it as f64 * std::f64::consts::LN_2;
    let eg = linalg::sym_eigen(&g);
    let eh = linalg::sym_eigen(&h);
    if !(eg.values[0] > 0.0 && eh.values[0] > 0.0 && lg.is_finite() && lh.is_finite()) {
        return Err(GeomError::Domain(
            "orbit point is not positive definite".into(),
        ));
    }
    let l1 = eg.values[0].ln() + lg;
    let l3 = -(eh.values[0].ln() + lh);
    if l1 - l3 < 2.0 {
        return Point::new(linalg::assemble(&eg.vectors, &eg.values));
    }
    let u1 = eg.vectors.column(0).into_owned();
    let v = eh.vectors.column(0).into_owned();
    let u3 = (v - u1 * u1.dot(&v)).normalize();
    let u2 = u3.cross(&u1);
    let frame = Mat3::from_columns(&[u1, u2, u3]);
    Ok(Point::from_log_eigen(
        frame,
        linalg::Vec3::new(l1, -l1 - l3, l3),
    ))
}

/// The orbit point `ρ(w)x` seen from `x`, that is `B⁻¹·ρ(w)x·B⁻ᵀ` for
/// `x = B·Bᵀ`. Stays accurate for orbit points far beyond the range where
/// `ρ(w)x` itself can be stored.
pub fn orbit_point_from_x(rep: &Representation, w: &ModWord) -> Result<Point> {
    point_of_factor(&CenteredGenerators::new(rep).factor(w))
}

/// `(M, M⁻ᵀ)` for each word, with `ρ(w)x` seen from `x` equal to `M·Mᵀ`. For
/// words with an even number of `a`, `M` is the linear part of `ρ(w)` in the
/// gauge of `x` and multiplies along products.
pub(crate) fn centered_factors(rep: &Representation, words: &[ModWord]) -> Vec<Factor> {
    let gens = CenteredGenerators::new(rep);
    words.iter().map(|w| gens.factor(w)).collect()
}

/// Several orbit points seen from `x`, sharing the generator set-up.
pub fn orbit_points_from_x(rep: &Representation, words: &[ModWord]) -> Result<Vec<Point>> {
    let gens = CenteredGenerators::new(rep);
    words
        .iter()
        .map(|w| point_of_factor(&gens.factor(w)))
        .collect()
}

/// The `SL₃(ℝ)` matrix of `ρ(w)` for `w` in the index-two subgroup.
pub fn matrix_of(rep: &Representation, w: &ModWord) -> Result<Mat3> {
    Ok(matrix_dd(rep, w)?.to_f64())
}

/// Cartan projection of `ρ(w)` from the top singular values of `ρ(w)` and
/// `ρ(w⁻¹)`, both accumulated in double-double; stays accurate when the
/// smallest singular value is far below the rounding level of the largest.
pub fn cartan_of_word(rep: &Representation, w: &ModWord) -> Result<CartanVector> {
    let top = |m: DdMat3| {
        let (g, lg) = gram_scaled(&m);
        0.5 * (linalg::sym_eigen(&g).values[0].ln() + lg)
    };
    Ok(cartan_from_extremes(
        top(matrix_dd(rep, w)?),
        top(matrix_dd(rep, &w.inverse())?),
    ))
}

/// Largest entry of `ρ(a)² − I` and `ρ(b)³ − I`, from the double-double
/// matrices: `(x, −)·(x, −) = (x·x⁻¹, +)`.
pub fn relator_residual(rep: &Representation) -> f64 {
    let (c, s) = third_turn();
    let r = DdMat3::rotation(c, s);
    let dev = |m: DdMat3| (m.to_f64() - Mat3::identity()).amax();
    dev(rep.x_dd * rep.x_inv_dd).max(dev(r * r * r))
}

/// `tr ρ(w)` with the sum taken before rounding.
pub fn trace_of(rep: &Representation, w: &ModWord) -> Result<f64> {
    Ok(f64::from(matrix_dd(rep, w)?.trace()))
}

fn closed_form_dd(s: TwoFloat, t: TwoFloat, theta: TwoFloat) -> TwoFloat {
    let c2s = precise::sinh_cosh(dd(2.0) * s).1;
    let c2t = precise::sinh_cosh(dd(2.0) * t).1;
    let sth = theta.sin();
    let shs = precise::sinh_cosh(s).0;
    let sht = precise::sinh_cosh(t).0;
    let sh4 = (shs * shs) * (shs * shs);
    dd(-1.5) * c2s * c2t + dd(2.25) * c2s * c2s
        - dd(0.75)
        - dd(3.0) * (sth * sth) * sh4 * (sht * sht)
}

/// `−(3/2)cosh 2s cosh 2t + (9/4)cosh² 2s − 3/4 − 3 sin²θ sinh⁴ s sinh² t`.
pub fn trace_baba_closed_form(c: &Coordinates) -> f64 {
    f64::from(closed_form_dd(dd(c.s), dd(c.t), dd(c.theta)))
}

pub fn baba() -> ModWord {
    "baba".parse().expect("valid word")
}

/// `b²aba`, the product of `b` with the peripheral element.
pub fn b2aba() -> ModWord {
    "Baba".parse().expect("valid word")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// The upper bound `tr ≤ bound` being tested.
    pub bound: f64,
    pub holds: bool,
    /// Whether `|tr| ≥ |bound|`.
    pub magnitude_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub word: String,
    pub numeric_trace: f64,
    pub closed_form: Option<f64>,
    /// Trace of the inverse word, when compared.
    pub inverse_trace: Option<f64>,
    pub bound: Option<BoundCheck>,
    pub residual: Option<f64>,
}

/// Numeric trace of `ρ(baba)` against the closed form.
pub fn trace_baba_report(rep: &Representation) -> Result<TraceReport> {
    let w = baba();
    let numeric = matrix_of(rep, &w)?.trace();
    let closed = rep.coords.map(|c| trace_baba_closed_form(&c));
    Ok(TraceReport {
        word: w.to_string(),
        numeric_trace: numeric,
        closed_form: closed,
        inverse_trace: None,
        bound: None,
        residual: closed.map(|c| (numeric - c).abs()),
    })
}

/// Compares `tr ρ(baba)` with `tr ρ(baba)⁻¹`.
pub fn trace_symmetry_check(rep: &Representation) -> TraceReport {
    let w = baba();
    let fwd = trace_of(rep, &w).expect("baba is even");
    let inv = trace_of(rep, &w.inverse()).expect("inverse of an even word is even");
    TraceReport {
        word: w.to_string(),
        numeric_trace: fwd,
        closed_form: None,
        inverse_trace: Some(inv),
        bound: None,
        residual: Some((fwd - inv).abs()),
    }
}

fn surface_rhs(s: f64, theta: f64) -> f64 {
    let c2s = (2.0 * s).cosh();
    let q = theta.sin().powi(2) * s.sinh().powi(4);
    (9.0 * c2s * c2s + 1.0 + 6.0 * q) / (6.0 * (c2s + q))
}

/// The `t ≥ 0` with `tr ρ(baba) = −1` at `(s, t, θ)`.
pub fn schwartz_t(s: f64, theta: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite() && theta.is_finite()) {
        return Err(GeomError::InvalidArgument(format!(
            "invalid (s, θ) = ({s}, {theta})"
        )));
    }
    let rhs = surface_rhs(s, theta);
    if !(rhs >= 1.0) {
        return Err(GeomError::Domain(format!(
            "surface equation gives cosh 2t = {rhs} < 1 at s = {s}, θ = {theta}"
        )));
    }
    let t0 = rhs.acosh() / 2.0;
    // One Newton step on the closed form in double-double.
    let (sd, td, thd) = (dd(s), dd(t0), dd(theta));
    let f = closed_form_dd(sd, td, thd) + dd(1.0);
    let sth = thd.sin();
    let shs = precise::sinh_cosh(sd).0;
    let slope = dd(-3.0)
        * precise::sinh_cosh(dd(2.0) * td).0
        * (precise::sinh_cosh(dd(2.0) * sd).1 + (sth * sth) * (shs * shs) * (shs * shs));
    if f64::from(slope) == 0.0 {
        return Ok(t0);
    }
    Ok(f64::from(td - precise::div(f, slope)).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuchsianClass {
    TypeI,
    TypeII,
    Both,
    NonFuchsian,
}

impl fmt::Display for FuchsianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuchsianClass::TypeI => "typeI",
            FuchsianClass::TypeII => "typeII",
            FuchsianClass::Both => "both",
            FuchsianClass::NonFuchsian => "non-fuchsian",
        })
    }
}

pub fn fuchsian_classify(c: &Coordinates, tol: f64) -> FuchsianClass {
    match (c.s <= tol, c.t <= tol) {
        (true, true) => FuchsianClass::Both,
        (true, false) => FuchsianClass::TypeI,
        (false, true) => FuchsianClass::TypeII,
        (false, false) => FuchsianClass::NonFuchsian,
    }
}

type CVec3 = [Complex64; 3];

fn cdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

fn cnorm(a: &CVec3) -> f64 {
    cdot(a, a).re.sqrt()
}

fn capply(m: &Mat3, v: &CVec3) -> CVec3 {
    std::array::from_fn(|i| (0..3).map(|j| v[j] * m[(i, j)]).sum())
}

/// Unit eigenvectors of a real matrix with distinct eigenvalues; a null
/// vector of `M − λI` is the cross product of two of its rows.
fn complex_eigenvectors(m: &Mat3) -> Vec<CVec3> {
    m.complex_eigenvalues()
        .iter()
        .map(|&lambda| {
            let rows: Vec<CVec3> = (0..3)
                .map(|i| {
                    std::array::from_fn(|j| {
                        let d = if i == j {
                            lambda
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        Complex64::new(m[(i, j)], 0.0) - d
                    })
                })
                .collect();
            let mut best: CVec3 = [Complex64::new(0.0, 0.0); 3];
            let mut best_norm = -1.0;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let (a, b) = (&rows[i], &rows[j]);
                let c = [
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ];
                let n = cnorm(&c);
                if n > best_norm {
                    best_norm = n;
                    best = c;
                }
            }
            best.map(|z| z / best_norm)
        })
        .collect()
}

/// Sine of the angle between `v` and `M v`, or `0` for `M v = 0`.
fn eigen_defect(m: &Mat3, v: &CVec3) -> f64 {
    let mv = capply(m, v);
    let n = cnorm(&mv);
    if n == 0.0 {
        return 0.0;
    }
    let lambda = cdot(v, &mv);
    let r: CVec3 = std::array::from_fn(|i| mv[i] - v[i] * lambda);
    cnorm(&r) / n
}

fn common_eigenvector(m1: &Mat3, m2: &Mat3, tol: f64) -> bool {
    complex_eigenvectors(m1)
        .iter()
        .any(|v| eigen_defect(m2, v) <= tol)
}

/// Whether `ρ(b)` and `ρ(aba)`, which generate the image of the index-two
/// subgroup, share an invariant line or plane over `ℂ`.
pub fn is_reducible(rep: &Representation, tol: f64) -> bool {
    let mb = matrix_of(rep, &"b".parse().expect("valid word")).expect("even word");
    let maba = matrix_of(rep, &"aba".parse().expect("valid word")).expect("even word");
    let dual = |m: &Mat3| m.try_inverse().map(|i| i.transpose());
    if common_eigenvector(&mb, &maba, tol) {
        return true;
    }
    match (dual(&mb), dual(&maba)) {
        (Some(a), Some(b)) => common_eigenvector(&a, &b, tol),
        _ => false,
    }
}

/// `tr ρ(b²aba)` at a point of the Schwartz surface, tested against the
/// upper bound `−4`.
pub fn trace_b2aba_bound_check(rep: &Representation) -> Result<TraceReport> {
    let on_surface = trace_of(rep, &baba())?;
    if (on_surface + 1.0).abs() > SURFACE_TOL {
        return Err(GeomError::Precondition(format!(
            "representation is off the Schwartz surface (tr ρ(baba) = {on_surface})"
        )));
    }
    let w = b2aba();
    let tr = trace_of(rep, &w)?;
    let bound = -4.0;
    Ok(TraceReport {
        word: w.to_string(),
        numeric_trace: tr,
        closed_form: None,
        inverse_trace: None,
        bound: Some(BoundCheck {
            bound,
            holds: tr <= bound + 1e-6,
            magnitude_holds: tr.abs() >= bound.abs() - 1e-6,
        }),
        residual: None,
    })
}

/// Characteristic polynomial `x³ + c₂x² + c₁x + c₀` of `ρ(w)` as `[c₂, c₁, c₀]`.
pub fn characteristic_polynomial(rep: &Representation, w: &ModWord) -> Result<[f64; 3]> {
    let m = matrix_dd(rep, w)?;
    let tr = m.trace();
    let tr_sq = (m * m).trace();
    let a = &m.0;
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    Ok([
        f64::from(-tr),
        f64::from((tr * tr - tr_sq) * dd(0.5)),
        f64::from(-det),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnipotencyReport {
    /// `[c₂, c₁, c₀]` of the characteristic polynomial.
    pub coefficients: [f64; 3],
    /// Largest coefficient deviation from `(x − 1)³ = x³ − 3x² + 3x − 1`.
    pub max_deviation: f64,
    /// Eigenvalues as `(re, im)` pairs.
    pub eigenvalues: Vec<(f64, f64)>,
    pub is_unipotent: bool,
}

/// Tests `ρ(baba)` for unipotency coefficientwise at tolerance `tol`.
pub fn unipotency_check(rep: &Representation, tol: f64) -> Result<UnipotencyReport> {
    let w = baba();
    let c = characteristic_polynomial(rep, &w)?;
    let target = [-3.0, 3.0, -1.0];
    let max_deviation = c
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let eig = matrix_of(rep, &w)?.complex_eigenvalues();
    Ok(UnipotencyReport {
        coefficients: c,
        max_deviation,
        eigenvalues: eig.iter().map(|z| (z.re, z.im)).collect(),
        is_unipotent: max_deviation <= tol,
    })
}

/// Rank of `M − λI` under a relative singular-value threshold.
pub fn shifted_rank(m: &Mat3, lambda: f64, tol: f64) -> usize {
    let a = m - Mat3::identity() * lambda;
    let sv = a.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&v| v > tol * top.max(1.0)).count()
}

/// Eigenvalues of an `SL₃` matrix sorted by real part, descending.
pub fn sorted_eigenvalues(m: &Mat3) -> Vec<Complex64> {
    let mut e: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| b.re.total_cmp(&a.re));
    e
}
