//! Asymptotic geometry in rank two: Cartan projection, the model chamber and
//! its canonical involution, the parallel set of the fixed line of
//! `R_{2π/3}`, coordinates adapted to it, ζ-angles, and flats spanned by
//! opposite flags.
//!
//! The chamber angle is measured in the trace-zero plane with the frame
//! `e₁ = (1,0,−1)/√2`, `e₂ = (1,−2,1)/√6`; it is `0` on the wall `λ₁ = λ₂`,
//! `π/3` on the wall `λ₂ = λ₃`, and `π/6` in the direction `(1,0,−1)`.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{self, svd_log, Mat3, Vec3};
use crate::symspace::{
    basis, distance, exp_map, log_map, log_map_eigen, wrap_two_pi, Point, SymMat3, TangentVector,
};

/// Distance from the walls below which a segment counts as singular.
pub const REGULARITY_MARGIN: f64 = 1e-6;
/// Smallest eigenvalue gap accepted when extracting frames.
pub const EIGEN_GAP_TOL: f64 = 1e-9;
/// Gradient tolerance for the nearest-point projections.
pub const PROJECTION_TOL: f64 = 1e-10;
pub const PROJECTION_MAX_ITER: usize = 500;
/// Smallest `|⟨line, point⟩|` across two flags accepted as general position.
pub const OPPOSITION_TOL: f64 = 1e-8;

/// Sorted log-singular values `λ₁ ≥ λ₂ ≥ λ₃` with `λ₁ + λ₂ + λ₃ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanVector {
    pub lambda: [f64; 3],
}

impl CartanVector {
    /// Sorts and removes the mean.
    pub fn new(values: [f64; 3]) -> Self {
        let mut v = values;
        v.sort_by(|a, b| b.total_cmp(a));
        let mean = (v[0] + v[1] + v[2]) / 3.0;
        CartanVector {
            lambda: [v[0] - mean, v[1] - mean, v[2] - mean],
        }
    }

    /// `λ₁ − λ₂`.
    pub fn gap12(&self) -> f64 {
        self.lambda[0] - self.lambda[1]
    }

    /// `λ₂ − λ₃`.
    pub fn gap23(&self) -> f64 {
        self.lambda[1] - self.lambda[2]
    }

    pub fn norm(&self) -> f64 {
        self.lambda.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `(−λ₃, −λ₂, −λ₁)`.
    pub fn opposite(&self) -> Self {
        CartanVector {
            lambda: [-self.lambda[2], -self.lambda[1], -self.lambda[0]],
        }
    }
}

pub fn cartan_projection(g: &Mat3) -> Result<CartanVector> {
    if g.determinant() == 0.0 {
        return Err(GeomError::Domain(
            "singular matrix has no Cartan projection".into(),
        ));
    }
    let svd = svd_log(g)?;
    let l = svd.log_sigma;
    if !l.iter().all(|v| v.is_finite()) {
        return Err(GeomError::Domain("singular values are not finite".into()));
    }
    Ok(CartanVector::new([l[0], l[1], l[2]]))
}

/// Cartan projection from the top log-singular values of `g` and of `g⁻¹`,
/// for determinant-one `g` whose smallest singular value is below working
/// precision.
pub fn cartan_from_extremes(log_top: f64, log_top_inverse: f64) -> CartanVector {
    let l1 = log_top;
    let l3 = -log_top_inverse;
    CartanVector::new([l1, -l1 - l3, l3])
}

/// A type angle in the model chamber `[0, π/3]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ChamberAngle(f64);

impl ChamberAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if !(-1e-12..=FRAC_PI_3 + 1e-12).contains(&phi) {
            return Err(GeomError::InvalidArgument(format!(
                "chamber angle {phi} outside [0, π/3]"
            )));
        }
        Ok(ChamberAngle(phi.clamp(0.0, FRAC_PI_3)))
    }

    /// The fixed point of the canonical involution.
    pub fn zeta() -> Self {
        ChamberAngle(FRAC_PI_6)
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_regular(&self) -> bool {
        self.0 > REGULARITY_MARGIN && self.0 < FRAC_PI_3 - REGULARITY_MARGIN
    }
}

/// Chamber angle of a Cartan vector.
pub fn chamber_angle(v: &CartanVector) -> Result<ChamberAngle> {
    chamber_angle_of(v.lambda)
}

pub(crate) fn chamber_angle_of(l: [f64; 3]) -> Result<ChamberAngle> {
    let x = (l[0] - l[2]) / 2f64.sqrt();
    let y = (l[0] - 2.0 * l[1] + l[2]) / 6f64.sqrt();
    if x.hypot(y) == 0.0 {
        return Err(GeomError::Domain("zero vector has no chamber angle".into()));
    }
    ChamberAngle::new(FRAC_PI_6 + y.atan2(x))
}

/// The canonical involution: reflection of the chamber about `π/6`.
pub fn iota(phi: ChamberAngle) -> ChamberAngle {
    ChamberAngle((FRAC_PI_3 - phi.0).clamp(0.0, FRAC_PI_3))
}

/// An ι-invariant closed interval `[lo, hi]` of the open chamber containing `π/6`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelInterval {
    lo: f64,
    hi: f64,
}

impl ModelInterval {
    /// `[π/6 − half_width, π/6 + half_width]`.
    pub fn around_zeta(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width < FRAC_PI_6) {
            return Err(GeomError::InvalidArgument(format!(
                "half width {half_width} must lie in (0, π/6)"
            )));
        }
        Ok(ModelInterval {
            lo: FRAC_PI_6 - half_width,
            hi: FRAC_PI_6 + half_width,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, phi: ChamberAngle) -> bool {
        phi.0 >= self.lo && phi.0 <= self.hi
    }
}

/// Eigenvalue gaps and regularity of the log-vector of a segment.
fn check_regular(logs: &Vec3) -> Result<ChamberAngle> {
    let phi = chamber_angle_of([logs[0], logs[1], logs[2]])?;
    if !phi.is_regular() || logs[0] - logs[1] < EIGEN_GAP_TOL || logs[1] - logs[2] < EIGEN_GAP_TOL {
        return Err(GeomError::NotRegular(format!(
            "chamber angle {:.3e} too close to a wall",
            phi.0
        )));
    }
    Ok(phi)
}

/// Type of the oriented segment `pq`.
pub fn segment_type(p: &Point, q: &Point) -> Result<ChamberAngle> {
    let (_, logs) = log_map_eigen(p, q)?;
    if logs.norm() < 1e-13 {
        return Err(GeomError::Domain(
            "segment type of a degenerate segment".into(),
        ));
    }
    chamber_angle_of([logs[0], logs[1], logs[2]])
}

/// Coordinates `(s, α, r, t, β)` adapted to the parallel set: the point is
/// `B·Bᵀ` with `B = exp(r·p₀ + t·R_{β/2} p₁ R_{−β/2}) · exp(s·R_α f₁ R_{−α})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelCoords {
    pub s: f64,
    pub alpha: f64,
    pub r: f64,
    pub t: f64,
    pub beta: f64,
}

impl ParallelCoords {
    /// The exponent `r·p₀ + t·R_{β/2} p₁ R_{−β/2}` of the parallel-set factor.
    pub fn parallel_exponent(&self) -> SymMat3 {
        let k = linalg::rotation_x(self.beta / 2.0);
        SymMat3::symmetrized(basis::p0() * self.r + k * basis::p1() * k.transpose() * self.t)
    }

    /// The exponent `s·R_α f₁ R_{−α}` of the fibre factor.
    pub fn fiber_exponent(&self) -> SymMat3 {
        let k = linalg::rotation_x(self.alpha);
        SymMat3::symmetrized(k * basis::f1() * k.transpose() * self.s)
    }
}

pub fn point_from_coords(c: &ParallelCoords) -> Result<Point> {
    if !(c.s >= 0.0 && c.t >= 0.0) {
        return Err(GeomError::InvalidArgument(
            "s and t must be non-negative".into(),
        ));
    }
    let u = c.parallel_exponent().eigen();
    let v = c.fiber_exponent().eigen();
    Point::from_graded(
        &u.vectors,
        &u.values,
        &(u.vectors.transpose() * v.vectors),
        &v.values,
    )
}

/// Orthogonal projection of a symmetric matrix onto the block-diagonal
/// subalgebra `diag(*, 2×2)`.
fn block_diagonal_part(m: &Mat3) -> Mat3 {
    let mut out = *m;
    out[(0, 1)] = 0.0;
    out[(1, 0)] = 0.0;
    out[(0, 2)] = 0.0;
    out[(2, 0)] = 0.0;
    out
}

fn diagonal_part(m: &Mat3) -> Mat3 {
    Mat3::from_diagonal(&m.diagonal())
}

/// Outcome of a nearest-point projection onto a totally geodesic submanifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub point: Point,
    pub distance: f64,
    pub iterations: usize,
}

/// Orthonormal basis of the block-diagonal traceless symmetric matrices.
fn block_basis() -> Vec<Mat3> {
    [basis::p0(), basis::p1(), basis::p2()]
        .into_iter()
        .map(|m| m / m.norm())
        .collect()
}

/// Orthonormal basis of the traceless diagonal matrices.
fn diagonal_basis() -> Vec<Mat3> {
    vec![
        Mat3::from_diagonal(&Vec3::new(1.0, -1.0, 0.0)) / 2f64.sqrt(),
        Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -2.0)) / 6f64.sqrt(),
    ]
}

fn tangent_at(n: &Point, basis: &[Mat3], x: &[f64]) -> TangentVector {
    let m = basis
        .iter()
        .zip(x)
        .fold(Mat3::zeros(), |acc, (b, c)| acc + b * *c);
    TangentVector {
        base: *n,
        vec: SymMat3::symmetrized(m),
    }
}

/// Coordinates of the gradient of `n ↦ −d(n, q)²/2` along the submanifold.
fn masked_gradient(n: &Point, q: &Point, basis: &[Mat3]) -> Result<Vec<f64>> {
    let v = log_map(n, q)?.vec;
    Ok(basis
        .iter()
        .map(|b| linalg::frob_inner(b, v.matrix()))
        .collect())
}

/// Minimizes `n ↦ d(n, q)²/2` over the totally geodesic submanifold through
/// `start` whose transported tangent space is spanned by the orthonormal
/// `basis` (assumed invariant under `n^{1/2}` for each of its points `n`).
///
/// Each step moves along the geodesic in the Newton direction computed from
/// a finite-difference Hessian of the masked gradient, falling back to the
/// masked gradient itself, and halves the step until the distance decreases.
fn project_totally_geodesic(q: &Point, basis: &[Mat3], start: Point) -> Result<Projection> {
    let k = basis.len();
    let mut n = start;
    let mut d = distance(&n, q)?;
    let mut grad_norm = f64::INFINITY;
    for it in 0..PROJECTION_MAX_ITER {
        let g = masked_gradient(&n, q, basis)?;
        grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm < PROJECTION_TOL {
            return Ok(Projection {
                point: n,
                distance: d,
                iterations: it,
            });
        }
        let h = 1e-6;
        let mut hess = nalgebra::DMatrix::<f64>::zeros(k, k);
        for j in 0..k {
            let mut e = vec![0.0; k];
            e[j] = h;
            let moved = exp_map(&n, &tangent_at(&n, basis, &e))?;
            let gj = masked_gradient(&moved, q, basis)?;
            for i in 0..k {
                hess[(i, j)] = (g[i] - gj[i]) / h;
            }
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let grad = nalgebra::DVector::from_vec(g.clone());
        let newton = hess
            .cholesky()
            .map(|c| c.solve(&grad))
            .filter(|x| x.dot(&grad) > 0.0);
        // Close to the minimum the distance test drowns in rounding, so a
        // short Newton step is taken as is.
        if let Some(x) = newton.as_ref().filter(|x| x.norm() < 1e-4) {
            let x: Vec<f64> = x.iter().copied().collect();
            n = exp_map(&n, &tangent_at(&n, basis, &x))?;
            d = distance(&n, q)?;
            continue;
        }
        let mut accepted = false;
        for dir in [newton, Some(grad)].into_iter().flatten() {
            let mut trial = 1.0;
            for _ in 0..60 {
                let x: Vec<f64> = dir.iter().map(|v| v * trial).collect();
                let cand = exp_map(&n, &tangent_at(&n, basis, &x))?;
                let dc = distance(&cand, q)?;
                if dc <= d {
                    n = cand;
                    d = dc;
                    accepted = true;
                    break;
                }
                trial *= 0.5;
            }
            if accepted {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    Err(GeomError::NoConvergence {
        iterations: PROJECTION_MAX_ITER,
        gradient_norm: grad_norm,
    })
}

/// Nearest-point projection onto the parallel set of the fixed line of
/// `R_{2π/3}`, the block-diagonal points `diag(b, C)`.
pub fn project_to_parallel_set(q: &Point) -> Result<Projection> {
    project_totally_geodesic(q, &block_basis(), parallel_start(q))
}

/// Writing `q = n^{1/2} e^{W} n^{1/2}` with `W` off the blocks, even powers of
/// `W` are block-diagonal, so the block parts `C` of `q` and `A` of `q⁻¹`
/// satisfy `n A n = C` and `n` is the geometric mean of `A⁻¹` and `C`.
/// Falls back to `exp` of the block part of `log q` when the assembled
/// matrices are too ill-conditioned.
fn parallel_start(q: &Point) -> Point {
    let block =
        |p: &Point| Point::new(*SymMat3::symmetrized(block_diagonal_part(&p.matrix())).matrix());
    let mean = match (block(q), block(&q.inverse())) {
        (Ok(c), Ok(a)) => crate::symspace::midpoint(&a.inverse(), &c).ok(),
        _ => None,
    };
    mean.unwrap_or_else(|| {
        Point::exp_sym(&SymMat3::symmetrized(block_diagonal_part(q.log().matrix())))
    })
}

pub fn is_block_diagonal(p: &Point, tol: f64) -> bool {
    let l = p.log();
    let m = l.matrix();
    m[(0, 1)].abs().max(m[(0, 2)].abs()) <= tol * (1.0 + l.norm())
}

pub fn coords_from_point(p: &Point) -> Result<ParallelCoords> {
    let proj = project_to_parallel_set(p)?;
    let u = *proj.point.log().matrix() * 0.5;
    let r = u[(0, 0)] / 2.0;
    let a = (u[(1, 1)] - u[(2, 2)]) / 2.0;
    let b = u[(1, 2)];
    let t = 2.0 * a.hypot(b);
    let beta = if t > 0.0 {
        wrap_two_pi(b.atan2(a))
    } else {
        0.0
    };
    let fiber = log_map(&proj.point, p)?.vec;
    let f = fiber.matrix();
    let s = f[(0, 1)].hypot(f[(0, 2)]) / 2.0;
    let alpha = if s > 0.0 {
        wrap_two_pi(f[(0, 2)].atan2(f[(0, 1)]))
    } else {
        0.0
    };
    Ok(ParallelCoords {
        s,
        alpha,
        r,
        t,
        beta,
    })
}

/// Angle at `p` between the ζ-directions of the Weyl sectors containing
/// `q` and `q2`.
pub fn zeta_angle(p: &Point, q: &Point, q2: &Point) -> Result<f64> {
    let z1 = zeta_direction(p, q)?;
    let z2 = zeta_direction(p, q2)?;
    crate::symspace::angle_between(&z1, &z2)
}

/// Unit ζ-direction `U·diag(1,0,−1)·Uᵀ/√2` of the sector at `p` containing `q`.
pub(crate) fn zeta_direction(p: &Point, q: &Point) -> Result<SymMat3> {
    let (frame, logs) = log_map_eigen(p, q)?;
    check_regular(&logs)?;
    let z = linalg::assemble(&frame, &Vec3::new(1.0, 0.0, -1.0)) / 2f64.sqrt();
    Ok(SymMat3::symmetrized(z))
}

/// An incident point–line pair of the projective plane, both as unit vectors
/// defined up to sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub point: [f64; 3],
    pub line: [f64; 3],
}

impl Flag {
    pub fn new(point: Vec3, line: Vec3) -> Result<Self> {
        let (pn, ln) = (point.norm(), line.norm());
        if !(pn > 0.0 && ln > 0.0) {
            return Err(GeomError::InvalidArgument(
                "flag vectors must be nonzero".into(),
            ));
        }
        let (p, l) = (point / pn, line / ln);
        if p.dot(&l).abs() > 1e-10 {
            return Err(GeomError::InvalidArgument(format!(
                "flag is not incident (⟨line, point⟩ = {:.3e})",
                p.dot(&l)
            )));
        }
        Ok(Flag {
            point: p.into(),
            line: l.into(),
        })
    }

    pub fn point(&self) -> Vec3 {
        Vec3::from(self.point)
    }

    pub fn line(&self) -> Vec3 {
        Vec3::from(self.line)
    }
}

fn scaled_apply(p: &Point, power: f64, v: &Vec3) -> Vec3 {
    // p^{power} v up to a positive factor, without overflow.
    let l = p.log_eigenvalues() * power;
    let top = l.max();
    let coeffs = p.frame().transpose() * v;
    let scaled = Vec3::from_fn(|i, _| coeffs[i] * (l[i] - top).exp());
    let out = p.frame() * scaled;
    out / out.norm()
}

/// The flag at infinity of the Weyl sector at `p` containing `q`: the most
/// expanded direction and the plane of the two most expanded directions.
pub fn flag_of_sector(p: &Point, q: &Point) -> Result<Flag> {
    let (frame, logs) = log_map_eigen(p, q)?;
    check_regular(&logs)?;
    let point = scaled_apply(p, 0.5, &frame.column(0).into_owned());
    let line = scaled_apply(p, -0.5, &frame.column(2).into_owned());
    // Incidence holds exactly in exact arithmetic; remove the rounding residue.
    let line = line - point * point.dot(&line);
    Flag::new(point, line)
}

/// A maximal flat `{ g · diag(e^{d}) · gᵀ : d₁ + d₂ + d₃ = 0 }`, with the
/// columns of `g` pointing to the vertex of `σ₊`, the common vertex line, and
/// the vertex of `σ₋`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flat {
    frame: Mat3,
}

impl Flat {
    pub fn diagonal() -> Self {
        Flat {
            frame: Mat3::identity(),
        }
    }

    pub fn frame(&self) -> &Mat3 {
        &self.frame
    }

    pub fn point_at(&self, d: &Vec3) -> Result<Point> {
        Point::from_graded(&Mat3::identity(), &Vec3::zeros(), &self.frame, &(0.5 * d))
    }

    /// The flat as seen after moving it to the diagonal one.
    fn pull_back(&self, p: &Point) -> Result<Point> {
        let inv = self
            .frame
            .try_inverse()
            .ok_or_else(|| GeomError::Domain("flat frame is singular".into()))?;
        Point::from_graded(
            &Mat3::identity(),
            &Vec3::zeros(),
            &(inv * p.frame()),
            &(0.5 * p.log_eigenvalues()),
        )
    }
}

/// The unique maximal flat joining two opposite chambers at infinity.
pub fn flat_from_flags(minus: &Flag, plus: &Flag) -> Result<Flat> {
    let (pp, lp) = (plus.point(), plus.line());
    let (pm, lm) = (minus.point(), minus.line());
    let c1 = lm.dot(&pp).abs();
    let c2 = lp.dot(&pm).abs();
    if c1 < OPPOSITION_TOL || c2 < OPPOSITION_TOL {
        return Err(GeomError::Opposition(format!(
            "a point lies on the opposite line (|⟨l₋,p₊⟩| = {c1:.3e}, |⟨l₊,p₋⟩| = {c2:.3e})"
        )));
    }
    let mid = lp.cross(&lm);
    let mid_norm = mid.norm();
    if mid_norm < OPPOSITION_TOL {
        return Err(GeomError::Opposition("the two lines coincide".into()));
    }
    let mut g = Mat3::from_columns(&[pp, mid / mid_norm, pm]);
    let det = g.determinant();
    if det.abs() < OPPOSITION_TOL {
        return Err(GeomError::Opposition("flag frame is degenerate".into()));
    }
    if det < 0.0 {
        g.column_mut(1).neg_mut();
    }
    let det = g.determinant();
    Ok(Flat {
        frame: g / det.cbrt(),
    })
}

/// Nearest point of the flat to `p`, as flat coordinates `d` (summing to 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatProjection {
    pub coords: Vec3,
    pub distance: f64,
}

pub fn project_to_flat(p: &Point, flat: &Flat) -> Result<FlatProjection> {
    let pulled = flat.pull_back(p)?;
    let start = Point::exp_sym(&SymMat3::symmetrized(diagonal_part(pulled.log().matrix())));
    let proj = project_totally_geodesic(&pulled, &diagonal_basis(), start)?;
    let coords = proj.point.log().matrix().diagonal();
    Ok(FlatProjection {
        coords,
        distance: proj.distance,
    })
}

pub fn distance_to_flat(p: &Point, flat: &Flat) -> Result<f64> {
    Ok(project_to_flat(p, flat)?.distance)
}

/// Angle reduced to `[0, π)`.
pub fn wrap_pi(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}
