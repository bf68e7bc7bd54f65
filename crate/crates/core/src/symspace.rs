//! The symmetric space of determinant-one positive-definite symmetric 3×3
//! matrices, with the trace-form metric `⟨u, v⟩ = tr(uv)` on traceless
//! symmetric matrices, and its full isometry group.
//!
//! Points are stored by their eigendecomposition in logarithmic form, so that
//! points whose eigenvalues span far more than the `f64` range of an assembled
//! matrix are still handled with relative accuracy. Relative positions
//! `p^{-1/2} q p^{-1/2}` are never assembled; they are obtained from a graded
//! SVD of `diag(e^{-l_p/2}) · U_pᵀU_q · diag(e^{l_q/2})`.
//!
//! Orientation-reversing isometries act through the contragredient
//! `M ↦ M^{-T}`: the pair `(A, reversing)` sends `p` to `A p⁻¹ Aᵀ`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{self, graded_svd, is_orthogonal, sym_eigen, Mat3, Vec3};

/// Relative symmetry defect accepted for symmetric input.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Largest eigenvalue ratio accepted when a point is built from an assembled matrix.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Determinant tolerance for isometry matrices.
pub const DET_TOL: f64 = 1e-10;
/// Symmetry tolerance in [`classify_involution`].
pub const INVOLUTION_SYMMETRY_TOL: f64 = 1e-8;

/// The basis of the tangent space at the identity adapted to the parallel set
/// of the fixed line of `R_{2π/3}`: `p0, p1, p2` span the parallel set and
/// `f1, f2` the fibre of the nearest-point projection.
pub mod basis {
    use super::Mat3;

    pub fn p0() -> Mat3 {
        Mat3::from_diagonal(&super::Vec3::new(2.0, -1.0, -1.0))
    }

    pub fn p1() -> Mat3 {
        Mat3::from_diagonal(&super::Vec3::new(0.0, 0.5, -0.5))
    }

    pub fn p2() -> Mat3 {
        Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0)
    }

    pub fn f1() -> Mat3 {
        Mat3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn f2() -> Mat3 {
        Mat3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0)
    }
}

/// A real symmetric 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat3(Mat3);

impl SymMat3 {
    pub fn new(m: Mat3) -> Result<Self> {
        let scale = m.norm();
        let defect = (m - m.transpose()).norm();
        if !m.iter().all(|v| v.is_finite()) {
            return Err(GeomError::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        if defect > SYMMETRY_TOL * scale {
            return Err(GeomError::InvalidArgument(format!(
                "matrix is not symmetric (defect {defect:.3e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: Mat3) -> Self {
        SymMat3(0.5 * (m + m.transpose()))
    }

    pub fn zero() -> Self {
        SymMat3(Mat3::zeros())
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        SymMat3(Mat3::from_diagonal(&Vec3::from(d)))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Norm induced by `tr(uv)`, i.e. the Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn inner(&self, other: &SymMat3) -> f64 {
        linalg::frob_inner(&self.0, &other.0)
    }

    pub fn traceless(&self) -> SymMat3 {
        SymMat3(self.0 - Mat3::identity() * (self.trace() / 3.0))
    }

    pub fn eigen(&self) -> linalg::SymEigen {
        sym_eigen(&self.0)
    }

    /// Conjugation `k · self · kᵀ`.
    pub fn conjugate(&self, k: &Mat3) -> SymMat3 {
        SymMat3::symmetrized(k * self.0 * k.transpose())
    }
}

impl Add for SymMat3 {
    type Output = SymMat3;
    fn add(self, rhs: SymMat3) -> SymMat3 {
        SymMat3(self.0 + rhs.0)
    }
}

impl Sub for SymMat3 {
    type Output = SymMat3;
    fn sub(self, rhs: SymMat3) -> SymMat3 {
        SymMat3(self.0 - rhs.0)
    }
}

impl Mul<f64> for SymMat3 {
    type Output = SymMat3;
    fn mul(self, rhs: f64) -> SymMat3 {
        SymMat3(self.0 * rhs)
    }
}

impl Neg for SymMat3 {
    type Output = SymMat3;
    fn neg(self) -> SymMat3 {
        SymMat3(-self.0)
    }
}

/// A point of the symmetric space: a positive-definite symmetric matrix of
/// determinant one, stored as `frame · diag(e^{log_eigs}) · frameᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    frame: Mat3,
    log_eigs: Vec3,
}

impl Point {
    pub fn identity() -> Self {
        Point {
            frame: Mat3::identity(),
            log_eigs: Vec3::zeros(),
        }
    }

    /// Builds a point from an assembled positive-definite matrix, rescaling to
    /// determinant one.
    pub fn new(m: Mat3) -> Result<Self> {
        let sym = SymMat3::new(m)?;
        let eig = sym.eigen();
        let (max, min) = (eig.values[0], eig.values[2]);
        if !(min > 0.0) {
            return Err(GeomError::Domain(format!(
                "matrix is not positive definite (smallest eigenvalue {min:.3e})"
            )));
        }
        let ratio = max / min;
        if ratio > CONDITION_LIMIT {
            return Err(GeomError::Conditioning {
                ratio,
                limit: CONDITION_LIMIT,
            });
        }
        Ok(Point::from_log_eigen(eig.vectors, eig.values.map(f64::ln)))
    }

    /// `frame · diag(e^{log_eigs}) · frameᵀ`, renormalized to determinant one.
    /// `frame` must be orthogonal.
    pub(crate) fn from_log_eigen(frame: Mat3, log_eigs: Vec3) -> Self {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| log_eigs[j].total_cmp(&log_eigs[i]));
        let mean = log_eigs.sum() / 3.0;
        let mut f = Mat3::from_columns(&[
            frame.column(order[0]).into_owned(),
            frame.column(order[1]).into_owned(),
            frame.column(order[2]).into_owned(),
        ]);
        if f.determinant() < 0.0 {
            f.column_mut(2).neg_mut();
        }
        let l = Vec3::new(
            log_eigs[order[0]] - mean,
            log_eigs[order[1]] - mean,
            log_eigs[order[2]] - mean,
        );
        Point {
            frame: f,
            log_eigs: l,
        }
    }

    /// The point `(G)(G)ᵀ` with `G = left · diag(e^{row}) · w · diag(e^{col})`.
    pub(crate) fn from_graded(left: &Mat3, row: &Vec3, w: &Mat3, col: &Vec3) -> Result<Self> {
        let svd = graded_svd(row, w, col)?;
        Ok(Point::from_log_eigen(left * svd.left, svd.log_sigma * 2.0))
    }

    /// `exp(v)` of a symmetric matrix; the trace part of `v` is discarded.
    pub fn exp_sym(v: &SymMat3) -> Self {
        let eig = v.eigen();
        Point::from_log_eigen(eig.vectors, eig.values)
    }

    /// Orthonormal eigenframe, columns ordered by descending eigenvalue.
    pub fn frame(&self) -> &Mat3 {
        &self.frame
    }

    /// Logarithms of the eigenvalues, descending, summing to zero.
    pub fn log_eigenvalues(&self) -> &Vec3 {
        &self.log_eigs
    }

    pub fn matrix(&self) -> Mat3 {
        linalg::assemble(&self.frame, &self.log_eigs.map(f64::exp))
    }

    pub fn log(&self) -> SymMat3 {
        SymMat3::symmetrized(linalg::assemble(&self.frame, &self.log_eigs))
    }

    pub fn inverse(&self) -> Point {
        Point::from_log_eigen(self.frame, -self.log_eigs)
    }

    /// `p^{power}` as a point.
    pub fn power(&self, power: f64) -> Point {
        Point::from_log_eigen(self.frame, self.log_eigs * power)
    }

    /// Distance to the identity, `‖log p‖`.
    pub fn norm(&self) -> f64 {
        self.log_eigs.norm()
    }

    /// Eigendecomposition of `p^{-1/2} q p^{-1/2}` in log form.
    fn relative(&self, q: &Point) -> Result<(Mat3, Vec3)> {
        let svd = graded_svd(
            &(-0.5 * self.log_eigs),
            &(self.frame.transpose() * q.frame),
            &(0.5 * q.log_eigs),
        )?;
        let mut logs = svd.log_sigma * 2.0;
        let mean = logs.sum() / 3.0;
        logs.add_scalar_mut(-mean);
        Ok((self.frame * svd.left, logs))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point(log-eigenvalues {:?})", self.log_eigs.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Preserving,
    Reversing,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Preserving => Parity::Reversing,
            Parity::Reversing => Parity::Preserving,
        }
    }

    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Preserving
        } else {
            Parity::Reversing
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Structure {
    General,
    /// The matrix is orthogonal.
    Orthogonal,
    /// The isometry is the inversion at this point (matrix = the point).
    InversionAt(Point),
}

/// An isometry: a determinant-one matrix `A` together with an orientation
/// parity. Preserving isometries act by `p ↦ A p Aᵀ`, reversing ones by
/// `p ↦ A p⁻¹ Aᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    mat: Mat3,
    parity: Parity,
    structure: Structure,
}

impl Isometry {
    pub fn new(mat: Mat3, parity: Parity) -> Result<Self> {
        let det = mat.determinant();
        if !((det - 1.0).abs() <= DET_TOL) {
            return Err(GeomError::InvalidArgument(format!(
                "isometry matrix must have determinant 1 (got {det:.12})"
            )));
        }
        Ok(Isometry::from_parts(mat, parity))
    }

    /// Rescales an invertible matrix by the real cube root of its determinant.
    pub fn normalized(mat: Mat3, parity: Parity) -> Result<Self> {
        let det = mat.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(GeomError::InvalidArgument("matrix is singular".into()));
        }
        Ok(Isometry::from_parts(mat / det.cbrt(), parity))
    }

    pub(crate) fn from_parts(mat: Mat3, parity: Parity) -> Self {
        let structure = if is_orthogonal(&mat, 1e-14) {
            Structure::Orthogonal
        } else {
            Structure::General
        };
        Isometry {
            mat,
            parity,
            structure,
        }
    }

    pub fn identity() -> Self {
        Isometry {
            mat: Mat3::identity(),
            parity: Parity::Preserving,
            structure: Structure::Orthogonal,
        }
    }

    /// Rotation by `theta` about the first coordinate axis.
    pub fn rotation(theta: f64) -> Self {
        Isometry {
            mat: linalg::rotation_x(theta),
            parity: Parity::Preserving,
            structure: Structure::Orthogonal,
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.mat
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn inverse(&self) -> Isometry {
        match self.parity {
            Parity::Preserving => {
                let inv = self
                    .mat
                    .try_inverse()
                    .unwrap_or_else(|| Mat3::from_element(f64::NAN));
                Isometry {
                    mat: inv,
                    parity: Parity::Preserving,
                    structure: match self.structure {
                        Structure::Orthogonal => Structure::Orthogonal,
                        _ => Structure::General,
                    },
                }
            }
            // (A, −)⁻¹ = (Aᵀ, −)
            Parity::Reversing => Isometry {
                mat: self.mat.transpose(),
                parity: Parity::Reversing,
                structure: match self.structure {
                    Structure::General => Structure::General,
                    s => s,
                },
            },
        }
    }
}

/// Inverse transpose.
pub(crate) fn contragredient(m: &Mat3) -> Mat3 {
    m.try_inverse()
        .map(|i| i.transpose())
        .unwrap_or_else(|| Mat3::from_element(f64::NAN))
}

pub fn compose(g: &Isometry, h: &Isometry) -> Isometry {
    let mat = match g.parity {
        Parity::Preserving => g.mat * h.mat,
        Parity::Reversing => match h.structure {
            // x* = x⁻¹ for a symmetric point matrix; orthogonal matrices are self-contragredient.
            Structure::Orthogonal => g.mat * h.mat,
            Structure::InversionAt(x) => g.mat * x.inverse().matrix(),
            Structure::General => g.mat * contragredient(&h.mat),
        },
    };
    Isometry::from_parts(mat, g.parity.times(h.parity))
}

pub fn act(g: &Isometry, p: &Point) -> Result<Point> {
    let l = match g.parity {
        Parity::Preserving => p.log_eigs,
        Parity::Reversing => -p.log_eigs,
    };
    match g.structure {
        Structure::Orthogonal => Ok(Point::from_log_eigen(g.mat * p.frame, l)),
        Structure::InversionAt(x) => {
            // x p⁻¹ x = (U_x e^{l_x} U_xᵀ U_p e^{-l_p/2}) (…)ᵀ
            Point::from_graded(
                &x.frame,
                &x.log_eigs,
                &(x.frame.transpose() * p.frame),
                &(0.5 * l),
            )
        }
        Structure::General => Point::from_graded(
            &Mat3::identity(),
            &Vec3::zeros(),
            &(g.mat * p.frame),
            &(0.5 * l),
        ),
    }
}

/// The inversion at `x`: `p ↦ x p⁻¹ x`.
pub fn inversion_at(x: &Point) -> Isometry {
    Isometry {
        mat: x.matrix(),
        parity: Parity::Reversing,
        structure: Structure::InversionAt(*x),
    }
}

/// `exp(v)` for a symmetric (nominally traceless) matrix.
pub fn spd_exp(v: &Mat3) -> Result<Point> {
    Ok(Point::exp_sym(&SymMat3::new(*v)?))
}

pub fn spd_log(m: &Mat3) -> Result<SymMat3> {
    Ok(Point::new(*m)?.log())
}

/// A tangent vector at `base`, stored transported to the identity by
/// `base^{-1/2}`: the geodesic is `t ↦ base^{1/2} exp(t·vec) base^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub vec: SymMat3,
}

impl TangentVector {
    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn scaled(&self, factor: f64) -> TangentVector {
        TangentVector {
            base: self.base,
            vec: self.vec * factor,
        }
    }
}

pub fn log_map(p: &Point, q: &Point) -> Result<TangentVector> {
    let (frame, logs) = p.relative(q)?;
    Ok(TangentVector {
        base: *p,
        vec: SymMat3::symmetrized(linalg::assemble(&frame, &logs)),
    })
}

/// Eigenframe and descending log-eigenvalues of the transported log map.
pub(crate) fn log_map_eigen(p: &Point, q: &Point) -> Result<(Mat3, Vec3)> {
    p.relative(q)
}

pub fn exp_map(p: &Point, v: &TangentVector) -> Result<Point> {
    let eig = v.vec.eigen();
    exp_map_eigen(p, &eig.vectors, &eig.values)
}

pub(crate) fn exp_map_eigen(p: &Point, frame: &Mat3, logs: &Vec3) -> Result<Point> {
    // p^{1/2} W e^{μ} Wᵀ p^{1/2} = (U_p e^{l_p/2} U_pᵀ W e^{μ/2}) (…)ᵀ
    Point::from_graded(
        &p.frame,
        &(0.5 * p.log_eigs),
        &(p.frame.transpose() * frame),
        &(0.5 * logs),
    )
}

pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    Ok(p.relative(q)?.1.norm())
}

pub fn midpoint(p: &Point, q: &Point) -> Result<Point> {
    let (frame, logs) = p.relative(q)?;
    exp_map_eigen(p, &frame, &(0.5 * logs))
}

/// Angle at `p` of the geodesic triangle `p q r` under the trace metric.
pub fn angle_at(p: &Point, q: &Point, r: &Point) -> Result<f64> {
    let u = log_map(p, q)?.vec;
    let v = log_map(p, r)?.vec;
    angle_between(&u, &v)
}

/// Angle between two nonzero symmetric matrices; accurate near 0 and π.
pub fn angle_between(u: &SymMat3, v: &SymMat3) -> Result<f64> {
    let (nu, nv) = (u.norm(), v.norm());
    if !(nu > 1e-14) || !(nv > 1e-14) {
        return Err(GeomError::Domain("angle at a coincident point".into()));
    }
    let a = *u.matrix() / nu;
    let b = *v.matrix() / nv;
    Ok(2.0 * (a - b).norm().atan2((a + b).norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionKind {
    Inversion,
    TypeIIPlaneFix,
    NotInvolution,
}

/// Classifies an orientation-reversing isometry `(A, reversing)`. It is an
/// involution iff `A` is symmetric; positive definite `A` gives an inversion,
/// indefinite `A` the reflection-like isometry fixing a type II plane.
pub fn classify_involution(g: &Isometry) -> Result<InvolutionKind> {
    if g.parity != Parity::Reversing {
        return Err(GeomError::InvalidArgument(
            "classification applies to orientation-reversing isometries".into(),
        ));
    }
    let a = g.mat;
    if (a - a.transpose()).norm() > INVOLUTION_SYMMETRY_TOL * a.norm() {
        return Ok(InvolutionKind::NotInvolution);
    }
    let eig = sym_eigen(&a);
    let positive = eig.values.iter().filter(|&&v| v > 0.0).count();
    Ok(match positive {
        3 => InvolutionKind::Inversion,
        1 | 2 => InvolutionKind::TypeIIPlaneFix,
        _ => InvolutionKind::NotInvolution,
    })
}

/// Angle in `[0, 2π)`.
pub(crate) fn wrap_two_pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}
