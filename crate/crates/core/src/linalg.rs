//! Small dense kernels for 3×3 matrices.
//!
//! Two primitives carry the whole crate:
//!
//! * [`sym_eigen`]: eigendecomposition of a moderately scaled symmetric matrix,
//!   eigenvalues sorted in descending order.
//! * [`graded_svd`]: singular value decomposition of `diag(e^a) · W · diag(e^b)`
//!   with `W` well conditioned (in practice orthogonal). The exponents may span
//!   hundreds of units, so singular values are returned as logarithms. The
//!   algorithm is row-sorted Householder QR with column pivoting followed by
//!   one-sided Jacobi on the transposed triangular factor, which keeps relative
//!   accuracy for graded matrices of this form.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::error::{GeomError, Result};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;

/// Largest spread of log-scales accepted by [`graded_svd`]. Squared entries
/// must stay inside the normal `f64` range.
pub const MAX_LOG_SPREAD: f64 = 600.0;

const JACOBI_MAX_SWEEPS: usize = 80;
const JACOBI_TOL: f64 = 4.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEigen {
    /// Descending.
    pub values: Vec3,
    /// Column `k` is the unit eigenvector of `values[k]`; the frame is a rotation.
    pub vectors: Mat3,
}

pub fn sym_eigen(m: &Mat3) -> SymEigen {
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = Vec3::new(
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    );
    let mut vectors = Mat3::from_columns(&[
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[1]).into_owned(),
        eig.eigenvectors.column(order[2]).into_owned(),
    ]);
    if vectors.determinant() < 0.0 {
        vectors.column_mut(2).neg_mut();
    }
    SymEigen { values, vectors }
}

/// `U · diag(f(λ)) · Uᵀ`.
pub fn assemble(vectors: &Mat3, values: &Vec3) -> Mat3 {
    vectors * Mat3::from_diagonal(values) * vectors.transpose()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradedSvd {
    /// Left singular vectors as columns, forming a rotation.
    pub left: Mat3,
    /// Natural logarithms of the singular values, descending.
    pub log_sigma: Vec3,
    /// Right singular vectors as columns.
    pub right: Mat3,
}

/// SVD of `diag(e^row_log) · w · diag(e^col_log)`.
pub fn graded_svd(row_log: &Vec3, w: &Mat3, col_log: &Vec3) -> Result<GradedSvd> {
    let mut shift = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for i in 0..3 {
        for j in 0..3 {
            let e = row_log[i] + col_log[j];
            shift = shift.max(e);
            lo = lo.min(e);
        }
    }
    if !shift.is_finite() || !lo.is_finite() {
        return Err(GeomError::Domain(
            "non-finite log-scale in graded product".into(),
        ));
    }
    if shift - lo > MAX_LOG_SPREAD {
        return Err(GeomError::Conditioning {
            ratio: (shift - lo).exp(),
            limit: MAX_LOG_SPREAD.exp(),
        });
    }
    let g = Mat3::from_fn(|i, j| (row_log[i] + col_log[j] - shift).exp() * w[(i, j)]);
    let svd = jacobi_svd_preconditioned(&g)?;
    Ok(GradedSvd {
        left: svd.left,
        log_sigma: svd.log_sigma.add_scalar(shift),
        right: svd.right,
    })
}

/// SVD of a plain matrix (no grading), logarithmic singular values.
pub fn svd_log(m: &Mat3) -> Result<GradedSvd> {
    let scale = m.amax();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(GeomError::Domain("matrix is zero or not finite".into()));
    }
    let svd = jacobi_svd_preconditioned(&(m / scale))?;
    Ok(GradedSvd {
        left: svd.left,
        log_sigma: svd.log_sigma.add_scalar(scale.ln()),
        right: svd.right,
    })
}

fn jacobi_svd_preconditioned(g: &Mat3) -> Result<GradedSvd> {
    // Row sorting by decreasing norm, then Householder QR with column pivoting.
    let mut row_perm = [0usize, 1, 2];
    let norms: Vec<f64> = (0..3).map(|i| g.row(i).norm()).collect();
    row_perm.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut a = Mat3::from_fn(|i, j| g[(row_perm[i], j)]);
    let mut col_perm = [0usize, 1, 2];
    let mut q = Mat3::identity();

    for k in 0..3 {
        // Column pivot on the trailing block.
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..3 {
            let n: f64 = (k..3).map(|i| a[(i, j)] * a[(i, j)]).sum();
            if n > best_norm {
                best_norm = n;
                best = j;
            }
        }
        if best != k {
            a.swap_columns(k, best);
            col_perm.swap(k, best);
        }
        if k == 2 {
            break;
        }
        // Householder reflector for a[k.., k].
        let x: Vec<f64> = (k..3).map(|i| a[(i, k)]).collect();
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let alpha = if x[0] > 0.0 { -alpha } else { alpha };
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|c| c * c).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in 0..3 {
            let dot: f64 = (k..3).map(|i| v[i - k] * a[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..3 {
                a[(i, j)] -= f * v[i - k];
            }
        }
        for i in 0..3 {
            let dot: f64 = (k..3).map(|c| q[(i, c)] * v[c - k]).sum();
            let f = 2.0 * dot / vnorm2;
            for c in k..3 {
                q[(i, c)] -= f * v[c - k];
            }
        }
        for i in (k + 1)..3 {
            a[(i, k)] = 0.0;
        }
    }
    // g[row_perm, :][:, col_perm] = q · r
    let r = a;

    // One-sided Jacobi on the columns of rᵀ.
    let mut x = r.transpose();
    let mut v = Mat3::identity();
    let mut converged = false;
    for sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in (i + 1)..3 {
                let alpha = x.column(i).norm_squared();
                let beta = x.column(j).norm_squared();
                let gamma = x.column(i).dot(&x.column(j));
                let ratio = gamma.abs() / (alpha * beta).sqrt();
                if gamma == 0.0 || ratio <= JACOBI_TOL {
                    continue;
                }
                worst = worst.max(ratio);
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..3 {
                    let xi = x[(k, i)];
                    let xj = x[(k, j)];
                    x[(k, i)] = c * xi - s * xj;
                    x[(k, j)] = s * xi + c * xj;
                    let vi = v[(k, i)];
                    let vj = v[(k, j)];
                    v[(k, i)] = c * vi - s * vj;
                    v[(k, j)] = s * vi + c * vj;
                }
            }
        }
        // Rounding can keep a pair cycling just above the threshold.
        if !rotated || (sweep >= JACOBI_MAX_SWEEPS / 2 && worst < 1e-13) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GeomError::NoConvergence {
            iterations: JACOBI_MAX_SWEEPS,
            gradient_norm: f64::NAN,
        });
    }

    // rᵀ v = u Σ, so r = v Σ uᵀ and g_perm = (q v) Σ uᵀ.
    let mut sig = [0.0f64; 3];
    let mut u = Mat3::zeros();
    for k in 0..3 {
        let n = x.column(k).norm();
        if !(n > 0.0) {
            return Err(GeomError::Domain("graded matrix is singular".into()));
        }
        sig[k] = n;
        u.set_column(k, &(x.column(k) / n));
    }
    let left_perm = q * v;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]));

    let mut left = Mat3::zeros();
    let mut right = Mat3::zeros();
    let mut log_sigma = Vec3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        log_sigma[dst] = sig[src].ln();
        for i in 0..3 {
            left[(row_perm[i], dst)] = left_perm[(i, src)];
            right[(col_perm[i], dst)] = u[(i, src)];
        }
    }
    if left.determinant() < 0.0 {
        left.column_mut(2).neg_mut();
        right.column_mut(2).neg_mut();
    }
    Ok(GradedSvd {
        left,
        log_sigma,
        right,
    })
}

/// Rotation `R_θ` about the first coordinate axis.
pub fn rotation_x(theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

pub fn is_orthogonal(m: &Mat3, tol: f64) -> bool {
    (m.transpose() * m - Mat3::identity()).amax() <= tol
}

/// Frobenius inner product `tr(uᵀv)`, which is `tr(uv)` on symmetric input.
pub fn frob_inner(u: &Mat3, v: &Mat3) -> f64 {
    u.component_mul(v).sum()
}
