//! Double-double 3×3 matrices for the trace computations, where the values
//! reach ~10⁶ while agreement is required to ~10⁻⁹.

use std::ops::Mul;

use twofloat::TwoFloat;

use crate::linalg::Mat3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdMat3(pub [[TwoFloat; 3]; 3]);

pub fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

impl DdMat3 {
    pub fn identity() -> Self {
        let mut m = [[dd(0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = dd(1.0);
        }
        DdMat3(m)
    }

    pub fn diagonal(d: [TwoFloat; 3]) -> Self {
        let mut m = [[dd(0.0); 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        DdMat3(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[dd(0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[j][i];
            }
        }
        DdMat3(m)
    }

    pub fn trace(&self) -> TwoFloat {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// `2^k · self`, exact.
    pub fn scaled_pow2(&self, k: i32) -> Self {
        let f = dd(2f64.powi(k));
        DdMat3(self.0.map(|row| row.map(|v| v * f)))
    }

    /// `⌊log₂ max |m_ij|⌋`, or 0 for the zero matrix.
    pub fn magnitude(&self) -> i32 {
        let big = self
            .0
            .iter()
            .flatten()
            .map(|v| f64::from(*v).abs())
            .fold(0.0, f64::max);
        if big > 0.0 {
            big.log2().floor() as i32
        } else {
            0
        }
    }

    pub fn to_f64(&self) -> Mat3 {
        Mat3::from_fn(|i, j| f64::from(self.0[i][j]))
    }

    /// Rotation by `theta` about the first axis.
    pub fn rotation(cos: TwoFloat, sin: TwoFloat) -> Self {
        let z = dd(0.0);
        DdMat3([[dd(1.0), z, z], [z, cos, -sin], [z, sin, cos]])
    }
}

impl Mul for DdMat3 {
    type Output = DdMat3;
    fn mul(self, rhs: DdMat3) -> DdMat3 {
        let mut m = [[dd(0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut acc = dd(0.0);
                for k in 0..3 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                *v = acc;
            }
        }
        DdMat3(m)
    }
}

/// `a / b` by long division on the leading parts; the division operator of
/// `TwoFloat` is only accurate to double precision.
pub fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let bh = f64::from(b);
    let q1 = f64::from(a) / bh;
    let r = a - b * dd(q1);
    let q2 = f64::from(r) / bh;
    let r = r - b * dd(q2);
    let q3 = f64::from(r) / bh;
    dd(q1) + dd(q2) + dd(q3)
}

/// `(sinh x, cosh x)` to double-double accuracy: Taylor series on
/// `x / 2^m` with `|x / 2^m| ≤ 2⁻¹⁰`, then `m` doubling steps.
pub fn sinh_cosh(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let hi = f64::from(x).abs();
    let mut m = 0;
    while hi / f64::from(1u32 << m.min(31)) > 1.0 / 1024.0 && m < 60 {
        m += 1;
    }
    let r = x * dd(2f64.powi(-m));
    let r2 = r * r;
    // sinh r = r Σ r^{2k}/(2k+1)!, cosh r = Σ r^{2k}/(2k)!
    let mut sh = dd(0.0);
    let mut ch = dd(0.0);
    let mut term_s = r;
    let mut term_c = dd(1.0);
    for k in 0..12 {
        sh += term_s;
        ch += term_c;
        let k = k as f64;
        term_s = div(term_s * r2, dd((2.0 * k + 2.0) * (2.0 * k + 3.0)));
        term_c = div(term_c * r2, dd((2.0 * k + 1.0) * (2.0 * k + 2.0)));
    }
    for _ in 0..m {
        let s2 = dd(2.0) * sh * ch;
        ch = dd(1.0) + dd(2.0) * sh * sh;
        sh = s2;
    }
    (sh, ch)
}

pub fn exp(x: TwoFloat) -> TwoFloat {
    let (s, c) = sinh_cosh(x);
    if f64::from(x) < 0.0 {
        // cosh − |sinh| cancels; invert the large side instead.
        div(dd(1.0), c - s)
    } else {
        s + c
    }
}

/// `cos(2π/3)`, `sin(2π/3)` to double-double precision.
pub fn third_turn() -> (TwoFloat, TwoFloat) {
    (dd(-0.5), dd(3.0).sqrt() * dd(0.5))
}
