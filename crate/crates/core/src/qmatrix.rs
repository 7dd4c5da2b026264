//! Fixed-size real matrices.
//!
//! Everything in the model is real: the Hamiltonian has only real entries and
//! `σy ⊗ σy` is real, so no complex arithmetic is needed. Matrices are stored
//! row-major as `[[f64; N]; N]`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Relative symmetry tolerance accepted by [`Mat::check_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_CLAMP` are treated as round-off and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-12;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat<const N: usize>(pub [[f64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Mat<N> {
    pub const fn zeros() -> Self {
        Mat([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; N])
    }

    pub fn diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub const fn from_rows(rows: [[f64; N]; N]) -> Self {
        Mat(rows)
    }

    /// `v vᵀ`.
    pub fn outer(v: &[f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * v[j];
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn diagonal(&self) -> [f64; N] {
        std::array::from_fn(|i| self.0[i][i])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum()
    }

    pub fn mul_vec(&self, v: &[f64; N]) -> [f64; N] {
        std::array::from_fn(|i| (0..N).map(|j| self.0[i][j] * v[j]).sum())
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[f64; N]) -> f64 {
        let mv = self.mul_vec(v);
        v.iter().zip(mv.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn column(&self, j: usize) -> [f64; N] {
        std::array::from_fn(|i| self.0[i][j])
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in (i + 1)..N {
                let avg = 0.5 * (self.0[i][j] + self.0[j][i]);
                m.0[i][j] = avg;
                m.0[j][i] = avg;
            }
        }
        m
    }

    pub fn check_finite(&self) -> Result<()> {
        for i in 0..N {
            for j in 0..N {
                if !self.0[i][j].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in (i + 1)..N {
                worst = worst.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        worst
    }

    /// Finite entries and `|m_ij - m_ji| <= 1e-12 · max(1, ‖m‖_max)`.
    pub fn check_symmetric(&self) -> Result<()> {
        self.check_finite()?;
        let asymmetry = self.asymmetry();
        if asymmetry > SYMMETRY_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(())
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-1.0)
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i][j] · b`.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

pub mod pauli {
    use super::Mat2;

    pub const X: Mat2 = Mat2::from_rows([[0.0, 1.0], [1.0, 0.0]]);
    pub const Z: Mat2 = Mat2::from_rows([[1.0, 0.0], [0.0, -1.0]]);
    /// `i·σy`, the real part of the Pauli Y matrix up to a phase.
    pub const IY: Mat2 = Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]);
}

/// `σy ⊗ σy`, which is real: the two factors of `i` combine to `-1`.
pub fn sigma_yy() -> Mat4 {
    kron2(&pauli::IY, &pauli::IY).scale(-1.0)
}

/// Eigendecomposition of a real symmetric matrix.
///
/// `values` are ascending; column `k` of `vectors` is the eigenvector for
/// `values[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomp<const N: usize> {
    pub values: [f64; N],
    pub vectors: Mat<N>,
}

impl<const N: usize> EigenDecomp<N> {
    pub fn vector(&self, k: usize) -> [f64; N] {
        self.vectors.column(k)
    }

    /// `V f(Λ) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Mat<N> {
        self.reconstruct_from(&self.values.map(f))
    }

    /// `V diag(d) Vᵀ` for a replacement spectrum `d` aligned with `values`.
    pub fn reconstruct_from(&self, d: &[f64; N]) -> Mat<N> {
        let mut m = Mat::<N>::zeros();
        for (k, &w) in d.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..N {
                let vik = self.vectors.0[i][k] * w;
                for j in 0..N {
                    m.0[i][j] += vik * self.vectors.0[j][k];
                }
            }
        }
        m
    }
}

/// Cyclic Jacobi eigensolver for small symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius norm falls below `1e-14` times the
/// norm of the input (or exactly zero), capped at 100 sweeps. Ties in the
/// final ascending sort keep Jacobi output order.
pub fn eig_sym<const N: usize>(m: &Mat<N>) -> Result<EigenDecomp<N>> {
    m.check_symmetric()?;
    let mut a = m.symmetrized();
    let mut v = Mat::<N>::identity();
    let scale = a.frobenius_sq().sqrt();
    let threshold = JACOBI_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| ((i + 1)..N).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a.0[i][j] * a.0[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.0[q][q] - a.0[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a.0[i][i].total_cmp(&a.0[j][j]));
    let values = std::array::from_fn(|k| a.0[order[k]][order[k]]);
    let mut vectors = Mat::<N>::zeros();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors.0[i][k] = v.0[i][src];
        }
    }
    Ok(EigenDecomp { values, vectors })
}

/// Applies `A ← Jᵀ A J`, `V ← V J` for the plane rotation in `(p, q)`.
fn rotate<const N: usize>(a: &mut Mat<N>, v: &mut Mat<N>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = c * akp - s * akq;
        a.0[k][q] = s * akp + c * akq;
    }
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = c * apk - s * aqk;
        a.0[q][k] = s * apk + c * aqk;
    }
    a.0[p][q] = 0.0;
    a.0[q][p] = 0.0;
    for k in 0..N {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = c * vkp - s * vkq;
        v.0[k][q] = s * vkp + c * vkq;
    }
}

/// Principal square root of a symmetric positive-semidefinite matrix.
pub fn psd_sqrt<const N: usize>(m: &Mat<N>) -> Result<Mat<N>> {
    let eig = eig_sym(m)?;
    let min = eig.values[0];
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()).symmetrized())
}
