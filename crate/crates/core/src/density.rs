//! Validated real density matrices.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::qmatrix::{eig_sym, kron2, Mat, PSD_CLAMP};

const TRACE_TOL: f64 = 1e-10;

/// Real symmetric, positive-semidefinite matrix with unit trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize>(Mat<N>);

pub type DensityMatrix2 = DensityMatrix<2>;
pub type DensityMatrix4 = DensityMatrix<4>;

impl<const N: usize> DensityMatrix<N> {
    pub fn new(m: Mat<N>) -> Result<Self> {
        m.check_symmetric()
            .map_err(|e| Error::NotDensityMatrix(e.to_string()))?;
        let tr = m.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let min = eig_sym(&m)?.values[0];
        if min < -PSD_CLAMP {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(m.symmetrized()))
    }

    /// Skips validation; for matrices that are density matrices by construction.
    pub(crate) fn new_unchecked(m: Mat<N>) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &[f64; N]) -> Result<Self> {
        let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Unnormalized(norm));
        }
        Ok(Self(Mat::outer(psi)))
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat::identity().scale(1.0 / N as f64))
    }

    pub fn matrix(&self) -> &Mat<N> {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        self.0.frobenius_sq()
    }

    pub fn populations(&self) -> [f64; N] {
        self.0.diagonal()
    }
}

impl<const N: usize> Deref for DensityMatrix<N> {
    type Target = Mat<N>;
    fn deref(&self) -> &Mat<N> {
        &self.0
    }
}

impl DensityMatrix2 {
    pub fn tensor(&self, other: &DensityMatrix2) -> DensityMatrix4 {
        DensityMatrix(kron2(&self.0, &other.0))
    }
}

impl DensityMatrix4 {
    /// Reduced state of the charge qubit, `Tr_B ρ`.
    pub fn reduce_a(&self) -> DensityMatrix2 {
        let r = &self.0 .0;
        let off = r[0][2] + r[1][3];
        DensityMatrix(Mat::from_rows([[r[0][0] + r[1][1], off], [off, r[2][2] + r[3][3]]]))
    }

    /// Reduced state of the spin qubit, `Tr_A ρ`.
    pub fn reduce_b(&self) -> DensityMatrix2 {
        let r = &self.0 .0;
        let off = r[0][1] + r[2][3];
        DensityMatrix(Mat::from_rows([[r[0][0] + r[2][2], off], [off, r[1][1] + r[3][3]]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::{Mat2, Mat4};

    /// Partial traces by explicit index contraction over `ρ[(a,b),(a',b')]`.
    fn contract(rho: &Mat4, keep_a: bool) -> Mat2 {
        let mut out = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let (row, col) = if keep_a {
                        (2 * i + k, 2 * j + k)
                    } else {
                        (2 * k + i, 2 * k + j)
                    };
                    out.0[i][j] += rho.0[row][col];
                }
            }
        }
        out
    }

    #[test]
    fn validation() {
        assert!(DensityMatrix4::new(Mat4::identity()).is_err());
        assert!(DensityMatrix2::new(Mat2::diag([1.5, -0.5])).is_err());
        assert!(DensityMatrix2::new(Mat2::from_rows([[0.5, 0.1], [0.2, 0.5]])).is_err());
        assert!(DensityMatrix2::new(Mat2::from_rows([[0.5, 0.5], [0.5, 0.5]])).is_ok());
        assert!(matches!(DensityMatrix2::pure(&[1.0, 1.0]), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn reduction_recovers_product_factors() {
        let a = DensityMatrix2::new(Mat2::from_rows([[0.7, 0.2], [0.2, 0.3]])).unwrap();
        let b = DensityMatrix2::new(Mat2::from_rows([[0.4, -0.1], [-0.1, 0.6]])).unwrap();
        let ab = a.tensor(&b);
        assert!((*ab.reduce_a() - *a).max_abs() < 1e-15);
        assert!((*ab.reduce_b() - *b).max_abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_reduces_to_half_identity() {
        let r = DensityMatrix4::maximally_mixed();
        assert_eq!(*r.reduce_a(), Mat2::identity().scale(0.5));
        assert_eq!(*r.reduce_b(), Mat2::identity().scale(0.5));
    }

    #[test]
    fn reduction_matches_index_contraction() {
        let m = Mat4::from_rows([
            [0.1, 0.02, 0.03, 0.04],
            [0.02, 0.2, 0.05, 0.06],
            [0.03, 0.05, 0.3, 0.07],
            [0.04, 0.06, 0.07, 0.4],
        ]);
        let r = DensityMatrix4::new(m).unwrap();
        assert_eq!(*r.reduce_a(), contract(&m, true));
        assert_eq!(*r.reduce_b(), contract(&m, false));
    }
}
