//! Fixed-size and dense real linear algebra used throughout the crate.
//!
//! Rotation-level quantities use the stack-allocated nalgebra types; assembled
//! group, adjoint and Jacobian matrices are dense row/column agnostic
//! [`MatN`] values whose dimension is fixed by the group they belong to.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;
pub type Vec3 = Vector3<f64>;
pub type Mat2 = Matrix2<f64>;
pub type Mat3 = Matrix3<f64>;
pub type MatN = DMatrix<f64>;
pub type VecN = DVector<f64>;

/// Largest condition-number estimate accepted by [`mat_inverse`].
pub const MAX_CONDITION: f64 = 1e12;

/// The cross-product matrix `v^` such that `v^ w = v × w`.
pub fn skew3(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew3`]; reads the three independent entries and ignores the
/// symmetric part.
pub fn vee3(m: &Mat3) -> Vec3 {
    Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// The canonical planar generator `S = [[0, -1], [1, 0]]`.
pub fn canonical_skew() -> Mat2 {
    Mat2::new(0.0, -1.0, 1.0, 0.0)
}

pub fn skew2(phi: f64) -> Mat2 {
    canonical_skew() * phi
}

/// Inverts a dense square matrix, refusing when the 1-norm condition
/// estimate exceeds [`MAX_CONDITION`].
pub fn mat_inverse(a: &MatN) -> Result<MatN> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "cannot invert a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let inv = a.clone().lu().try_inverse().ok_or(Error::SingularMatrix {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(a) * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularMatrix { condition });
    }
    Ok(inv)
}

/// Maximum absolute column sum.
pub fn norm1(a: &MatN) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum absolute row sum.
pub fn norm_inf(a: &MatN) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry. All elementwise tolerances in the crate are stated
/// against this norm.
pub fn max_abs<R, C, S>(a: &nalgebra::Matrix<f64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<f64, R, C>,
{
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn mat_pow(a: &MatN, k: usize) -> MatN {
    let mut out = MatN::identity(a.nrows(), a.ncols());
    for _ in 0..k {
        out = &out * a;
    }
    out
}

pub fn mat3_pow(a: &Mat3, k: usize) -> Mat3 {
    (0..k).fold(Mat3::identity(), |acc, _| acc * a)
}

pub fn to_dyn3(m: &Mat3) -> MatN {
    MatN::from_fn(3, 3, |i, j| m[(i, j)])
}

pub fn to_dyn2(m: &Mat2) -> MatN {
    MatN::from_fn(2, 2, |i, j| m[(i, j)])
}

/// Copies `block` into `dst` with its top-left corner at `(row, col)`.
pub(crate) fn set_block<R, C, S>(dst: &mut MatN, row: usize, col: usize, block: &nalgebra::Matrix<f64, R, C, S>)
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<f64, R, C>,
{
    for i in 0..block.nrows() {
        for j in 0..block.ncols() {
            dst[(row + i, col + j)] = block[(i, j)];
        }
    }
}
