//! Dense matrix exponential by scaling and squaring around a Taylor core.

use crate::linalg::{max_abs, norm1, MatN};

/// `exp(A)` for a square matrix. The argument is scaled so its 1-norm is at
/// most 1/4, the Taylor series is summed until its terms stop contributing,
/// and the result is squared back up.
pub fn expm_generic(a: &MatN) -> MatN {
    assert!(a.is_square(), "matrix exponential needs a square matrix");
    let n = a.nrows();
    let norm = norm1(a);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = a * 2f64.powi(-squarings);

    let mut sum = MatN::identity(n, n);
    let mut term = MatN::identity(n, n);
    for k in 1..=40 {
        term = &term * &b / k as f64;
        sum += &term;
        if max_abs(&term) <= 1e-18 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm_generic(&MatN::zeros(4, 4)), MatN::identity(4, 4));
    }

    #[test]
    fn half_turn() {
        let pi = std::f64::consts::PI;
        let a = MatN::from_row_slice(3, 3, &[0.0, -pi, 0.0, pi, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let expected = MatN::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -1.0, 1.0]));
        assert!(max_abs(&(expm_generic(&a) - expected)) < 1e-14);
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let d = MatN::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, -3.0]));
        let e = expm_generic(&d);
        assert!((e[(0, 0)] - 2f64.exp()).abs() < 1e-13 * 2f64.exp());
        assert!((e[(1, 1)] - (-3f64).exp()).abs() < 1e-15);
        let nil = MatN::from_row_slice(2, 2, &[0.0, 5.0, 0.0, 0.0]);
        assert_eq!(expm_generic(&nil), MatN::from_row_slice(2, 2, &[1.0, 5.0, 0.0, 1.0]));
    }
}
