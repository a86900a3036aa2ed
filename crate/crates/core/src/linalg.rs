//! Small dense symmetric linear algebra: just enough Cholesky for sampling
//! and posterior evaluation of low-dimensional covariances.

use alloc::vec::Vec;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    l: Vec<f64>, // row-major n x n, upper part zero
    n: usize,
}

impl Cholesky {
    /// Factor a row-major symmetric matrix. Returns `None` if any pivot is
    /// below `tol`, i.e. the matrix is not (numerically) positive definite.
    pub(crate) fn factor(a: &[f64], n: usize, tol: f64) -> Option<Cholesky> {
        debug_assert_eq!(a.len(), n * n);
        let mut l = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= tol {
                        return None;
                    }
                    l[i * n + i] = libm::sqrt(s);
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Some(Cholesky { l, n })
    }

    /// `log(det A)` in nats.
    pub(crate) fn ln_det(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += libm::log(self.l[i * self.n + i]);
        }
        2.0 * acc
    }

    /// `r^T A^{-1} r` via two triangular solves.
    pub(crate) fn quadratic_form(&self, r: &[f64]) -> f64 {
        debug_assert_eq!(r.len(), self.n);
        // forward solve L y = r; the quadratic form is |y|^2
        let mut y = alloc::vec![0.0; self.n];
        for i in 0..self.n {
            let mut s = r[i];
            for k in 0..i {
                s -= self.l[i * self.n + k] * y[k];
            }
            y[i] = s / self.l[i * self.n + i];
        }
        y.iter().map(|v| v * v).sum()
    }

    /// `L z` for a standard-normal vector `z`: gives a sample with
    /// covariance `A`.
    pub(crate) fn correlate(&self, z: &[f64], out: &mut [f64]) {
        debug_assert_eq!(z.len(), self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in 0..=i {
                s += self.l[i * self.n + k] * z[k];
            }
            out[i] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn factor_diagonal() {
        let c = Cholesky::factor(&[4.0, 0.0, 0.0, 9.0], 2, 1e-12).unwrap();
        assert_abs_diff_eq!(c.ln_det(), libm::log(36.0), epsilon = 1e-12);
        assert_abs_diff_eq!(c.quadratic_form(&[2.0, 3.0]), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn factor_correlated() {
        // [[2, 1], [1, 2]] has det 3
        let c = Cholesky::factor(&[2.0, 1.0, 1.0, 2.0], 2, 1e-12).unwrap();
        assert_abs_diff_eq!(c.ln_det(), libm::log(3.0), epsilon = 1e-12);
        // A^{-1} = (1/3)[[2, -1], [-1, 2]]; quadratic form of (1, 1) is 2/3
        assert_abs_diff_eq!(c.quadratic_form(&[1.0, 1.0]), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn indefinite_rejected() {
        assert!(Cholesky::factor(&[1.0, 2.0, 2.0, 1.0], 2, 1e-12).is_none());
    }

    #[test]
    fn correlate_reproduces_covariance_shape() {
        let c = Cholesky::factor(&[2.0, 1.0, 1.0, 2.0], 2, 1e-12).unwrap();
        let mut out = [0.0; 2];
        c.correlate(&[1.0, 0.0], &mut out);
        // first column of L: (sqrt 2, 1/sqrt 2)
        assert_abs_diff_eq!(out[0] * out[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[0] * out[1], 1.0, epsilon = 1e-12);
    }
}
