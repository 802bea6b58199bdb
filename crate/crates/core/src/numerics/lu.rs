//! LU factorization with partial pivoting.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub struct Lu {
    /// Packed factors: strict lower part holds L (unit diagonal), upper part holds U.
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&x, &y| lu[(x, col)].norm().total_cmp(&lu[(y, col)].norm()))
                .unwrap_or(col);
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(col, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(col, col)];
            if pivot == ZERO {
                // exactly singular column; leave zeros, det() reports 0
                continue;
            }
            for row in col + 1..n {
                let factor = lu[(row, col)] / pivot;
                lu[(row, col)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(row, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        let mut d = if self.swaps.is_multiple_of(2) { ONE } else { -ONE };
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn is_singular(&self) -> bool {
        self.lu.diagonal().contains(&ZERO)
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                context: "Lu::solve",
                expected: n,
                found: b.rows(),
            });
        }
        if self.is_singular() {
            return Err(Error::Singular);
        }
        let m = b.cols();
        let mut x = ComplexMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for j in 0..m {
            for i in 1..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.lu.rows()))
    }
}

pub fn det(a: &ComplexMatrix) -> Result<C64> {
    let n = a.ensure_square()?;
    match n {
        0 => Ok(ONE),
        1 => Ok(a[(0, 0)]),
        2 => Ok(a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]),
        _ => Ok(Lu::factor(a)?.det()),
    }
}

pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::factor(a)?.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_identity_and_2x2() {
        assert_eq!(det(&ComplexMatrix::identity(5)).unwrap(), ONE);
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(det(&a).unwrap(), C64::new(-2.0, 0.0));
        // the LU path agrees with ad - bc
        let lu = Lu::factor(&a).unwrap().det();
        assert!((lu - C64::new(-2.0, 0.0)).norm() < 1e-14 * 2.0);
    }

    #[test]
    fn singular_matrix() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], &[0.0, 1.0, 1.0]]);
        assert!(det(&a).unwrap().norm() < 1e-14);
        assert_eq!(solve(&a, &ComplexMatrix::identity(3)).unwrap_err(), Error::Singular);
    }

    #[test]
    fn inverse_round_trip() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| {
            C64::new(
                (i * 3 + j) as f64 % 5.0 + if i == j { 4.0 } else { 0.0 },
                (i as f64) - (j as f64),
            )
        });
        let inv = inverse(&a).unwrap();
        let e = &(&a * &inv) - &ComplexMatrix::identity(4);
        assert!(e.norm_max() < 1e-13);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(det(&ComplexMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }
}
