//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Column pairs of the working matrix are rotated until mutually orthogonal;
//! the rotations accumulate into `V` and the final column norms are the
//! singular values. This is the `A†A` Jacobi iteration carried out implicitly,
//! so tiny singular values keep their accuracy instead of being squared away.

use super::eigh::jacobi_rotation;
use super::matrix::{dot_conj, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct SingularTriplet {
    pub s: f64,
    /// Left singular vector.
    pub u: Vec<C64>,
    /// Right singular vector.
    pub v: Vec<C64>,
}

/// Full decomposition `A = U diag(s) V†`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn triplets(&self) -> Vec<SingularTriplet> {
        self.values
            .iter()
            .enumerate()
            .map(|(j, &s)| SingularTriplet {
                s,
                u: self.u.column(j),
                v: self.v.column(j),
            })
            .collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            self.values
                .iter()
                .enumerate()
                .map(|(k, &s)| self.u[(i, k)] * s * self.v[(j, k)].conj())
                .sum()
        })
    }
}

/// Singular triplets ordered by descending singular value.
pub fn svd(a: &ComplexMatrix) -> Result<Vec<SingularTriplet>> {
    Ok(svd_full(a)?.triplets())
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd_full(a)?.values)
}

pub fn svd_full(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint())?;
        return Ok(Svd {
            values: t.values,
            u: t.v,
            v: t.u,
        });
    }
    svd_tall(a)
}

fn svd_tall(a: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let tol = f64::EPSILON * (m.max(1) as f64).sqrt();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot_conj(&w[p], &w[q]);
                if gamma.norm() <= tol * (alpha * beta).sqrt() || gamma == ZERO {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                let ps = phase.conj() * s;
                let pc = phase.conj() * c;
                rotate_columns(&mut w, p, q, c, s, ps, pc);
                rotate_columns(&mut v, p, q, c, s, ps, pc);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            op: "svd",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    let smax = values.first().copied().unwrap_or(0.0);
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (rank, &j) in order.iter().enumerate() {
        let s = values[rank];
        let mut col: Vec<C64> = if s > 0.0 {
            w[j].iter().map(|&z| z / s).collect()
        } else {
            vec![ZERO; m]
        };
        // re-orthogonalize against the larger singular directions; columns of
        // numerically rank-deficient directions are replaced by a completion
        let trusted = s > smax * f64::EPSILON * (m as f64);
        for prev in &u_cols {
            let proj = dot_conj(prev, &col);
            col.iter_mut().zip(prev).for_each(|(c, &p)| *c -= proj * p);
        }
        let nrm = vec_norm(&col);
        if trusted && nrm > 0.5 {
            col.iter_mut().for_each(|c| *c /= nrm);
        } else {
            col = complete_basis(&u_cols, m);
        }
        u_cols.push(col);
    }
    let v_sorted: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(Svd {
        values,
        u: ComplexMatrix::from_columns(&u_cols),
        v: ComplexMatrix::from_columns(&v_sorted),
    })
}

#[inline]
fn rotate_columns(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ps: C64, pc: C64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c - b * ps;
        *y = a * s + b * pc;
    }
}

/// Unit vector orthogonal to every vector in `basis`.
fn complete_basis(basis: &[Vec<C64>], m: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for e in 0..m {
        let mut col = vec![ZERO; m];
        col[e] = ONE;
        for _ in 0..2 {
            for b in basis {
                let proj = dot_conj(b, &col);
                col.iter_mut().zip(b).for_each(|(c, &p)| *c -= proj * p);
            }
        }
        let nrm = vec_norm(&col);
        if nrm > 0.7 {
            col.iter_mut().for_each(|c| *c /= nrm);
            return col;
        }
        if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
            best = Some((nrm, col));
        }
    }
    let (nrm, mut col) = best.expect("m > 0");
    col.iter_mut().for_each(|c| *c /= nrm);
    col
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::I;

    #[test]
    fn identity_has_unit_singular_values() {
        let s = singular_values(&ComplexMatrix::identity(5)).unwrap();
        assert!(s.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_with_zero() {
        let a = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 0.0]]);
        let d = svd_full(&a).unwrap();
        assert_eq!(d.values, vec![3.0, 0.0]);
        assert!(d.u.unitarity_defect() < 1e-14);
        assert!((&d.reconstruct() - &a).norm_max() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_unitary_factors() {
        let d = svd_full(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(d.values.iter().all(|&s| s == 0.0));
        assert!(d.u.unitarity_defect() < 1e-14);
        assert!(d.v.unitarity_defect() < 1e-14);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let a = ComplexMatrix::from_rows(&[vec![ONE, I, C64::new(2.0, 0.0)], vec![C64::new(0.5, 0.0), ZERO, -I]]);
        for m in [a.clone(), a.adjoint()] {
            let d = svd_full(&m).unwrap();
            assert_eq!(d.values.len(), 2);
            assert!((&d.reconstruct() - &m).norm_max() < 1e-13);
        }
    }

    #[test]
    fn rank_one_outer_product() {
        let x = [ONE, I, C64::new(1.0, -1.0)];
        let a = ComplexMatrix::from_fn(3, 3, |i, j| x[i] * x[j].conj());
        let d = svd_full(&a).unwrap();
        assert!((d.values[0] - 4.0).abs() < 1e-13);
        assert!(d.values[1] < 1e-14 && d.values[2] < 1e-14);
        assert!(d.u.unitarity_defect() < 1e-13);
    }
}
