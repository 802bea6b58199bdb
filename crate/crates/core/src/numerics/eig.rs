//! General complex eigenproblem: balancing, Householder reduction to
//! Hessenberg form, then single-shift complex QR to Schur form.
//!
//! Right eigenvectors come from back substitution on the triangular Schur
//! factor. The iteration budget is `30 n` QR sweeps in total; running out is
//! reported as [`Error::NoConvergence`].

use super::matrix::{normalize, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const RADIX: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<C64>,
    /// Unit 2-norm right eigenvectors as columns, when requested.
    pub vectors: Option<ComplexMatrix>,
}

pub fn eig_general(a: &ComplexMatrix, want_vectors: bool) -> Result<Eigen> {
    let n = a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::InvalidParameter("non-finite matrix entry".into()));
    }
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: want_vectors.then(|| ComplexMatrix::zeros(0, 0)),
        });
    }
    let (mut h, scaling) = balance(a);
    let mut z = hessenberg(&mut h);
    schur(&mut h, &mut z, want_vectors)?;
    let values = h.diagonal();
    let vectors = if want_vectors {
        let y = triangular_eigenvectors(&h);
        let mut x = &z * &y;
        for j in 0..n {
            let mut col = x.column(j);
            col.iter_mut().zip(&scaling).for_each(|(c, &d)| *c *= d);
            normalize(&mut col);
            x.set_column(j, &col);
        }
        Some(x)
    } else {
        None
    };
    Ok(Eigen { values, vectors })
}

pub fn eigvals(a: &ComplexMatrix) -> Result<Vec<C64>> {
    Ok(eig_general(a, false)?.values)
}

/// Diagonal similarity `D^-1 A D` equalizing row and column norms.
fn balance(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let n = a.rows();
    let mut b = a.clone();
    let mut d = vec![1.0; n];
    for _ in 0..(100 * n).max(100) {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].norm();
                    r += b[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * total {
                changed = true;
                d[i] *= f;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (b, d)
}

/// Reduces `h` in place to upper Hessenberg form and returns the unitary `Q`
/// with `A = Q H Q†`.
fn hessenberg(h: &mut ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        if normalize(&mut v) == 0.0 {
            continue;
        }
        // H <- P H with P = I - 2 v v†
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vi * s;
            }
        }
        // H <- H P, Q <- Q P
        for m in [&mut *h, &mut q] {
            for i in 0..n {
                let s: C64 = v.iter().enumerate().map(|(t, vi)| m[(i, k + 1 + t)] * vi).sum();
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)] -= 2.0 * s * vi.conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    q
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let t = 0.5 * (a - d);
    let mut disc = (t * t + b * c).sqrt();
    if (t.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let denom = t + disc;
    if denom.norm() == 0.0 {
        d
    } else {
        d - b * c / denom
    }
}

fn schur(h: &mut ComplexMatrix, z: &mut ComplexMatrix, accumulate: bool) -> Result<()> {
    let n = h.rows();
    let eps = f64::EPSILON;
    let smallnum = f64::MIN_POSITIVE * (n as f64 / eps);
    let budget = 30 * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if scale == 0.0 {
                scale = (l.saturating_sub(1)..=(l + 1).min(hi))
                    .map(|i| h[(i, l - 1)].norm())
                    .sum();
            }
            if sub <= smallnum || sub <= eps * scale {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > budget {
            return Err(Error::NoConvergence {
                op: "eig_general",
                iterations: total - 1,
            });
        }
        let mu = if its.is_multiple_of(10) {
            let anchor = if its.is_multiple_of(20) { hi } else { l + 1 };
            h[(anchor, anchor)] + 0.75 * h[(anchor, anchor - 1)].re.abs()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let rho = x.norm().hypot(y.norm());
            if rho == 0.0 {
                continue;
            }
            let g11 = x.conj() / rho;
            let g12 = y.conj() / rho;
            let g21 = -y / rho;
            let g22 = x / rho;
            let jstart = if k == l { l } else { k - 1 };
            for j in jstart..n {
                let (a, b) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = g11 * a + g12 * b;
                h[(k + 1, j)] = g21 * a + g22 * b;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
            let iend = (k + 2).min(hi);
            let (c11, c12, c21, c22) = (g11.conj(), g12.conj(), g21.conj(), g22.conj());
            for i in 0..=iend {
                let (a, b) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = a * c11 + b * c12;
                h[(i, k + 1)] = a * c21 + b * c22;
            }
            if accumulate {
                for i in 0..n {
                    let (a, b) = (z[(i, k)], z[(i, k + 1)]);
                    z[(i, k)] = a * c11 + b * c12;
                    z[(i, k + 1)] = a * c21 + b * c22;
                }
            }
        }
    }
    Ok(())
}

/// Right eigenvectors of an upper-triangular matrix, one per diagonal entry.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let tnorm = t.norm_max().max(f64::MIN_POSITIVE);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE * 1e10);
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut col = vec![ZERO; n];
        col[k] = ONE;
        for j in (0..k).rev() {
            let mut s = ZERO;
            for i in j + 1..=k {
                s += t[(j, i)] * col[i];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            col[j] = -s / denom;
            let big = col[j].norm();
            if big > 1e100 {
                col.iter_mut().for_each(|c| *c /= big);
            }
        }
        normalize(&mut col);
        y.set_column(k, &col);
    }
    y
}
