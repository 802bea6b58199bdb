use serde::{Deserialize, Serialize};

use super::Sign;
use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;
use crate::numerics::{singular_values, ComplexMatrix, C64};

/// Default decay rate (per cell) a singular value must beat to count as a
/// thermodynamic-limit zero.
pub const SLOPE_MIN: f64 = 0.02;

/// Singular values at or below this fraction of the largest one are already
/// zero to working precision; their size scaling is noise and is not fitted.
pub const NUMERICAL_ZERO: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub sign: Sign,
    /// Descending.
    pub values: Vec<f64>,
    pub cells: usize,
}

impl SingularSpectrum {
    /// The `n`-th smallest value.
    pub fn smallest(&self, n: usize) -> f64 {
        self.values[self.values.len() - 1 - n]
    }
}

fn shifted(u: &FloquetOperator, sign: Sign) -> ComplexMatrix {
    u.matrix.shift_diagonal(C64::new(-sign.target_eigenvalue(), 0.0))
}

pub fn singular_spectrum(u: &FloquetOperator, sign: Sign) -> Result<SingularSpectrum> {
    Ok(SingularSpectrum {
        sign,
        values: singular_values(&shifted(u, sign))?,
        cells: u.cells(),
    })
}

/// [`zero_mode_count_with`] at the default [`SLOPE_MIN`].
pub fn zero_mode_count(spectra: &[SingularSpectrum]) -> Result<usize> {
    zero_mode_count_with(spectra, SLOPE_MIN)
}

/// Counts singular values that vanish as the chain grows.
///
/// The `n`-th smallest value at every size is fitted as `ln s = a + b L`; it
/// counts when `b < −slope_min`, or when it is already below
/// [`NUMERICAL_ZERO`] relative to the spectrum's scale at the largest size.
/// Counting walks upward from the smallest value and stops at the first one
/// that fails, so bulk values above a gap are never picked up.
pub fn zero_mode_count_with(spectra: &[SingularSpectrum], slope_min: f64) -> Result<usize> {
    if spectra.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "zero-mode scaling needs at least 3 sizes, got {}",
            spectra.len()
        )));
    }
    let sign = spectra[0].sign;
    for (i, s) in spectra.iter().enumerate() {
        if s.values.len() != 2 * s.cells {
            return Err(Error::DimensionMismatch {
                context: "singular spectrum length",
                expected: 2 * s.cells,
                found: s.values.len(),
            });
        }
        if s.sign != sign {
            return Err(Error::InvalidParameter("spectra of mixed sign".into()));
        }
        if i > 0 && s.cells <= spectra[i - 1].cells {
            return Err(Error::InvalidParameter("sizes must be strictly increasing".into()));
        }
    }
    let largest = spectra.last().expect("checked length");
    let scale = largest.values.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let floor = scale * f64::EPSILON * 1e-3;
    let max_modes = spectra[0].values.len();
    let xs: Vec<f64> = spectra.iter().map(|s| s.cells as f64).collect();
    let mut count = 0;
    for n in 0..max_modes {
        let last = largest.smallest(n);
        let numerically_zero = last <= NUMERICAL_ZERO * scale;
        let ys: Vec<f64> = spectra.iter().map(|s| s.smallest(n).max(floor).ln()).collect();
        if numerically_zero || fit_slope(&xs, &ys) < -slope_min {
            count += 1;
        } else {
            break;
        }
    }
    Ok(count)
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Hermitian block form `[[0, U ∓ I], [(U ∓ I)†, 0]]`, whose eigenvalues are
/// the singular values of `U ∓ I` and their negatives.
pub fn doubled_hamiltonian(u: &FloquetOperator, sign: Sign) -> Result<ComplexMatrix> {
    let a = shifted(u, sign);
    let n = a.rows();
    let z = ComplexMatrix::zeros(n, n);
    let h = ComplexMatrix::block2x2(&z, &a, &a.adjoint(), &z)?;
    debug_assert!(h.is_hermitian(0.0));
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{realspace_evolution, Space};
    use crate::lattice::{Boundary, DriveProtocol, ModelParams};
    use crate::numerics::{eigh, multiset_distance};

    fn real(matrix: ComplexMatrix, cells: usize) -> FloquetOperator {
        FloquetOperator {
            matrix,
            period: 1.0,
            space: Space::Real {
                cells,
                boundary: Boundary::Open,
            },
        }
    }

    fn spectrum(values: Vec<f64>) -> SingularSpectrum {
        let cells = values.len() / 2;
        SingularSpectrum {
            sign: Sign::Minus,
            values,
            cells,
        }
    }

    #[test]
    fn identity_minus_is_zero() {
        let s = singular_spectrum(&real(ComplexMatrix::identity(6), 3), Sign::Minus).unwrap();
        assert_eq!(s.values.len(), 6);
        assert!(s.values.iter().all(|&x| x < 1e-15));
        assert!(
            doubled_hamiltonian(&real(ComplexMatrix::identity(6), 3), Sign::Minus)
                .unwrap()
                .norm_max()
                < 1e-15
        );
    }

    #[test]
    fn eigenvalue_minus_one_gives_plus_zero() {
        let u = ComplexMatrix::from_diag(&[C64::new(-1.0, 0.0), C64::from_polar(1.0, 0.4)]);
        let s = singular_spectrum(&real(u, 1), Sign::Plus).unwrap();
        assert!(s.smallest(0) < 1e-15);
        assert!(s.values[0] > 1.0);
    }

    #[test]
    fn doubled_spectrum_is_plus_minus_singular_values() {
        let p = ModelParams::new(1.0, 1.5, 1.0, 6, Boundary::Open).unwrap();
        let d = DriveProtocol::new(0.7, 2.0, 0.7, 0.7).unwrap();
        let u = realspace_evolution(&p, &d, None).unwrap();
        for sign in Sign::BOTH {
            let h = doubled_hamiltonian(&u, sign).unwrap();
            assert_eq!(h.rows(), 4 * 6);
            let ev: Vec<C64> = eigh(&h).unwrap().values.iter().map(|&x| C64::new(x, 0.0)).collect();
            let s = singular_spectrum(&u, sign).unwrap().values;
            let pm: Vec<C64> = s.iter().flat_map(|&x| [C64::new(x, 0.0), C64::new(-x, 0.0)]).collect();
            assert!(multiset_distance(&ev, &pm) < 1e-8);
            let neg: Vec<C64> = ev.iter().map(|z| -z).collect();
            assert!(multiset_distance(&ev, &neg) < 1e-8);
        }
    }

    #[test]
    fn count_rules() {
        let sizes = [10, 20, 30];
        // one value decaying as e^{-0.5 L}, one floor-level, bulk flat
        let make = |decay: bool, zero: bool| -> Vec<SingularSpectrum> {
            sizes
                .iter()
                .map(|&l| {
                    let mut v = vec![1.0; 2 * l];
                    let n = v.len();
                    v[n - 1] = if zero { 1e-17 } else { 0.3 };
                    v[n - 2] = if decay { (-0.5 * l as f64).exp() } else { 0.4 };
                    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    spectrum(v)
                })
                .collect()
        };
        assert_eq!(zero_mode_count(&make(false, false)).unwrap(), 0);
        assert_eq!(zero_mode_count(&make(true, false)).unwrap(), 1);
        assert_eq!(zero_mode_count(&make(true, true)).unwrap(), 2);
        assert_eq!(zero_mode_count(&make(false, true)).unwrap(), 1);
    }

    #[test]
    fn slope_threshold_is_strict() {
        let s: Vec<SingularSpectrum> = [10usize, 20, 30]
            .iter()
            .map(|&l| {
                let mut v = vec![1.0; 2 * l];
                let n = v.len();
                v[n - 1] = (-0.02 * l as f64).exp();
                spectrum(v)
            })
            .collect();
        assert_eq!(zero_mode_count_with(&s, 0.0199).unwrap(), 1);
        assert_eq!(zero_mode_count_with(&s, 0.0201).unwrap(), 0);
    }

    #[test]
    fn inconsistent_inputs_rejected() {
        let a = spectrum(vec![1.0; 4]);
        let b = spectrum(vec![1.0; 6]);
        let c = spectrum(vec![1.0; 8]);
        assert!(zero_mode_count(&[a.clone(), b.clone()]).is_err());
        assert!(zero_mode_count(&[b.clone(), a.clone(), c.clone()]).is_err());
        let bad = SingularSpectrum { cells: 5, ..c.clone() };
        assert!(matches!(
            zero_mode_count(&[a, b, bad]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
