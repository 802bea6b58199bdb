//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! The Padé degree is picked from the 1-norm of the input using the backward
//! error bounds of Higham (2005); inputs beyond the degree-13 threshold are
//! scaled by `2^-s` and the result squared `s` times.

use super::lu;
use super::matrix::{ComplexMatrix, C64};
use crate::error::Result;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `e^A` for a square matrix.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    if n == 1 {
        return Ok(ComplexMatrix::from_diag(&[a[(0, 0)].exp()]));
    }
    let norm = a.norm_one();
    for &(m, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(a, coeffs);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_real(2f64.powi(-s));
    let mut x = pade13(&scaled)?;
    for _ in 0..s {
        x = &x * &x;
    }
    Ok(x)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> Result<ComplexMatrix> {
    let n = a.rows();
    let eye = ComplexMatrix::identity(n);
    let a2 = a * a;
    // powers A^0, A^2, A^4, ...
    let mut even = vec![eye.clone()];
    while even.len() < b.len() / 2 {
        let next = even.last().expect("non-empty") * &a2;
        even.push(next);
    }
    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (j, p) in even.iter().enumerate() {
        v = &v + &p.scale(real(b[2 * j]));
        u_inner = &u_inner + &p.scale(real(b[2 * j + 1]));
    }
    let u = a * &u_inner;
    lu::solve(&(&v - &u), &(&v + &u))
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b = &B13;
    let n = a.rows();
    let eye = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let lin = |c6: f64, c4: f64, c2: f64, c0: Option<f64>| {
        let mut m = &(&a6.scale(real(c6)) + &a4.scale(real(c4))) + &a2.scale(real(c2));
        if let Some(c0) = c0 {
            m = &m + &eye.scale(real(c0));
        }
        m
    };
    let u_hi = &a6 * &lin(b[13], b[11], b[9], None);
    let u = a * &(&u_hi + &lin(b[7], b[5], b[3], Some(b[1])));
    let v_hi = &a6 * &lin(b[12], b[10], b[8], None);
    let v = &v_hi + &lin(b[6], b[4], b[2], Some(b[0]));
    lu::solve(&(&v - &u), &(&v + &u))
}
