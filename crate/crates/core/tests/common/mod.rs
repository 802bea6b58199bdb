//! Independent reference computations shared by the integration tests. None
//! of these go through the crate's own kernels.
#![allow(dead_code)]

use std::f64::consts::TAU;

use nhfloquet::lattice::{Boundary, DriveProtocol, ModelParams};
use nhfloquet::numerics::{ComplexMatrix, C64, ZERO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in [−1, 1].
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn reference_model(cells: usize, boundary: Boundary) -> ModelParams {
    ModelParams::new(1.0, 1.5, 0.0, cells, boundary).unwrap()
}

pub fn reference_drive(f: f64) -> DriveProtocol {
    DriveProtocol::new(f, 2.0, 0.7, 0.7).unwrap()
}

/// The four regime representatives with their expected `(|V1|, |V2|)`.
pub const REGIMES: [(f64, i64, i64); 4] = [(0.05, 0, 0), (0.5, 1, 0), (0.92, 1, 1), (1.0, 1, 2)];

fn naive_matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn to_rows(a: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

/// Truncated power series `Σ_{k<terms} A^k / k!`.
pub fn taylor_expm(a: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let n = a.rows();
    let a = to_rows(a);
    let mut term: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();
    let mut sum = term.clone();
    for k in 1..terms {
        term = naive_matmul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
    }
    ComplexMatrix::from_rows(&sum)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<C64>]) -> C64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    let mut total = ZERO;
    for j in 0..n {
        let minor: Vec<Vec<C64>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += a[0][j] * cofactor_det(&minor) * sign;
    }
    total
}

/// Characteristic polynomial coefficients, lowest degree first, by the
/// Faddeev–LeVerrier recursion.
pub fn char_poly(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.rows();
    let a = to_rows(a);
    let mut c = vec![ZERO; n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = vec![vec![ZERO; n]; n];
    for k in 1..=n {
        let am = naive_matmul(&a, &m);
        for i in 0..n {
            for j in 0..n {
                m[i][j] = am[i][j] + if i == j { c[n - k + 1] } else { ZERO };
            }
        }
        let am = naive_matmul(&a, &m);
        let tr: C64 = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &coef in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + coef;
    }
    (p, dp)
}

/// Roots of a monic polynomial by simultaneous Aberth iteration.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * radius, TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut largest: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| C64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            largest = largest.max(step.norm());
        }
        if largest < 1e-15 {
            break;
        }
    }
    z
}

/// Largest distance under greedy nearest-neighbour pairing, taking the
/// better of the two directions.
pub fn matched_distance(a: &[C64], b: &[C64]) -> f64 {
    fn greedy(a: &[C64], b: &[C64]) -> f64 {
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for x in a {
            let (j, d) = b
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[j] = true;
            worst = worst.max(d);
        }
        worst
    }
    assert_eq!(a.len(), b.len());
    greedy(a, b).min(greedy(b, a))
}

/// `[[0, t_L + v e^{−ik}], [t_R + v e^{ik}, 0]]` written out from the hoppings.
pub fn bloch_h(k: f64, w: f64, gamma: f64, v: f64) -> [[C64; 2]; 2] {
    let tl = w + gamma / 2.0;
    let tr = w - gamma / 2.0;
    [
        [ZERO, C64::new(tl, 0.0) + C64::from_polar(v, -k)],
        [C64::new(tr, 0.0) + C64::from_polar(v, k), ZERO],
    ]
}

type M2 = [[C64; 2]; 2];

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn axpy2(a: &M2, s: C64, b: &M2) -> M2 {
    let mut c = *a;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] += s * b[i][j];
        }
    }
    c
}

/// Integrates `dU/dt = −i H(t) U` over one period with classical RK4,
/// `steps` steps split evenly between the two segments.
pub fn time_stepped_bloch(k: f64, w: f64, gamma: f64, drive: &DriveProtocol, steps: usize) -> M2 {
    let mi = C64::new(0.0, -1.0);
    let mut u: M2 = [[C64::new(1.0, 0.0), ZERO], [ZERO, C64::new(1.0, 0.0)]];
    for (v, duration) in [(drive.f, drive.t1), (drive.q * drive.f, drive.t2)] {
        let h = bloch_h(k, w, gamma, v);
        let n = steps / 2;
        let dt = duration / n as f64;
        let rhs = |x: &M2| {
            let hx = mul2(&h, x);
            axpy2(&[[ZERO; 2]; 2], mi, &hx)
        };
        for _ in 0..n {
            let k1 = rhs(&u);
            let k2 = rhs(&axpy2(&u, C64::new(dt / 2.0, 0.0), &k1));
            let k3 = rhs(&axpy2(&u, C64::new(dt / 2.0, 0.0), &k2));
            let k4 = rhs(&axpy2(&u, C64::new(dt, 0.0), &k3));
            for i in 0..2 {
                for j in 0..2 {
                    u[i][j] += (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]) * (dt / 6.0);
                }
            }
        }
    }
    u
}

/// Winding of `z(k)` on an `n`-point grid by accumulating wrapped phase
/// differences of `atan2`.
pub fn unwrap_winding(n: usize, z: impl Fn(f64) -> C64) -> f64 {
    let phases: Vec<f64> = (0..=n).map(|j| z(TAU * j as f64 / n as f64).arg()).collect();
    let mut total = 0.0;
    for p in phases.windows(2) {
        let mut d = p[1] - p[0];
        while d > std::f64::consts::PI {
            d -= TAU;
        }
        while d < -std::f64::consts::PI {
            d += TAU;
        }
        total += d;
    }
    total / TAU
}

/// One oracle comparison: measured error against its tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }
}

pub fn expm_check(seed: u64) -> Check {
    use nhfloquet::numerics::expm;
    let mut r = rng(seed);
    let a = random_matrix(&mut r, 6);
    let a = a.scale_real(3.0 / a.norm_fro());
    let got = expm(&a).unwrap();
    let want = taylor_expm(&a, 200);
    Check {
        name: "expm vs Taylor series",
        error: (&got - &want).norm_max(),
        tol: 1e-10,
    }
}

pub fn svd_check(seed: u64) -> Check {
    use nhfloquet::numerics::{eigh, singular_values};
    let mut r = rng(seed);
    let a = random_matrix(&mut r, 8);
    let s = singular_values(&a).unwrap();
    let mut ev = eigh(&a.adjoint().matmul(&a).unwrap()).unwrap().values;
    ev.reverse();
    let error = s.iter().zip(&ev).map(|(s, e)| (s * s - e).abs()).fold(0.0, f64::max);
    Check {
        name: "svd vs eigh(A†A)",
        error,
        tol: 1e-9,
    }
}

pub fn eig_check(seed: u64) -> Check {
    use nhfloquet::numerics::eigvals;
    let mut r = rng(seed);
    let a = random_matrix(&mut r, 10);
    let got = eigvals(&a).unwrap();
    let want = poly_roots(&char_poly(&a));
    Check {
        name: "eig vs characteristic roots",
        error: matched_distance(&got, &want),
        tol: 1e-6,
    }
}

pub fn det_check(seed: u64) -> Check {
    use nhfloquet::numerics::det;
    let mut r = rng(seed);
    let a = random_matrix(&mut r, 6);
    let want = cofactor_det(&to_rows(&a));
    let got = det(&a).unwrap();
    Check {
        name: "det vs cofactor expansion",
        error: (got - want).norm() / want.norm(),
        tol: 1e-10,
    }
}

/// Random Hermitian `H` with `‖H‖ T < π`; `(i/T) log(expm(−iHT))` must give
/// `H` back.
pub fn log_check(seed: u64) -> Check {
    use nhfloquet::numerics::{eigh, expm, matrix_log_principal, I};
    let mut r = rng(seed);
    let b = random_matrix(&mut r, 6);
    let h = (&b + &b.adjoint()).scale_real(0.5);
    let spread = eigh(&h).unwrap().values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let t = 2.5 / spread;
    let u = expm(&h.scale(-I * t)).unwrap();
    let back = matrix_log_principal(&u).unwrap().scale(I / t);
    Check {
        name: "log round trip",
        error: (&back - &h).norm_max(),
        tol: 1e-8,
    }
}

/// Random model and drive for the Fourier oracle.
pub fn random_periodic_case(r: &mut ChaCha8Rng, cells: usize) -> (ModelParams, DriveProtocol) {
    let params = ModelParams::new(
        r.random_range(0.5..1.5),
        r.random_range(0.0..1.5),
        0.0,
        cells,
        Boundary::Periodic,
    )
    .unwrap();
    let drive = DriveProtocol::new(
        r.random_range(0.2..1.5),
        r.random_range(0.5..2.5),
        r.random_range(0.3..1.0),
        r.random_range(0.3..1.0),
    )
    .unwrap();
    (params, drive)
}

/// Eigenvalues of the periodic real-space operator against the union of
/// Bloch eigenvalues on the allowed momenta, for five random cases.
pub fn bloch_union_check(seed: u64) -> Check {
    use nhfloquet::floquet::{bloch_evolution, realspace_evolution};
    use nhfloquet::numerics::eigvals;
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let cells = 8;
        let (params, drive) = random_periodic_case(&mut r, cells);
        let u = realspace_evolution(&params, &drive, None).unwrap();
        let got = eigvals(&u.matrix).unwrap();
        let mut want = Vec::new();
        for j in 0..cells {
            let ub = bloch_evolution(TAU * j as f64 / cells as f64, &params, &drive)
                .unwrap()
                .matrix;
            let (a, b, c, d) = (ub[(0, 0)], ub[(0, 1)], ub[(1, 0)], ub[(1, 1)]);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
            want.push((tr + disc) / 2.0);
            want.push((tr - disc) / 2.0);
        }
        worst = worst.max(matched_distance(&got, &want));
    }
    Check {
        name: "periodic spectrum vs Bloch union",
        error: worst,
        tol: 1e-7,
    }
}

pub fn kernel_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for seed in 0..3 {
        out.push(expm_check(seed));
        out.push(svd_check(seed));
        out.push(eig_check(seed));
        out.push(det_check(seed));
        out.push(log_check(seed));
    }
    out.push(bloch_union_check(7));
    out
}
