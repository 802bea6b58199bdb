use std::f64::consts::TAU;

use super::config::SweepConfig;
use super::pool::WorkPool;
use super::sweeps::{winding_grid, PointWindings};
use super::table::Table;
use crate::error::{Error, Result};
use crate::floquet::bloch_evolution;
use crate::invariants::{momentum_winding, Sign};
use crate::lattice::{DriveProtocol, ModelParams};
use crate::numerics::C64;

pub const BOUNDARIES_HEADER: &[&str] = &["axis", "value", "gap_type"];
pub const POINTS_HEADER: &[&str] = &["f", "w", "axis", "gap_type", "min_det", "k"];

pub fn gap_type(sign: Sign) -> &'static str {
    match sign {
        Sign::Minus => "zero",
        Sign::Plus => "pi",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptAxis {
    F,
    W,
}

impl SweptAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweptAxis::F => "f",
            SweptAxis::W => "w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub f: f64,
    pub w: f64,
    pub axis: SweptAxis,
    pub sign: Sign,
    /// `min_k |det(U(k,T) ∓ I)|` at the point.
    pub min_det: f64,
    /// Momentum where the minimum sits.
    pub k: f64,
}

impl BoundaryPoint {
    pub fn value(&self) -> f64 {
        match self.axis {
            SweptAxis::F => self.f,
            SweptAxis::W => self.w,
        }
    }
}

fn abs_det(k: f64, params: &ModelParams, drive: &DriveProtocol, sign: Sign) -> Result<f64> {
    let u = bloch_evolution(k, params, drive)?.matrix;
    let s = sign.target_eigenvalue();
    let det: C64 = (u[(0, 0)] - s) * (u[(1, 1)] - s) - u[(0, 1)] * u[(1, 0)];
    Ok(det.norm())
}

/// `min_k |det(U(k,T) ∓ I)|` from `samples` evenly spaced momenta, refined by
/// golden-section search around the best sample. Returns `(k, min)`.
pub fn min_abs_det(params: &ModelParams, drive: &DriveProtocol, sign: Sign, samples: usize) -> Result<(f64, f64)> {
    let dk = TAU / samples as f64;
    let mut best = (0.0, f64::INFINITY);
    for j in 0..samples {
        let k = dk * j as f64;
        let d = abs_det(k, params, drive, sign)?;
        if d < best.1 {
            best = (k, d);
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best.0 - dk, best.0 + dk);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = abs_det(c, params, drive, sign)?;
    let mut fd = abs_det(d, params, drive, sign)?;
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = abs_det(c, params, drive, sign)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = abs_det(d, params, drive, sign)?;
        }
    }
    let (k, m) = if fc < fd { (c, fc) } else { (d, fd) };
    if m < best.1 {
        best = (k.rem_euclid(TAU), m);
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct BoundaryTrace {
    pub points: Vec<BoundaryPoint>,
    pub boundaries: Table,
    pub boundary_points: Table,
    pub diagnostics: Vec<String>,
}

struct Bracket {
    axis: SweptAxis,
    sign: Sign,
    lo: (f64, f64),
    hi: (f64, f64),
    start: i64,
}

fn lerp(a: (f64, f64), b: (f64, f64), t: f64) -> (f64, f64) {
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

/// Bisects on the winding value between `lo` (value `start`) and `hi`. A
/// midpoint whose determinant vanishes on the grid ends the search there.
fn bisect(config: &SweepConfig, b: &Bracket) -> (f64, f64) {
    let len = match b.axis {
        SweptAxis::F => (b.hi.0 - b.lo.0).abs(),
        SweptAxis::W => (b.hi.1 - b.lo.1).abs(),
    };
    let (mut lo, mut hi) = (b.lo, b.hi);
    let mut width = len;
    while width > config.numerics.bisection_tol {
        let mid = lerp(lo, hi, 0.5);
        let (params, drive) = config.at(mid.0, mid.1);
        match momentum_winding(&params, &drive, b.sign, config.numerics.grid) {
            Ok(r) if r.value == b.start => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => return mid,
        }
        width *= 0.5;
    }
    lerp(lo, hi, 0.5)
}

fn brackets(
    points: &[PointWindings],
    n_f: usize,
    n_w: usize,
    axis: SweptAxis,
) -> (Vec<Bracket>, Vec<(f64, f64, Sign)>) {
    let at = |i: usize, j: usize| &points[i * n_w + j];
    let mut out = Vec::new();
    let mut on_grid = Vec::new();
    let (outer, inner) = match axis {
        SweptAxis::F => (n_w, n_f),
        SweptAxis::W => (n_f, n_w),
    };
    for o in 0..outer {
        for step in 0..inner.saturating_sub(1) {
            let (a, b) = match axis {
                SweptAxis::F => (at(step, o), at(step + 1, o)),
                SweptAxis::W => (at(o, step), at(o, step + 1)),
            };
            for sign in Sign::BOTH {
                match (a.get(sign), b.get(sign)) {
                    (Ok(x), Ok(y)) if x.value != y.value => out.push(Bracket {
                        axis,
                        sign,
                        lo: (a.f, a.w),
                        hi: (b.f, b.w),
                        start: x.value,
                    }),
                    (Err(Error::GapClosed { .. }), _) => on_grid.push((a.f, a.w, sign)),
                    _ => {}
                }
            }
        }
        // a closing on the very last grid point of the line
        let last = match axis {
            SweptAxis::F => at(inner - 1, o),
            SweptAxis::W => at(o, inner - 1),
        };
        for sign in Sign::BOTH {
            if inner > 1 && matches!(last.get(sign), Err(Error::GapClosed { .. })) {
                on_grid.push((last.f, last.w, sign));
            }
        }
    }
    (out, on_grid)
}

/// Gap closings along every swept axis. Each bracket where a winding changes
/// is bisected to `numerics.bisection_tol`, and the result is kept only if
/// `min_k |det|` there is below `numerics.boundary_det_tol`.
pub fn boundary_trace(config: &SweepConfig, pool: &WorkPool) -> Result<BoundaryTrace> {
    if config.sweep.f.is_none() && config.sweep.w.is_none() {
        return Err(Error::InvalidParameter(
            "boundary trace needs sweep.f or sweep.w".into(),
        ));
    }
    let grid = winding_grid(config, pool)?;
    let (n_f, n_w) = (config.f_values().len(), config.w_values().len());
    let mut candidates = Vec::new();
    let mut on_grid = Vec::new();
    for (axis, present) in [
        (SweptAxis::F, config.sweep.f.is_some()),
        (SweptAxis::W, config.sweep.w.is_some()),
    ] {
        if present {
            let (b, g) = brackets(&grid, n_f, n_w, axis);
            candidates.extend(b);
            on_grid.extend(g.into_iter().map(|(f, w, s)| (axis, f, w, s)));
        }
    }
    let mut located: Vec<(SweptAxis, Sign, (f64, f64))> =
        pool.map(&candidates, |b| (b.axis, b.sign, bisect(config, b)));
    located.extend(on_grid.into_iter().map(|(a, f, w, s)| (a, s, (f, w))));

    let checked = pool.map(&located, |&(axis, sign, (f, w))| {
        let (params, drive) = config.at(f, w);
        min_abs_det(&params, &drive, sign, config.numerics.det_samples).map(|(k, min_det)| BoundaryPoint {
            f,
            w,
            axis,
            sign,
            min_det,
            k,
        })
    });

    let mut trace = BoundaryTrace {
        points: Vec::new(),
        boundaries: Table::new("boundaries", BOUNDARIES_HEADER),
        boundary_points: Table::new("boundary_points", POINTS_HEADER),
        diagnostics: Vec::new(),
    };
    for r in checked {
        match r {
            Ok(p) if p.min_det <= config.numerics.boundary_det_tol => trace.points.push(p),
            Ok(p) => trace.diagnostics.push(format!(
                "winding change near f={} w={} ({}) without a gap closing: min |det| = {}",
                p.f,
                p.w,
                gap_type(p.sign),
                p.min_det
            )),
            Err(e) => trace.diagnostics.push(format!("boundary check failed: {e}")),
        }
    }
    trace.points.sort_by(|a, b| {
        (a.axis.as_str(), a.w, a.f, a.sign.as_str())
            .partial_cmp(&(b.axis.as_str(), b.w, b.f, b.sign.as_str()))
            .expect("finite coordinates")
    });
    for p in &trace.points {
        trace
            .boundaries
            .push(vec![p.axis.as_str().into(), p.value().into(), gap_type(p.sign).into()]);
        trace.boundary_points.push(vec![
            p.f.into(),
            p.w.into(),
            p.axis.as_str().into(),
            gap_type(p.sign).into(),
            p.min_det.into(),
            p.k.into(),
        ]);
    }
    Ok(trace)
}
