use super::config::SweepConfig;
use super::pool::WorkPool;
use super::table::{Field, Table};
use crate::error::{Error, Result};
use crate::floquet::{quasienergies, realspace_evolution};
use crate::invariants::{momentum_winding, singular_spectrum, zero_mode_count_with, Sign, WindingResult};
use crate::lattice::{Boundary, DriveProtocol, ModelParams};

pub const SPECTRUM_HEADER: &[&str] = &["f", "w", "L", "boundary", "index", "re_E", "im_E"];
pub const SINGULARS_HEADER: &[&str] = &["f", "w", "L", "sign", "index", "s"];
pub const ZERO_MODES_HEADER: &[&str] = &["f", "w", "sign", "count"];
pub const WINDING_HEADER: &[&str] = &["f", "w", "V1_raw", "V1", "V2_raw", "V2", "flag"];

/// Parts of an f-sweep to compute; singular spectra at every scaling size are
/// by far the most expensive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FSweepParts {
    pub spectrum: bool,
    pub singulars: bool,
    pub winding: bool,
}

impl FSweepParts {
    pub const ALL: Self = Self {
        spectrum: true,
        singulars: true,
        winding: true,
    };
}

#[derive(Debug, Clone)]
pub struct FSweep {
    pub spectrum: Table,
    pub singulars: Table,
    pub zero_modes: Table,
    pub winding: Table,
    /// Per-point failures that did not stop the sweep.
    pub diagnostics: Vec<String>,
}

/// Windings of one grid point; errors are kept so the row can carry a flag.
#[derive(Debug, Clone)]
pub struct PointWindings {
    pub f: f64,
    pub w: f64,
    pub v1: Result<WindingResult>,
    pub v2: Result<WindingResult>,
}

impl PointWindings {
    pub fn compute(params: &ModelParams, drive: &DriveProtocol, grid: usize) -> Self {
        Self {
            f: drive.f,
            w: params.w,
            v1: momentum_winding(params, drive, Sign::Minus, grid),
            v2: momentum_winding(params, drive, Sign::Plus, grid),
        }
    }

    pub fn get(&self, sign: Sign) -> &Result<WindingResult> {
        match sign {
            Sign::Minus => &self.v1,
            Sign::Plus => &self.v2,
        }
    }

    /// Empty when both windings exist; otherwise names what failed.
    pub fn flag(&self) -> String {
        let part = |r: &Result<WindingResult>, name: &str| match r {
            Ok(_) => None,
            Err(Error::GapClosed { .. }) => Some(format!("gap_closed_{name}")),
            Err(_) => Some(format!("error_{name}")),
        };
        [part(&self.v1, "minus"), part(&self.v2, "plus")]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn row(&self) -> Vec<Field> {
        let raw = |r: &Result<WindingResult>| Field::from(r.as_ref().ok().map(|x| x.raw));
        let val = |r: &Result<WindingResult>| Field::from(r.as_ref().ok().map(|x| x.value));
        vec![
            self.f.into(),
            self.w.into(),
            raw(&self.v1),
            val(&self.v1),
            raw(&self.v2),
            val(&self.v2),
            self.flag().into(),
        ]
    }
}

fn grid_points(config: &SweepConfig) -> Vec<(f64, f64)> {
    let ws = config.w_values();
    config
        .f_values()
        .into_iter()
        .flat_map(|f| ws.iter().map(move |&w| (f, w)))
        .collect()
}

struct PointOutput {
    spectrum: Vec<Vec<Field>>,
    singulars: Vec<Vec<Field>>,
    zero_modes: Vec<Vec<Field>>,
    winding: Option<PointWindings>,
    diagnostics: Vec<String>,
}

fn evaluate_point(config: &SweepConfig, f: f64, w: f64, parts: FSweepParts) -> PointOutput {
    let (params, drive) = config.at(f, w);
    let mut out = PointOutput {
        spectrum: Vec::new(),
        singulars: Vec::new(),
        zero_modes: Vec::new(),
        winding: None,
        diagnostics: Vec::new(),
    };
    if parts.spectrum {
        match realspace_evolution(&params, &drive, None).and_then(|u| quasienergies(&u)) {
            Ok(q) => {
                let mut e = q.energies;
                e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                for (i, z) in e.iter().enumerate() {
                    out.spectrum.push(vec![
                        f.into(),
                        w.into(),
                        params.cells.into(),
                        params.boundary.as_str().into(),
                        i.into(),
                        z.re.into(),
                        z.im.into(),
                    ]);
                }
            }
            Err(e) => out.diagnostics.push(format!("spectrum at f={f} w={w}: {e}")),
        }
    }
    if parts.singulars {
        for sign in Sign::BOTH {
            let mut spectra = Vec::new();
            for &l in &config.scaling.sizes {
                let p = params.with_cells(l).with_boundary(Boundary::Open);
                match realspace_evolution(&p, &drive, None).and_then(|u| singular_spectrum(&u, sign)) {
                    Ok(s) => {
                        for (i, &x) in s.values.iter().enumerate() {
                            out.singulars.push(vec![
                                f.into(),
                                w.into(),
                                l.into(),
                                sign.as_str().into(),
                                i.into(),
                                x.into(),
                            ]);
                        }
                        spectra.push(s);
                    }
                    Err(e) => out.diagnostics.push(format!("singulars at f={f} w={w} L={l}: {e}")),
                }
            }
            let count = zero_mode_count_with(&spectra, config.numerics.slope_min);
            if let Err(e) = &count {
                out.diagnostics.push(format!("zero-mode count at f={f} w={w}: {e}"));
            }
            out.zero_modes
                .push(vec![f.into(), w.into(), sign.as_str().into(), count.ok().into()]);
        }
    }
    if parts.winding {
        out.winding = Some(PointWindings::compute(&params, &drive, config.numerics.grid));
    }
    out
}

/// Quasienergies, singular spectra with their size scaling, and momentum
/// windings over the configured `(f, w)` grid, rows ordered by `f` then `w`.
pub fn f_sweep(config: &SweepConfig, pool: &WorkPool, parts: FSweepParts) -> Result<FSweep> {
    config.validate()?;
    let points = grid_points(config);
    let outputs = pool.map(&points, |&(f, w)| evaluate_point(config, f, w, parts));
    let mut sweep = FSweep {
        spectrum: Table::new("spectrum", SPECTRUM_HEADER),
        singulars: Table::new("singulars", SINGULARS_HEADER),
        zero_modes: Table::new("zero_modes", ZERO_MODES_HEADER),
        winding: Table::new("winding", WINDING_HEADER),
        diagnostics: Vec::new(),
    };
    for o in outputs {
        o.spectrum.into_iter().for_each(|r| sweep.spectrum.push(r));
        o.singulars.into_iter().for_each(|r| sweep.singulars.push(r));
        o.zero_modes.into_iter().for_each(|r| sweep.zero_modes.push(r));
        if let Some(pw) = o.winding {
            sweep.winding.push(pw.row());
        }
        sweep.diagnostics.extend(o.diagnostics);
    }
    Ok(sweep)
}

/// Momentum windings on every grid point.
pub fn winding_grid(config: &SweepConfig, pool: &WorkPool) -> Result<Vec<PointWindings>> {
    config.validate()?;
    let points = grid_points(config);
    Ok(pool.map(&points, |&(f, w)| {
        let (params, drive) = config.at(f, w);
        PointWindings::compute(&params, &drive, config.numerics.grid)
    }))
}

/// `(V₁, V₂)` over the two-dimensional `(f, w)` grid; points where a
/// determinant vanishes carry a flag instead of values.
pub fn phase_diagram(config: &SweepConfig, pool: &WorkPool) -> Result<(Table, Vec<PointWindings>)> {
    if config.sweep.f.is_none() || config.sweep.w.is_none() {
        return Err(Error::InvalidParameter(
            "phase diagram needs both sweep.f and sweep.w axes".into(),
        ));
    }
    let points = winding_grid(config, pool)?;
    let mut table = Table::new("winding", WINDING_HEADER);
    for p in &points {
        table.push(p.row());
    }
    Ok((table, points))
}
