use super::config::SweepConfig;
use super::pool::WorkPool;
use super::table::{Field, Table};
use crate::error::Result;
use crate::invariants::{winding_bloch_static, winding_gbz_static, WindingResult};
use crate::lattice::{realspace_hamiltonian, Boundary, ModelParams};
use crate::numerics::eig_general;
use crate::observables::{edge_cells, localization_profile};

pub const STATIC_HEADER: &[&str] = &[
    "w",
    "gamma",
    "v",
    "W_BZ_raw",
    "W_BZ",
    "W_GBZ_raw",
    "W_GBZ",
    "obc_zero_modes",
    "flag",
];

/// Zero modes of the static open chain counted by exact diagonalization:
/// eigenstates with `|E| < zero_tol` and at least `localization_min` of their
/// weight in the outer cells. Chiral symmetry pairs them, so the number of
/// pairs is returned.
pub fn static_obc_zero_modes(params: &ModelParams, zero_tol: f64, localization_min: f64) -> Result<usize> {
    let p = params.with_boundary(Boundary::Open);
    let h = realspace_hamiltonian(&p, p.v)?;
    let e = eig_general(&h, true)?;
    let vectors = e.vectors.expect("requested eigenvectors");
    let l = p.cells;
    let m = edge_cells(l);
    let mut n = 0;
    for (j, z) in e.values.iter().enumerate() {
        if z.norm() >= zero_tol {
            continue;
        }
        let prof = localization_profile(&vectors.column(j), l)?;
        let edge: f64 = if 2 * m >= l {
            1.0
        } else {
            prof[..m].iter().sum::<f64>() + prof[l - m..].iter().sum::<f64>()
        };
        if edge >= localization_min {
            n += 1;
        }
    }
    Ok(n / 2)
}

#[derive(Debug, Clone)]
pub struct StaticPoint {
    pub params: ModelParams,
    pub bloch: Result<WindingResult>,
    pub gbz: Result<WindingResult>,
    pub obc_zero_modes: Result<usize>,
}

/// Static windings on the Brillouin zone and the GBZ circle next to the
/// open-chain zero-mode count, for every `w` on the grid at fixed `v`.
pub fn static_winding(config: &SweepConfig, pool: &WorkPool) -> Result<(Table, Vec<StaticPoint>)> {
    config.validate()?;
    let ws = config.w_values();
    let points = pool.map(&ws, |&w| {
        let params = ModelParams { w, ..config.model };
        StaticPoint {
            params,
            bloch: winding_bloch_static(&params, config.numerics.static_grid),
            gbz: winding_gbz_static(&params, config.numerics.static_grid),
            obc_zero_modes: static_obc_zero_modes(
                &params,
                config.numerics.static_zero_tol,
                config.numerics.localization_min,
            ),
        }
    });
    let mut t = Table::new("static_winding", STATIC_HEADER);
    for p in &points {
        let raw = |r: &Result<WindingResult>| Field::from(r.as_ref().ok().map(|x| x.raw));
        let val = |r: &Result<WindingResult>| Field::from(r.as_ref().ok().map(|x| x.value));
        let flag: Vec<String> = [
            p.bloch.as_ref().err().map(|e| format!("bz: {e}")),
            p.gbz.as_ref().err().map(|e| format!("gbz: {e}")),
            p.obc_zero_modes.as_ref().err().map(|e| format!("obc: {e}")),
        ]
        .into_iter()
        .flatten()
        .collect();
        t.push(vec![
            p.params.w.into(),
            p.params.gamma.into(),
            p.params.v.into(),
            raw(&p.bloch),
            val(&p.bloch),
            raw(&p.gbz),
            val(&p.gbz),
            p.obc_zero_modes.as_ref().ok().copied().into(),
            flag.join(";").into(),
        ]);
    }
    Ok((t, points))
}
