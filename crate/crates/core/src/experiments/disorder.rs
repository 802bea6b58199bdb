use std::f64::consts::{PI, TAU};

use super::config::SweepConfig;
use super::pool::WorkPool;
use super::table::{Field, Table};
use crate::error::Result;
use crate::floquet::{quasienergies, realspace_evolution};
use crate::invariants::{realspace_winding, singular_spectrum, zero_mode_count_with, Sign, WindingResult};
use crate::lattice::{sample_disorder, Boundary, DisorderSpec};
use crate::numerics::C64;
use crate::observables::{wipr, StateSet};

pub const DISORDER_HEADER: &[&str] = &["d", "realization", "zero_mode_dev", "pi_mode_dev", "wipr"];
pub const REALSPACE_HEADER: &[&str] = &["d", "realization", "sign", "raw", "value"];
pub const MODES_HEADER: &[&str] = &["d", "realization", "mode", "re_E", "im_E", "abs_dev"];
pub const COUNTS_HEADER: &[&str] = &["d", "realization", "sign", "count"];
pub const SUMMARY_HEADER: &[&str] = &[
    "d",
    "realizations",
    "failures",
    "mean_zero_mode_dev",
    "mean_pi_mode_dev",
    "mean_wipr",
    "mean_abs_wipr",
    "V1_min",
    "V1_max",
    "V2_min",
    "V2_max",
];
pub const WIPR_HEADER: &[&str] = &["d", "realizations", "mean_wipr", "mean_abs_wipr"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisorderParts {
    /// Open-chain quasienergies, mode deviations and WIPR.
    pub modes: bool,
    /// Periodic-chain real-space windings.
    pub windings: bool,
}

/// Open-chain mode tracking of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTrack {
    /// Quasienergy closest to 0.
    pub zero_mode: C64,
    /// Quasienergy closest to π/T.
    pub pi_mode: C64,
    pub zero_mode_dev: f64,
    pub pi_mode_dev: f64,
    pub wipr: f64,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub strength: f64,
    pub index: u64,
    pub modes: Option<Result<ModeTrack>>,
    pub windings: Option<[Result<WindingResult>; 2]>,
    pub counts: Option<[Result<usize>; 2]>,
}

/// Distance of `e` from `π/T` on the quasienergy circle, as a complex offset.
pub fn pi_offset(e: C64, period: f64) -> C64 {
    let zone = TAU / period;
    let mut re = e.re - PI / period;
    re -= zone * (re / zone).round();
    C64::new(re, e.im)
}

fn nearest(energies: &[C64], offset: impl Fn(C64) -> C64) -> (C64, f64) {
    energies
        .iter()
        .map(|&e| (e, offset(e).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((C64::new(f64::NAN, f64::NAN), f64::NAN))
}

fn track_modes(config: &SweepConfig, spec: &DisorderSpec) -> Result<ModeTrack> {
    let params = config.model.with_boundary(Boundary::Open);
    let dh = sample_disorder(spec, params.cells);
    let u = realspace_evolution(&params, &config.drive, Some(&dh))?;
    let q = quasienergies(&u)?;
    let (zero_mode, zero_mode_dev) = nearest(&q.energies, |e| e);
    let (pi_mode, pi_mode_dev) = nearest(&q.energies, |e| pi_offset(e, u.period));
    let states = StateSet::from_spectrum(&q, params.cells)?;
    Ok(ModeTrack {
        zero_mode,
        pi_mode,
        zero_mode_dev,
        pi_mode_dev,
        wipr: wipr(&states)?,
    })
}

fn windings(config: &SweepConfig, spec: &DisorderSpec) -> [Result<WindingResult>; 2] {
    let params = config.model.with_boundary(Boundary::Periodic);
    let dh = sample_disorder(spec, params.cells);
    match realspace_evolution(&params, &config.drive, Some(&dh)) {
        Ok(u) => Sign::BOTH.map(|s| realspace_winding(&u, s)),
        Err(e) => [Err(e.clone()), Err(e)],
    }
}

fn scaling_counts(config: &SweepConfig, spec: &DisorderSpec) -> [Result<usize>; 2] {
    Sign::BOTH.map(|sign| {
        let spectra = config
            .scaling
            .sizes
            .iter()
            .map(|&l| {
                let p = config.model.with_cells(l).with_boundary(Boundary::Open);
                let u = realspace_evolution(&p, &config.drive, Some(&sample_disorder(spec, l)))?;
                singular_spectrum(&u, sign)
            })
            .collect::<Result<Vec<_>>>()?;
        zero_mode_count_with(&spectra, config.numerics.slope_min)
    })
}

/// Evaluates one `(strength, realization)` pair. Open and periodic chains
/// draw from the same disorder stream.
pub fn run_realization(config: &SweepConfig, strength: f64, index: u64, parts: DisorderParts) -> Realization {
    let spec = DisorderSpec {
        strength,
        seed: config.disorder.seed,
        realization_index: index,
        range: config.disorder.range,
    };
    Realization {
        strength,
        index,
        modes: parts.modes.then(|| track_modes(config, &spec)),
        windings: parts.windings.then(|| windings(config, &spec)),
        counts: (parts.windings && config.disorder.zero_mode_scaling).then(|| scaling_counts(config, &spec)),
    }
}

#[derive(Debug, Clone)]
pub struct DisorderSweep {
    pub realizations: Vec<Realization>,
    pub disorder: Table,
    pub realspace: Table,
    pub modes: Table,
    pub counts: Table,
    pub summary: Table,
    pub wipr: Table,
    pub diagnostics: Vec<String>,
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// All `(strength, realization)` pairs, ordered by strength then realization
/// index regardless of how the pool schedules them.
pub fn disorder_sweep(config: &SweepConfig, pool: &WorkPool, parts: DisorderParts) -> Result<DisorderSweep> {
    config.validate()?;
    let items: Vec<(f64, u64)> = config
        .disorder
        .strengths
        .iter()
        .flat_map(|&d| (0..config.disorder.realizations as u64).map(move |r| (d, r)))
        .collect();
    let realizations = pool.map(&items, |&(d, r)| run_realization(config, d, r, parts));

    let mut out = DisorderSweep {
        disorder: Table::new("disorder", DISORDER_HEADER),
        realspace: Table::new("realspace_winding", REALSPACE_HEADER),
        modes: Table::new("disorder_modes", MODES_HEADER),
        counts: Table::new("disorder_counts", COUNTS_HEADER),
        summary: Table::new("disorder_summary", SUMMARY_HEADER),
        wipr: Table::new("wipr", WIPR_HEADER),
        diagnostics: Vec::new(),
        realizations: Vec::new(),
    };
    for r in &realizations {
        let (d, i) = (r.strength, r.index as usize);
        match &r.modes {
            Some(Ok(m)) => {
                out.disorder.push(vec![
                    d.into(),
                    i.into(),
                    m.zero_mode_dev.into(),
                    m.pi_mode_dev.into(),
                    m.wipr.into(),
                ]);
                for (name, e, dev) in [("zero", m.zero_mode, m.zero_mode_dev), ("pi", m.pi_mode, m.pi_mode_dev)] {
                    out.modes.push(vec![
                        d.into(),
                        i.into(),
                        name.into(),
                        e.re.into(),
                        e.im.into(),
                        dev.into(),
                    ]);
                }
            }
            Some(Err(e)) => {
                out.diagnostics.push(format!("modes at d={d} realization {i}: {e}"));
                out.disorder
                    .push(vec![d.into(), i.into(), Field::Empty, Field::Empty, Field::Empty]);
            }
            None => {}
        }
        if let Some(ws) = &r.windings {
            for (sign, w) in Sign::BOTH.iter().zip(ws) {
                match w {
                    Ok(w) => {
                        if !w.is_quantized(crate::invariants::QUANTIZATION_TOL) {
                            out.diagnostics.push(format!(
                                "real-space winding ({}) at d={d} realization {i} not quantized: raw {}",
                                sign.as_str(),
                                w.raw
                            ));
                        }
                        out.realspace.push(vec![
                            d.into(),
                            i.into(),
                            sign.as_str().into(),
                            w.raw.into(),
                            w.value.into(),
                        ])
                    }
                    Err(e) => {
                        out.diagnostics.push(format!(
                            "real-space winding ({}) at d={d} realization {i}: {e}",
                            sign.as_str()
                        ));
                        out.realspace.push(vec![
                            d.into(),
                            i.into(),
                            sign.as_str().into(),
                            Field::Empty,
                            Field::Empty,
                        ]);
                    }
                }
            }
        }
        if let Some(cs) = &r.counts {
            for (sign, c) in Sign::BOTH.iter().zip(cs) {
                if let Err(e) = c {
                    out.diagnostics
                        .push(format!("zero-mode count at d={d} realization {i}: {e}"));
                }
                out.counts.push(vec![
                    d.into(),
                    i.into(),
                    sign.as_str().into(),
                    c.as_ref().ok().copied().into(),
                ]);
            }
        }
    }

    for &d in &config.disorder.strengths {
        let group: Vec<&Realization> = realizations.iter().filter(|r| r.strength == d).collect();
        let tracks: Vec<&ModeTrack> = group
            .iter()
            .filter_map(|r| r.modes.as_ref().and_then(|m| m.as_ref().ok()))
            .collect();
        let failures = group
            .iter()
            .filter(|r| {
                matches!(r.modes, Some(Err(_))) || r.windings.as_ref().is_some_and(|w| w.iter().any(|x| x.is_err()))
            })
            .count();
        let collect = |g: fn(&ModeTrack) -> f64| -> Vec<f64> { tracks.iter().map(|t| g(t)).collect() };
        let range = |k: usize| -> (Field, Field) {
            let vals: Vec<i64> = group
                .iter()
                .filter_map(|r| r.windings.as_ref().and_then(|w| w[k].as_ref().ok().map(|x| x.value)))
                .collect();
            (vals.iter().min().copied().into(), vals.iter().max().copied().into())
        };
        let (v1min, v1max) = range(0);
        let (v2min, v2max) = range(1);
        let wipr_mean = mean(&collect(|t| t.wipr));
        let abs_wipr = mean(&collect(|t| t.wipr.abs()));
        out.summary.push(vec![
            d.into(),
            group.len().into(),
            failures.into(),
            mean(&collect(|t| t.zero_mode_dev)).into(),
            mean(&collect(|t| t.pi_mode_dev)).into(),
            wipr_mean.into(),
            abs_wipr.into(),
            v1min,
            v1max,
            v2min,
            v2max,
        ]);
        out.wipr.push(vec![
            d.into(),
            config.disorder.realizations.into(),
            wipr_mean.into(),
            abs_wipr.into(),
        ]);
    }
    out.realizations = realizations;
    Ok(out)
}
