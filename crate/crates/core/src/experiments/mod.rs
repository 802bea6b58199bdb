//! Parameter sweeps behind every command-line subcommand, and their CSV and
//! manifest output.

mod boundary;
mod config;
mod disorder;
mod pool;
mod static_model;
mod sweeps;
mod table;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

pub use boundary::{
    boundary_trace, gap_type, min_abs_det, BoundaryPoint, BoundaryTrace, SweptAxis, BOUNDARIES_HEADER, POINTS_HEADER,
};
pub use config::{Axis, DisorderSettings, NumericsSettings, ScalingSettings, SweepAxes, SweepConfig};
pub use disorder::{
    disorder_sweep, pi_offset, run_realization, DisorderParts, DisorderSweep, ModeTrack, Realization, COUNTS_HEADER,
    DISORDER_HEADER, MODES_HEADER, REALSPACE_HEADER, SUMMARY_HEADER, WIPR_HEADER,
};
pub use pool::WorkPool;
pub use static_model::{static_obc_zero_modes, static_winding, StaticPoint, STATIC_HEADER};
pub use sweeps::{
    f_sweep, phase_diagram, winding_grid, FSweep, FSweepParts, PointWindings, SINGULARS_HEADER, SPECTRUM_HEADER,
    WINDING_HEADER, ZERO_MODES_HEADER,
};
pub use table::{write_tables, Field, Table};

use crate::error::{Error, Result};
use table::io_error;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Singulars,
    Winding,
    WindingReal,
    StaticWinding,
    PhaseDiagram,
    Boundaries,
    Disorder,
    Wipr,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Spectrum,
        Command::Singulars,
        Command::Winding,
        Command::WindingReal,
        Command::StaticWinding,
        Command::PhaseDiagram,
        Command::Boundaries,
        Command::Disorder,
        Command::Wipr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Singulars => "singulars",
            Command::Winding => "winding",
            Command::WindingReal => "winding-real",
            Command::StaticWinding => "static-winding",
            Command::PhaseDiagram => "phase-diagram",
            Command::Boundaries => "boundaries",
            Command::Disorder => "disorder",
            Command::Wipr => "wipr",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub command: Command,
    pub tables: Vec<Table>,
    /// One paragraph for humans.
    pub summary: String,
    /// Non-fatal per-point failures.
    pub diagnostics: Vec<String>,
}

const LISTED: usize = 12;

fn list_lines(lines: Vec<String>) -> String {
    let n = lines.len();
    let mut s = lines.into_iter().take(LISTED).collect::<Vec<_>>().join("; ");
    if n > LISTED {
        let _ = write!(s, "; ... ({} more)", n - LISTED);
    }
    s
}

fn winding_text(p: &PointWindings) -> String {
    let v = |r: &Result<crate::invariants::WindingResult>| match r {
        Ok(x) => x.value.to_string(),
        Err(_) => "?".into(),
    };
    let mut s = format!("f={} w={}: V1={} V2={}", p.f, p.w, v(&p.v1), v(&p.v2));
    let flag = p.flag();
    if !flag.is_empty() {
        let _ = write!(s, " [{flag}]");
    }
    s
}

/// Runs one command. Per-point numerical failures land in
/// [`RunOutput::diagnostics`]; only invalid configuration is an error.
pub fn run(command: Command, config: &SweepConfig, pool: &WorkPool) -> Result<RunOutput> {
    config.validate()?;
    let (tables, summary, diagnostics) = match command {
        Command::Spectrum => {
            let parts = FSweepParts {
                spectrum: true,
                singulars: false,
                winding: false,
            };
            let s = f_sweep(config, pool, parts)?;
            let im = s.spectrum.column("im_E").expect("header");
            let max_im = s
                .spectrum
                .rows
                .iter()
                .filter_map(|r| match r[im] {
                    Field::Float(x) => Some(x.abs()),
                    _ => None,
                })
                .fold(0.0, f64::max);
            let summary = format!(
                "spectrum: {} quasienergies over {} point(s), L={}, {} boundary; max |Im E| = {:e}",
                s.spectrum.len(),
                config.f_values().len() * config.w_values().len(),
                config.model.cells,
                config.model.boundary.as_str(),
                max_im
            );
            (vec![s.spectrum], summary, s.diagnostics)
        }
        Command::Singulars => {
            let parts = FSweepParts {
                spectrum: false,
                singulars: true,
                winding: false,
            };
            let s = f_sweep(config, pool, parts)?;
            let lines = s
                .zero_modes
                .rows
                .chunks(2)
                .map(|pair| {
                    format!(
                        "f={} w={}: zero modes minus={} plus={}",
                        pair[0][0], pair[0][1], pair[0][3], pair[1][3]
                    )
                })
                .collect();
            let summary = format!(
                "singular spectra at L={:?}; {}",
                config.scaling.sizes,
                list_lines(lines)
            );
            (vec![s.singulars, s.zero_modes], summary, s.diagnostics)
        }
        Command::Winding => {
            let points = winding_grid(config, pool)?;
            let mut t = Table::new("winding", WINDING_HEADER);
            points.iter().for_each(|p| t.push(p.row()));
            let summary = format!(
                "momentum windings: {}",
                list_lines(points.iter().map(winding_text).collect())
            );
            (vec![t], summary, Vec::new())
        }
        Command::PhaseDiagram => {
            let (t, points) = phase_diagram(config, pool)?;
            let values = |sign| -> BTreeSet<i64> {
                points
                    .iter()
                    .filter_map(|p: &PointWindings| p.get(sign).as_ref().ok().map(|r| r.value))
                    .collect()
            };
            let flagged = points.iter().filter(|p| !p.flag().is_empty()).count();
            let summary = format!(
                "phase diagram over {}x{} (f, w) points: V1 takes {:?}, V2 takes {:?}; {} point(s) flagged as gap closings",
                config.f_values().len(),
                config.w_values().len(),
                values(crate::invariants::Sign::Minus),
                values(crate::invariants::Sign::Plus),
                flagged
            );
            (vec![t], summary, Vec::new())
        }
        Command::Boundaries => {
            let b = boundary_trace(config, pool)?;
            let lines = b
                .points
                .iter()
                .map(|p| {
                    format!(
                        "{}={:.5} at {} ({} gap)",
                        p.axis.as_str(),
                        p.value(),
                        fixed_text(p),
                        gap_type(p.sign)
                    )
                })
                .collect();
            let summary = format!("{} gap closing(s): {}", b.points.len(), list_lines(lines));
            (vec![b.boundaries, b.boundary_points], summary, b.diagnostics)
        }
        Command::StaticWinding => {
            let (t, points) = static_winding(config, pool)?;
            let lines = points
                .iter()
                .map(|p| {
                    let v = |r: &Result<crate::invariants::WindingResult>| {
                        r.as_ref()
                            .map_or("?".to_string(), |x| format!("{} (raw {:.4})", x.value, x.raw))
                    };
                    format!(
                        "w={} gamma={} v={}: W_BZ={} W_GBZ={} open-chain zero modes={}",
                        p.params.w,
                        p.params.gamma,
                        p.params.v,
                        v(&p.bloch),
                        v(&p.gbz),
                        p.obc_zero_modes.as_ref().map_or("?".to_string(), |n| n.to_string())
                    )
                })
                .collect();
            (vec![t], format!("static windings: {}", list_lines(lines)), Vec::new())
        }
        Command::WindingReal | Command::Disorder | Command::Wipr => {
            let parts = match command {
                Command::WindingReal => DisorderParts {
                    modes: false,
                    windings: true,
                },
                Command::Wipr => DisorderParts {
                    modes: true,
                    windings: false,
                },
                _ => DisorderParts {
                    modes: true,
                    windings: true,
                },
            };
            let s = disorder_sweep(config, pool, parts)?;
            let summary = disorder_summary(command, config, &s);
            let tables = match command {
                Command::WindingReal => {
                    let mut t = vec![s.realspace];
                    if config.disorder.zero_mode_scaling {
                        t.push(s.counts);
                    }
                    t
                }
                Command::Wipr => vec![s.wipr],
                _ => {
                    let mut t = vec![s.disorder, s.realspace, s.modes, s.summary, s.wipr];
                    if config.disorder.zero_mode_scaling {
                        t.push(s.counts);
                    }
                    t
                }
            };
            (tables, summary, s.diagnostics)
        }
    };
    Ok(RunOutput {
        command,
        tables,
        summary,
        diagnostics,
    })
}

fn fixed_text(p: &BoundaryPoint) -> String {
    match p.axis {
        SweptAxis::F => format!("w={}", p.w),
        SweptAxis::W => format!("f={}", p.f),
    }
}

fn disorder_summary(command: Command, config: &SweepConfig, s: &DisorderSweep) -> String {
    let col = |name: &str| s.summary.column(name).expect("summary header");
    let lines = s
        .summary
        .rows
        .iter()
        .map(|r| {
            let windings = format!(
                "V1'={}..{} V2'={}..{}",
                r[col("V1_min")],
                r[col("V1_max")],
                r[col("V2_min")],
                r[col("V2_max")]
            );
            let modes = format!(
                "mean 0-mode dev={} mean pi-mode dev={} mean WIPR={}",
                r[col("mean_zero_mode_dev")],
                r[col("mean_pi_mode_dev")],
                r[col("mean_wipr")]
            );
            match command {
                Command::WindingReal => format!("d={}: {windings}", r[0]),
                Command::Wipr => format!("d={}: mean WIPR={}", r[0], r[col("mean_wipr")]),
                _ => format!("d={}: {modes} {windings}", r[0]),
            }
        })
        .collect();
    format!(
        "{} realization(s) per strength at f={}, L={}: {}",
        config.disorder.realizations,
        config.drive.f,
        config.model.cells,
        list_lines(lines)
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: Command,
    pub config: SweepConfig,
    pub seed: u64,
    pub code_version: String,
    pub started: String,
    pub finished: String,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let m: Manifest = serde_json::from_str(&text).map_err(|e| io_error(path, e))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidParameter(format!(
                "{}: manifest schema {} is not {SCHEMA_VERSION}",
                path.display(),
                m.schema_version
            )));
        }
        Ok(m)
    }
}

fn timestamp() -> String {
    humantime::format_rfc3339_seconds(SystemTime::now()).to_string()
}

/// Runs `command`, writes its tables and `manifest.json` into `dir`.
pub fn execute(command: Command, config: &SweepConfig, pool: &WorkPool, dir: &Path) -> Result<(RunOutput, Manifest)> {
    let started = timestamp();
    let out = run(command, config, pool)?;
    let paths = write_tables(&out.tables, dir)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command,
        config: config.clone(),
        seed: config.disorder.seed,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: timestamp(),
        files: paths
            .iter()
            .map(|p| p.file_name().expect("file").to_string_lossy().into_owned())
            .collect(),
    };
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| io_error(&path, e))?;
    fs::write(&path, json + "\n").map_err(|e| io_error(&path, e))?;
    Ok((out, manifest))
}

/// Repeats the run recorded in a manifest, writing into `dir`.
pub fn rerun(manifest_path: &Path, pool: &WorkPool, dir: &Path) -> Result<(RunOutput, Manifest)> {
    let m = Manifest::load(manifest_path)?;
    execute(m.command, &m.config, pool, dir)
}

/// Default output directory for a command: `<output_dir>/<command>`.
pub fn default_dir(config: &SweepConfig, command: Command) -> PathBuf {
    config.output_dir.join(command.name())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_match_serde() {
        for c in Command::ALL {
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
    }

    #[test]
    fn winding_summary_names_integers() {
        let mut c = SweepConfig::default();
        c.drive.f = 0.5;
        let out = run(Command::Winding, &c, &WorkPool::serial()).unwrap();
        assert!(out.summary.contains("V1=1 V2=0"), "{}", out.summary);
    }

    #[test]
    fn manifest_round_trip_and_rerun() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = SweepConfig::default();
        c.model.cells = 6;
        c.disorder.realizations = 2;
        c.disorder.strengths = vec![0.0, 0.2];
        let pool = WorkPool::new(2).unwrap();
        let first = dir.path().join("a");
        let (_, m) = execute(Command::Disorder, &c, &pool, &first).unwrap();
        let loaded = Manifest::load(&first.join(MANIFEST_FILE)).unwrap();
        assert_eq!(loaded, m);
        assert_eq!(loaded.config, c);
        let second = dir.path().join("b");
        rerun(&first.join(MANIFEST_FILE), &WorkPool::serial(), &second).unwrap();
        for f in &m.files {
            assert_eq!(
                fs::read(first.join(f)).unwrap(),
                fs::read(second.join(f)).unwrap(),
                "{f}"
            );
        }
    }

    #[test]
    fn unwritable_directory_names_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = execute(
            Command::Winding,
            &SweepConfig::default(),
            &WorkPool::serial(),
            &blocker.join("sub"),
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Io { path, .. } if path.contains("file")), "{err}");
    }
}
