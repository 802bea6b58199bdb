use std::path::Path;

use nhfloquet::experiments::{
    boundary_trace, execute, f_sweep, phase_diagram, winding_grid, Axis, Command, FSweepParts, PointWindings,
    SweepConfig, SweptAxis, WorkPool,
};
use nhfloquet::invariants::Sign;

fn base() -> SweepConfig {
    SweepConfig::default()
}

fn values(points: &[PointWindings], sign: Sign) -> Vec<Option<i64>> {
    points
        .iter()
        .map(|p| p.get(sign).as_ref().ok().map(|r| r.value.abs()))
        .collect()
}

/// Grid intervals `[f_i, f_{i+1}]` across which the winding changes.
fn transitions(points: &[PointWindings], sign: Sign) -> Vec<(f64, f64)> {
    let v = values(points, sign);
    (0..points.len() - 1)
        .filter(|&i| v[i] != v[i + 1])
        .map(|i| (points[i].f, points[i + 1].f))
        .collect()
}

fn distance_to_interval(x: f64, (a, b): (f64, f64)) -> f64 {
    if x < a {
        a - x
    } else if x > b {
        x - b
    } else {
        0.0
    }
}

#[test]
fn f_sweep_detects_regime_transitions() {
    let mut c = base();
    c.sweep.f = Some(Axis::new(0.0, 1.1, 111));
    let points = winding_grid(&c, &WorkPool::new(0).unwrap()).unwrap();
    let zero = transitions(&points, Sign::Minus);
    let pi = transitions(&points, Sign::Plus);
    assert_eq!(zero.len(), 1, "{zero:?}");
    assert_eq!(pi.len(), 2, "{pi:?}");
    let step = 0.01 + 1e-9;
    assert!(distance_to_interval(0.16, zero[0]) <= step, "{zero:?}");
    assert!(distance_to_interval(0.87, pi[0]) <= step, "{pi:?}");
    assert!(distance_to_interval(0.97, pi[1]) <= step, "{pi:?}");
}

#[test]
fn single_point_sweep_gives_one_row() {
    let mut c = base();
    c.drive.f = 0.5;
    let s = f_sweep(
        &c,
        &WorkPool::serial(),
        FSweepParts {
            spectrum: false,
            singulars: false,
            winding: true,
        },
    )
    .unwrap();
    assert_eq!(s.winding.len(), 1);
    let v1 = s.winding.column("V1").unwrap();
    assert_eq!(s.winding.rows[0][v1].to_string().parse::<i64>().unwrap().abs(), 1);
}

#[test]
fn undriven_hermitian_chain_has_no_pi_winding() {
    let mut c = base();
    c.model.gamma = 0.0;
    c.drive.q = 1.0;
    c.drive.t1 = 0.3;
    c.drive.t2 = 0.3;
    c.sweep.f = Some(Axis::new(0.0, 1.1, 23));
    for p in winding_grid(&c, &WorkPool::serial()).unwrap() {
        // ‖H(k)‖ ≤ w + v keeps every band inside (−π/T, π/T)
        assert!((c.model.w + p.f) * c.drive.period() < std::f64::consts::PI);
        assert_eq!(p.v2.as_ref().unwrap().value, 0, "f={}", p.f);
    }
}

fn grid(f: (f64, f64, usize), w: (f64, f64, usize)) -> SweepConfig {
    let mut c = base();
    c.sweep.f = Some(Axis::new(f.0, f.1, f.2));
    c.sweep.w = Some(Axis::new(w.0, w.1, w.2));
    c
}

#[test]
fn trivial_corner_of_the_phase_diagram() {
    let c = grid((0.02, 0.08, 2), (0.9, 1.1, 2));
    let (table, points) = phase_diagram(&c, &WorkPool::serial()).unwrap();
    assert_eq!(table.len(), 4);
    for p in &points {
        assert_eq!((p.v1.as_ref().unwrap().value, p.v2.as_ref().unwrap().value), (0, 0));
    }
}

#[test]
fn refining_the_grid_keeps_plateau_interiors() {
    let pool = WorkPool::new(0).unwrap();
    let (nf, nw) = (13, 14);
    let coarse = winding_grid(&grid((0.0, 1.2, nf), (0.2, 1.5, nw)), &pool).unwrap();
    let fine = winding_grid(&grid((0.0, 1.2, 2 * nf - 1), (0.2, 1.5, 2 * nw - 1)), &pool).unwrap();
    let key = |p: &PointWindings| (p.v1.as_ref().ok().map(|r| r.value), p.v2.as_ref().ok().map(|r| r.value));
    let mut checked = 0;
    for i in 0..nf - 1 {
        for j in 0..nw - 1 {
            let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)].map(|(a, b)| key(&coarse[a * nw + b]));
            if corners.iter().any(|c| *c != corners[0]) {
                continue;
            }
            // every fine point of the cell, shared corners included
            for a in 2 * i..=2 * i + 2 {
                for b in 2 * j..=2 * j + 2 {
                    assert_eq!(key(&fine[a * (2 * nw - 1) + b]), corners[0], "cell ({i},{j})");
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn boundaries_sit_where_the_phase_diagram_steps() {
    let pool = WorkPool::new(0).unwrap();
    let c = grid((0.0, 1.2, 25), (0.6, 1.2, 4));
    let (_, points) = phase_diagram(&c, &pool).unwrap();
    let trace = boundary_trace(&c, &pool).unwrap();
    let (fs, ws) = (c.f_values(), c.w_values());
    let nw = ws.len();
    for sign in Sign::BOTH {
        for (j, &w) in ws.iter().enumerate() {
            let line: Vec<PointWindings> = (0..fs.len()).map(|i| points[i * nw + j].clone()).collect();
            let steps = transitions(&line, sign);
            let found: Vec<f64> = trace
                .points
                .iter()
                .filter(|p| p.axis == SweptAxis::F && p.sign == sign && p.w == w)
                .map(|p| p.f)
                .collect();
            assert_eq!(found.len(), steps.len(), "w={w} {sign:?}: {found:?} vs {steps:?}");
            for (f, s) in found.iter().zip(&steps) {
                assert!(distance_to_interval(*f, *s) < 1e-9, "w={w}: {f} outside {s:?}");
            }
        }
    }
    assert!(trace.points.iter().all(|p| p.min_det <= c.numerics.boundary_det_tol));
}

#[test]
fn pi_gap_boundaries_near_the_upper_regimes() {
    let mut c = base();
    c.sweep.f = Some(Axis::new(0.9, 1.05, 16));
    let t = boundary_trace(&c, &WorkPool::serial()).unwrap();
    let pi: Vec<f64> = t.points.iter().filter(|p| p.sign == Sign::Plus).map(|p| p.f).collect();
    assert_eq!(pi.len(), 1, "{pi:?}");
    assert!((pi[0] - 0.97).abs() < 0.01, "{pi:?}");
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn runs_do_not_depend_on_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = base();
    c.model.cells = 8;
    c.scaling.sizes = vec![6, 8, 10];
    c.sweep.f = Some(Axis::new(0.4, 1.0, 4));
    c.disorder.strengths = vec![0.0, 0.1];
    c.disorder.realizations = 4;
    for command in [Command::Spectrum, Command::Singulars, Command::Disorder] {
        let a = tmp.path().join(format!("{}-serial", command.name()));
        let b = tmp.path().join(format!("{}-pool", command.name()));
        execute(command, &c, &WorkPool::serial(), &a).unwrap();
        execute(command, &c, &WorkPool::new(4).unwrap(), &b).unwrap();
        let (x, y) = (read_csvs(&a), read_csvs(&b));
        assert!(!x.is_empty());
        assert_eq!(x, y, "{}", command.name());
    }
}
