use std::path::Path;
use std::process::{Command, Output};

use cvmesh::error::Error;
use cvmesh::io::json::points_to_json;
use cvmesh::io::{import_mesh, PointSet};
use cvmesh::pipeline::{error_exit_code, run_pipeline, RunConfig, Status};
use cvmesh::solver::RadiusMode;

mod common;
use common::disk_lattice;

fn config(dir: &Path, dim: usize, n: usize, mode: RadiusMode) -> RunConfig {
    let mut cfg = RunConfig { dim, n, mode, out: dir.to_path_buf(), ..RunConfig::default() };
    cfg.domain = None;
    cfg
}

fn cvmesh(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvmesh")).args(args).current_dir(dir).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn too_few_points_fail_at_config() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_pipeline(&config(dir.path(), 2, 2, RadiusMode::RadicalCenter)).unwrap_err();
    assert!(matches!(&err, Error::Stage { stage, .. } if stage == "config"));
    assert_eq!(err.root(), &Error::TooFewPoints { needed: 3, got: 2 });
    assert_eq!(error_exit_code(&err), 4);
}

#[test]
fn empty_intervals_stop_the_run_at_bounds() {
    for mode in [RadiusMode::RadicalCenter, RadiusMode::ExactIntersection] {
        let dir = tempfile::tempdir().unwrap();
        let err = run_pipeline(&config(dir.path(), 2, 50, mode)).unwrap_err();
        assert!(matches!(&err, Error::Stage { stage, .. } if stage == "bounds"), "{err}");
        assert!(matches!(err.root(), Error::EmptyInterval { .. }));
        assert_eq!(error_exit_code(&err), 4);
        assert!(!dir.path().join("mesh.json").exists());
    }
}

#[test]
fn single_tetrahedron_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_pipeline(&config(dir.path(), 3, 4, RadiusMode::RadicalCenter)).unwrap();
    assert_eq!(out.summary.status, Status::Ok);
    assert_eq!(out.summary.exit_code, 0);
    let doc = import_mesh(&dir.path().join("mesh.json")).unwrap();
    assert_eq!(doc.mesh.n_points(), 4);
    assert_eq!(doc, out.document);
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn equal_radii_run_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), 2, 50, RadiusMode::RadicalCenter);
    cfg.equal_radii = true;
    cfg.render = true;
    let out = run_pipeline(&cfg).unwrap();
    let v = &out.summary.validation;
    assert_eq!(out.summary.status, Status::Ok, "{v:?}");
    assert_eq!(v.perpendicularity_violations + v.overlaps + v.face_mismatches + v.build_diagnostics, 0);
    assert!(dir.path().join("mesh.svg").exists());
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["points"], 50);
}

#[test]
fn exact_run_on_loaded_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    std::fs::write(&path, points_to_json(&PointSet::Planar(disk_lattice(2.0, 0.05, 1))).unwrap()).unwrap();
    let mut cfg = config(dir.path(), 2, 0, RadiusMode::ExactIntersection);
    cfg.points = Some(path);
    let out = run_pipeline(&cfg).unwrap();
    let s = &out.summary;
    assert_eq!(s.status == Status::NotConverged, s.solver.max_residual >= s.solver.residual_threshold);
    if s.status != Status::NotConverged {
        assert_eq!(s.exit_code, if s.status == Status::Ok { 0 } else { 2 });
    } else {
        assert_eq!(s.exit_code, 3);
    }
}

#[test]
fn cli_stages_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = cvmesh(&["gen", "--n", "30", "--seed", "7"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = cvmesh(&["tri", "--points", "points.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let tri: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("triangulation.json")).unwrap()).unwrap();
    assert_eq!(tri["kind"], "triangulation");
    let o = cvmesh(&["solve", "--points", "points.json", "--equal-radii"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("max residual"));
    let o = cvmesh(&["build", "--radii", "radii.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = cvmesh(&["validate", "--mesh", "mesh.json", "--write"], d);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(import_mesh(&d.join("mesh.json")).unwrap().validation.is_some());
    let o = cvmesh(&["export", "--mesh", "mesh.json", "--format", "vtk", "--out", "mesh.vtk"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = cvmesh(&["render", "--mesh", "mesh.json", "--layers", "cells,points"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = std::fs::read_to_string(d.join("mesh.svg")).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 30);
}

#[test]
fn cli_errors_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = cvmesh(&["run", "--n", "2"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("stage `config`"), "{}", stderr(&o));

    let o = cvmesh(&["run", "--n", "50", "--seed", "1", "--mode", "radical"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("stage `bounds`: empty radius interval at point"), "{}", stderr(&o));

    let o = cvmesh(&["run", "--dim", "3", "--n", "4", "--format", "xml"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("unsupported format `xml`"));

    let o = cvmesh(&["export", "--mesh", "missing.json", "--format", "vtk", "--out", "m.vtk"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("stage `export`"));

    let o = Command::new(env!("CARGO_BIN_EXE_cvmesh")).args(["gen"]).env("CVMESH_THREADS", "zero").current_dir(d).output().unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn cli_run_in_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvmesh(&["run", "--dim", "3", "--n", "4", "--format", "json,vtk", "--render", "--out", "."], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let vtk = std::fs::read_to_string(dir.path().join("mesh.vtk")).unwrap();
    assert!(vtk.contains("CELL_TYPES 4"));
    assert!(!dir.path().join("mesh.svg").exists());
}
