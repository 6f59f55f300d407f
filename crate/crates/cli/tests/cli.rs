use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plate(args: &[&str], cwd: &Path, env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_plate"));
    cmd.args(args).current_dir(cwd).env_remove("PLATE_OUT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("plate runs")
}

const SMALL: &str = "grid.N = 64\ngrid.L = 16\ntime.dt = 0.05\ntime.T = 2\n";

#[test]
fn unknown_key_exits_one_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.conf"), "grid.N = 64\nmodel.kappa = 2\n").unwrap();
    let out = plate(&["simulate", "--config", "bad.conf"], tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("model.kappa"), "{err}");
}

#[test]
fn hypothesis_violation_exits_one_before_any_output() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("h.conf"), format!("{SMALL}model.theorem = global_hs\n")).unwrap();
    let out = plate(&["simulate", "--config", "h.conf", "--out", "run"], tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n(lambda-2) > 2"));
    assert!(!tmp.path().join("run").exists());
}

#[test]
fn default_output_root_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("small.conf"), SMALL).unwrap();
    let root = tmp.path().join("root");
    let out = plate(&["simulate", "--config", "small.conf"], tmp.path(), &[("PLATE_OUT", &root)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(root.join("simulate-small").join("summary.json").exists());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS completed"));
}

#[test]
fn run_compared_with_itself_and_a_seed_change() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("r.conf"), format!("{SMALL}data.u0.kind = random\n")).unwrap();
    for (dir, seed) in [("a", "1"), ("b", "1"), ("c", "2")] {
        let out = plate(&["simulate", "--config", "r.conf", "--out", dir, "--seed", seed, "--jobs", "2"], tmp.path(), &[]);
        assert_eq!(out.status.code(), Some(0));
    }
    let same = plate(&["compare", "a", "b", "--tolerance", "0"], tmp.path(), &[]);
    assert_eq!(same.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&same.stdout).contains("PASS max deviation 0e0"));
    let differ = plate(&["compare", "a", "c"], tmp.path(), &[]);
    assert_eq!(differ.status.code(), Some(3));
    assert_eq!(fs::read(tmp.path().join("a/norms.csv")).unwrap(), fs::read(tmp.path().join("b/norms.csv")).unwrap());
}

#[test]
fn march_and_mol_runs_agree_through_compare() {
    let tmp = tempfile::tempdir().unwrap();
    let base = "grid.N = 128\ngrid.L = 20\ndata.u0.amplitude = 0.1\ntime.dt = 0.01\ntime.T = 1\n";
    fs::write(tmp.path().join("march.conf"), base).unwrap();
    fs::write(tmp.path().join("mol.conf"), format!("{base}solver = mol\n")).unwrap();
    for name in ["march", "mol"] {
        let out = plate(&["simulate", "--config", &format!("{name}.conf"), "--out", name], tmp.path(), &[]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = plate(&["compare", "march", "mol", "--tolerance", "1e-4"], tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn resolution_refinement_of_a_linear_run() {
    let tmp = tempfile::tempdir().unwrap();
    let base = "grid.L = 20\nmodel.delta = 0\ntime.dt = 0.05\ntime.T = 5\n";
    for n in ["256", "512"] {
        fs::write(tmp.path().join(format!("{n}.conf")), format!("{base}grid.N = {n}\n")).unwrap();
        let out = plate(&["simulate", "--config", &format!("{n}.conf"), "--out", n], tmp.path(), &[]);
        assert_eq!(out.status.code(), Some(0));
    }
    // profile.csv differs in length, so compare the norm histories only.
    for f in ["profile.csv", "fits.csv"] {
        fs::remove_file(tmp.path().join("256").join(f)).unwrap();
        fs::remove_file(tmp.path().join("512").join(f)).unwrap();
    }
    let report = plate_cli::compare_runs(&tmp.path().join("256"), &tmp.path().join("512"), 1e-6).unwrap();
    // linf and weighted_y hold grid maxima, which sample the sup at different
    // points on the two grids; the spectral norms converge.
    for c in &report.columns {
        if c.column != "linf" && c.column != "weighted_y" {
            assert!(c.deviation <= 1e-6, "{}:{} {}", c.file, c.column, c.deviation);
        }
    }
}

#[test]
fn compare_schema_mismatch_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    fs::create_dir_all(tmp.path().join("x")).unwrap();
    fs::create_dir_all(tmp.path().join("y")).unwrap();
    fs::write(tmp.path().join("x/n.csv"), "t,u\n0.0,1.0\n").unwrap();
    fs::write(tmp.path().join("y/n.csv"), "t,w\n0.0,1.0\n").unwrap();
    let out = plate(&["compare", "x", "y"], tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn criterion_failure_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    // A tolerance no float comparison can meet.
    fs::write(
        tmp.path().join("o.conf"),
        "grid.N = 64\ngrid.L = 16\ndata.u1.kind = gaussian\noracle.kind = mode_ode\noracle.times = 1\ncompare.tolerance = 0\n",
    )
    .unwrap();
    let out = plate(&["oracle-compare", "--config", "o.conf", "--out", "o"], tmp.path(), &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL multipliers_vs_mode_ode"));
}
