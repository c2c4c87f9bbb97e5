use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use rosenau_cli::{report, verify_checks, RunConfig};
use rosenau_core::problems::{make_example, ExampleName, ExampleParams};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rosenau(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rosenau")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_cmd(cmd: &str, config: &Path, out: &Path) -> std::process::Output {
    rosenau(&[cmd, "--config", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()])
}

#[test]
fn shipped_configs_round_trip() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
            let again = RunConfig::parse(&cfg.to_toml().unwrap(), None).unwrap();
            assert_eq!(cfg, again, "{}", path.display());
            n += 1;
        }
    }
    assert!(n >= 5);
}

#[test]
fn defaults_fill_an_empty_config() {
    let cfg = RunConfig::parse("", None).unwrap();
    assert_eq!(cfg.problem.name, "example1");
    assert_eq!((cfg.discretization.u_degree, cfg.discretization.p_degree), (2, 1));
    assert_eq!(cfg.time.k, 0.01);
    assert_eq!(RunConfig::parse(&cfg.to_toml().unwrap(), None).unwrap(), cfg);
}

#[test]
fn unknown_keys_are_rejected() {
    for text in ["colour = 1", "[problem]\nname = \"example1\"\nbeta2 = 3.0", "[outputs]\nfield = \"a.vtk\""] {
        let err = RunConfig::parse(text, None).unwrap_err();
        assert!(format!("{err:#}").contains("unknown"), "{text}: {err:#}");
    }
}

#[test]
fn invalid_values_are_rejected() {
    for text in [
        "[problem]\nname = \"example9\"",
        "[problem]\nname = \"example1\"\nalpha = -1.0",
        "[time]\nk = 0.0",
        "[time]\nk = 0.3\nt_final = 1.0",
        "[discretization]\nu_degree = 3",
        "[study]\nthreads = 0",
        "[study]\nlevels = [4, 8]\ntime_steps = [0.1]",
        "[newton]\njacobian = \"sometimes\"",
    ] {
        assert!(RunConfig::parse(text, None).is_err(), "{text}");
    }
}

#[test]
fn relative_mesh_path_resolves_against_config() {
    let cfg = RunConfig::load(&configs_dir().join("example2_disk.toml")).unwrap();
    assert!(cfg.mesh.file.as_ref().unwrap().is_file());
}

#[test]
fn solve_writes_field_and_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "solve.toml",
        "[problem]\nname = \"example2_case1\"\nbeta = 1.0\n[mesh]\ncells = 4\n[time]\nk = 0.1\nt_final = 0.5\n",
    );
    let out = dir.path().join("out");
    let o = run_cmd("solve", &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("newton") && stdout.contains("wall time"), "{stdout}");
    let vtk = std::fs::read_to_string(out.join("solution.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version 3.0\n"));
    assert!(vtk.contains("DATASET UNSTRUCTURED_GRID"));
    assert!(vtk.contains("POINT_DATA 25\n"));
    assert!(vtk.contains("SCALARS u double 1") && vtk.contains("SCALARS p double 1"));
    let energy = std::fs::read_to_string(out.join("energy.csv")).unwrap();
    let lines: Vec<&str> = energy.lines().collect();
    assert_eq!(lines[0], "step,t,energy");
    assert_eq!(lines.len(), 1 + 6);
    assert!(lines[6].starts_with("5,0.5,"));
}

#[test]
fn missing_mesh_file_exits_2_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.toml", "[problem]\nname = \"example3\"\n[mesh]\nfile = \"nowhere/square.mesh\"\n");
    let o = run_cmd("solve", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere/square.mesh"));
}

#[test]
fn missing_or_malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_cmd("solve", &dir.path().join("absent.toml"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.toml"));
    let bad = write_config(dir.path(), "bad.toml", "[time]\nk = \"fast\"\n");
    assert_eq!(run_cmd("converge", &bad, dir.path()).status.code(), Some(2));
}

#[test]
fn mesh_dimension_must_match_problem() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = configs_dir().join("../meshes/disk.mesh");
    let cfg = write_config(dir.path(), "d.toml", &format!("[problem]\nname = \"example1\"\n[mesh]\nfile = {:?}\n", mesh));
    let o = run_cmd("solve", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1D problem"));
}

#[test]
fn converge_table_layout_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        "[problem]\nname = \"example1\"\n[study]\nlevels = [4, 8, 16, 32, 64]\n[output]\ntiming = false\ntable = \"t.csv\"\n",
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run_cmd("converge", &cfg, out);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let csv = std::fs::read(a.join("t.csv")).unwrap();
    assert_eq!(csv, std::fs::read(b.join("t.csv")).unwrap());
    let csv = String::from_utf8(csv).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0].join(","), "h,k,L2,L2_order,H1,H1_order,H2,H2_order,Linf,cpu_seconds");
    assert_eq!(rows.len(), 6);
    assert!(rows[1][3].is_empty() && rows[1][5].is_empty() && rows[1][7].is_empty());
    for row in &rows[2..] {
        assert!(row[3].parse::<f64>().is_ok() && row[5].parse::<f64>().is_ok() && row[7].parse::<f64>().is_ok());
        assert!(row[9].is_empty());
    }
    let md = std::fs::read_to_string(a.join("t.md")).unwrap();
    assert_eq!(md.lines().count(), 7);
}

#[test]
fn converge_reports_cpu_seconds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "e4.toml",
        "[problem]\nname = \"example4\"\n[time]\nk = 0.1\nt_final = 0.2\n[study]\nlevels = [2, 4, 8]\nthreads = 2\n",
    );
    let o = run_cmd("converge", &cfg, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert!(line.rsplit(',').next().unwrap().parse::<f64>().is_ok(), "{line}");
    }
}

#[test]
fn single_level_study_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "one.toml", "[problem]\nname = \"example1\"\n[study]\nlevels = [8]\n");
    let o = run_cmd("converge", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("need ≥ 2 levels"));
}

#[test]
fn study_levels_follow_the_axis() {
    let entry = make_example(ExampleName::Example1, ExampleParams::default()).unwrap();
    let joint = RunConfig::parse("[study]\naxis = \"joint\"\nlevels = [4, 8]", None).unwrap();
    let l = joint.study_levels(&entry).unwrap();
    assert_eq!((l[0].k, l[1].k), (0.25, 0.125));
    let time = RunConfig::parse("[mesh]\ncells = 8\n[study]\naxis = \"time\"\ntime_steps = [0.1, 0.05]", None).unwrap();
    let l = time.study_levels(&entry).unwrap();
    assert!(Arc::ptr_eq(&l[0].mesh, &l[1].mesh));
    assert_eq!((l[0].k, l[1].k, l[0].h), (0.1, 0.05, 0.125));
    let missing = RunConfig::parse("[study]\naxis = \"time\"", None).unwrap();
    assert!(missing.study_levels(&entry).is_err());
}

#[test]
fn thread_count_is_capped_by_environment() {
    let cfg = RunConfig::parse("[study]\nthreads = 4", None).unwrap();
    std::env::set_var("ROSENAU_THREADS", "2");
    assert_eq!(cfg.threads(), 2);
    std::env::set_var("ROSENAU_THREADS", "8");
    assert_eq!(cfg.threads(), 4);
    std::env::remove_var("ROSENAU_THREADS");
    assert_eq!(cfg.threads(), 4);
}

#[test]
fn verify_passes_on_a_clean_build() {
    let o = run_cmd("verify", &configs_dir().join("verify.toml"), &std::env::temp_dir());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS forcing example4"));
    assert!(stdout.contains("PASS energy decay 2D P2/P2"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn corrupted_forcing_fails_verification_by_name() {
    let cfg = RunConfig::parse("[verify]\nsamples = 50", None).unwrap();
    let mut entry = make_example(ExampleName::Example3, ExampleParams::default()).unwrap();
    let good = entry.problem.forcing.clone().unwrap();
    entry.problem.forcing = Some(Arc::new(move |x: &[f64], t: f64| good(x, t) * 1.001));
    let checks = verify_checks(&cfg, &[entry]);
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].name, "forcing example3");
    let mut out = Vec::new();
    assert_eq!(report(&checks, &mut out).unwrap(), 1);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("FAIL forcing example3"));
    assert!(text.contains("checks failed: forcing example3"));
}
