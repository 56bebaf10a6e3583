use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evrptw_cli::roster;
use evrptw_core::{parse_instance, parse_solution};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evrptw"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn five(name: &str) -> String {
    roster::find(name).unwrap().path().display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn solve_into(dir: &Path, instance: &str, seed: &str) -> PathBuf {
    let out = dir.display().to_string();
    let o = run(&[
        "solve",
        "--instance",
        instance,
        "--seed",
        seed,
        "--starts",
        "4",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    dir.to_path_buf()
}

#[test]
fn missing_instance_is_an_input_error() {
    let o = run(&["solve", "--instance", "does/not/exist.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("instance not found"));
}

#[test]
fn solve_is_deterministic_and_artifacts_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = five("C101-5");
    let a = solve_into(&tmp.path().join("a"), &inst, "1");
    let b = solve_into(&tmp.path().join("b"), &inst, "1");
    for file in [
        "c101C5.sol",
        "c101C5.trace.csv",
        "c101C5.instance",
        "c101C5.routes.svg",
        "c101C5.battery.svg",
    ] {
        let x = std::fs::read(a.join(file)).unwrap();
        let y = std::fs::read(b.join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
    let text = std::fs::read_to_string(a.join("c101C5.instance")).unwrap();
    let parsed = parse_instance(&text).unwrap();
    assert_eq!(parse_instance(&parsed.to_text()).unwrap(), parsed);
    assert_eq!(parsed.vehicles(), 2);
    let sol_text = std::fs::read_to_string(a.join("c101C5.sol")).unwrap();
    let (sol, summary) = parse_solution(&sol_text).unwrap();
    assert_eq!(sol.to_text(summary.as_ref()), sol_text);
    let trace = std::fs::read_to_string(a.join("c101C5.trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,"));
}

#[test]
fn verify_accepts_oracle_output_and_reports_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().display().to_string();
    let inst = five("R104-5");
    let o = run(&["oracle", "--instance", &inst, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sol = tmp.path().join("r104C5.oracle.sol");
    let o = run(&[
        "verify",
        "--instance",
        &inst,
        "--solution",
        &sol.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let optimum: f64 = stdout(&run(&["oracle", "--instance", &inst, "--out", &out]))
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let report = stdout(&o);
    let verified: f64 = report
        .strip_prefix("feasible objective ")
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((verified - optimum).abs() <= 1e-6 * optimum.abs().max(1.0));

    // Drop the first customer of route 0.
    let text = std::fs::read_to_string(&sol).unwrap();
    let (mut parsed, _) = parse_solution(&text).unwrap();
    let route = &mut parsed.routes[0];
    let pos = route
        .nodes
        .iter()
        .position(|&id| (1..=5).contains(&id))
        .unwrap();
    route.nodes.remove(pos);
    parsed.plans[0].visits.remove(pos);
    let dropped = tmp.path().join("dropped.sol");
    std::fs::write(&dropped, parsed.to_text(None)).unwrap();
    let o = run(&[
        "verify",
        "--instance",
        &inst,
        "--solution",
        &dropped.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violated: coverage"), "{}", stdout(&o));

    // A charge action at a customer.
    let (mut parsed, _) = parse_solution(&text).unwrap();
    let pos = parsed.routes[0]
        .nodes
        .iter()
        .position(|&id| (1..=5).contains(&id))
        .unwrap();
    parsed.plans[0].visits[pos].push((10, evrptw_core::Action::Charge));
    let bad = tmp.path().join("bad.sol");
    std::fs::write(&bad, parsed.to_text(None)).unwrap();
    let o = run(&[
        "verify",
        "--instance",
        &inst,
        "--solution",
        &bad.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violated: structure"), "{}", stdout(&o));
}

#[test]
fn guard_exceeded_exits_with_three() {
    let path = roster::find("C103-15")
        .unwrap()
        .path()
        .display()
        .to_string();
    assert_eq!(run(&["oracle", "--instance", &path]).status.code(), Some(3));
    assert_eq!(run(&["bound", "--instance", &path]).status.code(), Some(3));
}

#[test]
fn bench_marks_large_instances_as_skipped() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("set");
    std::fs::create_dir(&dir).unwrap();
    for name in ["C101-5", "RC208-5", "C103-15"] {
        let e = roster::find(name).unwrap();
        std::fs::copy(e.path(), dir.join(e.file.rsplit('/').next().unwrap())).unwrap();
    }
    let out = tmp.path().join("out").display().to_string();
    let o = bin()
        .args([
            "bench",
            "--dir",
            &dir.display().to_string(),
            "--out",
            &out,
            "--starts",
            "2",
        ])
        .env("EVRPTW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let large = rows.iter().find(|r| r.starts_with("c103C15,")).unwrap();
    assert_eq!(large.matches("skipped-by-guard").count(), 2);
    let small = rows.iter().find(|r| r.starts_with("c101C5,")).unwrap();
    let cells: Vec<&str> = small.split(',').collect();
    let (ub, lb): (f64, f64) = (cells[3].parse().unwrap(), cells[6].parse().unwrap());
    let gap = format!("{:.2}%", 100.0 * (ub - lb) / lb);
    assert_eq!(cells[10], gap);
    assert_eq!(
        std::fs::read_to_string(tmp.path().join("out/bench.csv")).unwrap(),
        csv
    );
}

#[test]
fn scheme_comparison() {
    let inst = five("RC105-5");
    let o = run(&[
        "schemes",
        "--instance",
        &inst,
        "--schemes",
        "A-summer,B-summer,D",
        "--exact",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    let f: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(f[1] <= f[0] + 1e-6 && f[0] <= f[2] + 1e-6, "{f:?}");
    assert_eq!(rows[2][5], "0");

    let o = run(&["schemes", "--instance", &inst, "--schemes", ""]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn regen_writes_parseable_instances() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().display().to_string();
    let src = roster::find("C101-10")
        .unwrap()
        .path()
        .display()
        .to_string();
    let o = run(&[
        "regen",
        "--instance",
        &src,
        "--out",
        &out,
        "--scheme",
        "B-winter",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(tmp.path().join("c101C10.instance")).unwrap();
    let inst = parse_instance(&text).unwrap();
    assert_eq!(inst.n_customers(), 10);
    assert_eq!(inst.vehicles(), 3);
    assert_eq!(
        inst.prices(),
        &evrptw_core::PriceSchedule::scheme(evrptw_core::SchemeId::BWinter)
    );
}
