use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn simps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simps"))
        .args(args)
        .env_remove("SIMPS_OUTPUT_DIR")
        .output()
        .expect("spawn simps")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn small_scenario(dir: &Path) -> String {
    let p = dir.join("small.txt");
    fs::write(&p, "# small run\nn = 30\nt_max = 300\nspace.l = 60\n").unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn default_simulation_writes_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = simps(&[
        "simulate",
        "--trace",
        "--decimate",
        "100",
        "-o",
        out.to_str().unwrap(),
    ]);
    ok(&o);
    for f in [
        "scenario.resolved.txt",
        "population.csv",
        "contacts.csv",
        "durations.csv",
        "trace.csv",
        "transitions.csv",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let echo = String::from_utf8(read(&out.join("scenario.resolved.txt"))).unwrap();
    for line in [
        "n = 100",
        "graph.type = scale_free",
        "graph.d = 5",
        "lambda = 1",
        "r_soc = 3.5",
        "space.l = 200",
        "dt = 1",
        "t_max = 3600",
        "tau_r = 4",
        "contact.range = 6",
    ] {
        assert!(
            echo.lines().any(|l| l == line),
            "echo lacks `{line}`:\n{echo}"
        );
    }
    let trace = String::from_utf8(read(&out.join("trace.csv"))).unwrap();
    // header + 100 individuals at t = 0, 100, ..., 3600
    assert_eq!(trace.lines().count(), 1 + 100 * 37);
}

#[test]
fn trace_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let out = dir.path().join("run");
    ok(&simps(&["simulate", &sc, "-o", out.to_str().unwrap()]));
    assert!(out.join("contacts.csv").is_file());
    assert!(!out.join("trace.csv").exists());
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&simps(&[
            "simulate",
            &sc,
            "--seed",
            "42",
            "--trace",
            "-o",
            out.to_str().unwrap(),
        ]));
    }
    for f in [
        "contacts.csv",
        "durations.csv",
        "trace.csv",
        "transitions.csv",
        "population.csv",
        "scenario.resolved.txt",
    ] {
        assert_eq!(read(&a.join(f)), read(&b.join(f)), "{f} differs");
    }
    let c = dir.path().join("c");
    ok(&simps(&[
        "simulate",
        &sc,
        "--seed",
        "43",
        "--trace",
        "-o",
        c.to_str().unwrap(),
    ]));
    assert_ne!(read(&a.join("trace.csv")), read(&c.join("trace.csv")));
}

#[test]
fn resolved_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let a = dir.path().join("a");
    ok(&simps(&[
        "simulate",
        &sc,
        "--seed",
        "7",
        "--set",
        "lambda=2",
        "--trace",
        "-o",
        a.to_str().unwrap(),
    ]));
    let echo = a.join("scenario.resolved.txt");
    let b = dir.path().join("b");
    ok(&simps(&[
        "simulate",
        echo.to_str().unwrap(),
        "--trace",
        "-o",
        b.to_str().unwrap(),
    ]));
    for f in ["contacts.csv", "trace.csv", "scenario.resolved.txt"] {
        assert_eq!(read(&a.join(f)), read(&b.join(f)), "{f} differs");
    }
}

#[test]
fn invalid_scenarios_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = simps(&[
        "simulate",
        "--set",
        "tau_r=3",
        "--set",
        "dt=2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("tau_r not a multiple of dt"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n = 10\nwalking_speed = 2\n").unwrap();
    let o = simps(&[
        "simulate",
        bad.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("walking_speed"));

    let o = simps(&[
        "simulate",
        dir.path().join("missing.txt").to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.txt"));
}

#[test]
fn analyze_default_run_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    ok(&simps(&["simulate", "-o", run.to_str().unwrap()]));
    let an = dir.path().join("an");
    let o = simps(&[
        "analyze",
        run.join("durations.csv").to_str().unwrap(),
        "-o",
        an.to_str().unwrap(),
    ]);
    ok(&o);
    for kind in ["contact", "intercontact"] {
        let ccdf = String::from_utf8(read(&an.join(format!("ccdf_{kind}.csv")))).unwrap();
        assert!(ccdf.starts_with("x_s,p_gt\n"));
        let fit = String::from_utf8(read(&an.join(format!("fit_{kind}.csv")))).unwrap();
        let lines: Vec<&str> = fit.lines().collect();
        assert_eq!(lines[0], "model,alpha_or_k,x_min,x_max,r2");
        assert!(
            lines[1].starts_with("power_law,") && lines[2].starts_with("weibull,"),
            "{fit}"
        );
    }
}

#[test]
fn analyze_reports_missing_kind() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("durations.csv");
    let mut text = String::from("kind,duration_s\n");
    for k in 1..=200 {
        text.push_str(&format!("contact,{}\n", k as f64 * 1.5));
    }
    fs::write(&file, text).unwrap();
    let an = dir.path().join("an");
    let o = simps(&[
        "analyze",
        file.to_str().unwrap(),
        "-o",
        an.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("intercontact: no samples"));
    assert!(an.join("fit_contact.csv").is_file());
    assert!(!an.join("fit_intercontact.csv").exists());
}

#[test]
fn analyze_recovers_pareto_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pareto.csv");
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut text = String::from("kind,duration_s\n");
    for _ in 0..100_000 {
        let u = 1.0 - rng.random::<f64>();
        text.push_str(&format!(
            "contact,{}\nintercontact,{}\n",
            u.powf(-1.0 / 1.5),
            u.powf(-1.0 / 1.5)
        ));
    }
    fs::write(&file, text).unwrap();
    let an = dir.path().join("an");
    ok(&simps(&[
        "analyze",
        file.to_str().unwrap(),
        "--x-min",
        "1",
        "--x-max",
        "100",
        "-o",
        an.to_str().unwrap(),
    ]));
    let fit = String::from_utf8(read(&an.join("fit_contact.csv"))).unwrap();
    let alpha: f64 = fit
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.4..=1.6).contains(&alpha), "alpha {alpha}");
}

#[test]
fn sweep_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sweep.txt");
    fs::write(&sc, "n = 60\nt_max = 200\nspace.l = 80\n").unwrap();
    let sc = sc.to_str().unwrap().to_string();
    let out = dir.path().join("sw");
    let o = simps(&[
        "sweep",
        "node_degree",
        "--seeds",
        "2",
        "--scenario",
        &sc,
        "--jobs",
        "2",
        "-o",
        out.to_str().unwrap(),
    ]);
    ok(&o);
    let runs = String::from_utf8(read(&out.join("sweep_node_degree_runs.csv"))).unwrap();
    let labels: Vec<&str> = runs
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        labels,
        ["d=2", "d=2", "d=5", "d=5", "d=15", "d=15", "d=50", "d=50"]
    );
    let summary = String::from_utf8(read(&out.join("sweep_node_degree_summary.csv"))).unwrap();
    assert_eq!(summary.lines().count(), 5);

    let o = simps(&["sweep", "weather", "-o", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("weather"));
}

#[test]
fn graph_subcommand_emits_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&simps(&[
        "graph",
        "--type",
        "random",
        "--n",
        "50",
        "--d",
        "4",
        "--seed",
        "3",
        "-o",
        g.to_str().unwrap(),
    ]));
    let parsed = simps::graph::SocialGraph::load(&g).unwrap();
    assert_eq!(parsed.node_count(), 50);
    let o = simps(&["graph", "--n", "50", "--edge-weight", "constant:1"]);
    ok(&o);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("nodes 50"));

    // the generated file drives a simulation
    let sc = dir.path().join("sc.txt");
    fs::write(
        &sc,
        "n = 50\nt_max = 60\ngraph.type = file\ngraph.file = g.txt\n",
    )
    .unwrap();
    ok(&simps(&[
        "simulate",
        sc.to_str().unwrap(),
        "-o",
        dir.path().join("run").to_str().unwrap(),
    ]));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let sc = small_scenario(dir.path());
    let target = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_simps"))
        .args(["simulate", &sc])
        .env("SIMPS_OUTPUT_DIR", &target)
        .output()
        .unwrap();
    ok(&o);
    assert!(target.join("contacts.csv").is_file());
}
