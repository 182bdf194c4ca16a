use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_koradial"))
}

fn power(theta: f64) -> Value {
    json!({"family": "power", "theta": theta})
}

fn exp1() -> Value {
    json!({"family": "exp_decay", "rate": 1.0})
}

fn base(f: Value, g: Value, p: Value, q: Value) -> Value {
    json!({"n": 3, "f": f, "g": g, "p": p, "q": q})
}

struct Run {
    code: i32,
    out: PathBuf,
    stderr: String,
}

impl Run {
    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&std::fs::read_to_string(self.out.join(name)).unwrap()).unwrap()
    }

    fn text(&self, name: &str) -> String {
        std::fs::read_to_string(self.out.join(name)).unwrap()
    }
}

fn run_raw(dir: &Path, cfg: &str, args: &[&str]) -> Run {
    let path = dir.join("config.json");
    std::fs::write(&path, cfg).unwrap();
    let out = dir.join("out");
    let o = bin()
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    Run {
        code: o.status.code().unwrap(),
        out,
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
    }
}

fn run(dir: &Path, cfg: &Value, args: &[&str]) -> Run {
    run_raw(dir, &cfg.to_string(), args)
}

fn status_of(report: &Value, name: &str) -> String {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
        .to_owned()
}

#[test]
fn check_passes_for_power_two_with_exp_weights() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), &base(power(2.0), power(2.0), exp1(), exp1()), &["check"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let h = r.json("hypotheses.json");
    assert_eq!(h["overall"], "pass");
    let ko = &h["checks"].as_array().unwrap().iter().find(|c| c["name"] == "F3").unwrap()["detail"]["ko_Lf"];
    assert!((ko["value"].as_f64().unwrap() - 2.0 / 3.0 * 5f64.sqrt()).abs() < 1e-6);
    assert!(r.text("phi.csv").starts_with("t,value,derivative\n"));
}

#[test]
fn check_flags_divergent_ko_integrals() {
    let d = tempfile::tempdir().unwrap();
    let r = run(d.path(), &base(power(1.0), power(1.0), exp1(), exp1()), &["check"]);
    assert_eq!(r.code, 3);
    let h = r.json("hypotheses.json");
    assert_eq!(status_of(&h, "F3"), "fail");
    assert_eq!(h["checks"][2]["detail"]["ko_Lf"]["status"], "divergent");
}

#[test]
fn config_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = base(power(2.0), power(2.0), exp1(), exp1());
    cfg["f"] = json!({"family": "power"});
    let r = run(d.path(), &cfg, &["check"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("theta"), "{}", r.stderr);

    assert_eq!(run_raw(d.path(), "{not json", &["check"]).code, 2);
    let mut cfg = base(power(2.0), power(2.0), exp1(), exp1());
    cfg["numerics"] = json!({"trace_tol": -1.0});
    assert_eq!(run(d.path(), &cfg, &["check"]).code, 2);
    // solve needs central values, sweep a rectangle
    let cfg = base(power(2.0), power(2.0), exp1(), exp1());
    assert_eq!(run(d.path(), &cfg, &["solve"]).code, 2);
    assert_eq!(run(d.path(), &cfg, &["sweep"]).code, 2);
    // no subcommand and no mode
    assert_eq!(run(d.path(), &cfg, &[]).code, 2);
    assert_eq!(bin().arg("check").output().unwrap().status.code(), Some(2));
    assert_eq!(bin().arg("bogus").output().unwrap().status.code(), Some(2));
}

#[test]
fn solve_zero_weights_gives_constant_columns() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = base(power(2.0), power(2.0), json!({"family": "zero"}), json!({"family": "zero"}));
    cfg["central"] = json!({"a": 1.5, "b": 0.25});
    let r = run(d.path(), &cfg, &["solve"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = r.text("solution.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,u,v,du,dv"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!((cols[1], cols[2], cols[3], cols[4]), (1.5, 0.25, 0.0, 0.0));
    }
    assert_eq!(r.json("classification.json")["classification"]["verdict"], "entire");
}

#[test]
fn solve_blow_up_exits_five_with_radius() {
    let d = tempfile::tempdir().unwrap();
    let one = json!({"family": "constant", "value": 1.0});
    let mut cfg = base(power(2.0), power(2.0), one.clone(), one);
    cfg["central"] = json!({"a": 5.0, "b": 5.0});
    let r = run(d.path(), &cfg, &["solve"]);
    assert_eq!(r.code, 5);
    let c = r.json("classification.json");
    let r_est = c["classification"]["R_est"].as_f64().unwrap();
    assert!(r_est > 1.0 && r_est < 3.0, "{r_est}");
    assert_eq!(c["blowup_consistency"], "pass");
    // divergent limits: no barrier
    assert_eq!(c["barrier"]["status"], "not_applicable");
}

#[test]
fn solve_small_exp_data_stays_below_the_barrier() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = base(power(2.0), power(2.0), exp1(), exp1());
    cfg["central"] = json!({"a": 0.1, "b": 0.1});
    let r = run(d.path(), &cfg, &["solve", "--r-max", "20"]);
    assert_eq!(r.code, 0);
    let c = r.json("classification.json");
    assert_eq!(c["barrier"]["status"], "pass");
    assert!(c["barrier"]["comparison"]["margin_u"].as_f64().unwrap() > 0.0);
    assert_eq!(c["r_max"], 20.0);
    assert_eq!(c["classification"]["r_term"], 20.0);
}

#[test]
fn sweep_on_zero_weights_is_one_colour() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = base(power(2.0), power(2.0), json!({"family": "zero"}), json!({"family": "zero"}));
    cfg["rectangle"] = json!({"a": [0.1, 10.0], "b": [0.1, 10.0]});
    let r = run(d.path(), &cfg, &["sweep", "--resolution", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = r.text("sweep.csv");
    assert_eq!(csv.lines().count(), 17);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("entire")));
    let svg = r.text("sweep.svg");
    assert_eq!(svg.matches("#2c7bb6").count(), 16);
    assert!(!svg.contains("#d7191c"));
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_threads() {
    let d = tempfile::tempdir().unwrap();
    let one = json!({"family": "constant", "value": 1.0});
    let mut cfg = base(power(2.0), power(2.0), one.clone(), one);
    cfg["rectangle"] = json!({"a": [0.001, 0.05], "b": [0.001, 0.05], "ray": {"origin": [0.001, 0.001], "end": [10.0, 10.0]}});
    cfg["numerics"] = json!({"resolution": 6});
    let x = run(d.path(), &cfg, &["sweep", "--threads", "1"]);
    let (csv, svg) = (x.text("sweep.csv"), x.text("sweep.svg"));
    let y = run(d.path(), &cfg, &["sweep", "--threads", "4"]);
    assert_eq!(csv, y.text("sweep.csv"));
    assert_eq!(svg, y.text("sweep.svg"));
    assert!(csv.contains(",entire,") && csv.contains(",blowup,"));
    // the traced bracket is overplotted
    assert!(svg.contains("<circle"));
}

#[test]
fn trace_brackets_the_constant_weight_edge() {
    let d = tempfile::tempdir().unwrap();
    let one = json!({"family": "constant", "value": 1.0});
    let mut cfg = base(power(2.0), power(2.0), one.clone(), one);
    cfg["rectangle"] = json!({"a": [0.001, 10.0], "b": [0.001, 10.0]});
    let r = run(d.path(), &cfg, &["trace"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let b = &r.json("boundary.json")["boundary"];
    assert!(b["gap"].as_f64().unwrap() <= 1e-3);
    assert_eq!(b["inside"]["verdict"], "entire");
    assert_eq!(b["outside"]["verdict"], "blowup");

    let mut cfg = base(power(2.0), power(2.0), json!({"family": "zero"}), json!({"family": "zero"}));
    cfg["rectangle"] = json!({"a": [0.1, 10.0], "b": [0.1, 10.0]});
    let r = run(d.path(), &cfg, &["trace"]);
    assert_eq!(r.code, 4);
    assert_eq!(r.json("boundary.json")["boundary"]["status"], "no_bracket");

    let mut cfg = base(power(2.0), power(2.0), exp1(), exp1());
    cfg["rectangle"] = json!({"a": [0.1, 10.0], "b": [0.1, 10.0], "ray": {"origin": [1.0, 1.0], "end": [1.0, 1.0]}});
    assert_eq!(run(d.path(), &cfg, &["trace"]).code, 2);
}

#[test]
fn verify_exp_decay_power_two_passes_every_probe() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = base(power(2.0), power(2.0), exp1(), exp1());
    cfg["mode"] = json!("verify");
    cfg["central"] = json!({"a": 0.1, "b": 0.1});
    cfg["rectangle"] = json!({"a": [0.1, 10.0], "b": [0.1, 10.0]});
    // mode comes from the file
    let r = run(d.path(), &cfg, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json("verify.json");
    for name in ["comparison", "forcing", "closedness", "largeness", "lower_bound", "composition_integrability"] {
        assert_eq!(status_of(&v, name), "pass", "{name}");
    }
}

#[test]
fn verify_attributes_forcing_failure_to_f2() {
    let d = tempfile::tempdir().unwrap();
    let cfg = json!({
        "n": 3, "f": {"family": "exp_minus_one"}, "g": power(1.0),
        "p": exp1(), "q": {"family": "zero"}, "central": {"a": 2.0, "b": 2.0},
    });
    let r = run(d.path(), &cfg, &["verify"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let v = r.json("verify.json");
    assert_eq!(status_of(&v, "forcing"), "fail");
    let forcing = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "forcing").unwrap();
    assert_eq!(forcing["detail"]["attribution"]["F2_f_fails"], true);
    assert_eq!(forcing["detail"]["attribution"]["F2_g_fails"], false);
}
