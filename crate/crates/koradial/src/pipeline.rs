//! The five subcommands. Each returns its artifacts in memory plus an exit
//! status; [`write_outcome`] is the only place that touches the file system.

use std::path::Path;

use koradial_core::barrier::{self, BarrierDef, BarrierError, ForcingConstants, STRICT_TOL};
use koradial_core::nonlinearity;
use koradial_core::radial_solver::{self, blowup_consistency, Consistency, ProblemDef, SolverConfig, Verdict};
use koradial_core::sset_explorer::{self, BoundaryPoint, ExplorerError, SweepCell};
use koradial_core::transform::{self, TransformKind};
use koradial_core::weights;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::artifacts;
use crate::config::{ConfigError, Mode, RunConfig};
use crate::report::{self, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Config = 2,
    Hypothesis = 3,
    Inconclusive = 4,
    BlowUp = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit: Exit,
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
}

fn json_file(name: &str, v: &Value) -> (String, String) {
    let mut text = serde_json::to_string_pretty(v).expect("values serialize");
    text.push('\n');
    (name.to_owned(), text)
}

/// Fail beats inconclusive beats pass; not-applicable is neutral.
fn aggregate(statuses: impl IntoIterator<Item = Status>) -> Exit {
    let all: Vec<Status> = statuses.into_iter().collect();
    if all.contains(&Status::Fail) {
        Exit::Hypothesis
    } else if all.contains(&Status::Inconclusive) {
        Exit::Inconclusive
    } else {
        Exit::Success
    }
}

fn header(cfg: &RunConfig, mode: Mode) -> Value {
    json!({
        "mode": mode.name(),
        "n": cfg.n,
        "f": cfg.f,
        "g": cfg.g,
        "p": cfg.p,
        "q": cfg.q,
        "central": cfg.central,
        "numerics": cfg.numerics,
    })
}

fn with_checks(mut head: Value, checks: &[Value], status: Exit) -> Value {
    head["checks"] = Value::Array(checks.to_vec());
    head["overall"] = json!(match status {
        Exit::Success => "pass",
        Exit::Hypothesis => "fail",
        _ => "inconclusive",
    });
    head
}

fn config_err(field: &'static str, e: impl ToString) -> ConfigError {
    ConfigError::Invalid { field, reason: e.to_string() }
}

pub fn run(cfg: &RunConfig, mode: Mode) -> Result<Outcome, ConfigError> {
    match mode {
        Mode::Check => cmd_check(cfg),
        Mode::Solve => cmd_solve(cfg),
        Mode::Sweep => cmd_sweep(cfg),
        Mode::Trace => cmd_trace(cfg),
        Mode::Verify => cmd_verify(cfg),
    }
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let prob = cfg.problem()?;
    let quad = cfg.quad();
    let mut checks = Vec::new();
    let mut statuses = Vec::new();
    let mut push = |name: &str, status: Status, detail: Value| {
        statuses.push(status);
        checks.push(report::check(name, status, detail));
    };
    let mut files = Vec::new();
    match nonlinearity::hypothesis_report(&prob.f, &prob.g, &quad) {
        Ok(h) => {
            for (name, status, detail) in report::hypothesis_checks(&h) {
                push(&name, status, detail);
            }
            if h.recip_lf.is_finite() && h.recip_lg.is_finite() {
                for (kind, name) in [(TransformKind::Phi, "phi.csv"), (TransformKind::Psi, "psi.csv")] {
                    match transform::build_default(&prob.f, &prob.g, kind, &quad) {
                        Ok(t) => {
                            let convex = t.second_differences().iter().all(|&d| d >= 0.0);
                            push(&format!("{}_convex", &name[..3]), Status::from_flag(convex), json!(null));
                            files.push((name.to_owned(), artifacts::transform_csv(&t)));
                        }
                        Err(e) => push(&format!("{}_table", &name[..3]), Status::Inconclusive, json!(e.to_string())),
                    }
                }
            }
        }
        Err(e) => push("nonlinearity", Status::Inconclusive, json!(e.to_string())),
    }
    let limit = |w| weights::limit_constant(w, prob.dimension, &quad);
    match (limit(&prob.p), limit(&prob.q)) {
        (Ok(lp), Ok(lq)) => {
            let s = match (Status::finite(lp), Status::finite(lq)) {
                (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
                _ => Status::Pass,
            };
            push("PQ_limits", s, json!({"L_p": report::extended(lp), "L_q": report::extended(lq)}));
        }
        (Err(e), _) | (_, Err(e)) => push("PQ_limits", Status::Inconclusive, json!(e.to_string())),
    }
    match weights::min_support_check(&prob.p, &prob.q, weights::DEFAULT_PROBE_MAX) {
        Ok(s) => push(
            "PQ_support",
            Status::from_flag(s.pass),
            json!({"vanishes_beyond": s.vanishes_beyond, "probe_max": weights::DEFAULT_PROBE_MAX}),
        ),
        Err(e) => push("PQ_support", Status::Inconclusive, json!(e.to_string())),
    }
    let (s, detail) = report::implication(&nonlinearity::composition_integrability_check(&prob.f, &prob.g, &quad));
    push("composition_integrability", s, detail);
    let exit = aggregate(statuses);
    files.insert(0, json_file("hypotheses.json", &with_checks(header(cfg, Mode::Check), &checks, exit)));
    Ok(Outcome { exit, files })
}

fn barrier_comparison(prob: &ProblemDef, cfg: &RunConfig, sol: &radial_solver::RadialSolution, scfg: &SolverConfig) -> Value {
    let offset = cfg.numerics.barrier_offset;
    let run = || -> Result<Value, BarrierError> {
        let bdef = BarrierDef::new(prob.clone(), prob.a + offset, prob.b + offset, &cfg.quad())?;
        let (z1, z2) = barrier::solve_barrier(&bdef, cfg.numerics.r_max, scfg)?;
        let cmp = barrier::verify_comparison(sol, (&z1, &z2), STRICT_TOL)?;
        let common = cmp.common_r;
        let z_at = |z: &radial_solver::RadialSolution| z.eval_at(common).map(|y| y.0);
        let u_at = sol.eval_at(common);
        Ok(json!({
            "status": Status::from_flag(cmp.pass).label(),
            "c": bdef.c,
            "d": bdef.d,
            "constants": report::constants(&bdef.constants),
            "comparison": report::comparison(&cmp),
            "at_common_r": {"u": u_at.map(|y| y.0), "v": u_at.map(|y| y.1), "z1": z_at(&z1), "z2": z_at(&z2)},
        }))
    };
    run().unwrap_or_else(|e| json!({"status": "not_applicable", "reason": e.to_string()}))
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    cfg.require_central()?;
    let prob = cfg.problem()?;
    let scfg = cfg.solver();
    let sol = radial_solver::picard_solve(&prob, cfg.numerics.r_max, &scfg).map_err(|e| config_err("central", e))?;
    let class = radial_solver::classification_of(&sol);
    let mut out = header(cfg, Mode::Solve);
    out["classification"] = report::classification(&class);
    out["r_max"] = json!(cfg.numerics.r_max);
    out["value_cap"] = json!(scfg.value_cap);
    out["blowup_consistency"] = json!(match blowup_consistency(&sol) {
        Consistency::Pass => "pass",
        Consistency::Fail => "fail",
        Consistency::NotApplicable => "not_applicable",
    });
    out["barrier"] = barrier_comparison(&prob, cfg, &sol, &scfg);
    let exit = match class.verdict {
        Verdict::Entire => Exit::Success,
        Verdict::FiniteBlowUp { .. } => Exit::BlowUp,
        Verdict::Inconclusive => Exit::Inconclusive,
    };
    Ok(Outcome {
        exit,
        files: vec![
            ("solution.csv".into(), artifacts::solution_csv(&sol)),
            json_file("classification.json", &out),
        ],
    })
}

fn explorer_err(e: ExplorerError) -> ConfigError {
    config_err("explorer", e)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let rect = cfg.rectangle()?;
    let template = cfg.problem()?;
    let k = cfg.numerics.resolution;
    let scfg = cfg.solver();
    let s = sset_explorer::sweep_with(&template, &rect, (k, k), cfg.numerics.r_max, scfg.value_cap, &scfg, |nodes, one| {
        nodes.par_iter().map(|&x| one(x)).collect::<Vec<SweepCell>>()
    })
    .map_err(explorer_err)?;
    let violations = sset_explorer::monotonicity_violations(&s);
    // an explicit ray is traced and overplotted
    let brackets: Vec<BoundaryPoint> = match cfg.rectangle.as_ref().and_then(|r| r.ray) {
        Some(_) => trace(cfg, &template, cfg.numerics.r_max)?.into_iter().collect(),
        None => Vec::new(),
    };
    let mut summary = header(cfg, Mode::Sweep);
    summary["counts"] = json!({
        "entire": s.count(sset_explorer::VerdictKind::Entire),
        "blowup": s.count(sset_explorer::VerdictKind::BlowUp),
        "inconclusive": s.count(sset_explorer::VerdictKind::Inconclusive),
    });
    summary["monotonicity_violations"] = json!(violations
        .iter()
        .map(|&(lo, hi)| json!({"lower": [s.cells[lo].a, s.cells[lo].b], "upper": [s.cells[hi].a, s.cells[hi].b]}))
        .collect::<Vec<_>>());
    summary["brackets"] = json!(brackets.iter().map(report::boundary).collect::<Vec<_>>());
    Ok(Outcome {
        exit: Exit::Success,
        files: vec![
            ("sweep.csv".into(), artifacts::sweep_csv(&s)),
            ("sweep.svg".into(), artifacts::sweep_svg(&s, &brackets)),
            json_file("sweep.json", &summary),
        ],
    })
}

fn trace(cfg: &RunConfig, template: &ProblemDef, r_max: f64) -> Result<Result<BoundaryPoint, Value>, ConfigError> {
    let ray = cfg.ray()?;
    let scfg = cfg.solver();
    match sset_explorer::trace_boundary(template, &ray, cfg.numerics.trace_tol, r_max, scfg.value_cap, &scfg) {
        Ok(bp) => Ok(Ok(bp)),
        Err(ExplorerError::NoBracket { origin, end }) => Ok(Err(report::no_bracket(origin, end))),
        Err(e) => Err(explorer_err(e)),
    }
}

pub fn cmd_trace(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let template = cfg.problem()?;
    let mut out = header(cfg, Mode::Trace);
    let exit = match trace(cfg, &template, cfg.numerics.r_max)? {
        Ok(bp) => {
            out["boundary"] = report::boundary(&bp);
            Exit::Success
        }
        Err(v) => {
            out["boundary"] = v;
            Exit::Inconclusive
        }
    };
    Ok(Outcome { exit, files: vec![json_file("boundary.json", &out)] })
}

fn na(reason: impl ToString) -> (Status, Value) {
    (Status::NotApplicable, json!({"reason": reason.to_string()}))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, ConfigError> {
    let template = cfg.problem()?;
    let scfg = cfg.solver();
    let quad = cfg.quad();
    let nu = &cfg.numerics;
    let mut probes: Vec<(&str, (Status, Value))> = Vec::new();

    // comparison and forcing at the configured central values
    match cfg.central {
        None => {
            probes.push(("comparison", na("no central values")));
            probes.push(("forcing", na("no central values")));
        }
        Some(_) => {
            let sol = radial_solver::picard_solve(&template, nu.r_max, &scfg).map_err(|e| config_err("central", e))?;
            let b = barrier_comparison(&template, cfg, &sol, &scfg);
            let s = match b["status"].as_str() {
                Some("pass") => Status::Pass,
                Some("fail") => Status::Fail,
                _ => Status::NotApplicable,
            };
            probes.push(("comparison", (s, b)));
            match ForcingConstants::new(&template, &quad) {
                Ok(c) => {
                    let f = barrier::forcing_check(&sol, &template.f, &template.g, &c, STRICT_TOL);
                    probes.push(("forcing", (Status::from_flag(f.pass), report::forcing(&f))));
                }
                Err(e) => probes.push(("forcing", na(e))),
            }
        }
    }

    // edge probes along the ray, traced at the top of the ladder
    let top = nu.ladder.iter().copied().fold(nu.r_max, f64::max);
    let traced = if cfg.rectangle.is_some() { Some(trace(cfg, &template, top)?) } else { None };
    match traced {
        None => {
            for name in ["closedness", "largeness", "lower_bound"] {
                probes.push((name, na("no rectangle or ray")));
            }
        }
        Some(Err(v)) => {
            for name in ["closedness", "largeness", "lower_bound"] {
                probes.push((name, (Status::NotApplicable, v.clone())));
            }
        }
        Some(Ok(bp)) => {
            let start = if bp.inside.t < bp.outside.t { bp.ray.origin } else { bp.ray.end };
            let limit = (bp.inside.cell.a, bp.inside.cell.b);
            let seq = sset_explorer::geometric_approach(start, limit, 0.5, 8);
            let closed = sset_explorer::closedness_probe(&template, &seq, limit, top, scfg.value_cap, &scfg);
            probes.push((
                "closedness",
                match closed {
                    Ok(c) => (Status::from_probe(c.status), report::closedness(&c)),
                    Err(e) => (Status::Inconclusive, json!({"reason": e.to_string()})),
                },
            ));
            match sset_explorer::edge_largeness_probe(&template, &bp, &nu.ladder, &nu.radii, &scfg) {
                Ok(e) => {
                    let growth = if e.status == sset_explorer::ProbeStatus::NotApplicable {
                        Status::NotApplicable
                    } else if e.rungs.iter().all(|r| r.verdict == Verdict::Entire) {
                        Status::from_flag(e.growth_pass)
                    } else {
                        Status::Inconclusive
                    };
                    let checked: Vec<bool> = e.bounds.iter().filter_map(|b| b.pass).collect();
                    let bounds = if checked.is_empty() {
                        Status::NotApplicable
                    } else {
                        Status::from_flag(checked.iter().all(|&x| x))
                    };
                    let detail = report::edge(&e);
                    probes.push(("largeness", (growth, detail.clone())));
                    probes.push(("lower_bound", (bounds, detail)));
                }
                Err(e) => {
                    probes.push(("largeness", (Status::Inconclusive, json!({"reason": e.to_string()}))));
                    probes.push(("lower_bound", (Status::Inconclusive, json!({"reason": e.to_string()}))));
                }
            }
            probes.push(("boundary", (Status::Pass, report::boundary(&bp))));
        }
    }

    probes.push((
        "composition_integrability",
        report::implication(&nonlinearity::composition_integrability_check(&template.f, &template.g, &quad)),
    ));

    let exit = aggregate(probes.iter().map(|(_, (s, _))| *s));
    let checks: Vec<Value> = probes.iter().map(|(name, (s, d))| report::check(name, *s, d.clone())).collect();
    let mut out = with_checks(header(cfg, Mode::Verify), &checks, exit);
    out["trace_r_max"] = json!(top);
    Ok(Outcome { exit, files: vec![json_file("verify.json", &out)] })
}

/// Write every artifact of `outcome` into `dir`.
pub fn write_outcome(dir: &Path, outcome: &Outcome) -> std::io::Result<()> {
    for (name, text) in &outcome.files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}
