//! JSON renderings of core results.

use koradial_core::barrier::{Bound, BoundStatus, ComparisonReport, ForcingConstants, ForcingReport};
use koradial_core::nonlinearity::{F1Outcome, F1Violation, F2Outcome, HypothesisReport, Implication, ImplicationReport};
use koradial_core::quad::Extended;
use koradial_core::radial_solver::{Classification, Diagnostics, Phase, Verdict};
use koradial_core::sset_explorer::{BoundaryPoint, BracketEnd, ClosednessReport, EdgeReport, ProbeStatus, TraceWarning, VerdictKind};
use serde_json::{json, Value};

/// Outcome of one check in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::NotApplicable => "not_applicable",
        }
    }

    pub fn from_flag(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn from_probe(p: ProbeStatus) -> Self {
        match p {
            ProbeStatus::Pass => Status::Pass,
            ProbeStatus::Fail => Status::Fail,
            ProbeStatus::Inconclusive => Status::Inconclusive,
            ProbeStatus::NotApplicable => Status::NotApplicable,
        }
    }

    /// Finite passes, divergent fails.
    pub fn finite(e: Extended) -> Self {
        match e {
            Extended::Finite(_) => Status::Pass,
            Extended::Divergent => Status::Fail,
            Extended::Inconclusive => Status::Inconclusive,
        }
    }
}

pub fn extended(e: Extended) -> Value {
    match e {
        Extended::Finite(v) => json!({"status": "finite", "value": v}),
        Extended::Divergent => json!({"status": "divergent"}),
        Extended::Inconclusive => json!({"status": "inconclusive"}),
    }
}

pub fn check(name: &str, status: Status, detail: Value) -> Value {
    json!({"name": name, "status": status.label(), "detail": detail})
}

fn f1(o: &F1Outcome) -> Value {
    match o.violation {
        None => json!(null),
        Some(F1Violation::NonzeroAtOrigin { value }) => json!({"kind": "nonzero_at_origin", "value": value}),
        Some(F1Violation::NotPositive { s, value }) => json!({"kind": "not_positive", "s": s, "value": value}),
        Some(F1Violation::Decreasing { from, to }) => json!({"kind": "decreasing", "from": [from.0, from.1], "to": [to.0, to.1]}),
        Some(F1Violation::NegativeDerivative { s, value }) => json!({"kind": "negative_derivative", "s": s, "value": value}),
    }
}

fn f2(o: &F2Outcome) -> Value {
    json!({
        "counterexample": o.worst.map(|w| json!({"s": w.s, "r": w.r, "lhs": w.lhs, "rhs": w.rhs, "overflow": w.overflow})),
        "max_ratio": o.max_ratio,
    })
}

/// Named checks derived from the nonlinearity report.
pub fn hypothesis_checks(h: &HypothesisReport) -> Vec<(String, Status, Value)> {
    let both = |x: Extended, y: Extended| match (Status::finite(x), Status::finite(y)) {
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
        _ => Status::Pass,
    };
    vec![
        (
            "F1".into(),
            Status::from_flag(h.f1_pass()),
            json!({"f": f1(&h.f1_f), "g": f1(&h.f1_g)}),
        ),
        (
            "F2".into(),
            Status::from_flag(h.f2_pass()),
            json!({"f": f2(&h.f2_f), "g": f2(&h.f2_g)}),
        ),
        (
            "F3".into(),
            both(h.ko_lf, h.ko_lg),
            json!({"ko_Lf": extended(h.ko_lf), "ko_Lg": extended(h.ko_lg)}),
        ),
        (
            "finite_reciprocal".into(),
            both(h.recip_lf, h.recip_lg),
            json!({"recip_Lf": extended(h.recip_lf), "recip_Lg": extended(h.recip_lg)}),
        ),
    ]
}

pub fn implication(r: &ImplicationReport) -> (Status, Value) {
    let (status, label) = match r.verdict {
        Implication::Holds => (Status::Pass, "holds"),
        Implication::Vacuous => (Status::NotApplicable, "vacuous"),
        Implication::Violated => (Status::Fail, "violated"),
        Implication::Inconclusive => (Status::Inconclusive, "inconclusive"),
    };
    (
        status,
        json!({
            "verdict": label,
            "inv_f": extended(r.inv_f),
            "inv_g": extended(r.inv_g),
            "inv_f_of_g": extended(r.inv_f_of_g),
            "inv_g_of_f": extended(r.inv_g_of_f),
        }),
    )
}

pub fn verdict(v: &Verdict) -> Value {
    match v {
        Verdict::Entire => json!({"verdict": "entire", "R_est": null}),
        Verdict::FiniteBlowUp { r_est } => json!({"verdict": "blowup", "R_est": r_est}),
        Verdict::Inconclusive => json!({"verdict": "inconclusive", "R_est": null}),
    }
}

pub fn diagnostics(d: &Diagnostics) -> Value {
    json!({
        "phase": match d.phase { Phase::Picard => "picard", Phase::Marching => "marching" },
        "iterations": d.iterations,
        "refinements": d.refinements,
        "residual": d.residual,
        "min_increment": d.min_increment,
        "rejected_steps": d.rejected_steps,
    })
}

pub fn classification(c: &Classification) -> Value {
    let mut v = verdict(&c.verdict);
    v["r_term"] = json!(c.r_term);
    v["terminal"] = json!({"u": c.terminal.0, "v": c.terminal.1});
    v["diagnostics"] = diagnostics(&c.diagnostics);
    v
}

pub fn constants(c: &ForcingConstants) -> Value {
    json!({"G_star": c.g_star, "F_star": c.f_star, "L_p": c.l_p, "L_q": c.l_q})
}

pub fn comparison(c: &ComparisonReport) -> Value {
    json!({
        "pass": c.pass,
        "margin_u": c.margin_u,
        "margin_v": c.margin_v,
        "worst_r": c.worst_r,
        "common_r": c.common_r,
    })
}

pub fn forcing(f: &ForcingReport) -> Value {
    json!({
        "pass": f.pass,
        "worst_ratio_u": f.worst_ratio_u,
        "worst_ratio_v": f.worst_ratio_v,
        "worst_r": f.worst_r,
        "attribution": f.attribution.map(|a| json!({"F2_f_fails": a.f2_f_fails, "F2_g_fails": a.f2_g_fails})),
    })
}

fn bracket_end(e: &BracketEnd) -> Value {
    let mut v = classification(&e.cell.classification);
    v["a"] = json!(e.cell.a);
    v["b"] = json!(e.cell.b);
    v["t"] = json!(e.t);
    v
}

pub fn boundary(bp: &BoundaryPoint) -> Value {
    json!({
        "status": "bracketed",
        "ray": {"origin": [bp.ray.origin.0, bp.ray.origin.1], "end": [bp.ray.end.0, bp.ray.end.1]},
        "inside": bracket_end(&bp.inside),
        "outside": bracket_end(&bp.outside),
        "gap": bp.gap,
        "midpoint": [bp.midpoint.0, bp.midpoint.1],
        "bisections": bp.bisections,
        "r_max": bp.r_max,
        "value_cap": bp.value_cap,
        "warnings": bp.warnings.iter().map(|w| match w {
            TraceWarning::InconclusiveMidpoint { a, b } => json!({"kind": "inconclusive_midpoint", "a": a, "b": b}),
        }).collect::<Vec<_>>(),
    })
}

pub fn no_bracket(origin: VerdictKind, end: VerdictKind) -> Value {
    json!({"status": "no_bracket", "origin_verdict": origin.label(), "end_verdict": end.label()})
}

pub fn closedness(c: &ClosednessReport) -> Value {
    json!({
        "status": Status::from_probe(c.status).label(),
        "limit": {"a": c.limit.a, "b": c.limit.b, "verdict": verdict(&c.limit.verdict), "terminal": [c.limit.terminal.0, c.limit.terminal.1]},
        "members": c.members.iter().map(|m| json!({
            "a": m.a, "b": m.b, "verdict": verdict(&m.verdict)["verdict"],
            "terminal": [m.terminal.0, m.terminal.1], "sup_gap": m.sup_gap,
        })).collect::<Vec<_>>(),
        "r_max": c.r_max,
        "value_cap": c.value_cap,
    })
}

fn bound(b: &Bound) -> Value {
    let status = match b.status {
        BoundStatus::Value => "value",
        BoundStatus::Infinite => "infinite",
        BoundStatus::OutOfRange => "out_of_range",
        BoundStatus::Vacuous => "vacuous",
    };
    json!({"value": b.value, "status": status, "argument": b.argument})
}

pub fn edge(e: &EdgeReport) -> Value {
    json!({
        "status": Status::from_probe(e.status).label(),
        "point": [e.point.0, e.point.1],
        "rungs": e.rungs.iter().map(|r| json!({
            "r_max": r.r_max, "verdict": verdict(&r.verdict)["verdict"], "terminal": [r.terminal.0, r.terminal.1],
        })).collect::<Vec<_>>(),
        "growth_pass": e.growth_pass,
        "R": e.big_r,
        "constants": e.constants.as_ref().map(constants),
        "truncated_constants": e.truncated,
        "bounds": e.bounds.iter().map(|b| json!({
            "r": b.r, "u": b.solution.0, "v": b.solution.1,
            "bound_u": bound(&b.bound.u), "bound_v": bound(&b.bound.v), "pass": b.pass,
        })).collect::<Vec<_>>(),
        "notes": e.notes,
    })
}
