//! CSV and SVG renderings. Everything is built in memory as a string so a
//! single writer can emit it at the end of a run.

use std::fmt::Write as _;

use koradial_core::radial_solver::RadialSolution;
use koradial_core::sset_explorer::{BoundaryPoint, SweepResult, VerdictKind};
use koradial_core::transform::TransformTable;

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn solution_csv(sol: &RadialSolution) -> String {
    let mut out = String::from("r,u,v,du,dv\n");
    for i in 0..sol.len() {
        let _ = writeln!(out, "{},{},{},{},{}", num(sol.r[i]), num(sol.u[i]), num(sol.v[i]), num(sol.du[i]), num(sol.dv[i]));
    }
    out
}

pub fn sweep_csv(s: &SweepResult) -> String {
    let mut out = String::from("a,b,verdict,R_est,u_term,v_term\n");
    for c in &s.cells {
        let r_est = c.r_est().map(num).unwrap_or_default();
        let (u, v) = c.classification.terminal;
        let _ = writeln!(out, "{},{},{},{},{},{}", num(c.a), num(c.b), c.kind().label(), r_est, num(u), num(v));
    }
    out
}

pub fn transform_csv(t: &TransformTable) -> String {
    let mut out = String::from("t,value,derivative\n");
    for (x, y, d) in t.rows() {
        let _ = writeln!(out, "{},{},{}", num(x), num(y), num(d));
    }
    out
}

pub const ENTIRE_FILL: &str = "#2c7bb6";
pub const BLOWUP_FILL: &str = "#d7191c";
pub const INCONCLUSIVE_FILL: &str = "#bababa";
const EDGE_STROKE: &str = "#000000";
const BRACKET_STROKE: &str = "#ffbf00";

fn fill(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Entire => ENTIRE_FILL,
        VerdictKind::BlowUp => BLOWUP_FILL,
        VerdictKind::Inconclusive => INCONCLUSIVE_FILL,
    }
}

/// Heat map of the sweep: one rectangle per node, grid edges between
/// entire and blow-up neighbours, and optional traced brackets.
pub fn sweep_svg(s: &SweepResult, brackets: &[BoundaryPoint]) -> String {
    const CELL: f64 = 24.0;
    const MARGIN: f64 = 40.0;
    let (na, nb) = s.resolution;
    let (w, h) = (na as f64 * CELL, nb as f64 * CELL);
    let rect = s.rectangle;
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    // parameter space to pixels, b pointing up; node centers sit at cell centers
    let px = |a: f64| MARGIN + CELL * (0.5 + (na - 1) as f64 * (a - rect.a_lo) / span(rect.a_lo, rect.a_hi));
    let py = |b: f64| MARGIN + h - CELL * (0.5 + (nb - 1) as f64 * (b - rect.b_lo) / span(rect.b_lo, rect.b_hi));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{:.0}" height="{:.0}" fill="#ffffff"/>"##, w + 2.0 * MARGIN, h + 2.0 * MARGIN);
    for j in 0..nb {
        for i in 0..na {
            let c = s.cell(i, j);
            let x = MARGIN + i as f64 * CELL;
            let y = MARGIN + h - (j + 1) as f64 * CELL;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{CELL:.2}" height="{CELL:.2}" fill="{}"><title>a={} b={} {}</title></rect>"#,
                fill(c.kind()),
                c.a,
                c.b,
                c.kind().label()
            );
        }
    }
    let differs = |x: VerdictKind, y: VerdictKind| {
        matches!((x, y), (VerdictKind::Entire, VerdictKind::BlowUp) | (VerdictKind::BlowUp, VerdictKind::Entire))
    };
    for j in 0..nb {
        for i in 0..na {
            let k = s.cell(i, j).kind();
            if i + 1 < na && differs(k, s.cell(i + 1, j).kind()) {
                let x = MARGIN + (i + 1) as f64 * CELL;
                let (y0, y1) = (MARGIN + h - (j + 1) as f64 * CELL, MARGIN + h - j as f64 * CELL);
                let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="{EDGE_STROKE}" stroke-width="2"/>"#);
            }
            if j + 1 < nb && differs(k, s.cell(i, j + 1).kind()) {
                let y = MARGIN + h - (j + 1) as f64 * CELL;
                let (x0, x1) = (MARGIN + i as f64 * CELL, MARGIN + (i + 1) as f64 * CELL);
                let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="{EDGE_STROKE}" stroke-width="2"/>"#);
            }
        }
    }
    for bp in brackets {
        let (i, o) = (bp.inside.cell, bp.outside.cell);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{BRACKET_STROKE}" stroke-width="3"/>"#,
            px(i.a),
            py(i.b),
            px(o.a),
            py(o.b)
        );
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{BRACKET_STROKE}"/>"#,
            px(bp.midpoint.0),
            py(bp.midpoint.1)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN:.0}" y="{:.0}" font-family="monospace" font-size="12">a in [{}, {}], b in [{}, {}], r_max={}, cap={:e}</text>"#,
        MARGIN - 12.0,
        rect.a_lo,
        rect.a_hi,
        rect.b_lo,
        rect.b_hi,
        s.r_max,
        s.value_cap
    );
    out.push_str("</svg>\n");
    out
}
