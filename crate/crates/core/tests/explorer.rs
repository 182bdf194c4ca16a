mod common;

use common::rk4;
use koradial_core::nonlinearity::NonlinearitySpec;
use koradial_core::radial_solver::*;
use koradial_core::sset_explorer::*;
use koradial_core::weights::WeightSpec;
use proptest::prelude::*;

fn pw(t: f64) -> NonlinearitySpec {
    NonlinearitySpec::power(t).unwrap()
}

fn template(w: WeightSpec) -> ProblemDef {
    ProblemDef::new(3, pw(2.0), pw(2.0), w.clone(), w, 0.0, 0.0).unwrap()
}

fn constant() -> ProblemDef {
    template(WeightSpec::constant(1.0).unwrap())
}

fn exp_decay() -> ProblemDef {
    template(WeightSpec::exp_decay(1.0).unwrap())
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn oracle_blows_up(t: &ProblemDef, a: f64, b: f64, r_max: f64) -> bool {
    rk4(&t.with_central(a, b).unwrap(), r_max, 1e-2, 1e8).blowup.is_some()
}

fn corners_match_oracle(s: &SweepResult, t: &ProblemDef) {
    let (na, nb) = s.resolution;
    for (i, j) in [(0, 0), (na - 1, 0), (0, nb - 1), (na - 1, nb - 1)] {
        let c = s.cell(i, j);
        let expect = if oracle_blows_up(t, c.a, c.b, s.r_max) {
            VerdictKind::BlowUp
        } else {
            VerdictKind::Entire
        };
        assert_eq!(c.kind(), expect, "corner ({}, {})", c.a, c.b);
    }
}

/// Diagonal point where the oracle's blow-up radius crosses `r_max`.
fn oracle_diagonal_edge(t: &ProblemDef, mut lo: f64, mut hi: f64, r_max: f64) -> f64 {
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if oracle_blows_up(t, mid, mid, r_max) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn diagonal() -> Ray {
    Ray::new((0.001, 0.001), (10.0, 10.0))
}

#[test]
fn zero_weights_sweep_is_all_entire() {
    let t = template(WeightSpec::zero());
    let s = sweep(&t, &Rectangle::square(0.1, 10.0).unwrap(), (4, 4), 50.0, 1e8, &cfg()).unwrap();
    assert_eq!(s.count(VerdictKind::Entire), 16);
}

#[test]
fn constant_weights_on_the_large_square_all_blow_up() {
    let t = constant();
    let s = sweep(&t, &Rectangle::square(0.1, 10.0).unwrap(), (16, 16), 50.0, 1e8, &cfg()).unwrap();
    corners_match_oracle(&s, &t);
    assert_eq!(s.count(VerdictKind::BlowUp), 256);
}

#[test]
fn constant_weights_small_square_is_mixed_and_monotone() {
    let t = constant();
    let s = sweep(&t, &Rectangle::square(0.001, 0.05).unwrap(), (8, 8), 50.0, 1e8, &cfg()).unwrap();
    corners_match_oracle(&s, &t);
    assert!(s.count(VerdictKind::Entire) > 0 && s.count(VerdictKind::BlowUp) > 0);
    assert_eq!(s.count(VerdictKind::Inconclusive), 0);
    assert!(monotonicity_violations(&s).is_empty());
}

#[test]
fn exp_decay_corners_follow_the_oracle() {
    let t = exp_decay();
    let s = sweep(&t, &Rectangle::square(0.1, 10.0).unwrap(), (4, 4), 100.0, 1e8, &cfg()).unwrap();
    corners_match_oracle(&s, &t);
    assert_eq!(s.cell(0, 0).kind(), VerdictKind::Entire);
    assert!(monotonicity_violations(&s).is_empty());
}

#[test]
fn sweeps_are_reproducible() {
    let t = constant();
    let r = Rectangle::new(0.001, 0.02, 0.001, 0.03).unwrap();
    let x = sweep(&t, &r, (5, 3), 50.0, 1e8, &cfg()).unwrap();
    let y = sweep(&t, &r, (5, 3), 50.0, 1e8, &cfg()).unwrap();
    assert_eq!(format!("{x:?}"), format!("{y:?}"));
}

#[test]
fn trace_finds_the_oracle_edge() {
    let t = constant();
    let bp = trace_boundary(&t, &diagonal(), 1e-3, 50.0, 1e8, &cfg()).unwrap();
    assert!(bp.gap <= 1e-3);
    assert_eq!(bp.inside.cell.kind(), VerdictKind::Entire);
    assert_eq!(bp.outside.cell.kind(), VerdictKind::BlowUp);
    assert!(bp.warnings.is_empty());
    let edge = oracle_diagonal_edge(&t, 0.001, 0.05, 50.0);
    let (ia, oa) = (bp.inside.cell.a, bp.outside.cell.a);
    assert!(ia <= edge + 1e-4 && oa >= edge - 1e-4, "bracket [{ia}, {oa}] oracle {edge}");
    let half = SolverConfig { base_step: 0.025, ..cfg() };
    assert!(bracket_is_stable(&t, &bp, &half));
}

#[test]
fn reversed_ray_gives_the_same_bracket_side() {
    let t = constant();
    let r = diagonal();
    let bp = trace_boundary(&t, &Ray::new(r.end, r.origin), 1e-3, 50.0, 1e8, &cfg()).unwrap();
    assert_eq!(bp.inside.cell.kind(), VerdictKind::Entire);
    assert!(bp.inside.cell.a < bp.outside.cell.a);
}

#[test]
fn closedness_along_a_geometric_approach() {
    let t = constant();
    let bp = trace_boundary(&t, &diagonal(), 1e-3, 50.0, 1e8, &cfg()).unwrap();
    let limit = (bp.inside.cell.a, bp.inside.cell.b);
    let seq = geometric_approach(diagonal().origin, limit, 0.5, 8);
    let rep = closedness_probe(&t, &seq, limit, 50.0, 1e8, &cfg()).unwrap();
    assert_eq!(rep.status, ProbeStatus::Pass);
    assert!(rep.members.iter().all(|m| m.verdict == Verdict::Entire));
    // members converge to the limit solution
    assert!(rep.members.windows(2).all(|w| w[1].sup_gap <= w[0].sup_gap));
    // near the edge the gap settles into the geometric rate of the sequence
    let g: Vec<f64> = rep.members.iter().map(|m| m.sup_gap).collect();
    assert!(g[7] < 0.6 * g[6] && g[6] < 0.7 * g[5], "{g:?}");

    let constant_seq = vec![limit; 3];
    let rep = closedness_probe(&t, &constant_seq, limit, 50.0, 1e8, &cfg()).unwrap();
    assert_eq!(rep.status, ProbeStatus::Pass);

    let outside = vec![(1.0, 1.0), (0.5, 0.5)];
    assert!(matches!(
        closedness_probe(&t, &outside, (0.25, 0.25), 50.0, 1e8, &cfg()),
        Err(ExplorerError::MemberNotEntire { index: 0, .. })
    ));
    assert_eq!(
        closedness_probe(&t, &[(0.1, 0.1), (0.5, 0.5)], (0.11, 0.11), 50.0, 1e8, &cfg()),
        Err(ExplorerError::NotConvergent)
    );
}

#[test]
fn edge_point_keeps_growing_and_respects_the_bounds() {
    let t = constant();
    let bp = trace_boundary(&t, &diagonal(), 1e-3, 100.0, 1e8, &cfg()).unwrap();
    let rep = edge_largeness_probe(&t, &bp, &DEFAULT_LADDER, &DEFAULT_RADII, &cfg()).unwrap();
    assert!(rep.truncated);
    assert!(rep.growth_pass, "{:?}", rep.rungs);
    assert_eq!(rep.bounds.len(), 2);
    for b in &rep.bounds {
        assert_eq!(b.pass, Some(true), "{b:?}");
        assert!(b.bound.u.value > 0.0 && b.bound.u.value <= b.solution.0);
    }
    assert_eq!(rep.status, ProbeStatus::Pass);
}

#[test]
fn deep_interior_point_saturates() {
    let p = exp_decay().with_central(0.05, 0.05).unwrap();
    let rep = saturation_probe(&p, &[50.0, 100.0], 1e8, &cfg()).unwrap();
    assert!(rep.saturated, "change {}", rep.change);
    // the control does grow, just by less than the threshold
    assert!(rep.change > 0.0);
}

#[test]
fn probes_on_zero_weights_are_not_applicable() {
    let t = template(WeightSpec::zero());
    let ray = Ray::new((0.1, 0.1), (10.0, 10.0));
    assert!(matches!(
        trace_boundary(&t, &ray, 1e-3, 50.0, 1e8, &cfg()),
        Err(ExplorerError::NoBracket { .. })
    ));
    let bp = trace_boundary(&constant(), &diagonal(), 1e-2, 50.0, 1e8, &cfg()).unwrap();
    let rep = edge_largeness_probe(&t, &bp, &DEFAULT_LADDER, &DEFAULT_RADII, &cfg()).unwrap();
    assert_eq!(rep.status, ProbeStatus::NotApplicable);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dominated_points_of_entire_points_are_entire(a in 0.001f64..0.05, b in 0.001f64..0.05, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let tm = constant();
        let (la, lb) = (a * s, b * t);
        let upper = classify_point(&tm, a, b, 30.0, 1e8, &cfg());
        let lower = classify_point(&tm, la, lb, 30.0, 1e8, &cfg());
        if upper.kind() == VerdictKind::Entire {
            prop_assert_eq!(lower.kind(), VerdictKind::Entire);
        }
        if lower.kind() == VerdictKind::BlowUp {
            prop_assert_eq!(upper.kind(), VerdictKind::BlowUp);
        }
    }
}
