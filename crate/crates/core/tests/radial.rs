mod common;

use common::rk4;
use koradial_core::nonlinearity::NonlinearitySpec;
use koradial_core::quad;
use koradial_core::radial_solver::*;
use koradial_core::weights::WeightSpec;
use proptest::prelude::*;

fn pw(t: f64) -> NonlinearitySpec {
    NonlinearitySpec::power(t).unwrap()
}

fn exp1() -> WeightSpec {
    WeightSpec::exp_decay(1.0).unwrap()
}

fn one() -> WeightSpec {
    WeightSpec::constant(1.0).unwrap()
}

fn power2(p: WeightSpec, q: WeightSpec, a: f64, b: f64) -> ProblemDef {
    ProblemDef::new(3, pw(2.0), pw(2.0), p, q, a, b).unwrap()
}

#[test]
fn near_origin_expansion() {
    let pr = power2(one(), one(), 1.0, 2.0);
    let s = picard_solve(&pr, 1.0, &SolverConfig::default()).unwrap();
    let (u, _) = s.eval_at(0.01).unwrap();
    assert!((u - 1.0 - 4e-4 / 6.0).abs() < 1e-7, "{}", u - 1.0);
}

#[test]
fn constant_weights_blow_up_where_the_oracle_does() {
    let pr = power2(one(), one(), 5.0, 5.0);
    let c = classify(&pr, 50.0, 1e8, &SolverConfig::default()).unwrap();
    let Verdict::FiniteBlowUp { r_est } = c.verdict else {
        panic!("{:?}", c.verdict)
    };
    let oracle = rk4(&pr, 50.0, 1e-3, 1e8).blowup.expect("oracle blows up");
    assert!((r_est - oracle).abs() <= 0.02 * oracle, "solver {r_est} oracle {oracle}");
    assert!(r_est <= 50.0);
}

#[test]
fn exp_decay_small_data_is_entire_and_matches_oracle() {
    let pr = power2(exp1(), exp1(), 0.1, 0.1);
    let s = picard_solve(&pr, 50.0, &SolverConfig::default()).unwrap();
    assert_eq!(classification_of(&s).verdict, Verdict::Entire);
    let o = rk4(&pr, 50.0, 1e-3, 1e8);
    assert!(o.blowup.is_none());
    for &r in &[0.5, 2.0, 10.0, 49.0] {
        let (u, v) = s.eval_at(r).unwrap();
        let (ou, ov) = o.at(r);
        assert!((u - ou).abs() < 1e-6 * ou && (v - ov).abs() < 1e-6 * ov, "r={r}: {u} {ou}");
    }
}

#[test]
fn picard_iterates_increase_and_settle() {
    let pr = ProblemDef::new(3, pw(2.0), pw(1.5), exp1(), WeightSpec::exp_decay(2.0).unwrap(), 0.3, 0.2).unwrap();
    let cfg = SolverConfig::default();
    let s = picard_solve(&pr, 20.0, &cfg).unwrap();
    assert_eq!(s.diagnostics.phase, Phase::Picard);
    assert!(s.diagnostics.min_increment >= 0.0);
    assert!(s.diagnostics.residual <= 2.0 * cfg.fixed_point_tol);
    assert_eq!(s.u[0], 0.3);
    assert_eq!(s.du[0], 0.0);
    assert!(s.u.windows(2).all(|w| w[1] >= w[0]));
    assert!(s.v.windows(2).all(|w| w[1] >= w[0]));
    assert!(s.du.iter().chain(&s.dv).all(|&d| d >= 0.0));
}

#[test]
fn first_integral_identity() {
    let pr = ProblemDef::new(4, pw(2.0), pw(1.5), exp1(), exp1(), 0.5, 0.4).unwrap();
    let s = picard_solve(&pr, 10.0, &SolverConfig::default()).unwrap();
    let n = 4.0;
    // g(v) interpolated linearly between nodes, as the scheme does
    let linear = |x: f64| {
        let i = s.r.partition_point(|&r| r < x).clamp(1, s.len() - 1);
        let t = (x - s.r[i - 1]) / (s.r[i] - s.r[i - 1]);
        let (g0, g1) = (pr.g.eval(s.v[i - 1]), pr.g.eval(s.v[i]));
        g0 + t * (g1 - g0)
    };
    for &i in &[10usize, 40, 120, s.len() - 1] {
        let r = s.r[i];
        let first = |src: &dyn Fn(f64) -> f64| {
            let mut total = 0.0;
            for k in 0..i {
                total += quad::integrate(
                    |x| x.powf(n - 1.0) * pr.p.eval(x) * src(x),
                    s.r[k],
                    s.r[k + 1],
                    0.0,
                    1e-13,
                    200,
                )
                .unwrap()
                .value;
            }
            r.powf(1.0 - n) * total
        };
        let discrete = first(&linear);
        assert!((s.du[i] - discrete).abs() <= 1e-9 * discrete, "r={r}: {} vs {discrete}", s.du[i]);
        let smooth = first(&|x| pr.g.eval(s.eval_at(x).unwrap().1));
        assert!((s.du[i] - smooth).abs() <= 1e-4 * smooth, "r={r}: {} vs {smooth}", s.du[i]);
    }
}

#[test]
fn swapping_roles_swaps_components_exactly() {
    let pr = ProblemDef::new(3, pw(2.0), pw(1.5), exp1(), WeightSpec::exp_decay(2.0).unwrap(), 0.3, 0.2).unwrap();
    let cfg = SolverConfig::default();
    let s = picard_solve(&pr, 20.0, &cfg).unwrap();
    let t = picard_solve(&pr.swapped(), 20.0, &cfg).unwrap();
    assert_eq!(s.r, t.r);
    assert_eq!(s.u, t.v);
    assert_eq!(s.v, t.u);
    assert_eq!(s.du, t.dv);

    // also along a blow-up run
    let pr = ProblemDef::new(3, pw(2.0), pw(3.0), one(), one(), 2.0, 1.0).unwrap();
    let s = picard_solve(&pr, 50.0, &cfg).unwrap();
    let t = picard_solve(&pr.swapped(), 50.0, &cfg).unwrap();
    assert!(matches!(s.status, SolveStatus::BlowUpDetected { .. }));
    assert_eq!(s.r, t.r);
    assert_eq!(s.u, t.v);
    assert_eq!(s.status, t.status);
}

#[test]
fn halving_the_step_shows_second_order() {
    let pr = power2(exp1(), exp1(), 0.5, 0.5);
    let term = |h: f64| {
        let cfg = SolverConfig {
            base_step: h,
            fixed_point_tol: 1e-14,
            ..SolverConfig::default()
        };
        let s = picard_solve(&pr, 8.0, &cfg).unwrap();
        assert_eq!(s.diagnostics.refinements, 0);
        s.terminal().0
    };
    let (u1, u2, u3) = (term(0.2), term(0.1), term(0.05));
    let ratio = (u1 - u2) / (u2 - u3);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn frozen_component_grows_by_its_potential() {
    // p ≡ 0: u ≡ a and v = b + f(a) r²/6
    let pr = power2(WeightSpec::zero(), one(), 1.5, 0.5);
    let s = picard_solve(&pr, 20.0, &SolverConfig::default()).unwrap();
    assert_eq!(s.status, SolveStatus::ReachedRmax);
    assert!(s.u.iter().all(|&u| u == 1.5));
    for (r, v) in s.r.iter().zip(&s.v) {
        let exact = 0.5 + 2.25 * r * r / 6.0;
        assert!((v - exact).abs() <= 1e-12 * exact);
    }
    assert_eq!(blowup_consistency(&s), Consistency::NotApplicable);
}

#[test]
fn initial_data_order_is_preserved() {
    let pr = power2(exp1(), exp1(), 0.1, 0.1);
    let cfg = SolverConfig::default();
    let same = initial_data_monotonicity(&pr, (0.1, 0.1), (0.1, 0.1), 20.0, &cfg).unwrap();
    assert!(same.pass);
    assert_eq!(same.max_violation, 0.0);
    let ordered = initial_data_monotonicity(&pr, (0.1, 0.1), (0.2, 0.2), 20.0, &cfg).unwrap();
    assert!(ordered.pass);
    assert!(ordered.max_violation < 0.0);
    assert!(matches!(
        initial_data_monotonicity(&pr, (0.1, 0.3), (0.2, 0.1), 20.0, &cfg),
        Err(SolverError::NotOrdered { .. })
    ));
}

#[test]
fn zero_central_values_stay_zero() {
    let pr = power2(exp1(), exp1(), 0.0, 0.0);
    let s = picard_solve(&pr, 10.0, &SolverConfig::default()).unwrap();
    assert!(s.u.iter().chain(&s.v).all(|&x| x == 0.0));
    let pr = power2(exp1(), exp1(), 0.0, 0.5);
    let s = picard_solve(&pr, 10.0, &SolverConfig::default()).unwrap();
    assert!(*s.u.last().unwrap() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solutions_are_nondecreasing(
        theta in 1.2f64..3.0,
        a in 0.0f64..1.5,
        b in 0.0f64..1.5,
        rate in 0.5f64..3.0,
    ) {
        let pr = ProblemDef::new(3, pw(theta), pw(2.0), WeightSpec::exp_decay(rate).unwrap(), exp1(), a, b).unwrap();
        let s = picard_solve(&pr, 15.0, &SolverConfig::default()).unwrap();
        prop_assert!(s.u.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(s.v.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(s.du.iter().chain(&s.dv).all(|&d| d >= 0.0));
        if let SolveStatus::BlowUpDetected { r_est } = s.status {
            prop_assert!(r_est <= 15.0 && r_est >= s.r_term());
        }
    }

    #[test]
    fn larger_data_gives_larger_solutions(a in 0.05f64..0.5, b in 0.05f64..0.5, da in 0.0f64..0.3, db in 0.0f64..0.3) {
        let pr = power2(exp1(), exp1(), a, b);
        let c = initial_data_monotonicity(&pr, (a, b), (a + da, b + db), 10.0, &SolverConfig::default()).unwrap();
        prop_assert!(c.pass, "violation {}", c.max_violation);
    }
}
