//! Scalar barriers above a radial solution and the lower bounds they imply
//!
//! With `G* = g(b/f(a) + L_q)` and `F* = f(a/g(b) + L_p)` the scalar problems
//!
//! ```text
//! z1'' + (n-1)/r z1' = G* p(r) g(f(z1)),  z1(0) = c > a
//! z2'' + (n-1)/r z2' = F* q(r) f(g(z2)),  z2(0) = d > b
//! ```
//!
//! dominate `(u, v)` wherever both exist, and inverting the transforms gives
//! `u(r) >= Φ⁻¹(G*·(P(R) - P(r)))` below a blow-up radius `R`.

use alloc::vec::Vec;

use crate::nonlinearity::{self, NonlinearitySpec};
use crate::quad::{self, Extended, QuadratureConfig};
use crate::radial_solver::{self, ProblemDef, RadialSolution, RadialSystem, SolverConfig, SolverError};
use crate::transform::{TransformError, TransformTable};
use crate::weights::{self, PotentialTable, WeightError, WeightSpec};

/// Relative slack of the comparison and forcing checks.
pub const STRICT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BarrierError {
    #[error("central values ({a}, {b}) make f(a) or g(b) vanish")]
    DegenerateCentralValue { a: f64, b: f64 },
    #[error("the potential limit of {weight} diverges")]
    DivergentPotential { weight: &'static str },
    #[error("the potential limit of {weight} could not be decided")]
    InconclusivePotential { weight: &'static str },
    #[error("barrier values ({c}, {d}) must exceed the central values ({a}, {b})")]
    BarrierNotAbove { a: f64, b: f64, c: f64, d: f64 },
    #[error("solutions share no common radial range")]
    GridMismatch,
    #[error("need 0 <= r <= R inside the potential tables, got r = {r}, R = {big_r}")]
    InvalidRadii { r: f64, big_r: f64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// `G*`, `F*` and the potential limits they were built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingConstants {
    pub g_star: f64,
    pub f_star: f64,
    pub l_p: f64,
    pub l_q: f64,
}

impl ForcingConstants {
    fn from_limits(prob: &ProblemDef, l_p: f64, l_q: f64) -> Result<Self, BarrierError> {
        let fa = prob.f.eval(prob.a);
        let gb = prob.g.eval(prob.b);
        if !(fa > 0.0 && gb > 0.0) {
            return Err(BarrierError::DegenerateCentralValue { a: prob.a, b: prob.b });
        }
        Ok(Self {
            g_star: prob.g.eval(prob.b / fa + l_q),
            f_star: prob.f.eval(prob.a / gb + l_p),
            l_p,
            l_q,
        })
    }

    /// Constants from the full limits `L_p`, `L_q`.
    pub fn new(prob: &ProblemDef, quad: &QuadratureConfig) -> Result<Self, BarrierError> {
        let fa = prob.f.eval(prob.a);
        let gb = prob.g.eval(prob.b);
        if !(fa > 0.0 && gb > 0.0) {
            return Err(BarrierError::DegenerateCentralValue { a: prob.a, b: prob.b });
        }
        let limit = |w: &WeightSpec, weight: &'static str| match weights::limit_constant(w, prob.dimension, quad)? {
            Extended::Finite(v) => Ok(v),
            Extended::Divergent => Err(BarrierError::DivergentPotential { weight }),
            Extended::Inconclusive => Err(BarrierError::InconclusivePotential { weight }),
        };
        let l_p = limit(&prob.p, "p")?;
        let l_q = limit(&prob.q, "q")?;
        Self::from_limits(prob, l_p, l_q)
    }

    /// Constants valid on `[0, R]`, with `P(R)`, `Q(R)` in place of the limits.
    pub fn truncated(prob: &ProblemDef, p_pot: &PotentialTable, q_pot: &PotentialTable, big_r: f64) -> Result<Self, BarrierError> {
        let (Some(pr), Some(qr)) = (p_pot.eval(big_r), q_pot.eval(big_r)) else {
            return Err(BarrierError::InvalidRadii { r: 0.0, big_r });
        };
        Self::from_limits(prob, pr, qr)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierDef {
    pub base: ProblemDef,
    pub c: f64,
    pub d: f64,
    pub constants: ForcingConstants,
}

impl BarrierDef {
    pub fn new(base: ProblemDef, c: f64, d: f64, quad: &QuadratureConfig) -> Result<Self, BarrierError> {
        let constants = ForcingConstants::new(&base, quad)?;
        Self::with_constants(base, c, d, constants)
    }

    pub fn with_constants(base: ProblemDef, c: f64, d: f64, constants: ForcingConstants) -> Result<Self, BarrierError> {
        if !(c > base.a && d > base.b && c.is_finite() && d.is_finite()) {
            return Err(BarrierError::BarrierNotAbove {
                a: base.a,
                b: base.b,
                c,
                d,
            });
        }
        Ok(Self { base, c, d, constants })
    }
}

/// One scalar barrier `z'' + (n-1)/r z' = k w(r) outer(inner(z))`, carried
/// in both slots of a radial system so that the solver sees a symmetric pair.
#[derive(Debug, Clone)]
pub struct ScalarBarrier {
    pub dimension: u32,
    pub weight: WeightSpec,
    pub inner: NonlinearitySpec,
    pub outer: NonlinearitySpec,
    pub central: f64,
}

impl RadialSystem for ScalarBarrier {
    fn dimension(&self) -> u32 {
        self.dimension
    }

    fn central(&self) -> [f64; 2] {
        [self.central; 2]
    }

    fn weights(&self, r: f64) -> [f64; 2] {
        [self.weight.eval(r); 2]
    }

    fn sources(&self, y: [f64; 2]) -> [f64; 2] {
        [self.outer.eval(self.inner.eval(y[0])), self.outer.eval(self.inner.eval(y[1]))]
    }

    fn gauge(&self, _k: usize, y: f64, quad: &QuadratureConfig) -> f64 {
        match quad::integrate_to_infinity(|s| 1.0 / self.outer.eval(self.inner.eval(s)), y, quad) {
            Extended::Finite(v) if v > 0.0 => v,
            _ => 1.0 / y,
        }
    }
}

impl BarrierDef {
    pub fn scalar_problems(&self) -> (ScalarBarrier, ScalarBarrier) {
        let b = &self.base;
        (
            ScalarBarrier {
                dimension: b.dimension,
                weight: b.p.scaled(self.constants.g_star),
                inner: b.f.clone(),
                outer: b.g.clone(),
                central: self.c,
            },
            ScalarBarrier {
                dimension: b.dimension,
                weight: b.q.scaled(self.constants.f_star),
                inner: b.g.clone(),
                outer: b.f.clone(),
                central: self.d,
            },
        )
    }
}

/// `(z1, z2)`; in each solution both components hold the same barrier.
pub fn solve_barrier(bdef: &BarrierDef, r_max: f64, cfg: &SolverConfig) -> Result<(RadialSolution, RadialSolution), BarrierError> {
    let (s1, s2) = bdef.scalar_problems();
    Ok((
        radial_solver::solve_system(&s1, r_max, cfg)?,
        radial_solver::solve_system(&s2, r_max, cfg)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub pass: bool,
    /// `min (z1 - u)` over the common nodes.
    pub margin_u: f64,
    /// `min (z2 - v)` over the common nodes.
    pub margin_v: f64,
    /// Radius of the smallest relative margin.
    pub worst_r: f64,
    /// End of the common range.
    pub common_r: f64,
}

/// Check `u < z1` and `v < z2` on the union of the three grids, restricted to
/// the range where all solutions exist.
pub fn verify_comparison(
    sol: &RadialSolution,
    z: (&RadialSolution, &RadialSolution),
    strict_tol: f64,
) -> Result<ComparisonReport, BarrierError> {
    let common = sol.r_term().min(z.0.r_term()).min(z.1.r_term());
    let starts_at_origin = [sol, z.0, z.1].iter().all(|s| s.len() >= 2 && s.r[0] == 0.0);
    if !(starts_at_origin && common > 0.0) {
        return Err(BarrierError::GridMismatch);
    }
    let mut nodes: Vec<f64> = sol
        .r
        .iter()
        .chain(&z.0.r)
        .chain(&z.1.r)
        .copied()
        .filter(|&r| r <= common)
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut report = ComparisonReport {
        pass: true,
        margin_u: f64::INFINITY,
        margin_v: f64::INFINITY,
        worst_r: 0.0,
        common_r: common,
    };
    let mut worst = f64::INFINITY;
    for &r in &nodes {
        let (Some((u, v)), Some((z1, _)), Some((z2, _))) = (sol.eval_at(r), z.0.eval_at(r), z.1.eval_at(r)) else {
            continue;
        };
        let (mu, mv) = (z1 - u, z2 - v);
        report.margin_u = report.margin_u.min(mu);
        report.margin_v = report.margin_v.min(mv);
        let rel = (mu / z1.abs().max(1.0)).min(mv / z2.abs().max(1.0));
        if rel < worst {
            worst = rel;
            report.worst_r = r;
        }
    }
    report.pass = worst >= -strict_tol;
    Ok(report)
}

/// Which multiplicative hypothesis fails when the forcing check does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attribution {
    pub f2_f_fails: bool,
    pub f2_g_fails: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingReport {
    pub pass: bool,
    /// `max g(v) / (G* g(f(u)))`
    pub worst_ratio_u: f64,
    /// `max f(u) / (F* f(g(v)))`
    pub worst_ratio_v: f64,
    pub worst_r: f64,
    pub attribution: Option<Attribution>,
}

/// `g(v) <= G* g(f(u))` and `f(u) <= F* f(g(v))` at every node.
pub fn forcing_check(
    sol: &RadialSolution,
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    constants: &ForcingConstants,
    strict_tol: f64,
) -> ForcingReport {
    let mut report = ForcingReport {
        pass: true,
        worst_ratio_u: 0.0,
        worst_ratio_v: 0.0,
        worst_r: 0.0,
        attribution: None,
    };
    let mut worst = f64::NEG_INFINITY;
    let ratio = |lhs: f64, rhs: f64| {
        if lhs == 0.0 {
            0.0
        } else if rhs > 0.0 {
            lhs / rhs
        } else {
            f64::INFINITY
        }
    };
    for i in 0..sol.len() {
        let (u, v) = (sol.u[i], sol.v[i]);
        let ru = ratio(g.eval(v), constants.g_star * g.eval(f.eval(u)));
        let rv = ratio(f.eval(u), constants.f_star * f.eval(g.eval(v)));
        // NaN from overflowing products counts as a failure
        let ru = if ru.is_nan() { f64::INFINITY } else { ru };
        let rv = if rv.is_nan() { f64::INFINITY } else { rv };
        report.worst_ratio_u = report.worst_ratio_u.max(ru);
        report.worst_ratio_v = report.worst_ratio_v.max(rv);
        if ru.max(rv) > worst {
            worst = ru.max(rv);
            report.worst_r = sol.r[i];
        }
    }
    report.pass = worst <= 1.0 + strict_tol;
    if !report.pass {
        let pairs = nonlinearity::default_f2_pairs();
        let fails = |s: &NonlinearitySpec| {
            nonlinearity::check_f2(s, &pairs, nonlinearity::F2_REL_TOL)
                .map(|o| !o.pass())
                .unwrap_or(true)
        };
        report.attribution = Some(Attribution {
            f2_f_fails: fails(f),
            f2_g_fails: fails(g),
        });
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Value,
    /// The argument vanished (`r = R`): unbounded, reported as `+∞`.
    Infinite,
    /// The argument exceeds the transform range: the bound says nothing, reported as `0`.
    OutOfRange,
    /// The weight carries no mass, so no blow-up is forced; reported as `+∞`.
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub status: BoundStatus,
    pub argument: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub u: Bound,
    pub v: Bound,
}

fn invert(table: &TransformTable, argument: f64, massless: bool) -> Result<Bound, BarrierError> {
    if massless {
        return Ok(Bound {
            value: f64::INFINITY,
            status: BoundStatus::Vacuous,
            argument,
        });
    }
    if argument <= 0.0 {
        return Ok(Bound {
            value: f64::INFINITY,
            status: BoundStatus::Infinite,
            argument,
        });
    }
    match table.inverse(argument) {
        Ok(value) => Ok(Bound {
            value,
            status: BoundStatus::Value,
            argument,
        }),
        Err(TransformError::OutOfRange { .. }) => Ok(Bound {
            value: 0.0,
            status: BoundStatus::OutOfRange,
            argument,
        }),
        Err(e) => Err(e.into()),
    }
}

/// `u(r) >= Φ⁻¹(G*(P(R) - P(r)))`, `v(r) >= Ψ⁻¹(F*(Q(R) - Q(r)))`.
pub fn largeness_lower_bound(
    constants: &ForcingConstants,
    phi: &TransformTable,
    psi: &TransformTable,
    p_pot: &PotentialTable,
    q_pot: &PotentialTable,
    big_r: f64,
    r: f64,
) -> Result<LowerBound, BarrierError> {
    let bad = BarrierError::InvalidRadii { r, big_r };
    if !(r >= 0.0 && r <= big_r) {
        return Err(bad);
    }
    let (Some(pr), Some(pbig), Some(qr), Some(qbig)) = (p_pot.eval(r), p_pot.eval(big_r), q_pot.eval(r), q_pot.eval(big_r)) else {
        return Err(bad);
    };
    let arg_u = constants.g_star * (pbig - pr).max(0.0);
    let arg_v = constants.f_star * (qbig - qr).max(0.0);
    Ok(LowerBound {
        u: invert(phi, arg_u, p_pot.weight().is_zero())?,
        v: invert(psi, arg_v, q_pot.weight().is_zero())?,
    })
}
