//! Empirical geometry of the set of admissible central values.
//!
//! Every verdict here is relative to a truncation radius `r_max` and a value
//! cap: "entire" means the solver reached `r_max` with both components below
//! the cap.

use alloc::string::String;
use alloc::vec::Vec;

use crate::barrier::{self, BarrierError, BoundStatus, ForcingConstants, LowerBound};
use crate::radial_solver::{self, Classification, Diagnostics, Phase, ProblemDef, SolverConfig, SolverError, Verdict};
use crate::transform::{self, TransformError, TransformKind, DEFAULT_NODES};
use crate::weights::{self, WeightError};

pub const DEFAULT_TRACE_TOL: f64 = 1e-3;
pub const DEFAULT_R_MAX: f64 = 50.0;
pub const DEFAULT_VALUE_CAP: f64 = 1e8;
pub const DEFAULT_LADDER: [f64; 3] = [25.0, 50.0, 100.0];
pub const DEFAULT_RADII: [f64; 2] = [1.0, 5.0];
/// Largest terminal change between the last two rungs that still counts as saturated.
pub const SATURATION_TOL: f64 = 1e-4;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExplorerError {
    #[error("invalid rectangle [{a_lo}, {a_hi}] x [{b_lo}, {b_hi}]")]
    InvalidRectangle { a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64 },
    #[error("resolution must be at least 2 per axis, got {0} x {1}")]
    InvalidResolution(usize, usize),
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("ray endpoints do not bracket the boundary ({origin:?} vs {end:?})")]
    NoBracket { origin: VerdictKind, end: VerdictKind },
    #[error("sequence member {index} at ({a}, {b}) does not classify entire")]
    MemberNotEntire { index: usize, a: f64, b: f64 },
    #[error("sequence does not approach its limit")]
    NotConvergent,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Barrier(#[from] BarrierError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// A verdict without its payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Entire,
    BlowUp,
    Inconclusive,
}

impl VerdictKind {
    pub fn of(v: &Verdict) -> Self {
        match v {
            Verdict::Entire => Self::Entire,
            Verdict::FiniteBlowUp { .. } => Self::BlowUp,
            Verdict::Inconclusive => Self::Inconclusive,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Entire => "entire",
            Self::BlowUp => "blowup",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub a_lo: f64,
    pub a_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
}

impl Rectangle {
    pub fn new(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> Result<Self, ExplorerError> {
        let ok = [a_lo, a_hi, b_lo, b_hi].iter().all(|x| x.is_finite() && *x >= 0.0) && a_lo <= a_hi && b_lo <= b_hi;
        if !ok {
            return Err(ExplorerError::InvalidRectangle { a_lo, a_hi, b_lo, b_hi });
        }
        Ok(Self { a_lo, a_hi, b_lo, b_hi })
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self, ExplorerError> {
        Self::new(lo, hi, lo, hi)
    }

    fn node(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid nodes including the corners, `a` fastest.
    pub fn grid(&self, res_a: usize, res_b: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(res_a * res_b);
        for j in 0..res_b {
            let b = Self::node(self.b_lo, self.b_hi, j, res_b);
            for i in 0..res_a {
                out.push((Self::node(self.a_lo, self.a_hi, i, res_a), b));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub a: f64,
    pub b: f64,
    pub classification: Classification,
}

impl SweepCell {
    pub fn kind(&self) -> VerdictKind {
        VerdictKind::of(&self.classification.verdict)
    }

    pub fn r_est(&self) -> Option<f64> {
        match self.classification.verdict {
            Verdict::FiniteBlowUp { r_est } => Some(r_est),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rectangle: Rectangle,
    pub resolution: (usize, usize),
    /// Row-major, `a` fastest.
    pub cells: Vec<SweepCell>,
    pub config: SolverConfig,
    pub r_max: f64,
    pub value_cap: f64,
}

impl SweepResult {
    pub fn cell(&self, i: usize, j: usize) -> &SweepCell {
        &self.cells[j * self.resolution.0 + i]
    }

    pub fn count(&self, kind: VerdictKind) -> usize {
        self.cells.iter().filter(|c| c.kind() == kind).count()
    }
}

fn failed() -> Classification {
    Classification {
        verdict: Verdict::Inconclusive,
        r_term: 0.0,
        terminal: (f64::NAN, f64::NAN),
        diagnostics: Diagnostics {
            phase: Phase::Picard,
            iterations: 0,
            refinements: 0,
            residual: f64::NAN,
            min_increment: f64::NAN,
            rejected_steps: 0,
        },
    }
}

/// Classify one point; solver errors become an inconclusive cell.
pub fn classify_point(template: &ProblemDef, a: f64, b: f64, r_max: f64, value_cap: f64, cfg: &SolverConfig) -> SweepCell {
    let classification = template
        .with_central(a, b)
        .and_then(|p| radial_solver::classify(&p, r_max, value_cap, cfg))
        .unwrap_or_else(|_| failed());
    SweepCell { a, b, classification }
}

fn check_sweep(rect: &Rectangle, resolution: (usize, usize), r_max: f64) -> Result<(), ExplorerError> {
    Rectangle::new(rect.a_lo, rect.a_hi, rect.b_lo, rect.b_hi)?;
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(ExplorerError::InvalidResolution(resolution.0, resolution.1));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(SolverError::InvalidRadius(r_max).into());
    }
    Ok(())
}

/// Sweep with a caller-supplied map over the grid nodes, e.g. a parallel one.
/// `map` must return one cell per node, in node order.
pub fn sweep_with<M>(
    template: &ProblemDef,
    rect: &Rectangle,
    resolution: (usize, usize),
    r_max: f64,
    value_cap: f64,
    cfg: &SolverConfig,
    map: M,
) -> Result<SweepResult, ExplorerError>
where
    M: FnOnce(&[(f64, f64)], &(dyn Fn((f64, f64)) -> SweepCell + Sync)) -> Vec<SweepCell>,
{
    check_sweep(rect, resolution, r_max)?;
    let nodes = rect.grid(resolution.0, resolution.1);
    let one = |(a, b): (f64, f64)| classify_point(template, a, b, r_max, value_cap, cfg);
    let cells = map(&nodes, &one);
    assert_eq!(cells.len(), nodes.len(), "sweep map dropped cells");
    Ok(SweepResult {
        rectangle: *rect,
        resolution,
        cells,
        config: SolverConfig { value_cap, ..*cfg },
        r_max,
        value_cap,
    })
}

pub fn sweep(
    template: &ProblemDef,
    rect: &Rectangle,
    resolution: (usize, usize),
    r_max: f64,
    value_cap: f64,
    cfg: &SolverConfig,
) -> Result<SweepResult, ExplorerError> {
    sweep_with(template, rect, resolution, r_max, value_cap, cfg, |nodes, one| {
        nodes.iter().map(|&x| one(x)).collect()
    })
}

/// Pairs `(lower, upper)` of cell indices with `lower <= upper`
/// componentwise, `upper` entire and `lower` blowing up.
pub fn monotonicity_violations(s: &SweepResult) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (hi, upper) in s.cells.iter().enumerate() {
        if upper.kind() != VerdictKind::Entire {
            continue;
        }
        for (lo, lower) in s.cells.iter().enumerate() {
            if lower.a <= upper.a && lower.b <= upper.b && lower.kind() == VerdictKind::BlowUp {
                out.push((lo, hi));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: (f64, f64),
    pub end: (f64, f64),
}

impl Ray {
    pub fn new(origin: (f64, f64), end: (f64, f64)) -> Self {
        Self { origin, end }
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        (
            self.origin.0 + t * (self.end.0 - self.origin.0),
            self.origin.1 + t * (self.end.1 - self.origin.1),
        )
    }

    pub fn length(&self) -> f64 {
        crate::math::hypot(self.end.0 - self.origin.0, self.end.1 - self.origin.1)
    }
}

/// One end of a bracket: its ray parameter and classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketEnd {
    pub t: f64,
    pub cell: SweepCell,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceWarning {
    /// Treated as the blow-up side.
    InconclusiveMidpoint { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub ray: Ray,
    pub inside: BracketEnd,
    pub outside: BracketEnd,
    /// Euclidean distance between the bracket ends.
    pub gap: f64,
    pub midpoint: (f64, f64),
    pub bisections: usize,
    pub r_max: f64,
    pub value_cap: f64,
    pub warnings: Vec<TraceWarning>,
}

/// Bisect along `ray` between an entire end and a blow-up end.
pub fn trace_boundary(
    template: &ProblemDef,
    ray: &Ray,
    trace_tol: f64,
    r_max: f64,
    value_cap: f64,
    cfg: &SolverConfig,
) -> Result<BoundaryPoint, ExplorerError> {
    let len = ray.length();
    if !(len > 0.0 && len.is_finite()) {
        return Err(ExplorerError::DomainError("ray has zero length"));
    }
    if ![ray.origin.0, ray.origin.1, ray.end.0, ray.end.1].iter().all(|&x| x >= 0.0) {
        return Err(ExplorerError::DomainError("ray leaves the closed positive quadrant"));
    }
    if !(trace_tol > 0.0) {
        return Err(ExplorerError::DomainError("trace tolerance must be positive"));
    }
    let end_at = |t: f64| {
        let (a, b) = ray.at(t);
        BracketEnd { t, cell: classify_point(template, a, b, r_max, value_cap, cfg) }
    };
    let (e0, e1) = (end_at(0.0), end_at(1.0));
    let (mut inside, mut outside) = match (e0.cell.kind(), e1.cell.kind()) {
        (VerdictKind::Entire, VerdictKind::BlowUp) => (e0, e1),
        (VerdictKind::BlowUp, VerdictKind::Entire) => (e1, e0),
        (origin, end) => return Err(ExplorerError::NoBracket { origin, end }),
    };
    let mut warnings = Vec::new();
    let mut bisections = 0;
    while (inside.t - outside.t).abs() * len > trace_tol && bisections < MAX_BISECTIONS {
        let mid = end_at(0.5 * (inside.t + outside.t));
        match mid.cell.kind() {
            VerdictKind::Entire => inside = mid,
            VerdictKind::BlowUp => outside = mid,
            VerdictKind::Inconclusive => {
                warnings.push(TraceWarning::InconclusiveMidpoint { a: mid.cell.a, b: mid.cell.b });
                outside = mid;
            }
        }
        bisections += 1;
    }
    Ok(BoundaryPoint {
        ray: *ray,
        inside,
        outside,
        gap: (inside.t - outside.t).abs() * len,
        midpoint: ray.at(0.5 * (inside.t + outside.t)),
        bisections,
        r_max,
        value_cap,
        warnings,
    })
}

/// Reclassify both bracket ends with `cfg` and report whether the verdict
/// kinds are unchanged.
pub fn bracket_is_stable(template: &ProblemDef, bp: &BoundaryPoint, cfg: &SolverConfig) -> bool {
    [bp.inside, bp.outside].iter().all(|e| {
        classify_point(template, e.cell.a, e.cell.b, bp.r_max, bp.value_cap, cfg).kind() == e.cell.kind()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStatus {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

/// `limit + ratio^k (start - limit)`, `k = 0..count`.
pub fn geometric_approach(start: (f64, f64), limit: (f64, f64), ratio: f64, count: usize) -> Vec<(f64, f64)> {
    let mut w = 1.0;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push((limit.0 + w * (start.0 - limit.0), limit.1 + w * (start.1 - limit.1)));
        w *= ratio;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Member {
    pub a: f64,
    pub b: f64,
    pub verdict: Verdict,
    pub terminal: (f64, f64),
    /// Largest relative gap to the limit solution over `[0, min(r_term)]`.
    pub sup_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessReport {
    pub status: ProbeStatus,
    pub limit: Member,
    pub members: Vec<Member>,
    pub r_max: f64,
    pub value_cap: f64,
}

/// Classify every member and the limit; the limit must be entire whenever
/// every member is.
pub fn closedness_probe(
    template: &ProblemDef,
    sequence: &[(f64, f64)],
    limit: (f64, f64),
    r_max: f64,
    value_cap: f64,
    cfg: &SolverConfig,
) -> Result<ClosednessReport, ExplorerError> {
    if sequence.is_empty() {
        return Err(ExplorerError::DomainError("empty sequence"));
    }
    let dist = |p: &(f64, f64)| crate::math::hypot(p.0 - limit.0, p.1 - limit.1);
    if sequence.windows(2).any(|w| dist(&w[1]) > dist(&w[0])) {
        return Err(ExplorerError::NotConvergent);
    }
    let cfg = SolverConfig { value_cap, ..*cfg };
    let lim_sol = radial_solver::picard_solve(&template.with_central(limit.0, limit.1)?, r_max, &cfg)?;
    let lim_class = radial_solver::classification_of(&lim_sol);
    let mut members = Vec::with_capacity(sequence.len());
    let mut any_inconclusive = false;
    for (index, &(a, b)) in sequence.iter().enumerate() {
        let sol = radial_solver::picard_solve(&template.with_central(a, b)?, r_max, &cfg)?;
        let class = radial_solver::classification_of(&sol);
        match class.verdict {
            Verdict::FiniteBlowUp { .. } => return Err(ExplorerError::MemberNotEntire { index, a, b }),
            Verdict::Inconclusive => any_inconclusive = true,
            Verdict::Entire => {}
        }
        let common = sol.r_term().min(lim_sol.r_term());
        let mut sup_gap: f64 = 0.0;
        for &r in lim_sol.r.iter().filter(|&&r| r <= common) {
            if let (Some(x), Some(y)) = (sol.eval_at(r), lim_sol.eval_at(r)) {
                sup_gap = sup_gap
                    .max((x.0 - y.0).abs() / y.0.abs().max(1.0))
                    .max((x.1 - y.1).abs() / y.1.abs().max(1.0));
            }
        }
        members.push(Member { a, b, verdict: class.verdict, terminal: class.terminal, sup_gap });
    }
    let status = match (any_inconclusive, lim_class.verdict) {
        (true, _) | (_, Verdict::Inconclusive) => ProbeStatus::Inconclusive,
        (false, Verdict::Entire) => ProbeStatus::Pass,
        (false, Verdict::FiniteBlowUp { .. }) => ProbeStatus::Fail,
    };
    Ok(ClosednessReport {
        status,
        limit: Member {
            a: limit.0,
            b: limit.1,
            verdict: lim_class.verdict,
            terminal: lim_class.terminal,
            sup_gap: 0.0,
        },
        members,
        r_max,
        value_cap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rung {
    pub r_max: f64,
    pub verdict: Verdict,
    pub terminal: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub r: f64,
    pub solution: (f64, f64),
    pub bound: LowerBound,
    /// `None` when neither bound carries information at this radius.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReport {
    pub status: ProbeStatus,
    pub point: (f64, f64),
    pub rungs: Vec<Rung>,
    pub growth_pass: bool,
    /// Blow-up radius of the outside bracket end.
    pub big_r: Option<f64>,
    pub constants: Option<ForcingConstants>,
    /// Constants built from `P(R)`, `Q(R)` because a limit diverges.
    pub truncated: bool,
    pub bounds: Vec<BoundCheck>,
    pub notes: Vec<String>,
}

fn not_applicable(point: (f64, f64), note: &str) -> EdgeReport {
    EdgeReport {
        status: ProbeStatus::NotApplicable,
        point,
        rungs: Vec::new(),
        growth_pass: false,
        big_r: None,
        constants: None,
        truncated: false,
        bounds: Vec::new(),
        notes: alloc::vec![String::from(note)],
    }
}

fn bound_ok(value: f64, b: &barrier::Bound) -> Option<bool> {
    match b.status {
        BoundStatus::Value => Some(value >= b.value),
        BoundStatus::Infinite => Some(false),
        BoundStatus::OutOfRange | BoundStatus::Vacuous => None,
    }
}

/// Terminal growth of the inside bracket point across `ladder`, and the
/// transform lower bounds at `radii` with `R` the outside blow-up radius.
pub fn edge_largeness_probe(
    template: &ProblemDef,
    boundary: &BoundaryPoint,
    ladder: &[f64],
    radii: &[f64],
    cfg: &SolverConfig,
) -> Result<EdgeReport, ExplorerError> {
    let point = (boundary.inside.cell.a, boundary.inside.cell.b);
    if template.p.is_zero() || template.q.is_zero() {
        return Ok(not_applicable(point, "a weight vanishes identically, so no edge exists"));
    }
    if ladder.is_empty() || ladder.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(ExplorerError::DomainError("r_max ladder must be nonempty and positive"));
    }
    let prob = template.with_central(point.0, point.1)?;
    let cfg = SolverConfig { value_cap: boundary.value_cap, ..*cfg };
    let mut notes = Vec::new();
    let mut rungs = Vec::with_capacity(ladder.len());
    let mut best = None;
    for &r_max in ladder {
        let sol = radial_solver::picard_solve(&prob, r_max, &cfg)?;
        let c = radial_solver::classification_of(&sol);
        rungs.push(Rung { r_max, verdict: c.verdict, terminal: c.terminal });
        if c.verdict == Verdict::Entire {
            best = Some(sol);
        }
    }
    let all_entire = rungs.iter().all(|r| r.verdict == Verdict::Entire);
    let growth_pass = all_entire
        && rungs
            .windows(2)
            .all(|w| w[1].r_max > w[0].r_max && w[1].terminal.0 > w[0].terminal.0 && w[1].terminal.1 > w[0].terminal.1);
    if !all_entire {
        notes.push(String::from("inside point is not entire on every rung"));
    }

    let big_r = boundary.outside.cell.r_est();
    let mut constants = None;
    let mut truncated = false;
    let mut bounds = Vec::new();
    match (big_r, &best) {
        (None, _) => notes.push(String::from("outside end has no blow-up radius; bounds skipped")),
        (_, None) => notes.push(String::from("no entire run to test the bounds on")),
        (Some(big_r), Some(sol)) => {
            let reach = radii.iter().copied().fold(big_r, f64::max);
            let p_pot = weights::potential(&prob.p, prob.dimension, reach, &cfg.quad)?;
            let q_pot = weights::potential(&prob.q, prob.dimension, reach, &cfg.quad)?;
            let c = match ForcingConstants::new(&prob, &cfg.quad) {
                Ok(c) => c,
                Err(BarrierError::DivergentPotential { .. }) => {
                    truncated = true;
                    ForcingConstants::truncated(&prob, &p_pot, &q_pot, big_r)?
                }
                Err(e) => return Err(e.into()),
            };
            constants = Some(c);
            // the bounds fall far below the central values; widen the table floor
            let t_min = 1e-3 * point.0.min(point.1).min(1.0);
            let phi = transform::build_transform(&prob.f, &prob.g, TransformKind::Phi, t_min, 1e6, DEFAULT_NODES, &cfg.quad)?;
            let psi = transform::build_transform(&prob.f, &prob.g, TransformKind::Psi, t_min, 1e6, DEFAULT_NODES, &cfg.quad)?;
            for &r in radii {
                if r > big_r || r > sol.r_term() {
                    notes.push(alloc::format!("radius {r} lies beyond R or the run"));
                    continue;
                }
                let bound = barrier::largeness_lower_bound(&c, &phi, &psi, &p_pot, &q_pot, big_r, r)?;
                let solution = sol.eval_at(r).expect("r within the run");
                let pass = match (bound_ok(solution.0, &bound.u), bound_ok(solution.1, &bound.v)) {
                    (None, None) => None,
                    (x, y) => Some(x.unwrap_or(true) && y.unwrap_or(true)),
                };
                if pass.is_none() {
                    notes.push(alloc::format!("bounds at r = {r} are vacuous"));
                }
                bounds.push(BoundCheck { r, solution, bound, pass });
            }
        }
    }
    let bounds_fail = bounds.iter().any(|b| b.pass == Some(false));
    let status = if !growth_pass || bounds_fail {
        if all_entire {
            ProbeStatus::Fail
        } else {
            ProbeStatus::Inconclusive
        }
    } else {
        ProbeStatus::Pass
    };
    Ok(EdgeReport {
        status,
        point,
        rungs,
        growth_pass,
        big_r,
        constants,
        truncated,
        bounds,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub rungs: Vec<Rung>,
    /// Largest absolute terminal change between the last two rungs.
    pub change: f64,
    pub saturated: bool,
}

/// Negative control: a deep-interior point whose terminal values settle.
pub fn saturation_probe(prob: &ProblemDef, ladder: &[f64], value_cap: f64, cfg: &SolverConfig) -> Result<SaturationReport, ExplorerError> {
    if ladder.len() < 2 {
        return Err(ExplorerError::DomainError("ladder needs two rungs"));
    }
    let mut rungs = Vec::with_capacity(ladder.len());
    for &r_max in ladder {
        let c = radial_solver::classify(prob, r_max, value_cap, cfg)?;
        rungs.push(Rung { r_max, verdict: c.verdict, terminal: c.terminal });
    }
    let (x, y) = (rungs[rungs.len() - 2], rungs[rungs.len() - 1]);
    let change = (y.terminal.0 - x.terminal.0).abs().max((y.terminal.1 - x.terminal.1).abs());
    let saturated = rungs.iter().all(|r| r.verdict == Verdict::Entire) && change < SATURATION_TOL;
    Ok(SaturationReport { rungs, change, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::NonlinearitySpec;
    use crate::weights::WeightSpec;

    fn zero_weights() -> ProblemDef {
        let pw = NonlinearitySpec::power(2.0).unwrap();
        ProblemDef::new(3, pw.clone(), pw, WeightSpec::zero(), WeightSpec::zero(), 0.0, 0.0).unwrap()
    }

    #[test]
    fn grid_hits_the_corners() {
        let g = Rectangle::new(0.1, 10.0, 1.0, 2.0).unwrap().grid(3, 2);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], (0.1, 1.0));
        assert_eq!(g[2], (10.0, 1.0));
        assert_eq!(g[5], (10.0, 2.0));
    }

    #[test]
    fn bad_inputs() {
        assert!(Rectangle::new(1.0, 0.5, 0.0, 1.0).is_err());
        assert!(Rectangle::new(-1.0, 0.5, 0.0, 1.0).is_err());
        let r = Rectangle::square(0.0, 1.0).unwrap();
        let cfg = SolverConfig::default();
        assert_eq!(
            sweep(&zero_weights(), &r, (1, 4), 10.0, 1e8, &cfg),
            Err(ExplorerError::InvalidResolution(1, 4))
        );
        let ray = Ray::new((1.0, 1.0), (1.0, 1.0));
        assert!(matches!(
            trace_boundary(&zero_weights(), &ray, 1e-3, 10.0, 1e8, &cfg),
            Err(ExplorerError::DomainError(_))
        ));
    }

    #[test]
    fn geometric_sequence_converges() {
        let s = geometric_approach((0.0, 0.0), (1.0, 2.0), 0.5, 4);
        assert_eq!(s, alloc::vec![(0.0, 0.0), (0.5, 1.0), (0.75, 1.5), (0.875, 1.75)]);
    }

    #[test]
    fn zero_weights_have_no_edge() {
        let cfg = SolverConfig::default();
        let ray = Ray::new((0.1, 0.1), (10.0, 10.0));
        assert_eq!(
            trace_boundary(&zero_weights(), &ray, 1e-3, 10.0, 1e8, &cfg),
            Err(ExplorerError::NoBracket { origin: VerdictKind::Entire, end: VerdictKind::Entire })
        );
    }
}
