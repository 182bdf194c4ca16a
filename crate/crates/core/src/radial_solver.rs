//! Radial solutions through the integral formulation
//!
//! ```text
//! u(r) = a + ∫_0^r t^{1-n} ∫_0^t s^{n-1} p(s) g(v(s)) ds dt
//! v(r) = b + ∫_0^r t^{1-n} ∫_0^t s^{n-1} q(s) f(u(s)) ds dt
//! ```
//!
//! On a cell `[r0, r1]` the source `σ = g(v)` is interpolated linearly while
//! the weight and the kernel of the double integral are integrated by a
//! ten-point Gauss rule, giving
//!
//! ```text
//! u1 = u0 + u0'·K0 + A σ0 + B σ1,    u1' = (r0/r1)^{n-1} u0' + C σ0 + D σ1
//! ```
//!
//! which is exact for constant sources and second order otherwise. The
//! solver first runs the monotone Picard iteration from the constant pair
//! `(a, b)` on a grid that is refined until no cell grows by more than the
//! growth limit. If the iterates escape (or fail to settle) it switches to a
//! marching continuation that advances node by node with a step that shrinks
//! as the solution grows, which is how finite-radius blow-up is detected.

use alloc::vec::Vec;

use crate::interp;
use crate::math;
use crate::nonlinearity::NonlinearitySpec;
use crate::quad::{self, Extended, QuadratureConfig};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("dimension must be at least 3, got {0}")]
    InvalidDimension(u32),
    #[error("central value {name} = {value} must be finite and nonnegative")]
    InvalidCentralValue { name: &'static str, value: f64 },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("initial data ({a1}, {b1}) and ({a2}, {b2}) are not componentwise ordered")]
    NotOrdered { a1: f64, b1: f64, a2: f64, b2: f64 },
}

/// A radial system `y_k'' + (n-1)/r y_k' = w_k(r) σ_k(y)`, `k = 0, 1`, with
/// nonnegative weights and nondecreasing sources.
pub trait RadialSystem {
    fn dimension(&self) -> u32;
    fn central(&self) -> [f64; 2];
    fn weights(&self, r: f64) -> [f64; 2];
    fn sources(&self, y: [f64; 2]) -> [f64; 2];
    /// A positive quantity that decreases to zero as component `k` grows
    /// without bound, used to extrapolate the blow-up radius.
    fn gauge(&self, _k: usize, y: f64, _quad: &QuadratureConfig) -> f64 {
        1.0 / y
    }
}

/// The coupled problem `Δu = p g(v)`, `Δv = q f(u)` with central values.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDef {
    pub dimension: u32,
    pub f: NonlinearitySpec,
    pub g: NonlinearitySpec,
    pub p: WeightSpec,
    pub q: WeightSpec,
    pub a: f64,
    pub b: f64,
}

impl ProblemDef {
    pub fn new(
        dimension: u32,
        f: NonlinearitySpec,
        g: NonlinearitySpec,
        p: WeightSpec,
        q: WeightSpec,
        a: f64,
        b: f64,
    ) -> Result<Self, SolverError> {
        if dimension < 3 {
            return Err(SolverError::InvalidDimension(dimension));
        }
        for (name, value) in [("a", a), ("b", b)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(SolverError::InvalidCentralValue { name, value });
            }
        }
        Ok(Self {
            dimension,
            f,
            g,
            p,
            q,
            a,
            b,
        })
    }

    /// The same problem with central values `(a, b)`.
    pub fn with_central(&self, a: f64, b: f64) -> Result<Self, SolverError> {
        Self::new(self.dimension, self.f.clone(), self.g.clone(), self.p.clone(), self.q.clone(), a, b)
    }

    /// `(f, p, a) ↔ (g, q, b)`.
    pub fn swapped(&self) -> Self {
        Self {
            dimension: self.dimension,
            f: self.g.clone(),
            g: self.f.clone(),
            p: self.q.clone(),
            q: self.p.clone(),
            a: self.b,
            b: self.a,
        }
    }
}

impl RadialSystem for ProblemDef {
    fn dimension(&self) -> u32 {
        self.dimension
    }

    fn central(&self) -> [f64; 2] {
        [self.a, self.b]
    }

    fn weights(&self, r: f64) -> [f64; 2] {
        [self.p.eval(r), self.q.eval(r)]
    }

    fn sources(&self, y: [f64; 2]) -> [f64; 2] {
        [self.g.eval(y[1]), self.f.eval(y[0])]
    }

    /// `Φ(u)` for `k = 0`, `Ψ(v)` for `k = 1`.
    fn gauge(&self, k: usize, y: f64, quad: &QuadratureConfig) -> f64 {
        let (inner, outer) = if k == 0 { (&self.f, &self.g) } else { (&self.g, &self.f) };
        match quad::integrate_to_infinity(|s| 1.0 / outer.eval(inner.eval(s)), y, quad) {
            Extended::Finite(v) if v > 0.0 => v,
            _ => 1.0 / y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Initial (and largest) grid step.
    pub base_step: f64,
    /// Relative sup-norm change `|Δ|/max(1, |y|)` that ends the Picard iteration.
    pub fixed_point_tol: f64,
    pub max_iters: usize,
    pub value_cap: f64,
    /// Largest accepted relative growth of either component, or of either
    /// source term, over one cell.
    pub growth_limit: f64,
    pub max_refinements: usize,
    pub max_nodes: usize,
    pub quad: QuadratureConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            base_step: 0.05,
            fixed_point_tol: 1e-10,
            max_iters: 200,
            value_cap: 1e8,
            growth_limit: 0.05,
            max_refinements: 40,
            max_nodes: 400_000,
            quad: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveStatus {
    ReachedRmax,
    BlowUpDetected { r_est: f64 },
    IterationFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Picard,
    Marching,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub phase: Phase,
    /// Picard sweeps on the final grid (all sweeps when the iteration escaped).
    pub iterations: usize,
    pub refinements: usize,
    /// Relative sup-norm distance between the returned pair and its image
    /// under one more sweep (Picard phase only).
    pub residual: f64,
    /// Smallest `y^{k+1} - y^k` over all sweeps and nodes.
    pub min_increment: f64,
    /// Rejected marching steps.
    pub rejected_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
    pub status: SolveStatus,
    pub value_cap: f64,
    pub diagnostics: Diagnostics,
}

impl RadialSolution {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r_term(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn terminal(&self) -> (f64, f64) {
        let k = self.r.len() - 1;
        (self.u[k], self.v[k])
    }

    /// `(u(r), v(r))` by monotone cubic Hermite interpolation, for
    /// `0 <= r <= r_term`.
    pub fn eval_at(&self, r: f64) -> Option<(f64, f64)> {
        if !(0.0..=self.r_term()).contains(&r) {
            return None;
        }
        let i = interp::locate(&self.r, r);
        let (x0, x1) = (self.r[i], self.r[i + 1]);
        let one = |y: &[f64], d: &[f64]| {
            let (d0, d1) = interp::limit_slopes(x0, x1, y[i], y[i + 1], d[i], d[i + 1]);
            interp::hermite(x0, x1, y[i], y[i + 1], d0, d1, r)
        };
        Some((one(&self.u, &self.du), one(&self.v, &self.dv)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Entire,
    FiniteBlowUp { r_est: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub r_term: f64,
    pub terminal: (f64, f64),
    pub diagnostics: Diagnostics,
}

/// Weights of one cell for both components.
#[derive(Debug, Clone, Copy)]
struct Cell {
    k0: f64,
    decay: f64,
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

impl Cell {
    fn new<S: RadialSystem>(sys: &S, r0: f64, r1: f64) -> Self {
        let n = sys.dimension() as f64;
        let h = r1 - r0;
        let k0 = r0 * math::one_minus_ratio_pow(r0, r1, n - 2.0) / (n - 2.0);
        let decay = if r0 > 0.0 { math::powf(r0 / r1, n - 1.0) } else { 0.0 };
        let mut cell = Self {
            k0,
            decay,
            a: [0.0; 2],
            b: [0.0; 2],
            c: [0.0; 2],
            d: [0.0; 2],
        };
        let (mid, half) = (0.5 * (r0 + r1), 0.5 * h);
        for (x, wt) in quad::gauss10_nodes() {
            let s = mid + half * x;
            let w = sys.weights(s);
            // kernel of the double integral: s (1 - (s/r1)^{n-2}) / (n-2)
            let kernel = s * math::one_minus_ratio_pow(s, r1, n - 2.0) / (n - 2.0);
            let rho = math::powf(s / r1, n - 1.0);
            let (left, right) = ((r1 - s) / h, (s - r0) / h);
            for k in 0..2 {
                let m = half * wt * w[k];
                cell.a[k] += m * kernel * left;
                cell.b[k] += m * kernel * right;
                cell.c[k] += m * rho * left;
                cell.d[k] += m * rho * right;
            }
        }
        cell
    }

    /// Advance component `k` given its source values at both ends.
    #[inline]
    fn advance(&self, k: usize, y0: f64, d0: f64, s0: f64, s1: f64) -> (f64, f64) {
        (
            y0 + d0 * self.k0 + self.a[k] * s0 + self.b[k] * s1,
            self.decay * d0 + self.c[k] * s0 + self.d[k] * s1,
        )
    }
}

#[derive(Debug, Clone, Default)]
struct Profile {
    y: [Vec<f64>; 2],
    dy: [Vec<f64>; 2],
}

impl Profile {
    fn constant(len: usize, c: [f64; 2]) -> Self {
        Self {
            y: [alloc::vec![c[0]; len], alloc::vec![c[1]; len]],
            dy: [alloc::vec![0.0; len], alloc::vec![0.0; len]],
        }
    }
}

#[inline]
fn rel_change(new: f64, old: f64) -> f64 {
    (new - old).abs() / old.abs().max(1.0)
}

/// Scales below which growth is measured absolutely.
#[derive(Debug, Clone, Copy)]
struct Floors {
    value: f64,
    source: f64,
    /// Above this value only the values themselves limit the step; the
    /// sources of a blowing-up solution grow too fast to be resolved in `r`.
    source_ceiling: f64,
}

impl Floors {
    fn new<S: RadialSystem>(sys: &S, cap: f64) -> Self {
        let c = sys.central();
        let s = sys.sources(c);
        Self {
            value: (1e-3 * c[0].max(c[1])).max(f64::MIN_POSITIVE),
            source: (1e-3 * s[0].max(s[1])).max(f64::MIN_POSITIVE),
            source_ceiling: math::sqrt(cap),
        }
    }

    /// Largest relative growth of a value or a source over one step.
    fn growth(&self, y0: [f64; 2], y1: [f64; 2], s0: [f64; 2], s1: [f64; 2]) -> f64 {
        let mut g: f64 = 0.0;
        for k in 0..2 {
            g = g.max((y1[k] - y0[k]) / y0[k].max(self.value));
        }
        if y0[0].max(y0[1]) < self.source_ceiling {
            for k in 0..2 {
                g = g.max((s1[k] - s0[k]) / s0[k].max(self.source));
            }
        }
        g
    }
}

enum PicardOutcome {
    Converged { iterations: usize, residual: f64, min_increment: f64 },
    Escaped { iterations: usize, min_increment: f64 },
}

struct Grid {
    r: Vec<f64>,
    cells: Vec<Cell>,
}

impl Grid {
    fn new<S: RadialSystem>(sys: &S, r: Vec<f64>) -> Self {
        let cells = r.windows(2).map(|c| Cell::new(sys, c[0], c[1])).collect();
        Self { r, cells }
    }

    /// One application of the integral operator to `old`.
    fn sweep<S: RadialSystem>(&self, sys: &S, old: &Profile, out: &mut Profile) {
        let len = self.r.len();
        let c = sys.central();
        let mut src = [alloc::vec![0.0; len], alloc::vec![0.0; len]];
        for i in 0..len {
            let s = sys.sources([old.y[0][i], old.y[1][i]]);
            src[0][i] = s[0];
            src[1][i] = s[1];
        }
        for k in 0..2 {
            out.y[k].resize(len, 0.0);
            out.dy[k].resize(len, 0.0);
            out.y[k][0] = c[k];
            out.dy[k][0] = 0.0;
            for (i, cell) in self.cells.iter().enumerate() {
                let (y1, d1) = cell.advance(k, out.y[k][i], out.dy[k][i], src[k][i], src[k][i + 1]);
                out.y[k][i + 1] = y1;
                out.dy[k][i + 1] = d1;
            }
        }
    }

    fn picard<S: RadialSystem>(&self, sys: &S, cfg: &SolverConfig, prof: &mut Profile) -> PicardOutcome {
        let len = self.r.len();
        let mut cur = Profile::constant(len, sys.central());
        let mut next = Profile::default();
        let mut min_increment = f64::INFINITY;
        for it in 1..=cfg.max_iters {
            self.sweep(sys, &cur, &mut next);
            let mut change: f64 = 0.0;
            let mut escaped = false;
            for k in 0..2 {
                for i in 0..len {
                    let (a, b) = (next.y[k][i], cur.y[k][i]);
                    if !(a.is_finite() && next.dy[k][i].is_finite()) || a > cfg.value_cap {
                        escaped = true;
                        continue;
                    }
                    min_increment = min_increment.min(a - b);
                    change = change.max(rel_change(a, b));
                }
            }
            core::mem::swap(&mut cur, &mut next);
            if escaped {
                return PicardOutcome::Escaped {
                    iterations: it,
                    min_increment,
                };
            }
            if change < cfg.fixed_point_tol {
                self.sweep(sys, &cur, &mut next);
                let mut residual: f64 = 0.0;
                for k in 0..2 {
                    for i in 0..len {
                        residual = residual.max(rel_change(next.y[k][i], cur.y[k][i]));
                    }
                }
                *prof = cur;
                return PicardOutcome::Converged {
                    iterations: it,
                    residual,
                    min_increment,
                };
            }
        }
        PicardOutcome::Escaped {
            iterations: cfg.max_iters,
            min_increment,
        }
    }
}

fn uniform_grid(r_max: f64, step: f64) -> Vec<f64> {
    let cells = math::ceil(r_max / step).max(1.0) as usize;
    let mut r: Vec<f64> = (0..=cells).map(|i| r_max * i as f64 / cells as f64).collect();
    r[cells] = r_max;
    r
}

/// Cells whose growth exceeds the limit are split in two.
fn refine<S: RadialSystem>(sys: &S, r: &[f64], prof: &Profile, limit: f64, floors: Floors) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(r.len() + r.len() / 4);
    let mut split = false;
    out.push(r[0]);
    let at = |i: usize| [prof.y[0][i], prof.y[1][i]];
    let mut s0 = sys.sources(at(0));
    for i in 0..r.len() - 1 {
        let s1 = sys.sources(at(i + 1));
        let gr = floors.growth(at(i), at(i + 1), s0, s1);
        s0 = s1;
        if gr > limit {
            out.push(0.5 * (r[i] + r[i + 1]));
            split = true;
        }
        out.push(r[i + 1]);
    }
    split.then_some(out)
}

fn picard_phase<S: RadialSystem>(sys: &S, r_max: f64, cfg: &SolverConfig) -> Result<RadialSolution, Diagnostics> {
    let floors = Floors::new(sys, cfg.value_cap);
    let mut r = uniform_grid(r_max, cfg.base_step);
    let mut refinements = 0;
    let mut total_iterations = 0;
    let mut min_seen = f64::INFINITY;
    loop {
        let grid = Grid::new(sys, r);
        let mut prof = Profile::default();
        match grid.picard(sys, cfg, &mut prof) {
            PicardOutcome::Escaped {
                iterations,
                min_increment,
            } => {
                return Err(Diagnostics {
                    phase: Phase::Picard,
                    iterations: total_iterations + iterations,
                    refinements,
                    residual: f64::NAN,
                    min_increment: min_seen.min(min_increment),
                    rejected_steps: 0,
                })
            }
            PicardOutcome::Converged {
                iterations,
                residual,
                min_increment,
            } => {
                total_iterations += iterations;
                min_seen = min_seen.min(min_increment);
                let finer = if refinements < cfg.max_refinements && grid.r.len() < cfg.max_nodes {
                    refine(sys, &grid.r, &prof, cfg.growth_limit, floors)
                } else {
                    None
                };
                match finer {
                    Some(next) => {
                        refinements += 1;
                        r = next;
                    }
                    None => {
                        let Profile { y: [u, v], dy: [du, dv] } = prof;
                        return Ok(RadialSolution {
                            r: grid.r,
                            u,
                            v,
                            du,
                            dv,
                            status: SolveStatus::ReachedRmax,
                            value_cap: cfg.value_cap,
                            diagnostics: Diagnostics {
                                phase: Phase::Picard,
                                iterations,
                                refinements,
                                residual,
                                min_increment: min_seen,
                                rejected_steps: 0,
                            },
                        });
                    }
                }
            }
        }
    }
}

const NODE_TOL: f64 = 1e-14;
const NODE_MAX_ITERS: usize = 60;
const MIN_STEP_REL: f64 = 1e-15;

/// Solve the implicit node equations of one marching step.
#[allow(clippy::too_many_arguments)]
fn march_step<S: RadialSystem>(
    sys: &S,
    cell: &Cell,
    y0: [f64; 2],
    d0: [f64; 2],
    s0: [f64; 2],
) -> Option<([f64; 2], [f64; 2], [f64; 2])> {
    let mut s1 = s0;
    let mut y1 = [0.0; 2];
    let mut d1 = [0.0; 2];
    for _ in 0..NODE_MAX_ITERS {
        for k in 0..2 {
            let (y, d) = cell.advance(k, y0[k], d0[k], s0[k], s1[k]);
            y1[k] = y;
            d1[k] = d;
        }
        if !(y1[0].is_finite() && y1[1].is_finite()) {
            return None;
        }
        let next = sys.sources(y1);
        if !(next[0].is_finite() && next[1].is_finite()) {
            return None;
        }
        let settled = (0..2).all(|k| (next[k] - s1[k]).abs() <= NODE_TOL * next[k].abs());
        s1 = next;
        if settled {
            for k in 0..2 {
                let (y, d) = cell.advance(k, y0[k], d0[k], s0[k], s1[k]);
                y1[k] = y;
                d1[k] = d;
            }
            return Some((y1, d1, s1));
        }
    }
    None
}

fn marching_phase<S: RadialSystem>(sys: &S, r_max: f64, cfg: &SolverConfig, picard: Diagnostics) -> RadialSolution {
    let c = sys.central();
    let floors = Floors::new(sys, cfg.value_cap);
    let h_max = cfg.base_step.min(r_max);
    let mut h = h_max;
    let mut r = alloc::vec![0.0];
    let mut ys = [alloc::vec![c[0]], alloc::vec![c[1]]];
    let mut ds = [alloc::vec![0.0], alloc::vec![0.0]];
    let mut src = sys.sources(c);
    let mut rejected = 0;
    let status = loop {
        let i = r.len() - 1;
        let r0 = r[i];
        let y0 = [ys[0][i], ys[1][i]];
        if y0[0].min(y0[1]) >= cfg.value_cap {
            break SolveStatus::BlowUpDetected { r_est: 0.0 };
        }
        if r0 >= r_max || r.len() >= cfg.max_nodes {
            break if r0 >= r_max {
                SolveStatus::ReachedRmax
            } else {
                SolveStatus::IterationFailed
            };
        }
        if h < MIN_STEP_REL * r0.max(1.0) {
            break SolveStatus::IterationFailed;
        }
        let r1 = if r0 + h >= r_max * (1.0 - 1e-12) { r_max } else { r0 + h };
        let cell = Cell::new(sys, r0, r1);
        let d0 = [ds[0][i], ds[1][i]];
        let step = march_step(sys, &cell, y0, d0, src);
        let Some((y1, d1, s1)) = step else {
            rejected += 1;
            h *= 0.5;
            continue;
        };
        let gr = floors.growth(y0, y1, src, s1);
        if gr > cfg.growth_limit {
            rejected += 1;
            h *= 0.5;
            continue;
        }
        r.push(r1);
        for k in 0..2 {
            ys[k].push(y1[k]);
            ds[k].push(d1[k]);
        }
        src = s1;
        if gr < 0.2 * cfg.growth_limit {
            h = (2.0 * h).min(h_max);
        }
    };
    let [u, v] = ys;
    let [du, dv] = ds;
    let mut sol = RadialSolution {
        r,
        u,
        v,
        du,
        dv,
        status,
        value_cap: cfg.value_cap,
        diagnostics: Diagnostics {
            phase: Phase::Marching,
            rejected_steps: rejected,
            ..picard
        },
    };
    if let SolveStatus::BlowUpDetected { .. } = sol.status {
        sol.status = SolveStatus::BlowUpDetected {
            r_est: estimate_blowup_radius(sys, &sol, r_max, &cfg.quad),
        };
    }
    sol
}

/// Root of the least-squares line through the gauge over the last decade
/// of growth, averaged over both components and clamped to `[r_term, r_max]`.
fn estimate_blowup_radius<S: RadialSystem>(sys: &S, sol: &RadialSolution, r_max: f64, quad: &QuadratureConfig) -> f64 {
    let r_term = sol.r_term();
    let root = |k: usize, ys: &[f64]| {
        let top = ys[ys.len() - 1];
        let (xs, gs): (Vec<f64>, Vec<f64>) = sol
            .r
            .iter()
            .zip(ys)
            .filter(|(_, &y)| y >= 0.1 * top)
            .map(|(&r, &y)| (r, sys.gauge(k, y, quad)))
            .unzip();
        match math::linear_fit(&xs, &gs) {
            Some((slope, intercept)) if slope < 0.0 => (-intercept / slope).clamp(r_term, r_max),
            _ => r_term,
        }
    };
    0.5 * (root(0, &sol.u) + root(1, &sol.v))
}

/// Solve any [`RadialSystem`] on `[0, r_max]`.
pub fn solve_system<S: RadialSystem>(sys: &S, r_max: f64, cfg: &SolverConfig) -> Result<RadialSolution, SolverError> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(SolverError::InvalidRadius(r_max));
    }
    Ok(match picard_phase(sys, r_max, cfg) {
        Ok(sol) => sol,
        Err(diag) => marching_phase(sys, r_max, cfg, diag),
    })
}

pub fn picard_solve(prob: &ProblemDef, r_max: f64, cfg: &SolverConfig) -> Result<RadialSolution, SolverError> {
    solve_system(prob, r_max, cfg)
}

pub fn classification_of(sol: &RadialSolution) -> Classification {
    let terminal = sol.terminal();
    let verdict = match sol.status {
        SolveStatus::ReachedRmax if terminal.0 < sol.value_cap && terminal.1 < sol.value_cap => Verdict::Entire,
        SolveStatus::BlowUpDetected { r_est } => Verdict::FiniteBlowUp { r_est },
        _ => Verdict::Inconclusive,
    };
    Classification {
        verdict,
        r_term: sol.r_term(),
        terminal,
        diagnostics: sol.diagnostics,
    }
}

pub fn classify(prob: &ProblemDef, r_max: f64, value_cap: f64, cfg: &SolverConfig) -> Result<Classification, SolverError> {
    let cfg = SolverConfig { value_cap, ..*cfg };
    Ok(classification_of(&picard_solve(prob, r_max, &cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Pass,
    Fail,
    NotApplicable,
}

pub const CONSISTENCY_EPS: f64 = 1e-6;

/// Both components must be at the cap when blow-up is reported.
pub fn blowup_consistency(sol: &RadialSolution) -> Consistency {
    match sol.status {
        SolveStatus::BlowUpDetected { .. } => {
            let (u, v) = sol.terminal();
            let level = sol.value_cap * (1.0 - CONSISTENCY_EPS);
            if u >= level && v >= level {
                Consistency::Pass
            } else {
                Consistency::Fail
            }
        }
        _ => Consistency::NotApplicable,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheck {
    pub pass: bool,
    /// Largest `y_1 - y_2` (relative to `max(1, |y_2|)`) over the common range.
    pub max_violation: f64,
    pub lower: RadialSolution,
    pub upper: RadialSolution,
}

pub const ORDER_TOL: f64 = 1e-9;

/// Solve from `lower <= upper` and check `u_1 <= u_2`, `v_1 <= v_2`.
pub fn initial_data_monotonicity(
    prob: &ProblemDef,
    lower: (f64, f64),
    upper: (f64, f64),
    r_max: f64,
    cfg: &SolverConfig,
) -> Result<OrderCheck, SolverError> {
    if !(lower.0 <= upper.0 && lower.1 <= upper.1) {
        return Err(SolverError::NotOrdered {
            a1: lower.0,
            b1: lower.1,
            a2: upper.0,
            b2: upper.1,
        });
    }
    let s1 = picard_solve(&prob.with_central(lower.0, lower.1)?, r_max, cfg)?;
    let s2 = picard_solve(&prob.with_central(upper.0, upper.1)?, r_max, cfg)?;
    let common = s1.r_term().min(s2.r_term());
    let mut max_violation = f64::NEG_INFINITY;
    for grid in [&s1.r, &s2.r] {
        for &r in grid.iter().filter(|&&r| r <= common) {
            let (Some(y1), Some(y2)) = (s1.eval_at(r), s2.eval_at(r)) else {
                continue;
            };
            max_violation = max_violation
                .max((y1.0 - y2.0) / y2.0.abs().max(1.0))
                .max((y1.1 - y2.1) / y2.1.abs().max(1.0));
        }
    }
    Ok(OrderCheck {
        pass: max_violation <= ORDER_TOL,
        max_violation,
        lower: s1,
        upper: s2,
    })
}
