//! Nonlinearities `f`, `g`: evaluation, hypothesis checks and the
//! Keller–Osserman type integrals built from their compositions.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::interp;
use crate::math;
use crate::quad::{self, Extended, QuadratureConfig};

/// Absolute tolerance for `f(0) = 0`.
pub const ZERO_TOL: f64 = 1e-12;
/// Default relative slack for `f(sr) <= f(s) f(r)`.
pub const F2_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("table needs at least two points")]
    TableTooShort,
    #[error("table abscissae must be strictly increasing and nonnegative (at index {index})")]
    TableNotSorted { index: usize },
    #[error("table entry {index} is not finite")]
    TableNonFinite { index: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NonlinearityError {
    #[error("evaluation at {input} returned a non-finite value")]
    Evaluation { input: f64 },
    #[error("sample grid must be nonempty, sorted and positive")]
    InvalidGrid,
    #[error("inner integral of the composition vanishes at t = {t}")]
    DegenerateInner { t: f64 },
}

/// Monotone piecewise-cubic table with linear extrapolation of the end chords.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneTable {
    pub fn new(points: &[(f64, f64)]) -> Result<Self, SpecError> {
        if points.len() < 2 {
            return Err(SpecError::TableTooShort);
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(SpecError::TableNonFinite { index: i });
            }
            if x < 0.0 || (i > 0 && x <= points[i - 1].0) {
                return Err(SpecError::TableNotSorted { index: i });
            }
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slopes = interp::pchip_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Largest tabulated abscissa; evaluation beyond it extrapolates.
    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn eval(&self, s: f64) -> f64 {
        let n = self.xs.len();
        if s < self.xs[0] {
            let chord = (self.ys[1] - self.ys[0]) / (self.xs[1] - self.xs[0]);
            return self.ys[0] + chord * (s - self.xs[0]);
        }
        if s > self.xs[n - 1] {
            let chord = (self.ys[n - 1] - self.ys[n - 2]) / (self.xs[n - 1] - self.xs[n - 2]);
            return self.ys[n - 1] + chord * (s - self.xs[n - 1]);
        }
        let i = interp::locate(&self.xs, s);
        interp::hermite(
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.slopes[i],
            self.slopes[i + 1],
            s,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearityFamily {
    /// `s^θ`
    Power { theta: f64 },
    /// `Σ c_k s^{θ_k}`
    PowerSum { terms: Vec<(f64, f64)> },
    /// `e^s - 1`
    ExpMinusOne,
    Tabulated(MonotoneTable),
}

/// A nonlinearity `f: [0, ∞) → [0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearitySpec {
    family: NonlinearityFamily,
}

impl NonlinearitySpec {
    pub fn power(theta: f64) -> Result<Self, SpecError> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(SpecError::InvalidParameter {
                name: "theta",
                requirement: "finite and positive",
                value: theta,
            });
        }
        Ok(Self {
            family: NonlinearityFamily::Power { theta },
        })
    }

    pub fn power_sum(terms: Vec<(f64, f64)>) -> Result<Self, SpecError> {
        if terms.is_empty() {
            return Err(SpecError::TableTooShort);
        }
        for &(c, theta) in &terms {
            if !(c.is_finite() && c > 0.0) {
                return Err(SpecError::InvalidParameter {
                    name: "coefficient",
                    requirement: "finite and positive",
                    value: c,
                });
            }
            if !(theta.is_finite() && theta > 0.0) {
                return Err(SpecError::InvalidParameter {
                    name: "theta",
                    requirement: "finite and positive",
                    value: theta,
                });
            }
        }
        Ok(Self {
            family: NonlinearityFamily::PowerSum { terms },
        })
    }

    pub fn exp_minus_one() -> Self {
        Self {
            family: NonlinearityFamily::ExpMinusOne,
        }
    }

    pub fn table(points: &[(f64, f64)]) -> Result<Self, SpecError> {
        Ok(Self {
            family: NonlinearityFamily::Tabulated(MonotoneTable::new(points)?),
        })
    }

    pub fn family(&self) -> &NonlinearityFamily {
        &self.family
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.family, NonlinearityFamily::Tabulated(_))
    }

    /// True when `s` lies beyond the tabulated range and is extrapolated.
    pub fn extrapolates(&self, s: f64) -> bool {
        match &self.family {
            NonlinearityFamily::Tabulated(t) => s > t.x_max(),
            _ => false,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.family {
            NonlinearityFamily::Power { theta } => math::powf(s.max(0.0), *theta),
            NonlinearityFamily::PowerSum { terms } => {
                let s = s.max(0.0);
                terms.iter().map(|&(c, th)| c * math::powf(s, th)).sum()
            }
            NonlinearityFamily::ExpMinusOne => math::expm1(s),
            NonlinearityFamily::Tabulated(t) => t.eval(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match &self.family {
            NonlinearityFamily::Power { theta } => theta * math::powf(s, theta - 1.0),
            NonlinearityFamily::PowerSum { terms } => {
                terms.iter().map(|&(c, th)| c * th * math::powf(s, th - 1.0)).sum()
            }
            NonlinearityFamily::ExpMinusOne => math::exp(s),
            NonlinearityFamily::Tabulated(t) => {
                let h = 1e-6 * s.max(1.0);
                let lo = (s - h).max(0.0);
                let hi = s + h;
                (t.eval(hi) - t.eval(lo)) / (hi - lo)
            }
        }
    }
}

/// First failure found by [`check_f1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum F1Violation {
    NonzeroAtOrigin { value: f64 },
    NotPositive { s: f64, value: f64 },
    /// `f(to.0) < f(from.0)` for consecutive grid points.
    Decreasing { from: (f64, f64), to: (f64, f64) },
    NegativeDerivative { s: f64, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Outcome {
    pub violation: Option<F1Violation>,
}

impl F1Outcome {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

fn finite(spec: &NonlinearitySpec, s: f64) -> Result<f64, NonlinearityError> {
    let y = spec.eval(s);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(NonlinearityError::Evaluation { input: s })
    }
}

/// Continuity-free part of (F1) on a sample grid: `f(0) = 0`, positivity and
/// monotonicity across consecutive samples, nonnegative derivative.
pub fn check_f1(spec: &NonlinearitySpec, grid: &[f64]) -> Result<F1Outcome, NonlinearityError> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(NonlinearityError::InvalidGrid);
    }
    let f0 = finite(spec, 0.0)?;
    if f0.abs() > ZERO_TOL {
        return Ok(F1Outcome {
            violation: Some(F1Violation::NonzeroAtOrigin { value: f0 }),
        });
    }
    let mut prev: Option<(f64, f64)> = None;
    for &s in grid {
        let y = finite(spec, s)?;
        if y <= 0.0 {
            return Ok(F1Outcome {
                violation: Some(F1Violation::NotPositive { s, value: y }),
            });
        }
        if let Some(p) = prev {
            if y < p.1 {
                return Ok(F1Outcome {
                    violation: Some(F1Violation::Decreasing { from: p, to: (s, y) }),
                });
            }
        }
        let d = spec.derivative(s);
        if d.is_finite() && d < 0.0 {
            return Ok(F1Outcome {
                violation: Some(F1Violation::NegativeDerivative { s, value: d }),
            });
        }
        prev = Some((s, y));
    }
    Ok(F1Outcome { violation: None })
}

/// Worst violation of `f(sr) <= f(s) f(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F2Violation {
    pub s: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `f(sr)` overflowed; reported instead of failing.
    pub overflow: bool,
}

impl F2Violation {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F2Outcome {
    pub worst: Option<F2Violation>,
    /// Largest finite `f(sr) / (f(s) f(r))` seen over the pairs.
    pub max_ratio: f64,
}

impl F2Outcome {
    pub fn pass(&self) -> bool {
        self.worst.is_none()
    }
}

/// Multiplicative subadditivity on sampled pairs.
pub fn check_f2(
    spec: &NonlinearitySpec,
    pairs: &[(f64, f64)],
    rel_tol: f64,
) -> Result<F2Outcome, NonlinearityError> {
    if pairs.is_empty() {
        return Err(NonlinearityError::InvalidGrid);
    }
    let mut worst: Option<F2Violation> = None;
    let mut max_ratio: f64 = 0.0;
    for &(s, r) in pairs {
        let lhs = spec.eval(s * r);
        let rhs = finite(spec, s)? * finite(spec, r)?;
        let candidate = if !lhs.is_finite() {
            Some(F2Violation {
                s,
                r,
                lhs,
                rhs,
                overflow: true,
            })
        } else {
            if rhs > 0.0 && rhs.is_finite() {
                max_ratio = max_ratio.max(lhs / rhs);
            }
            (lhs > rhs * (1.0 + rel_tol)).then_some(F2Violation {
                s,
                r,
                lhs,
                rhs,
                overflow: false,
            })
        };
        if let Some(c) = candidate {
            let replace = match &worst {
                None => true,
                Some(w) => {
                    (c.overflow && !w.overflow) || (c.overflow == w.overflow && c.ratio() > w.ratio())
                }
            };
            if replace {
                worst = Some(c);
            }
        }
    }
    Ok(F2Outcome { worst, max_ratio })
}

/// Which composition an integral refers to: `Lf` uses `g∘f`, `Lg` uses `f∘g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Lf,
    Lg,
}

/// The composition `g(f(s))` (for `Lf`) or `f(g(s))` (for `Lg`).
pub fn composed(f: &NonlinearitySpec, g: &NonlinearitySpec, which: Which, s: f64) -> f64 {
    match which {
        Which::Lf => g.eval(f.eval(s)),
        Which::Lg => f.eval(g.eval(s)),
    }
}

/// `∫_1^∞ dt / sqrt(∫_0^t h(z) dz)` with `h` the selected composition.
pub fn ko_integral(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    which: Which,
    quad: &QuadratureConfig,
) -> Result<Extended, NonlinearityError> {
    let h = |z: f64| composed(f, g, which, z);
    let head = match quad::integrate(h, 0.0, 1.0, 0.0, quad.rel_tol, quad.max_subdivisions) {
        Ok(e) => e.value,
        Err(_) => return Ok(Extended::Inconclusive),
    };
    let degenerate = Cell::new(None);
    let inner = |t: f64| -> f64 {
        let tail = match quad::integrate(h, 1.0, t, 0.0, quad.rel_tol, quad.max_subdivisions) {
            Ok(e) => e.value,
            // The composition overflowed somewhere in [1, t]; the inner
            // integral is then effectively infinite.
            Err(_) => f64::INFINITY,
        };
        head + tail
    };
    let integrand = |t: f64| -> f64 {
        let big = inner(t);
        if big <= 0.0 {
            if degenerate.get().is_none() {
                degenerate.set(Some(t));
            }
            return f64::NAN;
        }
        1.0 / math::sqrt(big)
    };
    let out = quad::integrate_to_infinity(integrand, 1.0, quad);
    if let Some(t) = degenerate.get() {
        return Err(NonlinearityError::DegenerateInner { t });
    }
    Ok(out)
}

/// `∫_1^∞ ds / h(s)` with `h` the selected composition.
pub fn recip_integral(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    which: Which,
    quad: &QuadratureConfig,
) -> Extended {
    quad::integrate_to_infinity(|s| 1.0 / composed(f, g, which, s), 1.0, quad)
}

/// `∫_1^∞ dt / f(t)`.
pub fn reciprocal_integral(f: &NonlinearitySpec, quad: &QuadratureConfig) -> Extended {
    quad::integrate_to_infinity(|t| 1.0 / f.eval(t), 1.0, quad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implication {
    Holds,
    /// A premise integral diverges.
    Vacuous,
    Violated,
    Inconclusive,
}

/// Premises `∫1/f`, `∫1/g` and conclusions `∫1/f(g)`, `∫1/g(f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicationReport {
    pub inv_f: Extended,
    pub inv_g: Extended,
    pub inv_f_of_g: Extended,
    pub inv_g_of_f: Extended,
    pub verdict: Implication,
}

/// Finite `∫1/f` and `∫1/g` must give finite composition integrals.
pub fn composition_integrability_check(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    quad: &QuadratureConfig,
) -> ImplicationReport {
    let inv_f = reciprocal_integral(f, quad);
    let inv_g = reciprocal_integral(g, quad);
    let inv_f_of_g = recip_integral(f, g, Which::Lg, quad);
    let inv_g_of_f = recip_integral(f, g, Which::Lf, quad);
    let all = [inv_f, inv_g, inv_f_of_g, inv_g_of_f];
    let verdict = if all.iter().any(|e| e.is_inconclusive()) {
        Implication::Inconclusive
    } else if !(inv_f.is_finite() && inv_g.is_finite()) {
        Implication::Vacuous
    } else if inv_f_of_g.is_finite() && inv_g_of_f.is_finite() {
        Implication::Holds
    } else {
        Implication::Violated
    };
    ImplicationReport {
        inv_f,
        inv_g,
        inv_f_of_g,
        inv_g_of_f,
        verdict,
    }
}

/// Geometric grid of `count` points from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![lo];
    }
    let ratio = math::ln(hi / lo);
    (0..count)
        .map(|k| lo * math::exp(ratio * k as f64 / (count - 1) as f64))
        .collect()
}

/// Sample grid used by [`hypothesis_report`] for (F1).
pub fn default_f1_grid() -> Vec<f64> {
    geometric_grid(1e-3, 1e3, 121)
}

/// Sample pairs used by [`hypothesis_report`] for (F2).
pub fn default_f2_pairs() -> Vec<(f64, f64)> {
    let axis = geometric_grid(1e-2, 1e2, 17);
    let mut out = Vec::with_capacity(axis.len() * axis.len());
    for &s in &axis {
        for &r in &axis {
            out.push((s, r));
        }
    }
    out
}

/// All nonlinearity hypotheses for a pair `(f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub f1_f: F1Outcome,
    pub f1_g: F1Outcome,
    pub f2_f: F2Outcome,
    pub f2_g: F2Outcome,
    pub ko_lf: Extended,
    pub ko_lg: Extended,
    pub recip_lf: Extended,
    pub recip_lg: Extended,
    pub sample_budget: usize,
    /// A tabulated nonlinearity was evaluated past its last sample.
    pub extrapolated: bool,
}

impl HypothesisReport {
    pub fn f1_pass(&self) -> bool {
        self.f1_f.pass() && self.f1_g.pass()
    }

    pub fn f2_pass(&self) -> bool {
        self.f2_f.pass() && self.f2_g.pass()
    }

    pub fn f3_pass(&self) -> bool {
        self.ko_lf.is_finite() && self.ko_lg.is_finite()
    }
}

pub fn hypothesis_report(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    quad: &QuadratureConfig,
) -> Result<HypothesisReport, NonlinearityError> {
    let grid = default_f1_grid();
    let pairs = default_f2_pairs();
    let f1_f = check_f1(f, &grid)?;
    let f1_g = check_f1(g, &grid)?;
    let f2_f = check_f2(f, &pairs, F2_REL_TOL)?;
    let f2_g = check_f2(g, &pairs, F2_REL_TOL)?;
    let ko = |which| match ko_integral(f, g, which, quad) {
        Ok(v) => Ok(v),
        Err(NonlinearityError::DegenerateInner { .. }) => Ok(Extended::Inconclusive),
        Err(e) => Err(e),
    };
    let ko_lf = ko(Which::Lf)?;
    let ko_lg = ko(Which::Lg)?;
    Ok(HypothesisReport {
        f1_f,
        f1_g,
        f2_f,
        f2_g,
        ko_lf,
        ko_lg,
        recip_lf: recip_integral(f, g, Which::Lf, quad),
        recip_lg: recip_integral(f, g, Which::Lg, quad),
        sample_budget: 2 * grid.len() + 2 * pairs.len(),
        // Half-line integrals always leave a finite table.
        extrapolated: f.is_tabulated() || g.is_tabulated(),
    })
}
