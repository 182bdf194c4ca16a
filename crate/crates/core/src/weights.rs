//! Radial weights `p`, `q` and their potentials
//!
//! ```text
//! P(r) = ∫_0^r t^{1-n} ∫_0^t s^{n-1} w(s) ds dt,    L = (1/(n-2)) ∫_0^∞ s w(s) ds = lim P(r).
//! ```

use alloc::vec::Vec;

use crate::interp;
use crate::math;
use crate::nonlinearity::SpecError;
use crate::quad::{self, Extended, QuadratureConfig};

/// Positivity threshold of the compact-support probe.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;
/// Samples per dyadic band of the compact-support probe.
pub const SUPPORT_SAMPLES: usize = 64;
/// Default top rung of the compact-support ladder.
pub const DEFAULT_PROBE_MAX: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("dimension must be at least 3, got {0}")]
    InvalidDimension(u32),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("weight evaluation at {input} is not finite")]
    Evaluation { input: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    /// `e^{-λ s}`
    ExpDecay { rate: f64 },
    /// `(offset + s²)^{-m/2}`
    PowerDecay { m: f64, offset: f64 },
    Constant { value: f64 },
    /// Hat `max(0, 1 - s/radius)`.
    Bump { radius: f64 },
    /// Piecewise linear, held constant outside the table.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

/// A nonnegative continuous radial weight, optionally scaled by a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    family: WeightFamily,
    scale: f64,
}

fn nonneg(name: &'static str, value: f64, strict: bool) -> Result<(), SpecError> {
    let ok = value.is_finite() && if strict { value > 0.0 } else { value >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(SpecError::InvalidParameter {
            name,
            requirement: if strict {
                "finite and positive"
            } else {
                "finite and nonnegative"
            },
            value,
        })
    }
}

impl WeightSpec {
    fn new(family: WeightFamily) -> Self {
        Self { family, scale: 1.0 }
    }

    pub fn exp_decay(rate: f64) -> Result<Self, SpecError> {
        nonneg("rate", rate, false)?;
        Ok(Self::new(WeightFamily::ExpDecay { rate }))
    }

    pub fn power_decay(m: f64, offset: f64) -> Result<Self, SpecError> {
        nonneg("m", m, true)?;
        nonneg("offset", offset, true)?;
        Ok(Self::new(WeightFamily::PowerDecay { m, offset }))
    }

    pub fn constant(value: f64) -> Result<Self, SpecError> {
        nonneg("value", value, false)?;
        Ok(Self::new(WeightFamily::Constant { value }))
    }

    pub fn zero() -> Self {
        Self::new(WeightFamily::Constant { value: 0.0 })
    }

    pub fn bump(radius: f64) -> Result<Self, SpecError> {
        nonneg("radius", radius, true)?;
        Ok(Self::new(WeightFamily::Bump { radius }))
    }

    pub fn table(points: &[(f64, f64)]) -> Result<Self, SpecError> {
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
            nonneg("table value", y, false)?;
        }
        Ok(Self::new(WeightFamily::Tabulated {
            xs: points.iter().map(|p| p.0).collect(),
            ys: points.iter().map(|p| p.1).collect(),
        }))
    }

    /// The same weight multiplied by `c >= 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            family: self.family.clone(),
            scale: self.scale * c,
        }
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0 || matches!(self.family, WeightFamily::Constant { value } if value == 0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let raw = match &self.family {
            WeightFamily::ExpDecay { rate } => math::exp(-rate * s),
            WeightFamily::PowerDecay { m, offset } => math::powf(offset + s * s, -0.5 * m),
            WeightFamily::Constant { value } => *value,
            WeightFamily::Bump { radius } => (1.0 - s / radius).max(0.0),
            WeightFamily::Tabulated { xs, ys } => {
                let n = xs.len();
                if s <= xs[0] {
                    ys[0]
                } else if s >= xs[n - 1] {
                    ys[n - 1]
                } else {
                    let i = interp::locate(xs, s);
                    let t = (s - xs[i]) / (xs[i + 1] - xs[i]);
                    ys[i] + t * (ys[i + 1] - ys[i])
                }
            }
        };
        self.scale * raw
    }
}

fn check_dimension(n: u32) -> Result<f64, WeightError> {
    if n < 3 {
        Err(WeightError::InvalidDimension(n))
    } else {
        Ok(n as f64)
    }
}

/// `(1/(n-2)) ∫_lower^∞ s w(s) ds`.
fn moment_tail(w: &WeightSpec, n: f64, lower: f64, quad: &QuadratureConfig) -> Extended {
    quad::integrate_to_infinity(|s| s * w.eval(s), lower, quad).scale(1.0 / (n - 2.0))
}

/// `L = (1/(n-2)) ∫_0^∞ s w(s) ds`.
pub fn limit_constant(w: &WeightSpec, n: u32, quad: &QuadratureConfig) -> Result<Extended, WeightError> {
    let nf = check_dimension(n)?;
    if w.is_zero() {
        return Ok(Extended::Finite(0.0));
    }
    let head = quad::integrate(|s| s * w.eval(s), 0.0, 1.0, 0.0, quad.rel_tol, quad.max_subdivisions)
        .map_err(|e| match e {
            quad::QuadError::NonFinite { x } => WeightError::Evaluation { input: x },
        })?;
    if !head.converged {
        return Ok(Extended::Inconclusive);
    }
    Ok(Extended::Finite(head.value / (nf - 2.0)).add(moment_tail(w, nf, 1.0, quad)))
}

/// Cumulative potential of one weight on an adaptive grid of `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    pub dimension: u32,
    pub grid: Vec<f64>,
    /// `P(r_i)`
    pub values: Vec<f64>,
    /// `I(r_i) = ∫_0^{r_i} s^{n-1} w(s) ds`
    pub inner: Vec<f64>,
    /// `lim P(r)` continued from the table end (finite, divergent or undecided).
    pub limit: Extended,
    weight: WeightSpec,
}

const INITIAL_CELL: f64 = 0.25;
const MAX_CELL_DEPTH: u32 = 12;
const CELL_REL_TOL: f64 = 1e-13;

fn moment(w: &WeightSpec, n: f64, a: f64, b: f64) -> f64 {
    quad::gauss10(|s| math::powf(s, n - 1.0) * w.eval(s), a, b)
}

fn refine_cell(w: &WeightSpec, n: f64, a: f64, b: f64, depth: u32, out: &mut Vec<f64>) {
    let whole = moment(w, n, a, b);
    let mid = 0.5 * (a + b);
    let halves = moment(w, n, a, mid) + moment(w, n, mid, b);
    if depth >= MAX_CELL_DEPTH || (whole - halves).abs() <= CELL_REL_TOL * halves.abs() {
        out.push(b);
    } else {
        refine_cell(w, n, a, mid, depth + 1, out);
        refine_cell(w, n, mid, b, depth + 1, out);
    }
}

impl PotentialTable {
    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn r_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// `∫_{r_i}^{t} s^{n-1} w` followed by `∫_{r_i}^{r} t^{1-n} I(t) dt`.
    fn partial(&self, i: usize, r: f64) -> (f64, f64) {
        let n = self.dimension as f64;
        let a = self.grid[i];
        let base = self.inner[i];
        let di = moment(&self.weight, n, a, r);
        let dp = quad::gauss10(
            |t| {
                let it = base + moment(&self.weight, n, a, t);
                it * math::powf(t, 1.0 - n)
            },
            a,
            r,
        );
        (di, dp)
    }

    /// `P(r)` for `0 <= r <= r_max`.
    pub fn eval(&self, r: f64) -> Option<f64> {
        if !(0.0..=self.r_max()).contains(&r) {
            return None;
        }
        let i = interp::locate(&self.grid, r);
        if r == self.grid[i] {
            return Some(self.values[i]);
        }
        if r == self.grid[i + 1] {
            return Some(self.values[i + 1]);
        }
        Some(self.values[i] + self.partial(i, r).1)
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Tabulate `P` on `[0, r_max]` by cumulative Gauss–Legendre sums.
pub fn potential(
    w: &WeightSpec,
    n: u32,
    r_max: f64,
    quad: &QuadratureConfig,
) -> Result<PotentialTable, WeightError> {
    let nf = check_dimension(n)?;
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(WeightError::InvalidRadius(r_max));
    }
    let cells = math::ceil(r_max / INITIAL_CELL).max(1.0) as usize;
    let mut grid = alloc::vec![0.0];
    for k in 0..cells {
        let a = r_max * k as f64 / cells as f64;
        let b = if k + 1 == cells {
            r_max
        } else {
            r_max * (k + 1) as f64 / cells as f64
        };
        refine_cell(w, nf, a, b, 0, &mut grid);
    }
    let mut table = PotentialTable {
        dimension: n,
        values: alloc::vec![0.0; grid.len()],
        inner: alloc::vec![0.0; grid.len()],
        grid,
        limit: Extended::Inconclusive,
        weight: w.clone(),
    };
    for i in 0..table.grid.len() - 1 {
        let (di, dp) = table.partial(i, table.grid[i + 1]);
        if !(di.is_finite() && dp.is_finite()) {
            return Err(WeightError::Evaluation { input: table.grid[i + 1] });
        }
        table.inner[i + 1] = table.inner[i] + di;
        table.values[i + 1] = table.values[i] + dp;
    }
    // lim P = P(R) + R^{2-n} I(R)/(n-2) + (1/(n-2)) ∫_R^∞ s w(s) ds
    let last = table.grid.len() - 1;
    let boundary = math::powf(r_max, 2.0 - nf) * table.inner[last] / (nf - 2.0);
    let tail = if w.is_zero() {
        Extended::Finite(0.0)
    } else {
        moment_tail(w, nf, r_max, quad)
    };
    table.limit = Extended::Finite(table.values[last] + boundary).add(tail);
    Ok(table)
}

/// Outcome of the non-compact-support probe for `min(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportReport {
    pub pass: bool,
    /// First ladder rung `R` beyond which no sample of `min(p, q)` was positive.
    pub vanishes_beyond: Option<f64>,
}

/// Check that `min(p, q)` has positive samples beyond every rung of
/// `R = 1, 2, 4, ... <= r_probe_max`.
pub fn min_support_check(p: &WeightSpec, q: &WeightSpec, r_probe_max: f64) -> Result<SupportReport, WeightError> {
    if !(r_probe_max.is_finite() && r_probe_max > 0.0) {
        return Err(WeightError::InvalidRadius(r_probe_max));
    }
    let mut rung = 1.0;
    loop {
        let positive = (1..=SUPPORT_SAMPLES).any(|k| {
            let s = rung * (1.0 + k as f64 / SUPPORT_SAMPLES as f64);
            p.eval(s).min(q.eval(s)) > SUPPORT_THRESHOLD
        });
        if !positive {
            return Ok(SupportReport {
                pass: false,
                vanishes_beyond: Some(rung),
            });
        }
        rung *= 2.0;
        if rung > r_probe_max {
            break;
        }
    }
    Ok(SupportReport {
        pass: true,
        vanishes_beyond: None,
    })
}
