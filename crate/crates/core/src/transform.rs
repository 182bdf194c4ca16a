//! Tail transforms of the composed nonlinearities
//!
//! ```text
//! Φ(t) = ∫_t^∞ ds / g(f(s)),    Ψ(t) = ∫_t^∞ ds / f(g(s))
//! ```
//!
//! Both are positive, strictly decreasing and convex. A [`TransformTable`]
//! stores the transform on a log grid with the cell integrals it was summed
//! from, so values inside a cell are exact up to one short quadrature.

use alloc::vec::Vec;

use crate::math;
use crate::nonlinearity::NonlinearitySpec;
use crate::quad::{self, Extended, QuadratureConfig};

pub const DEFAULT_T_MIN: f64 = 1e-3;
pub const DEFAULT_T_MAX: f64 = 1e6;
pub const DEFAULT_NODES: usize = 512;
/// The grid is cut at the last node where the integrand is above this.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

const CELL_REL_TOL: f64 = 1e-13;
const INVERSE_REL_TOL: f64 = 1e-13;
const INVERSE_MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `∫ 1/g(f)`
    Phi,
    /// `∫ 1/f(g)`
    Psi,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("the reciprocal integral diverges; the transform is infinite")]
    DivergentTransform,
    #[error("the reciprocal integral could not be decided")]
    Inconclusive,
    #[error("transform values fail to decrease at node {index}")]
    NonMonotone { index: usize },
    #[error("argument {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("argument {value} must be positive and finite")]
    DomainError { value: f64 },
    #[error("invalid grid: need 0 < t_min < t_max and at least 3 nodes")]
    InvalidGrid,
    #[error("integrand is not positive and finite at {t}")]
    Evaluation { t: f64 },
}

/// Power tail `Φ(t) ≈ Φ(t_top)·(t/t_top)^{1-α}` used beyond the last node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    /// Decay exponent `α > 1` of the integrand.
    pub exponent: f64,
    pub t_top: f64,
    pub phi_top: f64,
}

impl TailModel {
    fn value(&self, t: f64) -> f64 {
        self.phi_top * math::powf(t / self.t_top, 1.0 - self.exponent)
    }

    fn inverse(&self, y: f64) -> f64 {
        self.t_top * math::powf(y / self.phi_top, 1.0 / (1.0 - self.exponent))
    }
}

/// Sampled `Φ` or `Ψ` with exact in-cell evaluation and a monotone inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTable {
    pub kind: TransformKind,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// `∫_{t_j}^{t_{j+1}}` of the integrand.
    pub cells: Vec<f64>,
    pub tail: TailModel,
    /// The function applied first.
    inner: NonlinearitySpec,
    outer: NonlinearitySpec,
    quad: QuadratureConfig,
}

/// Build `Φ` (or `Ψ`) on `n_nodes` log-spaced nodes of `[t_min, t_max]`.
pub fn build_transform(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    kind: TransformKind,
    t_min: f64,
    t_max: f64,
    n_nodes: usize,
    quad: &QuadratureConfig,
) -> Result<TransformTable, TransformError> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) || n_nodes < 3 {
        return Err(TransformError::InvalidGrid);
    }
    let (inner, outer) = match kind {
        TransformKind::Phi => (f.clone(), g.clone()),
        TransformKind::Psi => (g.clone(), f.clone()),
    };
    let h = |s: f64| 1.0 / outer.eval(inner.eval(s));

    let h0 = h(t_min);
    if !(h0.is_finite() && h0 > 0.0) {
        return Err(TransformError::Evaluation { t: t_min });
    }
    let ratio = math::ln(t_max / t_min);
    let mut nodes: Vec<f64> = (0..n_nodes)
        .map(|j| t_min * math::exp(ratio * j as f64 / (n_nodes - 1) as f64))
        .collect();
    nodes[n_nodes - 1] = t_max;
    let keep = nodes.iter().rposition(|&t| h(t) > UNDERFLOW_FLOOR).unwrap_or(0) + 1;
    if keep < 3 {
        return Err(TransformError::InvalidGrid);
    }
    nodes.truncate(keep);
    let top = nodes[keep - 1];

    let phi_top = match quad::integrate_to_infinity(h, top, quad) {
        Extended::Finite(v) if v > 0.0 => v,
        Extended::Finite(_) => return Err(TransformError::Evaluation { t: top }),
        Extended::Divergent => return Err(TransformError::DivergentTransform),
        Extended::Inconclusive => return Err(TransformError::Inconclusive),
    };

    let mut cells = alloc::vec![0.0; keep - 1];
    for j in 0..keep - 1 {
        let est = quad::integrate(h, nodes[j], nodes[j + 1], 0.0, CELL_REL_TOL, quad.max_subdivisions)
            .map_err(|_| TransformError::Evaluation { t: nodes[j] })?;
        if !(est.value > 0.0) {
            return Err(TransformError::NonMonotone { index: j });
        }
        cells[j] = est.value;
    }
    let mut values = alloc::vec![0.0; keep];
    values[keep - 1] = phi_top;
    for j in (0..keep - 1).rev() {
        values[j] = values[j + 1] + cells[j];
        if !(values[j] > values[j + 1]) {
            return Err(TransformError::NonMonotone { index: j });
        }
    }

    // Decay exponent of the integrand over the last decade.
    let lo = top / 10.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = nodes
        .iter()
        .filter(|&&t| t >= lo)
        .map(|&t| (math::ln(t), math::ln(h(t))))
        .unzip();
    let fitted = math::linear_fit(&xs, &ys).map(|(s, _)| -s);
    let matched = 1.0 + top * h(top) / phi_top;
    let exponent = match fitted {
        Some(a) if a > 1.0 && a.is_finite() => a,
        _ => matched,
    };
    Ok(TransformTable {
        kind,
        nodes,
        values,
        cells,
        tail: TailModel {
            exponent,
            t_top: top,
            phi_top,
        },
        inner,
        outer,
        quad: *quad,
    })
}

/// [`build_transform`] with the default grid.
pub fn build_default(
    f: &NonlinearitySpec,
    g: &NonlinearitySpec,
    kind: TransformKind,
    quad: &QuadratureConfig,
) -> Result<TransformTable, TransformError> {
    build_transform(f, g, kind, DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_NODES, quad)
}

impl TransformTable {
    pub fn t_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn t_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Largest attainable value, `Φ(t_min)`.
    pub fn sup(&self) -> f64 {
        self.values[0]
    }

    /// The integrand `1/g(f(t))` (or `1/f(g(t))`).
    pub fn integrand(&self, t: f64) -> f64 {
        1.0 / self.outer.eval(self.inner.eval(t))
    }

    fn cell_of(&self, t: f64) -> usize {
        // nodes ascending, values descending
        crate::interp::locate(&self.nodes, t)
    }

    pub fn value(&self, t: f64) -> Result<f64, TransformError> {
        if !(t >= self.t_min()) {
            return Err(TransformError::OutOfRange {
                value: t,
                lo: self.t_min(),
                hi: f64::INFINITY,
            });
        }
        if t >= self.t_max() {
            return Ok(self.tail.value(t));
        }
        let j = self.cell_of(t);
        if t == self.nodes[j] {
            return Ok(self.values[j]);
        }
        let rest = quad::integrate(
            |s| self.integrand(s),
            t,
            self.nodes[j + 1],
            0.0,
            CELL_REL_TOL,
            self.quad.max_subdivisions,
        )
        .map_err(|_| TransformError::Evaluation { t })?;
        Ok(self.values[j + 1] + rest.value)
    }

    /// `-1/g(f(t))`, straight from the nonlinearities.
    pub fn derivative(&self, t: f64) -> Result<f64, TransformError> {
        if !(t >= self.t_min()) {
            return Err(TransformError::OutOfRange {
                value: t,
                lo: self.t_min(),
                hi: f64::INFINITY,
            });
        }
        Ok(-self.integrand(t))
    }

    /// The `t` with `Φ(t) = y`, for `0 < y <= Φ(t_min)`.
    pub fn inverse(&self, y: f64) -> Result<f64, TransformError> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(TransformError::DomainError { value: y });
        }
        if y > self.sup() {
            return Err(TransformError::OutOfRange {
                value: y,
                lo: 0.0,
                hi: self.sup(),
            });
        }
        let last = self.values.len() - 1;
        if y <= self.values[last] {
            return Ok(self.tail.inverse(y));
        }
        // first node with value <= y
        let k = self.values.partition_point(|&v| v > y);
        if self.values[k] == y {
            return Ok(self.nodes[k]);
        }
        let (mut lo, mut hi) = (self.nodes[k - 1], self.nodes[k]);
        // Linear guess inside the cell, then safeguarded Newton.
        let (v_lo, v_hi) = (self.values[k - 1], self.values[k]);
        let mut t = lo + (hi - lo) * (v_lo - y) / (v_lo - v_hi);
        for _ in 0..INVERSE_MAX_STEPS {
            let residual = self.value(t)? - y;
            if residual.abs() <= INVERSE_REL_TOL * y {
                return Ok(t);
            }
            if residual > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let step = residual / self.integrand(t);
            let next = t + step;
            t = if next > lo && next < hi && next.is_finite() {
                next
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * hi {
                return Ok(t);
            }
        }
        Ok(t)
    }

    /// Divided second differences, computed from neighbouring cell means
    /// so that no large values cancel.
    pub fn second_differences(&self) -> Vec<f64> {
        let means: Vec<f64> = self
            .cells
            .iter()
            .enumerate()
            .map(|(j, c)| c / (self.nodes[j + 1] - self.nodes[j]))
            .collect();
        means
            .windows(2)
            .enumerate()
            .map(|(j, m)| (m[0] - m[1]) / (0.5 * (self.nodes[j + 2] - self.nodes[j])))
            .collect()
    }

    /// `(t, Φ(t), Φ'(t))` rows for export.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        self.nodes
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| (t, v, -self.integrand(t)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn pw(theta: f64) -> NonlinearitySpec {
        NonlinearitySpec::power(theta).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn power_examples() {
        let t = build_default(&pw(2.0), &pw(2.0), TransformKind::Phi, &q()).unwrap();
        assert!(close(t.value(1.0).unwrap(), 1.0 / 3.0, 1e-10));
        assert!(close(t.value(2.0).unwrap(), 1.0 / 24.0, 1e-10));
        assert!(t.value(2.0).unwrap() < t.value(1.0).unwrap());
        assert_eq!(t.derivative(1.0).unwrap(), -1.0);
        assert_eq!(t.derivative(2.0).unwrap(), -1.0 / 16.0);
        assert!(close(t.inverse(1.0 / 3.0).unwrap(), 1.0, 1e-10));
        assert!(close(t.inverse(1.0 / 24.0).unwrap(), 2.0, 1e-10));
        let t = build_default(&pw(2.0), &pw(1.0), TransformKind::Phi, &q()).unwrap();
        assert!(close(t.value(10.0).unwrap(), 0.1, 1e-10));
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_default(&pw(1.0), &pw(1.0), TransformKind::Phi, &q()),
            Err(TransformError::DivergentTransform)
        );
        let t = build_default(&pw(2.0), &pw(2.0), TransformKind::Phi, &q()).unwrap();
        assert!(matches!(t.value(1e-4), Err(TransformError::OutOfRange { .. })));
        assert!(matches!(t.inverse(0.0), Err(TransformError::DomainError { .. })));
        assert!(matches!(t.inverse(-1.0), Err(TransformError::DomainError { .. })));
        assert!(matches!(t.inverse(2.0 * t.sup()), Err(TransformError::OutOfRange { .. })));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let t = build_default(&pw(2.0), &pw(1.5), TransformKind::Phi, &q()).unwrap();
        for &x in &[0.3, 1.0, 7.0] {
            let h = 1e-3 * x;
            let fd = (t.value(x + h).unwrap() - t.value(x - h).unwrap()) / (2.0 * h);
            let d = t.derivative(x).unwrap();
            assert!((fd - d).abs() <= 1e-5 * d.abs(), "x={x} fd={fd} d={d}");
        }
    }

    #[test]
    fn tail_beyond_last_node() {
        let t = build_default(&pw(2.0), &pw(2.0), TransformKind::Phi, &q()).unwrap();
        let x = 1e7;
        assert!(close(t.value(x).unwrap(), 1.0 / (3.0 * x * x * x), 1e-6));
        assert!(close(t.inverse(1.0 / (3.0 * x * x * x)).unwrap(), x, 1e-6));
    }

    #[test]
    fn underflowing_integrand_truncates_grid() {
        let e = NonlinearitySpec::exp_minus_one();
        let t = build_default(&e, &pw(1.0), TransformKind::Phi, &q()).unwrap();
        assert!(t.t_max() < 1e3);
        assert!(t.values.iter().all(|&v| v > 0.0));
        let x = 2.0;
        assert!(close(t.inverse(t.value(x).unwrap()).unwrap(), x, 1e-10));
    }

    #[test]
    fn psi_swaps_roles() {
        let f = pw(3.0);
        let g = pw(1.5);
        let psi = build_default(&f, &g, TransformKind::Psi, &q()).unwrap();
        let phi = build_default(&g, &f, TransformKind::Phi, &q()).unwrap();
        assert_eq!(psi.nodes, phi.nodes);
        assert_eq!(psi.values, phi.values);
    }
}
