//! Adaptive Gauss–Kronrod quadrature on finite intervals and on `[a, ∞)`.
//!
//! Half-lines are mapped onto `(0, 1]` by `t = a / x`; the 21-point Kronrod
//! rule never evaluates the endpoints, so the `x = 0` image of infinity and
//! integrable endpoint singularities are never sampled. Before integrating
//! a half-line, the integrand tail is probed on a decade ladder and a
//! `c / t` lower bound with a fitted non-decaying `c` is reported as
//! divergence.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::math;

/// Kronrod abscissae (QUADPACK `qk21`), descending, last one is the centre.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_658_685_337_358,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule (abscissae `XGK[1], XGK[3], ...`).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Nodes and weights of the 10-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss10_nodes() -> [(f64, f64); 10] {
    let mut out = [(0.0, 0.0); 10];
    for k in 0..5 {
        let x = XGK[2 * k + 1];
        out[2 * k] = (-x, WG[k]);
        out[2 * k + 1] = (x, WG[k]);
    }
    out
}

/// 10-point Gauss–Legendre approximation of `∫_a^b f`.
pub fn gauss10<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for k in 0..5 {
        let dx = h * XGK[2 * k + 1];
        acc += WG[k] * (f(c - dx) + f(c + dx));
    }
    acc * h
}

/// Numerical settings shared by every improper or adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative accuracy demanded from half-line integrals; also the scale of
    /// the divergence threshold.
    pub tail_tol: f64,
    /// Relative accuracy for finite-interval integrals.
    pub rel_tol: f64,
    /// Maximum number of subintervals in one adaptive integration.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tail_tol: 1e-8,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

/// Extended real produced by an improper integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Divergent,
    Inconclusive,
}

impl Extended {
    pub fn value(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_inconclusive(self) -> bool {
        matches!(self, Extended::Inconclusive)
    }

    /// Multiply a finite value by a constant; other variants pass through.
    pub fn scale(self, c: f64) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v * c),
            other => other,
        }
    }

    /// Sum of two extended values: any inconclusive term wins, then divergence.
    pub fn add(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Inconclusive, _) | (_, Extended::Inconclusive) => Extended::Inconclusive,
            (Extended::Divergent, _) | (_, Extended::Divergent) => Extended::Divergent,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integrand is not finite at {x}")]
    NonFinite { x: f64 },
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

struct Rule {
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = math::powf(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Rule, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64, QuadError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    let fc = eval(center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Ok(Rule { value, error })
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)` or when `limit` subintervals are in use; the
/// returned [`Estimate`] records which one happened.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    limit: usize,
) -> Result<Estimate, QuadError> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            converged: true,
            subdivisions: 1,
        });
    }
    let first = kronrod21(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
    });
    let mut count = 1;
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Estimate {
                value: total,
                error: total_err,
                converged: true,
                subdivisions: count,
            });
        }
        if count >= limit {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
        });
        count += 1;
    }
    // Re-sum to shed accumulated cancellation from the running totals.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    let tol = abs_tol.max(rel_tol * value.abs());
    Ok(Estimate {
        value,
        error,
        converged: error <= tol,
        subdivisions: count,
    })
}

/// Outcome of the decade-ladder tail probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProbe {
    /// Fitted log-log slope of `t·h(t)` over the probes (≥ 0 means no decay).
    pub slope: f64,
    /// Smallest `t·h(t)` over the probes.
    pub min_c: f64,
    pub divergent: bool,
}

/// Probe `h` at `t = lower·10^k`, `k = 2..=6`.
///
/// Divergence is declared when `t·h(t)` does not decay (fitted slope above
/// `-0.05`) and stays above `10·tail_tol` on every probe.
pub fn probe_tail<F: FnMut(f64) -> f64>(h: &mut F, lower: f64, cfg: &QuadratureConfig) -> Option<TailProbe> {
    let mut xs = [0.0; 5];
    let mut ys = [0.0; 5];
    let mut min_c = f64::INFINITY;
    let mut all_positive = true;
    for (i, k) in (2..=6).enumerate() {
        let t = lower * math::powf(10.0, k as f64);
        let c = t * h(t);
        if !c.is_finite() || c < 0.0 {
            return None;
        }
        min_c = min_c.min(c);
        if c <= 0.0 {
            all_positive = false;
        }
        xs[i] = math::ln(t);
        ys[i] = if c > 0.0 { math::ln(c) } else { 0.0 };
    }
    if !all_positive {
        return Some(TailProbe {
            slope: f64::NEG_INFINITY,
            min_c,
            divergent: false,
        });
    }
    let (slope, _) = math::linear_fit(&xs, &ys)?;
    Some(TailProbe {
        slope,
        min_c,
        divergent: slope >= -0.05 && min_c > 10.0 * cfg.tail_tol,
    })
}

/// `∫_lower^∞ h(t) dt` for nonnegative `h` and `lower > 0`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut h: F, lower: f64, cfg: &QuadratureConfig) -> Extended {
    debug_assert!(lower > 0.0);
    match probe_tail(&mut h, lower, cfg) {
        None => return Extended::Inconclusive,
        Some(p) if p.divergent => return Extended::Divergent,
        Some(_) => {}
    }
    let mapped = |x: f64| {
        let t = lower / x;
        if !t.is_finite() {
            return 0.0;
        }
        let y = h(t);
        if y == 0.0 {
            0.0
        } else {
            y * lower / (x * x)
        }
    };
    match integrate(
        mapped,
        0.0,
        1.0,
        f64::MIN_POSITIVE,
        0.1 * cfg.tail_tol,
        cfg.max_subdivisions,
    ) {
        Ok(est) if est.converged => Extended::Finite(est.value),
        _ => Extended::Inconclusive,
    }
}
