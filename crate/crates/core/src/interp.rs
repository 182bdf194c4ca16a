//! Shape-preserving interpolation used by tabulated data and solution lookup.

use alloc::vec::Vec;

/// Fritsch–Carlson style node derivatives for monotone piecewise-cubic
/// interpolation. Nodes must be strictly increasing.
pub fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut d = alloc::vec![0.0; n];
    if n < 2 {
        return d;
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 <= 0.0 {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    d
}

/// Cubic Hermite on `[x0, x1]` with end values and slopes.
#[inline]
pub fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    if h <= 0.0 {
        return y0;
    }
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Clamp supplied end slopes so that the Hermite cubic on a nondecreasing
/// interval stays nondecreasing (the `[0, 3·secant]` box).
#[inline]
pub fn limit_slopes(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> (f64, f64) {
    let secant = (y1 - y0) / (x1 - x0);
    if secant <= 0.0 {
        return (d0, d1);
    }
    let cap = 3.0 * secant;
    (d0.clamp(0.0, cap), d1.clamp(0.0, cap))
}

/// Index `i` with `xs[i] <= x <= xs[i+1]`, clamped to the valid range.
pub fn locate(xs: &[f64], x: f64) -> usize {
    let n = xs.len();
    if n < 2 || x <= xs[0] {
        return 0;
    }
    if x >= xs[n - 1] {
        return n - 2;
    }
    match xs.binary_search_by(|p| p.total_cmp(&x)) {
        Ok(i) => i.min(n - 2),
        Err(i) => i - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pchip_keeps_monotone_data_monotone() {
        let xs = [0.0, 1.0, 2.0, 5.0, 6.0];
        let ys = [0.0, 0.1, 3.0, 3.1, 10.0];
        let d = pchip_slopes(&xs, &ys);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..600 {
            let x = 6.0 * k as f64 / 599.0;
            let i = locate(&xs, x);
            let y = hermite(xs[i], xs[i + 1], ys[i], ys[i + 1], d[i], d[i + 1], x);
            assert!(y >= prev - 1e-14, "x={x}");
            prev = y;
        }
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| x * x * x - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let y = hermite(1.0, 2.0, f(1.0), f(2.0), df(1.0), df(2.0), 1.3);
        assert!((y - f(1.3)).abs() < 1e-14);
    }

    #[test]
    fn locate_brackets() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(locate(&xs, -1.0), 0);
        assert_eq!(locate(&xs, 0.5), 0);
        assert_eq!(locate(&xs, 1.0), 1);
        assert_eq!(locate(&xs, 2.5), 2);
        assert_eq!(locate(&xs, 3.0), 2);
        assert_eq!(locate(&xs, 9.0), 2);
    }
}
