#![allow(dead_code)]

use koradial_core::radial_solver::ProblemDef;

/// Reference integrator: classical RK4 on
/// `u'' = p g(v) - (n-1)/r u'`, `v'' = q f(u) - (n-1)/r v'`,
/// started off the origin from the two-term series.
pub struct Rk4Run {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Radius where `min(u, v)` first reached the cap, if it did.
    pub blowup: Option<f64>,
}

fn rhs(pr: &ProblemDef, r: f64, y: [f64; 4]) -> [f64; 4] {
    let n = pr.dimension as f64;
    [
        y[1],
        pr.p.eval(r) * pr.g.eval(y[2]) - (n - 1.0) / r * y[1],
        y[3],
        pr.q.eval(r) * pr.f.eval(y[0]) - (n - 1.0) / r * y[3],
    ]
}

pub fn rk4(pr: &ProblemDef, r_max: f64, h_max: f64, cap: f64) -> Rk4Run {
    let n = pr.dimension as f64;
    let r0 = 1e-5;
    let cu = pr.p.eval(0.0) * pr.g.eval(pr.b);
    let cv = pr.q.eval(0.0) * pr.f.eval(pr.a);
    let mut y = [
        pr.a + cu * r0 * r0 / (2.0 * n),
        cu * r0 / n,
        pr.b + cv * r0 * r0 / (2.0 * n),
        cv * r0 / n,
    ];
    let mut r = r0;
    let mut out = Rk4Run {
        r: vec![r],
        u: vec![y[0]],
        v: vec![y[2]],
        blowup: None,
    };
    while r < r_max {
        if y[0].min(y[2]) >= cap {
            out.blowup = Some(r);
            break;
        }
        // keep the relative change per step small
        let rate = (y[1] / y[0].max(1e-300)).max(y[3] / y[2].max(1e-300)).max(0.0);
        let mut h = h_max.min(2e-3 / rate.max(1e-300)).min(r_max - r);
        if r < 1e-2 {
            h = h.min(r);
        }
        let add = |y: [f64; 4], k: [f64; 4], s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2], y[3] + s * k[3]];
        let k1 = rhs(pr, r, y);
        let k2 = rhs(pr, r + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = rhs(pr, r + 0.5 * h, add(y, k2, 0.5 * h));
        let k4 = rhs(pr, r + h, add(y, k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += h;
        out.r.push(r);
        out.u.push(y[0]);
        out.v.push(y[2]);
        if !(y[0].is_finite() && y[2].is_finite()) {
            out.blowup = Some(r);
            break;
        }
    }
    out
}

impl Rk4Run {
    /// Linear interpolation of `(u, v)` at `r`.
    pub fn at(&self, r: f64) -> (f64, f64) {
        let i = self.r.partition_point(|&x| x < r).clamp(1, self.r.len() - 1);
        let t = (r - self.r[i - 1]) / (self.r[i] - self.r[i - 1]);
        (
            self.u[i - 1] + t * (self.u[i] - self.u[i - 1]),
            self.v[i - 1] + t * (self.v[i] - self.v[i - 1]),
        )
    }
}
