use serde::Serialize;

use crate::error::{contract, domain, Result};
use crate::kp_model::WaveEquationSpec;

/// Equation whose left-hand side is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualEquation {
    /// `∂x{ρ_t + c_s ρ_x + αρρ_x + βρ_xxx} + (c_s/2)(ρ_yy + ρ_zz)` in `(x, y, z, t)`.
    Cartesian(WaveEquationSpec),
    /// `∂r{ρ_t + c_s ρ_r + αρρ_r + βρ_rrr + ρ/(2t)} + ρ_φφ/(2c_s t²) + (c_s/2)ρ_zz`
    /// in `(r, φ, z, t)`.
    Cylindrical(WaveEquationSpec),
}

/// Tensor grid of probe points in `(coord1, coord2, coord3, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub n: [usize; 4],
}

impl ProbeBox {
    pub fn points(&self) -> Vec<[f64; 4]> {
        let axis = |d: usize| -> Vec<f64> {
            let n = self.n[d];
            (0..n)
                .map(|i| {
                    if n == 1 {
                        self.lo[d]
                    } else {
                        self.lo[d] + (self.hi[d] - self.lo[d]) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        };
        let (a, b, c, t) = (axis(0), axis(1), axis(2), axis(3));
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len() * t.len());
        for &tt in &t {
            for &cc in &c {
                for &bb in &b {
                    for &aa in &a {
                        out.push([aa, bb, cc, tt]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRow {
    pub h: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    /// Observed order between consecutive resolutions.
    pub orders: Vec<f64>,
    /// The residual vanished identically at every resolution.
    pub exact: bool,
    /// Set when the residual did not decrease under refinement.
    pub failure: Option<String>,
}

impl ResidualReport {
    pub fn finest(&self) -> f64 {
        self.rows.last().map(|r| r.max_residual).unwrap_or(f64::NAN)
    }

    /// Every observed order within `order ± tol` and the finest residual below
    /// `max_finest`.
    pub fn meets(&self, order: f64, tol: f64, max_finest: f64) -> bool {
        if self.exact {
            return true;
        }
        self.failure.is_none()
            && self.orders.iter().all(|p| (p - order).abs() <= tol)
            && self.finest() < max_finest
    }

    /// Plain-text convergence table.
    pub fn table(&self) -> String {
        let mut s = String::from("h,max_residual,order\n");
        for (i, r) in self.rows.iter().enumerate() {
            let order = if i == 0 {
                String::new()
            } else {
                crate::table::format_g(self.orders[i - 1])
            };
            s.push_str(&format!(
                "{},{},{}\n",
                crate::table::format_g(r.h),
                crate::table::format_g(r.max_residual),
                order
            ));
        }
        s
    }
}

const D1: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
const D2: [(i32, f64); 5] = [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)];
const D4: [(i32, f64); 7] = [
    (-3, -1.0),
    (-2, 12.0),
    (-1, -39.0),
    (0, 56.0),
    (1, -39.0),
    (2, 12.0),
    (3, -1.0),
];

struct Stencil<'a> {
    f: &'a dyn Fn(f64, f64, f64, f64) -> f64,
    p: [f64; 4],
    h: f64,
}

impl Stencil<'_> {
    fn at(&self, axis: usize, m: i32) -> f64 {
        let mut q = self.p;
        q[axis] += m as f64 * self.h;
        (self.f)(q[0], q[1], q[2], q[3])
    }

    fn d1(&self, axis: usize) -> f64 {
        D1.iter().map(|&(m, w)| w * self.at(axis, m)).sum::<f64>() / (12.0 * self.h)
    }

    fn d2(&self, axis: usize) -> f64 {
        D2.iter().map(|&(m, w)| w * self.at(axis, m)).sum::<f64>() / (12.0 * self.h * self.h)
    }

    fn d4(&self, axis: usize) -> f64 {
        D4.iter().map(|&(m, w)| w * self.at(axis, m)).sum::<f64>() / (6.0 * self.h.powi(4))
    }

    /// Mixed `∂²/∂axis0 ∂axis3` as the tensor product of first-derivative stencils.
    fn d_xt(&self) -> f64 {
        let mut s = 0.0;
        for &(mx, wx) in &D1 {
            for &(mt, wt) in &D1 {
                let mut q = self.p;
                q[0] += mx as f64 * self.h;
                q[3] += mt as f64 * self.h;
                s += wx * wt * (self.f)(q[0], q[1], q[2], q[3]);
            }
        }
        s / (144.0 * self.h * self.h)
    }
}

fn lhs(eq: &ResidualEquation, st: &Stencil) -> f64 {
    let (spec, cyl) = match eq {
        ResidualEquation::Cartesian(s) => (s, false),
        ResidualEquation::Cylindrical(s) => (s, true),
    };
    let rho = st.at(0, 0);
    let rx = st.d1(0);
    let rxx = st.d2(0);
    let core =
        st.d_xt() + spec.cs * rxx + spec.alpha * (rx * rx + rho * rxx) + spec.beta * st.d4(0);
    let half_cs = spec.cs / 2.0;
    if cyl {
        let t = st.p[3];
        core + rx / (2.0 * t) + st.d2(1) / (2.0 * spec.cs * t * t) + half_cs * st.d2(2)
    } else {
        core + half_cs * (st.d2(1) + st.d2(2))
    }
}

/// Substitutes `solution` into the equation with fourth-order central differences
/// at every probe point, for each step in `steps`, and reports the maximum absolute
/// residual per step together with the observed convergence orders.
pub fn residual_check(
    solution: &dyn Fn(f64, f64, f64, f64) -> f64,
    equation: ResidualEquation,
    probe: &ProbeBox,
    steps: &[f64],
) -> Result<ResidualReport> {
    if steps.len() < 2 {
        return Err(contract("residual check needs at least two step sizes"));
    }
    if steps.iter().any(|h| !(*h > 0.0)) || steps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(contract(
            "step sizes must be positive and strictly decreasing",
        ));
    }
    if probe.n.contains(&0) {
        return Err(contract("probe box needs at least one point per axis"));
    }
    if let ResidualEquation::Cylindrical(_) = equation {
        let t_min = probe.lo[3].min(probe.hi[3]) - 3.0 * steps[0];
        if !(t_min > 0.0) {
            return Err(domain("the cylindrical equation is only checked at t > 0"));
        }
    }
    let points = probe.points();
    let rows: Vec<ResidualRow> = steps
        .iter()
        .map(|&h| {
            let max_residual = points
                .iter()
                .map(|&p| lhs(&equation, &Stencil { f: solution, p, h }).abs())
                .fold(0.0, f64::max);
            ResidualRow { h, max_residual }
        })
        .collect();
    let exact = rows.iter().all(|r| r.max_residual == 0.0);
    let orders: Vec<f64> = rows
        .windows(2)
        .map(|w| (w[0].max_residual / w[1].max_residual).ln() / (w[0].h / w[1].h).ln())
        .collect();
    let failure = if exact {
        None
    } else {
        rows.windows(2)
            .position(|w| !(w[1].max_residual < w[0].max_residual))
            .map(|i| {
                format!(
                    "residual does not decrease from h = {} ({:e}) to h = {} ({:e})",
                    rows[i].h,
                    rows[i].max_residual,
                    rows[i + 1].h,
                    rows[i + 1].max_residual
                )
            })
    };
    Ok(ResidualReport {
        rows,
        orders,
        exact,
        failure,
    })
}
