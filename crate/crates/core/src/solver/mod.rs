//! Pseudo-spectral integration of the KdV, breaking-wave and cartesian KP equations
//! on periodic grids, and the finite-difference residual check of analytic solutions.
//!
//! All three equations are written in Fourier space as `v̂_t = L v̂ + N(v̂)` with
//!
//! ```text
//! L    = i(β k_x³ − c_s k_x − c_t k_⊥²/k_x)      (transverse part zero at k_x = 0)
//! N(v̂) = −α i k_x FFT(ρ²/2)                        (2/3-rule dealiased)
//! ```
//!
//! `L` is purely imaginary and odd in `k_x`, and `N` vanishes at `k_x = 0`, so the
//! mean of every x-line is carried forward unchanged.

mod breaking;
mod kp;
mod residual;
mod transform;

pub use breaking::{breaking_wave_integrate, characteristic_solution, estimated_breaking_time};
pub use kp::{kp_integrate, periodic_line_soliton, remove_x_means, track_line_speed, LineTrack};
pub use residual::{residual_check, ProbeBox, ResidualEquation, ResidualReport, ResidualRow};
pub use transform::kdv_xi_tau_transform;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{contract, Error, Result};
use crate::field::ScalarField3D;
use crate::kp_model::WaveEquationSpec;
use crate::spectral::{refined_peak_1d, Fft3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Integrator {
    /// Classical fourth-order Runge-Kutta on the full right-hand side.
    Rk4,
    /// Fourth-order exponential time differencing; the linear part is exact.
    EtdRk4,
}

impl Integrator {
    /// Stability constant in `dt ≤ C_stab / rate`.
    ///
    /// RK4 covers the imaginary axis up to `2√2`; 2.5 leaves a margin. For ETDRK4
    /// only the nonlinear rate enters, and 1.0 keeps the explicit nonlinear stages
    /// well inside their region.
    pub fn default_c_stab(self) -> f64 {
        match self {
            Self::Rk4 => 2.5,
            Self::EtdRk4 => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Rk4 => "rk4",
            Self::EtdRk4 => "etdrk4",
        }
    }
}

impl std::str::FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "").as_str() {
            "rk4" => Ok(Self::Rk4),
            "etdrk4" => Ok(Self::EtdRk4),
            _ => Err(Error::Config(format!(
                "unknown integrator '{s}' (expected rk4 or etdrk4)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Requested time step [fm]; the actual step divides `t_end` evenly and is never
    /// larger.
    pub dt: f64,
    /// Duration of the run [fm], measured from `t_start`.
    pub t_end: f64,
    /// Time label of the initial state [fm].
    pub t_start: f64,
    pub dealias: bool,
    pub integrator: Integrator,
    /// Record a snapshot every this many steps (the final state is always kept).
    pub snapshot_stride: usize,
    /// Overrides [`Integrator::default_c_stab`].
    pub c_stab: Option<f64>,
    /// A breaking-wave run stops once `max|ρ_x|` exceeds this multiple of its
    /// initial value.
    pub breaking_ratio: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_end: 50.0,
            t_start: 0.0,
            dealias: true,
            integrator: Integrator::Rk4,
            snapshot_stride: 100,
            c_stab: None,
            breaking_ratio: 20.0,
        }
    }
}

impl SolverConfig {
    pub fn c_stab(&self) -> f64 {
        self.c_stab
            .unwrap_or_else(|| self.integrator.default_c_stab())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if !self.t_start.is_finite() {
            return Err(Error::Config("t_start must be finite".into()));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot stride must be >= 1".into()));
        }
        if !(self.breaking_ratio > 1.0) {
            return Err(Error::Config("breaking ratio must be > 1".into()));
        }
        if let Some(c) = self.c_stab {
            if !(c > 0.0) {
                return Err(Error::Config("c_stab must be > 0".into()));
            }
        }
        Ok(())
    }

    /// Number of steps and the step actually taken.
    pub fn steps(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

/// Scalar diagnostics of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub time: f64,
    /// `∫ρ̂₁ dV`.
    pub mass: f64,
    pub l2: f64,
    pub peak_value: f64,
    /// Position of the maximum relative to the first grid node. Along x it is refined
    /// on the trigonometric interpolant for 1-D fields.
    pub peak_position: [f64; 3],
}

impl Diagnostics {
    pub fn of(field: &ScalarField3D, time: f64) -> Self {
        let (imax, vmax) =
            field
                .values
                .iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
                );
        let i = imax % field.nx;
        let j = (imax / field.nx) % field.ny;
        let k = imax / (field.nx * field.ny);
        let (mut px, mut pv) = (i as f64 * field.dx, vmax);
        if field.is_1d() && field.nx > 2 && field.all_finite() {
            let (x, v) = refined_peak_1d(&field.values, field.dx);
            px = x;
            pv = v;
        }
        Self {
            time,
            mass: field.integral(),
            l2: field.l2_norm(),
            peak_value: pv,
            peak_position: [px, j as f64 * field.dy, k as f64 * field.dz],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    pub field: ScalarField3D,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    /// Time-ordered recorded states, starting with the initial one.
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<Diagnostics>,
    pub steps: usize,
    /// Step actually used [fm].
    pub dt: f64,
    /// Set when a breaking-wave run stopped at the gradient catastrophe.
    pub breaking_time: Option<f64>,
}

impl EvolutionResult {
    pub fn last(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("at least the initial snapshot")
    }

    /// Largest `|mass(t) − mass(0)| / max(|mass(0)|, ∫|ρ|)` over the recorded states.
    pub fn mass_drift(&self) -> f64 {
        let first = &self.diagnostics[0];
        let scale = self.snapshots[0]
            .field
            .values
            .iter()
            .map(|v| v.abs())
            .sum::<f64>()
            * self.snapshots[0].field.cell_volume();
        let scale = first.mass.abs().max(scale).max(f64::MIN_POSITIVE);
        self.diagnostics
            .iter()
            .map(|d| (d.mass - first.mass).abs() / scale)
            .fold(0.0, f64::max)
    }

    fn push(&mut self, time: f64, field: ScalarField3D) {
        self.diagnostics.push(Diagnostics::of(&field, time));
        self.snapshots.push(Snapshot { time, field });
    }
}

/// Coefficients of the right-hand side.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rhs {
    pub cs: f64,
    pub alpha: f64,
    pub beta: f64,
    pub transverse: f64,
}

impl Rhs {
    pub fn from_spec(spec: &WaveEquationSpec) -> Self {
        Self {
            cs: spec.cs,
            alpha: spec.alpha,
            beta: spec.beta,
            transverse: spec.transverse_coeff,
        }
    }
}

/// Fourier-space right-hand side on one grid.
pub(crate) struct Engine {
    fft: Fft3,
    /// Linear symbol per mode.
    lin: Vec<Complex64>,
    /// `−α i k_x` times the dealiasing mask.
    nl: Vec<Complex64>,
    /// `i k_x` (Nyquist zeroed), for gradient monitoring.
    ddx: Vec<Complex64>,
    has_nonlinear: bool,
    k_max: [f64; 3],
    rhs: Rhs,
}

impl Engine {
    pub fn new(field: &ScalarField3D, rhs: Rhs, dealias: bool) -> Self {
        let fft = Fft3::for_field(field);
        let mask = if dealias {
            fft.two_thirds_mask()
        } else {
            vec![true; fft.len()]
        };
        let nyq_x = fft.nyquist(0);
        let n = fft.len();
        let mut lin = vec![Complex64::new(0.0, 0.0); n];
        let mut nl = vec![Complex64::new(0.0, 0.0); n];
        let mut ddx = vec![Complex64::new(0.0, 0.0); n];
        fft.for_each_mode(|idx, k, [i, _, _]| {
            let kx = k[0];
            if i == 0 || nyq_x == Some(i) {
                return;
            }
            let kperp2 = k[1] * k[1] + k[2] * k[2];
            let omega = rhs.beta * kx * kx * kx - rhs.cs * kx - rhs.transverse * kperp2 / kx;
            lin[idx] = Complex64::new(0.0, omega);
            ddx[idx] = Complex64::new(0.0, kx);
            if mask[idx] {
                nl[idx] = Complex64::new(0.0, -rhs.alpha * kx);
            }
        });
        let k_max = [0, 1, 2].map(|a| fft.k(a).iter().fold(0.0, |m: f64, v| m.max(v.abs())));
        Self {
            fft,
            lin,
            nl,
            ddx,
            has_nonlinear: rhs.alpha != 0.0,
            k_max,
            rhs,
        }
    }

    /// Largest linear rate `|L|` over all modes.
    pub fn linear_rate(&self) -> f64 {
        self.lin.iter().fold(0.0, |m, l| m.max(l.im.abs()))
    }

    /// Nonlinear advection rate `|α| max|ρ| k_max`.
    pub fn nonlinear_rate(&self, max_abs: f64) -> f64 {
        self.rhs.alpha.abs() * max_abs * self.k_max[0]
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        self.fft.forward_real(values)
    }

    pub fn inverse(&self, spec: &[Complex64]) -> Vec<f64> {
        self.fft.inverse_real(spec)
    }

    pub fn nonlinear(&self, v: &[Complex64]) -> Vec<Complex64> {
        if !self.has_nonlinear {
            return vec![Complex64::new(0.0, 0.0); v.len()];
        }
        let rho = self.inverse(v);
        let half_sq: Vec<f64> = rho.iter().map(|r| 0.5 * r * r).collect();
        let mut s = self.forward(&half_sq);
        for (s, c) in s.iter_mut().zip(&self.nl) {
            *s *= c;
        }
        s
    }

    fn full_rhs(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut n = self.nonlinear(v);
        for ((n, l), v) in n.iter_mut().zip(&self.lin).zip(v) {
            *n += l * v;
        }
        n
    }

    /// `max|ρ_x|` of the state.
    pub fn max_abs_dx(&self, v: &[Complex64]) -> f64 {
        let d: Vec<Complex64> = v.iter().zip(&self.ddx).map(|(a, b)| a * b).collect();
        self.inverse(&d).iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Precomputed ETDRK4 coefficients for a diagonal linear operator.
struct EtdCoefficients {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl EtdCoefficients {
    /// Contour-integral evaluation of the φ-functions (32 points on a unit circle
    /// around each `hL`), which avoids the cancellation of the direct formulas.
    fn new(lin: &[Complex64], h: f64) -> Self {
        const M: usize = 32;
        let roots: Vec<Complex64> = (0..M)
            .map(|j| {
                let theta = std::f64::consts::PI * (j as f64 + 0.5) / M as f64 * 2.0;
                Complex64::from_polar(1.0, theta)
            })
            .collect();
        let n = lin.len();
        let mut out = Self {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &l in lin {
            let hl = l * h;
            out.e.push(hl.exp());
            out.e2.push((hl / 2.0).exp());
            let (mut q, mut f1, mut f2, mut f3) = (
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            );
            for r in &roots {
                let z = hl + r;
                let ez = z.exp();
                let z3 = z * z * z;
                q += ((z / 2.0).exp() - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                f2 += (2.0 + z + ez * (z - 2.0)) / z3;
                f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
            let s = h / M as f64;
            out.q.push(q * s);
            out.f1.push(f1 * s);
            out.f2.push(f2 * s);
            out.f3.push(f3 * s);
        }
        out
    }
}

fn axpy(a: &[Complex64], s: Complex64, b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Hooks a caller can attach to the time loop.
pub(crate) struct StepControl {
    /// Stop once `max|ρ_x|` exceeds this value.
    pub gradient_limit: Option<f64>,
}

/// Shared time loop.
pub(crate) fn evolve(
    initial: &ScalarField3D,
    rhs: Rhs,
    cfg: &SolverConfig,
    control: StepControl,
) -> Result<EvolutionResult> {
    cfg.validate()?;
    initial.require_periodic("spectral time integration")?;
    if let Some(n) = initial.dims().iter().find(|n| !n.is_power_of_two()) {
        return Err(Error::Config(format!(
            "grid sizes must be powers of two, got {n}"
        )));
    }
    if !initial.all_finite() {
        return Err(contract("initial field has non-finite samples"));
    }
    let engine = Engine::new(initial, rhs, cfg.dealias);
    let (steps, h) = cfg.steps();

    // Stability bound at the initial amplitude.
    let nl_rate = engine.nonlinear_rate(initial.max_abs());
    let rate = match cfg.integrator {
        Integrator::Rk4 => engine.linear_rate() + nl_rate,
        Integrator::EtdRk4 => nl_rate,
    };
    if rate > 0.0 && h > cfg.c_stab() / rate {
        return Err(Error::Config(format!(
            "dt = {h} exceeds the {} stability bound {:.6e} (C_stab = {}, rate = {rate:.6e} fm^-1)",
            cfg.integrator.name(),
            cfg.c_stab() / rate,
            cfg.c_stab()
        )));
    }

    let mut result = EvolutionResult {
        snapshots: Vec::new(),
        diagnostics: Vec::new(),
        steps: 0,
        dt: h,
        breaking_time: None,
    };
    result.push(cfg.t_start, initial.clone());

    let etd =
        matches!(cfg.integrator, Integrator::EtdRk4).then(|| EtdCoefficients::new(&engine.lin, h));
    let mut v = engine.forward(&initial.values);
    let blowup = 1e6 * initial.max_abs().max(1.0);
    let two = Complex64::new(2.0, 0.0);
    let half_h = Complex64::new(h / 2.0, 0.0);

    for step in 1..=steps {
        v = match &etd {
            None => {
                let k1 = engine.full_rhs(&v);
                let k2 = engine.full_rhs(&axpy(&v, half_h, &k1));
                let k3 = engine.full_rhs(&axpy(&v, half_h, &k2));
                let k4 = engine.full_rhs(&axpy(&v, Complex64::new(h, 0.0), &k3));
                v.iter()
                    .enumerate()
                    .map(|(i, x)| x + (k1[i] + two * k2[i] + two * k3[i] + k4[i]) * (h / 6.0))
                    .collect()
            }
            Some(c) => {
                let nv = engine.nonlinear(&v);
                let a: Vec<Complex64> = (0..v.len())
                    .map(|i| c.e2[i] * v[i] + c.q[i] * nv[i])
                    .collect();
                let na = engine.nonlinear(&a);
                let b: Vec<Complex64> = (0..v.len())
                    .map(|i| c.e2[i] * v[i] + c.q[i] * na[i])
                    .collect();
                let nb = engine.nonlinear(&b);
                let cc: Vec<Complex64> = (0..v.len())
                    .map(|i| c.e2[i] * a[i] + c.q[i] * (two * nb[i] - nv[i]))
                    .collect();
                let nc = engine.nonlinear(&cc);
                (0..v.len())
                    .map(|i| {
                        c.e[i] * v[i]
                            + nv[i] * c.f1[i]
                            + two * (na[i] + nb[i]) * c.f2[i]
                            + nc[i] * c.f3[i]
                    })
                    .collect()
            }
        };
        let t = cfg.t_start + step as f64 * h;
        result.steps = step;

        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(diverged(result, t, "non-finite spectrum"));
        }
        let is_last = step == steps;
        let record = step % cfg.snapshot_stride == 0 || is_last;

        if let Some(limit) = control.gradient_limit {
            let g = engine.max_abs_dx(&v);
            if g > limit {
                result.breaking_time = Some(t);
                result.push(t, initial.with_values(engine.inverse(&v)));
                return Ok(result);
            }
        }
        if record {
            let values = engine.inverse(&v);
            let max = values.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
            if !(max < blowup) {
                return Err(diverged(result, t, &format!("max|rho| = {max:e}")));
            }
            result.push(t, initial.with_values(values));
        }
    }
    Ok(result)
}

fn diverged(result: EvolutionResult, time: f64, reason: &str) -> Error {
    Error::Diverged {
        time,
        reason: reason.to_string(),
        partial: Box::new(result),
    }
}

/// Integrates `ρ_t = −c_s ρ_x − α ρρ_x − β ρ_xxx` on a periodic 1-D field.
pub fn kdv_integrate(
    spec: &WaveEquationSpec,
    initial: &ScalarField3D,
    cfg: &SolverConfig,
) -> Result<EvolutionResult> {
    if !initial.is_1d() {
        return Err(contract(format!(
            "KdV integration needs a 1-D field, got {:?}",
            initial.dims()
        )));
    }
    evolve(
        initial,
        Rhs::from_spec(&spec.without_transverse()),
        cfg,
        StepControl {
            gradient_limit: None,
        },
    )
}
