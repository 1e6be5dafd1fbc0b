//! Linear pressure waves on a uniform background.
//!
//! Small perturbations `δp` of a perfect fluid at rest obey
//! `∇²δp − c_s⁻² ∂²_t δp = 0`, the energy-density perturbation follows from
//! `δε = δp / c_s²` and the velocity from `(ε₀ + p₀) ∂_t v = −∇δp`.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::eos::{energy_density_uniform, pressure_uniform, EosParameters};
use crate::error::{contract, domain, Error, Result};
use crate::field::ScalarField3D;
use crate::solver::{Diagnostics, EvolutionResult, Snapshot};
use crate::spectral::Fft3;

/// Pressure of massless quarks in a bag: `p = ε/3 − 4B/3`.
pub fn mit_bag_pressure(eps: f64, bag: f64) -> f64 {
    if eps < bag {
        log::warn!("eps = {eps} < B = {bag}: the quark pressure contribution is negative");
    }
    eps / 3.0 - 4.0 * bag / 3.0
}

/// `δε = δp / c_s²`.
pub fn energy_density_perturbation(delta_p: f64, cs: f64) -> f64 {
    delta_p / (cs * cs)
}

/// Plane wave `amp·cos(k·x − c_s|k|t)` travelling along `k`.
pub fn plane_wave(amp: f64, k: [f64; 3], cs: f64, x: [f64; 3], t: f64) -> f64 {
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    amp * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] - cs * kn * t).cos()
}

/// Background and initial perturbation of a 1-D acoustic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticState {
    /// [fm⁻⁴]
    pub eps0: f64,
    /// [fm⁻⁴]
    pub p0: f64,
    pub cs: f64,
    /// `δp(x, 0)` [fm⁻⁴].
    pub delta_p: ScalarField3D,
    /// `∂_t δp(x, 0)` [fm⁻⁵].
    pub delta_p_t: ScalarField3D,
}

impl AcousticState {
    pub fn new(
        eps0: f64,
        p0: f64,
        cs: f64,
        delta_p: ScalarField3D,
        delta_p_t: ScalarField3D,
    ) -> Result<Self> {
        if !(eps0 + p0 > 0.0) {
            return Err(domain(format!(
                "enthalpy density eps0 + p0 = {} must be > 0",
                eps0 + p0
            )));
        }
        if !(cs > 0.0 && cs < 1.0) {
            return Err(domain(format!("cs must lie in (0, 1), got {cs}")));
        }
        if !delta_p.is_1d() || !delta_p.same_grid(&delta_p_t) {
            return Err(contract("δp and ∂tδp must be 1-D fields on the same grid"));
        }
        delta_p.require_periodic("acoustic solve")?;
        let state = Self {
            eps0,
            p0,
            cs,
            delta_p,
            delta_p_t,
        };
        if !state.is_linear() {
            log::warn!(
                "max|δp| = {} exceeds 10% of p0 = {}; linearisation may not hold",
                state.delta_p.max_abs(),
                p0
            );
        }
        Ok(state)
    }

    /// Background from the uniform equation of state at `p.rho0`, with the sound
    /// speed of that medium.
    pub fn from_eos(
        p: &EosParameters,
        delta_p: ScalarField3D,
        delta_p_t: ScalarField3D,
    ) -> Result<Self> {
        let (cs, _) = crate::eos::speed_of_sound(p)?;
        Self::new(
            energy_density_uniform(p, p.rho0)?,
            pressure_uniform(p, p.rho0)?,
            cs,
            delta_p,
            delta_p_t,
        )
    }

    pub fn enthalpy(&self) -> f64 {
        self.eps0 + self.p0
    }

    /// `max|δp| ≤ 0.1|p0|`.
    pub fn is_linear(&self) -> bool {
        self.delta_p.max_abs() <= 0.1 * self.p0.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AcousticScheme {
    /// Exact propagation of every Fourier mode.
    Spectral,
    /// Second-order leapfrog with the three-point Laplacian; needs `c_s dt/dx ≤ 1`.
    Leapfrog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcousticConfig {
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub scheme: AcousticScheme,
}

impl Default for AcousticConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            t_end: 10.0,
            snapshot_stride: 10,
            scheme: AcousticScheme::Spectral,
        }
    }
}

/// Result of an acoustic run: `δp` snapshots plus the matching time derivatives and
/// energies.
#[derive(Debug, Clone)]
pub struct AcousticEvolution {
    pub result: EvolutionResult,
    /// `∂_t δp` at every snapshot.
    pub rates: Vec<ScalarField3D>,
    /// `∫[(∂_t δp)²/c_s² + (∂_x δp)²] dx` at every snapshot.
    pub energy: Vec<f64>,
}

impl AcousticEvolution {
    /// Largest relative deviation of the energy from its initial value.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy
            .iter()
            .map(|e| (e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Spectral `∂x` of a periodic 1-D sample set.
fn ddx(fft: &Fft3, values: &[f64]) -> Vec<f64> {
    let mut s = fft.forward_real(values);
    fft.for_each_mode(|idx, _, [i, _, _]| s[idx] *= fft.derivative_symbol(0, 1, i));
    fft.inverse_real(&s)
}

/// Quadratic wave energy `∫[(∂_t δp)²/c_s² + (∂_x δp)²] dx`.
pub fn wave_energy(delta_p: &ScalarField3D, delta_p_t: &ScalarField3D, cs: f64) -> f64 {
    let fft = Fft3::for_field(delta_p);
    let dx = ddx(&fft, &delta_p.values);
    let sum: f64 = delta_p_t
        .values
        .iter()
        .zip(&dx)
        .map(|(pt, px)| pt * pt / (cs * cs) + px * px)
        .sum();
    sum * delta_p.dx
}

/// Solves `∂²_t δp = c_s² ∂²_x δp` on a periodic line.
pub fn acoustic_wave_solve_1d(
    state: &AcousticState,
    cfg: &AcousticConfig,
) -> Result<AcousticEvolution> {
    if !(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) || cfg.snapshot_stride == 0 {
        return Err(Error::Config(
            "acoustic run needs dt > 0, t_end >= 0 and stride >= 1".into(),
        ));
    }
    let n_steps = if cfg.t_end == 0.0 {
        0
    } else {
        (cfg.t_end / cfg.dt - 1e-9).ceil().max(1.0) as usize
    };
    let h = if n_steps == 0 {
        cfg.dt
    } else {
        cfg.t_end / n_steps as f64
    };
    let courant = state.cs * h / state.delta_p.dx;
    if cfg.scheme == AcousticScheme::Leapfrog && courant > 1.0 {
        return Err(Error::Config(format!(
            "leapfrog CFL violated: cs·dt/dx = {courant} > 1"
        )));
    }
    let record: Vec<usize> = (0..=n_steps)
        .filter(|s| s % cfg.snapshot_stride == 0 || *s == n_steps)
        .collect();
    let (fields, rates) = match cfg.scheme {
        AcousticScheme::Spectral => spectral(state, h, &record),
        AcousticScheme::Leapfrog => leapfrog(state, h, n_steps, &record),
    };
    let mut result = EvolutionResult {
        snapshots: Vec::with_capacity(record.len()),
        diagnostics: Vec::with_capacity(record.len()),
        steps: n_steps,
        dt: h,
        breaking_time: None,
    };
    let mut energy = Vec::with_capacity(record.len());
    for ((s, f), r) in record.iter().zip(fields).zip(&rates) {
        let t = *s as f64 * h;
        energy.push(wave_energy(&f, r, state.cs));
        result.diagnostics.push(Diagnostics::of(&f, t));
        result.snapshots.push(Snapshot { time: t, field: f });
    }
    Ok(AcousticEvolution {
        result,
        rates,
        energy,
    })
}

fn spectral(
    state: &AcousticState,
    h: f64,
    record: &[usize],
) -> (Vec<ScalarField3D>, Vec<ScalarField3D>) {
    let fft = Fft3::for_field(&state.delta_p);
    let p0 = fft.forward_real(&state.delta_p.values);
    let q0 = fft.forward_real(&state.delta_p_t.values);
    let k = fft.k(0).to_vec();
    let mut fields = Vec::with_capacity(record.len());
    let mut rates = Vec::with_capacity(record.len());
    for &s in record {
        let t = s as f64 * h;
        let mut p = vec![Complex64::new(0.0, 0.0); p0.len()];
        let mut q = p.clone();
        for i in 0..p0.len() {
            let w = state.cs * k[i].abs();
            if w == 0.0 {
                p[i] = p0[i] + q0[i] * t;
                q[i] = q0[i];
            } else {
                let (sn, cn) = (w * t).sin_cos();
                p[i] = p0[i] * cn + q0[i] * (sn / w);
                q[i] = -p0[i] * (w * sn) + q0[i] * cn;
            }
        }
        fields.push(state.delta_p.with_values(fft.inverse_real(&p)));
        rates.push(state.delta_p.with_values(fft.inverse_real(&q)));
    }
    (fields, rates)
}

fn leapfrog(
    state: &AcousticState,
    h: f64,
    n_steps: usize,
    record: &[usize],
) -> (Vec<ScalarField3D>, Vec<ScalarField3D>) {
    let n = state.delta_p.nx;
    let c2 = (state.cs * h / state.delta_p.dx).powi(2);
    let lap = |p: &[f64], i: usize| p[(i + n - 1) % n] - 2.0 * p[i] + p[(i + 1) % n];
    let p0 = state.delta_p.values.clone();
    let q0 = &state.delta_p_t.values;
    let mut prev = p0.clone();
    let mut cur: Vec<f64> = (0..n)
        .map(|i| p0[i] + h * q0[i] + 0.5 * c2 * lap(&p0, i))
        .collect();
    let mut fields = Vec::with_capacity(record.len());
    let mut rates = Vec::with_capacity(record.len());
    let mut want = record.iter().peekable();
    if want.peek() == Some(&&0) {
        fields.push(state.delta_p.clone());
        rates.push(state.delta_p_t.clone());
        want.next();
    }
    for step in 1..=n_steps {
        let next: Vec<f64> = (0..n)
            .map(|i| 2.0 * cur[i] - prev[i] + c2 * lap(&cur, i))
            .collect();
        if want.peek() == Some(&&step) {
            fields.push(state.delta_p.with_values(cur.clone()));
            let rate = (0..n).map(|i| (next[i] - prev[i]) / (2.0 * h)).collect();
            rates.push(state.delta_p.with_values(rate));
            want.next();
        }
        prev = std::mem::replace(&mut cur, next);
    }
    (fields, rates)
}

/// Velocity `v = −(ε₀ + p₀)⁻¹ ∫ ∂_x δp dt` at every snapshot of `history`.
///
/// The time integral is the antiderivative without an added constant, so the
/// initial velocity is fixed by the initial data: `v̂(0) = i k ∂_t δp̂(0)/((ε₀+p₀)ω²)`
/// for every mode with `ω = c_s|k| ≠ 0`. Between snapshots the integral uses the
/// trapezoid rule with endpoint-derivative correction (fourth order in the spacing).
pub fn velocity_from_pressure(
    state: &AcousticState,
    history: &AcousticEvolution,
) -> Result<Vec<ScalarField3D>> {
    let snaps = &history.result.snapshots;
    if snaps.len() < 2 || history.rates.len() != snaps.len() {
        return Err(Error::InsufficientHistory(format!(
            "velocity recovery needs at least two snapshots with rates, got {}",
            snaps.len()
        )));
    }
    let w = state.enthalpy();
    let fft = Fft3::for_field(&snaps[0].field);
    let k = fft.k(0).to_vec();
    let nyq = fft.nyquist(0);
    let q0 = fft.forward_real(&history.rates[0].values);
    let mut v0 = vec![Complex64::new(0.0, 0.0); q0.len()];
    for i in 0..q0.len() {
        let om = state.cs * k[i].abs();
        if om != 0.0 && nyq != Some(i) {
            v0[i] = Complex64::new(0.0, k[i]) * q0[i] / (w * om * om);
        }
    }
    let mut v = fft.inverse_real(&v0);
    let grads: Vec<Vec<f64>> = snaps.iter().map(|s| ddx(&fft, &s.field.values)).collect();
    let grad_rates: Vec<Vec<f64>> = history.rates.iter().map(|r| ddx(&fft, &r.values)).collect();
    let mut out = vec![snaps[0].field.with_values(v.clone())];
    for s in 1..snaps.len() {
        let h = snaps[s].time - snaps[s - 1].time;
        for i in 0..v.len() {
            let integral = h / 2.0 * (grads[s - 1][i] + grads[s][i])
                + h * h / 12.0 * (grad_rates[s - 1][i] - grad_rates[s][i]);
            v[i] -= integral / w;
        }
        out.push(snaps[s].field.with_values(v.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(p: ScalarField3D, q: ScalarField3D) -> AcousticState {
        AcousticState::new(3.0, 1.0, 1.0 / 3.0f64.sqrt(), p, q).unwrap()
    }

    #[test]
    fn bag_relation() {
        assert_eq!(mit_bag_pressure(4.0, 1.0), 0.0);
        assert_eq!(mit_bag_pressure(3.0, 0.0), 1.0);
        assert_eq!(energy_density_perturbation(1.0, 0.5), 4.0);
    }

    #[test]
    fn zero_data_stays_zero() {
        let z = ScalarField3D::periodic_1d(vec![0.0; 32], 0.5).unwrap();
        let s = state(z.clone(), z.clone());
        for scheme in [AcousticScheme::Spectral, AcousticScheme::Leapfrog] {
            let cfg = AcousticConfig {
                scheme,
                ..Default::default()
            };
            let r = acoustic_wave_solve_1d(&s, &cfg).unwrap();
            assert!(r.result.snapshots.iter().all(|s| s.field.max_abs() == 0.0));
        }
    }

    #[test]
    fn leapfrog_cfl() {
        let z = ScalarField3D::periodic_1d(vec![0.0; 32], 0.1).unwrap();
        let s = state(z.clone(), z);
        let cfg = AcousticConfig {
            dt: 0.5,
            scheme: AcousticScheme::Leapfrog,
            ..Default::default()
        };
        assert!(matches!(
            acoustic_wave_solve_1d(&s, &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn leapfrog_standing_mode() {
        let l = 20.0;
        let k = 2.0 * PI / l;
        let p = ScalarField3D::sample_1d(256, 0.0, l, |x| (k * x).sin()).unwrap();
        let s = state(p.clone(), p.zeros_like());
        let cfg = AcousticConfig {
            dt: 0.01,
            t_end: 10.0,
            snapshot_stride: 1000,
            scheme: AcousticScheme::Leapfrog,
        };
        let r = acoustic_wave_solve_1d(&s, &cfg).unwrap();
        let w = s.cs * k;
        let exact = p.with_values(p.values.iter().map(|v| v * (w * 10.0).cos()).collect());
        assert!(r.result.last().field.max_diff(&exact) < 1e-3);
    }

    #[test]
    fn single_snapshot_is_insufficient() {
        let p = ScalarField3D::sample_1d(16, 0.0, 1.0, |x| x.sin()).unwrap();
        let s = state(p.clone(), p.zeros_like());
        let cfg = AcousticConfig {
            t_end: 0.0,
            ..Default::default()
        };
        let r = acoustic_wave_solve_1d(&s, &cfg).unwrap();
        assert!(matches!(
            velocity_from_pressure(&s, &r),
            Err(Error::InsufficientHistory(_))
        ));
    }

    #[test]
    fn plane_wave_moves_at_sound_speed() {
        let cs = 0.6;
        let k = [0.3, 0.4, 0.0];
        let a = plane_wave(1.0, k, cs, [0.0; 3], 0.0);
        let b = plane_wave(1.0, k, cs, [0.6 * 2.0, 0.8 * 2.0, 0.0], 2.0 / cs);
        assert!((a - b).abs() < 1e-12);
    }
}
