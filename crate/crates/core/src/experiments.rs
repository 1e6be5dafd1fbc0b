//! Reproducible numerical runs shared by the command line tool and the tests:
//! soliton propagation under the KdV and KP integrators, the acoustic pulse and
//! residual checks of the closed-form solitons.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::acoustics::{
    acoustic_wave_solve_1d, AcousticConfig, AcousticEvolution, AcousticScheme, AcousticState,
};
use crate::eos::EosParameters;
use crate::error::{domain, Result};
use crate::field::ScalarField3D;
use crate::kp_model::{WaveEquationKind, WaveEquationSpec};
use crate::solitons::{CkpSoliton, KdvSoliton, KpLineSoliton, KpSoliton, SolitonCart, SolitonCyl};
use crate::solver::{
    kdv_integrate, kp_integrate, periodic_line_soliton, remove_x_means, residual_check,
    track_line_speed, EvolutionResult, Integrator, LineTrack, ProbeBox, ResidualEquation,
    ResidualReport, SolverConfig,
};
use crate::spectral::{refined_peak_1d, Fft3};

/// Least-squares slope of `x(t)`.
fn fit_slope(t: &[f64], x: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let xm = x.iter().sum::<f64>() / n;
    let num: f64 = t.iter().zip(x).map(|(a, b)| (a - tm) * (b - xm)).sum();
    let den: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    num / den
}

/// Unwraps periodic positions assuming jumps below half a period.
fn unwrap(positions: &[f64], length: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(positions.len());
    let mut offset = 0.0;
    for (i, &p) in positions.iter().enumerate() {
        if i > 0 {
            let prev = positions[i - 1];
            if p - prev < -length / 2.0 {
                offset += length;
            } else if p - prev > length / 2.0 {
                offset -= length;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Field translated by `shift` along x (spectrally, so any real shift is allowed).
pub fn shift_x(field: &ScalarField3D, shift: f64) -> ScalarField3D {
    let fft = Fft3::for_field(field);
    let mut s = fft.forward_real(&field.values);
    let nyq = fft.nyquist(0);
    fft.for_each_mode(|idx, [kx, _, _], [i, _, _]| {
        if nyq == Some(i) {
            s[idx] = Complex64::new(s[idx].re * (kx * shift).cos(), 0.0);
        } else {
            s[idx] *= Complex64::from_polar(1.0, -kx * shift);
        }
    });
    field.with_values(fft.inverse_real(&s))
}

fn relative_l2(a: &ScalarField3D, reference: &ScalarField3D) -> f64 {
    let num: f64 = a
        .values
        .iter()
        .zip(&reference.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let den: f64 = reference.values.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Propagation of a single KdV soliton on a periodic line.
#[derive(Debug, Clone, Serialize)]
pub struct KdvRun {
    pub soliton: KdvSoliton,
    #[serde(skip)]
    pub result: EvolutionResult,
    /// Final over initial peak value.
    pub peak_ratio: f64,
    /// Slope of the tracked crest position [c].
    pub measured_speed: f64,
    pub expected_speed: f64,
    pub mass_drift: f64,
}

/// Starts the soliton of amplitude `amplitude` at a quarter of the box and
/// integrates it for `cfg.t_end`.
pub fn kdv_soliton_run(
    spec: &WaveEquationSpec,
    amplitude: f64,
    length: f64,
    n: usize,
    cfg: &SolverConfig,
) -> Result<KdvRun> {
    let soliton = KdvSoliton::from_amplitude(spec, amplitude, length / 4.0)?;
    let initial = soliton.periodic_field(n, length, 0.0)?;
    let result = kdv_integrate(spec, &initial, cfg)?;
    let times: Vec<f64> = result.diagnostics.iter().map(|d| d.time).collect();
    let raw: Vec<f64> = result
        .diagnostics
        .iter()
        .map(|d| d.peak_position[0])
        .collect();
    let positions = unwrap(&raw, length);
    let measured_speed = if times.len() >= 2 {
        fit_slope(&times, &positions)
    } else {
        f64::NAN
    };
    let d = &result.diagnostics;
    Ok(KdvRun {
        soliton,
        peak_ratio: d[d.len() - 1].peak_value / d[0].peak_value,
        measured_speed,
        expected_speed: soliton.speed,
        mass_drift: result.mass_drift(),
        result,
    })
}

/// Box and time window of a 2-D KP run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KpBox {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub integrator: Integrator,
    pub snapshot_stride: usize,
}

impl Default for KpBox {
    fn default() -> Self {
        Self {
            nx: 256,
            ny: 128,
            lx: 20.0,
            ly: 15.0,
            t_start: 30.0,
            t_end: 120.0,
            dt: 0.05,
            integrator: Integrator::EtdRk4,
            snapshot_stride: 150,
        }
    }
}

/// 2-D KP evolution of the tilted cartesian line soliton.
#[derive(Debug, Clone, Serialize)]
pub struct KpRun {
    #[serde(skip)]
    pub result: EvolutionResult,
    #[serde(skip)]
    pub track: LineTrack,
    /// Transverse direction constant of the reduced problem, `√(ℬ² + 𝒞²)`.
    pub b_eff: f64,
    pub amplitude: f64,
    /// Mean removed from every x-line of the initial data.
    pub mean: f64,
    /// Measured crest speed along x.
    pub measured_speed: f64,
    /// Crest speed along x of the formula as written, `U/𝒜 − α·mean`.
    pub printed_speed: f64,
    /// Crest speed along x of the exact line soliton, `V/𝒜 − α·mean`.
    pub consistent_speed: f64,
    /// Relative L2 distance between the final state and the initial state moved
    /// by the measured displacement.
    pub shape_error: f64,
}

/// Integrates the line soliton `sol` from `bx.t_start` to `bx.t_end`.
///
/// The transverse dependence only enters through `ℬy + 𝒞z`, so the run uses the
/// rotated transverse coordinate with direction constant `√(ℬ² + 𝒞²)`. The periodic
/// initial data have their x-line means removed, which lowers the crest speed by
/// `α·mean`.
pub fn kp_line_run(spec: &WaveEquationSpec, sol: &SolitonCart, bx: &KpBox) -> Result<KpRun> {
    let printed = KpSoliton::new(spec, sol)?;
    let line = KpLineSoliton::new(spec, sol)?;
    let b_eff = sol.b_dir.hypot(sol.c_dir);
    let raw = periodic_line_soliton(
        printed.amplitude,
        printed.k,
        sol.a_dir,
        b_eff,
        printed.speed,
        bx.t_start,
        [bx.nx, bx.ny],
        [bx.lx, bx.ly],
        [0.0, 0.0],
        2,
    )?;
    let (initial, means) = remove_x_means(&raw);
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    let cfg = SolverConfig {
        dt: bx.dt,
        t_end: bx.t_end - bx.t_start,
        t_start: bx.t_start,
        dealias: true,
        integrator: bx.integrator,
        snapshot_stride: bx.snapshot_stride,
        c_stab: None,
        breaking_ratio: 20.0,
    };
    let two_d = WaveEquationSpec::custom(WaveEquationKind::KpCart, spec.cs, spec.alpha, spec.beta);
    let result = kp_integrate(&two_d, &initial, &cfg)?;
    let track = track_line_speed(&result)?;
    let displacement: f64 = {
        let last = &track.positions[track.positions.len() - 1];
        let first = &track.positions[0];
        last.iter().zip(first).map(|(a, b)| a - b).sum::<f64>() / first.len() as f64
    };
    let shape_error = relative_l2(&result.last().field, &shift_x(&initial, displacement));
    Ok(KpRun {
        b_eff,
        amplitude: printed.amplitude,
        mean,
        measured_speed: track.speed,
        printed_speed: sol.u / sol.a_dir - spec.alpha * mean,
        consistent_speed: line.speed() / sol.a_dir - spec.alpha * mean,
        shape_error,
        result,
        track,
    })
}

/// Pulse transport by the linear acoustic solver.
#[derive(Debug, Clone, Serialize)]
pub struct AcousticRun {
    #[serde(skip)]
    pub evolution: AcousticEvolution,
    #[serde(skip)]
    pub state: AcousticState,
    pub cs: f64,
    pub dx: f64,
    pub t_end: f64,
    pub expected_position: f64,
    pub measured_position: f64,
    /// Periodic distance between the two positions [fm].
    pub position_error: f64,
    pub energy_drift: f64,
}

/// Parameters of the right-moving Gaussian pressure pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseSetup {
    pub n: usize,
    pub length: f64,
    /// Gaussian width `w` in `exp(−((x − x0)/w)²)` [fm].
    pub width: f64,
    /// Peak `δp` [fm⁻⁴].
    pub amplitude: f64,
    /// Run time in units of the time the pulse needs to cross its own width.
    pub crossings: f64,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub scheme: AcousticScheme,
}

pub fn acoustic_pulse_run(p: &EosParameters, setup: &PulseSetup) -> Result<AcousticRun> {
    if !(setup.width > 0.0 && setup.length > 8.0 * setup.width) {
        return Err(domain(
            "the pulse width must be positive and below length/8",
        ));
    }
    let x0 = setup.length / 4.0;
    let pulse = |x: f64| {
        (-2..=2)
            .map(|m| {
                let s = (x - x0 + m as f64 * setup.length) / setup.width;
                setup.amplitude * (-s * s).exp()
            })
            .sum::<f64>()
    };
    let delta_p = ScalarField3D::sample_1d(setup.n, 0.0, setup.length, pulse)?;
    let (cs, _) = crate::eos::speed_of_sound(p)?;
    // right-moving: ∂_t δp = −c_s ∂_x δp
    let grad = crate::spectral::derivative(&delta_p, 0, 1)?;
    let delta_p_t = grad.with_values(grad.values.iter().map(|g| -cs * g).collect());
    let state = AcousticState::from_eos(p, delta_p, delta_p_t)?;
    let t_end = setup.crossings * setup.width / cs;
    let cfg = AcousticConfig {
        dt: setup.dt,
        t_end,
        snapshot_stride: setup.snapshot_stride,
        scheme: setup.scheme,
    };
    let evolution = acoustic_wave_solve_1d(&state, &cfg)?;
    let last = evolution.result.last();
    let (measured, _) = refined_peak_1d(&last.field.values, last.field.dx);
    let expected = (x0 + cs * last.time).rem_euclid(setup.length);
    let mut err = (measured - expected).rem_euclid(setup.length);
    if err > setup.length / 2.0 {
        err = setup.length - err;
    }
    Ok(AcousticRun {
        cs,
        dx: last.field.dx,
        t_end: last.time,
        expected_position: expected,
        measured_position: measured,
        position_error: err,
        energy_drift: evolution.energy_drift(),
        evolution,
        state,
    })
}

fn halvings(h0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|i| h0 / 2f64.powi(i as i32)).collect()
}

/// Residual of the cylindrical soliton in a box around its crest at time `t`.
pub fn ckp_residual(
    spec: &WaveEquationSpec,
    sol: &SolitonCyl,
    t: f64,
    h0: f64,
    levels: usize,
) -> Result<ResidualReport> {
    let s = CkpSoliton::new(spec, sol)?;
    let r0 = s.peak_radius(0.0, 0.0, t);
    let width = 1.0 / (sol.a * s.k);
    let probe = ProbeBox {
        lo: [r0 - 2.0 * width, 0.0, 0.0, t - 0.5],
        hi: [r0 + 2.0 * width, 0.5, 1.0, t + 0.5],
        n: [9, 3, 3, 3],
    };
    residual_check(
        &move |r, phi, z, tt| s.eval(r, phi, z, tt),
        ResidualEquation::Cylindrical(*spec),
        &probe,
        &halvings(h0, levels),
    )
}

/// Residual of the cartesian soliton (as written, or the exact line soliton when
/// `consistent`) in a box around its crest at time `t`.
pub fn kp_residual(
    spec: &WaveEquationSpec,
    sol: &SolitonCart,
    t: f64,
    h0: f64,
    levels: usize,
    consistent: bool,
) -> Result<ResidualReport> {
    let s = if consistent {
        KpLineSoliton::new(spec, sol)?.0
    } else {
        KpSoliton::new(spec, sol)?
    };
    let x0 = s.speed * t / sol.a_dir;
    let width = 1.0 / (sol.a_dir * s.k);
    let probe = ProbeBox {
        lo: [x0 - 2.0 * width, 0.0, 0.0, t - 0.5],
        hi: [x0 + 2.0 * width, 1.0, 1.0, t + 0.5],
        n: [9, 3, 3, 3],
    };
    residual_check(
        &move |x, y, z, tt| s.eval(x, y, z, tt),
        ResidualEquation::Cartesian(*spec),
        &probe,
        &halvings(h0, levels),
    )
}
