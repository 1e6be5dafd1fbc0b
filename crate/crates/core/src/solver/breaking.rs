use crate::error::{contract, Result};
use crate::field::ScalarField3D;
use crate::kp_model::WaveEquationSpec;
use crate::spectral::derivative;

use super::{evolve, EvolutionResult, Rhs, SolverConfig, StepControl};

/// Integrates the dispersionless equation `ρ_t = −(c_s + αρ)ρ_x` until `t_end` or
/// until the steepest gradient has grown by `cfg.breaking_ratio`, whichever comes
/// first. Reaching the gradient catastrophe is reported through
/// [`EvolutionResult::breaking_time`], not as an error.
pub fn breaking_wave_integrate(
    spec: &WaveEquationSpec,
    initial: &ScalarField3D,
    cfg: &SolverConfig,
) -> Result<EvolutionResult> {
    if !initial.is_1d() {
        return Err(contract("breaking-wave integration needs a 1-D field"));
    }
    let g0 = derivative(initial, 0, 1)?.max_abs();
    let rhs = Rhs {
        cs: spec.cs,
        alpha: spec.alpha,
        beta: 0.0,
        transverse: 0.0,
    };
    let limit = if g0 > 0.0 {
        Some(cfg.breaking_ratio * g0)
    } else {
        None
    };
    evolve(
        initial,
        rhs,
        cfg,
        StepControl {
            gradient_limit: limit,
        },
    )
}

/// `−1 / min_x ∂x(c_s + αρ(x, 0))`, or `None` when no characteristic crossing
/// happens (the profile never steepens).
pub fn estimated_breaking_time(
    spec: &WaveEquationSpec,
    initial: &ScalarField3D,
) -> Result<Option<f64>> {
    let d = derivative(initial, 0, 1)?;
    let min = d
        .values
        .iter()
        .map(|v| spec.alpha * v)
        .fold(f64::INFINITY, f64::min);
    Ok((min < 0.0).then(|| -1.0 / min))
}

/// Implicit solution `ρ = f(x − (c_s + αρ)t)` of the breaking-wave equation before
/// breaking, where `f` is the periodic trigonometric interpolant of `initial`.
///
/// Each point is solved with Newton's method on `ρ − f(x − (c_s + αρ)t) = 0`.
pub fn characteristic_solution(
    spec: &WaveEquationSpec,
    initial: &ScalarField3D,
    t: f64,
) -> Result<ScalarField3D> {
    if !initial.is_1d() {
        return Err(contract("characteristic solution needs a 1-D field"));
    }
    initial.require_periodic("characteristic solution")?;
    let n = initial.nx;
    let length = initial.lengths()[0];
    let fft = crate::spectral::Fft3::new([n, 1, 1], [length, 1.0, 1.0]);
    let spec_f = fft.forward_real(&initial.values);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 * initial.dx;
        let mut rho = initial.values[i];
        for _ in 0..50 {
            let xi = x - (spec.cs + spec.alpha * rho) * t;
            let (f, df, _) = crate::spectral::interpolate_1d(&spec_f, length, xi);
            let g = rho - f;
            let dg = 1.0 + df * spec.alpha * t;
            let step = g / dg;
            rho -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        out.push(rho);
    }
    Ok(initial.with_values(out))
}
