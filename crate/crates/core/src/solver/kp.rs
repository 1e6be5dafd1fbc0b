use crate::error::{contract, Result};
use crate::field::ScalarField3D;
use crate::kp_model::WaveEquationSpec;
use crate::solitons::sech2;
use crate::spectral::refined_peak_1d;

use super::{evolve, EvolutionResult, Rhs, SolverConfig, StepControl};

/// Allowed x-line mean relative to `max|ρ|`.
const MEAN_TOL: f64 = 1e-10;

/// Integrates the cartesian KP equation
/// `ρ_t = −c_s ρ_x − α ρρ_x − β ρ_xxx − (c_s/2) ∂x⁻¹(ρ_yy + ρ_zz)`.
///
/// `∂x⁻¹` is the zero-mean antiderivative, so every x-line of the initial data must
/// have zero mean.
pub fn kp_integrate(
    spec: &WaveEquationSpec,
    initial: &ScalarField3D,
    cfg: &SolverConfig,
) -> Result<EvolutionResult> {
    initial.require_periodic("KP integration")?;
    let scale = initial.max_abs();
    for k in 0..initial.nz {
        for j in 0..initial.ny {
            let mean = initial.x_line_mean(j, k);
            if mean.abs() > MEAN_TOL * scale {
                return Err(contract(format!(
                    "initial x-line (j={j}, k={k}) has mean {mean:e}; \
                     the KP equation needs zero mean along x on every line"
                )));
            }
        }
    }
    evolve(
        initial,
        Rhs::from_spec(spec),
        cfg,
        StepControl {
            gradient_limit: None,
        },
    )
}

/// Subtracts the mean of every x-line; returns the corrected field and the means
/// (indexed `j + ny·k`).
pub fn remove_x_means(field: &ScalarField3D) -> (ScalarField3D, Vec<f64>) {
    let mut out = field.clone();
    let mut means = Vec::with_capacity(field.ny * field.nz);
    for k in 0..field.nz {
        for j in 0..field.ny {
            let m = field.x_line_mean(j, k);
            let start = field.index(0, j, k);
            for v in &mut out.values[start..start + field.nx] {
                *v -= m;
            }
            means.push(m);
        }
    }
    (out, means)
}

/// Samples the periodic continuation of a tilted line soliton
/// `amp·sech²(k(a x + b y − s t))` on a 2-D box whose first node sits at `origin`.
///
/// The box must satisfy `b·Ly = a·Lx·m` for an integer `m` so that shifting `y` by
/// `Ly` moves the crest by a whole number of x-periods; images within `images`
/// periods on either side are summed.
#[allow(clippy::too_many_arguments)]
pub fn periodic_line_soliton(
    amp: f64,
    k: f64,
    a: f64,
    b: f64,
    phase_speed: f64,
    t: f64,
    dims: [usize; 2],
    lengths: [f64; 2],
    origin: [f64; 2],
    images: i32,
) -> Result<ScalarField3D> {
    let [lx, ly] = lengths;
    let m = b * ly / (a * lx);
    if (m - m.round()).abs() > 1e-9 {
        return Err(contract(format!(
            "box {lx} x {ly} fm is not commensurate with the crest direction ({a}, {b})"
        )));
    }
    ScalarField3D::sample_3d(
        [dims[0], dims[1], 1],
        [origin[0], origin[1], 0.0],
        [lx, ly, 1.0],
        |x, y, _| {
            let theta = a * x + b * y - phase_speed * t;
            (-images..=images)
                .map(|n| amp * sech2(k * (theta + n as f64 * a * lx)))
                .sum()
        },
    )
}

/// Crest positions of a 2-D run, one track per y-row.
#[derive(Debug, Clone)]
pub struct LineTrack {
    pub times: Vec<f64>,
    /// `positions[s][j]`: unwrapped crest x (relative to the first grid node) of row
    /// `j` in snapshot `s`.
    pub positions: Vec<Vec<f64>>,
    /// Least-squares slope of each row's track.
    pub row_speeds: Vec<f64>,
    /// Mean of `row_speeds`.
    pub speed: f64,
}

fn slope(t: &[f64], x: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let xm = x.iter().sum::<f64>() / n;
    let num: f64 = t.iter().zip(x).map(|(a, b)| (a - tm) * (b - xm)).sum();
    let den: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    num / den
}

/// Tracks the x-position of the crest on every y-row (z index 0) through the
/// snapshots. Positions are refined on the trigonometric interpolant and unwrapped
/// assuming the crest moves less than half a period between snapshots.
pub fn track_line_speed(result: &EvolutionResult) -> Result<LineTrack> {
    if result.snapshots.len() < 2 {
        return Err(crate::Error::InsufficientHistory(
            "crest tracking needs at least two snapshots".into(),
        ));
    }
    let first = &result.snapshots[0].field;
    let lx = first.lengths()[0];
    let ny = first.ny;
    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(result.snapshots.len());
    for snap in &result.snapshots {
        let f = &snap.field;
        let row: Vec<f64> = (0..ny)
            .map(|j| refined_peak_1d(&f.x_line(j, 0).values, f.dx).0)
            .collect();
        let row = match positions.last() {
            None => row,
            Some(prev) => row
                .iter()
                .zip(prev)
                .map(|(x, p)| {
                    let d = x - p.rem_euclid(lx);
                    p + d - lx * (d / lx).round()
                })
                .collect(),
        };
        positions.push(row);
    }
    let times: Vec<f64> = result.snapshots.iter().map(|s| s.time).collect();
    let row_speeds: Vec<f64> = (0..ny)
        .map(|j| {
            let x: Vec<f64> = positions.iter().map(|r| r[j]).collect();
            slope(&times, &x)
        })
        .collect();
    let speed = row_speeds.iter().sum::<f64>() / ny as f64;
    Ok(LineTrack {
        times,
        positions,
        row_speeds,
        speed,
    })
}
