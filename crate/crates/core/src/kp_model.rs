//! Coefficients of the wave equations obeyed by small baryon-density perturbations.
//!
//! All equations share the form
//!
//! ```text
//! ∂x{ρ_t + c_s ρ_x + α ρρ_x + β ρ_xxx} + (transverse terms) = 0
//! ```
//!
//! with `α` and `β` fixed by the background medium. The cartesian KP equation has
//! the transverse term `(c_s/2)(ρ_yy + ρ_zz)`; the cylindrical one replaces it with
//! `ρ_r/(2t) + ρ_φφ/(2 c_s t²) + (c_s/2)ρ_zz`. Dropping transverse terms gives the
//! KdV equation, and dropping dispersion as well gives a breaking-wave equation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::eos::{constant_a, pi_two_thirds, speed_of_sound, EosParameters, MediumCoefficients};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WaveEquationKind {
    KpCart,
    CkpCyl,
    Kdv,
    BreakingWaveMit,
    BreakingWaveFull,
    KpCartNr,
    CkpCylNr,
}

impl WaveEquationKind {
    pub const ALL: [WaveEquationKind; 7] = [
        Self::KpCart,
        Self::CkpCyl,
        Self::Kdv,
        Self::BreakingWaveMit,
        Self::BreakingWaveFull,
        Self::KpCartNr,
        Self::CkpCylNr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::KpCart => "kp_cart",
            Self::CkpCyl => "ckp_cyl",
            Self::Kdv => "kdv",
            Self::BreakingWaveMit => "breaking_wave_mit",
            Self::BreakingWaveFull => "breaking_wave_full",
            Self::KpCartNr => "kp_cart_nr",
            Self::CkpCylNr => "ckp_cyl_nr",
        }
    }

    pub fn is_non_relativistic(self) -> bool {
        matches!(self, Self::KpCartNr | Self::CkpCylNr)
    }

    pub fn is_cylindrical(self) -> bool {
        matches!(self, Self::CkpCyl | Self::CkpCylNr)
    }

    pub fn has_transverse_terms(self) -> bool {
        matches!(
            self,
            Self::KpCart | Self::CkpCyl | Self::KpCartNr | Self::CkpCylNr
        )
    }

    pub fn is_breaking_wave(self) -> bool {
        matches!(self, Self::BreakingWaveMit | Self::BreakingWaveFull)
    }
}

impl fmt::Display for WaveEquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveEquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::Usage(format!(
                    "unknown equation kind '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Coefficients of one wave equation, frozen at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveEquationSpec {
    pub kind: WaveEquationKind,
    pub cs: f64,
    pub alpha: f64,
    /// [fm²]
    pub beta: f64,
    /// Coefficient of the cartesian transverse Laplacian (and of `ρ_zz` in the
    /// cylindrical case). Zero for one-dimensional equations.
    pub transverse_coeff: f64,
}

impl WaveEquationSpec {
    /// A spec with explicit coefficients, used by tests and transformed equations.
    pub fn custom(kind: WaveEquationKind, cs: f64, alpha: f64, beta: f64) -> Self {
        let transverse_coeff = if kind.has_transverse_terms() {
            cs / 2.0
        } else {
            0.0
        };
        Self {
            kind,
            cs,
            alpha,
            beta,
            transverse_coeff,
        }
    }

    /// The same equation with transverse terms dropped.
    pub fn without_transverse(&self) -> Self {
        Self {
            transverse_coeff: 0.0,
            ..*self
        }
    }

    /// Linear dispersion relation `ω(k_x, k_⊥)` of the cartesian equation.
    pub fn linear_frequency(&self, kx: f64, k_perp2: f64) -> f64 {
        let transverse = if kx != 0.0 {
            self.transverse_coeff * k_perp2 / kx
        } else {
            0.0
        };
        self.cs * kx - self.beta * kx.powi(3) + transverse
    }
}

/// `[3/2(1 − c_s²) − π^{2/3}ρ0^{4/3}/(3A)]` (the bracket multiplying `c_s` in α).
fn alpha_bracket(p: &EosParameters) -> Result<f64> {
    let a = constant_a(p)?;
    let (_, cs2) = speed_of_sound(p)?;
    Ok(1.5 * (1.0 - cs2) - p.quark_term() / (3.0 * a))
}

/// The nonlinear bracket before the gluon term is eliminated in favour of `A`:
/// `(2 − c_s²)/2 − G(2c_s² − 1)/(2A) − (Q/A)(c_s² − 1/6)` with `G` the gluon and
/// `Q` the quark share of `A`.
pub fn alpha_bracket_unsimplified(p: &EosParameters) -> Result<f64> {
    let a = constant_a(p)?;
    let (_, cs2) = speed_of_sound(p)?;
    let gluon = p.gluon_term();
    let quark = p.quark_term();
    Ok((2.0 - cs2) / 2.0 - gluon * (2.0 * cs2 - 1.0) / (2.0 * a) - quark / a * (cs2 - 1.0 / 6.0))
}

/// α = [3/2(1 − c_s²) − π^{2/3}ρ0^{4/3}/(3A)]·c_s.
pub fn alpha_relativistic(p: &EosParameters) -> Result<f64> {
    let (cs, _) = speed_of_sound(p)?;
    let simplified = alpha_bracket(p)?;
    let full = alpha_bracket_unsimplified(p)?;
    debug_assert!(
        (simplified - full).abs() <= 1e-12 * simplified.abs().max(1.0),
        "nonlinear bracket simplification mismatch: {simplified} vs {full}"
    );
    Ok(simplified * cs)
}

/// β = 9g²ρ0²c_s/(8m_G⁴A) [fm²].
pub fn beta_relativistic(p: &EosParameters) -> Result<f64> {
    let a = constant_a(p)?;
    let (cs, _) = speed_of_sound(p)?;
    Ok(9.0 * p.g * p.g * p.rho0 * p.rho0 * cs / (8.0 * p.m_g.powi(4) * a))
}

/// M = 27g²ρ0/(8m_G²c_s²) + π^{2/3}ρ0^{1/3}/c_s² [fm⁻¹].
pub fn effective_mass(p: &EosParameters) -> Result<f64> {
    let (_, cs2) = speed_of_sound(p)?;
    Ok(27.0 * p.g * p.g * p.rho0 / (8.0 * p.m_g * p.m_g * cs2)
        + pi_two_thirds() * p.rho0.cbrt() / cs2)
}

/// α_NR = [3/2 − π^{2/3}ρ0^{1/3}/(3Mc_s²)]·c_s.
pub fn alpha_non_relativistic(p: &EosParameters) -> Result<f64> {
    let (cs, cs2) = speed_of_sound(p)?;
    let m = effective_mass(p)?;
    Ok((1.5 - pi_two_thirds() * p.rho0.cbrt() / (3.0 * m * cs2)) * cs)
}

/// β_NR = 9g²ρ0/(8Mm_G⁴c_s) [fm²].
pub fn beta_non_relativistic(p: &EosParameters) -> Result<f64> {
    let (cs, _) = speed_of_sound(p)?;
    let m = effective_mass(p)?;
    Ok(9.0 * p.g * p.g * p.rho0 / (8.0 * m * p.m_g.powi(4) * cs))
}

/// Builds the coefficient bundle of equation `kind` for the medium `p`.
///
/// The MIT breaking-wave equation is the massless-quark limit and ignores `g`,
/// `m_G` and `ρ0`: it always has `c_s = 1/√3`, `α = 2c_s/3`, `β = 0`.
pub fn build_wave_spec(p: &EosParameters, kind: WaveEquationKind) -> Result<WaveEquationSpec> {
    p.validate()?;
    use WaveEquationKind::*;
    let spec = match kind {
        KpCart | CkpCyl | Kdv => {
            let (cs, _) = speed_of_sound(p)?;
            WaveEquationSpec::custom(kind, cs, alpha_relativistic(p)?, beta_relativistic(p)?)
        }
        KpCartNr | CkpCylNr => {
            let (cs, _) = speed_of_sound(p)?;
            WaveEquationSpec::custom(
                kind,
                cs,
                alpha_non_relativistic(p)?,
                beta_non_relativistic(p)?,
            )
        }
        BreakingWaveMit => {
            let cs = (1.0f64 / 3.0).sqrt();
            WaveEquationSpec::custom(kind, cs, 2.0 * cs / 3.0, 0.0)
        }
        BreakingWaveFull => {
            let (cs, _) = speed_of_sound(p)?;
            WaveEquationSpec::custom(kind, cs, alpha_bracket_unsimplified(p)? * cs, 0.0)
        }
    };
    Ok(spec)
}

/// Same as [`build_wave_spec`] with the coefficients taken from a precomputed
/// bundle (relativistic kinds only).
pub fn spec_from_medium(
    m: &MediumCoefficients,
    kind: WaveEquationKind,
) -> Result<WaveEquationSpec> {
    use WaveEquationKind::*;
    match kind {
        KpCart | CkpCyl | Kdv => Ok(WaveEquationSpec::custom(kind, m.cs, m.alpha, m.beta)),
        _ => Err(Error::Usage(format!(
            "{kind} needs the full parameter set, not only the medium coefficients"
        ))),
    }
}

/// Order-of-magnitude scales of the perturbative expansion in `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RpmScales {
    pub sigma: f64,
    /// Perturbation amplitude `~σ²`.
    pub amplitude: f64,
    /// Wavelength `~1/σ`.
    pub wavelength: f64,
    /// Propagation distance (and time) `~1/σ³`.
    pub distance: f64,
    /// `false` when σ is so close to 1 that the three scales are not separated by
    /// at least a factor of ten.
    pub well_separated: bool,
}

pub fn rpm_scale_estimates(sigma: f64) -> Result<RpmScales> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(domain(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    let amplitude = sigma * sigma;
    let wavelength = 1.0 / sigma;
    let distance = 1.0 / (sigma * sigma * sigma);
    debug_assert!(amplitude < wavelength && wavelength < distance);
    Ok(RpmScales {
        sigma,
        amplitude,
        wavelength,
        distance,
        well_separated: sigma <= 0.1f64.sqrt(),
    })
}
