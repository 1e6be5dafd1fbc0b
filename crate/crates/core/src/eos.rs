//! Zero-temperature equation of state of the strongly interacting quark-gluon plasma.
//!
//! The energy density and pressure are the sum of a hard-gluon mean-field term
//! `∝ g²ρ²/m_G²`, a tower of gradient corrections `∝ g²/m_G^{2n}` acting on the
//! baryon density, the bag constant, and the massless Fermi-gas term of the quarks:
//!
//! ```text
//! ε = c₂ρ² + c₄ ρ∇²ρ + c₆ ρ∇²∇²ρ + c₈ ∇²ρ ∇²∇²ρ + B + 3 (γ_Q/2π²) k_F⁴/4
//! p = c₂ρ² + (9g²/4m_G⁴) ρ∇²ρ − (9g²/8m_G⁶) ρ∇²∇²ρ − (9g²/16m_G⁴) ∇ρ·∇ρ
//!     + (9g²/16m_G⁶) (∇²ρ)² − (9g²/8m_G⁸) ∇²ρ ∇²∇²ρ
//!     − (9g²/16m_G⁸) ∇∇²ρ·∇∇²ρ − (9g²/8m_G⁶) ∇ρ·∇∇²ρ − B + (γ_Q/2π²) k_F⁴/4
//! ```
//!
//! with `c_n = 27g²/(16 m_G^n)` and `ρ_B = γ_Q k_F³/(6π²)`.
//!
//! The background quantities used by the wave equations only exist in closed form
//! for `γ_Q = 6`, where `k_F = (π²ρ)^{1/3}`; they reject other degeneracies.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::field::ScalarField3D;
use crate::spectral::{gradient_with, laplacian_with, Fft3};
use crate::units::{inv_fm_to_mev, mev_to_inv_fm};

/// Default quark degeneracy.
pub const DEFAULT_GAMMA_Q: u32 = 6;

/// π^{2/3}, the Fermi-gas prefactor for γ_Q = 6.
pub fn pi_two_thirds() -> f64 {
    PI.powf(2.0 / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosParameters {
    /// Hard-gluon coupling.
    pub g: f64,
    /// Dynamical gluon mass [fm⁻¹].
    pub m_g: f64,
    /// Bag constant [fm⁻⁴].
    pub bag: f64,
    pub gamma_q: u32,
    /// Background baryon density [fm⁻³].
    pub rho0: f64,
}

impl EosParameters {
    /// Builds a parameter set from a gluon mass given in MeV.
    pub fn new(g: f64, m_g_mev: f64, bag: f64, rho0: f64) -> Result<Self> {
        Self::with_gamma_q(g, m_g_mev, bag, rho0, DEFAULT_GAMMA_Q)
    }

    pub fn with_gamma_q(g: f64, m_g_mev: f64, bag: f64, rho0: f64, gamma_q: u32) -> Result<Self> {
        let p = Self {
            g,
            m_g: mev_to_inv_fm(m_g_mev),
            bag,
            gamma_q,
            rho0,
        };
        p.validate()?;
        Ok(p)
    }

    /// ρ0 = 1 fm⁻³, g = 1.15, m_G = 460 MeV, B = 0: the parameter set of the
    /// soliton figures.
    pub fn reference() -> Self {
        Self::new(1.15, 460.0, 0.0, 1.0).expect("reference parameters are valid")
    }

    pub fn m_g_mev(&self) -> f64 {
        inv_fm_to_mev(self.m_g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(domain(format!("coupling g must be >= 0, got {}", self.g)));
        }
        if !(self.m_g > 0.0) || !self.m_g.is_finite() {
            return Err(domain(format!(
                "gluon mass must be > 0, got {} fm^-1",
                self.m_g
            )));
        }
        if !(self.rho0 > 0.0) || !self.rho0.is_finite() {
            return Err(domain(format!(
                "background density must be > 0, got {}",
                self.rho0
            )));
        }
        if self.gamma_q < 1 {
            return Err(domain("quark degeneracy must be >= 1"));
        }
        if !self.bag.is_finite() {
            return Err(domain("bag constant must be finite"));
        }
        Ok(())
    }

    fn require_default_degeneracy(&self) -> Result<()> {
        if self.gamma_q == DEFAULT_GAMMA_Q {
            Ok(())
        } else {
            Err(Error::UnsupportedDegeneracy(self.gamma_q))
        }
    }

    /// 27g²/(16 m_G²) [fm²], the coefficient of ρ² in both ε and p.
    fn mean_field_coeff(&self) -> f64 {
        27.0 * self.g * self.g / (16.0 * self.m_g * self.m_g)
    }

    /// 27g²ρ0²/(8m_G²) [fm⁻⁴]: the gluon share of `A`.
    pub fn gluon_term(&self) -> f64 {
        27.0 * self.g * self.g * self.rho0 * self.rho0 / (8.0 * self.m_g * self.m_g)
    }

    /// π^{2/3}ρ0^{4/3} [fm⁻⁴]: the quark share of `A`.
    pub fn quark_term(&self) -> f64 {
        pi_two_thirds() * self.rho0.powf(4.0 / 3.0)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("baryon density must be >= 0, got {rho}")))
    }
}

/// Fermi momentum [fm⁻¹] for baryon density `rho_b` [fm⁻³].
pub fn fermi_momentum(rho_b: f64, gamma_q: u32) -> Result<f64> {
    check_density(rho_b)?;
    if gamma_q < 1 {
        return Err(domain("quark degeneracy must be >= 1"));
    }
    Ok((6.0 * PI * PI * rho_b / gamma_q as f64).cbrt())
}

/// Inverse of [`fermi_momentum`].
pub fn density_from_fermi_momentum(k_f: f64, gamma_q: u32) -> f64 {
    gamma_q as f64 * k_f.powi(3) / (6.0 * PI * PI)
}

/// (γ_Q/2π²) k_F⁴/4, the quark Fermi-gas pressure [fm⁻⁴].
fn fermi_gas_pressure(rho_b: f64, gamma_q: u32) -> Result<f64> {
    let k_f = fermi_momentum(rho_b, gamma_q)?;
    Ok(gamma_q as f64 / (2.0 * PI * PI) * k_f.powi(4) / 4.0)
}

/// Energy density of uniform matter [fm⁻⁴].
pub fn energy_density_uniform(p: &EosParameters, rho_b: f64) -> Result<f64> {
    let kinetic = fermi_gas_pressure(rho_b, p.gamma_q)?;
    Ok(p.mean_field_coeff() * rho_b * rho_b + p.bag + 3.0 * kinetic)
}

/// Pressure of uniform matter [fm⁻⁴].
pub fn pressure_uniform(p: &EosParameters, rho_b: f64) -> Result<f64> {
    let kinetic = fermi_gas_pressure(rho_b, p.gamma_q)?;
    Ok(p.mean_field_coeff() * rho_b * rho_b - p.bag + kinetic)
}

/// Intermediate spectral quantities shared by the two field evaluations.
struct DensityDerivatives {
    lap: Vec<f64>,
    bilap: Vec<f64>,
    grad: [Vec<f64>; 3],
    grad_lap: [Vec<f64>; 3],
}

impl DensityDerivatives {
    fn compute(rho: &ScalarField3D) -> Result<Self> {
        rho.require_periodic("gradient-dependent equation of state")?;
        if let Some(bad) = rho.values.iter().find(|v| !(**v >= 0.0)) {
            return Err(domain(format!(
                "baryon density field has negative sample {bad}"
            )));
        }
        let fft = Fft3::for_field(rho);
        let lap = laplacian_with(&fft, &rho.values);
        let bilap = laplacian_with(&fft, &lap);
        let grad = gradient_with(&fft, &rho.values);
        let grad_lap = gradient_with(&fft, &lap);
        Ok(Self {
            lap,
            bilap,
            grad,
            grad_lap,
        })
    }

    fn dot(a: &[Vec<f64>; 3], b: &[Vec<f64>; 3], n: usize) -> f64 {
        a[0][n] * b[0][n] + a[1][n] * b[1][n] + a[2][n] * b[2][n]
    }
}

/// Energy density of an inhomogeneous density field, with all Laplacians evaluated
/// spectrally. The input field is a baryon density in fm⁻³ on a periodic grid in fm.
pub fn energy_density_field(p: &EosParameters, rho: &ScalarField3D) -> Result<ScalarField3D> {
    let d = DensityDerivatives::compute(rho)?;
    let g2 = p.g * p.g;
    let m2 = p.m_g * p.m_g;
    let c2 = 27.0 * g2 / (16.0 * m2);
    let c4 = c2 / m2;
    let c6 = c4 / m2;
    let c8 = c6 / m2;
    let values = rho
        .values
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            let kinetic = fermi_gas_pressure(r, p.gamma_q)?;
            Ok(c2 * r * r
                + c4 * r * d.lap[n]
                + c6 * r * d.bilap[n]
                + c8 * d.lap[n] * d.bilap[n]
                + p.bag
                + 3.0 * kinetic)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rho.with_values(values))
}

/// Pressure of an inhomogeneous density field (all eight derivative terms).
pub fn pressure_field(p: &EosParameters, rho: &ScalarField3D) -> Result<ScalarField3D> {
    let d = DensityDerivatives::compute(rho)?;
    let g2 = p.g * p.g;
    let m2 = p.m_g * p.m_g;
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let m8 = m4 * m4;
    let c2 = 27.0 * g2 / (16.0 * m2);
    let values = rho
        .values
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            let kinetic = fermi_gas_pressure(r, p.gamma_q)?;
            let grad2 = DensityDerivatives::dot(&d.grad, &d.grad, n);
            let grad_lap2 = DensityDerivatives::dot(&d.grad_lap, &d.grad_lap, n);
            let grad_mixed = DensityDerivatives::dot(&d.grad, &d.grad_lap, n);
            Ok(c2 * r * r + 9.0 * g2 / (4.0 * m4) * r * d.lap[n]
                - 9.0 * g2 / (8.0 * m6) * r * d.bilap[n]
                - 9.0 * g2 / (16.0 * m4) * grad2
                + 9.0 * g2 / (16.0 * m6) * d.lap[n] * d.lap[n]
                - 9.0 * g2 / (8.0 * m8) * d.lap[n] * d.bilap[n]
                - 9.0 * g2 / (16.0 * m8) * grad_lap2
                - 9.0 * g2 / (8.0 * m6) * grad_mixed
                - p.bag
                + kinetic)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rho.with_values(values))
}

/// A = 27g²ρ0²/(8m_G²) + π^{2/3}ρ0^{4/3} [fm⁻⁴].
pub fn constant_a(p: &EosParameters) -> Result<f64> {
    p.validate()?;
    p.require_default_degeneracy()?;
    Ok(p.gluon_term() + p.quark_term())
}

/// Speed of sound of the background, returned as `(c_s, c_s²)`.
pub fn speed_of_sound(p: &EosParameters) -> Result<(f64, f64)> {
    p.validate()?;
    p.require_default_degeneracy()?;
    let gluon = p.gluon_term();
    let quark = p.quark_term();
    let cs2 = (gluon + quark) / (gluon + 3.0 * quark);
    Ok((cs2.sqrt(), cs2))
}

/// Speed of sound from a central difference of `p(ρ)` against `ε(ρ)` with relative
/// density step `h`. Second order in `h`.
pub fn cs_from_derivative(p: &EosParameters, rho0: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h < 0.1) {
        return Err(domain(format!(
            "relative step must lie in (0, 0.1), got {h}"
        )));
    }
    if !(rho0 > 0.0) {
        return Err(domain(format!("density must be > 0, got {rho0}")));
    }
    let (lo, hi) = (rho0 * (1.0 - h), rho0 * (1.0 + h));
    let d_eps = energy_density_uniform(p, hi)? - energy_density_uniform(p, lo)?;
    if !(d_eps > 0.0) {
        return Err(Error::NonMonotonic { rho: rho0 });
    }
    let d_p = pressure_uniform(p, hi)? - pressure_uniform(p, lo)?;
    let cs2 = d_p / d_eps;
    if cs2 < 0.0 {
        return Err(domain(format!("dp/deps = {cs2} < 0 at rho = {rho0}")));
    }
    Ok(cs2.sqrt())
}

/// Background coefficients shared by every wave equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumCoefficients {
    /// [fm⁻⁴]
    pub a: f64,
    pub cs: f64,
    pub cs2: f64,
    /// Nonlinear coefficient (dimensionless).
    pub alpha: f64,
    /// Dispersion coefficient [fm²].
    pub beta: f64,
    /// Effective baryon mass [fm⁻¹].
    pub m_eff: f64,
}

impl MediumCoefficients {
    pub fn from_params(p: &EosParameters) -> Result<Self> {
        let a = constant_a(p)?;
        let (cs, cs2) = speed_of_sound(p)?;
        Ok(Self {
            a,
            cs,
            cs2,
            alpha: crate::kp_model::alpha_relativistic(p)?,
            beta: crate::kp_model::beta_relativistic(p)?,
            m_eff: crate::kp_model::effective_mass(p)?,
        })
    }
}

/// One row of the EOS table export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosRow {
    pub rho_b: f64,
    pub k_f: f64,
    pub eps: f64,
    pub p: f64,
    /// Local dp/dε of uniform matter at `rho_b` (NaN at ρ = 0).
    pub cs2: f64,
}

/// Uniform-matter EOS on `n` equally spaced densities in `[rho_min, rho_max]`.
///
/// `cs2` is the analytic derivative `(dp/dρ)/(dε/dρ)`, valid for any γ_Q.
pub fn eos_table(p: &EosParameters, rho_min: f64, rho_max: f64, n: usize) -> Result<Vec<EosRow>> {
    check_density(rho_min)?;
    if !(rho_max >= rho_min) || n == 0 {
        return Err(domain("eos table needs rho_max >= rho_min >= 0 and n >= 1"));
    }
    let c = p.mean_field_coeff();
    (0..n)
        .map(|i| {
            let rho = if n == 1 {
                rho_min
            } else {
                rho_min + (rho_max - rho_min) * i as f64 / (n - 1) as f64
            };
            let k_f = fermi_momentum(rho, p.gamma_q)?;
            // d/dρ of (γ_Q/2π²)k_F⁴/4 is k_F for any degeneracy
            let dp = 2.0 * c * rho + k_f;
            let deps = 2.0 * c * rho + 3.0 * k_f;
            let cs2 = if rho > 0.0 { dp / deps } else { f64::NAN };
            Ok(EosRow {
                rho_b: rho,
                k_f,
                eps: energy_density_uniform(p, rho)?,
                p: pressure_uniform(p, rho)?,
                cs2,
            })
        })
        .collect()
}
