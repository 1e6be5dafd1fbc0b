//! Closed-form solitons of the cylindrical and cartesian KP equations, their
//! existence conditions and the first-order velocity fields.
//!
//! The cylindrical soliton is
//!
//! ```text
//! ρ̂₁ = (h1/h2) sech²{(√h1/2)[a r + b z − (u + a c_s φ²/2) t]}
//! h1 = (u − a c_s − b² c_s/2a)/(a³β),   h2 = α/(3a²β)
//! ```
//!
//! and the cartesian one
//!
//! ```text
//! ρ̂₁ = [3(U − w)/(𝒜α)] sech²{√[(U − w)/(4𝒜³β)] (𝒜x + ℬy + 𝒞z − Ut)}
//! w  = 𝒜c_s + ℬ²c_s/2 + 𝒞²c_s/2
//! ```
//!
//! The cartesian profile with this `w` satisfies the KP equation only for `𝒜 = 1`.
//! For a tilted front the drift term is `W = 𝒜c_s + (ℬ² + 𝒞²)c_s/(2𝒜)`, and the same
//! amplitude and width travel with phase speed `V = U − w + W`. [`KpLineSoliton`]
//! evaluates that exact solution; [`kp_solution`] evaluates the formula above as
//! written.

use serde::Serialize;

use crate::eos::MediumCoefficients;
use crate::error::{contract, domain, Error, Result};
use crate::field::ScalarField3D;
use crate::kp_model::WaveEquationSpec;
use crate::spectral::{derivative, x_antiderivative};
use crate::table::ResultTable;

const UNIT_TOL: f64 = 1e-12;

/// sech²(x), with the far tails returned as exact zeros.
pub fn sech2(x: f64) -> f64 {
    let ax = x.abs();
    if ax > 350.0 {
        return 0.0;
    }
    let e = (-2.0 * ax).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Parameters `(a, b, d, u)` of the cylindrical soliton. `d` must equal `a` for the
/// reduction to a KdV equation in the moving frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolitonCyl {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub u: f64,
}

impl SolitonCyl {
    pub fn new(a: f64, b: f64, u: f64) -> Result<Self> {
        Self::with_d(a, b, a, u)
    }

    /// `b = +√(1 − a²)`.
    pub fn from_a(a: f64, u: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(domain(format!("a must lie in (0, 1], got {a}")));
        }
        Self::new(a, (1.0 - a * a).sqrt(), u)
    }

    pub fn with_d(a: f64, b: f64, d: f64, u: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(domain(format!("a must be > 0, got {a}")));
        }
        if (a * a + b * b - 1.0).abs() > UNIT_TOL {
            return Err(domain(format!("a² + b² must be 1, got {}", a * a + b * b)));
        }
        if !u.is_finite() || !d.is_finite() {
            return Err(domain("u and d must be finite"));
        }
        Ok(Self { a, b, d, u })
    }

    /// `a c_s + b² c_s/(2a)`: the lowest admissible `u`.
    pub fn threshold(&self, cs: f64) -> f64 {
        self.a * cs + self.b * self.b * cs / (2.0 * self.a)
    }
}

/// Parameters `(𝒜, ℬ, 𝒞, U)` of the cartesian soliton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolitonCart {
    pub a_dir: f64,
    pub b_dir: f64,
    pub c_dir: f64,
    pub u: f64,
}

impl SolitonCart {
    pub fn new(a_dir: f64, b_dir: f64, c_dir: f64, u: f64) -> Result<Self> {
        if !(a_dir > 0.0) {
            return Err(domain(format!("𝒜 must be > 0, got {a_dir}")));
        }
        let norm = a_dir * a_dir + b_dir * b_dir + c_dir * c_dir;
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(domain(format!("𝒜² + ℬ² + 𝒞² must be 1, got {norm}")));
        }
        if !u.is_finite() {
            return Err(domain("U must be finite"));
        }
        Ok(Self {
            a_dir,
            b_dir,
            c_dir,
            u,
        })
    }

    /// `ℬ = +√(1 − 𝒜² − 𝒞²)`.
    pub fn from_a_c(a_dir: f64, c_dir: f64, u: f64) -> Result<Self> {
        let b2 = 1.0 - a_dir * a_dir - c_dir * c_dir;
        if b2 < 0.0 {
            return Err(domain(format!(
                "𝒜² + 𝒞² = {} exceeds 1, ℬ would be imaginary",
                1.0 - b2
            )));
        }
        Self::new(a_dir, b2.sqrt(), c_dir, u)
    }

    fn transverse2(&self) -> f64 {
        self.b_dir * self.b_dir + self.c_dir * self.c_dir
    }

    /// `w = 𝒜c_s + ℬ²c_s/2 + 𝒞²c_s/2`.
    pub fn w(&self, cs: f64) -> f64 {
        self.a_dir * cs + self.b_dir * self.b_dir * cs / 2.0 + self.c_dir * self.c_dir * cs / 2.0
    }

    /// `W = 𝒜c_s + (ℬ² + 𝒞²)c_s/(2𝒜)`, the drift that makes the tilted profile exact.
    pub fn consistent_drift(&self, cs: f64) -> f64 {
        self.a_dir * cs + self.transverse2() * cs / (2.0 * self.a_dir)
    }
}

fn require_dispersive(beta: f64) -> Result<()> {
    if beta == 0.0 {
        Err(Error::Dispersionless(
            "the soliton width is undefined".into(),
        ))
    } else if !(beta > 0.0) {
        Err(domain(format!(
            "dispersion coefficient must be > 0, got {beta}"
        )))
    } else {
        Ok(())
    }
}

/// `(h1, h2)` of the cylindrical soliton.
pub fn h_constants(spec: &WaveEquationSpec, sol: &SolitonCyl) -> Result<(f64, f64)> {
    require_dispersive(spec.beta)?;
    let a = sol.a;
    let h1 = (sol.u - sol.threshold(spec.cs)) / (a.powi(3) * spec.beta);
    let h2 = spec.alpha / (3.0 * a * a * spec.beta);
    Ok((h1, h2))
}

/// Precomputed cylindrical soliton.
#[derive(Debug, Clone, Copy)]
pub struct CkpSoliton {
    pub sol: SolitonCyl,
    pub cs: f64,
    pub amplitude: f64,
    /// `√h1 / 2` [fm⁻¹].
    pub k: f64,
}

impl CkpSoliton {
    pub fn new(spec: &WaveEquationSpec, sol: &SolitonCyl) -> Result<Self> {
        let (h1, h2) = h_constants(spec, sol)?;
        if !(h1 > 0.0) {
            return Err(Error::NonexistentSoliton(format!(
                "h1 = {h1:e} <= 0: u = {} does not exceed a·cs + b²cs/2a = {}",
                sol.u,
                sol.threshold(spec.cs)
            )));
        }
        Ok(Self {
            sol: *sol,
            cs: spec.cs,
            amplitude: h1 / h2,
            k: h1.sqrt() / 2.0,
        })
    }

    /// Phase argument `a r + b z − (u + a c_s φ²/2) t`.
    pub fn phase(&self, r: f64, phi: f64, z: f64, t: f64) -> f64 {
        let s = &self.sol;
        s.a * r + s.b * z - (s.u + s.a * self.cs * phi * phi / 2.0) * t
    }

    pub fn eval(&self, r: f64, phi: f64, z: f64, t: f64) -> f64 {
        self.amplitude * sech2(self.k * self.phase(r, phi, z, t))
    }

    /// Radius of the crest at `(φ, z, t)`.
    pub fn peak_radius(&self, phi: f64, z: f64, t: f64) -> f64 {
        let s = &self.sol;
        ((s.u + s.a * self.cs * phi * phi / 2.0) * t - s.b * z) / s.a
    }

    /// Radial crest speed at angle `φ`.
    pub fn peak_speed(&self, phi: f64) -> f64 {
        (self.sol.u + self.sol.a * self.cs * phi * phi / 2.0) / self.sol.a
    }
}

/// Cylindrical soliton at `(r [fm], φ [rad], z [fm], t [fm])`.
pub fn ckp_solution(
    sol: &SolitonCyl,
    spec: &WaveEquationSpec,
    r: f64,
    phi: f64,
    z: f64,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!(
            "the cylindrical solution needs t > 0, got {t}"
        )));
    }
    Ok(CkpSoliton::new(spec, sol)?.eval(r, phi, z, t))
}

/// Precomputed cartesian soliton, evaluated with the phase speed of the
/// formula as written (`𝒜x + ℬy + 𝒞z − Ut`).
#[derive(Debug, Clone, Copy)]
pub struct KpSoliton {
    pub sol: SolitonCart,
    pub amplitude: f64,
    /// Wavenumber multiplying the phase [fm⁻¹].
    pub k: f64,
    /// Speed of the phase `𝒜x + ℬy + 𝒞z − speed·t`.
    pub speed: f64,
}

impl KpSoliton {
    pub fn new(spec: &WaveEquationSpec, sol: &SolitonCart) -> Result<Self> {
        require_dispersive(spec.beta)?;
        let w = sol.w(spec.cs);
        let excess = sol.u - w;
        if !(excess > 0.0) {
            return Err(Error::NonexistentSoliton(format!(
                "U = {} does not exceed w = {w}",
                sol.u
            )));
        }
        Ok(Self {
            sol: *sol,
            amplitude: 3.0 * excess / (sol.a_dir * spec.alpha),
            k: (excess / (4.0 * sol.a_dir.powi(3) * spec.beta)).sqrt(),
            speed: sol.u,
        })
    }

    pub fn phase(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        let s = &self.sol;
        s.a_dir * x + s.b_dir * y + s.c_dir * z - self.speed * t
    }

    pub fn eval(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        self.amplitude * sech2(self.k * self.phase(x, y, z, t))
    }
}

/// Exact tilted line soliton with the same amplitude and width as [`kp_solution`],
/// moving with phase speed `V = U − w + W`.
#[derive(Debug, Clone, Copy)]
pub struct KpLineSoliton(pub KpSoliton);

impl KpLineSoliton {
    pub fn new(spec: &WaveEquationSpec, sol: &SolitonCart) -> Result<Self> {
        let mut s = KpSoliton::new(spec, sol)?;
        s.speed = sol.u - sol.w(spec.cs) + sol.consistent_drift(spec.cs);
        Ok(Self(s))
    }

    pub fn speed(&self) -> f64 {
        self.0.speed
    }

    pub fn eval(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        self.0.eval(x, y, z, t)
    }
}

/// Cartesian soliton as written, at `(x, y, z, t)` in fm.
pub fn kp_solution(
    sol: &SolitonCart,
    spec: &WaveEquationSpec,
    x: f64,
    y: f64,
    z: f64,
    t: f64,
) -> Result<f64> {
    Ok(KpSoliton::new(spec, sol)?.eval(x, y, z, t))
}

/// Soliton `A₀ sech²(k(x − Vt))` of `ρ_t + c ρ_x + α ρρ_x + β ρ_xxx = 0`, with
/// `V = c + αA₀/3` and `k = √(αA₀/(12β))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KdvSoliton {
    pub amplitude: f64,
    pub speed: f64,
    pub k: f64,
    /// Crest position at `t = 0`.
    pub x0: f64,
}

impl KdvSoliton {
    pub fn from_amplitude(spec: &WaveEquationSpec, amplitude: f64, x0: f64) -> Result<Self> {
        require_dispersive(spec.beta)?;
        let ratio = spec.alpha * amplitude / (12.0 * spec.beta);
        if !(ratio > 0.0) {
            return Err(Error::NonexistentSoliton(format!(
                "α·A₀ = {} must be positive",
                spec.alpha * amplitude
            )));
        }
        Ok(Self {
            amplitude,
            speed: spec.cs + spec.alpha * amplitude / 3.0,
            k: ratio.sqrt(),
            x0,
        })
    }

    /// The soliton moving at speed `u`, i.e. amplitude `3(u − c)/α`.
    pub fn from_speed(spec: &WaveEquationSpec, u: f64, x0: f64) -> Result<Self> {
        Self::from_amplitude(spec, 3.0 * (u - spec.cs) / spec.alpha, x0)
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.amplitude * sech2(self.k * (x - self.x0 - self.speed * t))
    }

    /// Samples the periodic continuation on `n` points of `[0, length)`.
    pub fn periodic_field(&self, n: usize, length: f64, t: f64) -> Result<ScalarField3D> {
        ScalarField3D::sample_1d(n, 0.0, length, |x| {
            (-2..=2).map(|m| self.eval(x + m as f64 * length, t)).sum()
        })
    }
}

/// Outcome of an existence test: both conditions and their margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Existence {
    pub admissible: bool,
    /// Speed in excess of the flat-solution threshold.
    pub margin_speed: f64,
    /// Soliton amplitude, which must stay below 1.
    pub amplitude: f64,
}

impl Existence {
    fn from_margins(margin_speed: f64, amplitude: f64) -> Self {
        Self {
            admissible: margin_speed > 0.0 && amplitude < 1.0,
            margin_speed,
            amplitude,
        }
    }
}

/// Existence of the cylindrical soliton with `b² = 1 − a²`.
pub fn existence_cyl(medium: &MediumCoefficients, a: f64, u: f64) -> Result<Existence> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(domain(format!("a must lie in (0, 1], got {a}")));
    }
    let margin = u - a * medium.cs - (1.0 - a * a) * medium.cs / (2.0 * a);
    Ok(Existence::from_margins(
        margin,
        3.0 * margin / (a * medium.alpha),
    ))
}

/// Existence of the cartesian soliton with `ℬ² = 1 − 𝒜² − 𝒞²`.
pub fn existence_cart(
    medium: &MediumCoefficients,
    a_dir: f64,
    u: f64,
    c_dir: f64,
) -> Result<Existence> {
    if !(a_dir > 0.0) {
        return Err(domain(format!("𝒜 must be > 0, got {a_dir}")));
    }
    let sol = SolitonCart::from_a_c(a_dir, c_dir, u)?;
    let margin = u - sol.w(medium.cs);
    Ok(Existence::from_margins(
        margin,
        3.0 * margin / (a_dir * medium.alpha),
    ))
}

/// Which soliton family a region scan refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanGeometry {
    Cylindrical,
    /// Cartesian with fixed `𝒜`-independent `𝒞`.
    Cartesian {
        c_dir: f64,
    },
}

/// Inclusive range sampled at `n` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n == 0 || !(max >= min) || !min.is_finite() || !max.is_finite() {
            return Err(domain(format!(
                "invalid range [{min}, {max}] with {n} points"
            )));
        }
        Ok(Self { min, max, n })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn step(&self) -> f64 {
        if self.n == 1 {
            0.0
        } else {
            (self.max - self.min) / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }
}

/// Lower (zero speed margin) and upper (unit amplitude) boundary of the existence
/// band at direction constant `a`. `None` when `a` is outside the geometry's domain.
pub fn band_boundaries(
    medium: &MediumCoefficients,
    geometry: ScanGeometry,
    a: f64,
) -> Option<(f64, f64)> {
    if !(a > 0.0) {
        return None;
    }
    let lower = match geometry {
        ScanGeometry::Cylindrical => {
            if a > 1.0 {
                return None;
            }
            a * medium.cs + (1.0 - a * a) * medium.cs / (2.0 * a)
        }
        ScanGeometry::Cartesian { c_dir } => {
            if a * a + c_dir * c_dir > 1.0 {
                return None;
            }
            // ℬ² + 𝒞² = 1 − 𝒜²
            a * medium.cs + (1.0 - a * a) * medium.cs / 2.0
        }
    };
    Some((lower, lower + a * medium.alpha / 3.0))
}

/// Cell codes written in the `admissible` column.
pub mod cell {
    pub const INADMISSIBLE: f64 = 0.0;
    pub const ADMISSIBLE: f64 = 1.0;
    /// Within half a grid step (in `u`) of either boundary curve.
    pub const BOUNDARY: f64 = 2.0;
}

/// Output of [`existence_region_scan`].
#[derive(Debug, Clone)]
pub struct RegionScan {
    /// `a,u,admissible,margin1,margin2`, with `a` varying slowest.
    pub cells: ResultTable,
    /// `a,u_lower,u_upper` for every sampled `a`.
    pub boundary: ResultTable,
}

/// Evaluates both existence conditions on an `a × u` grid.
pub fn existence_region_scan(
    medium: &MediumCoefficients,
    geometry: ScanGeometry,
    a_range: Range,
    u_range: Range,
) -> Result<RegionScan> {
    let mut cells = ResultTable::new(&[
        ("a", "1"),
        ("u", "c"),
        ("admissible", "code"),
        ("margin1", "c"),
        ("margin2", "1"),
    ]);
    let mut boundary = ResultTable::new(&[("a", "1"), ("u_lower", "c"), ("u_upper", "c")]);
    let half_step = u_range.step() / 2.0;
    for a in a_range.values() {
        let bounds = band_boundaries(medium, geometry, a);
        let (lo, hi) = bounds.unwrap_or((f64::NAN, f64::NAN));
        boundary.push(vec![a, lo, hi])?;
        for u in u_range.values() {
            let ex = match (geometry, bounds) {
                (_, None) => None,
                (ScanGeometry::Cylindrical, Some(_)) => Some(existence_cyl(medium, a, u)?),
                (ScanGeometry::Cartesian { c_dir }, Some(_)) => {
                    Some(existence_cart(medium, a, u, c_dir)?)
                }
            };
            let row = match ex {
                None => vec![a, u, cell::INADMISSIBLE, f64::NAN, f64::NAN],
                Some(ex) => {
                    let near = half_step > 0.0
                        && ((u - lo).abs() < half_step || (u - hi).abs() < half_step);
                    let code = if near {
                        cell::BOUNDARY
                    } else if ex.admissible {
                        cell::ADMISSIBLE
                    } else {
                        cell::INADMISSIBLE
                    };
                    vec![a, u, code, ex.margin_speed, ex.amplitude]
                }
            };
            cells.push(row)?;
        }
    }
    Ok(RegionScan { cells, boundary })
}

/// Coordinate system of a perturbation field. Axis 0 is always the propagation
/// (longitudinal) direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Axes `(x, y, z)`.
    Cartesian,
    /// Axes `(r, φ, z)` at time `t`, with the medium's sound speed.
    Cylindrical { t: f64, cs: f64 },
}

/// First-order velocity components recovered from `ρ̂₁`.
#[derive(Debug, Clone)]
pub struct VelocityFields {
    /// Equal to `ρ̂₁`.
    pub longitudinal: ScalarField3D,
    /// Component along axis 1 (`y` or `φ`).
    pub transverse1: ScalarField3D,
    /// Component along axis 2 (`z`).
    pub transverse2: ScalarField3D,
}

/// Tolerance on the line mean of the transverse gradient, relative to its maximum.
const SOLVABILITY_TOL: f64 = 1e-9;

/// Velocity components of the first-order flow associated with `ρ̂₁`.
///
/// Transverse components solve `∂_long v_⊥ = ∂_⊥ ρ̂₁` with zero longitudinal mean;
/// in cylindrical geometry the angular one carries the metric factor `1/(c_s t)`.
pub fn velocity_fields(rho1: &ScalarField3D, geometry: Geometry) -> Result<VelocityFields> {
    rho1.require_periodic("velocity recovery")?;
    let angular_factor = match geometry {
        Geometry::Cartesian => 1.0,
        Geometry::Cylindrical { t, cs } => {
            if !(t > 0.0 && cs > 0.0) {
                return Err(domain(
                    "cylindrical velocity recovery needs t > 0 and cs > 0",
                ));
            }
            1.0 / (cs * t)
        }
    };
    let recover = |axis: usize, factor: f64| -> Result<ScalarField3D> {
        if rho1.dims()[axis] == 1 {
            return Ok(rho1.zeros_like());
        }
        let grad = derivative(rho1, axis, 1)?;
        let mut v = x_antiderivative(&grad, SOLVABILITY_TOL).map_err(|e| match e {
            Error::Contract(msg) => contract(format!(
                "transverse velocity along axis {axis} is undefined: {msg}"
            )),
            other => other,
        })?;
        if factor != 1.0 {
            v.values.iter_mut().for_each(|x| *x *= factor);
        }
        Ok(v)
    };
    Ok(VelocityFields {
        longitudinal: rho1.clone(),
        transverse1: recover(1, angular_factor)?,
        transverse2: recover(2, 1.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kp_model::{build_wave_spec, WaveEquationKind};
    use crate::EosParameters;

    fn kp_spec() -> WaveEquationSpec {
        build_wave_spec(&EosParameters::reference(), WaveEquationKind::KpCart).unwrap()
    }

    #[test]
    fn sech2_values() {
        assert_eq!(sech2(0.0), 1.0);
        assert_eq!(sech2(400.0), 0.0);
        assert_eq!(sech2(-351.0), 0.0);
        let x = 0.7f64;
        assert!((sech2(x) - 1.0 / x.cosh().powi(2)).abs() < 1e-15);
        assert_eq!(sech2(x), sech2(-x));
    }

    #[test]
    fn direction_constraints() {
        assert!(SolitonCyl::new(-0.6, 0.8, 0.73).is_err());
        assert!(SolitonCyl::new(0.6, 0.7, 0.73).is_err());
        assert!(SolitonCart::from_a_c(0.87, 0.5, 0.7).is_err());
        assert!(SolitonCart::new(0.0, 0.8, 0.6, 0.7).is_err());
    }

    #[test]
    fn threshold_gives_flat_solution() {
        let spec = kp_spec();
        let mut sol = SolitonCyl::new(0.6, 0.8, 0.73).unwrap();
        sol.u = sol.threshold(spec.cs);
        let (h1, _) = h_constants(&spec, &sol).unwrap();
        assert!(h1.abs() < 1e-12);
        assert!(matches!(
            ckp_solution(&sol, &spec, 1.0, 0.0, 0.0, 10.0),
            Err(Error::NonexistentSoliton(_))
        ));
    }

    #[test]
    fn dispersionless_medium_is_rejected() {
        let spec = WaveEquationSpec::custom(WaveEquationKind::KpCart, 0.6, 0.4, 0.0);
        let sol = SolitonCyl::new(0.6, 0.8, 0.73).unwrap();
        assert!(matches!(
            h_constants(&spec, &sol),
            Err(Error::Dispersionless(_))
        ));
    }

    #[test]
    fn requires_positive_time() {
        let spec = kp_spec();
        let sol = SolitonCyl::new(0.6, 0.8, 0.73).unwrap();
        assert!(ckp_solution(&sol, &spec, 10.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn peak_sits_on_phase_zero() {
        let spec = kp_spec();
        let sol = SolitonCyl::new(0.6, 0.8, 0.73).unwrap();
        let s = CkpSoliton::new(&spec, &sol).unwrap();
        let r = s.peak_radius(0.3, 5.0, 18.0);
        assert!((s.eval(r, 0.3, 5.0, 18.0) - s.amplitude).abs() < 1e-12 * s.amplitude);
    }

    #[test]
    fn consistent_line_soliton_reduces_for_normal_incidence() {
        let spec = kp_spec();
        let sol = SolitonCart::new(1.0, 0.0, 0.0, 0.7).unwrap();
        let printed = KpSoliton::new(&spec, &sol).unwrap();
        let exact = KpLineSoliton::new(&spec, &sol).unwrap();
        assert_eq!(sol.w(spec.cs), sol.consistent_drift(spec.cs));
        assert_eq!(printed.speed, exact.speed());
    }

    #[test]
    fn scan_marks_boundary_cells() {
        let m = MediumCoefficients::from_params(&EosParameters::reference()).unwrap();
        let scan = existence_region_scan(
            &m,
            ScanGeometry::Cylindrical,
            Range::new(0.2, 1.0, 9).unwrap(),
            Range::new(0.6, 1.8, 61).unwrap(),
        )
        .unwrap();
        assert_eq!(scan.cells.len(), 9 * 61);
        assert_eq!(scan.boundary.len(), 9);
        let codes = scan.cells.column("admissible").unwrap();
        assert!(codes.contains(&cell::ADMISSIBLE));
        assert!(codes.contains(&cell::BOUNDARY));
        assert!(codes.contains(&cell::INADMISSIBLE));
    }

    #[test]
    fn cartesian_scan_outside_domain() {
        let m = MediumCoefficients::from_params(&EosParameters::reference()).unwrap();
        let scan = existence_region_scan(
            &m,
            ScanGeometry::Cartesian { c_dir: 0.5 },
            Range::new(0.9, 0.9, 1).unwrap(),
            Range::new(0.6, 0.7, 2).unwrap(),
        )
        .unwrap();
        assert!(scan.cells.rows.iter().all(|r| r[2] == 0.0 && r[3].is_nan()));
    }
}
