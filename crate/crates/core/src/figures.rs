//! Pinned parameter sets and the data behind the four reference figures.
//!
//! All figures use the reference medium `ρ0 = 1 fm⁻³`, `g = 1.15`, `m_G = 460 MeV`
//! and `B = 0`, independent of any run configuration.

use crate::eos::{EosParameters, MediumCoefficients};
use crate::error::{domain, Result};
use crate::kp_model::{build_wave_spec, WaveEquationKind};
use crate::solitons::{
    existence_region_scan, CkpSoliton, KpSoliton, Range, RegionScan, ScanGeometry, SolitonCart,
    SolitonCyl,
};
use crate::table::ResultTable;
use crate::units::deg_to_rad;

pub const RHO0: f64 = 1.0;
pub const G: f64 = 1.15;
pub const M_G_MEV: f64 = 460.0;

/// Cylindrical soliton `(a, u)`; `b = d = √(1 − a²)`.
pub const CYL: (f64, f64) = (0.6, 0.73);
/// Cartesian soliton `(𝒜, 𝒞, U)`; `ℬ = √(1 − 𝒜² − 𝒞²) ≈ 0.62`.
pub const CART: (f64, f64, f64) = (0.6, 0.5, 0.66);

/// `(r, z)` slices at `φ = 0`.
pub const FIG2_RZ_TIMES: [f64; 2] = [18.0, 28.0];
pub const FIG2_R: (f64, f64) = (0.0, 60.0);
pub const FIG2_Z: (f64, f64) = (0.0, 30.0);
/// `(r, φ)` slices at `z = 1 fm`, `20° ≤ φ ≤ 150°`.
pub const FIG2_RPHI_TIMES: [f64; 2] = [10.0, 22.0];
pub const FIG2_RPHI_Z: f64 = 1.0;
pub const FIG2_PHI_DEG: (f64, f64) = (20.0, 150.0);
pub const FIG2_RPHI_R: (f64, f64) = (0.0, 80.0);

/// `(x, y)` slices at `z = 1 fm`.
pub const FIG4_TIMES: [f64; 4] = [30.0, 60.0, 90.0, 120.0];
pub const FIG4_Z: f64 = 1.0;
pub const FIG4_X: (f64, f64) = (-30.0, 140.0);
pub const FIG4_Y: (f64, f64) = (0.0, 50.0);

pub fn reference_params() -> EosParameters {
    EosParameters::new(G, M_G_MEV, 0.0, RHO0).expect("reference parameters are valid")
}

/// One named output table of a figure.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub name: String,
    pub table: ResultTable,
}

/// Samples `f(c1, c2)` on a tensor grid; `c1` varies fastest.
pub fn grid_table(
    columns: [(&str, &str); 3],
    c1: Range,
    c2: Range,
    f: impl Fn(f64, f64) -> f64,
) -> Result<ResultTable> {
    let mut t = ResultTable::new(&columns);
    for v2 in c2.values() {
        for v1 in c1.values() {
            t.push(vec![v1, v2, f(v1, v2)])?;
        }
    }
    Ok(t)
}

fn scan_figure(tag: &str, scan: RegionScan) -> Vec<FigureData> {
    vec![
        FigureData {
            name: format!("{tag}_cells"),
            table: scan.cells,
        },
        FigureData {
            name: format!("{tag}_boundary"),
            table: scan.boundary,
        },
    ]
}

/// Existence band of the cylindrical soliton in the `(a, u)` plane.
pub fn figure1() -> Result<Vec<FigureData>> {
    let m = MediumCoefficients::from_params(&reference_params())?;
    let scan = existence_region_scan(
        &m,
        ScanGeometry::Cylindrical,
        Range::new(0.2, 1.0, 81)?,
        Range::new(0.6, 1.8, 121)?,
    )?;
    Ok(scan_figure("fig1", scan))
}

/// Cylindrical soliton on `(r, z)` and `(r, φ)` slices.
pub fn figure2() -> Result<Vec<FigureData>> {
    let spec = build_wave_spec(&reference_params(), WaveEquationKind::CkpCyl)?;
    let s = CkpSoliton::new(&spec, &SolitonCyl::from_a(CYL.0, CYL.1)?)?;
    let mut out = Vec::new();
    for t in FIG2_RZ_TIMES {
        let table = grid_table(
            [("r", "fm"), ("z", "fm"), ("rho1", "1")],
            Range::new(FIG2_R.0, FIG2_R.1, 241)?,
            Range::new(FIG2_Z.0, FIG2_Z.1, 121)?,
            |r, z| s.eval(r, 0.0, z, t),
        )?;
        out.push(FigureData {
            name: format!("fig2_rz_t{t}"),
            table,
        });
    }
    for t in FIG2_RPHI_TIMES {
        let table = grid_table(
            [("r", "fm"), ("phi", "deg"), ("rho1", "1")],
            Range::new(FIG2_RPHI_R.0, FIG2_RPHI_R.1, 321)?,
            Range::new(FIG2_PHI_DEG.0, FIG2_PHI_DEG.1, 131)?,
            |r, phi| s.eval(r, deg_to_rad(phi), FIG2_RPHI_Z, t),
        )?;
        out.push(FigureData {
            name: format!("fig2_rphi_t{t}"),
            table,
        });
    }
    Ok(out)
}

/// Existence band of the cartesian soliton in the `(𝒜, U)` plane at `𝒞 = 0.5`.
pub fn figure3() -> Result<Vec<FigureData>> {
    let m = MediumCoefficients::from_params(&reference_params())?;
    let c_dir = CART.1;
    let scan = existence_region_scan(
        &m,
        ScanGeometry::Cartesian { c_dir },
        Range::new(0.2, (1.0 - c_dir * c_dir).sqrt(), 81)?,
        Range::new(0.4, 0.9, 101)?,
    )?;
    Ok(scan_figure("fig3", scan))
}

/// Cartesian soliton on `(x, y)` slices at four times.
pub fn figure4() -> Result<Vec<FigureData>> {
    let spec = build_wave_spec(&reference_params(), WaveEquationKind::KpCart)?;
    let s = KpSoliton::new(&spec, &SolitonCart::from_a_c(CART.0, CART.1, CART.2)?)?;
    FIG4_TIMES
        .iter()
        .map(|&t| {
            let table = grid_table(
                [("x", "fm"), ("y", "fm"), ("rho1", "1")],
                Range::new(FIG4_X.0, FIG4_X.1, 681)?,
                Range::new(FIG4_Y.0, FIG4_Y.1, 101)?,
                |x, y| s.eval(x, y, FIG4_Z, t),
            )?;
            Ok(FigureData {
                name: format!("fig4_t{t}"),
                table,
            })
        })
        .collect()
}

pub fn figure(n: u32) -> Result<Vec<FigureData>> {
    match n {
        1 => figure1(),
        2 => figure2(),
        3 => figure3(),
        4 => figure4(),
        _ => Err(domain(format!("there is no figure {n} (expected 1 to 4)"))),
    }
}
