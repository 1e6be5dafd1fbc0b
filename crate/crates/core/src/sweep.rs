//! Cartesian-product parameter sweeps of the medium coefficients and soliton
//! existence.
//!
//! Cells are evaluated in parallel and merged in a fixed order, so the table does
//! not depend on the thread count or on the order in which values were listed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::eos::{EosParameters, MediumCoefficients};
use crate::error::{domain, Error, Result};
use crate::solitons::{existence_cart, existence_cyl};
use crate::table::ResultTable;

/// Sweep definition. Each parameter list is sorted and deduplicated before use.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub g: Vec<f64>,
    pub m_g_mev: Vec<f64>,
    pub rho0: Vec<f64>,
    pub bag: f64,
    /// Cylindrical soliton `(a, u)` tested in every cell.
    pub cyl: (f64, f64),
    /// Cartesian soliton `(𝒜, 𝒞, U)` tested in every cell.
    pub cart: (f64, f64, f64),
    /// Refuse sweeps with more cells than this.
    pub max_cells: usize,
    /// Worker threads; 0 uses rayon's global pool.
    pub threads: usize,
}

pub const COLUMNS: &[(&str, &str)] = &[
    ("g", "1"),
    ("m_g_mev", "MeV"),
    ("rho0", "fm^-3"),
    ("a_const", "fm^-4"),
    ("cs", "c"),
    ("cs2", "c^2"),
    ("alpha", "1"),
    ("beta", "fm^2"),
    ("m_eff", "fm^-1"),
    ("cyl_admissible", "bool"),
    ("cyl_margin", "c"),
    ("cyl_amplitude", "1"),
    ("cart_admissible", "bool"),
    ("cart_margin", "c"),
    ("cart_amplitude", "1"),
];

fn canonical(name: &str, values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Config(format!("sweep list '{name}' is empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Config(format!(
            "sweep list '{name}' contains non-finite value {v}"
        )));
    }
    let mut out = values.to_vec();
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Replaces every list by `n` uniform samples from its `[min, max]` span, drawn
/// from a ChaCha stream seeded with `seed`.
pub fn randomize(spec: &SweepSpec, n: usize, seed: u64) -> Result<SweepSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |name: &str, values: &[f64]| -> Result<Vec<f64>> {
        let v = canonical(name, values)?;
        let (lo, hi) = (v[0], v[v.len() - 1]);
        Ok((0..n)
            .map(|_| {
                if hi > lo {
                    rng.random_range(lo..=hi)
                } else {
                    lo
                }
            })
            .collect())
    };
    Ok(SweepSpec {
        g: draw("g", &spec.g)?,
        m_g_mev: draw("m_g_mev", &spec.m_g_mev)?,
        rho0: draw("rho0", &spec.rho0)?,
        ..spec.clone()
    })
}

fn evaluate(spec: &SweepSpec, g: f64, m: f64, rho0: f64) -> Result<Vec<f64>> {
    let params = EosParameters::new(g, m, spec.bag, rho0)?;
    let c = MediumCoefficients::from_params(&params)?;
    let cyl = existence_cyl(&c, spec.cyl.0, spec.cyl.1)?;
    let cart = existence_cart(&c, spec.cart.0, spec.cart.2, spec.cart.1)?;
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    Ok(vec![
        g,
        m,
        rho0,
        c.a,
        c.cs,
        c.cs2,
        c.alpha,
        c.beta,
        c.m_eff,
        flag(cyl.admissible),
        cyl.margin_speed,
        cyl.amplitude,
        flag(cart.admissible),
        cart.margin_speed,
        cart.amplitude,
    ])
}

/// Evaluates every `(g, m_G, ρ0)` combination; rows are ordered
/// lexicographically in `(g, m_G, ρ0)`.
pub fn sweep(spec: &SweepSpec) -> Result<ResultTable> {
    let g = canonical("g", &spec.g)?;
    let m = canonical("m_g_mev", &spec.m_g_mev)?;
    let r = canonical("rho0", &spec.rho0)?;
    let cells = g
        .len()
        .checked_mul(m.len())
        .and_then(|x| x.checked_mul(r.len()))
        .unwrap_or(usize::MAX);
    if cells > spec.max_cells {
        return Err(domain(format!(
            "sweep has {cells} cells, above the limit of {}",
            spec.max_cells
        )));
    }
    let mut grid = Vec::with_capacity(cells);
    for &gi in &g {
        for &mi in &m {
            for &ri in &r {
                grid.push((gi, mi, ri));
            }
        }
    }
    let run = || -> Result<Vec<Vec<f64>>> {
        grid.par_iter()
            .map(|&(gi, mi, ri)| evaluate(spec, gi, mi, ri))
            .collect()
    };
    let rows = if spec.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} threads: {e}", spec.threads)))?
            .install(run)?
    } else {
        run()?
    };
    let mut table = ResultTable::new(COLUMNS);
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}
