//! Uniform-grid scalar fields.
//!
//! Samples are stored x-fastest: `values[i + nx * (j + ny * k)]`. One- and
//! two-dimensional fields are the same type with `ny = nz = 1` or `nz = 1`.

use serde::Serialize;

use crate::error::{contract, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarField3D {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    /// Whether the samples represent one period of a periodic function.
    pub periodic: bool,
    pub values: Vec<f64>,
}

impl ScalarField3D {
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        periodic: bool,
        values: Vec<f64>,
    ) -> Result<Self> {
        let [nx, ny, nz] = dims;
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(contract("grid sizes must be positive"));
        }
        if nx * ny * nz != values.len() {
            return Err(contract(format!(
                "{}x{}x{} grid needs {} samples, got {}",
                nx,
                ny,
                nz,
                nx * ny * nz,
                values.len()
            )));
        }
        if spacing.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(contract("grid spacings must be positive and finite"));
        }
        Ok(Self {
            nx,
            ny,
            nz,
            dx: spacing[0],
            dy: spacing[1],
            dz: spacing[2],
            periodic,
            values,
        })
    }

    /// Periodic 1-D field with spacing `dx`.
    pub fn periodic_1d(values: Vec<f64>, dx: f64) -> Result<Self> {
        Self::new([values.len(), 1, 1], [dx, 1.0, 1.0], true, values)
    }

    /// Samples `f(x)` at `x_i = x0 + i * length / n` on a periodic 1-D grid.
    pub fn sample_1d(n: usize, x0: f64, length: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let dx = length / n as f64;
        Self::periodic_1d((0..n).map(|i| f(x0 + i as f64 * dx)).collect(), dx)
    }

    /// Samples `f(x, y, z)` on a periodic grid whose first node sits at `origin`.
    pub fn sample_3d(
        dims: [usize; 3],
        origin: [f64; 3],
        lengths: [f64; 3],
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> Result<Self> {
        let spacing = [
            lengths[0] / dims[0] as f64,
            lengths[1] / dims[1] as f64,
            lengths[2] / dims[2] as f64,
        ];
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for k in 0..dims[2] {
            let z = origin[2] + k as f64 * spacing[2];
            for j in 0..dims[1] {
                let y = origin[1] + j as f64 * spacing[1];
                for i in 0..dims[0] {
                    let x = origin[0] + i as f64 * spacing[0];
                    values.push(f(x, y, z));
                }
            }
        }
        Self::new(dims, spacing, true, values)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            values: vec![0.0; self.values.len()],
            ..self.clone()
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn spacing(&self) -> [f64; 3] {
        [self.dx, self.dy, self.dz]
    }

    /// Periodic box lengths.
    pub fn lengths(&self) -> [f64; 3] {
        [
            self.nx as f64 * self.dx,
            self.ny as f64 * self.dy,
            self.nz as f64 * self.dz,
        ]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.index(i, j, k)]
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1 && self.nz == 1
    }

    pub fn require_periodic(&self, what: &str) -> Result<()> {
        if self.periodic {
            Ok(())
        } else {
            Err(contract(format!("{what} requires a periodic field")))
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.dims() == other.dims() && self.spacing() == other.spacing()
    }

    /// ∫ f dV over the box (rectangle rule, exact for trigonometric polynomials).
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_volume()
    }

    /// (∫ f² dV)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn cell_volume(&self) -> f64 {
        let mut vol = self.dx;
        if self.ny > 1 {
            vol *= self.dy;
        }
        if self.nz > 1 {
            vol *= self.dz;
        }
        vol
    }

    /// Mean along x of the line through `(·, j, k)`.
    pub fn x_line_mean(&self, j: usize, k: usize) -> f64 {
        let start = self.index(0, j, k);
        self.values[start..start + self.nx].iter().sum::<f64>() / self.nx as f64
    }

    /// Extracts the x-line through `(·, j, k)` as a 1-D field.
    pub fn x_line(&self, j: usize, k: usize) -> Self {
        let start = self.index(0, j, k);
        Self {
            nx: self.nx,
            ny: 1,
            nz: 1,
            dx: self.dx,
            dy: 1.0,
            dz: 1.0,
            periodic: self.periodic,
            values: self.values[start..start + self.nx].to_vec(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// L∞ distance between two fields on the same grid.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}
