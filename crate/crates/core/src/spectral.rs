//! Fourier transforms and spectral derivatives on periodic boxes.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{contract, Result};
use crate::field::ScalarField3D;

/// Angular wavenumbers in FFT order for `n` samples over length `length`.
///
/// For even `n` the Nyquist entry carries `-n/2`.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI / length;
    (0..n)
        .map(|i| {
            let m = if i <= (n - 1) / 2 {
                i as isize
            } else {
                i as isize - n as isize
            };
            m as f64 * step
        })
        .collect()
}

/// Complex FFT over every axis of extent > 1 of an x-fastest 3-D array.
pub struct Fft3 {
    dims: [usize; 3],
    forward: [Option<Arc<dyn Fft<f64>>>; 3],
    inverse: [Option<Arc<dyn Fft<f64>>>; 3],
    k: [Vec<f64>; 3],
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft3").field("dims", &self.dims).finish()
    }
}

impl Fft3 {
    pub fn new(dims: [usize; 3], lengths: [f64; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let plan = |planner: &mut FftPlanner<f64>, n: usize, fwd: bool| {
            (n > 1).then(|| {
                if fwd {
                    planner.plan_fft_forward(n)
                } else {
                    planner.plan_fft_inverse(n)
                }
            })
        };
        let forward = [
            plan(&mut planner, dims[0], true),
            plan(&mut planner, dims[1], true),
            plan(&mut planner, dims[2], true),
        ];
        let inverse = [
            plan(&mut planner, dims[0], false),
            plan(&mut planner, dims[1], false),
            plan(&mut planner, dims[2], false),
        ];
        let k = [
            wavenumbers(dims[0], lengths[0]),
            wavenumbers(dims[1], lengths[1]),
            wavenumbers(dims[2], lengths[2]),
        ];
        Self {
            dims,
            forward,
            inverse,
            k,
        }
    }

    pub fn for_field(field: &ScalarField3D) -> Self {
        Self::new(field.dims(), field.lengths())
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Wavenumbers along `axis` (0 = x).
    pub fn k(&self, axis: usize) -> &[f64] {
        &self.k[axis]
    }

    /// Index of the Nyquist mode along `axis`, if the extent is even.
    pub fn nyquist(&self, axis: usize) -> Option<usize> {
        let n = self.dims[axis];
        (n > 1 && n.is_multiple_of(2)).then_some(n / 2)
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        for axis in 0..3 {
            if let Some(fft) = &self.forward[axis] {
                self.along_axis(data, axis, fft.as_ref());
            }
        }
    }

    /// Inverse transform, normalised so that `inverse(forward(x)) == x`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..3 {
            if let Some(fft) = &self.inverse[axis] {
                self.along_axis(data, axis, fft.as_ref());
            }
        }
        let scale = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    pub fn forward_real(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut data);
        data
    }

    /// Inverse transform keeping the real part.
    pub fn inverse_real(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut data = spectrum.to_vec();
        self.inverse(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    fn along_axis(&self, data: &mut [Complex64], axis: usize, fft: &dyn Fft<f64>) {
        let [nx, ny, nz] = self.dims;
        if axis == 0 {
            fft.process(data);
            return;
        }
        let (n, stride, outer): (usize, usize, Vec<usize>) = if axis == 1 {
            let starts = (0..nz)
                .flat_map(|k| (0..nx).map(move |i| i + nx * ny * k))
                .collect();
            (ny, nx, starts)
        } else {
            (nz, nx * ny, (0..nx * ny).collect())
        };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for start in outer {
            for (m, slot) in line.iter_mut().enumerate() {
                *slot = data[start + m * stride];
            }
            fft.process(&mut line);
            for (m, v) in line.iter().enumerate() {
                data[start + m * stride] = *v;
            }
        }
    }

    /// Calls `f(flat_index, [kx, ky, kz], [i, j, k])` for every mode.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [f64; 3], [usize; 3])) {
        let [nx, ny, nz] = self.dims;
        let mut idx = 0;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    f(idx, [self.k[0][i], self.k[1][j], self.k[2][k]], [i, j, k]);
                    idx += 1;
                }
            }
        }
    }

    /// Multiplier of `∂^order/∂axis^order`, with the Nyquist mode zeroed for odd orders.
    pub fn derivative_symbol(&self, axis: usize, order: u32, mode: usize) -> Complex64 {
        if order % 2 == 1 && self.nyquist(axis) == Some(mode) {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, self.k[axis][mode]).powu(order)
    }

    /// Boolean mask of the modes kept by the 2/3 rule along every active axis.
    pub fn two_thirds_mask(&self) -> Vec<bool> {
        let keep = |axis: usize, m: usize| {
            let n = self.dims[axis];
            if n == 1 {
                return true;
            }
            let idx = if m <= n / 2 { m } else { n - m };
            3 * idx < n
        };
        let mut mask = vec![false; self.len()];
        self.for_each_mode(|idx, _, [i, j, k]| {
            mask[idx] = keep(0, i) && keep(1, j) && keep(2, k);
        });
        mask
    }
}

/// Spectral `∂^order f / ∂axis^order` of a periodic field.
pub fn derivative(field: &ScalarField3D, axis: usize, order: u32) -> Result<ScalarField3D> {
    field.require_periodic("spectral derivative")?;
    let fft = Fft3::for_field(field);
    Ok(field.with_values(derivative_with(&fft, &field.values, axis, order)))
}

pub(crate) fn derivative_with(fft: &Fft3, values: &[f64], axis: usize, order: u32) -> Vec<f64> {
    let mut spec = fft.forward_real(values);
    fft.for_each_mode(|idx, _, modes| {
        spec[idx] *= fft.derivative_symbol(axis, order, modes[axis]);
    });
    fft.inverse_real(&spec)
}

/// Spectral Laplacian of a periodic field.
pub fn laplacian(field: &ScalarField3D) -> Result<ScalarField3D> {
    field.require_periodic("spectral laplacian")?;
    let fft = Fft3::for_field(field);
    Ok(field.with_values(laplacian_with(&fft, &field.values)))
}

pub(crate) fn laplacian_with(fft: &Fft3, values: &[f64]) -> Vec<f64> {
    let mut spec = fft.forward_real(values);
    fft.for_each_mode(|idx, k, _| {
        spec[idx] *= -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    });
    fft.inverse_real(&spec)
}

/// Spectral gradient; components along collapsed axes are zero.
pub(crate) fn gradient_with(fft: &Fft3, values: &[f64]) -> [Vec<f64>; 3] {
    let spec = fft.forward_real(values);
    let dims = fft.dims();
    let component = |axis: usize| {
        if dims[axis] == 1 {
            return vec![0.0; values.len()];
        }
        let mut s = spec.clone();
        fft.for_each_mode(|idx, _, modes| {
            s[idx] *= fft.derivative_symbol(axis, 1, modes[axis]);
        });
        fft.inverse_real(&s)
    };
    [component(0), component(1), component(2)]
}

/// Zero-mean antiderivative along x: the periodic `g` with `∂g/∂x = f` and zero x-mean
/// on every line.
///
/// The x-mean of `f` on each line must vanish (relative to `tol · max|f|`).
pub fn x_antiderivative(field: &ScalarField3D, tol: f64) -> Result<ScalarField3D> {
    field.require_periodic("x antiderivative")?;
    let scale = field.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..field.nz {
        for j in 0..field.ny {
            let mean = field.x_line_mean(j, k);
            if mean.abs() > tol * scale {
                return Err(contract(format!(
                    "x-line (j={j}, k={k}) has mean {mean:e}; the x antiderivative is not periodic"
                )));
            }
        }
    }
    let fft = Fft3::for_field(field);
    let mut spec = fft.forward_real(&field.values);
    let ny = fft.nyquist(0);
    fft.for_each_mode(|idx, k, [i, _, _]| {
        if i == 0 || ny == Some(i) {
            spec[idx] = Complex64::new(0.0, 0.0);
        } else {
            spec[idx] /= Complex64::new(0.0, k[0]);
        }
    });
    Ok(field.with_values(fft.inverse_real(&spec)))
}

/// Evaluates the trigonometric interpolant of a periodic 1-D sample set and its
/// first two derivatives at an arbitrary `x` (grid origin at 0).
pub(crate) fn interpolate_1d(spec: &[Complex64], length: f64, x: f64) -> (f64, f64, f64) {
    let n = spec.len();
    let k = wavenumbers(n, length);
    let nyq = n.is_multiple_of(2).then_some(n / 2);
    let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for m in 0..n {
        let phase = Complex64::new(0.0, k[m] * x).exp();
        let c = spec[m] * phase;
        if nyq == Some(m) {
            // real cosine at the Nyquist frequency
            let v = spec[m].re * (k[m] * x).cos();
            f += v;
            d2 -= k[m] * k[m] * v;
            continue;
        }
        f += c.re;
        d1 += (c * Complex64::new(0.0, k[m])).re;
        d2 -= k[m] * k[m] * c.re;
    }
    let s = 1.0 / n as f64;
    (f * s, d1 * s, d2 * s)
}

/// Location and value of the maximum of the trigonometric interpolant of a periodic
/// 1-D field, relative to the grid origin. Starts at the largest sample and refines
/// with Newton's method on the derivative.
pub fn refined_peak_1d(values: &[f64], dx: f64) -> (f64, f64) {
    let n = values.len();
    let length = n as f64 * dx;
    let (imax, _) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let fft = Fft3::new([n, 1, 1], [length, 1.0, 1.0]);
    let spec = fft.forward_real(values);
    let mut x = imax as f64 * dx;
    for _ in 0..20 {
        let (_, d1, d2) = interpolate_1d(&spec, length, x);
        if d2 >= 0.0 {
            break;
        }
        let step = (-d1 / d2).clamp(-dx, dx);
        x += step;
        if step.abs() < 1e-13 * length {
            break;
        }
    }
    let (f, _, _) = interpolate_1d(&spec, length, x);
    (x.rem_euclid(length), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wavenumber_ordering() {
        let k = wavenumbers(6, 2.0 * PI);
        assert_eq!(k, vec![0.0, 1.0, 2.0, -3.0, -2.0, -1.0]);
        let k = wavenumbers(5, 2.0 * PI);
        assert_eq!(k, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
    }

    #[test]
    fn round_trip_3d() {
        let fft = Fft3::new([8, 4, 2], [1.0, 2.0, 3.0]);
        let values: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).sin()).collect();
        let back = fft.inverse_real(&fft.forward_real(&values));
        for (a, b) in values.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_sine_mode() {
        let l = 10.0;
        let kk = 2.0 * PI * 3.0 / l;
        let f = ScalarField3D::sample_3d([32, 16, 1], [0.0; 3], [l, 5.0, 1.0], |x, y, _| {
            (kk * x).sin() * (2.0 * PI * y / 5.0).cos()
        })
        .unwrap();
        let dfx = derivative(&f, 0, 1).unwrap();
        let d3 = derivative(&f, 0, 3).unwrap();
        for k in 0..f.nz {
            for j in 0..f.ny {
                for i in 0..f.nx {
                    let x = i as f64 * f.dx;
                    let y = j as f64 * f.dy;
                    let c = (2.0 * PI * y / 5.0).cos();
                    let idx = f.index(i, j, k);
                    assert!((dfx.values[idx] - kk * (kk * x).cos() * c).abs() < 1e-12);
                    assert!((d3.values[idx] + kk.powi(3) * (kk * x).cos() * c).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let f = ScalarField3D::sample_1d(64, 0.0, 8.0, |x| {
            (2.0 * PI * x / 8.0).cos() + 0.3 * (6.0 * PI * x / 8.0).sin()
        })
        .unwrap();
        let g = x_antiderivative(&derivative(&f, 0, 1).unwrap(), 1e-12).unwrap();
        let mean = f.values.iter().sum::<f64>() / 64.0;
        for (a, b) in g.values.iter().zip(&f.values) {
            assert!((a - (b - mean)).abs() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_rejects_nonzero_mean() {
        let f = ScalarField3D::sample_1d(16, 0.0, 1.0, |_| 1.0).unwrap();
        assert!(matches!(
            x_antiderivative(&f, 1e-12),
            Err(crate::Error::Contract(_))
        ));
    }

    #[test]
    fn peak_refinement_off_grid() {
        let l = 40.0;
        let x0 = 13.37;
        let f: Vec<f64> = (0..128)
            .map(|i| {
                let x = i as f64 * l / 128.0;
                (-(x - x0).powi(2) / 4.0).exp()
            })
            .collect();
        let (x, v) = refined_peak_1d(&f, l / 128.0);
        assert!((x - x0).abs() < 1e-9, "{x}");
        assert!((v - 1.0).abs() < 1e-9);
    }
}
