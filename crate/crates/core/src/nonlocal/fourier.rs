use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::CartesianGrid;

/// 2D complex FFT on a square periodic grid, plus the wavenumber tables
/// used by the spectral operators.
///
/// Transforms are unnormalized forward and `1/N²`-normalized inverse.
pub struct Fourier2D {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Full wavenumbers, Nyquist included as `-π/h`.
    k_full: Vec<f64>,
    /// Wavenumbers for odd-order derivatives: Nyquist mode zeroed.
    k_odd: Vec<f64>,
}

impl Fourier2D {
    pub fn new(grid: &CartesianGrid) -> Self {
        let n = grid.num_points_per_side();
        let mut planner = FftPlanner::new();
        let dk = 2.0 * std::f64::consts::PI / grid.box_length();
        let k_full: Vec<f64> = (0..n)
            .map(|i| {
                let i = i as isize;
                let wrapped = if i < (n / 2) as isize {
                    i
                } else {
                    i - n as isize
                };
                wrapped as f64 * dk
            })
            .collect();
        let mut k_odd = k_full.clone();
        k_odd[n / 2] = 0.0;
        Fourier2D {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k_full,
            k_odd,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn k_full(&self) -> &[f64] {
        &self.k_full
    }

    pub fn k_odd(&self) -> &[f64] {
        &self.k_odd
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n * self.n);
        let mut data: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse transform, returning the real part.
    pub fn inverse_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        assert_eq!(data.len(), self.n * self.n);
        self.transform(&mut data, &self.inverse);
        let scale = 1.0 / (self.n * self.n) as f64;
        data.into_iter().map(|c| c.re * scale).collect()
    }

    fn transform(&self, data: &mut Vec<Complex64>, plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        let mut transposed = vec![Complex64::default(); n * n];
        transpose(data, &mut transposed, n);
        plan.process_with_scratch(&mut transposed, &mut scratch);
        transpose(&transposed, data, n);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for jb in (0..n).step_by(BLOCK) {
        for ib in (0..n).step_by(BLOCK) {
            for j in jb..(jb + BLOCK).min(n) {
                for i in ib..(ib + BLOCK).min(n) {
                    dst[i * n + j] = src[j * n + i];
                }
            }
        }
    }
}
