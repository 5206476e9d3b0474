use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::operators::Parity;

/// Exponential damping `exp(-α ((η - η_c)/(1 - η_c))^p)` of the modes with
/// normalized wavenumber `η > η_c`; lower modes pass untouched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFilter {
    pub order: u32,
    pub strength: f64,
    pub cutoff: f64,
}

impl Default for ExponentialFilter {
    fn default() -> Self {
        ExponentialFilter {
            order: 8,
            strength: 36.0,
            cutoff: 2.0 / 3.0,
        }
    }
}

impl ExponentialFilter {
    pub fn factor(&self, eta: f64) -> f64 {
        if eta <= self.cutoff {
            1.0
        } else {
            let s = ((eta - self.cutoff) / (1.0 - self.cutoff)).min(1.0);
            (-self.strength * s.powi(self.order as i32)).exp()
        }
    }
}

/// Filter applied through symmetric extensions, so that the cosine/sine
/// character of each profile matches its parity at the origin.
pub(crate) struct SymmetricFilter {
    cells: usize,
    cell_plans: (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>),
    cell_factors: Vec<f64>,
}

impl std::fmt::Debug for SymmetricFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricFilter").field("cells", &self.cells).finish()
    }
}

impl SymmetricFilter {
    pub fn new(cells: usize, filter: &ExponentialFilter) -> Self {
        let mut planner = FftPlanner::new();
        let cell_len = 2 * cells;
        let factors = |len: usize, nyquist: f64| -> Vec<f64> {
            (0..len)
                .map(|k| filter.factor(k.min(len - k) as f64 / nyquist))
                .collect()
        };
        SymmetricFilter {
            cells,
            cell_plans: (
                planner.plan_fft_forward(cell_len),
                planner.plan_fft_inverse(cell_len),
            ),
            cell_factors: factors(cell_len, cells as f64),
        }
    }

    /// Filters cell-centered samples, extended evenly or oddly about both
    /// ends of the grid.
    pub fn apply_cells(&self, values: &mut [f64], parity: Parity) {
        let n = self.cells;
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut buf: Vec<Complex64> = Vec::with_capacity(2 * n);
        buf.extend(values.iter().map(|&v| Complex64::new(v, 0.0)));
        buf.extend(values.iter().rev().map(|&v| Complex64::new(sign * v, 0.0)));
        damp(&mut buf, &self.cell_plans, &self.cell_factors);
        for (v, b) in values.iter_mut().zip(&buf) {
            *v = b.re;
        }
    }
}

fn damp(buf: &mut [Complex64], plans: &(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>), factors: &[f64]) {
    plans.0.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for (b, f) in buf.iter_mut().zip(factors) {
        *b *= f * scale;
    }
    plans.1.process(buf);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_profiles_pass_and_grid_noise_is_removed() {
        let n = 128;
        let filter = SymmetricFilter::new(n, &ExponentialFilter::default());
        let h = 10.0 / n as f64;
        let smooth: Vec<f64> = (0..n)
            .map(|j| {
                let r = (j as f64 + 0.5) * h;
                (-r * r).exp()
            })
            .collect();
        let mut v = smooth.clone();
        filter.apply_cells(&mut v, Parity::Even);
        let err = v.iter().zip(&smooth).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-12, "{err}");

        let mut noise: Vec<f64> = (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        filter.apply_cells(&mut noise, Parity::Odd);
        assert!(noise.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn factor_shape() {
        let f = ExponentialFilter::default();
        assert_eq!(f.factor(0.5), 1.0);
        assert_eq!(f.factor(2.0 / 3.0), 1.0);
        assert!((f.factor(1.0) - (-36.0f64).exp()).abs() < 1e-30);
    }
}
