//! Linear Klein-Gordon propagation `(∂ₜ² - Δ + m0) w = 0` on the periodic
//! box, decay-exponent fits, and the quadratic terms of the second-order
//! form of the rescaled system.

mod fit;
mod quadratic;

pub use fit::{fit_decay_exponent, DecayFit};
pub use quadratic::{kg_nonlocal_term, kg_quadratic_rhs, nonlocal_comparison, NonlocalComparison};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nonlocal::{CartesianGrid, Fourier2D, ScalarField2D};

/// Largest boundary value tolerated after propagation, relative to the sup
/// of the solution.
pub const WRAP_TOLERANCE: f64 = 1e-8;

/// Relative level below which the data count as outside their support.
const SUPPORT_LEVEL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KgState {
    pub w: ScalarField2D,
    pub wt: ScalarField2D,
    pub mass_param: f64,
}

impl KgState {
    pub fn new(w: ScalarField2D, wt: ScalarField2D, mass_param: f64) -> Result<Self> {
        if !(mass_param > 0.0 && mass_param.is_finite()) {
            return Err(Error::ParameterDomain {
                name: "m0",
                value: mass_param,
                reason: "must be positive",
            });
        }
        if w.grid != wt.grid {
            return Err(Error::Data("w and wt live on different grids".into()));
        }
        for (field, values) in [("w", &w.values), ("wt", &wt.values)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::Instability { field, index });
            }
        }
        Ok(KgState { w, wt, mass_param })
    }

    /// `Σ (wt² + |∇w|² + m0 w²) h²`, with the gradient taken spectrally.
    pub fn energy(&self) -> f64 {
        let grid = self.w.grid;
        let fourier = Fourier2D::new(&grid);
        let n = grid.num_points_per_side();
        let w_hat = fourier.forward(&self.w.values);
        let wt_hat = fourier.forward(&self.wt.values);
        let k = fourier.k_full();
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                let idx = j * n + i;
                let omega2 = self.mass_param + k[i] * k[i] + k[j] * k[j];
                total += wt_hat[idx].norm_sqr() + omega2 * w_hat[idx].norm_sqr();
            }
        }
        // Parseval: Σ|f|² = Σ|f̂|² / N²
        total * grid.spacing().powi(2) / grid.len() as f64
    }
}

/// Exact spectral solution operator for fixed data.
pub struct KgPropagator {
    grid: CartesianGrid,
    fourier: Fourier2D,
    m0: f64,
    w0_hat: Vec<Complex64>,
    w1_hat: Vec<Complex64>,
    omega: Vec<f64>,
    /// Radius beyond which the data are below [`SUPPORT_LEVEL`].
    support: f64,
    /// Data that already reach the boundary are treated as genuinely
    /// periodic and are not guarded against wrap-around.
    localized: bool,
}

impl std::fmt::Debug for KgPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KgPropagator")
            .field("grid", &self.grid)
            .field("m0", &self.m0)
            .field("support", &self.support)
            .finish()
    }
}

impl KgPropagator {
    pub fn new(state: &KgState) -> Result<Self> {
        let state = KgState::new(state.w.clone(), state.wt.clone(), state.mass_param)?;
        let grid = state.w.grid;
        let fourier = Fourier2D::new(&grid);
        let n = grid.num_points_per_side();
        let k = fourier.k_full();
        let omega = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx % n, idx / n);
                (state.mass_param + k[i] * k[i] + k[j] * k[j]).sqrt()
            })
            .collect();
        let scale = state.w.sup_norm().max(state.wt.sup_norm());
        let support = grid
            .nodes()
            .filter(|&(idx, _, _)| {
                state.w.values[idx].abs().max(state.wt.values[idx].abs()) > SUPPORT_LEVEL * scale
            })
            .map(|(_, x, y)| x.hypot(y))
            .fold(0.0, f64::max);
        let localized =
            state.w.boundary_sup().max(state.wt.boundary_sup()) <= WRAP_TOLERANCE * scale;
        Ok(KgPropagator {
            localized,
            w0_hat: fourier.forward(&state.w.values),
            w1_hat: fourier.forward(&state.wt.values),
            grid,
            fourier,
            m0: state.mass_param,
            omega,
            support,
        })
    }

    /// Radius of the numerical support of the data.
    pub fn support_radius(&self) -> f64 {
        self.support
    }

    /// `(w(t), ∂ₜw(t))`. For localized data, fails when the light cone of
    /// the data or the propagated solution itself reaches the box boundary.
    pub fn at(&self, t: f64) -> Result<KgState> {
        if !t.is_finite() {
            return Err(Error::ParameterDomain {
                name: "t",
                value: t,
                reason: "must be finite",
            });
        }
        let half = 0.5 * self.grid.box_length();
        if self.localized && self.support + t.abs() >= half {
            return Err(Error::DomainTooSmall {
                detail: format!(
                    "data support {:.3} plus light-cone radius {:.3} exceeds the half box {half}",
                    self.support,
                    t.abs()
                ),
            });
        }
        let (w_hat, wt_hat): (Vec<Complex64>, Vec<Complex64>) = self
            .w0_hat
            .iter()
            .zip(&self.w1_hat)
            .zip(&self.omega)
            .map(|((&a, &b), &om)| {
                let (s, c) = (om * t).sin_cos();
                (a * c + b * (s / om), b * c - a * (om * s))
            })
            .unzip();
        let w = ScalarField2D {
            grid: self.grid,
            values: self.fourier.inverse_real(w_hat),
        };
        let wt = ScalarField2D {
            grid: self.grid,
            values: self.fourier.inverse_real(wt_hat),
        };
        let sup = w.sup_norm();
        let edge = w.boundary_sup();
        if self.localized && edge > WRAP_TOLERANCE * sup {
            return Err(Error::DomainTooSmall {
                detail: format!(
                    "solution reaches the boundary at t = {t}: edge {edge:e} vs sup {sup:e}"
                ),
            });
        }
        Ok(KgState {
            w,
            wt,
            mass_param: self.m0,
        })
    }
}

pub fn kg_linear_propagate(
    w0: &ScalarField2D,
    w1: &ScalarField2D,
    t: f64,
    m0: f64,
    grid: &CartesianGrid,
) -> Result<(ScalarField2D, ScalarField2D)> {
    if w0.grid != *grid || w1.grid != *grid {
        return Err(Error::Data("data do not live on the requested grid".into()));
    }
    let state = KgState::new(w0.clone(), w1.clone(), m0)?;
    let out = KgPropagator::new(&state)?.at(t)?;
    Ok((out.w, out.wt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: CartesianGrid, width: f64) -> ScalarField2D {
        ScalarField2D::from_fn(grid, |x, y| (-(x * x + y * y) / (width * width)).exp())
    }

    #[test]
    fn zero_time_returns_the_data() {
        let grid = CartesianGrid::new(64, 40.0).unwrap();
        let w0 = gaussian(grid, 2.0);
        let w1 = ScalarField2D::zeros(grid);
        let (w, wt) = kg_linear_propagate(&w0, &w1, 0.0, 1.0, &grid).unwrap();
        let err = w.values.iter().zip(&w0.values).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-14);
        assert!(wt.sup_norm() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_mass() {
        let grid = CartesianGrid::new(16, 10.0).unwrap();
        let z = ScalarField2D::zeros(grid);
        assert!(matches!(
            KgState::new(z.clone(), z, 0.0),
            Err(Error::ParameterDomain { name: "m0", .. })
        ));
    }
}
