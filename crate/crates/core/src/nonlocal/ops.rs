use rustfft::num_complex::Complex64;

use super::{Fourier2D, ScalarField2D, VectorField2D};
use crate::error::{Error, Result};

/// Relative bound on the mean of a source term handed to [`poisson_solve`].
pub const NEUTRALITY_TOLERANCE: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn gradient(f: &ScalarField2D) -> VectorField2D {
    let fourier = Fourier2D::new(&f.grid);
    let n = fourier.size();
    let k = fourier.k_odd();
    let f_hat = fourier.forward(&f.values);
    let mut gx = f_hat.clone();
    let mut gy = f_hat;
    for j in 0..n {
        for i in 0..n {
            let idx = j * n + i;
            gx[idx] *= I * k[i];
            gy[idx] *= I * k[j];
        }
    }
    VectorField2D {
        grid: f.grid,
        x_component: fourier.inverse_real(gx),
        y_component: fourier.inverse_real(gy),
    }
}

pub fn divergence(eta: &VectorField2D) -> ScalarField2D {
    apply_pair(eta, |kx, ky, ex, ey| I * (kx * ex + ky * ey))
}

/// `∂ₓη_y − ∂_yη_x`
pub fn curl2d(eta: &VectorField2D) -> ScalarField2D {
    apply_pair(eta, |kx, ky, ex, ey| I * (kx * ey - ky * ex))
}

pub fn laplacian(f: &ScalarField2D) -> ScalarField2D {
    let fourier = Fourier2D::new(&f.grid);
    let n = fourier.size();
    let k = fourier.k_full();
    let mut f_hat = fourier.forward(&f.values);
    for j in 0..n {
        for i in 0..n {
            f_hat[j * n + i] *= -(k[i] * k[i] + k[j] * k[j]);
        }
    }
    ScalarField2D {
        grid: f.grid,
        values: fourier.inverse_real(f_hat),
    }
}

/// Solves `Δφ = ρ` with the zero-mean gauge. The source must be neutral:
/// `|mean(ρ)| <= 1e-8 ‖ρ‖∞`.
pub fn poisson_solve(rho: &ScalarField2D) -> Result<ScalarField2D> {
    let mean = rho.mean();
    let allowed = NEUTRALITY_TOLERANCE * rho.sup_norm();
    if mean.abs() > allowed {
        return Err(Error::Neutrality { net: mean, allowed });
    }
    let fourier = Fourier2D::new(&rho.grid);
    let n = fourier.size();
    let k = fourier.k_full();
    let mut rho_hat = fourier.forward(&rho.values);
    for j in 0..n {
        for i in 0..n {
            let k2 = k[i] * k[i] + k[j] * k[j];
            let idx = j * n + i;
            rho_hat[idx] = if k2 == 0.0 {
                Complex64::default()
            } else {
                -rho_hat[idx] / k2
            };
        }
    }
    Ok(ScalarField2D {
        grid: rho.grid,
        values: fourier.inverse_real(rho_hat),
    })
}

/// `∇Δ⁻¹∇·η` through the symbol `k (k·η̂) / |k|²`; the projection onto
/// gradient fields. Modes with vanishing derivative symbol map to zero.
pub fn riesz_apply(eta: &VectorField2D) -> VectorField2D {
    let fourier = Fourier2D::new(&eta.grid);
    let n = fourier.size();
    let k = fourier.k_odd();
    let mut ex = fourier.forward(&eta.x_component);
    let mut ey = fourier.forward(&eta.y_component);
    for j in 0..n {
        for i in 0..n {
            let idx = j * n + i;
            let (kx, ky) = (k[i], k[j]);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                ex[idx] = Complex64::default();
                ey[idx] = Complex64::default();
            } else {
                let dot = (ex[idx] * kx + ey[idx] * ky) / k2;
                ex[idx] = dot * kx;
                ey[idx] = dot * ky;
            }
        }
    }
    VectorField2D {
        grid: eta.grid,
        x_component: fourier.inverse_real(ex),
        y_component: fourier.inverse_real(ey),
    }
}

fn apply_pair(
    eta: &VectorField2D,
    symbol: impl Fn(f64, f64, Complex64, Complex64) -> Complex64,
) -> ScalarField2D {
    let fourier = Fourier2D::new(&eta.grid);
    let n = fourier.size();
    let k = fourier.k_odd();
    let ex = fourier.forward(&eta.x_component);
    let ey = fourier.forward(&eta.y_component);
    let mut out = vec![Complex64::default(); n * n];
    for j in 0..n {
        for i in 0..n {
            let idx = j * n + i;
            out[idx] = symbol(k[i], k[j], ex[idx], ey[idx]);
        }
    }
    ScalarField2D {
        grid: eta.grid,
        values: fourier.inverse_real(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlocal::CartesianGrid;

    fn grid() -> CartesianGrid {
        CartesianGrid::new(128, 20.0).unwrap()
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let f = ScalarField2D::from_fn(grid(), |x, y| (-(x * x + y * y)).exp());
        let g = gradient(&f);
        let c = curl2d(&g);
        assert!(c.sup_norm() <= 1e-10 * g.sup_norm());
    }

    #[test]
    fn curl_of_rotation_field_matches_closed_form() {
        let eta = VectorField2D::from_fn(grid(), |x, y| {
            let e = (-(x * x + y * y)).exp();
            (-y * e, x * e)
        });
        let c = curl2d(&eta);
        let exact = ScalarField2D::from_fn(grid(), |x, y| {
            let r2 = x * x + y * y;
            2.0 * (-r2).exp() * (1.0 - r2)
        });
        let err = c
            .values
            .iter()
            .zip(&exact.values)
            .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn poisson_recovers_gaussian() {
        let s2 = 1.5f64;
        let gauss = ScalarField2D::from_fn(grid(), |x, y| (-(x * x + y * y) / s2).exp());
        // Δ exp(-r²/s) = (4r²/s² - 4/s) exp(-r²/s)
        let rho = ScalarField2D::from_fn(grid(), |x, y| {
            let r2 = x * x + y * y;
            (4.0 * r2 / (s2 * s2) - 4.0 / s2) * (-r2 / s2).exp()
        });
        let phi = poisson_solve(&rho).unwrap();
        let mean = gauss.mean();
        let err = phi
            .values
            .iter()
            .zip(&gauss.values)
            .fold(0.0f64, |a, (p, g)| a.max((p - (g - mean)).abs()));
        assert!(err <= 1e-8 * gauss.sup_norm(), "{err}");
    }

    #[test]
    fn poisson_zero_and_charged_sources() {
        let zero = ScalarField2D::zeros(grid());
        assert!(poisson_solve(&zero).unwrap().values.iter().all(|&v| v == 0.0));

        let mut charged = ScalarField2D::from_fn(grid(), |x, y| (-(x * x + y * y)).exp());
        let sup = charged.sup_norm();
        let shift = 0.1 * sup - charged.mean();
        charged.values.iter_mut().for_each(|v| *v += shift);
        assert!(matches!(
            poisson_solve(&charged),
            Err(Error::Neutrality { .. })
        ));
    }

    #[test]
    fn riesz_annihilates_divergence_free_field() {
        let eta = VectorField2D::from_fn(grid(), |x, y| {
            let e = (-(x * x + y * y)).exp();
            (-y * e, x * e)
        });
        let r = riesz_apply(&eta);
        assert!(r.sup_norm() <= 1e-6 * eta.sup_norm());
    }
}
