//! Smooth radial initial data with optional charge neutralization.

use super::{FieldMode, NormalizedState, PrimalState, RadialGrid, RadialOperators};
use crate::error::{Error, Result};
use crate::params::{to_normalized, DerivedConstants, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Gaussian,
    /// `exp(1 - 1/(1 - s²))` on `|s| < 1`.
    Bump,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Gaussian => "gaussian",
            Shape::Bump => "bump",
        }
    }

    fn value(self, s: f64) -> f64 {
        match self {
            Shape::Gaussian => (-s * s).exp(),
            Shape::Bump => {
                if s.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - s * s)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    fn slope(self, s: f64) -> f64 {
        match self {
            Shape::Gaussian => -2.0 * s * (-s * s).exp(),
            Shape::Bump => {
                if s.abs() < 1.0 {
                    let d = 1.0 - s * s;
                    -2.0 * s / (d * d) * (1.0 - 1.0 / d).exp()
                } else {
                    0.0
                }
            }
        }
    }
}

/// Density `n0 (1 + ε (b(r) - β a(r)))` and velocity `V b'(r) / max|b'|`,
/// where `b` is the shape centered at `center` (mirrored through the
/// origin) and `a` a Gaussian annulus outside it whose weight `β` makes the
/// net charge vanish. Positive `V` points up the density slope, i.e.
/// compresses the crest.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    pub shape: Shape,
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    pub velocity_amplitude: f64,
    pub neutralize: bool,
}

impl InitialProfile {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        InitialProfile {
            shape: Shape::Gaussian,
            amplitude,
            width,
            center: 0.0,
            velocity_amplitude: 0.0,
            neutralize: true,
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, reason| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::ParameterDomain {
                    name,
                    value,
                    reason,
                })
            }
        };
        check("width", self.width, self.width > 0.0, "must be positive")?;
        check("center", self.center, self.center >= 0.0, "must be non-negative")?;
        check("amplitude", self.amplitude, true, "must be finite")?;
        check(
            "velocity_amplitude",
            self.velocity_amplitude,
            true,
            "must be finite",
        )
    }

    fn bump(&self, r: f64) -> f64 {
        let w = self.width;
        if self.center == 0.0 {
            self.shape.value(r / w)
        } else {
            self.shape.value((r - self.center) / w) + self.shape.value((r + self.center) / w)
        }
    }

    fn bump_slope(&self, r: f64) -> f64 {
        let w = self.width;
        if self.center == 0.0 {
            self.shape.slope(r / w) / w
        } else {
            (self.shape.slope((r - self.center) / w) + self.shape.slope((r + self.center) / w)) / w
        }
    }

    /// Radius of the compensating annulus.
    pub fn annulus_radius(&self) -> f64 {
        self.center + 4.0 * self.width
    }

    fn annulus(&self, r: f64) -> f64 {
        let (ra, w) = (self.annulus_radius(), self.width);
        Shape::Gaussian.value((r - ra) / w) + Shape::Gaussian.value((r + ra) / w)
    }

    /// Fixes the neutralizing weight on `grid` and returns the concrete
    /// profile.
    pub fn resolve(&self, grid: &RadialGrid, params: &PhysicalParams) -> Result<ResolvedProfile> {
        self.validate()?;
        params.validate()?;
        let centers = grid.centers();
        let bump: Vec<f64> = centers.iter().map(|&r| self.bump(r)).collect();
        let ring: Vec<f64> = centers.iter().map(|&r| self.annulus(r)).collect();
        let beta = if self.neutralize {
            let ops = RadialOperators::new(grid);
            ops.integrate(&bump) / ops.integrate(&ring)
        } else {
            0.0
        };

        let slope_scale = {
            let reach = self.center + 6.0 * self.width;
            (0..=20_000)
                .map(|k| self.bump_slope(reach * k as f64 / 20_000.0).abs())
                .fold(0.0f64, f64::max)
        };
        Ok(ResolvedProfile {
            profile: self.clone(),
            beta,
            slope_scale,
            n0: params.n0,
            bump,
            ring,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedProfile {
    profile: InitialProfile,
    /// Weight of the compensating annulus relative to the main shape.
    pub beta: f64,
    slope_scale: f64,
    n0: f64,
    bump: Vec<f64>,
    ring: Vec<f64>,
}

impl ResolvedProfile {
    pub fn density(&self, r: f64) -> f64 {
        let p = &self.profile;
        self.n0 * (1.0 + p.amplitude * (p.bump(r) - self.beta * p.annulus(r)))
    }

    pub fn velocity(&self, r: f64) -> f64 {
        if self.slope_scale == 0.0 {
            return 0.0;
        }
        self.profile.velocity_amplitude * self.profile.bump_slope(r) / self.slope_scale
    }

    /// Density at the cell centers of the grid the profile was resolved on.
    pub fn density_samples(&self) -> Vec<f64> {
        let eps = self.profile.amplitude;
        self.bump
            .iter()
            .zip(&self.ring)
            .map(|(b, a)| self.n0 * (1.0 + eps * (b - self.beta * a)))
            .collect()
    }

    pub fn primal_state(
        &self,
        grid: &RadialGrid,
        params: &PhysicalParams,
        mode: FieldMode,
    ) -> Result<PrimalState> {
        let n = self.density_samples();
        let u = grid.centers().iter().map(|&r| self.velocity(r)).collect();
        let mut state = PrimalState {
            time: 0.0,
            n,
            u,
            e: vec![0.0; grid.num_cells()],
        };
        if mode != FieldMode::Off {
            state.e = super::gauss_field(&state.n, grid, params)?;
        }
        state.validate(grid, params)?;
        Ok(state)
    }

    /// The same data in rescaled variables, `g` equal to the Gauss-law
    /// field of the density.
    pub fn normalized_state(
        &self,
        grid: &RadialGrid,
        params: &PhysicalParams,
        consts: &DerivedConstants,
    ) -> Result<NormalizedState> {
        let n = self.density_samples();
        let u: Vec<f64> = grid.centers().iter().map(|&r| self.velocity(r)).collect();
        let (m, v) = to_normalized(&n, &u, params, consts)?;
        let g = super::gauss_field(&n, grid, params)?;
        let state = NormalizedState { time: 0.0, m, v, g };
        state.validate(grid, params)?;
        Ok(state)
    }
}
