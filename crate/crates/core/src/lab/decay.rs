use crate::error::{Error, Result};
use crate::kg::{fit_decay_exponent, DecayFit, KgPropagator, KgState};
use crate::nonlocal::{CartesianGrid, ScalarField2D};

/// Linear Klein-Gordon decay run from a Gaussian at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgDecayConfig {
    pub points_per_side: usize,
    pub box_length: f64,
    pub m0: f64,
    pub t_max: f64,
    pub window: (f64, f64),
    /// Number of logarithmically spaced sample times in `[1, t_max]`.
    pub samples: usize,
    /// Standard deviation of the initial Gaussian.
    pub sigma: f64,
}

impl Default for KgDecayConfig {
    fn default() -> Self {
        KgDecayConfig {
            points_per_side: 1024,
            box_length: 320.0,
            m0: 1.0,
            t_max: 120.0,
            window: (20.0, 120.0),
            samples: 60,
            sigma: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KgDecayReport {
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub fit: DecayFit,
    /// Largest relative energy change over the samples.
    pub energy_drift: f64,
}

impl KgDecayReport {
    /// `t,sup_w` rows with 17 significant digits.
    pub fn csv(&self) -> String {
        let mut out = String::from("t,sup_w\n");
        for (t, s) in self.times.iter().zip(&self.sup_norms) {
            out.push_str(&format!("{t:.16e},{s:.16e}\n"));
        }
        out
    }
}

impl KgDecayConfig {
    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.samples.max(2);
        let top = self.t_max.ln();
        (0..n)
            .map(|k| (top * k as f64 / (n - 1) as f64).exp())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.window;
        if !(self.t_max > 1.0 && self.t_max.is_finite()) {
            return Err(Error::ParameterDomain {
                name: "tmax",
                value: self.t_max,
                reason: "must exceed 1",
            });
        }
        if !(a >= 1.0 && b > a && b <= self.t_max) {
            return Err(Error::Data(format!(
                "fit window [{a}, {b}] must lie inside the sampled range [1, {}]",
                self.t_max
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::ParameterDomain {
                name: "sigma",
                value: self.sigma,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

pub fn run_kg_decay(config: &KgDecayConfig) -> Result<KgDecayReport> {
    config.validate()?;
    let grid = CartesianGrid::new(config.points_per_side, config.box_length)?;
    let s2 = 2.0 * config.sigma * config.sigma;
    let w0 = ScalarField2D::from_fn(grid, |x, y| (-(x * x + y * y) / s2).exp());
    let state = KgState::new(w0, ScalarField2D::zeros(grid), config.m0)?;
    let energy = state.energy();
    let propagator = KgPropagator::new(&state)?;
    let mut times = Vec::new();
    let mut sup_norms = Vec::new();
    let mut energy_drift = 0.0f64;
    for t in config.sample_times() {
        let now = propagator.at(t)?;
        energy_drift = energy_drift.max((now.energy() - energy).abs() / energy);
        times.push(t);
        sup_norms.push(now.w.sup_norm());
    }
    let fit = fit_decay_exponent(&times, &sup_norms, config.window)?;
    Ok(KgDecayReport {
        times,
        sup_norms,
        fit,
        energy_drift,
    })
}
