use crate::error::{Error, Result};
use crate::io::{InitialData, RunConfig};
use crate::params::{derive_constants, to_normalized};
use crate::radial::{
    run, run_normalized, FieldMode, Formulation, NormalizedState, PrimalState, RunStatus,
};

/// Largest admissible sup-difference between the two formulations.
pub const CROSS_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSample {
    /// Physical time.
    pub time: f64,
    pub diff_m: f64,
    pub diff_v: f64,
    pub diff_g: f64,
}

impl CrossSample {
    pub fn max(&self) -> f64 {
        self.diff_m.max(self.diff_v).max(self.diff_g)
    }
}

#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub samples: Vec<CrossSample>,
    /// False when the constants are not those the rescaled system is
    /// written for, so that a mismatch is expected.
    pub constants_consistent: bool,
}

impl CrossCheckReport {
    pub fn max_diff(&self) -> f64 {
        self.samples.iter().map(CrossSample::max).fold(0.0, f64::max)
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Evolves the same data in both formulations and compares them in the
/// rescaled variables at `checkpoints` equally spaced physical times up to
/// `t_end`. The fluid run keeps the configured field mode (`gauss` or
/// `dynamic`); the rescaled run always carries its field dynamically.
pub fn cross_check(config: &RunConfig, checkpoints: usize) -> Result<CrossCheckReport> {
    let InitialData::Profile(profile) = &config.initial else {
        return Err(Error::Data("cross-check needs an analytic initial profile".into()));
    };
    let mut primal_config = config.solver.clone();
    primal_config.formulation = Formulation::Primal;
    let mut normalized_config = config.solver.clone();
    normalized_config.formulation = Formulation::Normalized;
    if normalized_config.field_mode == FieldMode::Gauss {
        normalized_config.field_mode = FieldMode::Dynamic;
    }
    let (grid, params) = (&config.solver.grid, &config.solver.params);
    let consts = derive_constants(params)?;
    let resolved = profile.resolve(grid, params)?;
    let mut primal: PrimalState = resolved.primal_state(grid, params, primal_config.field_mode)?;
    let mut normalized: NormalizedState = resolved.normalized_state(grid, params, &consts)?;

    let t_end = config.solver.t_end;
    let count = checkpoints.max(1);
    let mut samples = Vec::with_capacity(count);
    for k in 1..=count {
        let t = t_end * k as f64 / count as f64;
        primal_config.t_end = t;
        normalized_config.t_end = t;
        let a = run(&primal_config, primal)?;
        let b = run_normalized(&normalized_config, normalized)?;
        for (name, status, message) in [
            ("fluid", a.status, &a.message),
            ("rescaled", b.status, &b.message),
        ] {
            match status {
                RunStatus::Completed => {}
                _ => {
                    return Err(Error::Precondition(format!(
                        "{name} run halted ({}) before t = {t}: {}",
                        status.as_str(),
                        message.as_deref().unwrap_or("")
                    )))
                }
            }
        }
        primal = a.final_state;
        normalized = b.final_state;
        let (m, v) = to_normalized(&primal.n, &primal.u, params, &consts)?;
        samples.push(CrossSample {
            time: t,
            diff_m: sup_diff(&m, &normalized.m),
            diff_v: sup_diff(&v, &normalized.v),
            diff_g: sup_diff(&primal.e, &normalized.g),
        });
    }
    Ok(CrossCheckReport {
        samples,
        constants_consistent: params.is_paper_units(),
    })
}
