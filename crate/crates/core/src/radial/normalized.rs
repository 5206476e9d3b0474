use std::f64::consts::PI;

use super::filter::SymmetricFilter;
use super::operators::{Parity, RadialOperators};
use super::primal::{energy_density, sup};
use super::run::{rk4, Diagnostics, ShockMonitor};
use super::{FieldMode, NormalizedState, SolverConfig};
use crate::error::{Error, Result};
use crate::params::{density_excess_of_m, derive_constants, DerivedConstants};

/// Solver for `(m, v, g)` with the local field law `∂_τ g = -n0 (1 + m - h(m)) v`.
#[derive(Debug)]
pub struct NormalizedSolver {
    config: SolverConfig,
    consts: DerivedConstants,
    ops: RadialOperators,
    filter: Option<SymmetricFilter>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRates {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub g: Vec<f64>,
}

impl NormalizedSolver {
    pub fn new(config: &SolverConfig) -> Result<Self> {
        let mut config = config.clone();
        config.formulation = super::Formulation::Normalized;
        config.validate()?;
        Ok(NormalizedSolver {
            consts: derive_constants(&config.params)?,
            ops: RadialOperators::new(&config.grid),
            filter: config
                .filter
                .map(|f| SymmetricFilter::new(config.grid.num_cells(), &f)),
            config,
        })
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.consts
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// `n/n0 - 1` at every center.
    fn density_excess(&self, m: &[f64]) -> Result<Vec<f64>> {
        m.iter()
            .enumerate()
            .map(|(index, &mj)| {
                density_excess_of_m(mj, self.config.params.gamma).map_err(|e| match e {
                    Error::Vacuum { detail, .. } => Error::Vacuum { index, detail },
                    other => other,
                })
            })
            .collect()
    }

    pub fn rhs(&self, state: &NormalizedState) -> Result<NormalizedRates> {
        let a = self.config.params.half_gamma_minus_one();
        let n0 = self.config.params.n0;
        let c0sq = self.consts.c0 * self.consts.c0;
        let field_on = self.config.field_mode != FieldMode::Off;
        let excess = self.density_excess(&state.m)?;
        let dm = self.ops.gradient(&state.m);
        let dv = self.ops.odd_gradient(&state.v);
        let div_v = self.ops.divergence(&state.v);
        let cells = state.m.len();
        let mut rm = Vec::with_capacity(cells);
        let mut rv = Vec::with_capacity(cells);
        let mut rg = Vec::with_capacity(cells);
        for j in 0..cells {
            let (m, v) = (state.m[j], state.v[j]);
            let div = div_v[j];
            rm.push(-div - v * dm[j] - a * m * div);
            let coupling = if field_on { state.g[j] / c0sq } else { 0.0 };
            rv.push(-dm[j] - v * dv[j] - a * m * dm[j] + coupling);
            rg.push(if field_on { -n0 * (1.0 + excess[j]) * v } else { 0.0 });
        }
        for (field, values) in [("dm/dt", &rm), ("dv/dt", &rv), ("dg/dt", &rg)] {
            if let Some(index) = values.iter().position(|x| !x.is_finite()) {
                return Err(Error::Instability { field, index });
            }
        }
        Ok(NormalizedRates {
            m: rm,
            v: rv,
            g: rg,
        })
    }

    /// `cfl Δr / max(|v| + 1 + a m)`, in units of `τ`.
    pub fn cfl_dt(&self, state: &NormalizedState) -> f64 {
        let a = self.config.params.half_gamma_minus_one();
        let speed = state
            .m
            .iter()
            .zip(&state.v)
            .map(|(&m, &v)| v.abs() + (1.0 + a * m).max(0.0))
            .fold(0.0, f64::max);
        self.config.cfl_number * self.config.grid.dr() / speed
    }

    pub fn step(&self, state: &NormalizedState, dt: f64) -> Result<NormalizedState> {
        let fields = [state.m.clone(), state.v.clone(), state.g.clone()];
        let eval = |f: &[Vec<f64>; 3]| -> Result<[Vec<f64>; 3]> {
            let s = NormalizedState {
                time: state.time,
                m: f[0].clone(),
                v: f[1].clone(),
                g: f[2].clone(),
            };
            let r = self.rhs(&s)?;
            Ok([r.m, r.v, r.g])
        };
        let [mut m, mut v, mut g] = rk4(&fields, dt, eval)?;
        if let Some(filter) = &self.filter {
            filter.apply_cells(&mut m, Parity::Even);
            filter.apply_cells(&mut v, Parity::Odd);
            filter.apply_cells(&mut g, Parity::Odd);
        }
        let next = NormalizedState {
            time: state.time + dt,
            m,
            v,
            g,
        };
        for (field, values) in [("m", &next.m), ("v", &next.v), ("g", &next.g)] {
            if let Some(index) = values.iter().position(|x| !x.is_finite()) {
                return Err(Error::Instability { field, index });
            }
        }
        Ok(next)
    }

    /// Fluid variables `(n, u, E)` at the centers, `E = g`.
    pub fn physical_profiles(&self, state: &NormalizedState) -> Result<[Vec<f64>; 3]> {
        let n0 = self.config.params.n0;
        let n = self
            .density_excess(&state.m)?
            .iter()
            .map(|x| n0 * (1.0 + x))
            .collect();
        let u = state.v.iter().map(|v| v * self.consts.c0).collect();
        Ok([n, u, state.g.clone()])
    }

    pub fn monitor(&self, state: &NormalizedState) -> ShockMonitor {
        let c0 = self.consts.c0;
        let n0 = self.config.params.n0;
        let grad_u = sup(&self.ops.odd_gradient(&state.v)) * c0;
        let q: Vec<f64> = state
            .m
            .iter()
            .map(|&m| {
                density_excess_of_m(m, self.config.params.gamma).map_or(f64::NAN, |x| n0 * x)
            })
            .collect();
        ShockMonitor {
            max_grad_u: grad_u,
            max_grad_n: sup(&self.ops.gradient(&q)),
        }
    }

    pub fn diagnostics(&self, state: &NormalizedState) -> Diagnostics {
        let params = &self.config.params;
        let n0 = params.n0;
        let cells = state.m.len();
        let [n, u, e] = self
            .physical_profiles(state)
            .unwrap_or_else(|_| [vec![f64::NAN; cells], vec![f64::NAN; cells], state.g.clone()]);
        let field_on = self.config.field_mode != FieldMode::Off;
        let excess: Vec<f64> = n.iter().map(|x| x - n0).collect();
        let density = energy_density(params, &n, &u, &e, field_on);
        let monitor = self.monitor(state);
        Diagnostics {
            time: state.time / self.consts.c0,
            excess_mass: 2.0 * PI * self.ops.integrate(&excess),
            energy: 2.0 * PI * self.ops.integrate(&density),
            sup_density_pert: sup(&excess),
            sup_velocity: sup(&u),
            max_grad_u: monitor.max_grad_u,
            max_grad_n: monitor.max_grad_n,
            sup_e: if field_on { sup(&e) } else { 0.0 },
        }
    }
}

pub fn normalized_rhs(state: &NormalizedState, config: &SolverConfig) -> Result<NormalizedRates> {
    NormalizedSolver::new(config)?.rhs(state)
}
