use std::f64::consts::PI;

use super::filter::SymmetricFilter;
use super::operators::{Parity, RadialOperators};
use super::run::{rk4, Diagnostics, ShockMonitor};
use super::{FieldMode, PrimalState, RadialGrid, SolverConfig};
use crate::error::{Error, Result};
use crate::nonlocal::NEUTRALITY_TOLERANCE;
use crate::params::{PhysicalParams, VACUUM_FRACTION};

/// Field at the cell centers, `E(r_j) = (κ / r_j) ∫_0^{r_j} (n - n0) s ds`,
/// from the cumulative midpoint sums of the enclosed charge.
pub fn gauss_field(n: &[f64], grid: &RadialGrid, params: &PhysicalParams) -> Result<Vec<f64>> {
    let ops = RadialOperators::new(grid);
    check_neutrality(n, &ops, params)?;
    Ok(field_from_density(n, &ops, params))
}

fn check_neutrality(n: &[f64], ops: &RadialOperators, params: &PhysicalParams) -> Result<()> {
    let (charge, magnitude) = n.iter().zip(ops.weights()).fold((0.0, 0.0), |(c, m), (n, w)| {
        let q = (n - params.n0) * w;
        (c + q, m + q.abs())
    });
    let allowed = NEUTRALITY_TOLERANCE * magnitude;
    if charge.abs() > allowed {
        return Err(Error::Neutrality {
            net: 2.0 * PI * charge,
            allowed: 2.0 * PI * allowed,
        });
    }
    Ok(())
}

fn field_from_density(n: &[f64], ops: &RadialOperators, params: &PhysicalParams) -> Vec<f64> {
    let q: Vec<f64> = n.iter().map(|v| params.kappa * (v - params.n0)).collect();
    ops.center_field(&ops.enclosed(&q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalRates {
    pub n: Vec<f64>,
    pub u: Vec<f64>,
    pub e: Vec<f64>,
}

/// Solver for the fluid variables with its operators and filter plans.
#[derive(Debug)]
pub struct PrimalSolver {
    config: SolverConfig,
    ops: RadialOperators,
    filter: Option<SymmetricFilter>,
}

impl PrimalSolver {
    pub fn new(config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(PrimalSolver {
            config: config.clone(),
            ops: RadialOperators::new(&config.grid),
            filter: config
                .filter
                .map(|f| SymmetricFilter::new(config.grid.num_cells(), &f)),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn grid(&self) -> &RadialGrid {
        &self.config.grid
    }

    fn params(&self) -> &PhysicalParams {
        &self.config.params
    }

    /// Field used by the momentum equation in the current mode.
    fn field(&self, state: &PrimalState) -> Vec<f64> {
        match self.config.field_mode {
            FieldMode::Off => vec![0.0; state.n.len()],
            FieldMode::Dynamic => state.e.clone(),
            FieldMode::Gauss => field_from_density(&state.n, &self.ops, self.params()),
        }
    }

    pub fn rhs(&self, state: &PrimalState) -> Result<PrimalRates> {
        let params = self.params();
        let floor = VACUUM_FRACTION * params.n0;
        if let Some(index) = state.n.iter().position(|&v| !(v > floor)) {
            return Err(Error::Vacuum {
                index,
                detail: format!("density {} at r = {}", state.n[index], self.grid().center(index)),
            });
        }
        let flux: Vec<f64> = state.n.iter().zip(&state.u).map(|(n, u)| n * u).collect();
        let dn: Vec<f64> = self.ops.divergence(&flux).iter().map(|d| -d).collect();
        let excess: Vec<f64> = state.n.iter().map(|n| n - params.n0).collect();
        let grad_n = self.ops.gradient(&excess);
        let grad_u = self.ops.odd_gradient(&state.u);
        let e = self.field(state);

        let pressure = params.entropy_const_a * params.gamma / params.mass_me;
        let force = params.charge_e / params.mass_me;
        let du: Vec<f64> = (0..state.n.len())
            .map(|j| {
                -state.u[j] * grad_u[j]
                    - pressure * state.n[j].powf(params.gamma - 2.0) * grad_n[j]
                    + force * e[j]
            })
            .collect();
        let de = match self.config.field_mode {
            // ∂ₜE = -κ n u written as the field of the charge moved by the flux
            FieldMode::Dynamic => {
                let rate: Vec<f64> = dn.iter().map(|d| params.kappa * d).collect();
                self.ops.center_field(&self.ops.enclosed(&rate))
            }
            _ => vec![0.0; state.n.len()],
        };
        for (field, values) in [("dn/dt", &dn), ("du/dt", &du), ("dE/dt", &de)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::Instability { field, index });
            }
        }
        Ok(PrimalRates { n: dn, u: du, e: de })
    }

    pub fn cfl_dt(&self, state: &PrimalState) -> f64 {
        cfl_dt(state, self.grid(), self.params(), self.config.cfl_number)
    }

    /// One classical RK4 step followed by the optional filter; in Gauss
    /// mode the stored field is rebuilt from the new density.
    pub fn step(&self, state: &PrimalState, dt: f64) -> Result<PrimalState> {
        let fields = [state.n.clone(), state.u.clone(), state.e.clone()];
        let eval = |f: &[Vec<f64>; 3]| -> Result<[Vec<f64>; 3]> {
            let s = PrimalState {
                time: state.time,
                n: f[0].clone(),
                u: f[1].clone(),
                e: f[2].clone(),
            };
            let r = self.rhs(&s)?;
            Ok([r.n, r.u, r.e])
        };
        let [n, u, e] = rk4(&fields, dt, eval)?;
        let mut next = PrimalState {
            time: state.time + dt,
            n,
            u,
            e,
        };
        if let Some(filter) = &self.filter {
            self.apply_filter(filter, &mut next);
        }
        if self.config.field_mode == FieldMode::Gauss {
            next.e = field_from_density(&next.n, &self.ops, self.params());
        }
        for (field, values) in [("n", &next.n), ("u", &next.u), ("E", &next.e)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::Instability { field, index });
            }
        }
        Ok(next)
    }

    fn apply_filter(&self, filter: &SymmetricFilter, state: &mut PrimalState) {
        let mut filtered = state.n.clone();
        filter.apply_cells(&mut filtered, Parity::Even);
        let mut delta: Vec<f64> = filtered.iter().zip(&state.n).map(|(a, b)| a - b).collect();
        // return the removed mass in proportion to the local change
        let w = self.ops.weights();
        let lost: f64 = delta.iter().zip(w).map(|(d, w)| d * w).sum();
        let spread: f64 = delta.iter().zip(w).map(|(d, w)| d.abs() * w).sum();
        if spread > 0.0 {
            for d in delta.iter_mut() {
                *d -= lost * d.abs() / spread;
            }
        }
        for (n, d) in state.n.iter_mut().zip(&delta) {
            *n += d;
        }
        if self.config.field_mode == FieldMode::Dynamic {
            let kappa = self.params().kappa;
            let q: Vec<f64> = delta.iter().map(|d| kappa * d).collect();
            let de = self.ops.center_field(&self.ops.enclosed(&q));
            for (e, d) in state.e.iter_mut().zip(de) {
                *e += d;
            }
        }
        filter.apply_cells(&mut state.u, Parity::Odd);
    }

    pub fn monitor(&self, state: &PrimalState) -> ShockMonitor {
        let n0 = self.params().n0;
        let excess: Vec<f64> = state.n.iter().map(|n| n - n0).collect();
        ShockMonitor {
            max_grad_u: sup(&self.ops.odd_gradient(&state.u)),
            max_grad_n: sup(&self.ops.gradient(&excess)),
        }
    }

    pub fn diagnostics(&self, state: &PrimalState) -> Diagnostics {
        let params = self.params();
        let n0 = params.n0;
        let excess: Vec<f64> = state.n.iter().map(|n| n - n0).collect();
        let e = self.field(state);
        let field_on = self.config.field_mode != FieldMode::Off;
        let density = energy_density(params, &state.n, &state.u, &e, field_on);
        let monitor = self.monitor(state);
        Diagnostics {
            time: state.time,
            excess_mass: 2.0 * PI * self.ops.integrate(&excess),
            energy: 2.0 * PI * self.ops.integrate(&density),
            sup_density_pert: sup(&excess),
            sup_velocity: sup(&state.u),
            max_grad_u: monitor.max_grad_u,
            max_grad_n: monitor.max_grad_n,
            sup_e: if field_on { sup(&e) } else { 0.0 },
        }
    }
}

pub(crate) fn energy_density(
    params: &PhysicalParams,
    n: &[f64],
    u: &[f64],
    e: &[f64],
    field_on: bool,
) -> Vec<f64> {
    let g = params.gamma;
    let n0 = params.n0;
    let n0g = n0.powf(g);
    let slope = g * n0.powf(g - 1.0);
    let field = if field_on && params.kappa > 0.0 {
        params.charge_e / (2.0 * params.kappa)
    } else {
        0.0
    };
    n.iter()
        .zip(u)
        .zip(e)
        .map(|((&n, &u), &e)| {
            0.5 * params.mass_me * n * u * u
                + params.entropy_const_a * (n.powf(g) - n0g - slope * (n - n0)) / (g - 1.0)
                + field * e * e
        })
        .collect()
}

pub(crate) fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |a, v| a.max(v.abs()))
}

pub fn primal_rhs(state: &PrimalState, config: &SolverConfig) -> Result<PrimalRates> {
    PrimalSolver::new(config)?.rhs(state)
}

/// `cfl Δr / max_j (|u_j| + c(n_j))`.
pub fn cfl_dt(state: &PrimalState, grid: &RadialGrid, params: &PhysicalParams, cfl: f64) -> f64 {
    let speed = state
        .n
        .iter()
        .zip(&state.u)
        .map(|(&n, &u)| u.abs() + params.sound_speed(n.max(0.0)))
        .fold(0.0, f64::max);
    cfl * grid.dr() / speed
}

pub fn step_rk4(state: &PrimalState, dt: f64, config: &SolverConfig) -> Result<PrimalState> {
    PrimalSolver::new(config)?.step(state, dt)
}

pub fn shock_monitor(state: &PrimalState, config: &SolverConfig) -> Result<ShockMonitor> {
    Ok(PrimalSolver::new(config)?.monitor(state))
}

pub fn diagnostics(state: &PrimalState, config: &SolverConfig) -> Result<Diagnostics> {
    Ok(PrimalSolver::new(config)?.diagnostics(state))
}
