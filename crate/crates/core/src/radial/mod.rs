//! Method-of-lines solver for radially symmetric flows, in the fluid
//! variables `(n, u, E)` and in the rescaled variables `(m, v, g)`.
//!
//! The grid is cell-centered, `r_j = (j + 1/2) Δr`, so no unknown sits at
//! the origin. Density is even and velocity and field are odd through the
//! origin; the far field is pinned to equilibrium.

mod filter;
pub mod init;
mod normalized;
mod primal;
mod operators;
mod run;

pub use filter::ExponentialFilter;
pub use normalized::{normalized_rhs, NormalizedSolver};
pub use primal::{cfl_dt, diagnostics, gauss_field, primal_rhs, shock_monitor, step_rk4, PrimalSolver};
pub use run::{run, run_normalized, BlowupCriterion, Diagnostics, RunResult, RunStatus};
pub use operators::{Parity, RadialOperators};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    num_cells: usize,
    r_max: f64,
}

impl RadialGrid {
    pub fn new(num_cells: usize, r_max: f64) -> Result<Self> {
        if num_cells < MIN_CELLS {
            return Err(Error::Grid(format!(
                "radial grid needs at least {MIN_CELLS} cells, got {num_cells}"
            )));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::Grid(format!("r_max must be positive, got {r_max}")));
        }
        Ok(RadialGrid { num_cells, r_max })
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    #[inline]
    pub fn dr(&self) -> f64 {
        self.r_max / self.num_cells as f64
    }

    /// Cell center `(j + 1/2) Δr`.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr()
    }

    /// Cell face `f Δr`, `f = 0..=num_cells`.
    #[inline]
    pub fn face(&self, f: usize) -> f64 {
        f as f64 * self.dr()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.num_cells).map(|j| self.center(j)).collect()
    }
}

/// Fluid state: density, velocity and field at the cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalState {
    pub time: f64,
    pub n: Vec<f64>,
    pub u: Vec<f64>,
    pub e: Vec<f64>,
}

impl PrimalState {
    pub fn equilibrium(grid: &RadialGrid, n0: f64) -> Self {
        let cells = grid.num_cells();
        PrimalState {
            time: 0.0,
            n: vec![n0; cells],
            u: vec![0.0; cells],
            e: vec![0.0; cells],
        }
    }

    pub fn validate(&self, grid: &RadialGrid, params: &PhysicalParams) -> Result<()> {
        check_lengths(grid, [&self.n, &self.u, &self.e])?;
        check_finite(["n", "u", "E"], [&self.n, &self.u, &self.e])?;
        let floor = crate::params::VACUUM_FRACTION * params.n0;
        if let Some(index) = self.n.iter().position(|&n| !(n > floor)) {
            return Err(Error::Vacuum {
                index,
                detail: format!("density {} at or below the vacuum floor", self.n[index]),
            });
        }
        Ok(())
    }
}

/// Rescaled state: `m`, `v`, `g` at cell centers, `time` is `τ = c0 t`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedState {
    pub time: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub g: Vec<f64>,
}

impl NormalizedState {
    pub fn zeros(grid: &RadialGrid) -> Self {
        let cells = grid.num_cells();
        NormalizedState {
            time: 0.0,
            m: vec![0.0; cells],
            v: vec![0.0; cells],
            g: vec![0.0; cells],
        }
    }

    pub fn validate(&self, grid: &RadialGrid, params: &PhysicalParams) -> Result<()> {
        check_lengths(grid, [&self.m, &self.v, &self.g])?;
        check_finite(["m", "v", "g"], [&self.m, &self.v, &self.g])?;
        let a = params.half_gamma_minus_one();
        if let Some(index) = self.m.iter().position(|&m| !(a * m + 1.0 > 0.0)) {
            return Err(Error::Vacuum {
                index,
                detail: format!("m = {} leaves the transform domain", self.m[index]),
            });
        }
        Ok(())
    }
}

fn check_lengths(grid: &RadialGrid, fields: [&Vec<f64>; 3]) -> Result<()> {
    let cells = grid.num_cells();
    if fields.iter().any(|f| f.len() != cells) {
        return Err(Error::Data(format!(
            "state profiles must have {cells} entries, got {:?}",
            fields.map(|f| f.len())
        )));
    }
    Ok(())
}

fn check_finite(names: [&'static str; 3], fields: [&Vec<f64>; 3]) -> Result<()> {
    for (field, values) in names.into_iter().zip(fields) {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Instability { field, index });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    /// `∂ₜE = -κ n u` integrated alongside the fluid.
    Dynamic,
    /// `E` rebuilt from the enclosed charge at every stage.
    Gauss,
    /// No electric field: pure compressible Euler.
    Off,
}

impl FieldMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldMode::Dynamic => "dynamic",
            FieldMode::Gauss => "gauss",
            FieldMode::Off => "off",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    Primal,
    Normalized,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Primal => "primal",
            Formulation::Normalized => "normalized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub params: PhysicalParams,
    pub grid: RadialGrid,
    pub cfl_number: f64,
    /// Physical end time.
    pub t_end: f64,
    pub field_mode: FieldMode,
    pub filter: Option<ExponentialFilter>,
    pub diagnostics_stride: usize,
    pub formulation: Formulation,
    pub blowup: BlowupCriterion,
}

impl SolverConfig {
    pub const DEFAULT_CFL: f64 = 0.4;

    pub fn new(params: PhysicalParams, grid: RadialGrid, t_end: f64) -> Self {
        SolverConfig {
            params,
            grid,
            cfl_number: Self::DEFAULT_CFL,
            t_end,
            field_mode: FieldMode::Gauss,
            filter: Some(ExponentialFilter::default()),
            diagnostics_stride: 10,
            formulation: Formulation::Primal,
            blowup: BlowupCriterion::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.cfl_number > 0.0 && self.cfl_number <= 0.9) {
            return Err(Error::ParameterDomain {
                name: "cfl",
                value: self.cfl_number,
                reason: "must lie in (0, 0.9]",
            });
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::ParameterDomain {
                name: "t_end",
                value: self.t_end,
                reason: "must be positive",
            });
        }
        if self.diagnostics_stride == 0 {
            return Err(Error::ParameterDomain {
                name: "diagnostics_stride",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if self.field_mode == FieldMode::Gauss && self.formulation == Formulation::Normalized {
            return Err(Error::Data(
                "field_mode = gauss is only available for the primal formulation".into(),
            ));
        }
        Ok(())
    }
}
