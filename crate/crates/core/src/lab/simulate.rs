use crate::error::Result;
use crate::io::{
    load_snapshot, write_manifest, write_snapshot, write_timeseries, InitialData, OutputDir,
    RunConfig, Snapshot,
};
use crate::params::derive_constants;
use crate::radial::{
    run, run_normalized, Diagnostics, Formulation, NormalizedState, PrimalState, RunStatus,
};

#[derive(Debug, Clone)]
pub enum InitialState {
    Primal(PrimalState),
    Normalized(NormalizedState),
}

/// Builds the initial state of `config` in its formulation. The second
/// value is the weight of the neutralizing annulus, if one was added.
pub fn initial_state(config: &RunConfig) -> Result<(InitialState, Option<f64>)> {
    let solver = &config.solver;
    let (grid, params) = (&solver.grid, &solver.params);
    match &config.initial {
        InitialData::Snapshot(path) => {
            let snapshot = load_snapshot(path, grid, params)?;
            let state = match solver.formulation {
                Formulation::Primal => InitialState::Primal(snapshot.into_primal(path)?),
                Formulation::Normalized => {
                    InitialState::Normalized(snapshot.into_normalized(path)?)
                }
            };
            Ok((state, None))
        }
        InitialData::Profile(profile) => {
            let resolved = profile.resolve(grid, params)?;
            let beta = (profile.neutralize && profile.amplitude != 0.0).then_some(resolved.beta);
            let state = match solver.formulation {
                Formulation::Primal => InitialState::Primal(resolved.primal_state(
                    grid,
                    params,
                    solver.field_mode,
                )?),
                Formulation::Normalized => {
                    let consts = derive_constants(params)?;
                    InitialState::Normalized(resolved.normalized_state(grid, params, &consts)?)
                }
            };
            Ok((state, beta))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub status: RunStatus,
    pub steps: usize,
    pub diagnostics: Vec<Diagnostics>,
    pub message: Option<String>,
    pub neutralizing_weight: Option<f64>,
}

/// Runs `config` and writes the diagnostics series, the initial and final
/// snapshots and the manifest into `out`.
pub fn simulate(config: &RunConfig, out: &OutputDir) -> Result<SimulationReport> {
    let solver = &config.solver;
    let (grid, params) = (&solver.grid, &solver.params);
    let (initial, beta) = initial_state(config)?;
    let (status, steps, rows, message, first, last) = match initial {
        InitialState::Primal(state) => {
            let first = Snapshot::from_primal(&state, grid, params);
            let result = run(solver, state)?;
            let last = Snapshot::from_primal(&result.final_state, grid, params);
            (result.status, result.steps, result.diagnostics, result.message, first, last)
        }
        InitialState::Normalized(state) => {
            let first = Snapshot::from_normalized(&state, grid, params);
            let result = run_normalized(solver, state)?;
            let last = Snapshot::from_normalized(&result.final_state, grid, params);
            (result.status, result.steps, result.diagnostics, result.message, first, last)
        }
    };
    write_timeseries(&out.diagnostics(), &rows)?;
    let physical = |s: &Snapshot| -> Result<f64> {
        Ok(match s.formulation {
            Formulation::Primal => s.time,
            Formulation::Normalized => s.time / derive_constants(params)?.c0,
        })
    };
    write_snapshot(&out.snapshot(physical(&first)?), &first)?;
    write_snapshot(&out.snapshot(physical(&last)?), &last)?;

    let mut outcome = vec![
        ("status", status.as_str().to_string()),
        ("steps", steps.to_string()),
        ("final_time", format!("{:?}", rows.last().map_or(0.0, |d| d.time))),
    ];
    if let Some(beta) = beta {
        outcome.push(("neutralizing_weight", format!("{beta:?}")));
    }
    if let Some(message) = &message {
        outcome.push(("message", message.clone()));
    }
    write_manifest(&out.manifest(), config, &outcome)?;
    Ok(SimulationReport {
        status,
        steps,
        diagnostics: rows,
        message,
        neutralizing_weight: beta,
    })
}
