use super::primal::sup;
use super::{NormalizedSolver, NormalizedState, PrimalSolver, PrimalState, SolverConfig};
use crate::error::{Error, Result};

/// One row of the diagnostics time series, in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub time: f64,
    pub excess_mass: f64,
    pub energy: f64,
    pub sup_density_pert: f64,
    pub sup_velocity: f64,
    pub max_grad_u: f64,
    pub max_grad_n: f64,
    pub sup_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockMonitor {
    pub max_grad_u: f64,
    pub max_grad_n: f64,
}

/// Trips when `max|∂ᵣu|` exceeds `growth_factor` times its initial value,
/// or when the steepest velocity gradient is carried by a few cells:
/// `Δr max|∂ᵣu| > grid_scale U` with the acoustic amplitude
/// `U = max(sup|u|, c0 sup|n - n0| / n0)`. A smooth profile has
/// `Δr max|∂ᵣu| / U = O(Δr)`; a shock keeps it of order one on any grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupCriterion {
    pub growth_factor: f64,
    pub grid_scale: f64,
}

impl Default for BlowupCriterion {
    fn default() -> Self {
        BlowupCriterion {
            growth_factor: 50.0,
            grid_scale: 0.35,
        }
    }
}

impl BlowupCriterion {
    /// Trip level for the current acoustic amplitude.
    pub fn threshold(&self, initial: f64, amplitude: f64, dr: f64) -> f64 {
        (self.growth_factor * initial).min(self.grid_scale * amplitude / dr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowupDetected,
    NanDetected,
    Vacuum,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::BlowupDetected => "blowup_detected",
            RunStatus::NanDetected => "nan_detected",
            RunStatus::Vacuum => "vacuum",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<S> {
    pub status: RunStatus,
    pub diagnostics: Vec<Diagnostics>,
    pub final_state: S,
    pub steps: usize,
    /// `max|∂ᵣu|` of the initial data.
    pub initial_grad_u: f64,
    /// Trip level at the last state checked.
    pub blowup_threshold: f64,
    /// Largest `max|∂ᵣu|` seen over the run.
    pub peak_grad_u: f64,
    /// Step-by-step `max|∂ᵣu|`, one entry per accepted state.
    pub grad_u_history: Vec<(f64, f64)>,
    /// Diagnostic of the halt, if any.
    pub message: Option<String>,
}

/// Classical four-stage Runge-Kutta on a triple of profiles.
pub(crate) fn rk4(
    y: &[Vec<f64>; 3],
    dt: f64,
    f: impl Fn(&[Vec<f64>; 3]) -> Result<[Vec<f64>; 3]>,
) -> Result<[Vec<f64>; 3]> {
    let shifted = |k: &[Vec<f64>; 3], c: f64| -> [Vec<f64>; 3] {
        std::array::from_fn(|i| y[i].iter().zip(&k[i]).map(|(a, b)| a + c * b).collect())
    };
    let k1 = f(y)?;
    let k2 = f(&shifted(&k1, 0.5 * dt))?;
    let k3 = f(&shifted(&k2, 0.5 * dt))?;
    let k4 = f(&shifted(&k3, dt))?;
    let w = dt / 6.0;
    Ok(std::array::from_fn(|i| {
        (0..y[i].len())
            .map(|j| y[i][j] + w * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]))
            .collect()
    }))
}

trait Evolution {
    type State: Clone;
    fn clock(&self, s: &Self::State) -> f64;
    /// End time in the clock of the state.
    fn horizon(&self) -> f64;
    fn stable_dt(&self, s: &Self::State) -> f64;
    fn advance(&self, s: &Self::State, dt: f64) -> Result<Self::State>;
    fn record(&self, s: &Self::State) -> Diagnostics;
    /// `max|∂ᵣu|` and the acoustic amplitude, in physical units.
    fn velocity_scales(&self, s: &Self::State) -> (f64, f64);
    fn set_clock(&self, s: &mut Self::State, t: f64);
    fn physical_time(&self, s: &Self::State) -> f64;
}

impl Evolution for PrimalSolver {
    type State = PrimalState;
    fn clock(&self, s: &PrimalState) -> f64 {
        s.time
    }
    fn horizon(&self) -> f64 {
        self.config().t_end
    }
    fn stable_dt(&self, s: &PrimalState) -> f64 {
        self.cfl_dt(s)
    }
    fn advance(&self, s: &PrimalState, dt: f64) -> Result<PrimalState> {
        self.step(s, dt)
    }
    fn record(&self, s: &PrimalState) -> Diagnostics {
        self.diagnostics(s)
    }
    fn velocity_scales(&self, s: &PrimalState) -> (f64, f64) {
        let p = &self.config().params;
        let c0 = p.sound_speed(p.n0);
        let dn = s.n.iter().fold(0.0f64, |a, n| a.max((n - p.n0).abs()));
        (self.monitor(s).max_grad_u, sup(&s.u).max(c0 * dn / p.n0))
    }
    fn set_clock(&self, s: &mut PrimalState, t: f64) {
        s.time = t;
    }
    fn physical_time(&self, s: &PrimalState) -> f64 {
        s.time
    }
}

impl Evolution for NormalizedSolver {
    type State = NormalizedState;
    fn clock(&self, s: &NormalizedState) -> f64 {
        s.time
    }
    fn horizon(&self) -> f64 {
        self.config().t_end * self.constants().c0
    }
    fn stable_dt(&self, s: &NormalizedState) -> f64 {
        self.cfl_dt(s)
    }
    fn advance(&self, s: &NormalizedState, dt: f64) -> Result<NormalizedState> {
        self.step(s, dt)
    }
    fn record(&self, s: &NormalizedState) -> Diagnostics {
        self.diagnostics(s)
    }
    fn velocity_scales(&self, s: &NormalizedState) -> (f64, f64) {
        let d = self.diagnostics(s);
        let p = &self.config().params;
        let c0 = self.constants().c0;
        (d.max_grad_u, d.sup_velocity.max(c0 * d.sup_density_pert / p.n0))
    }
    fn set_clock(&self, s: &mut NormalizedState, t: f64) {
        s.time = t;
    }
    fn physical_time(&self, s: &NormalizedState) -> f64 {
        s.time / self.constants().c0
    }
}

fn integrate<E: Evolution>(
    solver: &E,
    initial: E::State,
    stride: usize,
    criterion: &BlowupCriterion,
    dr: f64,
) -> Result<RunResult<E::State>> {
    let horizon = solver.horizon();
    let (initial_grad_u, amplitude) = solver.velocity_scales(&initial);
    let mut threshold = criterion.threshold(initial_grad_u, amplitude, dr);
    let mut state = initial;
    let mut rows = vec![solver.record(&state)];
    let mut history = vec![(rows[0].time, initial_grad_u)];
    let mut peak = initial_grad_u;
    let mut steps = 0;
    let mut last_recorded = 0;
    let mut status = RunStatus::Completed;
    let mut message = None;
    while solver.clock(&state) < horizon {
        let t = solver.clock(&state);
        let dt = solver.stable_dt(&state);
        if !(dt.is_finite() && dt > 0.0) {
            status = RunStatus::NanDetected;
            message = Some(format!("no admissible time step at t = {t}"));
            break;
        }
        let last = t + dt >= horizon * (1.0 - 1e-14);
        let dt = if last { horizon - t } else { dt };
        match solver.advance(&state, dt) {
            Ok(mut next) => {
                if last {
                    solver.set_clock(&mut next, horizon);
                }
                state = next;
            }
            Err(Error::Instability { field, index }) => {
                status = RunStatus::NanDetected;
                message = Some(format!("non-finite `{field}` at cell {index}"));
                break;
            }
            Err(Error::Vacuum { index, detail }) => {
                status = RunStatus::Vacuum;
                message = Some(format!("cell {index}: {detail}"));
                break;
            }
            Err(other) => return Err(other),
        }
        steps += 1;
        let (grad, amplitude) = solver.velocity_scales(&state);
        threshold = criterion.threshold(initial_grad_u, amplitude, dr);
        peak = peak.max(grad);
        let row_needed = steps % stride == 0;
        let tripped = grad > threshold;
        if row_needed || tripped || solver.clock(&state) >= horizon {
            rows.push(solver.record(&state));
            last_recorded = steps;
        }
        history.push((solver.physical_time(&state), grad));
        if tripped {
            status = RunStatus::BlowupDetected;
            message = Some(format!(
                "max|du/dr| = {grad:.6e} exceeded {threshold:.6e}"
            ));
            break;
        }
    }
    if last_recorded != steps {
        rows.push(solver.record(&state));
    }
    Ok(RunResult {
        status,
        diagnostics: rows,
        final_state: state,
        steps,
        initial_grad_u,
        blowup_threshold: threshold,
        peak_grad_u: peak,
        grad_u_history: history,
        message,
    })
}

/// Integrates the fluid formulation to `t_end` or until the run halts.
pub fn run(config: &SolverConfig, initial: PrimalState) -> Result<RunResult<PrimalState>> {
    let solver = PrimalSolver::new(config)?;
    initial.validate(&config.grid, &config.params)?;
    integrate(
        &solver,
        initial,
        config.diagnostics_stride,
        &config.blowup,
        config.grid.dr(),
    )
}

/// Integrates the rescaled formulation; `t_end` is a physical time and
/// the state clock runs in `τ = c0 t`.
pub fn run_normalized(
    config: &SolverConfig,
    initial: NormalizedState,
) -> Result<RunResult<NormalizedState>> {
    let solver = NormalizedSolver::new(config)?;
    initial.validate(&config.grid, &config.params)?;
    integrate(
        &solver,
        initial,
        config.diagnostics_stride,
        &config.blowup,
        config.grid.dr(),
    )
}
