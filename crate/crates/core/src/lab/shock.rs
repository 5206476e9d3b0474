use super::simulate::{initial_state, InitialState};
use crate::error::{Error, Result};
use crate::io::RunConfig;
use crate::kg::{fit_decay_exponent, DecayFit};
use crate::radial::{run, Diagnostics, FieldMode, Formulation, PrimalState, RunResult, RunStatus};

/// Growth of `max|∂ᵣu|` over its initial value that still counts as bounded.
pub const BOUNDED_GROWTH: f64 = 5.0;
/// Start of the fit window for the decay of `sup|n - n0|`.
pub const DECAY_FIT_START: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockVerdict {
    /// Field-off run tripped, field-on run completed.
    Contrast,
    /// The field-off run never tripped.
    Inconclusive,
    /// The field-on run tripped as well.
    FieldOnBlowup,
    /// A run produced non-finite values or reached vacuum.
    Instability,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub status: RunStatus,
    pub steps: usize,
    pub final_time: f64,
    pub initial_grad_u: f64,
    pub peak_grad_u: f64,
    pub message: Option<String>,
    pub diagnostics: Vec<Diagnostics>,
}

impl RunSummary {
    fn from_result(result: RunResult<PrimalState>) -> Self {
        RunSummary {
            status: result.status,
            steps: result.steps,
            final_time: result.final_state.time,
            initial_grad_u: result.initial_grad_u,
            peak_grad_u: result.peak_grad_u,
            message: result.message,
            diagnostics: result.diagnostics,
        }
    }

    /// `max|∂ᵣu|` never exceeded [`BOUNDED_GROWTH`] times its initial value.
    pub fn gradient_bounded(&self) -> bool {
        self.peak_grad_u <= BOUNDED_GROWTH * self.initial_grad_u
    }
}

#[derive(Debug, Clone)]
pub struct ShockDemoReport {
    pub field_off: RunSummary,
    pub field_on: RunSummary,
    /// Field on with the filter switched off.
    pub unfiltered: RunSummary,
    /// Power-law fit of `sup|n - n0|` of the field-on run over
    /// `[DECAY_FIT_START, t_end]`, when that window holds enough samples.
    pub decay: Option<DecayFit>,
    pub verdict: ShockVerdict,
}

impl ShockDemoReport {
    pub fn summary(&self) -> String {
        let line = |name: &str, s: &RunSummary| {
            format!(
                "{name}: status {} at t = {:.6}, steps {}, max|du/dr| initial {:.6e} peak {:.6e} ({:.3}x){}\n",
                s.status.as_str(),
                s.final_time,
                s.steps,
                s.initial_grad_u,
                s.peak_grad_u,
                s.peak_grad_u / s.initial_grad_u,
                s.message.as_ref().map_or(String::new(), |m| format!(", {m}"))
            )
        };
        let mut out = String::new();
        out.push_str(&line("field off", &self.field_off));
        out.push_str(&line("field on", &self.field_on));
        out.push_str(&line("field on, filter off", &self.unfiltered));
        out.push_str(&format!(
            "bounded gradient (<= {BOUNDED_GROWTH}x initial) with field on: {}\n",
            self.field_on.gradient_bounded()
        ));
        match &self.decay {
            Some(fit) => out.push_str(&format!(
                "sup|n-n0| decay exponent over [{}, {}]: {:.4} (rms {:.4}, {} samples)\n",
                fit.window.0, fit.window.1, fit.exponent, fit.residual, fit.samples
            )),
            None => out.push_str("sup|n-n0| decay exponent: not enough samples\n"),
        }
        out.push_str(&format!("verdict: {:?}\n", self.verdict));
        out
    }
}

/// Runs the same fluid data with the field off, with the field on, and
/// with the field on and the filter off.
pub fn shock_demo(config: &RunConfig) -> Result<ShockDemoReport> {
    let mut base = config.clone();
    base.solver.formulation = Formulation::Primal;
    if base.solver.field_mode == FieldMode::Off {
        base.solver.field_mode = FieldMode::Gauss;
    }
    let (InitialState::Primal(state), _) = initial_state(&base)? else {
        unreachable!("fluid formulation requested");
    };
    let n0 = base.solver.params.n0;
    let quiet = state.n.iter().all(|n| *n == n0) && state.u.iter().all(|u| *u == 0.0);
    if quiet {
        return Err(Error::Precondition(
            "the initial data are the equilibrium, nothing can steepen".into(),
        ));
    }

    let mut off = base.solver.clone();
    off.field_mode = FieldMode::Off;
    let mut off_state = state.clone();
    off_state.e = vec![0.0; off_state.e.len()];
    let field_off = RunSummary::from_result(run(&off, off_state)?);

    let field_on = RunSummary::from_result(run(&base.solver, state.clone())?);

    let mut raw = base.solver.clone();
    raw.filter = None;
    let unfiltered = RunSummary::from_result(run(&raw, state)?);

    let t_end = base.solver.t_end;
    let decay = if field_on.status == RunStatus::Completed && t_end > DECAY_FIT_START {
        let (times, sups): (Vec<f64>, Vec<f64>) = field_on
            .diagnostics
            .iter()
            .map(|d| (d.time, d.sup_density_pert))
            .unzip();
        fit_decay_exponent(&times, &sups, (DECAY_FIT_START, t_end)).ok()
    } else {
        None
    };

    let unstable = [&field_off, &field_on]
        .iter()
        .any(|s| matches!(s.status, RunStatus::NanDetected | RunStatus::Vacuum));
    let verdict = if unstable {
        ShockVerdict::Instability
    } else if field_off.status != RunStatus::BlowupDetected {
        ShockVerdict::Inconclusive
    } else if field_on.status != RunStatus::Completed {
        ShockVerdict::FieldOnBlowup
    } else {
        ShockVerdict::Contrast
    };
    Ok(ShockDemoReport {
        field_off,
        field_on,
        unfiltered,
        decay,
        verdict,
    })
}
