//! Experiment drivers shared by the command-line tool and the test suites.

mod cross;
mod decay;
mod lemmas;
mod shock;
mod simulate;

pub use cross::{cross_check, CrossCheckReport, CrossSample, CROSS_TOLERANCE};
pub use decay::{run_kg_decay, KgDecayConfig, KgDecayReport};
pub use lemmas::{
    default_lemma_cases, parse_lemma_cases, run_lemma_suite, CaseKind, CaseOutcome, LemmaCase,
    TestField,
};
pub use shock::{shock_demo, RunSummary, ShockDemoReport, ShockVerdict, BOUNDED_GROWTH, DECAY_FIT_START};
pub use simulate::{initial_state, simulate, InitialState, SimulationReport};
