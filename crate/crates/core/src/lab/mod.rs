//! Experiment documents, the checks run over an approximation series and
//! the files a run leaves behind.

pub mod config;
pub mod report;
pub mod run;

pub use config::{load, Caps, Check, Experiment, ExperimentConfig, Overrides, ENV_MAX_BALL, ENV_MAX_POINTS, ENV_MAX_TERMS};
pub use report::{persist, read_run, results_csv, summary_text, RunReport, RESULTS_FILE, RESULT_COLUMNS, SUMMARY_FILE};
pub use run::{abelian_limit, run, run_convergence, run_modp_sweep, run_twisted_check, RunRecord, RunRow, Verdict};
