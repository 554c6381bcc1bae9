//! Batch front door: system documents, generators and the diagnostic battery.

mod battery;
mod document;
mod generators;

pub use battery::{
    run_battery, run_battery_seeded, verdict_exit_code, GramSummary, ReportDocument, TOOL_NAME,
};
pub use document::{
    load_system, read_document, save_system, Pair, SystemDocument, ToleranceOverrides,
};
pub use generators::{
    commuting_positive_pair, gen_example24, gen_random_system, gen_riesz_spec, GenMode,
};
