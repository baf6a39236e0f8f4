//! Configuration files, attractiveness data and result artifacts.

mod config;
mod data;
mod output;

pub use config::{emit_config, load_config, parse_config, LoadedConfig, OutputSettings, OUTPUT_ENV_VAR};
pub use data::{generate_synthetic_alphas, load_attractiveness, parse_attractiveness};
pub use output::{
    emit_results, format_sig6, render_aggregate_csv, render_run_csv, render_summary, EmitOptions,
    AGGREGATE_HEADER, RUN_HEADER,
};
