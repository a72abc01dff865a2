//! Configuration-driven experiments: TOML configuration, weather/distance
//! sweeps and CSV output.

mod config;
mod table;
mod sweep;

pub use table::{emit_csv, parse_csv, to_csv_string, write_csv, HEADER};
pub use config::{ExperimentConfig, WeatherPoint};
pub use sweep::{run_sweep, run_sweep_detailed, SweepOutcome, SweepRow};
