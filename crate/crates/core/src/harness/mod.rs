//! Declarative experiment harness: config loading, scheme + certificate
//! execution, CSV/JSON/SVG artifacts, presets, and the acceptance suite.

pub mod config;
pub mod plot;
pub mod presets;
pub mod report;
pub mod run;
pub mod series;
pub mod suite;

pub use config::{load_config, ExperimentConfig};
pub use plot::{render_plot, PlotOptions};
pub use run::{run_experiment, RunArtifacts};
pub use series::Series;
pub use suite::{run_suite, Suite, SuiteSummary};
