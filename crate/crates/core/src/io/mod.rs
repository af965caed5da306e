//! Serialization of runs: trajectory CSV, JSON manifests, and SVG plots.

pub mod csv;
pub mod manifest;
pub mod svg;

pub use csv::{
    parse_trajectory_csv, read_trajectory_csv, trajectory_csv, write_trajectory_csv, CsvEvent,
    LoadedCsv,
};
pub use manifest::{
    manifest_json, parse_config, read_config, write_manifest_json, EventSummary, RunManifest,
};
pub use svg::{plot_svg, series_svg, trajectory_svg, Marker, PlotOptions};
