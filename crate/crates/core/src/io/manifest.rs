//! Run manifests: a single JSON document that fully reconstructs a run's
//! inputs (system, initial state, integrator configuration) plus a summary
//! of what happened. `simulate --config <manifest>` replays it bit-for-bit.
//!
//! The schema is strict: unknown fields are rejected so that a misspelled
//! tolerance cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::VortexError;
use crate::integrate::{Event, EventKind, IntegratorConfig, Termination, Trajectory};
use crate::model::{VortexState, VortexSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSummary {
    pub kind: EventKind,
    pub time: f64,
    pub i: usize,
    pub j: usize,
}

impl From<&Event> for EventSummary {
    fn from(e: &Event) -> Self {
        EventSummary {
            kind: e.kind,
            time: e.time,
            i: e.vortex_indices.0,
            j: e.vortex_indices.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub system: VortexSystem,
    pub initial: VortexState,
    pub config: IntegratorConfig,
    #[serde(default)]
    pub invariant_drift: BTreeMap<String, f64>,
    #[serde(default)]
    pub events: Vec<EventSummary>,
    #[serde(default)]
    pub terminated_by: Option<Termination>,
    #[serde(default)]
    pub wall_time_s: Option<f64>,
}

impl RunManifest {
    pub fn from_run(
        command: String,
        initial: &VortexState,
        cfg: &IntegratorConfig,
        traj: &Trajectory,
        wall_time_s: f64,
    ) -> Self {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            system: traj.system.clone(),
            initial: initial.clone(),
            config: cfg.clone(),
            invariant_drift: traj.invariant_drift.clone(),
            events: traj.events.iter().map(EventSummary::from).collect(),
            terminated_by: Some(traj.terminated_by),
            wall_time_s: Some(wall_time_s),
        }
    }

    /// The replayable inputs.
    pub fn run_inputs(&self) -> (VortexSystem, VortexState, IntegratorConfig) {
        (
            self.system.clone(),
            self.initial.clone(),
            self.config.clone(),
        )
    }
}

pub fn manifest_json(manifest: &RunManifest) -> String {
    let mut doc = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    doc.push('\n');
    doc
}

pub fn write_manifest_json(manifest: &RunManifest, path: &Path) -> Result<(), VortexError> {
    let mut file = std::fs::File::create(path).map_err(|e| VortexError::io(path, e))?;
    file.write_all(manifest_json(manifest).as_bytes())
        .map_err(|e| VortexError::io(path, e))
}

/// Reads run inputs from a manifest-shaped JSON document. Summary fields are
/// optional so a hand-written inputs-only config is accepted; anything
/// unrecognized is an error.
pub fn read_config(path: &Path) -> Result<RunManifest, VortexError> {
    let text = std::fs::read_to_string(path).map_err(|e| VortexError::io(path, e))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunManifest, VortexError> {
    let manifest: RunManifest =
        serde_json::from_str(text).map_err(|e| VortexError::Config(e.to_string()))?;
    manifest
        .system
        .check_state(&manifest.initial)
        .map_err(|e| {
            VortexError::Config(format!(
                "initial state invalid for the declared system: {e}"
            ))
        })?;
    manifest
        .config
        .validate()
        .map_err(|e| VortexError::Config(e.to_string()))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate;
    use crate::model::Domain;

    fn sample_manifest() -> RunManifest {
        let sys = VortexSystem::new(vec![1.0, -1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(-0.4, 0.6), (0.4, 1.1)]);
        let mut cfg = IntegratorConfig::with_t_end(1.0);
        cfg.output_interval = 0.25;
        let traj = integrate(&sys, &state, &cfg).unwrap();
        RunManifest::from_run("vortex simulate ...".to_string(), &state, &cfg, &traj, 0.01)
    }

    #[test]
    fn manifest_round_trips() {
        let manifest = sample_manifest();
        let parsed = parse_config(&manifest_json(&manifest)).unwrap();
        assert_eq!(parsed, manifest);
        let (sys, state, cfg) = parsed.run_inputs();
        assert_eq!(sys, manifest.system);
        assert_eq!(state, manifest.initial);
        assert_eq!(cfg, manifest.config);
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_config(
            r#"{"version":"0","command":"x","system":{"domain":"plane"},
                "initial":{"positions":[]},"config":{}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("strengths"), "{err}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let manifest = sample_manifest();
        let doc = manifest_json(&manifest).replace("\"wall_time_s\"", "\"wall_time_sec\"");
        let err = parse_config(&doc).unwrap_err();
        assert!(err.to_string().contains("wall_time_sec"), "{err}");
    }

    #[test]
    fn config_typo_in_tolerance_is_rejected() {
        let manifest = sample_manifest();
        let doc = manifest_json(&manifest).replace("\"rel_tol\"", "\"rel_tolerance\"");
        assert!(parse_config(&doc).is_err());
    }

    #[test]
    fn inputs_only_config_is_accepted() {
        let doc = r#"{
            "version": "0.1.0",
            "command": "hand-written",
            "system": {"strengths": [1.0], "domain": "half-plane"},
            "initial": {"positions": [{"x": 0.0, "y": 1.0}]},
            "config": {"t_end": 2.0}
        }"#;
        let manifest = parse_config(doc).unwrap();
        assert_eq!(manifest.config.t_end, 2.0);
        assert_eq!(manifest.config.rel_tol, IntegratorConfig::default().rel_tol);
        assert!(manifest.events.is_empty());
    }
}
