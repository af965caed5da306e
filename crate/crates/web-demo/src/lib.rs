//! Browser bindings for the point-vortex engine. Three interactive
//! operations back the static demo page in `www/`:
//!
//! - [`encounter_svg`] / [`encounter_info`]: a two-vortex half-plane
//!   encounter at a chosen λ and W, rendered and classified;
//! - [`plane_svg`]: free plane systems (rotating pairs, dipoles, the
//!   self-similar triple);
//! - [`critical_curve_svg`] / [`critical_point_json`]: the algebraic
//!   bifurcation data as λ varies.
//!
//! Everything heavy lives in the core crate; this layer only builds runs,
//! serializes results, and reports errors as strings.

use wasm_bindgen::prelude::*;

use point_vortex::bifurcation::{
    classify_regime, critical_w, encounter_trajectory, stop_cross_ratio, stop_height_ratio,
};
use point_vortex::integrate::{integrate, EventKind, IntegratorConfig};
use point_vortex::io::{series_svg, trajectory_svg, PlotOptions};
use point_vortex::model::{Domain, Point, VortexState, VortexSystem};

fn js_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Browser-friendly tolerances: ~1e-8 accuracy at a fraction of the cost of
/// the CLI defaults.
fn demo_config() -> IntegratorConfig {
    IntegratorConfig {
        rel_tol: 1e-8,
        abs_tol: 1e-10,
        output_interval: 0.02,
        ..Default::default()
    }
}

/// SVG of the λ = ±1 encounter with interaction parameter `w`.
#[wasm_bindgen]
pub fn encounter_svg(lambda: f64, w: f64, width: f64) -> Result<String, String> {
    let traj = encounter_trajectory(lambda, w, &demo_config()).map_err(js_err)?;
    let opts = PlotOptions {
        width: width.clamp(200.0, 2000.0),
        ..Default::default()
    };
    trajectory_svg(&traj, &opts).map_err(js_err)
}

/// JSON summary of the same encounter: regime tag, evidence numbers, event
/// list, and the critical W for this λ.
#[wasm_bindgen]
pub fn encounter_info(lambda: f64, w: f64) -> Result<String, String> {
    let traj = encounter_trajectory(lambda, w, &demo_config()).map_err(js_err)?;
    let regime = classify_regime(&traj, lambda).map_err(js_err)?;
    let reference = critical_w(lambda).map_err(js_err)?;
    let events: Vec<serde_json::Value> = traj
        .events
        .iter()
        .map(|e| {
            serde_json::json!({
                "kind": e.kind.to_string(),
                "time": e.time,
                "xdot_1": e.diagnostics.get("xdot_i"),
            })
        })
        .collect();
    let stops = traj.events_of_kind(EventKind::InstantaneousStop).count();
    serde_json::to_string(&serde_json::json!({
        "lambda": lambda,
        "w": w,
        "w_critical": reference.critical_w,
        "regime": regime.tag.to_string(),
        "evidence": regime.evidence,
        "events": events,
        "stops": stops,
        "samples": traj.times.len(),
        "terminated_by": traj.terminated_by.to_string(),
    }))
    .map_err(js_err)
}

/// SVG of a plane system given flat `[x1, y1, x2, y2, ...]` positions.
#[wasm_bindgen]
pub fn plane_svg(
    strengths: &[f64],
    positions: &[f64],
    t_end: f64,
    width: f64,
) -> Result<String, String> {
    if positions.len() != 2 * strengths.len() {
        return Err(js_err("positions must hold an x,y pair per strength"));
    }
    if !(t_end > 0.0 && t_end <= 500.0) {
        return Err(js_err("t_end must lie in (0, 500]"));
    }
    let sys = VortexSystem::new(strengths.to_vec(), Domain::Plane).map_err(js_err)?;
    let state = VortexState::new(
        positions
            .chunks_exact(2)
            .map(|c| Point::new(c[0], c[1]))
            .collect(),
    );
    let mut cfg = demo_config();
    cfg.t_end = t_end;
    let traj = integrate(&sys, &state, &cfg).map_err(js_err)?;
    let opts = PlotOptions {
        width: width.clamp(200.0, 2000.0),
        ..Default::default()
    };
    trajectory_svg(&traj, &opts).map_err(js_err)
}

/// SVG of the critical curve W*(λ) on both branches of the strength ratio.
#[wasm_bindgen]
pub fn critical_curve_svg(lambda_span: f64, width: f64) -> Result<String, String> {
    let span = lambda_span.clamp(0.5, 10.0);
    let samples = 200usize;
    let mut branches: Vec<Vec<Point>> = vec![Vec::new(), Vec::new()];
    for k in 0..=samples {
        let magnitude = 0.05 + (span - 0.05) * k as f64 / samples as f64;
        for (b, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let lambda = sign * magnitude;
            if let Ok(result) = critical_w(lambda) {
                branches[b].push(Point::new(lambda, result.critical_w));
            }
        }
    }
    let opts = PlotOptions {
        width: width.clamp(200.0, 2000.0),
        show_events: false,
        ..Default::default()
    };
    series_svg(&branches, false, &[], &opts).map_err(js_err)
}

/// JSON with the algebraic stop data for one λ: W*, the stop height ratio,
/// and the cross-ratio of the stop configuration with its mirror images.
#[wasm_bindgen]
pub fn critical_point_json(lambda: f64) -> Result<String, String> {
    let result = critical_w(lambda).map_err(js_err)?;
    serde_json::to_string(&serde_json::json!({
        "lambda": lambda,
        "w_critical": result.critical_w,
        "stop_ratio": stop_height_ratio(lambda).map_err(js_err)?,
        "cross_ratio": stop_cross_ratio(lambda).map_err(js_err)?,
    }))
    .map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encounter_svg_renders() {
        let svg = encounter_svg(-1.0, 1.7, 800.0).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn encounter_info_reports_regime() {
        let info = encounter_info(-1.0, 1.4).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&info).unwrap();
        assert_eq!(parsed["regime"], "kink-or-leapfrog");
        assert!((parsed["w_critical"].as_f64().unwrap() - 1.618033988749895).abs() < 1e-9);
    }

    #[test]
    fn plane_svg_draws_three_vortices() {
        let svg = plane_svg(
            &[3.0, -2.0, 6.0],
            &[0.0, 0.0, 1.0, 0.0, -2.127469198, -2.642678869],
            10.0,
            800.0,
        )
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn curve_and_point_data() {
        let svg = critical_curve_svg(3.0, 700.0).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        let point: serde_json::Value =
            serde_json::from_str(&critical_point_json(-1.0).unwrap()).unwrap();
        assert!((point["cross_ratio"].as_f64().unwrap() - 1.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs_are_reported() {
        assert!(plane_svg(&[1.0], &[0.0], 10.0, 800.0).is_err());
        assert!(encounter_svg(-1.0, 0.5, 800.0).is_err());
    }
}
