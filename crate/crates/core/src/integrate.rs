//! Adaptive time integration of the vortex ODE with invariant-drift
//! monitoring and event detection.
//!
//! The default stepper is an embedded Dormand–Prince 5(4) pair with standard
//! proportional step control. Symplecticity is not enforced; conservation is
//! monitored through the recorded drift instead. A fixed-step classical
//! Runge–Kutta integrator is kept alongside for cross-checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{hamiltonian_raw, invariants_raw, velocity_raw};
use crate::error::VortexError;
use crate::model::{Point, VortexState, VortexSystem};

/// Step-size floor relative to the current time scale; going below it ends
/// the run with [`Termination::StepFailure`].
const STEP_FLOOR: f64 = 1e-14;

/// Tolerances and run controls for [`integrate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub t_end: f64,
    pub output_interval: f64,
    /// Minimum allowed pairwise distance and, in the half-plane, distance to
    /// the boundary. Crossing it terminates the run instead of erroring:
    /// close passes are legitimate in the kink regime.
    pub collision_guard: f64,
    /// Time-localization tolerance for refined events.
    pub event_refine_tol: f64,
    /// Horizontal-speed threshold below which a vertical alignment is also
    /// recorded as an instantaneous stop.
    pub stop_speed_threshold: f64,
    /// Vortex pairs watched for vertical alignment. `None` selects the
    /// default: the single pair (0, 1) when the system has two vortices.
    pub watch_pairs: Option<Vec<(usize, usize)>>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1.0,
            t_end: 10.0,
            output_interval: 0.01,
            collision_guard: 1e-6,
            event_refine_tol: 1e-10,
            stop_speed_threshold: 1e-6,
            watch_pairs: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_end(t_end: f64) -> Self {
        IntegratorConfig {
            t_end,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), VortexError> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("t_end", self.t_end),
            ("output_interval", self.output_interval),
            ("collision_guard", self.collision_guard),
            ("event_refine_tol", self.event_refine_tol),
            ("stop_speed_threshold", self.stop_speed_threshold),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(VortexError::InvalidArgument(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    fn resolved_watch_pairs(&self, n: usize) -> Result<Vec<(usize, usize)>, VortexError> {
        let pairs = match &self.watch_pairs {
            Some(list) => list.clone(),
            None if n == 2 => vec![(0, 1)],
            None => vec![],
        };
        for &(i, j) in &pairs {
            if i == j || i >= n || j >= n {
                return Err(VortexError::InvalidArgument(format!(
                    "watch pair ({i}, {j}) invalid for {n} vortices"
                )));
            }
        }
        Ok(pairs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    VerticalAlignment,
    InstantaneousStop,
    NearCollision,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EventKind::VerticalAlignment => write!(f, "vertical-alignment"),
            EventKind::InstantaneousStop => write!(f, "instantaneous-stop"),
            EventKind::NearCollision => write!(f, "near-collision"),
        }
    }
}

/// A typed occurrence on a trajectory, localized in time to
/// [`IntegratorConfig::event_refine_tol`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub time: f64,
    pub state: VortexState,
    pub vortex_indices: (usize, usize),
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    TimeEnd,
    NearCollision,
    StepFailure,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::TimeEnd => write!(f, "time-end"),
            Termination::NearCollision => write!(f, "near-collision"),
            Termination::StepFailure => write!(f, "step-failure"),
        }
    }
}

/// Time-ordered samples of a run plus detected events and drift records.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub system: VortexSystem,
    pub times: Vec<f64>,
    pub states: Vec<VortexState>,
    pub events: Vec<Event>,
    /// Max absolute deviation of each invariant from its initial value.
    pub invariant_drift: BTreeMap<String, f64>,
    /// Invariant values at t = 0.
    pub initial_invariants: BTreeMap<String, f64>,
    pub terminated_by: Termination,
}

impl Trajectory {
    pub fn final_state(&self) -> &VortexState {
        self.states
            .last()
            .expect("trajectory has at least the initial sample")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory has at least the initial sample")
    }

    pub fn events_of_kind(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }
}

/// Max relative drift of every conserved quantity over the recorded samples:
/// `|v - v₀| / max(1, |v₀|)`.
pub fn conservation_report(traj: &Trajectory) -> BTreeMap<String, f64> {
    traj.invariant_drift
        .iter()
        .map(|(name, drift)| {
            let v0 = traj.initial_invariants.get(name).copied().unwrap_or(0.0);
            (name.clone(), drift / v0.abs().max(1.0))
        })
        .collect()
}

// Dormand–Prince 5(4) tableau. The vortex field is autonomous, so the stage
// time nodes are not needed.
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// b5 - b4: coefficients of the embedded error estimate.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a> {
    sys: &'a VortexSystem,
    k: [Vec<Point>; 7],
    scratch: Vec<Point>,
}

impl<'a> Stepper<'a> {
    fn new(sys: &'a VortexSystem) -> Self {
        let zero = vec![Point::new(0.0, 0.0); sys.len()];
        Stepper {
            sys,
            k: [
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
            ],
            scratch: zero,
        }
    }

    /// One trial step of size `h` from `pos`. Writes the 5th-order result
    /// into `out` and returns the scaled error norm.
    #[allow(clippy::needless_range_loop)]
    fn try_step(&mut self, pos: &[Point], h: f64, rel: f64, abs: f64, out: &mut Vec<Point>) -> f64 {
        let n = pos.len();
        for stage in 0..7 {
            for i in 0..n {
                let mut p = pos[i];
                for (j, kj) in self.k.iter().enumerate().take(stage) {
                    let a = DP_A[stage][j];
                    if a != 0.0 {
                        p = p + kj[i] * (a * h);
                    }
                }
                self.scratch[i] = p;
            }
            let (head, tail) = self.k.split_at_mut(stage);
            let _ = head;
            velocity_raw(self.sys, &self.scratch, &mut tail[0]);
        }

        out.clear();
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut acc = pos[i];
            let mut err = Point::new(0.0, 0.0);
            for (j, kj) in self.k.iter().enumerate() {
                if DP_B5[j] != 0.0 {
                    acc = acc + kj[i] * (DP_B5[j] * h);
                }
                err = err + kj[i] * (DP_E[j] * h);
            }
            out.push(acc);
            let sx = abs + rel * pos[i].x.abs().max(acc.x.abs());
            let sy = abs + rel * pos[i].y.abs().max(acc.y.abs());
            err_sq += (err.x / sx) * (err.x / sx) + (err.y / sy) * (err.y / sy);
        }
        (err_sq / (2.0 * n as f64)).sqrt()
    }
}

/// Integrates from `pos` over `span` with no events or output, landing
/// exactly on the end time. Used for event refinement.
fn integrate_span(
    sys: &VortexSystem,
    pos: &[Point],
    span: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<Point>, VortexError> {
    let mut stepper = Stepper::new(sys);
    let mut y = pos.to_vec();
    let mut out = Vec::with_capacity(pos.len());
    let mut t = 0.0;
    let mut h = span.min(cfg.max_step);
    while t < span {
        let clipped = h.min(span - t);
        let err = stepper.try_step(&y, clipped, cfg.rel_tol, cfg.abs_tol, &mut out);
        if err <= 1.0 {
            t += clipped;
            std::mem::swap(&mut y, &mut out);
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (clipped * grow).min(cfg.max_step);
        } else {
            let shrink = if err.is_nan() {
                0.1
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            };
            h = clipped * shrink;
        }
        if h < STEP_FLOOR * t.abs().max(1.0) {
            return Err(VortexError::IntegrationFailure(format!(
                "step size underflow at t = {t} during event refinement"
            )));
        }
    }
    Ok(y)
}

struct DriftTracker {
    initial: BTreeMap<String, f64>,
    drift: BTreeMap<String, f64>,
}

impl DriftTracker {
    fn new(sys: &VortexSystem, pos: &[Point]) -> Self {
        let h = hamiltonian_raw(sys, pos);
        let initial: BTreeMap<String, f64> = invariants_raw(sys, pos, h)
            .named()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let drift = initial.keys().map(|k| (k.clone(), 0.0)).collect();
        DriftTracker { initial, drift }
    }

    fn observe(&mut self, sys: &VortexSystem, pos: &[Point]) {
        let h = hamiltonian_raw(sys, pos);
        for (name, value) in invariants_raw(sys, pos, h).named() {
            let dev = (value - self.initial[name]).abs();
            let entry = self.drift.get_mut(name).expect("invariant set is fixed");
            if dev > *entry {
                *entry = dev;
            }
        }
    }
}

/// Integrates the vortex ODE, sampling on the output grid, refining vertical
/// alignments of watched pairs, and guarding against near-collisions.
///
/// Near-collision and step-failure terminations are reported through
/// [`Trajectory::terminated_by`], not as errors.
pub fn integrate(
    sys: &VortexSystem,
    initial: &VortexState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, VortexError> {
    cfg.validate()?;
    sys.check_state(initial)?;
    let watch = cfg.resolved_watch_pairs(sys.len())?;

    let mut stepper = Stepper::new(sys);
    let mut tracker = DriftTracker::new(sys, &initial.positions);

    let mut times = vec![0.0];
    let mut states = vec![initial.clone()];
    let mut events: Vec<Event> = Vec::new();

    let mut t = 0.0;
    let mut pos = initial.positions.clone();
    let mut trial = Vec::with_capacity(pos.len());
    let mut h_prop = cfg.max_step.min(cfg.output_interval).min(cfg.t_end);
    let mut out_index: u64 = 1;
    let mut termination = Termination::TimeEnd;

    // exact zeros of x_i - x_j at a step boundary count as alignments too
    for &(i, j) in &watch {
        if pos[i].x == pos[j].x {
            record_alignment(sys, cfg, &mut events, 0.0, &pos, (i, j));
        }
    }

    'main: while t < cfg.t_end {
        let next_out = (out_index as f64) * cfg.output_interval;
        let t_target = next_out.min(cfg.t_end);
        let h_eff = h_prop.min(t_target - t);

        let err = stepper.try_step(&pos, h_eff, cfg.rel_tol, cfg.abs_tol, &mut trial);
        if !(err <= 1.0) {
            let shrink = if err.is_nan() {
                0.1
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            };
            h_prop = h_eff * shrink;
            if h_prop < STEP_FLOOR * t.abs().max(1.0) {
                termination = Termination::StepFailure;
                break 'main;
            }
            continue;
        }

        let t_new = if h_eff < h_prop { t_target } else { t + h_eff };

        // guard before recording anything derived from the new state
        let sep = VortexState::new(trial.clone()).min_separation(sys.domain);
        if !(sep > cfg.collision_guard) {
            let mut diagnostics = BTreeMap::new();
            diagnostics.insert("min_separation".to_string(), sep);
            events.push(Event {
                kind: EventKind::NearCollision,
                time: t_new,
                state: VortexState::new(trial.clone()),
                vortex_indices: closest_pair(&trial),
                diagnostics,
            });
            termination = Termination::NearCollision;
            break 'main;
        }

        for &(i, j) in &watch {
            let f_prev = pos[i].x - pos[j].x;
            let f_new = trial[i].x - trial[j].x;
            if f_prev * f_new < 0.0 {
                refine_alignment(sys, cfg, &mut events, t, &pos, t_new, (i, j))?;
            } else if f_new == 0.0 {
                record_alignment(sys, cfg, &mut events, t_new, &trial, (i, j));
            }
        }

        std::mem::swap(&mut pos, &mut trial);
        t = t_new;

        let grow = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        let h_next = (h_eff * grow).min(cfg.max_step);
        // keep the controller's larger proposal when the step was clipped to
        // land on the output grid
        h_prop = if h_eff < h_prop {
            h_prop.max(h_next)
        } else {
            h_next
        };

        if t >= next_out && next_out <= cfg.t_end {
            out_index += 1;
        }
        if t >= next_out || t >= cfg.t_end {
            tracker.observe(sys, &pos);
            times.push(t);
            states.push(VortexState::new(pos.clone()));
        }
    }

    if termination != Termination::TimeEnd {
        // keep the last good state so the truncation point is visible
        if let Some(&last) = times.last() {
            if t > last {
                tracker.observe(sys, &pos);
                times.push(t);
                states.push(VortexState::new(pos.clone()));
            }
        }
    }

    Ok(Trajectory {
        system: sys.clone(),
        times,
        states,
        events,
        invariant_drift: tracker.drift,
        initial_invariants: tracker.initial,
        terminated_by: termination,
    })
}

fn closest_pair(pos: &[Point]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut min = f64::INFINITY;
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            let d = pos[i].distance(pos[j]);
            if d < min {
                min = d;
                best = (i, j);
            }
        }
    }
    best
}

fn alignment_diagnostics(
    sys: &VortexSystem,
    pos: &[Point],
    (i, j): (usize, usize),
) -> BTreeMap<String, f64> {
    let mut v = vec![Point::new(0.0, 0.0); pos.len()];
    velocity_raw(sys, pos, &mut v);
    let mut d = BTreeMap::new();
    d.insert("xdot_i".to_string(), v[i].x);
    d.insert("xdot_j".to_string(), v[j].x);
    d.insert("ydot_i".to_string(), v[i].y);
    d.insert("ydot_j".to_string(), v[j].y);
    d.insert("y_i".to_string(), pos[i].y);
    d.insert("y_j".to_string(), pos[j].y);
    d.insert("alignment_gap".to_string(), (pos[i].x - pos[j].x).abs());
    d
}

fn record_alignment(
    sys: &VortexSystem,
    cfg: &IntegratorConfig,
    events: &mut Vec<Event>,
    time: f64,
    pos: &[Point],
    pair: (usize, usize),
) {
    let diagnostics = alignment_diagnostics(sys, pos, pair);
    let state = VortexState::new(pos.to_vec());
    let stop = stop_vortex(&diagnostics, pair, cfg.stop_speed_threshold);
    events.push(Event {
        kind: EventKind::VerticalAlignment,
        time,
        state: state.clone(),
        vortex_indices: pair,
        diagnostics: diagnostics.clone(),
    });
    if let Some(index) = stop {
        let mut d = diagnostics;
        d.insert("stop_vortex".to_string(), index as f64);
        events.push(Event {
            kind: EventKind::InstantaneousStop,
            time,
            state,
            vortex_indices: pair,
            diagnostics: d,
        });
    }
}

fn stop_vortex(
    diagnostics: &BTreeMap<String, f64>,
    (i, j): (usize, usize),
    threshold: f64,
) -> Option<usize> {
    // at an alignment ẏ vanishes, so |ẋ| below threshold means a full stop
    let (xi, xj) = (diagnostics["xdot_i"].abs(), diagnostics["xdot_j"].abs());
    if xi < threshold || xj < threshold {
        Some(if xi <= xj { i } else { j })
    } else {
        None
    }
}

/// Bisects the bracketing step down to `event_refine_tol` in time,
/// re-evaluating by sub-integration from the step start.
fn refine_alignment(
    sys: &VortexSystem,
    cfg: &IntegratorConfig,
    events: &mut Vec<Event>,
    t0: f64,
    pos0: &[Point],
    t1: f64,
    (i, j): (usize, usize),
) -> Result<(), VortexError> {
    let f0 = pos0[i].x - pos0[j].x;
    let mut lo = 0.0;
    let mut hi = t1 - t0;
    let mut f_lo = f0;
    for _ in 0..200 {
        if hi - lo <= cfg.event_refine_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let state = integrate_span(sys, pos0, mid, cfg)?;
        let f_mid = state[i].x - state[j].x;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let te = 0.5 * (lo + hi);
    let state = integrate_span(sys, pos0, te, cfg)?;
    record_alignment(sys, cfg, events, t0 + te, &state, (i, j));
    Ok(())
}

/// Fixed-step classical 4th-order Runge–Kutta integration; retained as an
/// independent cross-check on the adaptive path.
pub fn integrate_rk4_fixed(
    sys: &VortexSystem,
    initial: &VortexState,
    dt: f64,
    t_end: f64,
) -> Result<Vec<(f64, VortexState)>, VortexError> {
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(VortexError::InvalidArgument(
            "dt and t_end must be positive".to_string(),
        ));
    }
    sys.check_state(initial)?;
    let n = sys.len();
    let steps = (t_end / dt).ceil() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut pos = initial.positions.clone();
    out.push((0.0, initial.clone()));
    let mut k1 = vec![Point::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for s in 0..steps {
        let h = dt.min(t_end - s as f64 * dt);
        velocity_raw(sys, &pos, &mut k1);
        for i in 0..n {
            tmp[i] = pos[i] + k1[i] * (0.5 * h);
        }
        velocity_raw(sys, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = pos[i] + k2[i] * (0.5 * h);
        }
        velocity_raw(sys, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = pos[i] + k3[i] * h;
        }
        velocity_raw(sys, &tmp, &mut k4);
        for i in 0..n {
            pos[i] = pos[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        out.push(((s + 1) as f64 * dt, VortexState::new(pos.clone())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Domain;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pair_rotation_setup() -> (VortexSystem, VortexState) {
        (
            VortexSystem::new(vec![1.0, 1.0], Domain::Plane).unwrap(),
            VortexState::from_pairs(&[(0.5, 0.0), (-0.5, 0.0)]),
        )
    }

    #[test]
    fn pair_returns_after_one_period() {
        let (sys, state) = pair_rotation_setup();
        let cfg = IntegratorConfig::with_t_end(2.0 * PI * PI);
        let traj = integrate(&sys, &state, &cfg).unwrap();
        assert_eq!(traj.terminated_by, Termination::TimeEnd);
        for (a, b) in traj.final_state().positions.iter().zip(&state.positions) {
            assert!((a.x - b.x).abs() < 1e-6 && (a.y - b.y).abs() < 1e-6);
        }
    }

    #[test]
    fn halfplane_drift_reaches_unit_distance() {
        let sys = VortexSystem::new(vec![1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 1.0)]);
        let cfg = IntegratorConfig::with_t_end(4.0 * PI);
        let traj = integrate(&sys, &state, &cfg).unwrap();
        let end = traj.final_state().positions[0];
        assert!((end.x - 1.0).abs() < 1e-8, "x = {}", end.x);
        assert!((end.y - 1.0).abs() < 1e-8);
    }

    #[test]
    fn resting_vortex_has_zero_drift() {
        let sys = VortexSystem::new(vec![1.0], Domain::Plane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 0.0)]);
        let cfg = IntegratorConfig::with_t_end(10.0);
        let traj = integrate(&sys, &state, &cfg).unwrap();
        for (_, drift) in conservation_report(&traj) {
            assert!(drift < 1e-14);
        }
        let end = traj.final_state().positions[0];
        assert_eq!((end.x, end.y), (0.0, 0.0));
    }

    #[test]
    fn plane_invariants_conserved_over_long_run() {
        let (sys, state) = pair_rotation_setup();
        let cfg = IntegratorConfig::with_t_end(100.0);
        let traj = integrate(&sys, &state, &cfg).unwrap();
        let report = conservation_report(&traj);
        for name in ["H", "P", "Q", "I"] {
            assert!(report[name] < 1e-8, "{name} drift = {}", report[name]);
        }
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let sys = VortexSystem::new(vec![1.5, -0.7, 0.9], Domain::Plane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 0.0), (1.2, 0.3), (-0.4, 0.9)]);
        let cfg = IntegratorConfig::with_t_end(8.0);
        let fwd = integrate(&sys, &state, &cfg).unwrap();
        let back = integrate(&sys.reversed(), fwd.final_state(), &cfg).unwrap();
        for (a, b) in back.final_state().positions.iter().zip(&state.positions) {
            assert!((a.x - b.x).abs() < 1e-6 && (a.y - b.y).abs() < 1e-6);
        }
    }

    #[test]
    fn near_collision_terminates_without_error() {
        // an artificial floor high enough that the rotating pair trips it
        let (sys, state) = pair_rotation_setup();
        let mut cfg = IntegratorConfig::with_t_end(5.0);
        cfg.collision_guard = 1.5;
        let traj = integrate(&sys, &state, &cfg).unwrap();
        assert_eq!(traj.terminated_by, Termination::NearCollision);
        assert!(traj.events_of_kind(EventKind::NearCollision).count() == 1);
    }

    #[test]
    fn rk4_cross_check_matches_adaptive_path() {
        let (sys, state) = pair_rotation_setup();
        let cfg = IntegratorConfig::with_t_end(5.0);
        let traj = integrate(&sys, &state, &cfg).unwrap();
        let fixed = integrate_rk4_fixed(&sys, &state, 1e-3, 5.0).unwrap();
        let (_, rk4_end) = fixed.last().unwrap();
        for (a, b) in traj.final_state().positions.iter().zip(&rk4_end.positions) {
            assert_relative_eq!(a.x, b.x, epsilon = 1e-8);
            assert_relative_eq!(a.y, b.y, epsilon = 1e-8);
        }
    }

    #[test]
    fn rejects_invalid_config() {
        let (sys, state) = pair_rotation_setup();
        let cfg = IntegratorConfig {
            rel_tol: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            integrate(&sys, &state, &cfg),
            Err(VortexError::InvalidArgument(_))
        ));
    }
}
