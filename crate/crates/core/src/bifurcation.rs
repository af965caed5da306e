//! The cusp bifurcation of two vortices in the half-plane: the conserved
//! interaction parameter W, instantaneous-stop conditions, critical values of
//! W found both algebraically and by simulation, cross-ratio identities, and
//! regime classification of encounter trajectories.
//!
//! Strengths are normalized to (1, λ) with λ = Γ₂/Γ₁. A dipole is λ = -1, a
//! same-sign pair is λ = +1. For those two cases the kink/leapfrog regime
//! turns into a smooth pass through a cusp on the path of vortex 1, at
//! W = φ (dipole) and W = 1/φ (pair).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{hamiltonian, velocity};
use crate::error::VortexError;
use crate::integrate::{integrate, Event, EventKind, IntegratorConfig, Termination, Trajectory};
use crate::model::{Domain, Point, VortexState, VortexSystem};

/// φ = (√5 + 1)/2.
pub const GOLDEN_RATIO: f64 = 1.618033988749894848204586834365638118;

/// Horizontal displacement used when sliding an aligned configuration back
/// along its own trajectory to build a non-aligned start for the cusp
/// search.
const ENCOUNTER_OFFSET: f64 = 1.0;
/// Wider displacement for classification runs, so a smooth pass has room to
/// separate visibly after the encounter.
const CLASSIFY_OFFSET: f64 = 5.0;
/// Bisection stops once |ẋ₁| at the located alignment falls below this.
const CUSP_RESIDUAL_TOL: f64 = 1e-9;
/// Encounter runs never exceed this length.
const ENCOUNTER_TIME_CAP: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Algebraic,
    Simulation,
}

/// Critical-W data for one strength ratio.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BifurcationResult {
    pub lambda: f64,
    pub critical_w: f64,
    /// y₁/y₂ at the instantaneous stop.
    pub stop_ratio: f64,
    /// Cross-ratio of (z₁, z₂, z̄₂, z̄₁) at the stop configuration.
    pub cross_ratio_at_stop: f64,
    pub method: Method,
    /// |ẋ₁| at the located alignment for simulation results, 0 otherwise.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeKind {
    Escape,
    KinkOrLeapfrog,
    Cusp,
    SmoothPass,
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeKind::Escape => write!(f, "escape"),
            RegimeKind::KinkOrLeapfrog => write!(f, "kink-or-leapfrog"),
            RegimeKind::Cusp => write!(f, "cusp"),
            RegimeKind::SmoothPass => write!(f, "smooth-pass"),
        }
    }
}

/// Qualitative label of an encounter trajectory plus the numbers it was
/// decided on.
#[derive(Clone, Debug)]
pub struct Regime {
    pub tag: RegimeKind,
    pub evidence: BTreeMap<String, f64>,
}

fn require_lambda(lambda: f64) -> Result<(), VortexError> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(VortexError::InvalidArgument(format!(
            "strength ratio must be nonzero and finite, got {lambda}"
        )));
    }
    Ok(())
}

fn require_unit_lambda(lambda: f64) -> Result<(), VortexError> {
    if lambda != 1.0 && lambda != -1.0 {
        return Err(VortexError::InvalidArgument(format!(
            "simulation-based search supports lambda = ±1 only, got {lambda}"
        )));
    }
    Ok(())
}

/// W from the conserved pair (P, H); shared by every W entry point.
/// `W(λ) = |P/Γ₁|^(1+λ²) exp(-4πH/Γ₁²)`, evaluated through a single `exp`.
pub(crate) fn w_from_conserved(gamma1: f64, lambda: f64, p: f64, h: f64) -> f64 {
    let scaled_p = (p / gamma1).abs();
    ((1.0 + lambda * lambda) * scaled_p.ln() - 4.0 * PI * h / (gamma1 * gamma1)).exp()
}

/// Dimensionless interaction parameter `W = (P/Γ)² exp(-4πH/Γ²)` of a
/// two-vortex half-plane state with Γ₁ = ±Γ₂.
pub fn interaction_w(sys: &VortexSystem, state: &VortexState) -> Result<f64, VortexError> {
    if sys.domain != Domain::HalfPlane || sys.len() != 2 {
        return Err(VortexError::InvalidArgument(
            "interaction parameter is defined for two vortices in the half-plane".to_string(),
        ));
    }
    let (g1, g2) = (sys.strengths[0], sys.strengths[1]);
    if g1.abs() != g2.abs() {
        return Err(VortexError::InvalidArgument(format!(
            "normalized form needs |Γ₁| = |Γ₂|; got ({g1}, {g2}); use interaction_w_general"
        )));
    }
    let h = hamiltonian(sys, state)?;
    let p = g1 * state.positions[0].y + g2 * state.positions[1].y;
    Ok(w_from_conserved(g1, g2 / g1, p, h))
}

/// General-λ interaction parameter `W(λ) = |P|^(1+λ²) exp(-4πH)` for
/// strengths (1, λ). Reduces to [`interaction_w`] at λ = ±1.
pub fn interaction_w_general(lambda: f64, state: &VortexState) -> Result<f64, VortexError> {
    require_lambda(lambda)?;
    let sys = VortexSystem::new(vec![1.0, lambda], Domain::HalfPlane)?;
    let h = hamiltonian(&sys, state)?;
    let p = state.positions[0].y + lambda * state.positions[1].y;
    Ok(w_from_conserved(1.0, lambda, p, h))
}

/// Height ratio `y₁/y₂ = 2λ + √(4λ² + 1)` at the instantaneous stop.
pub fn stop_height_ratio(lambda: f64) -> Result<f64, VortexError> {
    require_lambda(lambda)?;
    Ok(2.0 * lambda + (4.0 * lambda * lambda + 1.0).sqrt())
}

/// Vertically aligned two-vortex configuration with strengths (1, λ) and
/// heights (ratio·y2, y2).
pub fn aligned_state(
    lambda: f64,
    ratio: f64,
    y2: f64,
    x: f64,
) -> Result<(VortexSystem, VortexState), VortexError> {
    require_lambda(lambda)?;
    if !(ratio > 0.0) || ratio == 1.0 || !(y2 > 0.0) {
        return Err(VortexError::InvalidArgument(format!(
            "aligned state needs ratio > 0, ratio ≠ 1 and y2 > 0; got ratio = {ratio}, y2 = {y2}"
        )));
    }
    let sys = VortexSystem::new(vec![1.0, lambda], Domain::HalfPlane)?;
    let state = VortexState::from_pairs(&[(x, ratio * y2), (x, y2)]);
    sys.check_state(&state)?;
    Ok((sys, state))
}

/// Horizontal speed of vortex 1 in the aligned configuration with heights
/// (ratio, 1): `(1/4π)(r² - 1 - 4λr) / (r(r² - 1))`. Vanishes exactly at
/// [`stop_height_ratio`] and changes sign across it.
pub fn alignment_speed(lambda: f64, ratio: f64) -> Result<f64, VortexError> {
    require_lambda(lambda)?;
    if !(ratio > 0.0) || ratio == 1.0 {
        return Err(VortexError::InvalidArgument(format!(
            "alignment speed needs ratio > 0 and ratio ≠ 1, got {ratio}"
        )));
    }
    let r = ratio;
    Ok((r * r - 1.0 - 4.0 * lambda * r) / (4.0 * PI * r * (r * r - 1.0)))
}

/// Critical interaction parameter on the algebraic path: W of the aligned
/// stop configuration. Equals φ at λ = -1 and 1/φ at λ = +1.
pub fn critical_w(lambda: f64) -> Result<BifurcationResult, VortexError> {
    let ratio = stop_height_ratio(lambda)?;
    let (_, state) = aligned_state(lambda, ratio, 1.0, 0.0)?;
    let w = interaction_w_general(lambda, &state)?;
    Ok(BifurcationResult {
        lambda,
        critical_w: w,
        stop_ratio: ratio,
        cross_ratio_at_stop: stop_cross_ratio(lambda)?,
        method: Method::Algebraic,
        residual: 0.0,
    })
}

/// Cross-ratio `(a-d)(b-c) / ((a-b)(c-d))` of four collinear points.
pub fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> Result<f64, VortexError> {
    if a == b || c == d {
        return Err(VortexError::InvalidArgument(format!(
            "cross-ratio denominator degenerates for a = b or c = d (a = {a}, b = {b}, c = {c}, d = {d})"
        )));
    }
    Ok((a - d) * (b - c) / ((a - b) * (c - d)))
}

/// Cross-ratio of the stop configuration together with its mirror images,
/// `CR(r, 1, -1, -r)` at r = [`stop_height_ratio`]. Equals φ for λ = ±1.
///
/// For λ outside ±1 this extends the stop configuration formally; the value
/// simplifies to `(r+1)/(λ(r-1))` through the stop relation `4λr = r² - 1`.
pub fn stop_cross_ratio(lambda: f64) -> Result<f64, VortexError> {
    let r = stop_height_ratio(lambda)?;
    cross_ratio(r, 1.0, -1.0, -r)
}

/// The positive solution A = 2 + √5 of the balance of actions
/// `1/(A-1) + 1/(A+1) = 1/2`: the point whose pull on E = 1, combined with
/// its mirror's, matches the pull of -E on E. `CR(A, 1, -1, -A) = φ`.
pub fn balance_point() -> f64 {
    2.0 + 5.0_f64.sqrt()
}

/// Height ratio of the aligned configuration with interaction parameter `w`,
/// on the branch containing the stop family (r < 1 for the dipole, r > 1 for
/// the pair).
pub fn aligned_ratio_for_w(lambda: f64, w: f64) -> Result<f64, VortexError> {
    require_unit_lambda(lambda)?;
    if !(w > 0.0) {
        return Err(VortexError::InvalidArgument(format!(
            "W must be positive, got {w}"
        )));
    }
    if lambda < 0.0 {
        // dipole: W = (r+1)²/(4r) ≥ 1, smaller root
        if w <= 1.0 {
            return Err(VortexError::InvalidArgument(format!(
                "no aligned dipole configuration exists for W = {w} ≤ 1"
            )));
        }
        let m = 2.0 * w - 1.0;
        Ok(m - (m * m - 1.0).sqrt())
    } else {
        // pair: W = (r-1)²/(4r), larger root
        let m = 2.0 * w + 1.0;
        Ok(m + (m * m - 1.0).sqrt())
    }
}

/// Builds the encounter through the aligned configuration of height ratio
/// `ratio`: integrates backward along the trajectory until the vortices are
/// at least `offset` apart horizontally, then forward through the alignment
/// for twice the backward time. Returns the forward trajectory and the
/// expected alignment time.
fn encounter_from_ratio(
    lambda: f64,
    ratio: f64,
    offset: f64,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, f64), VortexError> {
    let (sys, aligned) = aligned_state(lambda, ratio, 1.0, 0.0)?;
    let reversed = sys.reversed();

    let mut back_cfg = cfg.clone();
    back_cfg.t_end = 5.0;
    back_cfg.watch_pairs = Some(vec![]);

    let mut state = aligned;
    let mut elapsed = 0.0;
    let (start, t_back) = 'found: {
        while elapsed < ENCOUNTER_TIME_CAP {
            let leg = integrate(&reversed, &state, &back_cfg)?;
            if leg.terminated_by != Termination::TimeEnd {
                return Err(VortexError::IntegrationFailure(format!(
                    "backward leg of the encounter family ended by {} at t = {}",
                    leg.terminated_by,
                    elapsed + leg.final_time()
                )));
            }
            for (k, s) in leg.states.iter().enumerate() {
                if (s.positions[0].x - s.positions[1].x).abs() >= offset {
                    break 'found (s.clone(), elapsed + leg.times[k]);
                }
            }
            elapsed += leg.final_time();
            state = leg.final_state().clone();
        }
        return Err(VortexError::IntegrationFailure(format!(
            "vortices never separated horizontally by {offset} within t = {ENCOUNTER_TIME_CAP}"
        )));
    };

    let mut fwd_cfg = cfg.clone();
    fwd_cfg.t_end = (2.0 * t_back).max(t_back + 1.0).min(ENCOUNTER_TIME_CAP);
    fwd_cfg.watch_pairs = Some(vec![(0, 1)]);
    let traj = integrate(&sys, &start, &fwd_cfg)?;
    Ok((traj, t_back))
}

/// The horizontal excursion of a same-sign pair is bounded: far apart the
/// heights must satisfy 4y₁y₂ = P²/W, which is solvable only for W ≥ 1, so
/// below that the level curve closes up and |Δx| never exceeds
/// `P √(W/(1-W))` (reached at equal heights). Offsets must stay inside.
fn family_offset(lambda: f64, ratio: f64, target: f64) -> f64 {
    if lambda > 0.0 {
        let p = ratio + 1.0;
        let w = (ratio - 1.0) * (ratio - 1.0) / (4.0 * ratio);
        if w < 1.0 {
            return target.min(0.8 * p * (w / (1.0 - w)).sqrt());
        }
        return target.min(2.0);
    }
    target
}

/// Encounter trajectory of the λ = ±1 family at interaction parameter `w`:
/// starts horizontally separated, passes through a vertical alignment, and
/// runs for an equal time after it.
pub fn encounter_trajectory(
    lambda: f64,
    w: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, VortexError> {
    let ratio = aligned_ratio_for_w(lambda, w)?;
    let offset = family_offset(lambda, ratio, CLASSIFY_OFFSET);
    let (traj, _) = encounter_from_ratio(lambda, ratio, offset, cfg)?;
    Ok(traj)
}

fn alignment_nearest(traj: &Trajectory, t_expected: f64) -> Option<&Event> {
    traj.events_of_kind(EventKind::VerticalAlignment)
        .min_by(|a, b| {
            (a.time - t_expected)
                .abs()
                .total_cmp(&(b.time - t_expected).abs())
        })
}

/// Locates the cusp by bisecting the aligned-stop family on the sign of ẋ₁
/// at the vertical alignment of each member's trajectory.
///
/// Each candidate height ratio is turned into a non-aligned start by
/// backward integration, run forward through its alignment, and ẋ₁ is read
/// at the refined event; the ratio bracket narrows until |ẋ₁| drops below
/// 1e-9. Agrees with [`critical_w`] to well within 1e-6.
pub fn find_cusp_by_simulation(
    lambda: f64,
    ratio_bracket: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<BifurcationResult, VortexError> {
    require_unit_lambda(lambda)?;
    let (mut lo, mut hi) = ratio_bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(VortexError::InvalidArgument(format!(
            "ratio bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    // endpoint signs come from the closed-form alignment speed, which the
    // simulated ẋ₁ reproduces because the trajectory passes through the
    // constructed aligned state
    let f_lo = alignment_speed(lambda, lo)?;
    let f_hi = alignment_speed(lambda, hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(VortexError::NoSignChange { a: lo, b: hi });
    }

    let probe = |ratio: f64| -> Result<(f64, Event), VortexError> {
        let offset = family_offset(lambda, ratio, ENCOUNTER_OFFSET);
        let (traj, t_back) = encounter_from_ratio(lambda, ratio, offset, cfg)?;
        let event = alignment_nearest(&traj, t_back).cloned().ok_or_else(|| {
            VortexError::IntegrationFailure(format!(
                "no vertical alignment located for ratio {ratio}"
            ))
        })?;
        Ok((event.diagnostics["xdot_i"], event))
    };

    let mut best: Option<(f64, Event)> = None;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (g, event) = probe(mid)?;
        if best.as_ref().is_none_or(|(b, _)| g.abs() < b.abs()) {
            best = Some((g, event));
        }
        if g.abs() < CUSP_RESIDUAL_TOL || hi - lo < 1e-13 {
            break;
        }
        if g.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (residual, event) = best.expect("bisection evaluates at least one midpoint");
    let (y1, y2) = (event.state.positions[0].y, event.state.positions[1].y);
    let sys = VortexSystem::new(vec![1.0, lambda], Domain::HalfPlane)?;
    Ok(BifurcationResult {
        lambda,
        critical_w: interaction_w(&sys, &event.state)?,
        stop_ratio: y1 / y2,
        cross_ratio_at_stop: cross_ratio(y1, y2, -y2, -y1)?,
        method: Method::Simulation,
        residual: residual.abs(),
    })
}

fn sign_changes(series: impl Iterator<Item = f64>) -> usize {
    let mut count = 0;
    let mut prev = 0.0;
    for v in series {
        // signum(±0) is ±1, so exact zeros must be skipped explicitly
        if v == 0.0 {
            continue;
        }
        let s = v.signum();
        if prev != 0.0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Maximum angle (degrees) between a vortex's velocity over the closing
/// quarter of the run and its final velocity.
fn heading_variation_deg(traj: &Trajectory, vortex: usize) -> f64 {
    let n = traj.times.len();
    let from = n - (n / 4).max(2).min(n);
    let vels: Vec<Point> = traj.states[from..]
        .iter()
        .map(|s| {
            velocity(&traj.system, s)
                .map(|v| v[vortex])
                .unwrap_or(Point::new(0.0, 0.0))
        })
        .collect();
    let last = *vels.last().expect("non-empty tail");
    vels.iter()
        .map(|v| {
            let dot = v.x * last.x + v.y * last.y;
            let cross = v.x * last.y - v.y * last.x;
            cross.atan2(dot).abs().to_degrees()
        })
        .fold(0.0, f64::max)
}

/// Classifies a λ = ±1 encounter trajectory.
///
/// Cusp when an instantaneous stop was recorded. Kink/leapfrog when either
/// vortex's ẋ reverses — detected on the dense samples and, exactly, through
/// the sign of the looping vortex's ẋ at the refined alignment (negative
/// means it is backtracking there, which is the loop). Escape (dipole only)
/// when the vortices never align and leave along a straight slant. Smooth
/// pass when they pass through the alignment without any reversal; a dipole
/// pass must also separate to 3× the closest approach afterwards, while a
/// same-sign pair stays horizontally bounded (its far-field heights would
/// have to satisfy 4y₁y₂ = P²/W, impossible below W = 1), so alignment
/// without reversal is itself the smooth-pass signature there.
pub fn classify_regime(traj: &Trajectory, lambda: f64) -> Result<Regime, VortexError> {
    require_unit_lambda(lambda)?;
    let sys = &traj.system;
    if sys.domain != Domain::HalfPlane || sys.len() != 2 {
        return Err(VortexError::InvalidArgument(
            "regime classification needs a two-vortex half-plane trajectory".to_string(),
        ));
    }
    if (sys.strengths[1] / sys.strengths[0] - lambda).abs() > 1e-12 {
        return Err(VortexError::InvalidArgument(format!(
            "trajectory strength ratio {} does not match lambda {lambda}",
            sys.strengths[1] / sys.strengths[0]
        )));
    }
    if traj.terminated_by == Termination::NearCollision {
        return Err(VortexError::Unresolved(
            "trajectory ended in a near-collision; encounter not resolved".to_string(),
        ));
    }

    let velocities: Vec<Vec<Point>> = traj
        .states
        .iter()
        .map(|s| velocity(sys, s))
        .collect::<Result<_, _>>()?;
    let flips_1 = sign_changes(velocities.iter().map(|v| v[0].x));
    let flips_2 = sign_changes(velocities.iter().map(|v| v[1].x));

    let distances: Vec<f64> = traj
        .states
        .iter()
        .map(|s| s.positions[0].distance(s.positions[1]))
        .collect();
    let d_min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let d_max = distances.iter().copied().fold(0.0, f64::max);
    let d_final = *distances.last().expect("non-empty trajectory");

    let alignments = traj.events_of_kind(EventKind::VerticalAlignment).count();
    let stops = traj.events_of_kind(EventKind::InstantaneousStop).count();

    // ẋ of the loop-side vortex (the lower one for a dipole, the upper one
    // for a pair) at each refined alignment; any negative value means it is
    // moving backward there, i.e. mid-loop
    let mut backtrack_speed = f64::INFINITY;
    for e in traj.events_of_kind(EventKind::VerticalAlignment) {
        let (i, _) = e.vortex_indices;
        let upper_is_i = e.state.positions[i].y > e.diagnostics["y_j"];
        let looper_is_i = if lambda < 0.0 {
            !upper_is_i
        } else {
            upper_is_i
        };
        let speed = if looper_is_i {
            e.diagnostics["xdot_i"]
        } else {
            e.diagnostics["xdot_j"]
        };
        backtrack_speed = backtrack_speed.min(speed);
    }
    let loop_at_alignment = alignments > 0 && backtrack_speed < -1e-6;

    let displacement = |vortex: usize| -> f64 {
        let first = traj.states[0].positions[vortex];
        let last = traj.final_state().positions[vortex];
        first.distance(last)
    };
    let min_displacement = displacement(0).min(displacement(1));
    let heading_var = heading_variation_deg(traj, 0).max(heading_variation_deg(traj, 1));

    let mut evidence = BTreeMap::new();
    evidence.insert("xdot_sign_changes_1".to_string(), flips_1 as f64);
    evidence.insert("xdot_sign_changes_2".to_string(), flips_2 as f64);
    evidence.insert("alignments".to_string(), alignments as f64);
    evidence.insert("stops".to_string(), stops as f64);
    evidence.insert("min_distance".to_string(), d_min);
    evidence.insert("max_distance".to_string(), d_max);
    evidence.insert("final_distance".to_string(), d_final);
    evidence.insert("separation_factor".to_string(), d_final / d_min);
    evidence.insert("min_displacement".to_string(), min_displacement);
    evidence.insert("heading_variation_deg".to_string(), heading_var);
    if backtrack_speed.is_finite() {
        evidence.insert("alignment_backtrack_speed".to_string(), backtrack_speed);
    }

    // escape first: a capture rotates the velocities toward the slanted
    // asymptote, which can flip ẋ without any loop; a kink or leapfrog
    // always passes through an alignment, so requiring none here is safe
    let tag = if stops > 0 {
        RegimeKind::Cusp
    } else if lambda < 0.0
        && alignments == 0
        && heading_var < 5.0
        && min_displacement > 10.0 * d_final
    {
        RegimeKind::Escape
    } else if flips_1 + flips_2 > 0 || loop_at_alignment {
        RegimeKind::KinkOrLeapfrog
    } else if alignments > 0 && (lambda > 0.0 || d_final >= 3.0 * d_min) {
        RegimeKind::SmoothPass
    } else {
        return Err(VortexError::Unresolved(format!(
            "no regime evidence: {alignments} alignments, heading variation {heading_var:.2}°, \
             displacement {min_displacement:.3} vs final distance {d_final:.3}"
        )));
    };

    Ok(Regime { tag, evidence })
}

/// Fit window for [`cusp_exponent_check`], in time units around the stop.
#[derive(Clone, Copy, Debug)]
pub struct CuspFitWindow {
    pub min_dt: f64,
    pub max_dt: f64,
}

impl Default for CuspFitWindow {
    fn default() -> Self {
        CuspFitWindow {
            min_dt: 0.02,
            max_dt: 0.5,
        }
    }
}

/// Log-log slope of |x - x_c| against |y - y_c| for the stopping vortex
/// around a cusp event; 3/2 for the normal form (t³, t²).
pub fn cusp_exponent_check(traj: &Trajectory, event: &Event) -> Result<f64, VortexError> {
    cusp_exponent_check_with(traj, event, CuspFitWindow::default())
}

pub fn cusp_exponent_check_with(
    traj: &Trajectory,
    event: &Event,
    window: CuspFitWindow,
) -> Result<f64, VortexError> {
    if event.kind != EventKind::InstantaneousStop {
        return Err(VortexError::InvalidArgument(format!(
            "cusp exponent needs an instantaneous-stop event, got {}",
            event.kind
        )));
    }
    let vortex = event
        .diagnostics
        .get("stop_vortex")
        .map(|v| *v as usize)
        .unwrap_or(event.vortex_indices.0);
    let center = event.state.positions[vortex];

    let mut pts = Vec::new();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let dt = (t - event.time).abs();
        if dt < window.min_dt || dt > window.max_dt {
            continue;
        }
        let dx = (s.positions[vortex].x - center.x).abs();
        let dy = (s.positions[vortex].y - center.y).abs();
        // stay above the event-localization noise floor
        if dx > 1e-9 && dy > 1e-11 {
            pts.push((dy.ln(), dx.ln()));
        }
    }
    if pts.len() < 8 {
        return Err(VortexError::Diagnostic(format!(
            "cusp fit window holds only {} samples (need 8)",
            pts.len()
        )));
    }

    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in &pts {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn phi() -> f64 {
        (1.0 + 5.0_f64.sqrt()) / 2.0
    }

    #[test]
    fn golden_ratio_constant_matches_formula() {
        assert!((GOLDEN_RATIO - phi()).abs() < 1e-15);
    }

    #[test]
    fn stop_height_ratios() {
        assert_relative_eq!(
            stop_height_ratio(1.0).unwrap(),
            2.0 + 5.0_f64.sqrt(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            stop_height_ratio(-1.0).unwrap(),
            5.0_f64.sqrt() - 2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            stop_height_ratio(0.5).unwrap(),
            1.0 + 2.0_f64.sqrt(),
            epsilon = 1e-14
        );
        assert!(stop_height_ratio(0.0).is_err());
    }

    #[test]
    fn interaction_w_at_stop_heights() {
        let sys = VortexSystem::new(vec![1.0, -1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 5.0_f64.sqrt() - 2.0), (0.0, 1.0)]);
        assert_relative_eq!(interaction_w(&sys, &state).unwrap(), phi(), epsilon = 1e-12);

        let sys = VortexSystem::new(vec![1.0, 1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 2.0 + 5.0_f64.sqrt()), (0.0, 1.0)]);
        assert_relative_eq!(
            interaction_w(&sys, &state).unwrap(),
            1.0 / phi(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn interaction_w_aligned_dipole_closed_form() {
        let sys = VortexSystem::new(vec![1.0, -1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 0.5), (0.0, 1.0)]);
        assert_relative_eq!(interaction_w(&sys, &state).unwrap(), 1.125, epsilon = 1e-13);
    }

    #[test]
    fn interaction_w_rejects_unequal_magnitudes() {
        let sys = VortexSystem::new(vec![1.0, -2.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 2.0), (0.0, 1.0)]);
        assert!(interaction_w(&sys, &state).is_err());
    }

    #[test]
    fn interaction_w_is_strength_scale_invariant() {
        // W = (P/Γ)² exp(-4πH/Γ²) must not change when both strengths scale
        let state = VortexState::from_pairs(&[(0.3, 1.6), (-0.2, 0.8)]);
        let unit = VortexSystem::new(vec![1.0, -1.0], Domain::HalfPlane).unwrap();
        let scaled = VortexSystem::new(vec![2.5, -2.5], Domain::HalfPlane).unwrap();
        let a = interaction_w(&unit, &state).unwrap();
        let b = interaction_w(&scaled, &state).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-13);
    }

    #[test]
    fn interaction_w_rejects_wrong_domain_or_count() {
        let plane = VortexSystem::new(vec![1.0, -1.0], Domain::Plane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 2.0), (0.0, 1.0)]);
        assert!(interaction_w(&plane, &state).is_err());

        let triple = VortexSystem::new(vec![1.0, -1.0, 1.0], Domain::HalfPlane).unwrap();
        let state3 = VortexState::from_pairs(&[(0.0, 2.0), (0.0, 1.0), (1.0, 1.0)]);
        assert!(interaction_w(&triple, &state3).is_err());
    }

    #[test]
    fn general_w_reduces_to_normalized_form() {
        let state = VortexState::from_pairs(&[(0.4, 1.7), (-0.2, 0.9)]);
        let sys = VortexSystem::new(vec![1.0, 1.0], Domain::HalfPlane).unwrap();
        assert_eq!(
            interaction_w_general(1.0, &state).unwrap(),
            interaction_w(&sys, &state).unwrap()
        );
        let aligned = VortexState::from_pairs(&[(0.0, 0.5), (0.0, 1.0)]);
        assert_relative_eq!(
            interaction_w_general(-1.0, &aligned).unwrap(),
            1.125,
            epsilon = 1e-13
        );
    }

    #[test]
    fn general_w_regression_at_half() {
        // frozen from the closed form at the λ = 0.5 stop ratio 1 + √2
        let (_, state) = aligned_state(0.5, 1.0 + 2.0_f64.sqrt(), 1.0, 0.0).unwrap();
        let w = interaction_w_general(0.5, &state).unwrap();
        assert_relative_eq!(w, 0.274_671_028_366_952_5, epsilon = 1e-14);
    }

    #[test]
    fn critical_w_hits_golden_ratio() {
        let dipole = critical_w(-1.0).unwrap();
        assert!((dipole.critical_w - phi()).abs() < 1e-12);
        assert!((dipole.stop_ratio - (5.0_f64.sqrt() - 2.0)).abs() < 1e-12);

        let pair = critical_w(1.0).unwrap();
        assert!((pair.critical_w - 1.0 / phi()).abs() < 1e-12);

        // definitional consistency at a non-unit ratio
        let half = critical_w(0.5).unwrap();
        let (_, state) = aligned_state(0.5, stop_height_ratio(0.5).unwrap(), 1.0, 0.0).unwrap();
        assert_eq!(half.critical_w, interaction_w_general(0.5, &state).unwrap());
    }

    #[test]
    fn alignment_speed_roots_and_values() {
        assert!(alignment_speed(-1.0, 5.0_f64.sqrt() - 2.0).unwrap().abs() < 1e-12);
        assert!(alignment_speed(1.0, 2.0 + 5.0_f64.sqrt()).unwrap().abs() < 1e-12);
        assert_relative_eq!(
            alignment_speed(-1.0, 0.5).unwrap(),
            -10.0 / (12.0 * PI),
            epsilon = 1e-14
        );
    }

    #[test]
    fn aligned_state_constructor() {
        let (sys, state) = aligned_state(-1.0, 0.5, 1.0, 0.0).unwrap();
        assert_eq!(sys.strengths, vec![1.0, -1.0]);
        assert_eq!(state.positions[0], Point::new(0.0, 0.5));
        assert_eq!(state.positions[1], Point::new(0.0, 1.0));
        assert!(aligned_state(-1.0, 1.0, 1.0, 0.0).is_err());
        assert!(aligned_state(-1.0, 0.5, -1.0, 0.0).is_err());
    }

    #[test]
    fn cross_ratio_identities() {
        let a = 2.0 + 5.0_f64.sqrt();
        assert!((cross_ratio(a, 1.0, -1.0, -a).unwrap() - phi()).abs() < 1e-12);
        assert_relative_eq!(
            cross_ratio(3.0, 1.0, -1.0, -3.0).unwrap(),
            3.0,
            epsilon = 1e-14
        );
        assert!(cross_ratio(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(cross_ratio(0.0, 2.0, 1.0, 1.0).is_err());
        // a = d and b = c are allowed
        assert!(cross_ratio(1.0, 2.0, 2.0, 1.0).is_ok());
    }

    #[test]
    fn stop_cross_ratio_is_golden_for_unit_ratios() {
        assert!((stop_cross_ratio(1.0).unwrap() - phi()).abs() < 1e-12);
        assert!((stop_cross_ratio(-1.0).unwrap() - phi()).abs() < 1e-12);
        // frozen λ = 0.5 value: 2 + 2√2
        assert_relative_eq!(
            stop_cross_ratio(0.5).unwrap(),
            2.0 + 2.0 * 2.0_f64.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn balance_point_satisfies_quadratic() {
        let a = balance_point();
        assert_relative_eq!(a, 4.236_067_977_5, epsilon = 1e-10);
        assert!((1.0 / (a - 1.0) + 1.0 / (a + 1.0) - 0.5).abs() < 1e-12);
        assert!((a * a - 4.0 * a - 1.0).abs() < 1e-12);
        assert!((cross_ratio(a, 1.0, -1.0, -a).unwrap() - phi()).abs() < 1e-12);
    }

    #[test]
    fn aligned_ratio_inverts_w() {
        for (lambda, w) in [(-1.0, 1.4), (-1.0, 1.9), (1.0, 0.3), (1.0, 0.9)] {
            let r = aligned_ratio_for_w(lambda, w).unwrap();
            let (_, state) = aligned_state(lambda, r, 1.0, 0.0).unwrap();
            assert_relative_eq!(
                interaction_w_general(lambda, &state).unwrap(),
                w,
                epsilon = 1e-12
            );
        }
        assert!(aligned_ratio_for_w(-1.0, 0.9).is_err());
        assert!(aligned_ratio_for_w(0.5, 1.4).is_err());
    }

    #[test]
    fn cusp_finder_rejects_bracket_without_root() {
        let cfg = IntegratorConfig::default();
        assert!(matches!(
            find_cusp_by_simulation(-1.0, (0.3, 0.35), &cfg),
            Err(VortexError::NoSignChange { .. })
        ));
        assert!(find_cusp_by_simulation(0.5, (0.1, 0.4), &cfg).is_err());
    }
}
