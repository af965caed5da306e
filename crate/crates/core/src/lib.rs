//! Point-vortex dynamics in the plane and the upper half-plane.
//!
//! The library integrates the Kirchhoff equations for N point vortices,
//! monitors their conserved quantities, detects vertical-alignment and
//! instantaneous-stop events, and analyzes the cusp bifurcation of two-vortex
//! systems near a wall, where the critical interaction parameter is the
//! golden ratio (dipole) or its reciprocal (same-sign pair).
//!
//! Entry points:
//! - [`dynamics`]: Hamiltonians, velocity fields, invariants.
//! - [`mod@integrate`]: adaptive integration with event detection.
//! - [`bifurcation`]: the interaction parameter W, critical values,
//!   cross-ratio identities, regime classification.
//! - [`scenarios`]: analytic verification scenarios.
//! - [`io`]: trajectory CSV, run manifests, SVG plots.
//! - [`suite`]: the named verification checks used by `vortex verify`.

// `!(x > 0.0)` guards are deliberate: they reject NaN along with the sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod io;
pub mod model;
pub mod scenarios;
mod simplex;
pub mod suite;

pub use bifurcation::{
    aligned_ratio_for_w, aligned_state, alignment_speed, balance_point, classify_regime,
    critical_w, cross_ratio, cusp_exponent_check, encounter_trajectory, find_cusp_by_simulation,
    interaction_w, interaction_w_general, stop_cross_ratio, stop_height_ratio, BifurcationResult,
    CuspFitWindow, Method, Regime, RegimeKind, GOLDEN_RATIO,
};
pub use dynamics::{hamiltonian, invariants, velocity, velocity_fd_oracle};
pub use error::VortexError;
pub use integrate::{
    conservation_report, integrate, integrate_rk4_fixed, Event, EventKind, IntegratorConfig,
    Termination, Trajectory,
};
pub use model::{Domain, Invariants, Point, VortexState, VortexSystem};
pub use scenarios::{
    grobli_collapse_condition, grobli_selfsimilar_search, scenario_dipole_translation,
    scenario_halfplane_drift, scenario_pair_rotation, scenario_single_rest, ScenarioReport,
};
