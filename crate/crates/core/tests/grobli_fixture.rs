//! Regression fixture for the self-similar three-vortex configuration with
//! strengths (3, -2, 6), frozen from the shape search. The independent check
//! here is algebraic: a configuration moves self-similarly about its
//! vorticity center c exactly when every velocity satisfies u_j = Λ (z_j - c)
//! for one complex Λ, and then the squared size grows linearly with slope
//! 2 Re Λ.

use point_vortex::dynamics::velocity;
use point_vortex::integrate::{integrate, IntegratorConfig, Termination};
use point_vortex::model::{Domain, Point, VortexState, VortexSystem};

const STRENGTHS: [f64; 3] = [3.0, -2.0, 6.0];
/// Third vertex of the frozen expanding triangle (gauge: z₁ = 0, z₂ = 1).
#[allow(clippy::excessive_precision)] // written with the full 17 digits of the search output
const FIXTURE_Z3: (f64, f64) = (-2.12746919839778892, -2.64267886877309355);

fn fixture() -> (VortexSystem, VortexState) {
    (
        VortexSystem::new(STRENGTHS.to_vec(), Domain::Plane).unwrap(),
        VortexState::from_pairs(&[(0.0, 0.0), (1.0, 0.0), FIXTURE_Z3]),
    )
}

/// Complex Λ fitted from vortex 2 (arbitrary choice), plus the worst
/// residual |u_j - Λ(z_j - c)| over all three vortices.
fn lambda_fit(sys: &VortexSystem, state: &VortexState) -> ((f64, f64), f64) {
    let total: f64 = sys.strengths.iter().sum();
    let mut cx = 0.0;
    let mut cy = 0.0;
    for (g, z) in sys.strengths.iter().zip(&state.positions) {
        cx += g * z.x / total;
        cy += g * z.y / total;
    }
    let v = velocity(sys, state).unwrap();
    let rel: Vec<Point> = state
        .positions
        .iter()
        .map(|z| *z - Point::new(cx, cy))
        .collect();

    // Λ = u₂ / ζ₂ in complex arithmetic
    let denom = rel[1].norm_sq();
    let lam_re = (v[1].x * rel[1].x + v[1].y * rel[1].y) / denom;
    let lam_im = (v[1].y * rel[1].x - v[1].x * rel[1].y) / denom;

    let mut worst = 0.0f64;
    for (u, z) in v.iter().zip(&rel) {
        let px = lam_re * z.x - lam_im * z.y;
        let py = lam_re * z.y + lam_im * z.x;
        worst = worst.max((u.x - px).hypot(u.y - py));
    }
    ((lam_re, lam_im), worst)
}

#[test]
fn fixture_satisfies_selfsimilarity_algebraically() {
    let (sys, state) = fixture();
    let ((lam_re, _), residual) = lambda_fit(&sys, &state);
    assert!(residual < 1e-12, "residual = {residual:.3e}");
    assert!(lam_re > 0.0, "fixture must expand, Re Λ = {lam_re:.6}");
}

#[test]
fn fixture_expands_at_the_predicted_rate() {
    let (sys, state) = fixture();
    let ((lam_re, _), _) = lambda_fit(&sys, &state);
    // |f(t)|² = 1 + 2 Re(Λ) t doubles the size at t = 3 / (2 Re Λ)
    let t_double = 3.0 / (2.0 * lam_re);
    let mut cfg = IntegratorConfig::with_t_end(t_double);
    cfg.output_interval = 0.1;
    let traj = integrate(&sys, &state, &cfg).unwrap();
    assert_eq!(traj.terminated_by, Termination::TimeEnd);
    let d_end = traj.final_state().positions[0].distance(traj.final_state().positions[1]);
    assert!((d_end - 2.0).abs() < 1e-6, "size factor {d_end}");
}

fn max_ratio_drift(traj: &point_vortex::Trajectory, reference: &VortexState) -> f64 {
    let ratios = |s: &VortexState| {
        let d12 = s.positions[0].distance(s.positions[1]);
        (
            s.positions[0].distance(s.positions[2]) / d12,
            s.positions[1].distance(s.positions[2]) / d12,
        )
    };
    let (r1, r2) = ratios(reference);
    traj.states
        .iter()
        .map(|s| {
            let (a, b) = ratios(s);
            ((a - r1) / r1).abs().max(((b - r2) / r2).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn fixture_preserves_shape_over_doubling() {
    let (sys, state) = fixture();
    let ((lam_re, _), _) = lambda_fit(&sys, &state);
    let cfg = IntegratorConfig::with_t_end(3.0 / (2.0 * lam_re));
    let traj = integrate(&sys, &state, &cfg).unwrap();
    let drift = max_ratio_drift(&traj, &state);
    assert!(drift < 1e-4, "ratio drift {drift:.3e}");
}

/// Run the contraction into the finite-time collapse with the guard lowered
/// out of reach: the step size must underflow and the run must end in
/// StepFailure rather than an error or a hang.
#[test]
fn collapse_ends_in_step_failure() {
    let (sys, state) = fixture();
    let mut cfg = IntegratorConfig::with_t_end(30.0);
    cfg.collision_guard = 1e-280;
    let traj = integrate(&sys.reversed(), &state, &cfg).unwrap();
    assert_eq!(traj.terminated_by, Termination::StepFailure);
    let d_end = traj.final_state().positions[0].distance(traj.final_state().positions[1]);
    assert!(d_end < 1e-4, "should have closed in on the collapse, d = {d_end:.3e}");
}

#[test]
fn reversed_fixture_contracts_selfsimilarly() {
    let (sys, state) = fixture();
    let ((lam_re, _), _) = lambda_fit(&sys, &state);
    // negated strengths run the expansion backward; stop before the
    // singularity (collapse happens at |f|² = 0, i.e. t = 1/(2 Re Λ))
    let cfg = IntegratorConfig::with_t_end(0.75 / (2.0 * lam_re));
    let traj = integrate(&sys.reversed(), &state, &cfg).unwrap();
    assert_eq!(traj.terminated_by, Termination::TimeEnd);
    let d_end = traj.final_state().positions[0].distance(traj.final_state().positions[1]);
    assert!(d_end < 0.6, "triangle should have contracted, size {d_end}");
    let drift = max_ratio_drift(&traj, &state);
    assert!(drift < 1e-4, "ratio drift {drift:.3e}");
}
