//! Hamiltonians, closed-form velocity fields, and conserved quantities for
//! point vortices in the plane and the half-plane.
//!
//! Conventions: the plane interaction energy is
//! `H = -(1/2π) Σ_{j<k} Γ_j Γ_k ln|z_j - z_k|`, matching the Green function
//! `(1/2π) ln|z|` of the Laplacian, and the equations of motion are the
//! symplectic pair `Γ_j ẋ_j = ∂H/∂y_j`, `Γ_j ẏ_j = -∂H/∂x_j`. In the
//! half-plane each vortex additionally interacts with the reflected image
//! system (strength -Γ_k at the mirror point), which adds the self term
//! `(Γ_j²/4π) ln(2 y_j)` to the energy and a constant-speed drift along the
//! boundary to a solitary vortex.

use std::f64::consts::PI;

use crate::error::VortexError;
use crate::model::{Domain, Invariants, Point, VortexState, VortexSystem};

/// Interaction energy of a state.
///
/// Plane: `-(1/2π) Σ_{j<k} Γ_j Γ_k ln|z_j - z_k|`. Half-plane:
/// `(1/4π) [ Σ_j Γ_j² ln(2y_j) + Σ_{j<k} 2 Γ_j Γ_k (ln|z_j - z̄_k| - ln|z_j - z_k|) ]`
/// where `z̄` is the mirror image across y = 0.
pub fn hamiltonian(sys: &VortexSystem, state: &VortexState) -> Result<f64, VortexError> {
    sys.check_state(state)?;
    Ok(hamiltonian_raw(sys, &state.positions))
}

pub(crate) fn hamiltonian_raw(sys: &VortexSystem, pos: &[Point]) -> f64 {
    let g = &sys.strengths;
    let n = g.len();
    match sys.domain {
        Domain::Plane => {
            let mut sum = 0.0;
            for j in 0..n {
                for k in (j + 1)..n {
                    sum += g[j] * g[k] * 0.5 * (pos[j] - pos[k]).norm_sq().ln();
                }
            }
            -sum / (2.0 * PI)
        }
        Domain::HalfPlane => {
            let mut sum = 0.0;
            for j in 0..n {
                sum += g[j] * g[j] * (2.0 * pos[j].y).ln();
                for k in (j + 1)..n {
                    let direct = (pos[j] - pos[k]).norm_sq();
                    let image = (pos[j] - pos[k].mirror()).norm_sq();
                    sum += g[j] * g[k] * (image.ln() - direct.ln());
                }
            }
            sum / (4.0 * PI)
        }
    }
}

/// Velocity induced at `at` by a vortex of strength `gamma` sitting at `src`:
/// counterclockwise swirl for positive strength, speed `Γ/(2πr)`.
#[inline]
fn induced(at: Point, src: Point, gamma: f64) -> Point {
    let d = at - src;
    let r2 = d.norm_sq();
    Point::new(
        -gamma * d.y / (2.0 * PI * r2),
        gamma * d.x / (2.0 * PI * r2),
    )
}

/// Analytic velocities of all vortices: the symplectic gradient of the
/// Hamiltonian divided by the strengths.
pub fn velocity(sys: &VortexSystem, state: &VortexState) -> Result<Vec<Point>, VortexError> {
    sys.check_state(state)?;
    let mut out = vec![Point::new(0.0, 0.0); sys.len()];
    velocity_raw(sys, &state.positions, &mut out);
    Ok(out)
}

pub(crate) fn velocity_raw(sys: &VortexSystem, pos: &[Point], out: &mut [Point]) {
    let g = &sys.strengths;
    let n = g.len();
    for j in 0..n {
        let mut v = Point::new(0.0, 0.0);
        for k in 0..n {
            if k != j {
                v = v + induced(pos[j], pos[k], g[k]);
            }
        }
        if sys.domain == Domain::HalfPlane {
            // image system: strength -Γ_k at the mirror point; the k = j term
            // is the boundary-drift self term Γ_j/(4π y_j).
            for k in 0..n {
                v = v + induced(pos[j], pos[k].mirror(), -g[k]);
            }
        }
        out[j] = v;
    }
}

/// All conserved quantities of the state admitted by the system's domain.
///
/// `H` and `P = Σ Γ_j y_j` always; in the plane also `Q = Σ Γ_j x_j` and
/// `I = Σ Γ_j |z_j|²`; for two vortices in the half-plane also the
/// dimensionless interaction parameter `W`.
pub fn invariants(sys: &VortexSystem, state: &VortexState) -> Result<Invariants, VortexError> {
    let h = hamiltonian(sys, state)?;
    Ok(invariants_raw(sys, &state.positions, h))
}

pub(crate) fn invariants_raw(sys: &VortexSystem, pos: &[Point], h: f64) -> Invariants {
    let g = &sys.strengths;
    let p = g.iter().zip(pos).map(|(g, z)| g * z.y).sum();
    match sys.domain {
        Domain::Plane => Invariants {
            h,
            p,
            q: Some(g.iter().zip(pos).map(|(g, z)| g * z.x).sum()),
            i: Some(g.iter().zip(pos).map(|(g, z)| g * z.norm_sq()).sum()),
            w: None,
        },
        Domain::HalfPlane => {
            let w = (g.len() == 2)
                .then(|| crate::bifurcation::w_from_conserved(g[0], g[1] / g[0], p, h));
            Invariants {
                h,
                p,
                q: None,
                i: None,
                w,
            }
        }
    }
}

/// Central finite differences of the Hamiltonian mapped through the
/// symplectic structure; an implementation-independent check on [`velocity`].
pub fn velocity_fd_oracle(
    sys: &VortexSystem,
    state: &VortexState,
    h: f64,
) -> Result<Vec<Point>, VortexError> {
    sys.check_state(state)?;
    if h <= 0.0 || !h.is_finite() {
        return Err(VortexError::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let min_separation = state.min_separation(sys.domain);
    if min_separation <= 10.0 * h {
        return Err(VortexError::OracleStepTooLarge {
            step: h,
            min_separation,
        });
    }

    let mut pos = state.positions.clone();
    let mut out = Vec::with_capacity(sys.len());
    for j in 0..sys.len() {
        let orig = pos[j];
        let mut partial = |dx: f64, dy: f64| {
            pos[j] = Point::new(orig.x + dx, orig.y + dy);
            let plus = hamiltonian_raw(sys, &pos);
            pos[j] = Point::new(orig.x - dx, orig.y - dy);
            let minus = hamiltonian_raw(sys, &pos);
            pos[j] = orig;
            (plus - minus) / (2.0 * h)
        };
        let dh_dx = partial(h, 0.0);
        let dh_dy = partial(0.0, h);
        let g = sys.strengths[j];
        out.push(Point::new(dh_dy / g, -dh_dx / g));
    }
    Ok(out)
}
