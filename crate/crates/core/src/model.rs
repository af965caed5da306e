//! Problem definitions: vortex systems, states, and the conserved quantities
//! attached to each domain.

use serde::{Deserialize, Serialize};

use crate::error::VortexError;

/// A point in the plane, in dimensionless length units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Reflection across the boundary y = 0.
    pub fn mirror(self) -> Self {
        Point {
            x: self.x,
            y: -self.y,
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// The flow domain. `HalfPlane` is the open upper half-plane y > 0; states in
/// it must keep every vortex strictly above the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Plane,
    HalfPlane,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Plane => write!(f, "plane"),
            Domain::HalfPlane => write!(f, "half-plane"),
        }
    }
}

/// The immutable problem definition: circulations and the domain they live in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VortexSystem {
    pub strengths: Vec<f64>,
    pub domain: Domain,
}

impl VortexSystem {
    /// Builds a system, rejecting empty strength lists and zero strengths.
    pub fn new(strengths: Vec<f64>, domain: Domain) -> Result<Self, VortexError> {
        if strengths.is_empty() {
            return Err(VortexError::EmptySystem);
        }
        for (index, &g) in strengths.iter().enumerate() {
            if g == 0.0 || !g.is_finite() {
                return Err(VortexError::ZeroStrength { index });
            }
        }
        Ok(VortexSystem { strengths, domain })
    }

    pub fn len(&self) -> usize {
        self.strengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strengths.is_empty()
    }

    /// The time-reversed system: all circulations negated.
    pub fn reversed(&self) -> VortexSystem {
        VortexSystem {
            strengths: self.strengths.iter().map(|g| -g).collect(),
            domain: self.domain,
        }
    }

    /// Validates a state against this system: matching count, pairwise
    /// distinct positions, and y > 0 in the half-plane.
    pub fn check_state(&self, state: &VortexState) -> Result<(), VortexError> {
        let n = self.len();
        if state.positions.len() != n {
            return Err(VortexError::DimensionMismatch {
                expected: n,
                actual: state.positions.len(),
            });
        }
        for (index, p) in state.positions.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(VortexError::NonFinitePosition { index });
            }
            if self.domain == Domain::HalfPlane && p.y <= 0.0 {
                return Err(VortexError::OutsideHalfPlane { index, y: p.y });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if state.positions[i] == state.positions[j] {
                    return Err(VortexError::CoincidentVortices { i, j });
                }
            }
        }
        Ok(())
    }
}

/// Positions of the N vortices at an instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexState {
    pub positions: Vec<Point>,
}

impl VortexState {
    pub fn new(positions: Vec<Point>) -> Self {
        VortexState { positions }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        VortexState {
            positions: pairs.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Minimum over pairwise distances and, in the half-plane, distances to
    /// the boundary. Infinite for a single plane vortex.
    pub fn min_separation(&self, domain: Domain) -> f64 {
        let mut min = f64::INFINITY;
        let n = self.positions.len();
        for i in 0..n {
            if domain == Domain::HalfPlane {
                min = min.min(self.positions[i].y);
            }
            for j in (i + 1)..n {
                min = min.min(self.positions[i].distance(self.positions[j]));
            }
        }
        min
    }
}

/// Conserved quantities of a state. `q` and `i` exist only in the plane;
/// `w` only for two vortices in the half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    /// Interaction energy.
    pub h: f64,
    /// Linear impulse component Σ Γ_j y_j.
    pub p: f64,
    /// Linear impulse component Σ Γ_j x_j (plane only).
    pub q: Option<f64>,
    /// Angular impulse Σ Γ_j |z_j|² (plane only).
    pub i: Option<f64>,
    /// Dimensionless interaction parameter (half-plane, N = 2 only).
    pub w: Option<f64>,
}

impl Invariants {
    /// Names and values of the invariants present, in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("H", self.h), ("P", self.p)];
        if let Some(q) = self.q {
            out.push(("Q", q));
        }
        if let Some(i) = self.i {
            out.push(("I", i));
        }
        if let Some(w) = self.w {
            out.push(("W", w));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_strength() {
        let err = VortexSystem::new(vec![1.0, 0.0], Domain::Plane).unwrap_err();
        assert!(matches!(err, VortexError::ZeroStrength { index: 1 }));
    }

    #[test]
    fn rejects_empty_system() {
        assert!(matches!(
            VortexSystem::new(vec![], Domain::Plane),
            Err(VortexError::EmptySystem)
        ));
    }

    #[test]
    fn rejects_coincident_positions() {
        let sys = VortexSystem::new(vec![1.0, -1.0], Domain::Plane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 1.0), (0.0, 1.0)]);
        assert!(matches!(
            sys.check_state(&state),
            Err(VortexError::CoincidentVortices { i: 0, j: 1 })
        ));
    }

    #[test]
    fn rejects_boundary_violation() {
        let sys = VortexSystem::new(vec![1.0], Domain::HalfPlane).unwrap();
        let state = VortexState::from_pairs(&[(0.0, 0.0)]);
        assert!(matches!(
            sys.check_state(&state),
            Err(VortexError::OutsideHalfPlane { index: 0, .. })
        ));
        let plane = VortexSystem::new(vec![1.0], Domain::Plane).unwrap();
        assert!(plane.check_state(&state).is_ok());
    }

    #[test]
    fn min_separation_accounts_for_boundary() {
        let state = VortexState::from_pairs(&[(0.0, 0.5), (3.0, 2.0)]);
        assert_eq!(state.min_separation(Domain::HalfPlane), 0.5);
        let d = state.min_separation(Domain::Plane);
        assert!((d - (9.0f64 + 2.25).sqrt()).abs() < 1e-15);
    }
}
