//! Points of the projective line over the Gaussian rationals, fractional
//! linear maps, and the cross-ratio.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use thiserror::Error;

use crate::scalar::GaussianRational;

type K = GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("cross-ratio needs pairwise distinct points")]
    CoincidentPoints,
    #[error("fractional linear map must have nonzero determinant")]
    SingularMap,
    #[error("cannot parse projective point `{0}`")]
    Parse(String),
}

/// A point of `P^1 = C ∪ {∞}` with exact coordinates.
#[derive(Clone, PartialEq, Eq)]
pub enum ProjectivePoint {
    Finite(K),
    Infinity,
}

impl ProjectivePoint {
    pub fn finite(z: K) -> Self {
        ProjectivePoint::Finite(z)
    }

    pub fn zero() -> Self {
        ProjectivePoint::Finite(K::zero())
    }

    pub fn infinity() -> Self {
        ProjectivePoint::Infinity
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ProjectivePoint::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&K> {
        match self {
            ProjectivePoint::Finite(z) => Some(z),
            ProjectivePoint::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(z : 1)` or `(1 : 0)`.
    fn homogeneous(&self) -> (K, K) {
        match self {
            ProjectivePoint::Finite(z) => (z.clone(), K::one()),
            ProjectivePoint::Infinity => (K::one(), K::zero()),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(z) => write!(f, "{z}"),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ProjectivePoint {
    type Err = MobiusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "oo" || t == "∞" {
            return Ok(ProjectivePoint::Infinity);
        }
        t.parse::<K>().map(ProjectivePoint::Finite).map_err(|_| MobiusError::Parse(s.to_string()))
    }
}

impl From<K> for ProjectivePoint {
    fn from(z: K) -> Self {
        ProjectivePoint::Finite(z)
    }
}

/// `x0·y1 - y0·x1`; zero iff the points coincide.
fn det(a: &ProjectivePoint, b: &ProjectivePoint) -> K {
    let (a0, a1) = a.homogeneous();
    let (b0, b1) = b.homogeneous();
    a0 * b1 - b0 * a1
}

/// The cross-ratio `(p3-p1)(p4-p2) / ((p3-p2)(p4-p1))` of four pairwise
/// distinct points, with the usual homogeneous treatment of `∞`.
pub fn cross_ratio(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
) -> Result<ProjectivePoint, MobiusError> {
    let pts = [p1, p2, p3, p4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if det(pts[i], pts[j]).is_zero() {
                return Err(MobiusError::CoincidentPoints);
            }
        }
    }
    let num = det(p3, p1) * det(p4, p2);
    let den = det(p3, p2) * det(p4, p1);
    if den.is_zero() {
        return Ok(ProjectivePoint::Infinity);
    }
    Ok(ProjectivePoint::Finite(num / den))
}

/// A fractional linear map `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMap {
    pub a: K,
    pub b: K,
    pub c: K,
    pub d: K,
}

impl MobiusMap {
    pub fn new(a: K, b: K, c: K, d: K) -> Result<Self, MobiusError> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det.is_zero() {
            return Err(MobiusError::SingularMap);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let (x0, x1) = p.homogeneous();
        let num = self.a.clone() * x0.clone() + self.b.clone() * x1.clone();
        let den = self.c.clone() * x0 + self.d.clone() * x1;
        if den.is_zero() {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(num / den)
        }
    }
}
