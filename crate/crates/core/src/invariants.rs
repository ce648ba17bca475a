//! The distinguished secondary product on the reference threefold: the
//! degree-`(2,2)` indeterminacy submodule, the pairing functional that
//! annihilates it, the weighted representative determined by two marked
//! points on the blown-up line, and the resulting biholomorphism invariant.
//!
//! The two marked points are coordinates on the line through the first two
//! blow-up points, normalized so those points sit at `0` and `∞`. Everything
//! stays exact: weights are [`LogValue`]s and both computation paths (ring
//! pairing and cross-ratio) are compared structurally.

use num::Zero;
use thiserror::Error;

use crate::blowup::{BlowupError, IntersectionRing};
use crate::cbba::{Bidegree, Element, ModelError, K};
use crate::linalg::Subspace;
use crate::logvalue::{LogValue, LogValueError};
use crate::mobius::{cross_ratio, MobiusError, ProjectivePoint};
use crate::scalar::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("marked points must be distinct")]
    CoincidentPoints,
    #[error("marked points must avoid 0 and ∞")]
    DegeneratePoint,
    #[error("ring is missing required divisor `{0}`")]
    MissingDivisor(String),
    #[error("the two evaluation paths disagree: {0} vs {1}")]
    PathDisagreement(String, String),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Log(#[from] LogValueError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// Two marked points on the blown-up line, in the coordinate where the
/// first two blow-up points are `0` and `∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub s1: GaussianRational,
    pub s2: GaussianRational,
}

impl Configuration {
    pub fn new(s1: GaussianRational, s2: GaussianRational) -> Result<Self, InvariantError> {
        if s1.is_zero() || s2.is_zero() {
            return Err(InvariantError::DegeneratePoint);
        }
        if s1 == s2 {
            return Err(InvariantError::CoincidentPoints);
        }
        Ok(Configuration { s1, s2 })
    }
}

/// A formal combination of ring classes with [`LogValue`] weights.
#[derive(Clone)]
pub struct WeightedClass {
    terms: Vec<(LogValue, Element)>,
}

impl WeightedClass {
    pub fn terms(&self) -> &[(LogValue, Element)] {
        &self.terms
    }
}

fn require_divisor(ring: &IntersectionRing, name: &str) -> Result<Element, InvariantError> {
    ring.divisor(name).map_err(|_| InvariantError::MissingDivisor(name.to_string()))
}

/// The degree-`(2,2)` piece of the submodule generated by `E_C - E_R` and
/// `E_R + E_L1 + E_L2`, as a subspace of the `(2,2)` coordinates.
pub fn indeterminacy_22(ring: &IntersectionRing) -> Result<Subspace<K>, InvariantError> {
    let gen1 = require_divisor(ring, "E_C")?.sub(&require_divisor(ring, "E_R")?)?;
    let gen2 = require_divisor(ring, "E_R")?
        .add(&require_divisor(ring, "E_L1")?)?
        .add(&require_divisor(ring, "E_L2")?)?;
    let model = ring.model();
    let piece = model.piece_indices(Bidegree::new(2, 2));
    let mut span = Vec::new();
    for g in [&gen1, &gen2] {
        for i in model.piece_indices(Bidegree::new(1, 1)) {
            let prod = g.product(&model.basis_element(i))?;
            let coords: Vec<K> = piece.iter().map(|&w| prod.coeffs()[w].clone()).collect();
            span.push(coords);
        }
    }
    Ok(Subspace::from_vectors(piece.len(), span))
}

/// Coordinates of a `(2,2)` class in the `(2,2)` graded piece.
pub fn coords_22(ring: &IntersectionRing, e: &Element) -> Vec<K> {
    let piece = ring.model().piece_indices(Bidegree::new(2, 2));
    piece.iter().map(|&w| e.coeffs()[w].clone()).collect()
}

/// `∫ (A_1 - A_2) · x` for a `(2,2)` class.
pub fn pairing_functional(ring: &IntersectionRing, x: &Element) -> Result<Rational, InvariantError> {
    let a1 = ring.class("A_1").map_err(|_| InvariantError::MissingDivisor("A_1".into()))?;
    let a2 = ring.class("A_2").map_err(|_| InvariantError::MissingDivisor("A_2".into()))?;
    let diff = a1.sub(&a2)?;
    Ok(ring.integrate(&diff.product(x)?)?)
}

/// The same functional extended to weighted classes.
pub fn pairing_functional_weighted(
    ring: &IntersectionRing,
    w: &WeightedClass,
) -> Result<LogValue, InvariantError> {
    let mut acc = LogValue::zero();
    for (weight, class) in w.terms() {
        let v = pairing_functional(ring, class)?;
        acc = acc + weight.scale(&v);
    }
    Ok(acc)
}

/// The weighted representative of the distinguished secondary product:
/// weight `(1/π)·log|S_i|` on the fiber class `F_i`.
pub fn massey_representative(
    ring: &IntersectionRing,
    cfg: &Configuration,
) -> Result<WeightedClass, InvariantError> {
    let f1 = ring.class("F_1").map_err(|_| InvariantError::MissingDivisor("F_1".into()))?;
    let f2 = ring.class("F_2").map_err(|_| InvariantError::MissingDivisor("F_2".into()))?;
    let w1 = LogValue::log_abs(&cfg.s1)?;
    let w2 = LogValue::log_abs(&cfg.s2)?;
    Ok(WeightedClass { terms: vec![(w1, f1), (w2, f2)] })
}

/// Evaluation path 1: pair the weighted representative against `A_1 - A_2`.
pub fn massey_value_via_ring(
    ring: &IntersectionRing,
    cfg: &Configuration,
) -> Result<LogValue, InvariantError> {
    let rep = massey_representative(ring, cfg)?;
    pairing_functional_weighted(ring, &rep)
}

/// Evaluation path 2: `(1/π)·log|χ(0, ∞, S_1, S_2)|`.
pub fn massey_value_via_cross_ratio(cfg: &Configuration) -> Result<LogValue, InvariantError> {
    let chi = cross_ratio(
        &ProjectivePoint::zero(),
        &ProjectivePoint::infinity(),
        &ProjectivePoint::finite(cfg.s1.clone()),
        &ProjectivePoint::finite(cfg.s2.clone()),
    )?;
    let z = chi.as_finite().expect("cross-ratio of distinct points is finite");
    Ok(LogValue::log_abs(z)?)
}

/// The value of the distinguished secondary product paired against
/// `A_1 - A_2`, computed along both paths; they must agree exactly.
pub fn massey_value(
    ring: &IntersectionRing,
    cfg: &Configuration,
) -> Result<LogValue, InvariantError> {
    let via_ring = massey_value_via_ring(ring, cfg)?;
    let via_chi = massey_value_via_cross_ratio(cfg)?;
    if via_ring != via_chi {
        return Err(InvariantError::PathDisagreement(via_ring.to_string(), via_chi.to_string()));
    }
    Ok(via_ring)
}

/// `|((1/π)·log|χ||`: invariant under the ring automorphisms that swap the
/// marked points, so a difference certifies non-biholomorphic
/// configurations.
pub fn distinguishing_invariant(cfg: &Configuration) -> Result<LogValue, InvariantError> {
    Ok(massey_value_via_cross_ratio(cfg)?.abs()?)
}

/// `true` when the invariants differ exactly. `false` only means "not
/// distinguished by this invariant".
pub fn configurations_distinguished(
    a: &Configuration,
    b: &Configuration,
) -> Result<bool, InvariantError> {
    Ok(distinguishing_invariant(a)? != distinguishing_invariant(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::reference_ring;
    use crate::scalar::rational;
    use num::One;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn cfg(s1: &str, s2: &str) -> Configuration {
        Configuration::new(g(s1), g(s2)).unwrap()
    }

    #[test]
    fn configuration_applies_preconditions() {
        assert_eq!(
            Configuration::new(g("1"), g("1")),
            Err(InvariantError::CoincidentPoints)
        );
        assert_eq!(Configuration::new(g("0"), g("1")), Err(InvariantError::DegeneratePoint));
    }

    #[test]
    fn indeterminacy_has_dimension_five_with_the_expected_span() {
        let ring = reference_ring();
        let indet = indeterminacy_22(&ring).unwrap();
        assert_eq!(indet.dim(), 5);

        let m = ring.model();
        let expected_generators = [
            "GE_C",
            "E_R^2",
            "E_P^2+E_Q^2",
            "GE_L1+GE_L2",
            "G^2",
        ];
        let mut span = Vec::new();
        for expr in expected_generators {
            let e = m.parse_element(expr).unwrap();
            span.push(coords_22(&ring, &e));
            assert!(indet.contains(&coords_22(&ring, &e)), "{expr} should lie in the submodule");
        }
        let expected = Subspace::from_vectors(7, span);
        assert_eq!(indet, expected);

        // E_P² - E_Q² stays outside
        let out = m.parse_element("E_P^2-E_Q^2").unwrap();
        assert!(!indet.contains(&coords_22(&ring, &out)));
    }

    #[test]
    fn pairing_functional_annihilates_the_indeterminacy() {
        let ring = reference_ring();
        let indet = indeterminacy_22(&ring).unwrap();
        let piece = ring.model().piece_indices(Bidegree::new(2, 2));
        for v in indet.basis_vectors() {
            let mut coeffs = vec![K::zero(); ring.model().dim()];
            for (k, &w) in piece.iter().enumerate() {
                coeffs[w] = v[k].clone();
            }
            let e = ring.model().element_from_coeffs(coeffs);
            assert!(pairing_functional(&ring, &e).unwrap().is_zero());
        }
        // and takes the values ±1 on the fiber classes
        let f1 = ring.class("F_1").unwrap();
        let f2 = ring.class("F_2").unwrap();
        assert_eq!(pairing_functional(&ring, &f1).unwrap(), rational(1, 1));
        assert_eq!(pairing_functional(&ring, &f2).unwrap(), rational(-1, 1));
        let g2 = ring.model().element_by_id("G^2").unwrap();
        assert!(pairing_functional(&ring, &g2).unwrap().is_zero());
    }

    #[test]
    fn representative_weights_are_real_log_values() {
        let ring = reference_ring();
        let rep = massey_representative(&ring, &cfg("1", "2")).unwrap();
        assert_eq!(rep.terms().len(), 2);
        assert!(rep.terms()[0].0.is_zero()); // log|1| = 0
        assert_eq!(rep.terms()[1].0.coefficient_of(2), Rational::one());
    }

    #[test]
    fn massey_value_for_the_default_configuration() {
        let ring = reference_ring();
        let v = massey_value(&ring, &cfg("2", "1")).unwrap();
        assert_eq!(format!("{v}"), "(log 2)/π");
        assert!(!v.is_zero());
        assert_eq!(
            massey_value_via_ring(&ring, &cfg("2", "1")).unwrap(),
            massey_value_via_cross_ratio(&cfg("2", "1")).unwrap()
        );
    }

    #[test]
    fn equal_moduli_give_zero() {
        let ring = reference_ring();
        let v = massey_value(&ring, &cfg("i", "1")).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn prime_decomposition_example() {
        let ring = reference_ring();
        // |3/2 / 5| = 3/10
        let v = massey_value(&ring, &cfg("3/2", "5")).unwrap();
        assert_eq!(v.coefficient_of(3), Rational::one());
        assert_eq!(v.coefficient_of(2), -Rational::one());
        assert_eq!(v.coefficient_of(5), -Rational::one());
    }

    #[test]
    fn antisymmetry_and_scaling_invariance() {
        let ring = reference_ring();
        let a = massey_value(&ring, &cfg("3", "7/2")).unwrap();
        let b = massey_value(&ring, &cfg("7/2", "3")).unwrap();
        assert_eq!(a, -b);
        // scale both points by any nonzero Gaussian rational
        let lam = g("-5/3+2i");
        let c = Configuration::new(g("3") * lam.clone(), g("7/2") * lam).unwrap();
        assert_eq!(massey_value(&ring, &c).unwrap(), a);
    }

    #[test]
    fn distinguishing_invariant_behavior() {
        // swapped points are not distinguished
        assert!(!configurations_distinguished(&cfg("2", "1"), &cfg("1", "2")).unwrap());
        // different prime content is
        assert!(configurations_distinguished(&cfg("2", "1"), &cfg("3", "1")).unwrap());
        // invariant zero cases are indistinguishable from each other
        assert!(!configurations_distinguished(&cfg("1", "i"), &cfg("1", "-1")).unwrap());
    }
}
