//! Intersection rings of iterated blow-ups of projective space.
//!
//! A ring is a validated model with zero differentials, a complex dimension,
//! an integration functional normalized on the point class, and a registry
//! of named divisor classes that is kept up to date through strict
//! transforms. Blowing up a point of an `n`-fold adjoins `E, …, E^{n-1}`;
//! blowing up a rational curve in a threefold adjoins `E` and the module
//! generator `G<name>` (the restriction generator times `E`), with
//! `E² = -[Z] + deg(N_Z)·G<name>` where `[Z]` is recovered from the curve's
//! intersection numbers through the duality pairing.

use indexmap::IndexMap;
use num::{One, Zero};
use thiserror::Error;

use crate::cbba::{Bidegree, CbbaModel, Element, ModelError, ValidatedModel, K};
use crate::linalg::{kernel_basis, solve, Matrix};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("projective space needs n >= 1, got {0}")]
    DimensionTooSmall(u32),
    #[error("point blow-ups need complex dimension >= 2")]
    PointInCurve,
    #[error("curve blow-ups are supported in complex dimension 3, got {0}")]
    CurveDimension(u32),
    #[error("curve blow-ups are supported for genus 0 centers, got genus {0}")]
    UnsupportedGenus(u32),
    #[error("unknown divisor `{0}` in pairing or multiplicity table")]
    UnknownDivisor(String),
    #[error("pairing table is not realized by any curve class: {0}")]
    PairingSolve(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("ring has complex dimension {0}, expected {1}")]
    WrongDimension(u32, u32),
    #[error("class is not real-valued")]
    NotReal,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A curve blow-up center described by its intersection numbers against the
/// registered divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCenter {
    pub name: String,
    pub genus: u32,
    /// divisor name -> intersection number of the divisor with the curve
    pub pairing: Vec<(String, i64)>,
}

impl CurveCenter {
    pub fn rational(name: &str, pairing: &[(&str, i64)]) -> Self {
        CurveCenter {
            name: name.to_string(),
            genus: 0,
            pairing: pairing.iter().map(|(s, v)| (s.to_string(), *v)).collect(),
        }
    }
}

/// Data recorded when a curve center is blown up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub center: CurveCenter,
    /// degree of the ambient first Chern class restricted to the curve
    pub ambient_c1_degree: i64,
    /// `ambient_c1_degree - (2 - 2·genus)`
    pub normal_bundle_degree: i64,
    /// the solved curve class, as coefficients on named basis elements
    pub curve_class: Vec<(String, K)>,
}

#[derive(Clone)]
pub struct IntersectionRing {
    model: ValidatedModel,
    complex_dim: u32,
    top: usize,
    divisors: IndexMap<String, Vec<K>>,
    classes: IndexMap<String, Vec<K>>,
    c1: Vec<K>,
    curves: Vec<CurveRecord>,
}

impl IntersectionRing {
    pub fn model(&self) -> &ValidatedModel {
        &self.model
    }

    pub fn complex_dim(&self) -> u32 {
        self.complex_dim
    }

    pub fn curve_records(&self) -> &[CurveRecord] {
        &self.curves
    }

    pub fn divisor_names(&self) -> Vec<&str> {
        self.divisors.keys().map(|s| s.as_str()).collect()
    }

    pub fn divisor(&self, name: &str) -> Result<Element, BlowupError> {
        self.divisors
            .get(name)
            .map(|v| self.model.element_from_coeffs(v.clone()))
            .ok_or_else(|| BlowupError::UnknownDivisor(name.to_string()))
    }

    /// A registered class of any bidegree (divisors included).
    pub fn class(&self, name: &str) -> Result<Element, BlowupError> {
        if let Some(v) = self.divisors.get(name) {
            return Ok(self.model.element_from_coeffs(v.clone()));
        }
        self.classes
            .get(name)
            .map(|v| self.model.element_from_coeffs(v.clone()))
            .ok_or_else(|| BlowupError::UnknownDivisor(name.to_string()))
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.keys().map(|s| s.as_str()).collect()
    }

    pub fn register_class(&mut self, name: &str, e: &Element) -> Result<(), BlowupError> {
        if self.divisors.contains_key(name) || self.classes.contains_key(name) {
            return Err(BlowupError::DuplicateName(name.to_string()));
        }
        self.classes.insert(name.to_string(), e.coeffs().to_vec());
        Ok(())
    }

    pub fn c1(&self) -> Element {
        self.model.element_from_coeffs(self.c1.clone())
    }

    pub fn point_class(&self) -> Element {
        self.model.basis_element(self.top)
    }

    /// Integral of a class: the coefficient on the point class. Classes
    /// with no top-degree part integrate to zero.
    pub fn integrate(&self, e: &Element) -> Result<Rational, BlowupError> {
        let c = &e.coeffs()[self.top];
        if !c.is_real() {
            return Err(BlowupError::NotReal);
        }
        Ok(c.re.clone())
    }

    /// Integral of a triple product of `(1,1)`-classes on a threefold.
    pub fn integrate_triple(
        &self,
        a: &Element,
        b: &Element,
        c: &Element,
    ) -> Result<Rational, BlowupError> {
        if self.complex_dim != 3 {
            return Err(BlowupError::WrongDimension(self.complex_dim, 3));
        }
        let prod = a.product(b)?.product(c)?;
        self.integrate(&prod)
    }

    /// Pairing matrix between the `(p,q)` and `(n-p, n-q)` graded pieces.
    pub fn duality_pairing_matrix(&self, p: i32, q: i32) -> Matrix<K> {
        let n = self.complex_dim as i32;
        let rows = self.model.piece_indices(Bidegree::new(p, q));
        let cols = self.model.piece_indices(Bidegree::new(n - p, n - q));
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            let prod = self
                .model
                .basis_element(rows[i])
                .product(&self.model.basis_element(cols[j]))
                .expect("same model");
            prod.coeffs()[self.top].clone()
        })
    }

    /// Nondegeneracy of every complementary-degree pairing.
    pub fn poincare_nondegenerate(&self) -> bool {
        let n = self.complex_dim as i32;
        for p in 0..=n {
            for q in 0..=n {
                let m = self.duality_pairing_matrix(p, q);
                if m.rows() != m.cols() || m.rank() != m.rows() {
                    return false;
                }
            }
        }
        true
    }

    /// Dimension of the `(p,q)` graded piece.
    pub fn hodge_dim(&self, p: i32, q: i32) -> usize {
        self.model.piece_indices(Bidegree::new(p, q)).len()
    }

    fn divisor_or_err(&self, name: &str) -> Result<Vec<K>, BlowupError> {
        self.divisors
            .get(name)
            .cloned()
            .ok_or_else(|| BlowupError::UnknownDivisor(name.to_string()))
    }

    /// The cohomology ring of `P^n`: basis `1, G, …, G^n`, `∫ G^n = 1`,
    /// `c1 = (n+1)·G`.
    pub fn projective_space(n: u32) -> Result<IntersectionRing, BlowupError> {
        if n < 1 {
            return Err(BlowupError::DimensionTooSmall(n));
        }
        let ids: Vec<String> =
            (0..=n).map(|k| if k == 0 { "1".into() } else if k == 1 { "G".into() } else { format!("G^{k}") }).collect();
        let mut b = CbbaModel::builder();
        for (k, id) in ids.iter().enumerate() {
            b = b.basis_element(id, k as i32, k as i32);
        }
        b = b.unit("1");
        for i in 1..=n as usize {
            for j in i..=n as usize {
                if i + j <= n as usize {
                    b = b.product(&ids[i], &ids[j], vec![(ids[i + j].as_str(), K::one())]);
                }
            }
        }
        let model = b.build()?.validated().map_err(|r| {
            BlowupError::Model(ModelError::Construction(format!("projective space model invalid: {r}")))
        })?;
        let dim = model.dim();
        let mut divisors = IndexMap::new();
        let mut g = vec![K::zero(); dim];
        g[1] = K::one();
        divisors.insert("G".to_string(), g.clone());
        let c1 = g.iter().map(|c| c * &K::from_int(n as i64 + 1)).collect();
        Ok(IntersectionRing {
            model,
            complex_dim: n,
            top: dim - 1,
            divisors,
            classes: IndexMap::new(),
            c1,
            curves: Vec::new(),
        })
    }

    /// Blows up a point, adjoining `name, name^2, …, name^{n-1}` with
    /// `name^n = (-1)^{n-1}·[pt]`. Strict transforms of registered divisors
    /// through the point are corrected by the multiplicity table.
    pub fn blow_up_point(&self, name: &str) -> Result<IntersectionRing, BlowupError> {
        self.blow_up_point_with(name, &[])
    }

    pub fn blow_up_point_with(
        &self,
        name: &str,
        multiplicities: &[(&str, i64)],
    ) -> Result<IntersectionRing, BlowupError> {
        let n = self.complex_dim;
        if n < 2 {
            return Err(BlowupError::PointInCurve);
        }
        if self.model.index_of(name).is_some() {
            return Err(BlowupError::DuplicateName(name.to_string()));
        }
        for (d, _) in multiplicities {
            self.divisor_or_err(d)?;
        }
        let old = self.model.raw();
        let old_dim = old.dim();
        let power_id =
            |k: usize| if k == 1 { name.to_string() } else { format!("{name}^{k}") };

        let mut b = CbbaModel::builder();
        for i in 0..old_dim {
            let d = old.bidegree(i);
            b = b.basis_element(old.id(i), d.p, d.q);
        }
        for k in 1..n as usize {
            b = b.basis_element(&power_id(k), k as i32, k as i32);
        }
        b = b.unit(old.id(old.unit_index()));
        b = copy_products(b, old);

        // powers of the exceptional class
        let top_id = old.id(self.top).to_string();
        let parity = if n % 2 == 0 { -K::one() } else { K::one() }; // (-1)^{n-1}
        for i in 1..n as usize {
            for j in i..n as usize {
                let sum = i + j;
                if sum < n as usize {
                    b = b.product(&power_id(i), &power_id(j), vec![(power_id(sum).as_str(), K::one())]);
                } else if sum == n as usize {
                    b = b.product(&power_id(i), &power_id(j), vec![(top_id.as_str(), parity.clone())]);
                }
                // higher powers vanish
            }
        }
        // old positive-degree classes restrict to zero on a point
        // (no product entries needed: missing entries are zero)

        let model = b.build()?.validated().map_err(|r| {
            BlowupError::Model(ModelError::Construction(format!("point blow-up invalid: {r}")))
        })?;

        let extend = |v: &[K]| -> Vec<K> {
            let mut w = v.to_vec();
            w.resize(model.dim(), K::zero());
            w
        };
        let e_index = model.index_of(name).expect("just added");
        let mut divisors = IndexMap::new();
        for (d, v) in &self.divisors {
            let mut w = extend(v);
            if let Some((_, m)) = multiplicities.iter().find(|(dn, _)| dn == d) {
                w[e_index] = w[e_index].clone() - K::from_int(*m);
            }
            divisors.insert(d.clone(), w);
        }
        let mut e_vec = vec![K::zero(); model.dim()];
        e_vec[e_index] = K::one();
        divisors.insert(name.to_string(), e_vec.clone());

        let mut c1 = extend(&self.c1);
        c1[e_index] = c1[e_index].clone() - K::from_int(n as i64 - 1);

        let classes = self
            .classes
            .iter()
            .map(|(k, v)| (k.clone(), extend(v)))
            .collect();

        Ok(IntersectionRing {
            top: model.index_of(&top_id).expect("top class survives"),
            model,
            complex_dim: n,
            divisors,
            classes,
            c1,
            curves: self.curves.clone(),
        })
    }

    /// Blows up a rational curve in a threefold. The curve class is solved
    /// from the pairing table through the duality pairing; the normal
    /// bundle degree comes from adjunction against the tracked `c1`.
    pub fn blow_up_curve(
        &self,
        center: &CurveCenter,
        multiplicities: &[(&str, i64)],
    ) -> Result<IntersectionRing, BlowupError> {
        if self.complex_dim != 3 {
            return Err(BlowupError::CurveDimension(self.complex_dim));
        }
        if center.genus != 0 {
            return Err(BlowupError::UnsupportedGenus(center.genus));
        }
        let name = &center.name;
        if self.model.index_of(name).is_some() {
            return Err(BlowupError::DuplicateName(name.clone()));
        }
        for (d, _) in multiplicities {
            self.divisor_or_err(d)?;
        }

        // solve for the curve class in H^{2,2} from the pairing numbers
        let piece22 = self.model.piece_indices(Bidegree::new(2, 2));
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (dname, value) in &center.pairing {
            let dvec = self.divisor_or_err(dname)?;
            let d_el = self.model.element_from_coeffs(dvec);
            let row: Vec<K> = piece22
                .iter()
                .map(|&w| {
                    let prod = d_el.product(&self.model.basis_element(w)).expect("same model");
                    prod.coeffs()[self.top].clone()
                })
                .collect();
            rows.push(row);
            rhs.push(K::from_int(*value));
        }
        if rows.len() < piece22.len() {
            return Err(BlowupError::PairingSolve(
                "pairing table does not cover a spanning set of divisors".into(),
            ));
        }
        let mat = Matrix::from_rows(rows);
        let sol = solve(&mat, &rhs)
            .ok_or_else(|| BlowupError::PairingSolve("inconsistent intersection numbers".into()))?;
        if !kernel_basis(&mat).is_zero() {
            return Err(BlowupError::PairingSolve("curve class is underdetermined".into()));
        }
        let mut curve_class = vec![K::zero(); self.model.dim()];
        for (k, &w) in piece22.iter().enumerate() {
            curve_class[w] = sol[k].clone();
        }
        let curve_el = self.model.element_from_coeffs(curve_class.clone());

        let c1_deg_rat = self.integrate(&self.c1().product(&curve_el)?)?;
        assert!(c1_deg_rat.is_integer(), "c1 degree must be integral");
        let ambient_c1_degree = rational_to_i64(&c1_deg_rat);
        let normal_bundle_degree = ambient_c1_degree - (2 - 2 * center.genus as i64);

        let old = self.model.raw();
        let g_id = format!("G{name}");
        let mut b = CbbaModel::builder();
        for i in 0..old.dim() {
            let d = old.bidegree(i);
            b = b.basis_element(old.id(i), d.p, d.q);
        }
        b = b.basis_element(name, 1, 1);
        b = b.basis_element(&g_id, 2, 2);
        b = b.unit(old.id(old.unit_index()));
        b = copy_products(b, old);

        let top_id = old.id(self.top).to_string();
        // E² = -[Z] + deg(N)·gE
        let mut e_sq: Vec<(String, K)> = curve_class
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (old.id(i).to_string(), -c.clone()))
            .collect();
        e_sq.push((g_id.clone(), K::from_int(normal_bundle_degree)));
        let e_sq_refs: Vec<(&str, K)> = e_sq.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
        b = b.product(name, name, e_sq_refs);
        // E·gE = -[pt]
        b = b.product(name, &g_id, vec![(top_id.as_str(), -K::one())]);
        // old (1,1)-classes: D·E = (∫ D·[Z])·gE; higher old degrees die
        for i in old.piece_indices(Bidegree::new(1, 1)) {
            let d_el = self.model.basis_element(i);
            let pairing = self.integrate(&d_el.product(&curve_el)?)?;
            if !pairing.is_zero() {
                b = b.product(
                    old.id(i),
                    name,
                    vec![(g_id.as_str(), K::from_rational(pairing))],
                );
            }
        }

        let model = b.build()?.validated().map_err(|r| {
            BlowupError::Model(ModelError::Construction(format!("curve blow-up invalid: {r}")))
        })?;

        let extend = |v: &[K]| -> Vec<K> {
            let mut w = v.to_vec();
            w.resize(model.dim(), K::zero());
            w
        };
        let e_index = model.index_of(name).expect("just added");
        let mut divisors = IndexMap::new();
        for (d, v) in &self.divisors {
            let mut w = extend(v);
            if let Some((_, m)) = multiplicities.iter().find(|(dn, _)| dn == d) {
                w[e_index] = w[e_index].clone() - K::from_int(*m);
            }
            divisors.insert(d.clone(), w);
        }
        let mut e_vec = vec![K::zero(); model.dim()];
        e_vec[e_index] = K::one();
        divisors.insert(name.clone(), e_vec);

        let mut c1 = extend(&self.c1);
        c1[e_index] = c1[e_index].clone() - K::one();

        let classes = self
            .classes
            .iter()
            .map(|(k, v)| (k.clone(), extend(v)))
            .collect();
        let mut curves = self.curves.clone();
        let named_class: Vec<(String, K)> = curve_class
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (old.id(i).to_string(), c.clone()))
            .collect();
        curves.push(CurveRecord {
            center: center.clone(),
            ambient_c1_degree,
            normal_bundle_degree,
            curve_class: named_class,
        });

        Ok(IntersectionRing {
            top: model.index_of(&top_id).expect("top class survives"),
            model,
            complex_dim: 3,
            divisors,
            classes,
            c1,
            curves,
        })
    }

    /// The full multiplication table `H^{1,1} × H^{1,1} -> H^{2,2}` over the
    /// registered divisors.
    pub fn multiplication_table(&self) -> MultiplicationTable {
        let names: Vec<String> = self.divisors.keys().cloned().collect();
        let mut entries = Vec::new();
        for a in &names {
            let mut row = Vec::new();
            for b in &names {
                let prod = self
                    .divisor(a)
                    .and_then(|x| Ok(x.product(&self.divisor(b)?)?))
                    .expect("registered divisors multiply");
                row.push(prod);
            }
            entries.push(row);
        }
        MultiplicationTable { names, entries }
    }
}

fn rational_to_i64(r: &Rational) -> i64 {
    use num::ToPrimitive;
    r.to_integer().to_i64().expect("intersection number fits i64")
}

/// Re-declares every product of non-unit basis elements of `old` on a
/// builder (entries `(i,j)` with `i <= j`; mirrors are filled by the
/// builder).
fn copy_products(mut b: crate::cbba::ModelBuilder, old: &CbbaModel) -> crate::cbba::ModelBuilder {
    for i in 0..old.dim() {
        for j in i..old.dim() {
            if i == old.unit_index() || j == old.unit_index() {
                continue;
            }
            let prod = old.basis_product(i, j);
            if prod.is_empty() {
                continue;
            }
            let terms: Vec<(String, K)> =
                prod.iter().map(|(t, c)| (old.id(*t).to_string(), c.clone())).collect();
            let refs: Vec<(&str, K)> = terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            b = b.product(old.id(i), old.id(j), refs);
        }
    }
    b
}

pub struct MultiplicationTable {
    pub names: Vec<String>,
    pub entries: Vec<Vec<Element>>,
}

impl MultiplicationTable {
    pub fn entry(&self, a: &str, b: &str) -> Option<&Element> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(&self.entries[i][j])
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.names.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j].coeffs() == self.entries[j][i].coeffs()))
    }

    /// Tab-separated rendering with a header row and one row per divisor.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("*");
        for n in &self.names {
            out.push('\t');
            out.push_str(n);
        }
        out.push('\n');
        for (i, a) in self.names.iter().enumerate() {
            out.push_str(a);
            for j in 0..self.names.len() {
                out.push('\t');
                out.push_str(&self.entries[i][j].to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Markdown rendering in the layout of a symmetric intersection table.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| * |");
        for n in &self.names {
            out.push_str(&format!(" {n} |"));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in &self.names {
            out.push_str("---|");
        }
        out.push('\n');
        for (i, a) in self.names.iter().enumerate() {
            out.push_str(&format!("| {a} |"));
            for j in 0..self.names.len() {
                out.push_str(&format!(" {} |", self.entries[i][j]));
            }
            out.push('\n');
        }
        out
    }
}

/// The reference threefold: `P^3` blown up at three points, then at the
/// strict transform of the line through the first two, then at the strict
/// transforms of two lines joining the third point to that line.
///
/// Registers the divisors `G, E_P, E_Q, E_R, E_C, E_L1, E_L2`, the
/// hyperplane strict transforms `A_1, A_2` and the fiber classes
/// `F_1 = E_C·E_L1`, `F_2 = E_C·E_L2`.
pub fn reference_ring() -> IntersectionRing {
    let ring = IntersectionRing::projective_space(3).expect("n = 3");
    let ring = ring.blow_up_point("E_P").expect("point blow-up");
    let ring = ring.blow_up_point("E_Q").expect("point blow-up");
    let ring = ring.blow_up_point("E_R").expect("point blow-up");
    // the line through P and Q meets a generic plane once and the first two
    // exceptional divisors once each
    let c = CurveCenter::rational("E_C", &[("G", 1), ("E_P", 1), ("E_Q", 1), ("E_R", 0)]);
    let ring = ring.blow_up_curve(&c, &[]).expect("curve blow-up");
    let l1 = CurveCenter::rational(
        "E_L1",
        &[("G", 1), ("E_P", 0), ("E_Q", 0), ("E_R", 1), ("E_C", 1)],
    );
    let ring = ring.blow_up_curve(&l1, &[]).expect("curve blow-up");
    let l2 = CurveCenter::rational(
        "E_L2",
        &[("G", 1), ("E_P", 0), ("E_Q", 0), ("E_R", 1), ("E_C", 1), ("E_L1", 0)],
    );
    let mut ring = ring.blow_up_curve(&l2, &[]).expect("curve blow-up");

    let g = ring.divisor("G").expect("registered");
    let er = ring.divisor("E_R").expect("registered");
    let ec = ring.divisor("E_C").expect("registered");
    for (a_name, l_name, f_name) in [("A_1", "E_L1", "F_1"), ("A_2", "E_L2", "F_2")] {
        let el = ring.divisor(l_name).expect("registered");
        let a = g.sub(&er).expect("same model").sub(&el).expect("same model");
        ring.register_class(a_name, &a).expect("fresh name");
        let f = ec.product(&el).expect("same model");
        ring.register_class(f_name, &f).expect("fresh name");
    }
    ring
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_int;

    #[test]
    fn projective_space_basics() {
        let p3 = IntersectionRing::projective_space(3).unwrap();
        assert_eq!(p3.hodge_dim(2, 2), 1);
        let g = p3.divisor("G").unwrap();
        let g3 = g.product(&g).unwrap().product(&g).unwrap();
        assert_eq!(p3.integrate(&g3).unwrap(), rational_int(1));
        let g4 = g3.product(&g).unwrap();
        assert!(g4.is_zero());
        assert_eq!(p3.c1().coeffs()[1], K::from_int(4));
        assert!(IntersectionRing::projective_space(0).is_err());
    }

    #[test]
    fn poincare_duality_for_small_projective_spaces() {
        for n in 2..=4 {
            let ring = IntersectionRing::projective_space(n).unwrap();
            assert!(ring.poincare_nondegenerate(), "P^{n}");
        }
    }

    #[test]
    fn point_blow_up_in_p3() {
        let ring = IntersectionRing::projective_space(3).unwrap().blow_up_point("E_P").unwrap();
        assert_eq!(ring.hodge_dim(1, 1), 2);
        let g = ring.divisor("G").unwrap();
        let e = ring.divisor("E_P").unwrap();
        assert!(g.product(&e).unwrap().is_zero());
        // E_P³ is the point class
        let e3 = e.product(&e).unwrap().product(&e).unwrap();
        assert_eq!(e3.coeffs(), ring.point_class().coeffs());
        assert_eq!(ring.integrate(&e3).unwrap(), rational_int(1));
        assert!(ring.poincare_nondegenerate());
        // c1 = 4G - 2E
        let c1 = ring.c1();
        assert_eq!(c1.coeffs()[ring.model().index_of("E_P").unwrap()], K::from_int(-2));
    }

    #[test]
    fn exceptional_divisors_of_distinct_points_are_disjoint() {
        let ring = IntersectionRing::projective_space(3)
            .unwrap()
            .blow_up_point("E_P")
            .unwrap()
            .blow_up_point("E_Q")
            .unwrap();
        let ep = ring.divisor("E_P").unwrap();
        let eq = ring.divisor("E_Q").unwrap();
        assert!(ep.product(&eq).unwrap().is_zero());
        assert!(ring.poincare_nondegenerate());
    }

    #[test]
    fn surface_point_blow_up_has_self_intersection_minus_one() {
        let ring = IntersectionRing::projective_space(2).unwrap().blow_up_point("E").unwrap();
        let e = ring.divisor("E").unwrap();
        assert_eq!(ring.integrate(&e.product(&e).unwrap()).unwrap(), rational_int(-1));
    }

    #[test]
    fn disjoint_point_blow_ups_commute() {
        let a = IntersectionRing::projective_space(3)
            .unwrap()
            .blow_up_point("E_P")
            .unwrap()
            .blow_up_point("E_Q")
            .unwrap();
        let b = IntersectionRing::projective_space(3)
            .unwrap()
            .blow_up_point("E_Q")
            .unwrap()
            .blow_up_point("E_P")
            .unwrap();
        // identical structure constants under the registry naming
        for x in ["G", "E_P", "E_Q"] {
            for y in ["G", "E_P", "E_Q"] {
                let pa = a.divisor(x).unwrap().product(&a.divisor(y).unwrap()).unwrap();
                let pb = b.divisor(x).unwrap().product(&b.divisor(y).unwrap()).unwrap();
                // compare by integrating against every third divisor
                for z in ["G", "E_P", "E_Q"] {
                    let ia = a.integrate(&pa.product(&a.divisor(z).unwrap()).unwrap()).unwrap();
                    let ib = b.integrate(&pb.product(&b.divisor(z).unwrap()).unwrap()).unwrap();
                    assert_eq!(ia, ib, "{x}·{y}·{z}");
                }
            }
        }
    }

    #[test]
    fn strict_transform_multiplicities_update_the_registry() {
        // blow up a point lying on the registered plane: G ↦ G - E, and the
        // strict transform has vanishing triple self-intersection
        let ring = IntersectionRing::projective_space(3)
            .unwrap()
            .blow_up_point_with("E", &[("G", 1)])
            .unwrap();
        let g = ring.divisor("G").unwrap();
        assert_eq!(ring.integrate_triple(&g, &g, &g).unwrap(), rational_int(0));
        let e = ring.divisor("E").unwrap();
        assert_eq!(ring.integrate_triple(&e, &e, &e).unwrap(), rational_int(1));

        // same for a line inside the plane: (G - E)³ = 1 - 3·0 + 3·(-1) - (-2)
        let ring = IntersectionRing::projective_space(3).unwrap();
        let line = CurveCenter::rational("E", &[("G", 1)]);
        let ring = ring.blow_up_curve(&line, &[("G", 1)]).unwrap();
        let g = ring.divisor("G").unwrap();
        let e = ring.divisor("E").unwrap();
        assert_eq!(ring.integrate_triple(&e, &e, &e).unwrap(), rational_int(-2));
        assert_eq!(ring.integrate_triple(&g, &g, &g).unwrap(), rational_int(0));
    }

    #[test]
    fn curve_disjoint_from_all_divisors_has_zero_mixed_products() {
        let ring = IntersectionRing::projective_space(3)
            .unwrap()
            .blow_up_point("E_P")
            .unwrap();
        let c = CurveCenter::rational("E_N", &[("G", 0), ("E_P", 0)]);
        let ring = ring.blow_up_curve(&c, &[]).unwrap();
        let e = ring.divisor("E_N").unwrap();
        for d in ["G", "E_P"] {
            assert!(ring.divisor(d).unwrap().product(&e).unwrap().is_zero());
        }
        // the curve class is zero, so E² = deg(N)·gE only
        assert!(ring.curve_records()[0].curve_class.is_empty());
    }

    #[test]
    fn curve_blow_up_rejects_bad_input() {
        let p2 = IntersectionRing::projective_space(2).unwrap();
        let c = CurveCenter::rational("E_C", &[("G", 1)]);
        assert!(matches!(p2.blow_up_curve(&c, &[]), Err(BlowupError::CurveDimension(2))));

        let p3 = IntersectionRing::projective_space(3).unwrap();
        let mut g1 = CurveCenter::rational("E_C", &[("G", 1)]);
        g1.genus = 1;
        assert!(matches!(p3.blow_up_curve(&g1, &[]), Err(BlowupError::UnsupportedGenus(1))));
    }

    #[test]
    fn betti_numbers_accumulate_through_blow_ups() {
        let ring = reference_ring();
        // H^{1,1}: 1 from P³ + 3 points + 3 curves
        assert_eq!(ring.hodge_dim(1, 1), 7);
        // H^{2,2}: 1 from P³ + 3 points + 3 curves
        assert_eq!(ring.hodge_dim(2, 2), 7);
        assert_eq!(ring.hodge_dim(0, 0), 1);
        assert_eq!(ring.hodge_dim(3, 3), 1);
        assert_eq!(ring.model().dim(), 16);
    }

    #[test]
    fn each_blow_up_adds_the_cohomology_of_its_center() {
        // points in a threefold contribute one class in each of (1,1) and
        // (2,2); rational curves contribute one in each as well, but through
        // E and the module generator
        let p3 = IntersectionRing::projective_space(3).unwrap();
        let after_point = p3.blow_up_point("E_P").unwrap();
        assert_eq!(after_point.hodge_dim(1, 1), p3.hodge_dim(1, 1) + 1);
        assert_eq!(after_point.hodge_dim(2, 2), p3.hodge_dim(2, 2) + 1);
        assert_eq!(after_point.hodge_dim(3, 3), p3.hodge_dim(3, 3));

        let c = CurveCenter::rational("E_C", &[("G", 1), ("E_P", 0)]);
        let after_curve = after_point.blow_up_curve(&c, &[]).unwrap();
        assert_eq!(after_curve.hodge_dim(1, 1), after_point.hodge_dim(1, 1) + 1);
        assert_eq!(after_curve.hodge_dim(2, 2), after_point.hodge_dim(2, 2) + 1);
        assert_eq!(after_curve.hodge_dim(3, 3), after_point.hodge_dim(3, 3));
        assert!(after_curve.poincare_nondegenerate());
    }
}
