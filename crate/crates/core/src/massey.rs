//! Triple Massey products on validated models.
//!
//! Two flavors share one code path: the ordinary product solves the defining
//! system through `d` and lands in de Rham cohomology, the secondary (ABC)
//! product solves through `i·del·delbar`, takes Bott-Chern classes in and
//! returns an Aeppli coset. Results are cosets: a representative class
//! together with the indeterminacy subspace `[α]·H + H·[γ]` it is taken
//! modulo.

use num::{One, Zero};
use thiserror::Error;

use crate::cbba::{
    Bidegree, CohomologyGroup, Degree, Element, ModelError, Theory, ValidatedModel, K,
};
use crate::linalg::{solve, vec_sub, Matrix, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasseyFlavor {
    Ordinary,
    Abc,
}

impl MasseyFlavor {
    /// Cohomology containing the inputs.
    pub fn input_theory(&self) -> Theory {
        match self {
            MasseyFlavor::Ordinary => Theory::DeRham,
            MasseyFlavor::Abc => Theory::BottChern,
        }
    }

    /// Cohomology containing the output coset.
    pub fn output_theory(&self) -> Theory {
        match self {
            MasseyFlavor::Ordinary => Theory::DeRham,
            MasseyFlavor::Abc => Theory::Aeppli,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasseyError {
    #[error("input `{0}` is not a cocycle for this flavor")]
    NotClosed(&'static str),
    #[error("ABC inputs must have pure bidegree")]
    NotPureBidegree,
    #[error("ordinary inputs must have pure total degree")]
    NotPureTotalDegree,
    #[error("product class obstruction: left nonzero: {left}, right nonzero: {right}")]
    Undefined { left: bool, right: bool },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The subspace `[alpha]·H + H·[gamma]` inside one cohomology group.
#[derive(Clone)]
pub struct IndeterminacySubspace {
    target: CohomologyGroup,
    subspace: Subspace<K>,
    /// chain-level spanning elements, kept for perturbation tests
    chain_span: Vec<Element>,
}

impl IndeterminacySubspace {
    pub fn target(&self) -> &CohomologyGroup {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn subspace(&self) -> &Subspace<K> {
        &self.subspace
    }

    pub fn chain_span(&self) -> &[Element] {
        &self.chain_span
    }

    pub fn contains_coords(&self, coords: &[K]) -> bool {
        self.subspace.contains(coords)
    }

    pub fn contains_class_of(&self, e: &Element) -> Result<bool, ModelError> {
        Ok(self.subspace.contains(&self.target.project(e)?))
    }
}

/// A Massey product value: a class modulo its indeterminacy.
#[derive(Clone)]
pub struct MasseyCoset {
    flavor: MasseyFlavor,
    target: CohomologyGroup,
    representative_chain: Element,
    representative_coords: Vec<K>,
    indeterminacy: IndeterminacySubspace,
}

impl std::fmt::Debug for MasseyCoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MasseyCoset({:?}, rep {:?}, indeterminacy dim {})",
            self.flavor,
            self.representative_chain,
            self.indeterminacy.dim()
        )
    }
}

impl MasseyCoset {
    pub fn flavor(&self) -> MasseyFlavor {
        self.flavor
    }

    pub fn target(&self) -> &CohomologyGroup {
        &self.target
    }

    /// A chain-level representative of the coset.
    pub fn representative(&self) -> &Element {
        &self.representative_chain
    }

    /// Coordinates of the representative class in the target group basis.
    pub fn coords(&self) -> &[K] {
        &self.representative_coords
    }

    pub fn indeterminacy(&self) -> &IndeterminacySubspace {
        &self.indeterminacy
    }

    pub fn is_trivial(&self) -> bool {
        self.indeterminacy.contains_coords(&self.representative_coords)
    }

    /// Coset equality: representatives differ by an indeterminacy element.
    pub fn same_coset(&self, other: &MasseyCoset) -> bool {
        self.flavor == other.flavor
            && self.target.degree() == other.target.degree()
            && self
                .indeterminacy
                .contains_coords(&vec_sub(&self.representative_coords, &other.representative_coords))
    }
}

fn check_abc_input(e: &Element, name: &'static str) -> Result<Bidegree, MasseyError> {
    if e.is_zero() {
        // zero is a cocycle of every bidegree; use (0,0) as placeholder
        return Ok(e.bidegree().unwrap_or(Bidegree::new(0, 0)));
    }
    let bd = e.bidegree().ok_or(MasseyError::NotPureBidegree)?;
    if !e.is_del_closed() || !e.is_delbar_closed() {
        return Err(MasseyError::NotClosed(name));
    }
    Ok(bd)
}

fn check_ordinary_input(e: &Element, name: &'static str) -> Result<i32, MasseyError> {
    if e.is_zero() {
        return Ok(e.total_degree().unwrap_or(0));
    }
    let k = e.total_degree().ok_or(MasseyError::NotPureTotalDegree)?;
    if !e.is_d_closed() {
        return Err(MasseyError::NotClosed(name));
    }
    Ok(k)
}

/// Operator matrix of `i·del·delbar`.
fn i_deldelbar_matrix(m: &ValidatedModel) -> Matrix<K> {
    let dd = m.del_matrix().mul(&m.delbar_matrix());
    Matrix::from_fn(m.dim(), m.dim(), |r, c| K::i() * dd[(r, c)].clone())
}

/// Solves `op(x) = rhs` and restricts the solution to one pure piece.
fn solve_primitive(
    m: &ValidatedModel,
    op: &Matrix<K>,
    rhs: &Element,
    piece: PieceSelector,
) -> Option<Element> {
    let x = solve(op, rhs.coeffs())?;
    let x = m.element_from_coeffs(x);
    Some(match piece {
        PieceSelector::Pure(bd) => x.component(bd),
        PieceSelector::Total(k) => {
            let coeffs = x
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| if m.bidegree(i).total() == k { c.clone() } else { K::zero() })
                .collect();
            m.element_from_coeffs(coeffs)
        }
    })
}

#[derive(Clone, Copy)]
enum PieceSelector {
    Pure(Bidegree),
    Total(i32),
}

/// `[alpha]·H + H·[gamma]` in the flavor's output cohomology at
/// `target_degree`. `alpha` and `gamma` must be cocycles of the flavor's
/// input cohomology.
pub fn indeterminacy(
    m: &ValidatedModel,
    alpha: &Element,
    gamma: &Element,
    flavor: MasseyFlavor,
    target_degree: Degree,
) -> Result<IndeterminacySubspace, MasseyError> {
    match flavor {
        MasseyFlavor::Abc => {
            check_abc_input(alpha, "alpha")?;
            check_abc_input(gamma, "gamma")?;
        }
        MasseyFlavor::Ordinary => {
            check_ordinary_input(alpha, "alpha")?;
            check_ordinary_input(gamma, "gamma")?;
        }
    }
    let theory = flavor.output_theory();
    let target = m.cohomology(theory, target_degree)?;
    let mut span: Vec<Vec<K>> = Vec::new();
    let mut chain_span: Vec<Element> = Vec::new();

    let mut extend = |factor: &Element, on_left: bool| -> Result<(), MasseyError> {
        if factor.is_zero() {
            return Ok(());
        }
        // complementary degree of the cofactor
        let groups: Vec<CohomologyGroup> = match (flavor, target_degree) {
            (MasseyFlavor::Abc, Degree::Pure(t)) => {
                let fb = factor.bidegree().expect("checked pure");
                let cd = Bidegree::new(t.p - fb.p, t.q - fb.q);
                vec![m.cohomology(theory, Degree::Pure(cd))?]
            }
            (MasseyFlavor::Ordinary, Degree::Total(t)) => {
                let k = factor.total_degree().expect("checked pure");
                vec![m.cohomology(theory, Degree::Total(t - k))?]
            }
            // mixed signatures: enumerate all bidegrees of the right total
            (MasseyFlavor::Abc, Degree::Total(t)) => {
                let fb = factor.bidegree().expect("checked pure");
                let mut gs = Vec::new();
                for p in 0..=(t - fb.total()).max(0) {
                    let q = t - fb.total() - p;
                    if q >= 0 {
                        gs.push(m.cohomology(theory, Degree::Pure(Bidegree::new(p, q)))?);
                    }
                }
                gs
            }
            (MasseyFlavor::Ordinary, Degree::Pure(t)) => {
                let k = factor.total_degree().expect("checked pure");
                vec![m.cohomology(theory, Degree::Total(t.total() - k))?]
            }
        };
        for g in groups {
            for h in g.representatives() {
                let prod = if on_left { factor.product(&h)? } else { h.product(factor)? };
                if prod.is_zero() {
                    continue;
                }
                let coords = target.project(&prod)?;
                span.push(coords);
                chain_span.push(prod);
            }
        }
        Ok(())
    };

    extend(alpha, true)?;
    extend(gamma, false)?;

    let subspace = Subspace::from_vectors(target.dim(), span);
    Ok(IndeterminacySubspace { target, subspace, chain_span })
}

/// The secondary triple product `⟨alpha, beta, gamma⟩`: with
/// `alpha·beta = i del delbar x` and `beta·gamma = i del delbar y`, the
/// class of `alpha·y - x·gamma` in Aeppli cohomology modulo indeterminacy.
pub fn triple_abc_massey(
    m: &ValidatedModel,
    alpha: &Element,
    beta: &Element,
    gamma: &Element,
) -> Result<MasseyCoset, MasseyError> {
    let da = check_abc_input(alpha, "alpha")?;
    let db = check_abc_input(beta, "beta")?;
    let dg = check_abc_input(gamma, "gamma")?;

    let op = i_deldelbar_matrix(m);
    let ab = alpha.product(beta)?;
    let bg = beta.product(gamma)?;
    let x = solve_primitive(m, &op, &ab, PieceSelector::Pure(da + db + Bidegree::new(-1, -1)));
    let y = solve_primitive(m, &op, &bg, PieceSelector::Pure(db + dg + Bidegree::new(-1, -1)));
    let (x, y) = match (x, y) {
        (Some(x), Some(y)) => (x, y),
        (x, y) => return Err(MasseyError::Undefined { left: x.is_none(), right: y.is_none() }),
    };

    let rep = alpha.product(&y)?.sub(&x.product(gamma)?)?;
    let target_degree = Degree::Pure(da + db + dg + Bidegree::new(-1, -1));
    let indet = indeterminacy(m, alpha, gamma, MasseyFlavor::Abc, target_degree)?;
    let coords = indet.target.project(&rep)?;
    Ok(MasseyCoset {
        flavor: MasseyFlavor::Abc,
        target: indet.target.clone(),
        representative_chain: rep,
        representative_coords: coords,
        indeterminacy: indet,
    })
}

/// The ordinary triple product: with `alpha·beta = d x` and
/// `beta·gamma = d y`, the class of `(-1)^{|alpha|} alpha·y - x·gamma` in de
/// Rham cohomology modulo indeterminacy.
pub fn triple_massey(
    m: &ValidatedModel,
    alpha: &Element,
    beta: &Element,
    gamma: &Element,
) -> Result<MasseyCoset, MasseyError> {
    let ka = check_ordinary_input(alpha, "alpha")?;
    let kb = check_ordinary_input(beta, "beta")?;
    let kg = check_ordinary_input(gamma, "gamma")?;

    let op = m.d_matrix();
    let ab = alpha.product(beta)?;
    let bg = beta.product(gamma)?;
    let x = solve_primitive(m, &op, &ab, PieceSelector::Total(ka + kb - 1));
    let y = solve_primitive(m, &op, &bg, PieceSelector::Total(kb + kg - 1));
    let (x, y) = match (x, y) {
        (Some(x), Some(y)) => (x, y),
        (x, y) => return Err(MasseyError::Undefined { left: x.is_none(), right: y.is_none() }),
    };

    let sign = if ka & 1 == 1 { -K::one() } else { K::one() };
    let rep = alpha.product(&y)?.scale(&sign).sub(&x.product(gamma)?)?;
    let target_degree = Degree::Total(ka + kb + kg - 1);
    let indet = indeterminacy(m, alpha, gamma, MasseyFlavor::Ordinary, target_degree)?;
    let coords = indet.target.project(&rep)?;
    Ok(MasseyCoset {
        flavor: MasseyFlavor::Ordinary,
        target: indet.target.clone(),
        representative_chain: rep,
        representative_coords: coords,
        indeterminacy: indet,
    })
}

/// Outcome of comparing `d^c⟨·,·,·⟩_secondary` with the ordinary product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcRelation {
    /// Units `u` among `{1, -1, i, -i}` with
    /// `[d^c rep_abc] = u·[rep_ordinary]` modulo the ordinary indeterminacy.
    pub units: Vec<K>,
    pub abc_trivial: bool,
    pub ordinary_trivial: bool,
}

impl DcRelation {
    pub fn holds(&self) -> bool {
        !self.units.is_empty()
    }

    /// The single comparison unit, when it is unambiguous.
    pub fn unit(&self) -> Option<&K> {
        if self.units.len() == 1 {
            Some(&self.units[0])
        } else {
            None
        }
    }
}

/// Checks that applying `d^c` to the secondary product representative lands
/// in the ordinary Massey coset up to a global unit scalar, and reports
/// every unit that works.
pub fn dc_relation_check(
    m: &ValidatedModel,
    alpha: &Element,
    beta: &Element,
    gamma: &Element,
) -> Result<DcRelation, MasseyError> {
    let abc = triple_abc_massey(m, alpha, beta, gamma)?;
    let ord = triple_massey(m, alpha, beta, gamma)?;
    let dc_rep = abc.representative().dc();
    let dc_coords = ord.target().project(&dc_rep)?;
    let units_all = [K::one(), -K::one(), K::i(), -K::i()];
    let mut units = Vec::new();
    for u in units_all {
        let scaled: Vec<K> = ord.coords().iter().map(|c| &u * c).collect();
        if ord.indeterminacy().contains_coords(&vec_sub(&dc_coords, &scaled)) {
            units.push(u);
        }
    }
    Ok(DcRelation { units, abc_trivial: abc.is_trivial(), ordinary_trivial: ord.is_trivial() })
}
