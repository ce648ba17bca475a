//! Finite models of commutative bigraded bidifferential algebras.
//!
//! A model is a finite basis of bigraded elements together with structure
//! constants for the product and two anticommuting differentials `del`
//! (bidegree `(1,0)`) and `delbar` (bidegree `(0,1)`). Models are built
//! unchecked; every cohomological operation requires a [`ValidatedModel`],
//! obtained by passing the full axiom check in [`CbbaModel::validated`].
//!
//! Scalars are Gaussian rationals throughout, so `i·del·delbar` and
//! conjugation questions stay inside exact arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::linalg::{kernel_basis, image_basis, vec_add, vec_is_zero, vec_scale, vec_sub, Matrix, Subquotient, Subspace};
use crate::scalar::{GaussianRational, Rational};

pub type K = GaussianRational;
/// Sparse coefficient vector: nonzero entries as `(basis index, coefficient)`.
pub type SparseVec = Vec<(usize, K)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub p: i32,
    pub q: i32,
}

impl Bidegree {
    pub fn new(p: i32, q: i32) -> Self {
        Bidegree { p, q }
    }

    pub fn total(&self) -> i32 {
        self.p + self.q
    }

    pub fn swapped(&self) -> Self {
        Bidegree { p: self.q, q: self.p }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree { p: self.p + rhs.p, q: self.q + rhs.q }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Degree selector for cohomology queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Pure(Bidegree),
    Total(i32),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Pure(b) => write!(f, "{b}"),
            Degree::Total(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    BottChern,
    Aeppli,
    DeRham,
    Dolbeault,
}

impl Theory {
    pub fn tag(&self) -> &'static str {
        match self {
            Theory::BottChern => "bc",
            Theory::Aeppli => "a",
            Theory::DeRham => "dr",
            Theory::Dolbeault => "dol",
        }
    }

    pub fn from_tag(s: &str) -> Option<Theory> {
        match s {
            "bc" => Some(Theory::BottChern),
            "a" => Some(Theory::Aeppli),
            "dr" => Some(Theory::DeRham),
            "dol" => Some(Theory::Dolbeault),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model construction failed: {0}")]
    Construction(String),
    #[error("elements belong to different models")]
    ModelMismatch,
    #[error("model has no conjugation")]
    NoConjugation,
    #[error("element is not of pure bidegree")]
    NotPureBidegree,
    #[error("element is not homogeneous of pure total degree")]
    NotPureTotalDegree,
    #[error("element is not a {0} cocycle")]
    NotACocycle(&'static str),
    #[error("theory `{theory:?}` expects a {expected} degree")]
    DegreeKind { theory: Theory, expected: &'static str },
    #[error("unknown basis element `{0}`")]
    UnknownBasisElement(String),
    #[error("cannot parse element expression `{input}`: {reason}")]
    ExpressionParse { input: String, reason: String },
}

/// Raw model data. Construct through [`ModelBuilder`], then validate.
#[derive(Clone)]
pub struct CbbaModel {
    ids: Vec<String>,
    degrees: Vec<Bidegree>,
    unit: usize,
    /// Complete product table: `(i, j)` -> `e_i · e_j`. Absent means zero.
    products: HashMap<(usize, usize), SparseVec>,
    del_cols: Vec<SparseVec>,
    delbar_cols: Vec<SparseVec>,
    /// Signed basis involution: `conj(e_i) = sign · e_target`.
    conjugation: Option<Vec<(usize, K)>>,
    index: HashMap<String, usize>,
}

pub struct ModelBuilder {
    basis: Vec<(String, Bidegree)>,
    unit: Option<String>,
    products: Vec<(String, String, Vec<(String, K)>)>,
    del: Vec<(String, Vec<(String, K)>)>,
    delbar: Vec<(String, Vec<(String, K)>)>,
    conjugation: Vec<(String, String, K)>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        ModelBuilder {
            basis: Vec::new(),
            unit: None,
            products: Vec::new(),
            del: Vec::new(),
            delbar: Vec::new(),
            conjugation: Vec::new(),
        }
    }

    pub fn basis_element(mut self, id: &str, p: i32, q: i32) -> Self {
        self.basis.push((id.to_string(), Bidegree::new(p, q)));
        self
    }

    pub fn unit(mut self, id: &str) -> Self {
        self.unit = Some(id.to_string());
        self
    }

    /// Declares `a · b`. Missing pairs default to zero; the mirror `b · a`
    /// is filled in by graded commutativity unless given explicitly.
    pub fn product(mut self, a: &str, b: &str, terms: Vec<(&str, K)>) -> Self {
        self.products.push((
            a.to_string(),
            b.to_string(),
            terms.into_iter().map(|(id, c)| (id.to_string(), c)).collect(),
        ));
        self
    }

    pub fn del(mut self, a: &str, terms: Vec<(&str, K)>) -> Self {
        self.del.push((a.to_string(), terms.into_iter().map(|(id, c)| (id.to_string(), c)).collect()));
        self
    }

    pub fn delbar(mut self, a: &str, terms: Vec<(&str, K)>) -> Self {
        self.delbar
            .push((a.to_string(), terms.into_iter().map(|(id, c)| (id.to_string(), c)).collect()));
        self
    }

    /// Declares `conj(a) = sign · b`.
    pub fn conjugation(mut self, a: &str, b: &str, sign: K) -> Self {
        self.conjugation.push((a.to_string(), b.to_string(), sign));
        self
    }

    pub fn build(self) -> Result<CbbaModel, ModelError> {
        let err = |m: String| ModelError::Construction(m);
        let n = self.basis.len();
        if n == 0 {
            return Err(err("empty basis".into()));
        }
        let mut index = HashMap::new();
        for (i, (id, _)) in self.basis.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(err(format!("duplicate basis id `{id}`")));
            }
        }
        let look = |id: &str| -> Result<usize, ModelError> {
            index.get(id).copied().ok_or_else(|| ModelError::UnknownBasisElement(id.to_string()))
        };
        let unit_id = self.unit.ok_or_else(|| err("no unit declared".into()))?;
        let unit = look(&unit_id)?;
        let (ids, degrees): (Vec<_>, Vec<_>) = self.basis.into_iter().unzip();
        for (i, d) in degrees.iter().enumerate() {
            let d: &Bidegree = d;
            if d.p < 0 || d.q < 0 {
                return Err(err(format!("basis element `{}` has negative bidegree {d}", ids[i])));
            }
        }

        let mut products: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for (a, b, terms) in &self.products {
            let (i, j) = (look(a)?, look(b)?);
            let mut sv: SparseVec = Vec::new();
            for (id, c) in terms {
                if !c.is_zero() {
                    sv.push((look(id)?, c.clone()));
                }
            }
            sv.sort_by_key(|(k, _)| *k);
            if products.insert((i, j), sv).is_some() {
                return Err(err(format!("duplicate product entry for ({a}, {b})")));
            }
        }
        // Unitality fills: 1·x = x·1 = x unless stated.
        for i in 0..n {
            products.entry((unit, i)).or_insert_with(|| vec![(i, K::one())]);
            products.entry((i, unit)).or_insert_with(|| vec![(i, K::one())]);
        }
        // Graded-commutative mirror for missing entries.
        for i in 0..n {
            for j in 0..n {
                if products.contains_key(&(i, j)) && !products.contains_key(&(j, i)) {
                    let sign = sign_for(degrees[i].total(), degrees[j].total());
                    let mirrored: SparseVec = products[&(i, j)]
                        .iter()
                        .map(|(k, c)| (*k, if sign { -c.clone() } else { c.clone() }))
                        .collect();
                    products.insert((j, i), mirrored);
                }
            }
        }
        products.retain(|_, v| !v.is_empty());

        let mut del_cols = vec![SparseVec::new(); n];
        for (a, terms) in &self.del {
            let i = look(a)?;
            let mut sv: SparseVec = Vec::new();
            for (id, c) in terms {
                if !c.is_zero() {
                    sv.push((look(id)?, c.clone()));
                }
            }
            sv.sort_by_key(|(k, _)| *k);
            del_cols[i] = sv;
        }
        let mut delbar_cols = vec![SparseVec::new(); n];
        for (a, terms) in &self.delbar {
            let i = look(a)?;
            let mut sv: SparseVec = Vec::new();
            for (id, c) in terms {
                if !c.is_zero() {
                    sv.push((look(id)?, c.clone()));
                }
            }
            sv.sort_by_key(|(k, _)| *k);
            delbar_cols[i] = sv;
        }

        let conjugation = if self.conjugation.is_empty() {
            None
        } else {
            let mut map: Vec<Option<(usize, K)>> = vec![None; n];
            for (a, b, s) in &self.conjugation {
                map[look(a)?] = Some((look(b)?, s.clone()));
            }
            let filled: Result<Vec<_>, _> = map
                .into_iter()
                .enumerate()
                .map(|(i, m)| m.ok_or_else(|| err(format!("conjugation missing for `{}`", ids[i]))))
                .collect();
            Some(filled?)
        };

        Ok(CbbaModel { ids, degrees, unit, products, del_cols, delbar_cols, conjugation, index })
    }
}

impl Default for ModelBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for CbbaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CbbaModel(dim {}, ids {:?})", self.dim(), self.ids)
    }
}

/// `true` when `(-1)^{ab}` is `-1`.
fn sign_for(a: i32, b: i32) -> bool {
    (a & 1) == 1 && (b & 1) == 1
}

static EMPTY: SparseVec = Vec::new();

impl CbbaModel {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::new()
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn bidegree(&self, i: usize) -> Bidegree {
        self.degrees[i]
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn has_conjugation(&self) -> bool {
        self.conjugation.is_some()
    }

    pub fn conjugation_table(&self) -> Option<&[(usize, K)]> {
        self.conjugation.as_deref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        self.products.get(&(i, j)).unwrap_or(&EMPTY)
    }

    pub fn max_p(&self) -> i32 {
        self.degrees.iter().map(|d| d.p).max().unwrap_or(0)
    }

    pub fn max_q(&self) -> i32 {
        self.degrees.iter().map(|d| d.q).max().unwrap_or(0)
    }

    pub fn max_total(&self) -> i32 {
        self.degrees.iter().map(|d| d.total()).max().unwrap_or(0)
    }

    pub fn piece_indices(&self, b: Bidegree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == b).collect()
    }

    pub fn total_indices(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i].total() == k).collect()
    }

    fn apply_cols(&self, cols: &[SparseVec], v: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, a) in &cols[j] {
                out[*i] += a * c;
            }
        }
        out
    }

    pub fn del_vec(&self, v: &[K]) -> Vec<K> {
        self.apply_cols(&self.del_cols, v)
    }

    pub fn delbar_vec(&self, v: &[K]) -> Vec<K> {
        self.apply_cols(&self.delbar_cols, v)
    }

    pub fn d_vec(&self, v: &[K]) -> Vec<K> {
        vec_add(&self.del_vec(v), &self.delbar_vec(v))
    }

    /// `d^c = (delbar - del) / 2`.
    pub fn dc_vec(&self, v: &[K]) -> Vec<K> {
        let half = K::new(crate::scalar::rational(1, 2), Rational::zero());
        vec_scale(&half, &vec_sub(&self.delbar_vec(v), &self.del_vec(v)))
    }

    /// `i · del(delbar(v))`.
    pub fn i_deldelbar_vec(&self, v: &[K]) -> Vec<K> {
        vec_scale(&K::i(), &self.del_vec(&self.delbar_vec(v)))
    }

    pub fn mul_vecs(&self, u: &[K], v: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim()];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += c * &ab;
                }
            }
        }
        out
    }

    pub fn del_matrix(&self) -> Matrix<K> {
        self.cols_to_matrix(&self.del_cols)
    }

    pub fn delbar_matrix(&self) -> Matrix<K> {
        self.cols_to_matrix(&self.delbar_cols)
    }

    pub fn d_matrix(&self) -> Matrix<K> {
        let n = self.dim();
        let a = self.del_matrix();
        let b = self.delbar_matrix();
        Matrix::from_fn(n, n, |i, j| a[(i, j)].clone() + b[(i, j)].clone())
    }

    fn cols_to_matrix(&self, cols: &[SparseVec]) -> Matrix<K> {
        let n = self.dim();
        let mut m = Matrix::zero(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                m[(*i, j)] = c.clone();
            }
        }
        m
    }

    /// Subspace of `K^n` spanned by the coordinates of one bidegree.
    pub fn piece_subspace(&self, b: Bidegree) -> Subspace<K> {
        let n = self.dim();
        let vs = self
            .piece_indices(b)
            .into_iter()
            .map(|i| {
                let mut v = vec![K::zero(); n];
                v[i] = K::one();
                v
            })
            .collect();
        Subspace::from_vectors(n, vs)
    }

    pub fn total_subspace(&self, k: i32) -> Subspace<K> {
        let n = self.dim();
        let vs = self
            .total_indices(k)
            .into_iter()
            .map(|i| {
                let mut v = vec![K::zero(); n];
                v[i] = K::one();
                v
            })
            .collect();
        Subspace::from_vectors(n, vs)
    }

    /// Runs the full axiom check. An empty report means the model is a
    /// commutative bigraded bidifferential algebra.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let n = self.dim();
        let id = |i: usize| self.ids[i].clone();

        if self.degrees[self.unit] != Bidegree::new(0, 0) {
            r.push(Axiom::UnitDegree, format!("unit `{}` has bidegree {}", id(self.unit), self.degrees[self.unit]));
        }
        if !self.del_cols[self.unit].is_empty() || !self.delbar_cols[self.unit].is_empty() {
            r.push(Axiom::UnitClosed, format!("differential of unit `{}` is nonzero", id(self.unit)));
        }

        // Differentials shift bidegree by (1,0) and (0,1).
        for j in 0..n {
            for (i, _) in &self.del_cols[j] {
                if self.degrees[*i] != self.degrees[j] + Bidegree::new(1, 0) {
                    r.push(Axiom::DelBidegree, format!("del({}) hits {} of bidegree {}", id(j), id(*i), self.degrees[*i]));
                }
            }
            for (i, _) in &self.delbar_cols[j] {
                if self.degrees[*i] != self.degrees[j] + Bidegree::new(0, 1) {
                    r.push(Axiom::DelbarBidegree, format!("delbar({}) hits {} of bidegree {}", id(j), id(*i), self.degrees[*i]));
                }
            }
        }

        // del² = delbar² = del∘delbar + delbar∘del = 0, checked on basis vectors.
        for j in 0..n {
            let mut e = vec![K::zero(); n];
            e[j] = K::one();
            let de = self.del_vec(&e);
            let dbe = self.delbar_vec(&e);
            if !vec_is_zero(&self.del_vec(&de)) {
                r.push(Axiom::DelSquared, format!("del²({}) ≠ 0", id(j)));
            }
            if !vec_is_zero(&self.delbar_vec(&dbe)) {
                r.push(Axiom::DelbarSquared, format!("delbar²({}) ≠ 0", id(j)));
            }
            if !vec_is_zero(&vec_add(&self.del_vec(&dbe), &self.delbar_vec(&de))) {
                r.push(Axiom::AntiCommute, format!("(del∘delbar + delbar∘del)({}) ≠ 0", id(j)));
            }
        }

        // Product bidegree additivity and graded commutativity.
        for i in 0..n {
            for j in 0..n {
                let prod = self.basis_product(i, j);
                let want = self.degrees[i] + self.degrees[j];
                for (k, _) in prod {
                    if self.degrees[*k] != want {
                        r.push(Axiom::ProductBidegree, format!("{}·{} hits {} of bidegree {}", id(i), id(j), id(*k), self.degrees[*k]));
                    }
                }
                let mirror = self.basis_product(j, i);
                let sign = sign_for(self.degrees[i].total(), self.degrees[j].total());
                let expect: SparseVec = prod
                    .iter()
                    .map(|(k, c)| (*k, if sign { -c.clone() } else { c.clone() }))
                    .collect();
                if *mirror != expect {
                    r.push(Axiom::GradedCommutative, format!("{}·{} vs {}·{}", id(i), id(j), id(j), id(i)));
                }
            }
        }

        // Unitality (explicit table entries could have overridden the fill).
        for i in 0..n {
            if *self.basis_product(self.unit, i) != vec![(i, K::one())] {
                r.push(Axiom::Unital, format!("1·{} ≠ {}", id(i), id(i)));
            }
        }

        // Associativity on basis triples.
        'outer: for i in 0..n {
            for j in 0..n {
                let pij = self.basis_product(i, j).clone();
                for k in 0..n {
                    let mut lhs = vec![K::zero(); n];
                    for (m, c) in &pij {
                        for (t, c2) in self.basis_product(*m, k) {
                            lhs[*t] += &(c * c2);
                        }
                    }
                    let mut rhs = vec![K::zero(); n];
                    for (m, c) in self.basis_product(j, k) {
                        for (t, c2) in self.basis_product(i, *m) {
                            rhs[*t] += &(c * c2);
                        }
                    }
                    if lhs != rhs {
                        r.push(Axiom::Associative, format!("({}·{})·{} ≠ {}·({}·{})", id(i), id(j), id(k), id(i), id(j), id(k)));
                        if r.violations.len() > 200 {
                            break 'outer;
                        }
                    }
                }
            }
        }

        // Leibniz for both differentials.
        for i in 0..n {
            for j in 0..n {
                let mut ei = vec![K::zero(); n];
                ei[i] = K::one();
                let mut ej = vec![K::zero(); n];
                ej[j] = K::one();
                let prod: Vec<K> = {
                    let mut v = vec![K::zero(); n];
                    for (k, c) in self.basis_product(i, j) {
                        v[*k] = c.clone();
                    }
                    v
                };
                let sign = if self.degrees[i].total() & 1 == 1 { -K::one() } else { K::one() };
                let lhs_del = self.del_vec(&prod);
                let rhs_del = vec_add(
                    &self.mul_vecs(&self.del_vec(&ei), &ej),
                    &vec_scale(&sign, &self.mul_vecs(&ei, &self.del_vec(&ej))),
                );
                if lhs_del != rhs_del {
                    r.push(Axiom::LeibnizDel, format!("del({}·{})", id(i), id(j)));
                }
                let lhs_db = self.delbar_vec(&prod);
                let rhs_db = vec_add(
                    &self.mul_vecs(&self.delbar_vec(&ei), &ej),
                    &vec_scale(&sign, &self.mul_vecs(&ei, &self.delbar_vec(&ej))),
                );
                if lhs_db != rhs_db {
                    r.push(Axiom::LeibnizDelbar, format!("delbar({}·{})", id(i), id(j)));
                }
            }
        }

        // Conjugation: signed involution, swaps bidegree, intertwines del/delbar.
        if let Some(conj) = &self.conjugation {
            for i in 0..n {
                let (t, s) = &conj[i];
                if self.degrees[*t] != self.degrees[i].swapped() {
                    r.push(Axiom::ConjugationBidegree, format!("conj({}) = {} does not swap {}", id(i), id(*t), self.degrees[i]));
                }
                let (t2, s2) = &conj[*t];
                if *t2 != i || !(s.conjugate() * s2.clone()).is_one() {
                    r.push(Axiom::ConjugationInvolution, format!("conj²({}) ≠ {}", id(i), id(i)));
                }
                // conj(del e_i) = delbar(conj e_i)
                let mut e = vec![K::zero(); n];
                e[i] = K::one();
                let lhs = self.conj_vec_raw(&self.del_vec(&e), conj);
                let rhs = self.delbar_vec(&self.conj_vec_raw(&e, conj));
                if lhs != rhs {
                    r.push(Axiom::ConjugationIntertwines, format!("conj∘del ≠ delbar∘conj on {}", id(i)));
                }
            }
        }

        r
    }

    fn conj_vec_raw(&self, v: &[K], conj: &[(usize, K)]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (t, s) = &conj[i];
            out[*t] += &(c.conjugate() * s.clone());
        }
        out
    }

    pub fn validated(self) -> Result<ValidatedModel, ValidationReport> {
        let report = self.validate();
        if report.is_clean() {
            Ok(ValidatedModel(Arc::new(self)))
        } else {
            Err(report)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    UnitDegree,
    UnitClosed,
    DelBidegree,
    DelbarBidegree,
    DelSquared,
    DelbarSquared,
    AntiCommute,
    ProductBidegree,
    GradedCommutative,
    Unital,
    Associative,
    LeibnizDel,
    LeibnizDelbar,
    ConjugationBidegree,
    ConjugationInvolution,
    ConjugationIntertwines,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, axiom: Axiom, witness: String) {
        self.violations.push(Violation { axiom, witness });
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn mentions(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "ok: all axioms hold");
        }
        for v in &self.violations {
            writeln!(f, "{:?}: {}", v.axiom, v.witness)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// A model that has passed [`CbbaModel::validate`]. Cheap to clone.
#[derive(Clone)]
pub struct ValidatedModel(Arc<CbbaModel>);

impl std::ops::Deref for ValidatedModel {
    type Target = CbbaModel;
    fn deref(&self) -> &CbbaModel {
        &self.0
    }
}

impl ValidatedModel {
    pub fn same_model(&self, other: &ValidatedModel) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn raw(&self) -> &CbbaModel {
        &self.0
    }

    pub fn zero_element(&self) -> Element {
        Element { model: self.clone(), coeffs: vec![K::zero(); self.dim()] }
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut coeffs = vec![K::zero(); self.dim()];
        coeffs[i] = K::one();
        Element { model: self.clone(), coeffs }
    }

    pub fn unit_element(&self) -> Element {
        self.basis_element(self.unit_index())
    }

    pub fn element_by_id(&self, id: &str) -> Result<Element, ModelError> {
        let i = self.index_of(id).ok_or_else(|| ModelError::UnknownBasisElement(id.to_string()))?;
        Ok(self.basis_element(i))
    }

    pub fn element_from_coeffs(&self, coeffs: Vec<K>) -> Element {
        assert_eq!(coeffs.len(), self.dim(), "coefficient vector length mismatch");
        Element { model: self.clone(), coeffs }
    }

    /// Parses expressions like `E_L1+E_L2+E_R`, `2a - 3/2 b`, `i c` or
    /// `(1+2i)w1`, the last form matching the `Display` output of elements.
    pub fn parse_element(&self, input: &str) -> Result<Element, ModelError> {
        let mut coeffs = vec![K::zero(); self.dim()];
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ModelError::ExpressionParse { input: input.into(), reason: "empty expression".into() });
        }
        let mut terms: Vec<(K, String)> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for (k, ch) in compact.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if (ch == '+' || ch == '-') && depth == 0 && k > 0 && !cur.is_empty() && !cur.ends_with('/')
            {
                terms.push(split_term(&cur, input)?);
                cur = String::from(ch);
            } else {
                cur.push(ch);
            }
        }
        if depth != 0 {
            return Err(ModelError::ExpressionParse { input: input.into(), reason: "unbalanced parentheses".into() });
        }
        terms.push(split_term(&cur, input)?);
        for (c, id) in terms {
            if id == "0" && c.is_zero() {
                continue;
            }
            let i = self
                .index_of(&id)
                .ok_or_else(|| ModelError::UnknownBasisElement(id.clone()))?;
            coeffs[i] += &c;
        }
        Ok(self.element_from_coeffs(coeffs))
    }
}

/// Splits one additive term into coefficient and basis id. A term is an
/// optional scalar (possibly ending in `i`, possibly parenthesized), an
/// optional `*`, and a basis id.
fn split_term(term: &str, whole: &str) -> Result<(K, String), ModelError> {
    let t = term.trim_start_matches('+');
    let fail = |reason: &str| ModelError::ExpressionParse {
        input: whole.into(),
        reason: format!("{reason} in `{term}`"),
    };
    if t == "0" {
        return Ok((K::zero(), "0".into()));
    }
    // parenthesized coefficient, as produced by element Display
    let (negate, t) = match t.strip_prefix('-') {
        Some(rest) if rest.starts_with('(') => (true, rest),
        _ => (false, t),
    };
    if let Some(rest) = t.strip_prefix('(') {
        let close = rest.find(')').ok_or_else(|| fail("unbalanced parentheses"))?;
        let coeff: K = rest[..close].parse().map_err(|e: crate::scalar::ParseScalarError| fail(&e.reason))?;
        let id = rest[close + 1..].trim_start_matches('*');
        if id.is_empty() {
            return Err(fail("missing basis id"));
        }
        let coeff = if negate { -coeff } else { coeff };
        return Ok((coeff, id.to_string()));
    }
    // The basis id is the longest trailing run of identifier characters that
    // does not parse as part of the coefficient. Split at the last '*' when
    // present, otherwise at the first alphabetic character that starts an
    // identifier (a lone 'i' belongs to the coefficient).
    if let Some(star) = t.rfind('*') {
        let coeff_str = &t[..star];
        let id = &t[star + 1..];
        if id.is_empty() {
            return Err(fail("missing basis id"));
        }
        let coeff = match coeff_str {
            "" | "+" => K::one(),
            "-" => -K::one(),
            _ => coeff_str.parse::<K>().map_err(|e| fail(&e.to_string()))?,
        };
        return Ok((coeff, id.to_string()));
    }
    let chars: Vec<(usize, char)> = t.char_indices().collect();
    let mut id_start = None;
    for (pos, (byte_idx, c)) in chars.iter().enumerate() {
        if c.is_alphabetic() || *c == '_' {
            if *c == 'i' {
                // lone trailing 'i' is the imaginary unit of the coefficient
                let rest_is_ident = chars[pos..]
                    .iter()
                    .skip(1)
                    .any(|(_, c2)| c2.is_alphanumeric() || *c2 == '_');
                if !rest_is_ident {
                    break;
                }
            }
            id_start = Some(*byte_idx);
            break;
        }
    }
    let Some(s) = id_start else {
        return Err(fail("missing basis id"));
    };
    let coeff_str = &t[..s];
    let id = &t[s..];
    let coeff = match coeff_str {
        "" | "+" => K::one(),
        "-" => -K::one(),
        _ => coeff_str.parse::<K>().map_err(|e| fail(&e.to_string()))?,
    };
    Ok((coeff, id.to_string()))
}

/// An element of a validated model: a coefficient vector over the basis.
#[derive(Clone)]
pub struct Element {
    model: ValidatedModel,
    coeffs: Vec<K>,
}

impl Element {
    pub fn model(&self) -> &ValidatedModel {
        &self.model
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.coeffs)
    }

    /// The common bidegree of all nonzero coefficients, if there is one.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut deg = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.model.bidegree(i)),
                Some(d) if d == self.model.bidegree(i) => {}
                _ => return None,
            }
        }
        deg
    }

    pub fn total_degree(&self) -> Option<i32> {
        let mut deg = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = self.model.bidegree(i).total();
            match deg {
                None => deg = Some(t),
                Some(d) if d == t => {}
                _ => return None,
            }
        }
        deg
    }

    /// Component of pure bidegree `b`.
    pub fn component(&self, b: Bidegree) -> Element {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.model.bidegree(i) == b { c.clone() } else { K::zero() })
            .collect();
        Element { model: self.model.clone(), coeffs }
    }

    fn check_same_model(&self, other: &Element) -> Result<(), ModelError> {
        if self.model.same_model(&other.model) {
            Ok(())
        } else {
            Err(ModelError::ModelMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, ModelError> {
        self.check_same_model(other)?;
        Ok(Element { model: self.model.clone(), coeffs: vec_add(&self.coeffs, &other.coeffs) })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, ModelError> {
        self.check_same_model(other)?;
        Ok(Element { model: self.model.clone(), coeffs: vec_sub(&self.coeffs, &other.coeffs) })
    }

    pub fn scale(&self, c: &K) -> Element {
        Element { model: self.model.clone(), coeffs: vec_scale(c, &self.coeffs) }
    }

    pub fn product(&self, other: &Element) -> Result<Element, ModelError> {
        self.check_same_model(other)?;
        Ok(Element {
            model: self.model.clone(),
            coeffs: self.model.mul_vecs(&self.coeffs, &other.coeffs),
        })
    }

    pub fn del(&self) -> Element {
        Element { model: self.model.clone(), coeffs: self.model.del_vec(&self.coeffs) }
    }

    pub fn delbar(&self) -> Element {
        Element { model: self.model.clone(), coeffs: self.model.delbar_vec(&self.coeffs) }
    }

    pub fn d(&self) -> Element {
        Element { model: self.model.clone(), coeffs: self.model.d_vec(&self.coeffs) }
    }

    pub fn dc(&self) -> Element {
        Element { model: self.model.clone(), coeffs: self.model.dc_vec(&self.coeffs) }
    }

    pub fn i_deldelbar(&self) -> Element {
        Element { model: self.model.clone(), coeffs: self.model.i_deldelbar_vec(&self.coeffs) }
    }

    pub fn conjugate(&self) -> Result<Element, ModelError> {
        let conj = self.model.conjugation_table().ok_or(ModelError::NoConjugation)?;
        let coeffs = self.model.conj_vec_raw(&self.coeffs, conj);
        Ok(Element { model: self.model.clone(), coeffs })
    }

    pub fn is_del_closed(&self) -> bool {
        self.del().is_zero()
    }

    pub fn is_delbar_closed(&self) -> bool {
        self.delbar().is_zero()
    }

    pub fn is_d_closed(&self) -> bool {
        self.d().is_zero()
    }

    pub fn is_deldelbar_closed(&self) -> bool {
        self.i_deldelbar().is_zero()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let id = self.model.id(i);
            let c_str = format!("{c}");
            let compound = c_str.contains('+') || c_str[1..].contains('-');
            if compound {
                if !first {
                    write!(f, "+")?;
                }
                write!(f, "({c_str}){id}")?;
            } else if c.is_one() {
                if !first {
                    write!(f, "+")?;
                }
                write!(f, "{id}")?;
            } else if (-c.clone()).is_one() {
                write!(f, "-{id}")?;
            } else {
                if !first && !c_str.starts_with('-') {
                    write!(f, "+")?;
                }
                write!(f, "{c_str}{id}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One cohomology group of a validated model, with projection onto a chosen
/// basis of representatives.
#[derive(Clone)]
pub struct CohomologyGroup {
    model: ValidatedModel,
    theory: Theory,
    degree: Degree,
    subquotient: Subquotient<K>,
}

impl CohomologyGroup {
    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.subquotient.dim()
    }

    pub fn model(&self) -> &ValidatedModel {
        &self.model
    }

    pub fn subquotient(&self) -> &Subquotient<K> {
        &self.subquotient
    }

    pub fn representatives(&self) -> Vec<Element> {
        self.subquotient
            .representatives()
            .iter()
            .map(|v| self.model.element_from_coeffs(v.clone()))
            .collect()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn project(&self, e: &Element) -> Result<Vec<K>, ModelError> {
        if !self.model.same_model(e.model()) {
            return Err(ModelError::ModelMismatch);
        }
        self.subquotient
            .project(e.coeffs())
            .ok_or(ModelError::NotACocycle(self.theory.tag()))
    }

    pub fn include(&self, coords: &[K]) -> Element {
        self.model.element_from_coeffs(self.subquotient.include(coords))
    }

    pub fn class_is_zero(&self, e: &Element) -> Result<bool, ModelError> {
        Ok(self.project(e)?.iter().all(|c| c.is_zero()))
    }
}

impl ValidatedModel {
    /// Cocycle and coboundary subspaces of one theory in one degree.
    fn theory_spaces(
        &self,
        theory: Theory,
        degree: Degree,
    ) -> Result<(Subspace<K>, Subspace<K>), ModelError> {
        match theory {
            Theory::DeRham => {
                let k = match degree {
                    Degree::Total(k) => k,
                    Degree::Pure(b) => b.total(),
                };
                let piece = self.total_subspace(k);
                let d = self.d_matrix();
                let z = kernel_basis(&d).intersect(&piece).expect("same ambient");
                let b = image_basis(&d).intersect(&piece).expect("same ambient");
                Ok((z, b))
            }
            _ => {
                let b = match degree {
                    Degree::Pure(b) => b,
                    Degree::Total(_) => {
                        return Err(ModelError::DegreeKind { theory, expected: "pure (p,q)" })
                    }
                };
                let piece = self.piece_subspace(b);
                let del = self.del_matrix();
                let delbar = self.delbar_matrix();
                match theory {
                    Theory::BottChern => {
                        let z = kernel_basis(&del)
                            .intersect(&kernel_basis(&delbar))
                            .expect("ambient")
                            .intersect(&piece)
                            .expect("ambient");
                        let dd = del.mul(&delbar);
                        let bnd = image_basis(&dd).intersect(&piece).expect("ambient");
                        Ok((z, bnd))
                    }
                    Theory::Aeppli => {
                        let dd = del.mul(&delbar);
                        let z = kernel_basis(&dd).intersect(&piece).expect("ambient");
                        let bnd = image_basis(&del)
                            .sum(&image_basis(&delbar))
                            .expect("ambient")
                            .intersect(&piece)
                            .expect("ambient");
                        Ok((z, bnd))
                    }
                    Theory::Dolbeault => {
                        let z = kernel_basis(&delbar).intersect(&piece).expect("ambient");
                        let bnd = image_basis(&delbar).intersect(&piece).expect("ambient");
                        Ok((z, bnd))
                    }
                    Theory::DeRham => unreachable!(),
                }
            }
        }
    }

    /// The cohomology group of one theory in one degree. Out-of-range
    /// degrees give zero groups.
    pub fn cohomology(&self, theory: Theory, degree: Degree) -> Result<CohomologyGroup, ModelError> {
        let (z, b) = self.theory_spaces(theory, degree)?;
        let subquotient =
            Subquotient::new(z, b).expect("coboundaries are always cocycles in a validated model");
        Ok(CohomologyGroup { model: self.clone(), theory, degree, subquotient })
    }

    pub fn cohomology_dim(&self, theory: Theory, degree: Degree) -> Result<usize, ModelError> {
        Ok(self.cohomology(theory, degree)?.dim())
    }

    /// Direct sum of the bigraded groups in one total degree (a single
    /// group for de Rham).
    pub fn total_cohomology(&self, theory: Theory, k: i32) -> Result<GradedCohomology, ModelError> {
        let mut summands = Vec::new();
        match theory {
            Theory::DeRham => summands.push(self.cohomology(theory, Degree::Total(k))?),
            _ => {
                // zero-dimensional summands are kept so that projection
                // still validates every component of a mixed cocycle
                for p in 0..=k.max(0) {
                    let q = k - p;
                    if q < 0 {
                        continue;
                    }
                    summands.push(self.cohomology(theory, Degree::Pure(Bidegree::new(p, q)))?);
                }
            }
        }
        Ok(GradedCohomology { theory, total_degree: k, summands })
    }

    pub fn ddbar_lemma_holds(&self) -> bool {
        let bc_dr = self.comparison_map(ComparisonKind::BcToDr);
        let dr_a = self.comparison_map(ComparisonKind::DrToA);
        bc_dr.is_isomorphism() && dr_a.is_isomorphism()
    }

    /// The natural maps between the cohomologies, assembled over all total
    /// degrees.
    pub fn comparison_map(&self, kind: ComparisonKind) -> ComparisonMap {
        let top = self.max_total();
        let mut blocks = Vec::new();
        for k in 0..=top {
            let (source, target) = match kind {
                ComparisonKind::BcToDr => (
                    self.total_cohomology(Theory::BottChern, k).expect("pure degrees"),
                    self.total_cohomology(Theory::DeRham, k).expect("total degree"),
                ),
                ComparisonKind::DrToA => (
                    self.total_cohomology(Theory::DeRham, k).expect("total degree"),
                    self.total_cohomology(Theory::Aeppli, k).expect("pure degrees"),
                ),
                ComparisonKind::DcAToBc => (
                    self.total_cohomology(Theory::Aeppli, k).expect("pure degrees"),
                    self.total_cohomology(Theory::BottChern, k + 1).expect("pure degrees"),
                ),
            };
            let mut cols = Vec::new();
            for rep in source.representatives() {
                let mapped = match kind {
                    ComparisonKind::BcToDr | ComparisonKind::DrToA => rep.clone(),
                    ComparisonKind::DcAToBc => rep.dc(),
                };
                let coords =
                    target.project(&mapped).expect("comparison image must be a target cocycle");
                cols.push(coords);
            }
            let matrix = Matrix::from_fn(target.dim(), source.dim(), |i, j| cols[j][i].clone());
            blocks.push(ComparisonBlock { total_degree: k, source, target, matrix });
        }
        ComparisonMap { kind, blocks }
    }
}

/// `⊕_{p+q=k}` of one theory's groups (or the single de Rham group).
#[derive(Clone)]
pub struct GradedCohomology {
    theory: Theory,
    total_degree: i32,
    summands: Vec<CohomologyGroup>,
}

impl GradedCohomology {
    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn total_degree(&self) -> i32 {
        self.total_degree
    }

    pub fn summands(&self) -> &[CohomologyGroup] {
        &self.summands
    }

    pub fn dim(&self) -> usize {
        self.summands.iter().map(|g| g.dim()).sum()
    }

    pub fn representatives(&self) -> Vec<Element> {
        self.summands.iter().flat_map(|g| g.representatives()).collect()
    }

    /// Projects a (possibly mixed-bidegree) cocycle componentwise.
    pub fn project(&self, e: &Element) -> Result<Vec<K>, ModelError> {
        let mut out = Vec::new();
        for g in &self.summands {
            let comp = match g.degree() {
                Degree::Pure(b) => e.component(b),
                Degree::Total(_) => e.clone(),
            };
            out.extend(g.project(&comp)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    /// `H_BC -> H_dR`, induced by the identity on cocycles.
    BcToDr,
    /// `H_dR -> H_A`, induced by the identity on cocycles.
    DrToA,
    /// `H_A -> H_BC`, induced by `d^c = (delbar - del)/2`; raises total
    /// degree by one.
    DcAToBc,
}

pub struct ComparisonBlock {
    pub total_degree: i32,
    pub source: GradedCohomology,
    pub target: GradedCohomology,
    pub matrix: Matrix<K>,
}

impl ComparisonBlock {
    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.rank() == self.source.dim()
    }

    pub fn kernel_dim(&self) -> usize {
        kernel_basis(&self.matrix).dim()
    }

    /// Applies the block to source coordinates.
    pub fn apply(&self, coords: &[K]) -> Vec<K> {
        self.matrix.mul_vec(coords)
    }
}

pub struct ComparisonMap {
    pub kind: ComparisonKind,
    pub blocks: Vec<ComparisonBlock>,
}

impl ComparisonMap {
    pub fn is_isomorphism(&self) -> bool {
        self.blocks.iter().all(|b| b.is_isomorphism())
    }

    pub fn block(&self, total_degree: i32) -> Option<&ComparisonBlock> {
        self.blocks.iter().find(|b| b.total_degree == total_degree)
    }
}
