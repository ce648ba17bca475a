//! Dense exact linear algebra over a field.
//!
//! Everything is built on reduced row echelon form. A [`Subspace`] is stored
//! in RREF with zero rows dropped, which makes it a canonical form: two
//! subspaces are equal iff their stored bases are identical vectors. All
//! arithmetic is exact; nothing here ever rounds.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subspace is not contained in the claimed larger space")]
    NotContained,
    #[error("vector length {0} does not match expected dimension {1}")]
    BadVectorLength(usize, usize),
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<K> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        let mut out = vec![K::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                if !self[(i, j)].is_zero() {
                    out[i] = out[i].clone() + self[(i, j)].clone() * x.clone();
                }
            }
        }
        out
    }

    /// Vertical stack.
    pub fn stacked(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Matrix { rows: self.rows + below.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation.
    pub fn augmented(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows);
        Self::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                right[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inverse();
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<K> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

impl<K: Scalar> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solves `m · x = rhs`; returns a particular solution (free variables 0)
/// or `None` when the system is inconsistent.
pub fn solve<K: Scalar>(m: &Matrix<K>, rhs: &[K]) -> Option<Vec<K>> {
    assert_eq!(m.rows(), rhs.len(), "rhs length mismatch");
    let rhs_col = Matrix::from_fn(m.rows(), 1, |i, _| rhs[i].clone());
    let mut aug = m.augmented(&rhs_col);
    let pivots = aug.rref();
    if pivots.last() == Some(&m.cols()) {
        return None; // pivot in the rhs column
    }
    let mut x = vec![K::zero(); m.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, m.cols())].clone();
    }
    Some(x)
}

/// Basis of `{v : m·v = 0}` in canonical form.
pub fn kernel_basis<K: Scalar>(m: &Matrix<K>) -> Subspace<K> {
    let n = m.cols();
    let mut r = m.clone();
    let pivots = r.rref();
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; n];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![K::zero(); n];
        v[free] = K::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    Subspace::from_vectors(n, basis)
}

/// Canonical basis of the column span of `m`.
pub fn image_basis<K: Scalar>(m: &Matrix<K>) -> Subspace<K> {
    let cols: Vec<Vec<K>> = (0..m.cols()).map(|j| m.col_vec(j)).collect();
    Subspace::from_vectors(m.rows(), cols)
}

/// A linear subspace of `K^n` held in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace<K> {
    ambient: usize,
    basis: Matrix<K>,
}

impl<K: Scalar> Subspace<K> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zero(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Canonicalizes an arbitrary spanning set.
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<K>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "spanning vector of wrong length");
        }
        let mut m = Matrix::from_rows(vectors);
        if m.rows() == 0 {
            return Self::zero(ambient);
        }
        let pivots = m.rref();
        let rank = pivots.len();
        let rows: Vec<Vec<K>> = (0..rank).map(|i| m.row_vec(i)).collect();
        Subspace { ambient, basis: Matrix::from_rows(rows) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<K>> {
        (0..self.dim()).map(|i| self.basis.row_vec(i)).collect()
    }

    pub fn basis_matrix(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Reduces `v` modulo the subspace; the result is zero iff `v` lies in it.
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let pc = (0..self.ambient)
                .find(|&j| self.basis[(i, j)].is_one())
                .expect("canonical basis row without pivot");
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for j in 0..self.ambient {
                    let t = v[j].clone() - f.clone() * self.basis[(i, j)].clone();
                    v[j] = t;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace<K>) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Result<Subspace<K>, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Ok(Subspace::from_vectors(self.ambient, vs))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace<K>) -> Result<Subspace<K>, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let n = self.ambient;
        let mut rows = Vec::new();
        for v in self.basis_vectors() {
            let mut row = v.clone();
            row.extend(v);
            rows.push(row);
        }
        for v in other.basis_vectors() {
            let mut row = v;
            row.extend(vec![K::zero(); n]);
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let mut m = Matrix::from_rows(rows);
        m.rref();
        let mut inter = Vec::new();
        for i in 0..m.rows() {
            let left_zero = (0..n).all(|j| m[(i, j)].is_zero());
            let right = (n..2 * n).map(|j| m[(i, j)].clone()).collect::<Vec<_>>();
            if left_zero && right.iter().any(|x| !x.is_zero()) {
                inter.push(right);
            }
        }
        Ok(Subspace::from_vectors(n, inter))
    }

    /// Vectors of `self` completing a basis of `small` to a basis of `self`,
    /// i.e. representatives of a basis of `self / small`.
    pub fn quotient_basis(&self, small: &Subspace<K>) -> Result<Vec<Vec<K>>, LinalgError> {
        if self.ambient != small.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, small.ambient));
        }
        if !self.contains_subspace(small) {
            return Err(LinalgError::NotContained);
        }
        let mut span = small.clone();
        let mut reps = Vec::new();
        for v in self.basis_vectors() {
            if !span.contains(&v) {
                span = span.sum(&Subspace::from_vectors(self.ambient, vec![v.clone()]))?;
                reps.push(v);
            }
        }
        Ok(reps)
    }
}

impl<K: Scalar> fmt::Debug for Subspace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// A subquotient `numerator / denominator` of `K^n` with a projection onto
/// chosen coset representatives.
#[derive(Clone)]
pub struct Subquotient<K> {
    numerator: Subspace<K>,
    denominator: Subspace<K>,
    reps: Vec<Vec<K>>,
    /// Columns: `[reps | denominator basis]`; projection solves against it.
    proj_matrix: Matrix<K>,
}

impl<K: Scalar> Subquotient<K> {
    pub fn new(numerator: Subspace<K>, denominator: Subspace<K>) -> Result<Self, LinalgError> {
        if !numerator.contains_subspace(&denominator) {
            return Err(LinalgError::NotContained);
        }
        let reps = numerator.quotient_basis(&denominator)?;
        let n = numerator.ambient_dim();
        let k = reps.len();
        let m = denominator.dim();
        let proj_matrix = Matrix::from_fn(n, k + m, |i, j| {
            if j < k {
                reps[j][i].clone()
            } else {
                denominator.basis_matrix()[(j - k, i)].clone()
            }
        });
        Ok(Subquotient { numerator, denominator, reps, proj_matrix })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn numerator(&self) -> &Subspace<K> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace<K> {
        &self.denominator
    }

    pub fn representatives(&self) -> &[Vec<K>] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis.
    /// Returns `None` when `v` is not in the numerator.
    pub fn project(&self, v: &[K]) -> Option<Vec<K>> {
        if !self.numerator.contains(v) {
            return None;
        }
        let sol = solve(&self.proj_matrix, v).expect("v in numerator must be expressible");
        Some(sol[..self.dim()].to_vec())
    }

    /// Ambient vector representing the class with the given coordinates.
    pub fn include(&self, coords: &[K]) -> Vec<K> {
        assert_eq!(coords.len(), self.dim());
        let n = self.numerator.ambient_dim();
        let mut out = vec![K::zero(); n];
        for (c, rep) in coords.iter().zip(&self.reps) {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = out[j].clone() + c.clone() * rep[j].clone();
                out[j] = t;
            }
        }
        out
    }

    pub fn class_is_zero(&self, v: &[K]) -> Option<bool> {
        if !self.numerator.contains(v) {
            return None;
        }
        Some(self.denominator.contains(v))
    }
}

pub fn vec_add<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<K: Scalar>(c: &K, a: &[K]) -> Vec<K> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn vec_is_zero<K: Scalar>(a: &[K]) -> bool {
    a.iter().all(|x| x.is_zero())
}
