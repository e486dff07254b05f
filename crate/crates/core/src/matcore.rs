//! Dense complex linear algebra used throughout the crate.
//!
//! [`ComplexMatrix`] wraps a `nalgebra` dense matrix and adds the tensor
//! operations needed for channel work: Kronecker products, partial traces,
//! partial transposes and tolerance-aware spectral predicates.
//!
//! Tensor convention: for `kron(a, b)` the row index is `i * b.rows() + k`,
//! so in a bipartite matrix on `C^{d_a} ⊗ C^{d_b}` block `(i, j)` is the
//! `d_b × d_b` submatrix starting at `(i * d_b, j * d_b)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Numerical thresholds shared by every tolerance-aware operation.
///
/// `eps_rank` is relative to the largest singular value. `eps_psd` and
/// `eps_eq` are scaled by `max(1, ‖m‖)` of the matrix under test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_rank: f64,
    pub eps_psd: f64,
    pub eps_eq: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;
    pub const MAX_EPS: f64 = 1e-3;

    pub fn new(eps_rank: f64, eps_psd: f64, eps_eq: f64) -> Result<Self> {
        for (name, value) in [("eps_rank", eps_rank), ("eps_psd", eps_psd), ("eps_eq", eps_eq)] {
            if !(value > 0.0 && value <= Self::MAX_EPS) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(Self { eps_rank, eps_psd, eps_eq })
    }

    /// Same tolerance with a different equality threshold.
    pub fn with_eq(self, eps_eq: f64) -> Result<Self> {
        Self::new(self.eps_rank, self.eps_psd, eps_eq)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps_rank: Self::DEFAULT_EPS, eps_psd: Self::DEFAULT_EPS, eps_eq: Self::DEFAULT_EPS }
    }
}

/// Which tensor factor a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; column `k` of `vectors` is the
/// eigenvector for `values[k]`, with its first non-negligible component made
/// real and positive.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Dense complex matrix with explicit dimensions and finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, " ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries, rejecting bad lengths and NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount { expected: rows * cols, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), cols, &flat)
    }

    /// Real-valued convenience constructor; panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let data: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| re(x)).collect()).collect();
        Self::from_rows(&data).expect("well-formed real matrix")
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let v: Vec<C64> = entries.iter().map(|&x| re(x)).collect();
        Self::diag(&v)
    }

    /// Matrix unit `E_ij` of size `n × n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, n, |a, b| if a == i && b == j { ONE } else { ZERO })
    }

    /// Column vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Self(DMatrix::from_column_slice(v.len(), 1, v))
    }

    /// Matrix with the given columns.
    pub fn from_columns(cols: &[Vec<C64>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn row_major(&self) -> Vec<C64> {
        (0..self.rows()).flat_map(|i| (0..self.cols()).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_F`; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dims(), other.dims(), "distance between differently shaped matrices");
        (self - other).frobenius_norm()
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dims() == other.dims() && self.distance(other) <= eps * self.frobenius_norm().max(1.0)
    }

    /// Sub-block with the given row/column offsets and size.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.view((r0, c0), (rows, cols)).into_owned())
    }

    /// Principal submatrix on the given index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * re(0.5))
    }

    /// `‖m − m*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: &Tolerance) -> bool {
        self.hermitian_defect() <= tol.eps_eq * self.frobenius_norm().max(1.0)
    }

    /// Standard Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Partial trace over one factor of `C^{d_a} ⊗ C^{d_b}`.
    pub fn partial_trace(&self, dims: (usize, usize), side: Side) -> Result<Self> {
        let (da, db) = dims;
        self.check_bipartite(dims)?;
        Ok(match side {
            Side::Second => Self::from_fn(da, da, |i, j| (0..db).map(|k| self.get(i * db + k, j * db + k)).sum()),
            Side::First => Self::from_fn(db, db, |k, l| (0..da).map(|i| self.get(i * db + k, i * db + l)).sum()),
        })
    }

    /// Transpose on the first tensor factor: block `(i, j)` ↔ block `(j, i)`.
    pub fn partial_transpose(&self, dims: (usize, usize)) -> Result<Self> {
        let (_, db) = dims;
        self.check_bipartite(dims)?;
        Ok(Self::from_fn(self.rows(), self.cols(), |r, c| {
            let (i, k) = (r / db, r % db);
            let (j, l) = (c / db, c % db);
            self.get(j * db + k, i * db + l)
        }))
    }

    fn check_bipartite(&self, (da, db): (usize, usize)) -> Result<()> {
        if !self.is_square() || self.rows() != da * db || da == 0 || db == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not on C^{da} ⊗ C^{db}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }

    /// Entrywise product.
    pub fn schur_product(&self, other: &Self) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!("schur product of {:?} and {:?}", self.dims(), other.dims())));
        }
        Ok(Self(self.0.component_mul(&other.0)))
    }

    /// Diagonal part as a matrix.
    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(self.rows(), self.cols(), |i, j| if i == j { self.get(i, j) } else { ZERO })
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `eps_rank · σ_max`.
    pub fn rank_tol(&self, tol: &Tolerance) -> usize {
        let s = self.singular_values();
        let smax = s.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        s.iter().filter(|&&x| x > tol.eps_rank * smax).count()
    }

    /// Eigendecomposition of a Hermitian matrix (within `eps_eq`).
    pub fn eig_hermitian(&self, tol: &Tolerance) -> Result<HermitianEigen> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows(), self.cols()));
        }
        if !self.is_hermitian(tol) {
            return Err(Error::NotHermitian(self.hermitian_defect()));
        }
        Ok(self.hermitian_part().eig_unchecked())
    }

    /// Eigendecomposition of a matrix already known to be Hermitian.
    pub(crate) fn eig_unchecked(&self) -> HermitianEigen {
        let n = self.rows();
        let eig = nalgebra::SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let cols: Vec<Vec<C64>> = order
            .iter()
            .map(|&k| {
                let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
                fix_phase_first(v)
            })
            .collect();
        HermitianEigen { values, vectors: Self::from_columns(&cols, n) }
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_part().eig_unchecked().values.last().copied().unwrap_or(0.0)
    }

    /// PSD test: Hermitian within `eps_eq`, then min eigenvalue of the
    /// symmetrized matrix at least `−eps_psd · max(1, ‖m‖₂)`.
    pub fn is_psd(&self, tol: &Tolerance) -> bool {
        self.psd_margin(tol).is_some_and(|m| m >= 0.0)
    }

    /// Scaled slack of the PSD test: `λ_min + eps_psd·scale`, or `None` when
    /// the matrix is not square or not Hermitian within tolerance.
    pub fn psd_margin(&self, tol: &Tolerance) -> Option<f64> {
        if !self.is_square() || !self.is_hermitian(tol) {
            return None;
        }
        let eig = self.hermitian_part().eig_unchecked();
        let scale = eig.values.iter().map(|x| x.abs()).fold(1.0, f64::max);
        Some(eig.values.last().copied().unwrap_or(0.0) + tol.eps_psd * scale)
    }

    /// Hermitian square root of a PSD matrix; negative noise eigenvalues clamp to zero.
    pub fn sqrt_psd(&self, tol: &Tolerance) -> Result<Self> {
        if !self.is_psd(tol) {
            return Err(Error::NotPsd { what: "matrix".into(), min_eigenvalue: self.min_eigenvalue() });
        }
        let eig = self.hermitian_part().eig_unchecked();
        Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
    }

    /// Moore–Penrose pseudo-inverse with relative singular-value cutoff.
    pub fn pinv(&self, rel_cutoff: f64) -> Self {
        let svd = self.0.clone().svd(true, true);
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let inv: DVector<C64> =
            svd.singular_values.map(|s| if smax > 0.0 && s > rel_cutoff * smax { re(1.0 / s) } else { ZERO });
        Self(v_t.adjoint() * DMatrix::from_diagonal(&inv) * u.adjoint())
    }

    /// Orthonormal basis of the orthogonal complement of the column span of
    /// an isometry `q` (`n × k`), obtained by Gram–Schmidt on the standard basis.
    pub fn orthonormal_completion(q: &Self) -> Self {
        let n = q.rows();
        let mut basis: Vec<Vec<C64>> = (0..q.cols()).map(|j| q.column(j)).collect();
        let mut extra: Vec<Vec<C64>> = Vec::new();
        for seed in 0..n {
            if basis.len() == n {
                break;
            }
            let mut v: Vec<C64> = (0..n).map(|i| if i == seed { ONE } else { ZERO }).collect();
            for _ in 0..2 {
                for b in &basis {
                    let p = inner(b, &v);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= p * bi;
                    }
                }
            }
            let nv = norm(&v);
            if nv > 1e-6 {
                let v: Vec<C64> = v.iter().map(|z| z / nv).collect();
                basis.push(v.clone());
                extra.push(v);
            }
        }
        Self::from_columns(&extra, n)
    }

    /// Concatenate columns of `self` and `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows(), other.rows());
        let (c1, c2) = (self.cols(), other.cols());
        Self::from_fn(self.rows(), c1 + c2, |i, j| if j < c1 { self.get(i, j) } else { other.get(i, j - c1) })
    }

    /// Stack rows of `self` above `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.cols());
        let r1 = self.rows();
        Self::from_fn(r1 + other.rows(), self.cols(), |i, j| if i < r1 { self.get(i, j) } else { other.get(i - r1, j) })
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len());
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }
}

impl HermitianEigen {
    /// `U f(Λ) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let d: Vec<C64> = self.values.iter().map(|&x| re(f(x))).collect();
        let u = &self.vectors;
        let ud = ComplexMatrix::from_fn(n, n, |i, j| u.get(i, j) * d[j]);
        &ud * &u.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// `⟨a, b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Multiply a vector so that its first component with magnitude above
/// `1e-8 · max|v_i|` is real and positive.
pub fn fix_phase_first(mut v: Vec<C64>) -> Vec<C64> {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return v;
    }
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-8 * m) {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
    v
}

/// Multiply a matrix so that its largest-magnitude entry (first in row-major
/// order among near-ties) is real and positive.
pub fn fix_phase_largest(m: &ComplexMatrix) -> ComplexMatrix {
    let entries = m.row_major();
    let mx = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if mx == 0.0 {
        return m.clone();
    }
    let z = entries.iter().copied().find(|z| z.norm() >= mx * (1.0 - 1e-9)).unwrap_or(ONE);
    m.scale(z.conj() / z.norm())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Serialized as an array of rows of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            self.to_rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<C64>> = rows.into_iter().map(|r| r.into_iter().map(|[a, b]| c(a, b)).collect()).collect();
        ComplexMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "cvec")]` for complex vectors as `[re, im]` lists.
pub mod cvec {
    use super::{c, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        Ok(Vec::<[f64; 2]>::deserialize(d)?.into_iter().map(|[a, b]| c(a, b)).collect())
    }
}

/// `#[serde(with = "cvec_list")]` for lists of complex vectors.
pub mod cvec_list {
    use super::{c, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        Ok(Vec::<Vec<[f64; 2]>>::deserialize(d)?
            .into_iter()
            .map(|x| x.into_iter().map(|[a, b]| c(a, b)).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn bell_projector() -> ComplexMatrix {
        let s = 1.0 / 2f64.sqrt();
        let v = vec![re(s), ZERO, ZERO, re(s)];
        ComplexMatrix::outer(&v, &v)
    }

    fn flip(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d * d, d * d, |r, c| {
            let (i, k) = (r / d, r % d);
            let (j, l) = (c / d, c % d);
            if i == l && k == j {
                ONE
            } else {
                ZERO
            }
        })
    }

    fn arb_matrix(n: usize, m: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m).prop_map(move |v| {
            let e: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            ComplexMatrix::from_row_major(n, m, &e).unwrap()
        })
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-9, 1e-9, 1e-9).is_ok());
        assert!(Tolerance::new(0.0, 1e-9, 1e-9).is_err());
        assert!(Tolerance::new(1e-9, 1e-2, 1e-9).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, 2, &[ONE; 3]),
            Err(Error::EntryCount { expected: 4, found: 3 })
        ));
        assert_eq!(ComplexMatrix::from_row_major(1, 1, &[c(f64::NAN, 0.0)]), Err(Error::NonFinite));
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        let k = ComplexMatrix::unit(2, 0, 0).kron(&ComplexMatrix::unit(2, 1, 1));
        assert_eq!(k, ComplexMatrix::unit(4, 1, 1));
        let k = ComplexMatrix::diag_real(&[1.0, 2.0]).kron(&ComplexMatrix::diag_real(&[3.0, 4.0]));
        assert_eq!(k, ComplexMatrix::diag_real(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn partial_trace_examples() {
        let p = ComplexMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let q = ComplexMatrix::from_real(&[&[2.0, -1.0], &[0.5, 5.0]]);
        let pt = p.kron(&q).partial_trace((2, 2), Side::Second).unwrap();
        assert!(pt.approx_eq(&p.scale_real(7.0), 1e-14));
        let pt = p.kron(&q).partial_trace((2, 2), Side::First).unwrap();
        assert!(pt.approx_eq(&q.scale_real(5.0), 1e-14));
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(i4.partial_trace((2, 2), Side::First).unwrap(), ComplexMatrix::identity(2).scale_real(2.0));
        let r = bell_projector().partial_trace((2, 2), Side::Second).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
        assert!(i4.partial_trace((3, 2), Side::First).is_err());
    }

    #[test]
    fn partial_transpose_examples() {
        let p = ComplexMatrix::from_rows(&[vec![ONE, c(0.0, 2.0)], vec![c(3.0, 1.0), re(4.0)]]).unwrap();
        let q = ComplexMatrix::from_real(&[&[2.0, -1.0], &[0.5, 5.0]]);
        assert_eq!(p.kron(&q).partial_transpose((2, 2)).unwrap(), p.transpose().kron(&q));
        let pt = bell_projector().partial_transpose((2, 2)).unwrap();
        assert!((pt.min_eigenvalue() + 0.5).abs() < 1e-12);
        // partial transpose of |ω⟩⟨ω| is the flip
        let w = vec![ONE, ZERO, ZERO, ONE];
        assert_eq!(ComplexMatrix::outer(&w, &w).partial_transpose((2, 2)).unwrap(), flip(2));
    }

    #[test]
    fn eig_examples() {
        let e = ComplexMatrix::identity(3).eig_hermitian(&tol()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let e = ComplexMatrix::diag_real(&[2.0, 0.0, -1.0]).eig_hermitian(&tol()).unwrap();
        assert_eq!(e.values, vec![2.0, 0.0, -1.0]);
        assert_eq!(e.vector(0), vec![ONE, ZERO, ZERO]);
        assert_eq!(e.vector(2), vec![ZERO, ZERO, ONE]);
        let e = flip(2).eig_hermitian(&tol()).unwrap();
        let want = [1.0, 1.0, 1.0, -1.0];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let nonherm = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(nonherm.eig_hermitian(&tol()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_phase_is_fixed() {
        let m = ComplexMatrix::from_rows(&[vec![re(2.0), c(0.0, 1.0)], vec![c(0.0, -1.0), re(2.0)]]).unwrap();
        let e = m.eig_hermitian(&tol()).unwrap();
        for k in 0..2 {
            let v = e.vector(k);
            assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ComplexMatrix::zeros(3, 3).rank_tol(&tol()), 0);
        let v = vec![ONE, c(2.0, 1.0)];
        let w = vec![c(0.0, 1.0), re(3.0), re(-1.0)];
        assert_eq!(ComplexMatrix::outer(&v, &w).rank_tol(&tol()), 1);
        let noise =
            ComplexMatrix::from_fn(4, 4, |i, j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, (i as f64 - j as f64) * 0.3));
        let m = ComplexMatrix::identity(4) + noise.scale_real(1e-14);
        assert_eq!(m.rank_tol(&tol()), 4);
    }

    #[test]
    fn psd_examples() {
        assert!(ComplexMatrix::identity(3).is_psd(&tol()));
        assert!(!ComplexMatrix::diag_real(&[1.0, -1.0]).is_psd(&tol()));
        let vs = ComplexMatrix::from_fn(3, 4, |i, j| c((i + 2 * j) as f64 - 2.5, (i * j) as f64 * 0.1));
        let gram = &vs.adjoint() * &vs;
        assert!(gram.is_psd(&tol()));
        // asymmetric beyond eps_eq fails even if the symmetrized part is PSD
        let bad = ComplexMatrix::from_real(&[&[1.0, 1e-3], &[0.0, 1.0]]);
        assert!(!bad.is_psd(&tol()));
    }

    #[test]
    fn schur_examples() {
        let t = ComplexMatrix::from_rows(&[vec![re(1.0), c(2.0, 1.0)], vec![c(-1.0, 0.5), re(4.0)]]).unwrap();
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| ONE);
        assert_eq!(ones.schur_product(&t).unwrap(), t);
        assert_eq!(ComplexMatrix::identity(2).schur_product(&t).unwrap(), t.diagonal_part());
        assert!(ones.schur_product(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn trace_norm_examples() {
        assert!((ComplexMatrix::identity(5).trace_norm() - 5.0).abs() < 1e-12);
        let v = vec![c(1.0, 1.0), re(2.0)];
        assert!((ComplexMatrix::outer(&v, &v).trace_norm() - 6.0).abs() < 1e-12);
        assert!((ComplexMatrix::diag_real(&[1.0, -2.0, 3.0]).trace_norm() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn completion_is_orthonormal() {
        let s = 1.0 / 2f64.sqrt();
        let q = ComplexMatrix::column_vector(&[re(s), re(s), ZERO]);
        let comp = ComplexMatrix::orthonormal_completion(&q);
        let full = q.hstack(&comp);
        assert!((&full.adjoint() * &full).approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    proptest! {
        #[test]
        fn partial_transpose_is_involution(m in arb_matrix(6, 6)) {
            let back = m.partial_transpose((2, 3)).unwrap().partial_transpose((2, 3)).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn partial_trace_preserves_trace(m in arb_matrix(6, 6)) {
            for side in [Side::First, Side::Second] {
                let t = m.partial_trace((3, 2), side).unwrap().trace();
                prop_assert!((t - m.trace()).norm() <= 1e-9 * m.frobenius_norm().max(1.0));
            }
        }

        #[test]
        fn eig_reconstructs(a in arb_matrix(5, 5)) {
            let h = a.hermitian_part();
            let e = h.eig_hermitian(&tol()).unwrap();
            prop_assert!(e.reconstruct().distance(&h) <= 1e-9 * h.frobenius_norm().max(1.0));
            let u = &e.vectors;
            prop_assert!((&u.adjoint() * u).approx_eq(&ComplexMatrix::identity(5), 1e-9));
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn psd_principal_submatrices(a in arb_matrix(4, 4)) {
            let p = &a.adjoint() * &a;
            prop_assert!(p.is_psd(&tol()));
            for idx in [vec![0], vec![1, 3], vec![0, 2, 3]] {
                prop_assert!(p.principal_submatrix(&idx).is_psd(&tol()));
            }
        }

        #[test]
        fn schur_of_psd_is_psd(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
            let pa = &a.adjoint() * &a;
            let pb = &b.adjoint() * &b;
            prop_assert!(pa.schur_product(&pb).unwrap().is_psd(&tol()));
        }

        #[test]
        fn trace_norm_triangle(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
            let lhs = (&a + &b).trace_norm();
            prop_assert!(lhs <= a.trace_norm() + b.trace_norm() + 1e-9);
        }
    }
}
