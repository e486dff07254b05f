//! Channel representations and conversions between them.
//!
//! Everything is Schrödinger picture: a channel maps `d_in × d_in` inputs to
//! `d_out × d_out` outputs. The Choi matrix is ordered input ⊗ output,
//! `C = Σ_ij E_ij ⊗ Φ(E_ij)`, and a Stinespring operator maps
//! `C^{d_in} → C^{d_out} ⊗ C^{env}` with `A x = Σ_j A_j x ⊗ e_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{fix_phase_largest, re, ComplexMatrix, Side, Tolerance, C64, ZERO};

/// Kraus decomposition `Φ(T) = Σ_j A_j T A_j*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KrausFields")]
pub struct KrausRep {
    d_in: usize,
    d_out: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausRep {
    /// Operators that are exactly zero are dropped; an empty result is an error.
    pub fn new(d_in: usize, d_out: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::DimensionMismatch("channel dimensions must be positive".into()));
        }
        for (k, a) in ops.iter().enumerate() {
            if a.dims() != (d_out, d_in) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {k} is {}x{}, expected {d_out}x{d_in}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let ops: Vec<ComplexMatrix> = ops.into_iter().filter(|a| a.max_abs() > 0.0).collect();
        if ops.is_empty() {
            return Err(Error::EmptyKraus);
        }
        Ok(Self { d_in, d_out, ops })
    }

    /// Infers dimensions from the first operator.
    pub fn from_ops(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let (d_out, d_in) = ops.first().ok_or(Error::EmptyKraus)?.dims();
        Self::new(d_in, d_out, ops)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.dims() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "input is {}x{}, channel expects {}x{}",
                t.rows(),
                t.cols(),
                self.d_in,
                self.d_in
            )));
        }
        Ok(self.apply_unchecked(t))
    }

    pub(crate) fn apply_unchecked(&self, t: &ComplexMatrix) -> ComplexMatrix {
        self.ops.iter().fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, a| acc + &(a * t) * &a.adjoint())
    }

    /// Heisenberg-picture dual, Kraus operators `A_j*`.
    pub fn dual(&self) -> KrausRep {
        KrausRep { d_in: self.d_out, d_out: self.d_in, ops: self.ops.iter().map(ComplexMatrix::adjoint).collect() }
    }

    /// `Σ A_j* A_j`.
    pub fn effect_sum(&self) -> ComplexMatrix {
        self.ops.iter().fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, a| acc + &a.adjoint() * a)
    }

    /// `Σ A_j A_j* = Φ(I)`.
    pub fn image_of_identity(&self) -> ComplexMatrix {
        self.ops.iter().fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, a| acc + a * &a.adjoint())
    }

    pub fn is_trace_preserving(&self, tol: &Tolerance) -> bool {
        self.effect_sum().distance(&ComplexMatrix::identity(self.d_in)) <= tol.eps_eq * (self.d_in as f64).sqrt()
    }

    pub fn is_unital(&self, tol: &Tolerance) -> bool {
        self.image_of_identity().distance(&ComplexMatrix::identity(self.d_out))
            <= tol.eps_eq * (self.d_out as f64).sqrt()
    }

    pub fn choi(&self) -> ChoiMatrix {
        let (di, dout) = (self.d_in, self.d_out);
        let mut mat = ComplexMatrix::zeros(di * dout, di * dout);
        for a in &self.ops {
            let v = kraus_vec(a);
            mat = mat + ComplexMatrix::outer(&v, &v);
        }
        ChoiMatrix { d_in: di, d_out: dout, mat }
    }

    pub fn choi_rank(&self, tol: &Tolerance) -> usize {
        self.choi().mat.rank_tol(tol)
    }

    /// Equivalent Kraus set of minimal length (Choi eigendecomposition).
    pub fn minimal(&self, tol: &Tolerance) -> KrausRep {
        self.choi().to_kraus_unchecked(tol)
    }

    /// Canonical Stinespring operator, one environment level per Kraus operator.
    pub fn stinespring(&self) -> StinespringRep {
        StinespringRep::from_kraus_ops(self.d_in, self.d_out, &self.ops)
    }

    /// Matrix of the map on column-stacked vectors: `vec(Φ(X)) = S vec(X)`.
    pub fn superoperator(&self) -> ComplexMatrix {
        let (di, dout) = (self.d_in, self.d_out);
        self.ops.iter().fold(ComplexMatrix::zeros(dout * dout, di * di), |acc, a| acc + a.conj().kron(a))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &KrausRep) -> Result<KrausRep> {
        if first.d_out != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.d_in, self.d_out, first.d_in, first.d_out
            )));
        }
        let ops = self.ops.iter().flat_map(|a| first.ops.iter().map(move |b| a * b)).collect();
        KrausRep::new(first.d_in, self.d_out, ops)
    }

    /// Multiplies every operator by the same scalar factor.
    pub fn scaled(&self, s: f64) -> Result<KrausRep> {
        KrausRep::new(self.d_in, self.d_out, self.ops.iter().map(|a| a.scale_real(s)).collect())
    }

    /// Choi matrices agree within `eps`, relative to `max(1, ‖C‖_F)`.
    pub fn same_channel(&self, other: &KrausRep, eps: f64) -> bool {
        self.d_in == other.d_in && self.d_out == other.d_out && self.choi().mat.approx_eq(&other.choi().mat, eps)
    }

    /// True when every operator has rank one.
    pub fn all_rank_one(&self, tol: &Tolerance) -> bool {
        self.ops.iter().all(|a| a.rank_tol(tol) == 1)
    }
}

#[derive(Deserialize)]
struct KrausFields {
    d_in: usize,
    d_out: usize,
    ops: Vec<ComplexMatrix>,
}

impl TryFrom<KrausFields> for KrausRep {
    type Error = Error;
    fn try_from(f: KrausFields) -> Result<Self> {
        KrausRep::new(f.d_in, f.d_out, f.ops)
    }
}

/// `vec` of a Kraus operator in Choi ordering: index `i * d_out + r` holds `A[r, i]`.
pub(crate) fn kraus_vec(a: &ComplexMatrix) -> Vec<C64> {
    let (dout, di) = a.dims();
    (0..di * dout).map(|k| a.get(k % dout, k / dout)).collect()
}

/// Column-stacked `vec`: index `col * rows + row`.
pub fn vec_col(m: &ComplexMatrix) -> Vec<C64> {
    let r = m.rows();
    (0..r * m.cols()).map(|k| m.get(k % r, k / r)).collect()
}

pub fn unvec_col(v: &[C64], rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |i, j| v[j * rows + i])
}

/// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)` on `C^{d_in} ⊗ C^{d_out}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    mat: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates shape and complete positivity.
    pub fn new(d_in: usize, d_out: usize, mat: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if d_in == 0 || d_out == 0 || mat.dims() != (d_in * d_out, d_in * d_out) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                d_in * d_out,
                d_in * d_out
            )));
        }
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        if !mat.is_psd(tol) {
            return Err(Error::NotPsd { what: "Choi matrix".into(), min_eigenvalue: mat.min_eigenvalue() });
        }
        if mat.max_abs() == 0.0 {
            return Err(Error::EmptyKraus);
        }
        Ok(Self { d_in, d_out, mat })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    /// Block `(i, j)`, equal to `Φ(E_ij)`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.mat.block(i * self.d_out, j * self.d_out, self.d_out, self.d_out)
    }

    /// `Φ(T) = Σ_ij T_ij Φ(E_ij)`.
    pub fn apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.dims() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!("input is {}x{}", t.rows(), t.cols())));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let tij = t.get(i, j);
                if tij != ZERO {
                    out = out + self.block(i, j).scale(tij);
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.mat.rank_tol(tol)
    }

    /// Minimal Kraus set from the eigendecomposition; fails if not PSD.
    pub fn to_kraus(&self, tol: &Tolerance) -> Result<KrausRep> {
        if !self.mat.is_psd(tol) {
            return Err(Error::NotPsd { what: "Choi matrix".into(), min_eigenvalue: self.mat.min_eigenvalue() });
        }
        Ok(self.to_kraus_unchecked(tol))
    }

    pub(crate) fn to_kraus_unchecked(&self, tol: &Tolerance) -> KrausRep {
        let (di, dout) = (self.d_in, self.d_out);
        let eig = self.mat.hermitian_part().eig_unchecked();
        let lmax = eig.values.first().copied().unwrap_or(0.0);
        let mut ops = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lmax <= 0.0 || lam <= tol.eps_rank * lmax {
                break;
            }
            let v = eig.vector(k);
            let s = lam.sqrt();
            let a = ComplexMatrix::from_fn(dout, di, |r, i| v[i * dout + r] * s);
            ops.push(fix_phase_largest(&a));
        }
        debug_assert!(!ops.is_empty(), "Choi matrices are nonzero by construction");
        KrausRep { d_in: di, d_out: dout, ops }
    }
}

/// Stinespring operator `a : C^{d_in} → C^{d_out} ⊗ C^{env}`.
///
/// Row index of `a` is `r * env_dim + j` for output level `r` and
/// environment level `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringRep {
    d_in: usize,
    d_out: usize,
    env_dim: usize,
    a: ComplexMatrix,
}

impl StinespringRep {
    pub fn new(d_in: usize, d_out: usize, env_dim: usize, a: ComplexMatrix) -> Result<Self> {
        if d_in == 0 || d_out == 0 || env_dim == 0 || a.dims() != (d_out * env_dim, d_in) {
            return Err(Error::DimensionMismatch(format!(
                "Stinespring operator is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                d_out * env_dim,
                d_in
            )));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { d_in, d_out, env_dim, a })
    }

    /// Builds `A x = Σ_j A_j x ⊗ e_j`, keeping zero operators as environment levels.
    pub fn from_kraus_ops(d_in: usize, d_out: usize, ops: &[ComplexMatrix]) -> Self {
        let env = ops.len();
        let a = ComplexMatrix::from_fn(d_out * env, d_in, |row, c| ops[row % env].get(row / env, c));
        Self { d_in, d_out, env_dim: env, a }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    /// `A_j` with `A_j[r, c] = a[r * env + j, c]`.
    pub fn channel_op(&self, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d_out, self.d_in, |r, c| self.a.get(r * self.env_dim + j, c))
    }

    /// `Ṽ_r` with `Ṽ_r[j, c] = a[r * env + j, c]`.
    pub fn complement_op(&self, r: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.env_dim, self.d_in, |j, c| self.a.get(r * self.env_dim + j, c))
    }

    pub fn channel(&self) -> Result<KrausRep> {
        KrausRep::new(self.d_in, self.d_out, (0..self.env_dim).map(|j| self.channel_op(j)).collect())
    }

    /// Complement obtained by tracing out the output system.
    pub fn complement(&self) -> Result<KrausRep> {
        KrausRep::new(self.d_in, self.env_dim, (0..self.d_out).map(|r| self.complement_op(r)).collect())
    }

    fn dilate(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.dims() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!("input is {}x{}", t.rows(), t.cols())));
        }
        Ok(&(&self.a * t) * &self.a.adjoint())
    }

    /// `tr_env(A T A*)`.
    pub fn apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dilate(t)?.partial_trace((self.d_out, self.env_dim), Side::Second)
    }

    /// `tr_out(A T A*)`.
    pub fn apply_complement(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dilate(t)?.partial_trace((self.d_out, self.env_dim), Side::First)
    }

    pub fn is_isometry(&self, tol: &Tolerance) -> bool {
        (&self.a.adjoint() * &self.a).approx_eq(&ComplexMatrix::identity(self.d_in), tol.eps_eq)
    }
}

/// One term `T ↦ tr(T F) R` of a Holevo form.
#[derive(Clone, Debug, PartialEq)]
pub struct HolevoPair {
    pub f: ComplexMatrix,
    pub r: ComplexMatrix,
}

/// Entanglement-breaking map written as `Φ(T) = Σ_j tr(T F_j) R_j` with
/// `F_j ≥ 0` and states `R_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolevoForm {
    d_in: usize,
    d_out: usize,
    pairs: Vec<HolevoPair>,
}

impl HolevoForm {
    pub fn new(pairs: Vec<HolevoPair>, tol: &Tolerance) -> Result<Self> {
        let first = pairs.first().ok_or(Error::EmptyHolevo)?;
        let (d_in, d_out) = (first.f.rows(), first.r.rows());
        for (k, p) in pairs.iter().enumerate() {
            if p.f.dims() != (d_in, d_in) || p.r.dims() != (d_out, d_out) {
                return Err(Error::DimensionMismatch(format!("Holevo pair {k} has inconsistent shapes")));
            }
            if !p.f.is_finite() || !p.r.is_finite() {
                return Err(Error::NonFinite);
            }
            if !p.f.is_psd(tol) {
                return Err(Error::NotPsd { what: format!("F_{k}"), min_eigenvalue: p.f.min_eigenvalue() });
            }
            if !p.r.is_psd(tol) {
                return Err(Error::NotPsd { what: format!("R_{k}"), min_eigenvalue: p.r.min_eigenvalue() });
            }
            let tr = p.r.trace();
            if (tr - re(1.0)).norm() > tol.eps_eq {
                return Err(Error::InvalidTrace(tr.re));
            }
        }
        Ok(Self { d_in, d_out, pairs })
    }

    pub fn from_pairs(pairs: Vec<(ComplexMatrix, ComplexMatrix)>, tol: &Tolerance) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(f, r)| HolevoPair { f, r }).collect(), tol)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn pairs(&self) -> &[HolevoPair] {
        &self.pairs
    }

    pub fn apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.dims() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!("input is {}x{}", t.rows(), t.cols())));
        }
        Ok(self
            .pairs
            .iter()
            .fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, p| acc + p.r.scale((t * &p.f).trace())))
    }

    /// Rank-one Kraus operators `|r_b⟩⟨f_a|` from the spectral decompositions
    /// of each pair, ordered by pair, then `a`, then `b`.
    pub fn to_kraus(&self, tol: &Tolerance) -> Result<KrausRep> {
        let mut ops = Vec::new();
        for p in &self.pairs {
            let fs = scaled_eigenvectors(&p.f, tol);
            let rs = scaled_eigenvectors(&p.r, tol);
            for f in &fs {
                for r in &rs {
                    ops.push(ComplexMatrix::outer(r, f));
                }
            }
        }
        KrausRep::new(self.d_in, self.d_out, ops)
    }
}

/// `√λ_k x_k` for the eigenpairs of a PSD matrix above the relative rank cutoff.
pub(crate) fn scaled_eigenvectors(m: &ComplexMatrix, tol: &Tolerance) -> Vec<Vec<C64>> {
    let eig = m.hermitian_part().eig_unchecked();
    let lmax = eig.values.first().copied().unwrap_or(0.0);
    eig.values
        .iter()
        .enumerate()
        .take_while(|(_, &l)| lmax > 0.0 && l > tol.eps_rank * lmax)
        .map(|(k, &l)| eig.vector(k).into_iter().map(|z| z * l.sqrt()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, ONE};
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, i: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::unit(n, i, j)
    }

    fn pinching(d: usize) -> KrausRep {
        KrausRep::from_ops((0..d).map(|i| e(d, i, i)).collect()).unwrap()
    }

    fn identity_channel(d: usize) -> KrausRep {
        KrausRep::from_ops(vec![ComplexMatrix::identity(d)]).unwrap()
    }

    fn arb_kraus(d_in: usize, d_out: usize, n: usize) -> impl Strategy<Value = KrausRep> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * d_in * d_out).prop_map(move |v| {
            let z: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            let ops =
                z.chunks(d_in * d_out).map(|ch| ComplexMatrix::from_row_major(d_out, d_in, ch).unwrap()).collect();
            KrausRep::new(d_in, d_out, ops).unwrap()
        })
    }

    fn arb_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let z: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            ComplexMatrix::from_row_major(n, n, &z).unwrap().hermitian_part()
        })
    }

    #[test]
    fn construction_drops_zeros_and_rejects_empty() {
        let k = KrausRep::new(2, 2, vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(KrausRep::new(2, 2, vec![ComplexMatrix::zeros(2, 2)]), Err(Error::EmptyKraus));
        assert!(matches!(KrausRep::new(2, 3, vec![ComplexMatrix::identity(2)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn apply_examples() {
        let t = ComplexMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(identity_channel(2).apply(&t).unwrap(), t);
        assert_eq!(pinching(2).apply(&t).unwrap(), ComplexMatrix::diag_real(&[1.0, 4.0]));
        assert!(pinching(2).apply(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn dual_examples() {
        let u = ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, 1.0)], vec![ONE, ZERO]]).unwrap();
        let k = KrausRep::from_ops(vec![u.clone()]).unwrap();
        assert_eq!(k.dual().ops()[0], u.adjoint());
        assert!(k.dual().dual().same_channel(&k, 1e-15));
        let g: f64 = 0.3;
        let tp = KrausRep::from_ops(vec![
            ComplexMatrix::diag_real(&[1.0, (1.0 - g).sqrt()]),
            e(2, 0, 1).scale_real(g.sqrt()),
        ])
        .unwrap();
        assert!(tp.is_trace_preserving(&tol()));
        assert!(tp.dual().is_unital(&tol()));
    }

    #[test]
    fn choi_examples() {
        let c2 = identity_channel(2).choi();
        let w = vec![ONE, ZERO, ZERO, ONE];
        assert_eq!(c2.mat(), &ComplexMatrix::outer(&w, &w));
        assert_eq!(c2.rank(&tol()), 1);
        let cp = pinching(3).choi();
        let want = (0..3).fold(ComplexMatrix::zeros(9, 9), |acc, i| acc + e(3, i, i).kron(&e(3, i, i)));
        assert_eq!(cp.mat(), &want);
        assert_eq!(cp.rank(&tol()), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(cp.block(i, j), pinching(3).apply(&e(3, i, j)).unwrap());
            }
        }
    }

    #[test]
    fn kraus_from_choi_examples() {
        let k = identity_channel(2).choi().to_kraus(&tol()).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.ops()[0].approx_eq(&ComplexMatrix::identity(2), 1e-12));
        let k = pinching(3).choi().to_kraus(&tol()).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.all_rank_one(&tol()));
        assert!(k.same_channel(&pinching(3), 1e-12));
        let bad = ChoiMatrix { d_in: 1, d_out: 2, mat: ComplexMatrix::diag_real(&[1.0, -1.0]) };
        assert!(matches!(bad.to_kraus(&tol()), Err(Error::NotPsd { .. })));
        assert!(ChoiMatrix::new(1, 2, ComplexMatrix::diag_real(&[1.0, -1.0]), &tol()).is_err());
    }

    #[test]
    fn stinespring_examples() {
        let v = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]);
        let s = KrausRep::from_ops(vec![v.clone()]).unwrap().stinespring();
        assert_eq!((s.env_dim(), s.a()), (1, &v));
        assert!(s.is_isometry(&tol()));
        let s = pinching(2).stinespring();
        let want = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(s.a(), &want);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(s.apply(&e(2, i, j)).unwrap(), pinching(2).apply(&e(2, i, j)).unwrap());
            }
        }
    }

    #[test]
    fn holevo_examples() {
        let u = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let v = vec![ONE, ZERO, ZERO];
        let h =
            HolevoForm::from_pairs(vec![(ComplexMatrix::outer(&u, &u), ComplexMatrix::outer(&v, &v))], &tol()).unwrap();
        let k = h.to_kraus(&tol()).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k.same_channel(&KrausRep::from_ops(vec![ComplexMatrix::outer(&v, &u)]).unwrap(), 1e-12));

        let h = HolevoForm::from_pairs(
            vec![(ComplexMatrix::identity(2), ComplexMatrix::identity(2).scale_real(0.5))],
            &tol(),
        )
        .unwrap();
        let k = h.to_kraus(&tol()).unwrap();
        assert_eq!(k.len(), 4);
        let t = ComplexMatrix::from_real(&[&[0.3, 0.1], &[0.1, 0.7]]);
        assert!(k.apply(&t).unwrap().approx_eq(&h.apply(&t).unwrap(), 1e-12));
        assert!(k.is_trace_preserving(&tol()));

        let unnormalized =
            HolevoForm::from_pairs(vec![(ComplexMatrix::identity(2), ComplexMatrix::identity(2))], &tol());
        assert!(matches!(unnormalized, Err(Error::InvalidTrace(_))));
        let negative = HolevoForm::from_pairs(
            vec![(ComplexMatrix::diag_real(&[1.0, -1.0]), ComplexMatrix::identity(2).scale_real(0.5))],
            &tol(),
        );
        assert!(matches!(negative, Err(Error::NotPsd { .. })));
    }

    #[test]
    fn unital_and_trace_preserving_examples() {
        let u = ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, 1.0)], vec![ONE, ZERO]]).unwrap();
        let k = KrausRep::from_ops(vec![u]).unwrap();
        assert!(k.is_trace_preserving(&tol()) && k.is_unital(&tol()));
        // T ↦ ⟨e₁, T e₁⟩ I: unital, not trace preserving; its dual is trace preserving
        let d = 3;
        let k = KrausRep::from_ops((0..d).map(|i| e(d, i, 0)).collect()).unwrap();
        assert!(k.is_unital(&tol()));
        assert!(!k.is_trace_preserving(&tol()));
        assert!(k.dual().is_trace_preserving(&tol()));
    }

    #[test]
    fn choi_rank_examples() {
        let u = ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, 1.0)], vec![ONE, ZERO]]).unwrap();
        assert_eq!(KrausRep::from_ops(vec![u]).unwrap().choi_rank(&tol()), 1);
        let s = 1.0 / 2f64.sqrt();
        let redundant = KrausRep::from_ops(vec![ComplexMatrix::identity(2).scale_real(s); 2]).unwrap();
        assert_eq!(redundant.choi_rank(&tol()), 1);
    }

    #[test]
    fn superoperator_matches_apply() {
        let k = KrausRep::from_ops(vec![ComplexMatrix::from_rows(&[
            vec![ONE, c(0.5, -1.0)],
            vec![c(0.0, 2.0), ZERO],
            vec![re(0.3), re(-0.7)],
        ])
        .unwrap()])
        .unwrap();
        let t = ComplexMatrix::from_rows(&[vec![re(1.0), c(0.2, 0.4)], vec![c(-1.0, 0.1), re(0.5)]]).unwrap();
        let out = unvec_col(&k.superoperator().apply_vec(&vec_col(&t)), 3, 3);
        assert!(out.approx_eq(&k.apply(&t).unwrap(), 1e-14));
    }

    proptest! {
        #[test]
        fn choi_round_trip(k in arb_kraus(2, 3, 3)) {
            let c1 = k.choi();
            let c2 = c1.to_kraus(&tol()).unwrap().choi();
            prop_assert!(c2.mat().approx_eq(c1.mat(), 1e-9));
        }

        #[test]
        fn duality_pairing(k in arb_kraus(3, 2, 2), x in arb_hermitian(2), t in arb_hermitian(3)) {
            let lhs = (&k.dual().apply(&x).unwrap() * &t).trace();
            let rhs = (&x * &k.apply(&t).unwrap()).trace();
            prop_assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm().max(1.0));
        }

        #[test]
        fn stinespring_consistency(k in arb_kraus(2, 2, 3)) {
            let s = k.stinespring();
            for i in 0..2 {
                for j in 0..2 {
                    let t = ComplexMatrix::unit(2, i, j);
                    prop_assert!(s.apply(&t).unwrap().approx_eq(&k.apply(&t).unwrap(), 1e-12));
                }
            }
        }

        #[test]
        fn holevo_ops_rank_one(a in arb_hermitian(2), b in arb_hermitian(3)) {
            let f = &a * &a;
            let r0 = &b * &b;
            let tr = r0.trace().re.max(1e-6);
            let h = HolevoForm::from_pairs(vec![(f.clone(), r0.scale_real(1.0 / tr)), (ComplexMatrix::identity(2), ComplexMatrix::identity(3).scale_real(1.0 / 3.0))], &tol()).unwrap();
            let k = h.to_kraus(&tol()).unwrap();
            prop_assert!(k.all_rank_one(&tol()));
            let t = &a * &a.adjoint();
            prop_assert!(k.apply(&t).unwrap().approx_eq(&h.apply(&t).unwrap(), 1e-9));
        }

        #[test]
        fn choi_rank_unitary_mixing(k in arb_kraus(2, 2, 2), theta in 0.0f64..std::f64::consts::TAU) {
            let (co, si) = (theta.cos(), theta.sin());
            let ops = k.ops();
            let mixed = KrausRep::from_ops(vec![
                ops[0].scale_real(co) + ops[1].scale(c(0.0, si)),
                ops[0].scale(c(0.0, si)) + ops[1].scale_real(co),
            ]).unwrap();
            prop_assert_eq!(mixed.choi_rank(&tol()), k.choi_rank(&tol()));
            prop_assert!(mixed.same_channel(&k, 1e-9));
        }
    }
}
