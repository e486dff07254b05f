//! Named channel families and seeded random generators.
//!
//! Random generators draw from `ChaCha8Rng::seed_from_u64(seed)`; the
//! algorithm name is exported as [`PRNG_ALGORITHM`] so fixtures can record it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c, cvec_list, inner, norm, re, ComplexMatrix, Tolerance, C64, ONE, ZERO};
use crate::reprs::{ChoiMatrix, HolevoForm, HolevoPair, KrausRep};

pub const PRNG_ALGORITHM: &str = "chacha8/rand0.9";

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_psd(a: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    if !a.is_psd(tol) {
        return Err(Error::NotPsd { what: "Schur symbol".into(), min_eigenvalue: a.min_eigenvalue() });
    }
    Ok(())
}

/// `B` with `B*B = aᵀ`, the Hermitian square root of `aᵀ`.
pub fn gram_factor(a: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    check_psd(a, tol)?;
    a.transpose().sqrt_psd(tol)
}

/// Schur multiplier `T ↦ a ⊙ T`, Kraus operators `A_k = diag(row k of B)`.
pub fn schur_map(a: &ComplexMatrix, tol: &Tolerance) -> Result<KrausRep> {
    let b = gram_factor(a, tol)?;
    let d = a.rows();
    let ops = (0..d).map(|k| ComplexMatrix::diag(&(0..d).map(|j| b.get(k, j)).collect::<Vec<_>>())).collect();
    KrausRep::new(d, d, ops)
}

/// Vectors `z_k = B e_k` of the canonical complement of [`schur_map`], with
/// `⟨z_i, z_j⟩ = a_ji`. The environment index of the dilation is the Kraus
/// index, which is what puts the transpose on the Gram matrix.
pub fn schur_complement_vectors(a: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
    let b = gram_factor(a, tol)?;
    Ok((0..a.rows()).map(|k| b.column(k)).collect())
}

/// Complement of [`schur_map`] from its canonical dilation:
/// `T ↦ Σ_k ⟨e_k, T e_k⟩ |z_k⟩⟨z_k|`.
pub fn schur_complement_map(a: &ComplexMatrix, tol: &Tolerance) -> Result<KrausRep> {
    schur_complement_from_vectors(&schur_complement_vectors(a, tol)?)
}

/// `T ↦ Σ_j ⟨e_j, T e_j⟩ |v_j⟩⟨v_j|` for arbitrary vectors `v_j`.
pub fn schur_complement_from_vectors(vs: &[Vec<C64>]) -> Result<KrausRep> {
    let d = vs.len();
    let dout = vs.first().map_or(0, Vec::len);
    if vs.iter().any(|v| v.len() != dout) {
        return Err(Error::DimensionMismatch("vectors of different lengths".into()));
    }
    let ops = vs.iter().enumerate().map(|(j, v)| ComplexMatrix::outer(v, &basis(d, j))).collect();
    KrausRep::new(d, dout, ops)
}

/// Holevo form `F_j = ‖v_j‖² E_jj`, `R_j = |v_j⟩⟨v_j| / ‖v_j‖²`; zero vectors are skipped.
pub fn schur_complement_holevo(vs: &[Vec<C64>], tol: &Tolerance) -> Result<HolevoForm> {
    let d = vs.len();
    let pairs = vs
        .iter()
        .enumerate()
        .filter(|(_, v)| norm(v) > 0.0)
        .map(|(j, v)| {
            let n2 = norm(v).powi(2);
            HolevoPair {
                f: ComplexMatrix::unit(d, j, j).scale_real(n2),
                r: ComplexMatrix::outer(v, v).scale_real(1.0 / n2),
            }
        })
        .collect();
    HolevoForm::new(pairs, tol)
}

pub fn basis(d: usize, j: usize) -> Vec<C64> {
    (0..d).map(|i| if i == j { ONE } else { ZERO }).collect()
}

/// The flip operator on `C^d ⊗ C^d`.
pub fn flip(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, col| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (col / d, col % d);
        if i == l && k == j {
            ONE
        } else {
            ZERO
        }
    })
}

/// `|ω⟩⟨ω|` for `ω = Σ_j e_j ⊗ e_j`.
pub fn omega_projector(d: usize) -> ComplexMatrix {
    let w: Vec<C64> = (0..d * d).map(|k| if k / d == k % d { ONE } else { ZERO }).collect();
    ComplexMatrix::outer(&w, &w)
}

fn werner_holevo_choi(d: usize, lambda: f64) -> ComplexMatrix {
    (ComplexMatrix::identity(d * d) - flip(d).scale_real(lambda)).scale_real(1.0 / (d as f64 - lambda))
}

/// `W_λ(X) = (tr(X) I − λ Xᵀ) / (d − λ)` for `λ ∈ [−1, 1/d]`.
pub fn werner_holevo(d: usize, lambda: f64, tol: &Tolerance) -> Result<KrausRep> {
    if d < 2 || !(-1.0..=1.0 / d as f64).contains(&lambda) {
        return Err(Error::ParameterOutOfRange(format!(
            "Werner-Holevo needs d >= 2 and lambda in [-1, 1/d], got d = {d}, lambda = {lambda}"
        )));
    }
    werner_holevo_unchecked(d, lambda, tol)
}

/// Same formula on the completely positive range `λ ∈ [−1, 1]`.
pub fn werner_holevo_cp(d: usize, lambda: f64, tol: &Tolerance) -> Result<KrausRep> {
    if d < 2 || !(-1.0..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange(format!(
            "Werner-Holevo (CP range) needs d >= 2 and lambda in [-1, 1], got d = {d}, lambda = {lambda}"
        )));
    }
    werner_holevo_unchecked(d, lambda, tol)
}

fn werner_holevo_unchecked(d: usize, lambda: f64, tol: &Tolerance) -> Result<KrausRep> {
    ChoiMatrix::new(d, d, werner_holevo_choi(d, lambda), tol)?.to_kraus(tol)
}

/// `Φ_{λ,d}(X) = (tr(X) I + λ (X + Xᵀ)) / (2λ + d)` for `λ ∈ [−1/(d+1), 1]`.
pub fn phi_lambda(d: usize, lambda: f64, tol: &Tolerance) -> Result<KrausRep> {
    if d < 2 || !(-1.0 / (d as f64 + 1.0)..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange(format!(
            "phi-lambda needs d >= 2 and lambda in [-1/(d+1), 1], got d = {d}, lambda = {lambda}"
        )));
    }
    let s = 1.0 / (2.0 * lambda + d as f64);
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let eij = ComplexMatrix::unit(d, i, j);
            let mut out = (&eij + &eij.transpose()).scale_real(lambda);
            if i == j {
                out = out + ComplexMatrix::identity(d);
            }
            choi = choi + eij.kron(&out.scale_real(s));
        }
    }
    ChoiMatrix::new(d, d, choi, tol)?.to_kraus(tol)
}

/// Diagonal pinching, Kraus operators `E_ii`.
pub fn pinching(d: usize) -> Result<KrausRep> {
    KrausRep::new(d, d, (0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect())
}

/// Pure map `T ↦ a T a*`.
pub fn ad_operator(a: &ComplexMatrix) -> Result<KrausRep> {
    KrausRep::from_ops(vec![a.clone()])
}

/// Direct sum of pure maps `X ↦ ⊕_i V_i* X V_i` and the block-trace map `Γ`
/// with `Γ ∘ Φ = Φ^c`.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub channel: KrausRep,
    pub degrading: KrausRep,
    /// Column offset of each block in the output space.
    pub offsets: Vec<usize>,
}

/// `vs[i]` is `d × d_i`; the output has dimension `Σ d_i`.
pub fn direct_sum_pure(vs: &[ComplexMatrix]) -> Result<DirectSum> {
    let d = vs.first().ok_or(Error::EmptyKraus)?.rows();
    if vs.iter().any(|v| v.rows() != d || v.cols() == 0) {
        return Err(Error::DimensionMismatch("blocks must share the row dimension and be nonempty".into()));
    }
    if vs.iter().any(|v| v.max_abs() == 0.0) {
        return Err(Error::ParameterOutOfRange("zero block".into()));
    }
    let total: usize = vs.iter().map(ComplexMatrix::cols).sum();
    let mut offsets = Vec::with_capacity(vs.len());
    let mut off = 0;
    let mut ops = Vec::with_capacity(vs.len());
    for v in vs {
        offsets.push(off);
        let w = ComplexMatrix::from_fn(d, total, |r, col| {
            if col >= off && col < off + v.cols() {
                v.get(r, col - off)
            } else {
                ZERO
            }
        });
        ops.push(w.adjoint());
        off += v.cols();
    }
    let channel = KrausRep::new(d, total, ops)?;
    let k = vs.len();
    let mut gops = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        for a in 0..v.cols() {
            gops.push(ComplexMatrix::outer(&basis(k, i), &basis(total, offsets[i] + a)));
        }
    }
    let degrading = KrausRep::new(total, k, gops)?;
    Ok(DirectSum { channel, degrading, offsets })
}

/// `X ↦ Σ_i ⟨u_i, X u_i⟩ |v_i⟩⟨v_i|` with unit `u_i` and an orthonormal basis `v_i`.
pub fn cstar_extreme_gen(us: &[Vec<C64>], vs: &[Vec<C64>], tol: &Tolerance) -> Result<KrausRep> {
    let d2 = vs.len();
    if us.len() != d2 || d2 == 0 {
        return Err(Error::DimensionMismatch(format!("{} u-vectors for {} v-vectors", us.len(), d2)));
    }
    let d1 = us[0].len();
    if us.iter().any(|u| u.len() != d1) || vs.iter().any(|v| v.len() != d2) {
        return Err(Error::DimensionMismatch("u must lie in C^{d1} and v in C^{d2}".into()));
    }
    for (i, u) in us.iter().enumerate() {
        if (norm(u) - 1.0).abs() > tol.eps_eq.sqrt() {
            return Err(Error::ParameterOutOfRange(format!("u_{i} is not a unit vector")));
        }
    }
    let gram = ComplexMatrix::from_fn(d2, d2, |i, j| inner(&vs[i], &vs[j]));
    if !gram.approx_eq(&ComplexMatrix::identity(d2), tol.eps_eq.sqrt()) {
        return Err(Error::ParameterOutOfRange("v-vectors are not orthonormal".into()));
    }
    KrausRep::new(d1, d2, us.iter().zip(vs).map(|(u, v)| ComplexMatrix::outer(v, u)).collect())
}

/// Family plus parameters, as used by the interchange format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum ZooSpec {
    Schur {
        a: ComplexMatrix,
    },
    SchurComplement {
        a: ComplexMatrix,
    },
    WernerHolevo {
        d: usize,
        lambda: f64,
    },
    PhiLambda {
        d: usize,
        lambda: f64,
    },
    Pinching {
        d: usize,
    },
    DirectSumPure {
        vs: Vec<ComplexMatrix>,
    },
    #[serde(rename = "cstar-extreme")]
    CStarExtremeGen {
        #[serde(with = "cvec_list")]
        us: Vec<Vec<C64>>,
        #[serde(with = "cvec_list")]
        vs: Vec<Vec<C64>>,
    },
    HolevoGen {
        d_in: usize,
        d_out: usize,
        classes: usize,
        seed: u64,
        #[serde(default)]
        violate: bool,
    },
    AdOperator {
        a: ComplexMatrix,
    },
}

/// A generated channel, either as Kraus operators or a Holevo form.
#[derive(Clone, Debug)]
pub enum Generated {
    Kraus(KrausRep),
    Holevo(HolevoForm),
}

impl Generated {
    pub fn kraus(&self, tol: &Tolerance) -> Result<KrausRep> {
        match self {
            Generated::Kraus(k) => Ok(k.clone()),
            Generated::Holevo(h) => h.to_kraus(tol),
        }
    }
}

impl ZooSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ZooSpec::Schur { .. } => "schur",
            ZooSpec::SchurComplement { .. } => "schur-complement",
            ZooSpec::WernerHolevo { .. } => "werner-holevo",
            ZooSpec::PhiLambda { .. } => "phi-lambda",
            ZooSpec::Pinching { .. } => "pinching",
            ZooSpec::DirectSumPure { .. } => "direct-sum-pure",
            ZooSpec::CStarExtremeGen { .. } => "cstar-extreme",
            ZooSpec::HolevoGen { .. } => "holevo-gen",
            ZooSpec::AdOperator { .. } => "ad-operator",
        }
    }

    pub fn build(&self, tol: &Tolerance) -> Result<Generated> {
        Ok(match self {
            ZooSpec::Schur { a } => Generated::Kraus(schur_map(a, tol)?),
            ZooSpec::SchurComplement { a } => Generated::Kraus(schur_complement_map(a, tol)?),
            ZooSpec::WernerHolevo { d, lambda } => Generated::Kraus(werner_holevo(*d, *lambda, tol)?),
            ZooSpec::PhiLambda { d, lambda } => Generated::Kraus(phi_lambda(*d, *lambda, tol)?),
            ZooSpec::Pinching { d } => {
                if *d == 0 {
                    return Err(Error::ParameterOutOfRange("pinching needs d >= 1".into()));
                }
                Generated::Kraus(pinching(*d)?)
            }
            ZooSpec::DirectSumPure { vs } => Generated::Kraus(direct_sum_pure(vs)?.channel),
            ZooSpec::CStarExtremeGen { us, vs } => Generated::Kraus(cstar_extreme_gen(us, vs, tol)?),
            ZooSpec::HolevoGen { d_in, d_out, classes, seed, violate } => Generated::Holevo(if *violate {
                random_violating_seb(*d_in, *d_out, *classes, *seed, tol)?
            } else {
                random_degradable_seb(*d_in, *d_out, *classes, *seed, tol)?
            }),
            ZooSpec::AdOperator { a } => Generated::Kraus(ad_operator(a)?),
        })
    }
}

fn gaussian_c(rng: &mut ChaCha8Rng) -> C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c(a, b)
}

pub fn random_ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(gaussian_c(rng));
    }
    ComplexMatrix::from_row_major(rows, cols, &entries).expect("finite samples")
}

pub fn random_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| gaussian_c(rng)).collect();
        let n = norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-ish random isometry `rows × cols` (Gram–Schmidt of a Ginibre matrix).
pub fn random_isometry(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while out.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| gaussian_c(rng)).collect();
        for _ in 0..2 {
            for b in &out {
                let p = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= p * bi;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            out.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&out, rows)
}

/// Trace-preserving channel with `cr` Ginibre Kraus operators, normalized by
/// `(Σ A*A)^{-1/2}`; generically its Choi rank is `cr`.
pub fn random_channel(d_in: usize, d_out: usize, cr: usize, seed: u64) -> Result<KrausRep> {
    if d_in == 0 || d_out == 0 || cr == 0 || cr > d_in * d_out || cr * d_out < d_in {
        return Err(Error::ParameterOutOfRange(format!(
            "no trace-preserving {d_in}->{d_out} channel with Choi rank {cr}"
        )));
    }
    let mut r = rng(seed);
    let ops: Vec<ComplexMatrix> = (0..cr).map(|_| random_ginibre(d_out, d_in, &mut r)).collect();
    let s = ops.iter().fold(ComplexMatrix::zeros(d_in, d_in), |acc, a| acc + &a.adjoint() * a);
    let inv_sqrt = s.hermitian_part().eig_unchecked().reconstruct_with(|l| 1.0 / l.sqrt());
    KrausRep::new(d_in, d_out, ops.iter().map(|a| a * &inv_sqrt).collect())
}

struct SebDraw {
    /// Per class: representative `u`, orthonormal basis of its output subspace.
    reps: Vec<Vec<C64>>,
    /// (class, u_j, v_j)
    members: Vec<(usize, Vec<C64>, Vec<C64>)>,
}

fn draw_seb(d_in: usize, d_out: usize, classes: usize, r: &mut ChaCha8Rng) -> Result<SebDraw> {
    if d_in == 0 || classes == 0 || classes > d_out || (d_in == 1 && classes > 1) {
        return Err(Error::ParameterOutOfRange(format!(
            "cannot draw {classes} independent classes for a {d_in}->{d_out} map"
        )));
    }
    // split an orthonormal basis of C^{d_out} into `classes` nonempty blocks
    let u = random_isometry(d_out, d_out, r);
    let mut sizes = vec![1usize; classes];
    for _ in classes..d_out {
        let k = r.random_range(0..classes);
        sizes[k] += 1;
    }
    let mut reps: Vec<Vec<C64>> = Vec::new();
    while reps.len() < classes {
        let cand = random_unit_vector(d_in, r);
        if reps.iter().all(|p| inner(p, &cand).norm() < 0.9) {
            reps.push(cand);
        }
    }
    let mut members = Vec::new();
    let mut col = 0;
    for (k, &size) in sizes.iter().enumerate() {
        let cols: Vec<Vec<C64>> = (col..col + size).map(|j| u.column(j)).collect();
        col += size;
        let m = r.random_range(1..=3);
        for _ in 0..m {
            let coeffs = random_unit_vector(size, r);
            let mut v = vec![ZERO; d_out];
            for (a, basis_vec) in coeffs.iter().zip(&cols) {
                for (vi, bi) in v.iter_mut().zip(basis_vec) {
                    *vi += a * bi;
                }
            }
            let scale = r.random_range(0.5..1.5);
            let phase = r.random_range(0.0..std::f64::consts::TAU);
            let lam = C64::from_polar(scale, phase);
            let uj: Vec<C64> = reps[k].iter().map(|z| z * lam).collect();
            members.push((k, uj, v));
        }
    }
    // deterministic shuffle so that classes are interleaved
    for i in (1..members.len()).rev() {
        let j = r.random_range(0..=i);
        members.swap(i, j);
    }
    Ok(SebDraw { reps, members })
}

fn draw_to_form(draw: &SebDraw, tol: &Tolerance) -> Result<HolevoForm> {
    let pairs = draw
        .members
        .iter()
        .map(|(_, u, v)| HolevoPair { f: ComplexMatrix::outer(u, u), r: ComplexMatrix::outer(v, v) })
        .collect();
    HolevoForm::new(pairs, tol)
}

/// Rank-one Holevo form whose classes have mutually orthogonal states;
/// degradable by construction.
pub fn random_degradable_seb(
    d_in: usize,
    d_out: usize,
    classes: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<HolevoForm> {
    let mut r = rng(seed);
    let draw = draw_seb(d_in, d_out, classes, &mut r)?;
    debug_assert_eq!(draw.reps.len(), classes);
    draw_to_form(&draw, tol)
}

/// Like [`random_degradable_seb`] but one member's state is tilted towards a
/// state of another class, breaking exactly that orthogonality.
pub fn random_violating_seb(
    d_in: usize,
    d_out: usize,
    classes: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<HolevoForm> {
    if classes < 2 {
        return Err(Error::ParameterOutOfRange("a violation needs at least two classes".into()));
    }
    let mut r = rng(seed);
    let mut draw = draw_seb(d_in, d_out, classes, &mut r)?;
    let target = r.random_range(0..draw.members.len());
    let tk = draw.members[target].0;
    let other = draw.members.iter().position(|(k, _, _)| *k != tk).expect("at least two classes");
    let w: f64 = r.random_range(0.3..0.7);
    let vo = draw.members[other].2.clone();
    let vt = &mut draw.members[target].2;
    for (a, b) in vt.iter_mut().zip(&vo) {
        *a = *a * (1.0 - w).sqrt() + b * w.sqrt();
    }
    let n = norm(vt);
    for a in vt.iter_mut() {
        *a /= n;
    }
    draw_to_form(&draw, tol)
}

/// Random Holevo form with `pairs` effects of random rank and random states.
pub fn random_holevo_form(d_in: usize, d_out: usize, pairs: usize, seed: u64, tol: &Tolerance) -> Result<HolevoForm> {
    if d_in == 0 || d_out == 0 || pairs == 0 {
        return Err(Error::ParameterOutOfRange(format!("random Holevo form {d_in}->{d_out} with {pairs} pairs")));
    }
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let gf = random_ginibre(d_in, r.random_range(1..=d_in), &mut r);
        let gr = random_ginibre(d_out, r.random_range(1..=d_out), &mut r);
        let rho = &gr * &gr.adjoint();
        let tr = rho.trace().re;
        out.push(HolevoPair { f: &gf * &gf.adjoint(), r: rho.scale_real(1.0 / tr) });
    }
    HolevoForm::new(out, tol)
}

/// Random `X ↦ Σ_i ⟨u_i, X u_i⟩ |v_i⟩⟨v_i|` with unit `u_i` and a random
/// orthonormal basis `v_i` of `C^{d2}`.
pub fn random_ueb_extreme(d1: usize, d2: usize, seed: u64, tol: &Tolerance) -> Result<KrausRep> {
    let mut r = rng(seed);
    let us: Vec<_> = (0..d2).map(|_| random_unit_vector(d1, &mut r)).collect();
    let v = random_isometry(d2, d2, &mut r);
    let vs: Vec<_> = (0..d2).map(|j| v.column(j)).collect();
    cstar_extreme_gen(&us, &vs, tol)
}

/// Unital EB map averaging two extreme maps with unrelated output bases;
/// Choi rank `2·d2` generically, hence not C*-extreme.
pub fn random_ueb_mixture(d1: usize, d2: usize, seed: u64, tol: &Tolerance) -> Result<KrausRep> {
    let a = random_ueb_extreme(d1, d2, seed, tol)?;
    let b = random_ueb_extreme(d1, d2, seed ^ 0x9e37_79b9_7f4a_7c15, tol)?;
    let s = 0.5f64.sqrt();
    let ops = a.ops().iter().chain(b.ops()).map(|k| k.scale_real(s)).collect();
    KrausRep::new(d1, d2, ops)
}

/// Random list of `k` isometries `d × d_i` with `1 ≤ d_i ≤ d`.
pub fn random_block_isometries(d: usize, k: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut r = rng(seed);
    (0..k)
        .map(|_| {
            let di = r.random_range(1..=d);
            random_isometry(d, di, &mut r)
        })
        .collect()
}

/// Random PSD matrix `G*G` for a `d × d` Ginibre `G`; with `unit_diagonal`,
/// rescaled to a correlation matrix.
pub fn random_psd(d: usize, seed: u64, unit_diagonal: bool) -> ComplexMatrix {
    let mut r = rng(seed);
    let g = random_ginibre(d, d, &mut r);
    let p = &g.adjoint() * &g;
    if !unit_diagonal {
        return p;
    }
    let s: Vec<f64> = (0..d).map(|i| 1.0 / p.get(i, i).re.sqrt()).collect();
    ComplexMatrix::from_fn(d, d, |i, j| p.get(i, j) * s[i] * s[j])
}

/// Random positive diagonal matrix.
pub fn random_diagonal_psd(d: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    let v: Vec<C64> = (0..d).map(|_| re(r.random_range(0.1..2.0))).collect();
    ComplexMatrix::diag(&v)
}
