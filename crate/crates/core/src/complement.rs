//! Complementary channels.
//!
//! The complement of `Φ` with Kraus operators `A_1, …, A_n` is
//! `Φ^c(T) = Σ_ij tr(A_i T A_j*) E_ij`, obtained by tracing the output out of
//! the canonical Stinespring dilation. Every other complement is
//! `Ψ(T) = V Φ^c_min(T) V*` for an isometry `V`, where `Φ^c_min` comes from a
//! minimal Kraus set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::matcore::{c, ComplexMatrix, Tolerance, ZERO};
use crate::reprs::{unvec_col, KrausRep, StinespringRep};

const GENERIC_SEED: u64 = 0x5eed_c0de;

/// Complement from the canonical dilation of the given Kraus list; the
/// environment has one level per Kraus operator.
pub fn complement_from_kraus(k: &KrausRep) -> KrausRep {
    k.stinespring().complement().expect("a nonzero channel has a nonzero complement")
}

/// Complement of dimension `CR(Φ)`.
pub fn minimal_complement(k: &KrausRep, tol: &Tolerance) -> KrausRep {
    complement_from_kraus(&k.minimal(tol))
}

/// A channel, one of its complements and a dilation producing both.
#[derive(Clone, Debug)]
pub struct ComplementPair {
    pub channel: KrausRep,
    pub complement: KrausRep,
    pub joint_stinespring: StinespringRep,
}

impl ComplementPair {
    /// Largest basis-wise deviation of the two partial traces from the pair.
    pub fn residual(&self) -> f64 {
        let d = self.channel.d_in();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let t = ComplexMatrix::unit(d, i, j);
                let s = &self.joint_stinespring;
                worst = worst
                    .max(s.apply(&t).unwrap().distance(&self.channel.apply_unchecked(&t)))
                    .max(s.apply_complement(&t).unwrap().distance(&self.complement.apply_unchecked(&t)));
            }
        }
        worst
    }
}

/// Outcome of matching two Stinespring operators of the same channel.
#[derive(Clone, Debug)]
pub enum IsometryMatch {
    Related { v: ComplexMatrix, residual: f64 },
    Indeterminate { v: ComplexMatrix, residual: f64 },
    NotRelated { residual: f64 },
}

impl IsometryMatch {
    pub fn residual(&self) -> f64 {
        match self {
            IsometryMatch::Related { residual, .. }
            | IsometryMatch::Indeterminate { residual, .. }
            | IsometryMatch::NotRelated { residual } => *residual,
        }
    }

    pub fn isometry(&self) -> Option<&ComplexMatrix> {
        match self {
            IsometryMatch::Related { v, .. } | IsometryMatch::Indeterminate { v, .. } => Some(v),
            IsometryMatch::NotRelated { .. } => None,
        }
    }
}

/// Environment-major slices: row `j` of the result is environment level `j`,
/// column `(r, c)` is output row `r`, input column `c`.
fn environment_slices(s: &StinespringRep) -> ComplexMatrix {
    let (env, dout, din) = (s.env_dim(), s.d_out(), s.d_in());
    ComplexMatrix::from_fn(env, dout * din, |j, rc| s.a().get((rc / din) * env + j, rc % din))
}

fn classify(residual: f64, tol: &Tolerance) -> Verdict {
    if residual <= tol.eps_eq {
        Verdict::True
    } else if residual <= tol.eps_eq.sqrt() {
        Verdict::Indeterminate
    } else {
        Verdict::False
    }
}

/// Finds an isometry `V` with `s2.a = (I ⊗ V) s1.a`.
///
/// `V` is fixed on the span that `s1` uses and completed orthonormally
/// elsewhere. The residual combines the equation misfit and the isometry
/// defect, both relative to `max(1, ‖·‖_F)`.
pub fn connecting_isometry(s1: &StinespringRep, s2: &StinespringRep, tol: &Tolerance) -> Result<IsometryMatch> {
    if s1.d_in() != s2.d_in() || s1.d_out() != s2.d_out() {
        return Err(Error::DimensionMismatch(format!(
            "dilations of {}→{} and {}→{} maps",
            s1.d_in(),
            s1.d_out(),
            s2.d_in(),
            s2.d_out()
        )));
    }
    let (e1, e2) = (s1.env_dim(), s2.env_dim());
    if e1 > e2 {
        return Err(Error::DimensionMismatch(format!("source environment {e1} exceeds target environment {e2}")));
    }
    let m1 = environment_slices(s1);
    let m2 = environment_slices(s2);

    // orthonormal basis of the row space used by s1 (range of m1 in C^{e1})
    let gram = &m1 * &m1.adjoint();
    let eig = gram.eig_unchecked();
    let lmax = eig.values.first().copied().unwrap_or(0.0);
    let k = eig.values.iter().filter(|&&l| lmax > 0.0 && l > tol.eps_rank * lmax).count();
    let q_cols: Vec<_> = (0..k).map(|i| eig.vector(i)).collect();
    let q = ComplexMatrix::from_columns(&q_cols, e1);

    let v_full = &m2 * &m1.pinv(tol.eps_rank);
    let vq = &v_full * &q;
    let iso_defect = (&vq.adjoint() * &vq).distance(&ComplexMatrix::identity(k));

    // complete on the unused directions of C^{e1}
    let v = if k < e1 {
        let nq_cols: Vec<_> = (k..e1).map(|i| eig.vector(i)).collect();
        let nq = ComplexMatrix::from_columns(&nq_cols, e1);
        let range = orthonormalize(&vq);
        let extra = ComplexMatrix::orthonormal_completion(&range);
        let extra = extra.block(0, 0, e2, e1 - k);
        &vq * &q.adjoint() + &extra * &nq.adjoint()
    } else {
        vq * &q.adjoint()
    };

    let fit = (&v * &m1).distance(&m2) / m2.frobenius_norm().max(1.0);
    let iso = (&v.adjoint() * &v).distance(&ComplexMatrix::identity(e1)).max(iso_defect);
    let residual = fit.max(iso);
    Ok(match classify(residual, tol) {
        Verdict::True => IsometryMatch::Related { v, residual },
        Verdict::Indeterminate => IsometryMatch::Indeterminate { v, residual },
        Verdict::False => IsometryMatch::NotRelated { residual },
    })
}

/// Orthonormal basis for the column span of `m` (numerically nonzero part).
fn orthonormalize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let eig = (m * &m.adjoint()).eig_unchecked();
    let lmax = eig.values.first().copied().unwrap_or(0.0);
    let cols: Vec<_> = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &l)| lmax > 0.0 && l > 1e-12 * lmax)
        .map(|(i, _)| eig.vector(i))
        .collect();
    ComplexMatrix::from_columns(&cols, n)
}

/// Decides whether `psi` is a complement of `phi`.
///
/// Searches for `V` with `Ψ(E_ij) V = V Φ^c_min(E_ij)` for all `i, j`, takes a
/// generic solution, polishes it to an isometry and checks
/// `C_Ψ = (I ⊗ V) C_{Φ^c_min} (I ⊗ V)*`. On success the witness is `V`.
pub fn is_complementary_pair(phi: &KrausRep, psi: &KrausRep, tol: &Tolerance) -> Certificate {
    let cert = |v: Verdict| Certificate::new(Property::Complementary, v, tol).via("minimal-complement intertwiner");
    if phi.d_in() != psi.d_in() {
        return cert(Verdict::False).note(format!("input dimensions differ: {} vs {}", phi.d_in(), psi.d_in()));
    }
    let fc = minimal_complement(phi, tol);
    let (r, d3, din) = (fc.d_out(), psi.d_out(), phi.d_in());
    if r > d3 {
        return cert(Verdict::False)
            .note(format!("minimal complement has environment dimension {r} > output dimension {d3}"))
            .with_witness(Witness::Obstruction { reason: "environment dimension".into(), value: r as f64 });
    }
    let psi_support = psi.image_of_identity().rank_tol(tol);
    if psi_support != r {
        return cert(Verdict::False)
            .note(format!("rank of Ψ(I) is {psi_support}, minimal complement has rank {r}"))
            .with_witness(Witness::Obstruction { reason: "support rank".into(), value: psi_support as f64 });
    }

    let fc_choi = fc.choi();
    let psi_choi = psi.choi();
    let n = r * d3;
    let mut gram = ComplexMatrix::zeros(n, n);
    let id_r = ComplexMatrix::identity(r);
    let id_3 = ComplexMatrix::identity(d3);
    for i in 0..din {
        for j in 0..din {
            let fij = fc_choi.block(i, j);
            let pij = psi_choi.block(i, j);
            let l = id_r.kron(&pij) - fij.transpose().kron(&id_3);
            gram = gram + &l.adjoint() * &l;
        }
    }
    let eig = gram.hermitian_part().eig_unchecked();
    let data_scale = fc_choi.mat().frobenius_norm().powi(2) + psi_choi.mat().frobenius_norm().powi(2);
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(data_scale);

    let mut best: Option<(ComplexMatrix, f64)> = None;
    for (attempt, rel) in [tol.eps_eq, 1e-12].into_iter().enumerate() {
        let null: Vec<usize> = (0..n).filter(|&k| eig.values[k] <= rel * lmax).collect();
        if null.is_empty() {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED + attempt as u64);
        for _ in 0..3 {
            let mut x = vec![ZERO; n];
            for &k in &null {
                let coef = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                for (xi, vi) in x.iter_mut().zip(eig.vector(k)) {
                    *xi += coef * vi;
                }
            }
            let x = unvec_col(&x, d3, r);
            let xx = &x.adjoint() * &x;
            let xx_min = xx.min_eigenvalue();
            if xx_min <= 1e-10 * xx.operator_norm().max(f64::MIN_POSITIVE) {
                continue;
            }
            let inv_sqrt = xx.hermitian_part().eig_unchecked().reconstruct_with(|l| 1.0 / l.sqrt());
            let v = &x * &inv_sqrt;
            let vi = ComplexMatrix::identity(din).kron(&v);
            let predicted = &(&vi * fc_choi.mat()) * &vi.adjoint();
            let residual = predicted.distance(psi_choi.mat()) / psi_choi.mat().frobenius_norm().max(1.0);
            if best.as_ref().is_none_or(|(_, b)| residual < *b) {
                best = Some((v, residual));
            }
            if residual <= tol.eps_eq {
                break;
            }
        }
        if best.as_ref().is_some_and(|(_, b)| *b <= tol.eps_eq) {
            break;
        }
    }

    match best {
        None => cert(Verdict::False)
            .note("no intertwiner between the minimal complement and Ψ")
            .with_witness(Witness::Obstruction { reason: "trivial intertwiner space".into(), value: 0.0 }),
        Some((v, residual)) => {
            let verdict = classify(residual, tol);
            let c = cert(verdict).with_residual(residual).with_margin(tol.eps_eq - residual);
            match verdict {
                Verdict::True => c.with_witness(Witness::Isometry { v }).note("Ψ = V Φ^c_min V*"),
                Verdict::Indeterminate => {
                    c.with_witness(Witness::Isometry { v }).note("residual between eps_eq and sqrt(eps_eq)")
                }
                Verdict::False => c.note("best isometric intertwiner does not reproduce Ψ"),
            }
        }
    }
}

/// Whether `Φ` is a complement of itself.
pub fn is_self_complementary(phi: &KrausRep, tol: &Tolerance) -> Certificate {
    is_complementary_pair(phi, phi, tol).relabel(Property::SelfComplementary)
}

/// Joint dilation `A = (I ⊗ V) Â` for `Ψ(T) = V Φ^c_min(T) V*`, where `Â` is
/// the minimal dilation of `phi`.
pub fn joint_dilation(phi: &KrausRep, v: &ComplexMatrix, tol: &Tolerance) -> Result<ComplementPair> {
    let minimal = phi.minimal(tol);
    let s = minimal.stinespring();
    if v.cols() != s.env_dim() {
        return Err(Error::DimensionMismatch(format!(
            "isometry has {} columns, minimal environment is {}",
            v.cols(),
            s.env_dim()
        )));
    }
    let a = &ComplexMatrix::identity(phi.d_out()).kron(v) * s.a();
    let joint = StinespringRep::new(phi.d_in(), phi.d_out(), v.rows(), a)?;
    Ok(ComplementPair { channel: phi.clone(), complement: joint.complement()?, joint_stinespring: joint })
}
