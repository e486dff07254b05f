//! Degradability of entanglement-breaking maps given by rank-one Holevo forms.

use crate::certificate::{Certificate, GroupedHolevoForm, HolevoClass, Property, Verdict, Witness};
use crate::complement::{complement_from_kraus, is_complementary_pair};
use crate::error::{Error, Result};
use crate::matcore::{inner, norm, ComplexMatrix, Tolerance, C64, ONE};
use crate::reprs::{HolevoForm, HolevoPair, KrausRep};
use crate::zoo::basis;

impl HolevoClass {
    /// `Σ_j |λ_{j,k}|²`, the trace weight of the merged state.
    pub fn weight(&self) -> f64 {
        self.coefficients.iter().map(|l| l.norm_sqr()).sum()
    }

    /// `tr(F̃_k) R̃_k`, the class contribution to `Φ(I)` along `u_k`.
    fn weighted_state(&self) -> ComplexMatrix {
        self.r.scale_real(norm(&self.u).powi(2) * self.weight())
    }
}

impl GroupedHolevoForm {
    /// Holevo form `Σ_k tr(T F̃_k) R̃_k` with `F̃_k = weight_k |u_k⟩⟨u_k|`.
    pub fn to_holevo(&self, tol: &Tolerance) -> Result<HolevoForm> {
        let pairs = self
            .classes
            .iter()
            .map(|c| HolevoPair { f: ComplexMatrix::outer(&c.u, &c.u).scale_real(c.weight()), r: c.r.clone() })
            .collect();
        HolevoForm::new(pairs, tol)
    }
}

/// `u_j` with `F_j = |u_j⟩⟨u_j|`; `None` for a zero effect.
pub fn rank_one_vectors(h: &HolevoForm, tol: &Tolerance) -> Result<Vec<Option<Vec<C64>>>> {
    let fmax = h.pairs().iter().map(|p| p.f.frobenius_norm()).fold(0.0, f64::max);
    h.pairs()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            if p.f.frobenius_norm() <= tol.eps_rank * fmax {
                return Ok(None);
            }
            let rank = p.f.rank_tol(tol);
            if rank != 1 {
                return Err(Error::NotRankOne { index, rank });
            }
            let eig = p.f.hermitian_part().eig_unchecked();
            let l = eig.values[0].max(0.0).sqrt();
            Ok(Some(eig.vector(0).into_iter().map(|z| z * l).collect()))
        })
        .collect()
}

/// Groups pairs into proportionality classes of their effect vectors and
/// merges the states within each class.
///
/// Two vectors count as proportional when Cauchy–Schwarz is saturated up to
/// `eps_eq`: `|⟨u_i, u_j⟩| ≥ (1 − eps_eq) ‖u_i‖ ‖u_j‖`.
pub fn group_holevo(h: &HolevoForm, tol: &Tolerance) -> Result<GroupedHolevoForm> {
    let us = rank_one_vectors(h, tol)?;
    let mut classes: Vec<HolevoClass> = Vec::new();
    let mut merged: Vec<ComplexMatrix> = Vec::new();
    for (j, u) in us.into_iter().enumerate() {
        let Some(u) = u else { continue };
        let nu = norm(&u);
        let found = classes.iter().position(|c| {
            let nc = norm(&c.u);
            inner(&c.u, &u).norm() >= (1.0 - tol.eps_eq) * nc * nu
        });
        let rj = &h.pairs()[j].r;
        match found {
            Some(k) => {
                let lam = inner(&classes[k].u, &u) / norm(&classes[k].u).powi(2);
                merged[k] = &merged[k] + &rj.scale_real(lam.norm_sqr());
                classes[k].members.push(j);
                classes[k].coefficients.push(lam);
            }
            None => {
                merged.push(rj.clone());
                classes.push(HolevoClass { u, r: rj.clone(), members: vec![j], coefficients: vec![ONE] });
            }
        }
    }
    if classes.is_empty() {
        return Err(Error::EmptyHolevo);
    }
    for (c, m) in classes.iter_mut().zip(merged) {
        let tr = m.trace().re;
        c.r = m.scale_real(1.0 / tr);
    }
    Ok(GroupedHolevoForm { classes })
}

struct Orthogonality {
    /// (class k, class l, ‖R_k R_l‖_F) of the worst pair
    worst: Option<(usize, usize, f64)>,
    /// Smallest relative distance of a cross-class pair from the grouping threshold.
    grouping_slack: Option<f64>,
}

fn orthogonality(g: &GroupedHolevoForm, tol: &Tolerance) -> Orthogonality {
    let mut worst: Option<(usize, usize, f64)> = None;
    let mut slack: Option<f64> = None;
    for k in 0..g.classes.len() {
        for l in k + 1..g.classes.len() {
            let (a, b) = (&g.classes[k], &g.classes[l]);
            let p = (&a.r * &b.r).frobenius_norm();
            if worst.is_none_or(|w| p > w.2) {
                worst = Some((k, l, p));
            }
            let cos = inner(&a.u, &b.u).norm() / (norm(&a.u) * norm(&b.u));
            let s = (1.0 - tol.eps_eq) - cos;
            slack = Some(slack.map_or(s, |x: f64| x.min(s)));
        }
    }
    Orthogonality { worst, grouping_slack: slack }
}

/// Columns: eigenvectors of each merged state, which are mutually
/// orthogonal once the classes are.
fn inclusion_isometry(g: &GroupedHolevoForm, tol: &Tolerance) -> ComplexMatrix {
    let d = g.classes[0].r.rows();
    let mut cols = Vec::new();
    for c in &g.classes {
        let eig = c.r.hermitian_part().eig_unchecked();
        let lmax = eig.values[0];
        for (i, &l) in eig.values.iter().enumerate() {
            if l > tol.eps_rank * lmax {
                cols.push(eig.vector(i));
            }
        }
    }
    ComplexMatrix::from_columns(&cols, d)
}

/// `max(‖Ad_W ∘ Ψ − Φ‖, complementarity residual of (Φ, Ψ))` for the
/// compression `Ψ = Ad_{W*} ∘ Φ`.
fn verify_inclusion(h: &HolevoForm, w: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    let phi = h.to_kraus(tol)?;
    let wa = w.adjoint();
    let psi = KrausRep::new(phi.d_in(), w.cols(), phi.ops().iter().map(|a| &wa * a).collect())?;
    let back = KrausRep::new(phi.d_in(), phi.d_out(), psi.ops().iter().map(|a| w * a).collect())?;
    let c = phi.choi().into_mat();
    let r1 = back.choi().mat().distance(&c) / c.frobenius_norm().max(1.0);
    let pair = is_complementary_pair(&phi, &psi, tol);
    let r2 = match pair.verdict {
        Verdict::True => pair.residual.unwrap_or(0.0),
        _ => f64::INFINITY,
    };
    Ok(r1.max(r2))
}

/// Degradability of a rank-one Holevo form: classes of proportional effect
/// vectors must carry mutually orthogonal merged states, `R̃_k R̃_l = 0`.
///
/// Indices in a violating-pair witness are 0-based positions of each class's
/// first member in the input.
pub fn degradable_seb_test(h: &HolevoForm, tol: &Tolerance) -> Result<Certificate> {
    let g = group_holevo(h, tol)?;
    let o = orthogonality(&g, tol);
    let worst = o.worst.map_or(0.0, |w| w.2);
    let slack = o.grouping_slack.map_or_else(|| "single class".to_string(), |s| format!("grouping slack {s:.3e}"));
    let summary = format!("classes: {}, pairs: {}; {slack}", g.classes.len(), h.pairs().len());
    let cert = |v| Certificate::new(Property::Degradable, v, tol).via("holevo-class-orthogonality");
    if worst > tol.eps_eq {
        let (k, l, p) = o.worst.expect("some pair");
        let (a, b) = (&g.classes[k], &g.classes[l]);
        let overlap = (&a.weighted_state() * &b.weighted_state()).trace().re.max(0.0).sqrt();
        return Ok(cert(Verdict::False)
            .with_witness(Witness::ViolatingPair { i: a.members[0], j: b.members[0], overlap, product_norm: p })
            .with_margin(tol.eps_eq - worst)
            .note(summary));
    }
    let w = inclusion_isometry(&g, tol);
    let residual = verify_inclusion(h, &w, tol)?;
    let verdict = if residual <= 10.0 * tol.eps_eq { Verdict::True } else { Verdict::Indeterminate };
    Ok(cert(verdict)
        .via("self-complement-inclusion")
        .with_witness(Witness::SelfComplement { grouped: g, w })
        .with_residual(residual)
        .with_margin(tol.eps_eq - worst)
        .note(summary))
}

/// Inclusion `W` of the span of the merged states, with the residual of
/// `Φ = Ad_W ∘ Ad_{W*} ∘ Φ` and of `Ad_{W*} ∘ Φ` being complementary to `Φ`.
pub fn self_complement_witness(h: &HolevoForm, tol: &Tolerance) -> Result<(ComplexMatrix, f64)> {
    let g = group_holevo(h, tol)?;
    let o = orthogonality(&g, tol);
    if let Some((k, l, p)) = o.worst.filter(|w| w.2 > tol.eps_eq) {
        return Err(Error::Precondition(format!("merged states of classes {k} and {l} overlap (‖R_k R_l‖ = {p:.3e})")));
    }
    let w = inclusion_isometry(&g, tol);
    let residual = verify_inclusion(h, &w, tol)?;
    Ok((w, residual))
}

/// `Γ` with `Γ ∘ Φ^c = Φ`, where `Φ^c = complement_from_kraus(h.to_kraus())`.
/// Kraus operators `|v̂_j⟩⟨e_j|` for the output directions `v̂_j` of the
/// rank-one operators of `h`.
pub fn seb_antidegrading_map(h: &HolevoForm, tol: &Tolerance) -> Result<KrausRep> {
    let k = h.to_kraus(tol)?;
    Ok(rank_one_antidegrading(&k))
}

pub(crate) fn rank_one_antidegrading(k: &KrausRep) -> KrausRep {
    let n = k.len();
    let ops = k
        .ops()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let col = (0..a.cols())
                .map(|c| a.column(c))
                .max_by(|x, y| norm(x).total_cmp(&norm(y)))
                .expect("nonempty operator");
            let n_col = norm(&col);
            let v: Vec<C64> = col.into_iter().map(|z| z / n_col).collect();
            ComplexMatrix::outer(&v, &basis(n, j))
        })
        .collect();
    KrausRep::new(n, k.d_out(), ops).expect("nonzero operators")
}

/// Holevo form `F_j = A_j*A_j`, `R_j = A_j A_j* / tr(A_j A_j*)` of a rank-one Kraus list.
pub fn holevo_from_rank_one(k: &KrausRep, tol: &Tolerance) -> Result<HolevoForm> {
    let pairs = k
        .ops()
        .iter()
        .enumerate()
        .map(|(index, a)| {
            let rank = a.rank_tol(tol);
            if rank != 1 {
                return Err(Error::NotRankOne { index, rank });
            }
            let r = a * &a.adjoint();
            let tr = r.trace().re;
            Ok(HolevoPair { f: &a.adjoint() * a, r: r.scale_real(1.0 / tr) })
        })
        .collect::<Result<Vec<_>>>()?;
    HolevoForm::new(pairs, tol)
}

/// Complement of the Kraus list behind `h`, paired with [`seb_antidegrading_map`].
pub fn seb_complement(h: &HolevoForm, tol: &Tolerance) -> Result<KrausRep> {
    Ok(complement_from_kraus(&h.to_kraus(tol)?))
}
