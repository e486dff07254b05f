//! Channels whose Choi matrix is a projection, and Schur multipliers.

use super::degrade::degradability_via_inverse;
use super::seb::degradable_seb_test;
use super::{choi_projection_defect, cstar_extreme_test, eb_kraus, input_orthogonal_form, is_ppt, DiagonalForm};
use crate::certificate::{Certificate, Property, Verdict, Witness};
use crate::complement::is_complementary_pair;
use crate::error::{Error, Result};
use crate::matcore::{inner, norm, ComplexMatrix, Tolerance};
use crate::reprs::KrausRep;
use crate::zoo::{schur_complement_from_vectors, schur_complement_holevo, schur_complement_vectors, schur_map};

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    /// Roman numeral of the condition, `"i"` to `"vi"`.
    pub label: &'static str,
    pub description: &'static str,
    pub certificate: Certificate,
}

/// Verdicts of the equivalent characterizations of a projection Choi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionBundle {
    /// PPT held. Trace preservation and `rank Φ(I) ≤ d_in` are hard errors.
    pub preconditions_met: bool,
    pub notes: Vec<String>,
    pub conditions: Vec<Condition>,
    /// Choi distance of the recovered factorization from the input.
    pub factorization_residual: Option<f64>,
}

impl ProjectionBundle {
    pub fn verdict(&self, label: &str) -> Option<Verdict> {
        self.conditions.iter().find(|c| c.label == label).map(|c| c.certificate.verdict)
    }

    /// All conditions reached the same verdict.
    pub fn agree(&self) -> bool {
        self.conditions.windows(2).all(|w| w[0].certificate.verdict == w[1].certificate.verdict)
    }

    /// Disagreement on an input meeting every precondition.
    pub fn is_violation(&self) -> bool {
        self.preconditions_met && !self.agree()
    }
}

fn argmax(v: &[crate::matcore::C64]) -> usize {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter().position(|z| z.norm() >= m * (1.0 - 1e-9)).unwrap_or(0)
}

/// Form with orthonormal `u_j` spanning the input and unit `v_j`, ordered so
/// that `u_j` peaks at coordinate `j` where possible.
fn projection_form(k: &KrausRep, tol: &Tolerance) -> Option<DiagonalForm> {
    let f = input_orthogonal_form(k, tol)?;
    if f.len() != k.d_in() || f.v.iter().any(|v| (norm(v) - 1.0).abs() > tol.eps_eq.sqrt()) {
        return None;
    }
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by_key(|&j| argmax(&f.u[j]));
    Some(DiagonalForm {
        u: idx.iter().map(|&j| f.u[j].clone()).collect(),
        v: idx.iter().map(|&j| f.v[j].clone()).collect(),
    })
}

/// Evaluates, for a trace-preserving PPT map with `rank Φ(I) ≤ d_in`:
/// (i) the Choi matrix is a projection; (ii) EB with `d_in` rank-one Kraus
/// operators; (iii) the dual is C*-extreme; (iv) `Φ(X) = Σ ⟨u_j, X u_j⟩ |v_j⟩⟨v_j|`
/// with orthonormal `u_j` and unit `v_j`; (v) `Φ = S_A^c ∘ Ad_U`; and, for
/// unital maps with equal dimensions, (vi) degradability.
pub fn choi_projection_equivalences(k: &KrausRep, tol: &Tolerance) -> Result<ProjectionBundle> {
    if !k.is_trace_preserving(tol) {
        return Err(Error::Precondition("map is not trace-preserving".into()));
    }
    let r = k.image_of_identity().rank_tol(tol);
    if r > k.d_in() {
        return Err(Error::Precondition(format!("rank of the image of the identity is {r} > {}", k.d_in())));
    }
    let (d_in, d_out) = (k.d_in(), k.d_out());
    let ppt = is_ppt(k, tol);
    let mut notes = Vec::new();
    if !ppt.verdict.is_true() {
        notes.push("not PPT: the equivalences need not hold".to_string());
    }
    let mut conditions = Vec::new();
    let mut push = |label, description, certificate| conditions.push(Condition { label, description, certificate });

    let defect = choi_projection_defect(k);
    push(
        "i",
        "Choi matrix is a projection",
        Certificate::new(Property::ChoiProjection, Verdict::from_bool(defect <= tol.eps_eq), tol)
            .via("projection-defect")
            .with_witness(Witness::Obstruction { reason: "projection defect".into(), value: defect })
            .with_margin(tol.eps_eq - defect),
    );

    let form = projection_form(k, tol);
    let cr = k.choi_rank(tol);
    let eb = eb_kraus(k, tol, false);
    let ii = if eb.verdict.is_false() {
        eb.relabel(Property::Eb)
    } else if cr > d_in {
        Certificate::new(Property::Eb, Verdict::False, tol)
            .via("choi-rank-bounds-er")
            .with_witness(Witness::Obstruction { reason: "choi rank exceeds input dimension".into(), value: cr as f64 })
    } else if let (Verdict::True, Some(f)) = (eb.verdict, &form) {
        Certificate::new(Property::Eb, Verdict::True, tol)
            .via("diagonal-form")
            .with_witness(Witness::RankOneKraus { kraus: f.to_kraus(d_in, d_out) })
            .note(format!("{d_in} rank-one Kraus operators"))
    } else {
        Certificate::new(Property::Eb, Verdict::Indeterminate, tol)
            .note("no rank-one list of input-dimension length found")
    };
    push("ii", "EB with entanglement-breaking rank equal to the input dimension", ii);

    push("iii", "dual is C*-extreme among unital EB maps", cstar_extreme_test(&k.dual(), tol));

    let iv = match &form {
        Some(f) => Certificate::new(Property::ChoiProjection, Verdict::True, tol)
            .via("diagonal-form")
            .with_witness(f.witness()),
        None => Certificate::new(Property::ChoiProjection, Verdict::False, tol).via("diagonal-form").with_witness(
            Witness::Obstruction {
                reason: "no form with orthonormal inputs and unit outputs".into(),
                value: cr as f64,
            },
        ),
    };
    push("iv", "orthonormal u_j and unit v_j", iv);

    let mut factorization_residual = None;
    let v_cert = match &form {
        Some(f) => {
            let (cert, res) = factorization(k, f, tol);
            factorization_residual = Some(res);
            cert
        }
        None => Certificate::new(Property::ChoiProjection, Verdict::False, tol)
            .via("schur-complement-factorization")
            .with_witness(Witness::Obstruction { reason: "no diagonal form to factor".into(), value: 0.0 }),
    };
    push("v", "Schur complement after a unitary", v_cert);

    if d_in == d_out && k.is_unital(tol) {
        push("vi", "degradable", degradability_via_inverse(k, tol));
    }

    Ok(ProjectionBundle { preconditions_met: ppt.verdict.is_true(), notes, conditions, factorization_residual })
}

/// `A = [⟨v̄_i, v̄_j⟩]`, `U = Σ_k |e_k⟩⟨u_k|`, checked against the input and
/// against `S_A` being complementary to the Schur complement built from `v`.
fn factorization(k: &KrausRep, f: &DiagonalForm, tol: &Tolerance) -> (Certificate, f64) {
    let n = f.len();
    let a = ComplexMatrix::from_fn(n, n, |i, j| inner(&f.v[j], &f.v[i]));
    let u = ComplexMatrix::from_fn(n, k.d_in(), |r, c| f.u[r][c].conj());
    let cert = |v| Certificate::new(Property::ChoiProjection, v, tol).via("schur-complement-factorization");
    let sc = match schur_complement_from_vectors(&f.v) {
        Ok(s) => s,
        Err(e) => return (cert(Verdict::False).note(e.to_string()), f64::INFINITY),
    };
    let ad_u = KrausRep::new(k.d_in(), n, vec![u.clone()]).expect("nonzero unitary");
    let composed = sc.compose(&ad_u).expect("dimensions");
    let residual = composed.choi().mat().distance(k.choi().mat());
    let rel = residual / k.choi().mat().frobenius_norm().max(1.0);
    let unitary = (&u * &u.adjoint()).approx_eq(&ComplexMatrix::identity(n), tol.eps_eq.sqrt());
    let unit_diag = (0..n).all(|i| (a.get(i, i).re - 1.0).abs() <= tol.eps_eq.sqrt());
    let pair = schur_map(&a, tol).map(|s| is_complementary_pair(&s, &sc, tol).verdict);
    let verdict = if rel <= 10.0 * tol.eps_eq && unitary && unit_diag {
        match pair {
            Ok(Verdict::True) => Verdict::True,
            _ => Verdict::Indeterminate,
        }
    } else {
        Verdict::False
    };
    (cert(verdict).with_witness(Witness::Factorization { a, u }).with_residual(residual), residual)
}

/// Schur multiplier `S_a` and its complement.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurCharacterization {
    /// `‖a − diag(a)‖_F`.
    pub off_diagonal: f64,
    /// Entanglement breaking of `S_a`, decided structurally.
    pub seb: Certificate,
    /// The complement is always entanglement breaking; witness: its vectors `z_k`.
    pub complement_seb: Certificate,
    pub complement_degradable: Certificate,
}

impl SchurCharacterization {
    pub fn is_diagonal(&self, tol: &Tolerance) -> bool {
        self.off_diagonal <= tol.eps_eq
    }
}

pub fn schur_characterization(a: &ComplexMatrix, tol: &Tolerance) -> Result<SchurCharacterization> {
    let s = schur_map(a, tol)?;
    let off_diagonal = (a - &a.diagonal_part()).frobenius_norm();
    let seb = eb_kraus(&s, tol, true).relabel(Property::Seb).note(format!("off-diagonal mass {off_diagonal:.3e}"));
    let z = schur_complement_vectors(a, tol)?;
    let comp = schur_complement_from_vectors(&z)?;
    let complement_seb =
        eb_kraus(&comp, tol, true).relabel(Property::Seb).with_witness(Witness::SchurVectors { z: z.clone() });
    let complement_degradable = degradable_seb_test(&schur_complement_holevo(&z, tol)?, tol)?;
    Ok(SchurCharacterization { off_diagonal, seb, complement_seb, complement_degradable })
}
