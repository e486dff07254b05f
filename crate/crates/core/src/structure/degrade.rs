//! Degradability through the superoperator pseudo-inverse.

use super::rank_one_kraus;
use super::seb::{degradable_seb_test, holevo_from_rank_one, rank_one_antidegrading};
use crate::certificate::{Certificate, Property, Verdict, Witness};
use crate::complement::{complement_from_kraus, minimal_complement};
use crate::matcore::{ComplexMatrix, Side, Tolerance};
use crate::reprs::{ChoiMatrix, KrausRep};

/// Choi matrix of the map whose column-stacking superoperator is `s`
/// (`d_out² × d_in²`).
pub fn choi_from_superoperator(s: &ComplexMatrix, d_in: usize, d_out: usize) -> ComplexMatrix {
    assert_eq!(s.dims(), (d_out * d_out, d_in * d_in), "superoperator shape");
    ComplexMatrix::from_fn(d_in * d_out, d_in * d_out, |row, col| {
        let (i, r) = (row / d_out, row % d_out);
        let (j, c) = (col / d_out, col % d_out);
        s.get(c * d_out + r, j * d_in + i)
    })
}

fn relative_gap(a: &KrausRep, b: &KrausRep) -> f64 {
    let cb = b.choi().into_mat();
    a.choi().mat().distance(&cb) / cb.frobenius_norm().max(1.0)
}

/// Degradability from the linear equation `Γ ∘ Φ = Φ^c_min`.
///
/// The candidate `Γ = S_c S⁺` is the unique solution when the superoperator
/// `S` of `Φ` is onto, so its failing to be CP decides `False`. Maps that are
/// not onto but have rank-one Kraus operators go to the Holevo-class test.
/// A complement that does not vanish on `ker S` rules out every `Γ`.
pub fn degradability_via_inverse(k: &KrausRep, tol: &Tolerance) -> Certificate {
    let (d_in, d_out) = (k.d_in(), k.d_out());
    let s = k.superoperator();
    let comp = minimal_complement(k, tol);
    let env = comp.d_out();
    let sc = comp.superoperator();
    let rank = s.rank_tol(tol);
    let onto = rank == d_out * d_out;
    let cert = |v| Certificate::new(Property::Degradable, v, tol);

    if !onto {
        if let Some(r1) = rank_one_kraus(k, tol) {
            if let Ok(c) = holevo_from_rank_one(&r1, tol).and_then(|h| degradable_seb_test(&h, tol)) {
                return c.via("rank-one-kraus");
            }
        }
    }

    let pinv = s.pinv(tol.eps_rank);
    if rank < d_in * d_in {
        let kernel = ComplexMatrix::identity(d_in * d_in) - &pinv * &s;
        let leak = (&sc * &kernel).frobenius_norm() / sc.frobenius_norm().max(f64::MIN_POSITIVE);
        if leak > tol.eps_eq.sqrt() {
            return cert(Verdict::False)
                .via("complement-vanishes-on-kernel")
                .with_witness(Witness::Obstruction {
                    reason: "complement is nonzero on the kernel".into(),
                    value: leak,
                })
                .note(format!("superoperator rank {rank} of {}", d_in * d_in));
        }
    }

    let g = &sc * &pinv;
    let choi = choi_from_superoperator(&g, d_out, env).hermitian_part();
    let psd = choi.psd_margin(tol).unwrap_or(f64::NEG_INFINITY);
    let out_trace = choi.partial_trace((d_out, env), Side::Second).expect("Choi dimensions");
    let tni = (ComplexMatrix::identity(d_out) - out_trace.transpose()).psd_margin(tol).unwrap_or(f64::NEG_INFINITY);
    let via = if onto { "unique-inverse-candidate" } else { "pseudo-inverse-candidate" };
    if psd >= 0.0 && tni >= 0.0 {
        let gamma = ChoiMatrix::new(d_out, env, choi, tol).and_then(|c| c.to_kraus(tol));
        if let Ok(gamma) = gamma {
            let residual = relative_gap(&gamma.compose(k).expect("dimensions"), &comp);
            if residual <= 10.0 * tol.eps_eq {
                return cert(Verdict::True)
                    .via(via)
                    .with_witness(Witness::Channel { role: "degrading".into(), kraus: gamma })
                    .with_residual(residual)
                    .with_margin(psd.min(tni));
            }
        }
        return cert(Verdict::Indeterminate).via(via).note("candidate is CP but fails verification");
    }
    let (matrix, value) =
        if psd < 0.0 { ("degrading-choi", choi.min_eigenvalue()) } else { ("identity-minus-degrading-effect", tni) };
    let w = Witness::MinEigenvalue { matrix: matrix.into(), value };
    if onto {
        cert(Verdict::False).via(via).with_witness(w).with_margin(psd.min(tni))
    } else {
        cert(Verdict::Indeterminate)
            .via(via)
            .with_witness(w)
            .note("candidate is not CP, but other extensions off the range are not excluded")
    }
}

/// Anti-degradability: rank-one Kraus operators give the anti-degrading map
/// directly; otherwise the complement is tested for degradability.
pub fn antidegradable_test(k: &KrausRep, tol: &Tolerance) -> Certificate {
    if let Some(r1) = rank_one_kraus(k, tol) {
        let gamma = rank_one_antidegrading(&r1);
        let comp = complement_from_kraus(&r1);
        let residual = relative_gap(&gamma.compose(&comp).expect("dimensions"), k);
        if residual <= 10.0 * tol.eps_eq {
            return Certificate::new(Property::AntiDegradable, Verdict::True, tol)
                .via("rank-one-antidegrading")
                .with_witness(Witness::Channel { role: "antidegrading".into(), kraus: gamma })
                .with_residual(residual);
        }
    }
    let comp = minimal_complement(k, tol);
    let mut c = degradability_via_inverse(&comp, tol).relabel(Property::AntiDegradable);
    c.provenance.insert(0, "complement-route".into());
    c
}
