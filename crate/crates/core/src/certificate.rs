//! Ternary verdicts with witnesses, shared by the complement and structure
//! modules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matcore::{cvec_list, ComplexMatrix, Tolerance, C64};
use crate::reprs::KrausRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    Ppt,
    Eb,
    Seb,
    Degradable,
    AntiDegradable,
    SelfComplementary,
    Complementary,
    CStarExtreme,
    ChoiProjection,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Ppt => "PPT",
            Property::Eb => "EB",
            Property::Seb => "SEB",
            Property::Degradable => "Degradable",
            Property::AntiDegradable => "AntiDegradable",
            Property::SelfComplementary => "SelfComplementary",
            Property::Complementary => "Complementary",
            Property::CStarExtreme => "CStarExtreme",
            Property::ChoiProjection => "ChoiProjection",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

/// One proportionality class of a rank-one Holevo form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolevoClass {
    /// Representative vector `u_k` (the first member's).
    #[serde(with = "crate::matcore::cvec")]
    pub u: Vec<C64>,
    /// Merged, normalized state `R̃_k`.
    pub r: ComplexMatrix,
    /// Indices of the original pairs in this class.
    pub members: Vec<usize>,
    /// `λ_{j,k}` with `u_j = λ_{j,k} u_k`, aligned with `members`.
    #[serde(with = "crate::matcore::cvec")]
    pub coefficients: Vec<C64>,
}

/// Rank-one Holevo form regrouped so that effects in different classes are
/// linearly independent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupedHolevoForm {
    pub classes: Vec<HolevoClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Connecting isometry `V` with `Ψ = Ad_V ∘ Φ^c_min`.
    Isometry { v: ComplexMatrix },
    /// A channel that does the job (degrading or anti-degrading map, factor, …).
    Channel { role: String, kraus: KrausRep },
    /// Smallest eigenvalue of a matrix whose positivity decides the verdict.
    MinEigenvalue { matrix: String, value: f64 },
    /// Explicit rank-one Kraus operators.
    RankOneKraus { kraus: KrausRep },
    /// Offending pair of proportionality classes (0-based, by first member).
    ViolatingPair { i: usize, j: usize, overlap: f64, product_norm: f64 },
    /// Grouped form and the self-complement inclusion `W`.
    SelfComplement { grouped: GroupedHolevoForm, w: ComplexMatrix },
    /// `Φ(X) = Σ_i ⟨u_i, X u_i⟩ |v_i⟩⟨v_i|`.
    CanonicalForm {
        #[serde(with = "cvec_list")]
        u: Vec<Vec<C64>>,
        #[serde(with = "cvec_list")]
        v: Vec<Vec<C64>>,
    },
    /// `Φ = S_A^c ∘ Ad_U`.
    Factorization { a: ComplexMatrix, u: ComplexMatrix },
    /// Vectors `z_k` of the Schur complement, `S_A^c(T) = Σ_k ⟨e_k, T e_k⟩ |z_k⟩⟨z_k|`.
    SchurVectors {
        #[serde(with = "cvec_list")]
        z: Vec<Vec<C64>>,
    },
    /// Free-form obstruction with a numeric measure.
    Obstruction { reason: String, value: f64 },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Isometry { .. } => "isometry",
            Witness::Channel { .. } => "channel",
            Witness::MinEigenvalue { .. } => "min_eigenvalue",
            Witness::RankOneKraus { .. } => "rank_one_kraus",
            Witness::ViolatingPair { .. } => "violating_pair",
            Witness::SelfComplement { .. } => "self_complement",
            Witness::CanonicalForm { .. } => "canonical_form",
            Witness::Factorization { .. } => "factorization",
            Witness::SchurVectors { .. } => "schur_vectors",
            Witness::Obstruction { .. } => "obstruction",
        }
    }
}

/// Outcome of one structural test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub tolerances: Tolerance,
    /// Names of the criteria that produced the verdict.
    pub provenance: Vec<String>,
    pub diagnostic: String,
    /// Verification residual, when one was computed.
    pub residual: Option<f64>,
    /// Distance of the deciding quantity from its threshold.
    pub margin: Option<f64>,
}

impl Certificate {
    pub fn new(property: Property, verdict: Verdict, tol: &Tolerance) -> Self {
        Self {
            property,
            verdict,
            witness: None,
            tolerances: *tol,
            provenance: Vec::new(),
            diagnostic: String::new(),
            residual: None,
            margin: None,
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn via(mut self, criterion: impl Into<String>) -> Self {
        self.provenance.push(criterion.into());
        self
    }

    pub fn note(mut self, d: impl Into<String>) -> Self {
        self.diagnostic = d.into();
        self
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn with_margin(mut self, m: f64) -> Self {
        self.margin = Some(m);
        self
    }

    /// Same outcome reported under a different property name.
    pub fn relabel(mut self, property: Property) -> Self {
        self.property = property;
        self
    }
}
