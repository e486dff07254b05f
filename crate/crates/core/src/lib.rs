//! Quantum channel representations, complementary channels and structural
//! tests (PPT, entanglement breaking, degradability, self-complementarity).

pub mod certificate;
pub mod complement;
pub mod error;
pub mod matcore;
pub mod reprs;
pub mod structure;
pub mod suites;
pub mod zoo;

pub use certificate::{Certificate, GroupedHolevoForm, HolevoClass, Property, Verdict, Witness};
pub use complement::{
    complement_from_kraus, connecting_isometry, is_complementary_pair, is_self_complementary, minimal_complement,
    ComplementPair, IsometryMatch,
};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, HermitianEigen, Side, Tolerance, C64};
pub use reprs::{ChoiMatrix, HolevoForm, HolevoPair, KrausRep, StinespringRep};
pub use structure::{
    antidegradable_test, choi_projection_equivalences, cstar_extreme_test, degradability_via_inverse,
    degradable_seb_test, eb_certificate, is_ppt, schur_characterization, seb_antidegrading_map,
    self_complement_witness,
};
pub use zoo::ZooSpec;

/// Library version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
