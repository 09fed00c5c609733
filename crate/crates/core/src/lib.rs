//! Exact computation of derivations and Jordan derivations of finite rings over `Z/m`,
//! with finitary incidence rings `FI(P, R)` of finite preorders as the main family.
//!
//! Rings are given by structure constants on a free `Z/m`-module. Additive maps are
//! `Z/m`-matrices, and the spaces of derivations and Jordan derivations are computed as
//! kernels of linear systems in Howell normal form.

pub mod analysis;
pub mod derivation;
pub mod error;
pub mod incidence;
pub mod preorder;
pub mod ring;
pub mod search;
pub mod zmod;

pub use derivation::{
    check_map, compare_spaces, inner_derivation, solve_derivations, solve_jordan_derivations, AdditiveMap,
    DerivationKind, DerivationSpace, SpaceComparison, SpaceVerdict, Violation,
};
pub use error::{Error, Result};
pub use incidence::{fi_ring, verify_family_conditions, FamilyReport, IncidenceElement, IncidenceRing};
pub use preorder::{Preorder, QuotientPoset};
pub use ring::{
    build_ring, corner_ring, direct_product, matrix_ring, triangular_ring, Bimodule, CornerRing, MatrixRing,
    RingElement, StructureRing,
};
pub use zmod::{howell_form, kernel, SubgroupBasis, ZmMatrix, ZmVector};
pub use analysis::{
    bimodule_faithful, construct_dprime, cross_check, extend_isolated, identity_suite, identity_suite_incidence,
    restrict_corner, restrict_to_class, theorem_verdict, CrossCheckReport, Faithfulness, IdentityReport, SuiteMode,
    StructuralVerdict, VerdictOutcome,
};
