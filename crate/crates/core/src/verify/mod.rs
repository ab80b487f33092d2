//! Brute-force checks of the operator identities and of the rotation
//! analysis behind the exact iterate.

mod direct;
mod report;
pub mod rotation;

pub use direct::{
    check_proposition, decomposed_circuit, deviation_from_direct, direct_matrix,
    max_abs_diff_on_columns, query_ancilla_zero_indices, restricted_block, slot_aware_matrix,
    DirectOperator, PropositionCheck,
};
pub use report::{
    verify_all, verify_lemmas, verify_props, verify_theorems, CheckRecord, Scope, SuiteOptions,
    VerificationReport, LEMMA_TOLERANCE, MATRIX_TOLERANCE, SUCCESS_TOLERANCE,
};
pub use rotation::{
    bloch_of, lemma1_check, lemma2_homomorphism_check, lemma3_axis_decomposition_check,
    lemma4_rotation_transport_check, lemma5_angle_check, BlochVector, Lemma5Outcome,
    Rotation3, RotationParams,
};
