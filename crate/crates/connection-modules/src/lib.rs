//! Lattice models of regular connections over Artinian local Q-algebras.

pub mod error;
pub mod module;
pub mod normalize;
pub mod structure;
pub mod counit;
pub mod tensor;
pub mod translate;

pub use counit::{counit_check, CounitReport};
pub use error::ConnError;
pub use module::{
    char_poly, divide_flat_by_t, flat_rows_agree, integer_roots, poly_of_operator,
    ConnectionModule, TMat,
};
pub use normalize::{
    block_basis, change_weights_filtration, change_weights_hensel, d_pdr,
    fuchs_normalize_weight0, horizontal_isomorphism, lattice_from_filtration,
    lattice_spans_equal, nilpotency_order, partial_twist, sylvester_solve, weight_projectors,
    FilteredNilpotentData, FiltrationStep, LaurentMat, PdrData,
};
pub use structure::{
    casimir_scalar_of, standard_g_structure, twist_det, zeta_scalar_of, Gl2ConnectionModule,
};
pub use tensor::{casimir_tensor, tensor_with_vk, CasimirTensorData};
pub use translate::{
    character_casimir, character_zeta, linked_weight, membership_lattice_low,
    oracle_translated_span, preimage_lattice_top, projected_span, span_contains_band_units,
    split_sen_roots, translate_conn, weights_of_character, window_spans_equal_mod,
    TranslationData,
};
