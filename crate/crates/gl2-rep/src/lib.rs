//! Finite-rank representations of gl2 over Artinian local coefficient
//! rings, with exact rational arithmetic throughout.
//!
//! The crate provides the enveloping algebra in PBW normal form, modules
//! presented by their four operator matrices with machine-checked bracket
//! relations, the Casimir and infinitesimal characters, generalized
//! eigenspace projections, and translation functors between characters.

pub mod error;
pub mod module;
pub mod translate;
pub mod uenv;

pub use error::Gl2Error;
pub use module::{build_vk, det_power, weight_module, Gl2Module};
pub use translate::{
    decompose_with, dominant_rep, find_intertwiner, generalized_eigenspace,
    infinitesimal_character, multiplicity_by_weight_count, translate_abstract, Character,
};
pub use uenv::{ad_pi_twist, pbw_normal_form, Gen, UEnvElement};
