//! Objects over the truncated S₁, the reduction functor to S̃ and the
//! lifting algorithms back.

mod lift;
mod module;

pub use lift::{
    apply_s1, check_s1_morphism, lift_morphism, lift_object, lift_tilde_morphism, round_trip_report, scalar_lift_report,
    scalar_matrix, LiftedMorphism, LiftedObject,
};
pub use module::{functor_t, S1Column, S1Module};
