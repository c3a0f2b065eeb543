//! The category M̃^r of filtered S̃-modules with divided Frobenius and monodromy.

mod filtration;
mod module;
mod morphism;
mod simple;
mod smith;

pub use filtration::{admissible_filtration, AdmissibleFiltration};
pub use module::{TildeColumn, TildeModule};
pub use morphism::{check_morphism, TildeMorphism};
pub use simple::{cyclic_matrix, make_simple, SimpleObject};
pub use smith::{adapted_basis, smith_adapted, verify_adapted, AdaptedBasis};

#[cfg(test)]
mod tests;
