//! Exact arithmetic for mod-p Breuil modules.
//!
//! The crate covers the finite field k, the divided-power rings S₁ and
//! S̃ = k[u]/u^p, the category of filtered φ_r-modules with monodromy over S̃,
//! the lifting algorithms between S₁-objects and their reductions, and the
//! tame inertia weights attached to simple objects.

pub mod cat;
pub mod cli;
pub mod dprings;
pub mod equiv;
pub mod error;
pub mod gf;
pub mod inertia;
pub mod json;
pub mod linalg;
pub mod mat;
pub mod oracle;
pub mod padic;
pub(crate) mod presentation;
pub mod report;

pub use error::{Error, Result};
