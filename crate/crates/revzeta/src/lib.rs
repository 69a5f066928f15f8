//! Spectral zeta functions of the Dirichlet Laplacian on surfaces of
//! revolution: closed-form residues and special values, the zeta-regularized
//! determinant, and the numerical machinery (shooting, Pruefer counting,
//! asymptotic matching, heat traces) used to validate them.

// Validation code spells range checks as negated comparisons (`!(x > 0.0)`)
// so that NaN arguments fail them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heatkernel;
pub mod ode;
pub mod profile;
pub mod quad;
pub mod report;
pub mod special;
pub mod sturm;
pub mod verify;
pub mod wkb;
pub mod zeta;

pub use error::{Error, Result};
