//! Birkhoff–James orthogonality and best approximation in discretized
//! Lebesgue–Bochner spaces `L^p(μ, X)`.
//!
//! Measures are finite weighted atom lists ([`measure`]), `X` is a
//! finite-dimensional space with a smooth norm ([`space`]), and functions
//! are one vector per atom ([`bochner`]). [`ortho`] decides `f ⊥ g` by
//! direct minimization and by integral criteria built from support
//! functionals; [`approx`] computes and certifies best approximations.

pub mod approx;
pub mod bochner;
pub mod error;
pub mod measure;
pub mod ortho;
pub mod random;
pub mod search;
pub mod space;

pub use approx::{best_approx, check_l1_characterization, check_lp_characterization, light_check, ApproxResult, SubspaceBasis};
pub use bochner::BochnerFunction;
pub use error::{Error, Result};
pub use measure::{AtomLabel, DiscreteMeasure};
pub use num_complex::Complex64;
pub use ortho::{
    bj_criterion, bj_direct, bj_in_space, bj_keckic, bj_l1_criterion, bj_lp_criterion, bj_scalar_l1, bj_scalar_lp,
    Criterion, CriterionChoice, OrthoCertificate, Verdict,
};
pub use space::{Field, Functional, NormKind, SmoothSpace, Vector};
