//! Matrix diagrams of real hyperplane arrangements.
//!
//! A matrix diagram assigns a vector space `E_{A,B}` to every pair of faces of an arrangement,
//! together with maps that are covariant in the second index and contravariant in the first.
//! This crate decides, by exact computation, whether such a diagram satisfies the matrix
//! diagram axioms and whether the complex of cellular sheaves it defines on `C^n` is a
//! perverse sheaf for the stratification by complexified flats.
//!
//! Layers, bottom up:
//!
//! - [`linalg`]: exact matrices over `Q` and `F_p`, cochain complexes, cohomology.
//! - [`arrangement`]: hyperplane arrangements, faces as sign vectors, the Tits product, flats.
//! - [`strata`]: product cells `iA+B`, complex stratum keys, the intermediate stratification.
//! - [`fan`]: orientation signs and cellular sheaves on the real face fan.
//! - [`diagram`]: matrix diagrams, validation, duality, morphisms, kernels and cokernels.
//! - [`cousin`]: the Cousin complex of a diagram and the constructibility / perversity checks.
//! - [`dirac`]: the one-dimensional case and its `(γ, δ)` description.
//! - [`catalog`]: a small set of standard examples used by the tests and the CLI.

pub mod arrangement;
pub mod catalog;
pub mod cousin;
pub mod diagram;
pub mod dirac;
pub mod fan;
pub mod linalg;
pub mod lp;
pub mod strata;

pub use arrangement::{Arrangement, Face, FaceId, FacePoset, Mode, Sign};
pub use cousin::{build_cousin, compact_cohomology, perversity_report, PerversityReport};
pub use diagram::{validate, DiagramError, DiagramMorphism, MatrixDiagram, ValidationReport};
pub use linalg::{FieldSpec, Matrix};
pub use strata::{ProductCell, StratumKey, Strata};
