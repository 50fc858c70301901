//! Exact octonion algebras over `Q` and `F_p`, the seven-dimensional
//! subspaces of alternating forms they define, and the exterior-square
//! machinery used to certify rank properties of those subspaces.

pub mod census;
pub mod error;
pub mod exterior;
pub mod field;
pub mod forms;
pub mod matrix;
pub mod octonion;
pub mod symmetry;

pub use census::{rank_census, CensusMode, CensusReport, CensusTally};
pub use error::{Error, Result};
pub use exterior::{Bivector, Duality, OmegaMap};
pub use field::{FieldElement, FieldKind, FieldSpec};
pub use forms::{AltForm, FormFamily, Space};
pub use matrix::{Matrix, Vector};
pub use octonion::{Construction, KernelImageProfile, Octonion, OctonionAlgebra, PureBasis};
pub use symmetry::{AlgebraMap, MapKind};
