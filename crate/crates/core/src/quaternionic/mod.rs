//! Quaternionic geometry: triples of anticommuting complex structures,
//! hyperhermitian metrics, the sphere of Hermitian forms, quaternionic
//! frames and the model catalog.

mod models;
mod qframe;
mod sphere;
mod triple;

pub use models::{
    model_grid, product_grid, rational_linspace, BaseModel, ModelError, ModelKind,
};
pub use qframe::{
    canonical_decompositions, holomorphic_symplectic_form, orthonormality_residual,
    quaternionic_frame, DecompositionRecord, QuaternionicCoframe,
};
pub use sphere::{omega_a, symmetrize_metric, HyperhermitianMetric, SpherePoint, SphereError};
pub use triple::{QuaternionError, QuaternionicTriple};
