//! Hermitian geometry over the exact ring: complex structures, bigraded
//! operators, Hodge star, torsion traces and the balancedness report.

mod balanced;
mod bigrade;
mod metric;
mod star;
mod structure;
mod torsion;

pub use balanced::{
    balanced_report, BalancedReport, BalancedVerdict, ConditionRecord, DEFAULT_BALANCED_TOLERANCE,
};
pub use bigrade::{
    bigrade_split, dbar, dc, dc_via_action, integrability_leakage, partial, project_pq,
    BigradedForm,
};
pub use metric::{MetricError, MetricField};
pub use star::{
    form_inner_product_exact, index_subsets, star_exact, star_f64, ScaledForm,
};
pub use structure::{
    nijenhuis_components, nijenhuis_is_zero, ComplexStructureField, StructureError,
};
pub use torsion::{
    bismut_torsion, chern_torsion, codifferential_omega, codifferential_omega_exact,
    codifferential_omega_fd, hermitian_orthonormal_frame, hermitian_residual_f64, one_form_gap,
    orientation_sign, torsion_trace_bismut, torsion_trace_chern, CodiffBackend,
};
