//! Twistor chart machinery: stereographic sphere functions, the
//! Fubini–Study form, the product complex structure on `Z = M × CP¹` and
//! the exact verification of the fiber identities.

mod chart;
mod space;
mod theorems;

pub use chart::{
    antipode_point, compose_antipode, d_fiber, d_z, d_zbar, dbar_fiber, dc_fiber, ddc_fiber,
    derivative_table, dz_forms, fubini_study, fubini_study_gram_entry, partial_fiber,
    sphere_functions, sphere_point_at, ChartError, ChartKind, DerivativeTable,
};
pub use space::{TwistorError, TwistorSpace};
pub use theorems::{
    ddc_power, nabla_vertical, psi_ratio_split, psi_ratio_uniform, psi_wedge_residual_at,
    verify_theorem1, volume_form_record, DdcError, DdcPowerRecord, NablaRecord, Theorem1Record,
    VolumeRecord,
};
