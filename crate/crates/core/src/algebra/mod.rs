//! Exact coefficient arithmetic and the graded exterior algebra.

mod form;
mod frame;
mod gaussian;
mod lift;
mod poly;
mod scalar;

pub use form::{
    degree, index_bits, index_degree, merge_sign, ExteriorForm, FormDegree, FormError, MultiIndex,
};
pub use frame::{Frame, RingError, DEFAULT_DEGREE_CAP};
pub use gaussian::GaussianRational;
pub use lift::{lift_form, lift_poly, lift_scalar};
pub use poly::ChartPolynomial;
pub use scalar::{chart_denominator, TwistorScalar};
