//! Exact exterior calculus and positivity certification for balanced
//! Hermitian structures on twistor spaces of hyperhermitian manifolds.
//!
//! The crate provides:
//!
//! * an exact coefficient ring (Gaussian-rational polynomials over powers of
//!   `1 + x² + y²`) with a graded exterior algebra on top ([`algebra`]);
//! * complex structures, bigraded operators, Hodge star, torsion forms and
//!   the four equivalent balancedness conditions ([`hermitian`]);
//! * quaternionic triples, hyperhermitian metrics and the sphere of
//!   Hermitian forms they carry ([`quaternionic`]);
//! * the twistor chart machinery: stereographic sphere functions,
//!   Fubini–Study form, the product complex structure and the closed-form
//!   fiber identities ([`twistor`]);
//! * positivity testing, root extraction of positive forms and the
//!   margin search that assembles certified balanced structures
//!   ([`positivity`]).
//!
//! All symbolic values are immutable and all operations are pure; identity
//! checks reduce both sides to canonical form and compare coefficient maps.

pub mod algebra;
pub mod hermitian;
pub mod numeric;
pub mod positivity;
pub mod quaternionic;
pub mod rng;
pub mod twistor;
