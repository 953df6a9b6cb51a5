//! The sphere of complex structures `A = a₁I + a₂J + a₃K` and the pencil of
//! Hermitian forms `ω_A(X, Y) = g(AX, Y)` it induces.

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{ExteriorForm, GaussianRational, TwistorScalar};
use crate::hermitian::{ComplexStructureField, MetricError, MetricField};
use crate::quaternionic::triple::QuaternionicTriple;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("sphere point is not unit: a₁²+a₂²+a₃² − 1 ≠ 0")]
    NotUnit,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A point of the structure sphere, with ring-valued coordinates so the
/// point may vary over the twistor chart (the symbolic `x₁, x₂, x₃`).
#[derive(Clone, Debug)]
pub struct SpherePoint {
    pub a: [TwistorScalar; 3],
}

impl SpherePoint {
    /// Exact unit check in the ring.
    pub fn new(a: [TwistorScalar; 3]) -> Result<Self, SphereError> {
        let sum = a[0]
            .mul(&a[0])
            .add(&a[1].mul(&a[1]))
            .add(&a[2].mul(&a[2]));
        if !sum.sub(&TwistorScalar::one(a[0].frame())).is_zero() {
            return Err(SphereError::NotUnit);
        }
        Ok(Self { a })
    }

    pub fn from_rationals(
        frame: &std::sync::Arc<crate::algebra::Frame>,
        a: [BigRational; 3],
    ) -> Result<Self, SphereError> {
        let vals = a.map(|r| TwistorScalar::constant(frame, GaussianRational::from_rational(r)));
        Self::new(vals)
    }

    /// The structure `a₁I + a₂J + a₃K`; squares exactly to `−Id` thanks to
    /// the unit constraint and the anticommutation relations.
    pub fn structure(&self, t: &QuaternionicTriple) -> ComplexStructureField {
        let combo = ComplexStructureField::linear_combination(&[
            (&self.a[0], &t.i),
            (&self.a[1], &t.j),
            (&self.a[2], &t.k),
        ]);
        debug_assert!(combo.square_plus_id().iter().all(|v| v.is_zero()));
        combo
    }
}

/// A metric verified Hermitian for all three structures (hence for the
/// whole sphere, by linearity).
#[derive(Clone, Debug)]
pub struct HyperhermitianMetric {
    g: MetricField,
}

impl HyperhermitianMetric {
    pub fn new(g: MetricField, t: &QuaternionicTriple) -> Result<Self, MetricError> {
        g.check_hermitian(&t.i)?;
        g.check_hermitian(&t.j)?;
        g.check_hermitian(&t.k)?;
        Ok(Self { g })
    }

    pub fn metric(&self) -> &MetricField {
        &self.g
    }

    pub fn into_metric(self) -> MetricField {
        self.g
    }
}

/// Quaternionic symmetrization: `g(X,Y) = g₀(X,Y) + g₀(IX,IY) + g₀(JX,JY)
/// + g₀(KX,KY)`, Hermitian for all three structures by construction (still
/// verified exactly).
pub fn symmetrize_metric(
    g0: &MetricField,
    t: &QuaternionicTriple,
) -> Result<HyperhermitianMetric, MetricError> {
    let mut acc = g0.clone();
    for s in t.structures() {
        // add g₀(S·, S·)
        acc = add_pullback(&acc, g0, s);
    }
    HyperhermitianMetric::new(acc, t)
}

fn add_pullback(
    acc: &MetricField,
    g0: &MetricField,
    s: &ComplexStructureField,
) -> MetricField {
    let dim = g0.dim();
    let frame = g0.frame();
    let mut gram = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut v = acc.entry(a, b).clone();
            let mut pull = TwistorScalar::zero(frame);
            for c in 0..dim {
                let sca = s.entry(c, a);
                if sca.is_zero() {
                    continue;
                }
                for d in 0..dim {
                    let sdb = s.entry(d, b);
                    if sdb.is_zero() {
                        continue;
                    }
                    pull = pull.add(&sca.mul(sdb).mul(g0.entry(c, d)));
                }
            }
            v = v.add(&pull);
            gram.push(v);
        }
    }
    MetricField::new(frame, gram).expect("pullback of symmetric is symmetric")
}

/// `ω_A = a₁ω_I + a₂ω_J + a₃ω_K = g(A·, ·)`, exact in the ring.
pub fn omega_a(g: &HyperhermitianMetric, t: &QuaternionicTriple, a: &SpherePoint) -> ExteriorForm {
    let forms: Vec<ExteriorForm> = t
        .structures()
        .iter()
        .map(|s| g.metric().hermitian_form(s))
        .collect();
    forms[0]
        .scale(&a.a[0])
        .add(&forms[1].scale(&a.a[1]))
        .add(&forms[2].scale(&a.a[2]))
}
