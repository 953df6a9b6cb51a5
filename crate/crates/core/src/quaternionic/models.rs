//! The desk-scale model catalog: flat `ℍ^k`, its torus presentation
//! (same chart data, periodic sample grid) and a conformally flat
//! hyperhermitian model `λ(q)²·δ` with polynomial `λ`, the negative control
//! for everything that requires hyperkähler.

use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{ChartPolynomial, Frame, GaussianRational, TwistorScalar};
use crate::hermitian::{MetricError, MetricField};
use crate::quaternionic::sphere::HyperhermitianMetric;
use crate::quaternionic::triple::{QuaternionError, QuaternionicTriple};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("conformal factor must be positive on the sample box; λ({point:?}) = {value}")]
    NonPositiveLambda { point: Vec<f64>, value: f64 },
    #[error("unknown model name `{0}` (expected flat | torus | conformal)")]
    UnknownName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Flat,
    Torus,
    Conformal,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self, ModelError> {
        match name {
            "flat" => Ok(Self::Flat),
            "torus" => Ok(Self::Torus),
            "conformal" => Ok(Self::Conformal),
            other => Err(ModelError::UnknownName(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Flat => "flat",
            Self::Torus => "torus",
            Self::Conformal => "conformal",
        }
    }

    /// Whether the model's metric is hyperkähler (all `ω_A` closed).
    pub fn is_hyperkahler(self) -> bool {
        matches!(self, Self::Flat | Self::Torus)
    }
}

/// A hypercomplex model of quaternionic dimension `k` on a single chart.
#[derive(Clone, Debug)]
pub struct BaseModel {
    pub kind: ModelKind,
    pub k: usize,
    pub frame: Arc<Frame>,
    pub triple: QuaternionicTriple,
    pub metric: HyperhermitianMetric,
    /// Conformal factor, when the model has one.
    pub lambda: Option<TwistorScalar>,
}

impl BaseModel {
    pub fn flat(k: usize) -> Result<Self, ModelError> {
        let frame = Frame::manifold(4 * k);
        let triple = QuaternionicTriple::flat(&frame)?;
        let metric = HyperhermitianMetric::new(MetricField::identity(&frame), &triple)?;
        Ok(Self {
            kind: ModelKind::Flat,
            k,
            frame,
            triple,
            metric,
            lambda: None,
        })
    }

    pub fn torus(k: usize) -> Result<Self, ModelError> {
        let mut m = Self::flat(k)?;
        m.kind = ModelKind::Torus;
        Ok(m)
    }

    /// Conformally flat model with `λ = Σ coeffs[d]·q1^d`.
    pub fn conformal(k: usize, lambda_coeffs: &[BigRational]) -> Result<Self, ModelError> {
        let frame = Frame::manifold(4 * k);
        let triple = QuaternionicTriple::flat(&frame)?;
        let q1 = ChartPolynomial::var(&frame, 0);
        let mut lambda = ChartPolynomial::zero(&frame);
        let mut pow = ChartPolynomial::one(&frame);
        for c in lambda_coeffs {
            lambda = lambda.add(&pow.scale(&GaussianRational::from_rational(c.clone())));
            pow = pow.mul(&q1);
        }
        let lambda = TwistorScalar::from_poly(lambda);
        let metric_field = MetricField::conformal(&frame, &lambda);
        let metric = HyperhermitianMetric::new(metric_field, &triple)?;
        Ok(Self {
            kind: ModelKind::Conformal,
            k,
            frame,
            triple,
            metric,
            lambda: Some(lambda),
        })
    }

    /// The default conformal factor `1 + q1/10`.
    pub fn default_lambda() -> Vec<BigRational> {
        vec![
            BigRational::from_integer(1.into()),
            BigRational::new(1.into(), 10.into()),
        ]
    }

    pub fn dim(&self) -> usize {
        4 * self.k
    }

    /// Complex dimension `n = 2k`.
    pub fn complex_dim(&self) -> usize {
        2 * self.k
    }

    /// Verify `λ > 0` at the given points (no-op for flat models).
    pub fn check_lambda_positive(&self, points: &[Vec<BigRational>]) -> Result<(), ModelError> {
        if let Some(lambda) = &self.lambda {
            for p in points {
                let v = lambda.eval(p);
                let vf = v.abs_f64() * if v.re() >= &BigRational::from_integer(0.into()) { 1.0 } else { -1.0 };
                if vf <= 0.0 {
                    return Err(ModelError::NonPositiveLambda {
                        point: p.iter().map(crate::numeric::to_f64).collect(),
                        value: vf,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `n` exact rational sample values across `[lo, hi]`: endpoint-inclusive
/// for charts, endpoint-exclusive (periodic) for torus axes.
pub fn rational_linspace(
    lo: &BigRational,
    hi: &BigRational,
    n: usize,
    periodic: bool,
) -> Vec<BigRational> {
    assert!(n >= 2, "grid needs at least 2 points per axis");
    let span = hi - lo;
    let denom = if periodic { n } else { n - 1 };
    (0..n)
        .map(|i| lo + &span * BigRational::new(i.into(), denom.into()))
        .collect()
}

/// Deterministic cartesian product of per-axis sample values, last axis
/// fastest.
pub fn product_grid(axes: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for v in axis {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Uniform box grid over the model's manifold variables.
pub fn model_grid(
    model: &BaseModel,
    lo: &BigRational,
    hi: &BigRational,
    res_per_axis: usize,
) -> Vec<Vec<BigRational>> {
    let periodic = model.kind == ModelKind::Torus;
    let axis = rational_linspace(lo, hi, res_per_axis, periodic);
    let axes: Vec<Vec<BigRational>> = (0..model.dim()).map(|_| axis.clone()).collect();
    product_grid(&axes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_constructs() {
        for k in [1usize, 2] {
            BaseModel::flat(k).unwrap();
            BaseModel::torus(k).unwrap();
            BaseModel::conformal(k, &BaseModel::default_lambda()).unwrap();
        }
    }

    #[test]
    fn conformal_metric_is_hyperhermitian_with_density() {
        let m = BaseModel::conformal(1, &BaseModel::default_lambda()).unwrap();
        let density = m.metric.metric().density_hint().unwrap();
        // density = λ^4 for 4 real dimensions
        let lambda = m.lambda.as_ref().unwrap();
        assert_eq!(density, &lambda.pow(4));
    }

    #[test]
    fn lambda_positivity_check() {
        let m = BaseModel::conformal(1, &BaseModel::default_lambda()).unwrap();
        let good = vec![vec![BigRational::from_integer(0.into()); 4]];
        m.check_lambda_positive(&good).unwrap();
        let bad = vec![vec![
            BigRational::from_integer((-20).into()),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
        ]];
        assert!(m.check_lambda_positive(&bad).is_err());
    }

    #[test]
    fn grids_are_deterministic_and_sized() {
        let m = BaseModel::flat(1).unwrap();
        let lo = BigRational::new((-1).into(), 2.into());
        let hi = BigRational::new(1.into(), 2.into());
        let g = model_grid(&m, &lo, &hi, 3);
        assert_eq!(g.len(), 81);
        assert_eq!(g, model_grid(&m, &lo, &hi, 3));
        // torus grids exclude the right endpoint
        let t = BaseModel::torus(1).unwrap();
        let tg = model_grid(&t, &lo, &hi, 2);
        assert_eq!(tg.len(), 16);
        assert!(tg.iter().all(|p| p.iter().all(|v| v < &hi)));
    }
}
