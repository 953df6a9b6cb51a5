//! Riemannian metrics with ring coefficients and their Hermitian forms.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{ExteriorForm, Frame, MultiIndex, TwistorScalar};
use crate::hermitian::structure::ComplexStructureField;
use crate::numeric::{min_eigenvalue, to_f64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("metric matrix must be square over the frame (got {got}, frame dim {dim})")]
    BadShape { got: usize, dim: usize },
    #[error("metric is not symmetric: entry ({row},{col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("metric is not Hermitian for the given structure: residual at ({row},{col})")]
    NotHermitian { row: usize, col: usize },
    #[error("metric is not positive definite at {point:?} (min eigenvalue {min_eigen})")]
    NotPositiveDefinite { point: Vec<f64>, min_eigen: f64 },
    #[error("finite-difference step underflowed")]
    StepUnderflow,
}

/// Symmetric coefficient matrix `g_{ab}` in the coordinate frame, entries in
/// the coefficient ring. An optional density hint `ρ = √det g` (an exact
/// ring element, when the model knows one) unlocks fully exact Hodge-star
/// paths.
#[derive(Clone, PartialEq)]
pub struct MetricField {
    frame: Arc<Frame>,
    gram: Vec<TwistorScalar>, // row-major, dim × dim
    density: Option<TwistorScalar>,
}

impl MetricField {
    pub fn new(frame: &Arc<Frame>, gram: Vec<TwistorScalar>) -> Result<Self, MetricError> {
        let dim = frame.dim();
        if gram.len() != dim * dim {
            return Err(MetricError::BadShape {
                got: gram.len(),
                dim,
            });
        }
        for a in 0..dim {
            for b in (a + 1)..dim {
                if !gram[a * dim + b].sub(&gram[b * dim + a]).is_zero() {
                    return Err(MetricError::NotSymmetric { row: a, col: b });
                }
            }
        }
        Ok(Self {
            frame: frame.clone(),
            gram,
            density: None,
        })
    }

    /// Flat metric `δ_{ab}`.
    pub fn identity(frame: &Arc<Frame>) -> Self {
        let dim = frame.dim();
        let mut gram = vec![TwistorScalar::zero(frame); dim * dim];
        for a in 0..dim {
            gram[a * dim + a] = TwistorScalar::one(frame);
        }
        let mut g = Self::new(frame, gram).expect("identity is symmetric");
        g.density = Some(TwistorScalar::one(frame));
        g
    }

    /// Conformally flat metric `λ²·δ` restricted to a variable block; the
    /// density over that block is `λ^{block}`.
    pub fn conformal(frame: &Arc<Frame>, lambda: &TwistorScalar) -> Self {
        let dim = frame.dim();
        let l2 = lambda.mul(lambda);
        let mut gram = vec![TwistorScalar::zero(frame); dim * dim];
        for a in 0..dim {
            gram[a * dim + a] = l2.clone();
        }
        let mut g = Self::new(frame, gram).expect("diagonal is symmetric");
        g.density = Some(lambda.pow(dim as u32));
        g
    }

    pub fn with_density(mut self, density: TwistorScalar) -> Self {
        self.density = Some(density);
        self
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> &TwistorScalar {
        &self.gram[row * self.dim() + col]
    }

    pub fn density_hint(&self) -> Option<&TwistorScalar> {
        self.density.as_ref()
    }

    /// Exact Hermitian compatibility: `JᵀGJ = G` as ring identities.
    pub fn check_hermitian(&self, j: &ComplexStructureField) -> Result<(), MetricError> {
        let dim = self.dim();
        for a in 0..dim {
            for b in a..dim {
                // g(J e_a, J e_b) = Σ_{c,d} J_{ca} J_{db} g_{cd}
                let mut acc = TwistorScalar::zero(&self.frame);
                for c in 0..dim {
                    let jca = j.entry(c, a);
                    if jca.is_zero() {
                        continue;
                    }
                    for d in 0..dim {
                        let jdb = j.entry(d, b);
                        if jdb.is_zero() {
                            continue;
                        }
                        acc = acc.add(&jca.mul(jdb).mul(self.entry(c, d)));
                    }
                }
                if !acc.sub(self.entry(a, b)).is_zero() {
                    return Err(MetricError::NotHermitian { row: a, col: b });
                }
            }
        }
        Ok(())
    }

    /// Hermitianize an arbitrary symmetric `g₀`: `g = g₀(X,Y) + g₀(JX,JY)`.
    pub fn hermitian_average(&self, j: &ComplexStructureField) -> Self {
        let dim = self.dim();
        let mut gram = self.gram.clone();
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = TwistorScalar::zero(&self.frame);
                for c in 0..dim {
                    let jca = j.entry(c, a);
                    if jca.is_zero() {
                        continue;
                    }
                    for d in 0..dim {
                        let jdb = j.entry(d, b);
                        if jdb.is_zero() {
                            continue;
                        }
                        acc = acc.add(&jca.mul(jdb).mul(self.entry(c, d)));
                    }
                }
                gram[a * dim + b] = self.entry(a, b).add(&acc);
            }
        }
        Self {
            frame: self.frame.clone(),
            gram,
            density: None,
        }
    }

    /// The Hermitian form `ω(X, Y) = g(JX, Y)` as an exterior form:
    /// `ω = Σ_{a<b} (JᵀG)_{ab} e^a ∧ e^b`.
    pub fn hermitian_form(&self, j: &ComplexStructureField) -> ExteriorForm {
        let dim = self.dim();
        let mut terms: Vec<(MultiIndex, TwistorScalar)> = Vec::new();
        for a in 0..dim {
            for b in (a + 1)..dim {
                // ω(e_a, e_b) = g(J e_a, e_b) = Σ_c J_{ca} g_{cb}
                let mut acc = TwistorScalar::zero(&self.frame);
                for c in 0..dim {
                    let jca = j.entry(c, a);
                    if jca.is_zero() {
                        continue;
                    }
                    acc = acc.add(&jca.mul(self.entry(c, b)));
                }
                if !acc.is_zero() {
                    terms.push((((1u16 << a) | (1u16 << b)) as MultiIndex, acc));
                }
            }
        }
        ExteriorForm::from_terms(&self.frame, terms)
    }

    pub fn gram_f64(&self, point: &[BigRational]) -> DMatrix<f64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| self.entry(r, c).eval_f64(point).re)
    }

    pub fn gram_exact(&self, point: &[BigRational]) -> Vec<Vec<BigRational>> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let v = self.entry(r, c).eval(point);
                        debug_assert!(v.is_real(), "metric entries must be real");
                        v.re().clone()
                    })
                    .collect()
            })
            .collect()
    }

    /// Numeric positive-definiteness check at a point.
    pub fn check_positive_definite(&self, point: &[BigRational]) -> Result<(), MetricError> {
        let m = self.gram_f64(point);
        let min = min_eigenvalue(&m);
        if min <= 0.0 {
            return Err(MetricError::NotPositiveDefinite {
                point: point.iter().map(to_f64).collect(),
                min_eigen: min,
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MetricField over {} [", self.frame)?;
        for a in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|b| self.entry(a, b).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;

    #[test]
    fn flat_metric_is_hermitian_for_standard_structure() {
        let fr = Frame::manifold(4);
        let g = MetricField::identity(&fr);
        let j = ComplexStructureField::standard(&fr);
        g.check_hermitian(&j).unwrap();
        // ω = e^{01} + e^{23}
        let omega = g.hermitian_form(&j);
        let e = |i| ExteriorForm::covector(&fr, i);
        let expected = e(0)
            .wedge(&e(1))
            .unwrap()
            .add(&e(2).wedge(&e(3)).unwrap());
        assert_eq!(omega, expected);
    }

    #[test]
    fn hermitian_average_repairs_a_random_symmetric_metric() {
        let fr = Frame::manifold(4);
        let j = ComplexStructureField::standard(&fr);
        let dim = 4;
        let mut gram = vec![TwistorScalar::zero(&fr); dim * dim];
        for a in 0..dim {
            gram[a * dim + a] = TwistorScalar::one(&fr);
        }
        // asymmetric-in-J perturbation
        gram[0 * dim + 2] = TwistorScalar::constant(&fr, GaussianRational::from_ratio(1, 4));
        gram[2 * dim + 0] = TwistorScalar::constant(&fr, GaussianRational::from_ratio(1, 4));
        let g0 = MetricField::new(&fr, gram).unwrap();
        assert!(g0.check_hermitian(&j).is_err());
        let g = g0.hermitian_average(&j);
        g.check_hermitian(&j).unwrap();
    }

    #[test]
    fn positive_definiteness_detects_degeneracy() {
        let fr = Frame::manifold(2);
        let mut gram = vec![TwistorScalar::zero(&fr); 4];
        gram[0] = TwistorScalar::one(&fr);
        gram[3] = TwistorScalar::one(&fr).neg();
        let g = MetricField::new(&fr, gram).unwrap();
        let origin = vec![BigRational::from_integer(0.into()); 2];
        assert!(matches!(
            g.check_positive_definite(&origin),
            Err(MetricError::NotPositiveDefinite { .. })
        ));
    }
}
