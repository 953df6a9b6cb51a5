//! Pointwise strict-positivity testing of real (1,1)-forms through the
//! symmetric pairing `H(X, Y) = ω(X, JY)`, with eigenvalues measured
//! against the metric.

use nalgebra::DMatrix;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::ExteriorForm;
use crate::hermitian::{bigrade_split, ComplexStructureField, MetricError, MetricField};
use crate::numeric::{symmetric_eigenvalues, NumForm};

/// Margin under which an eigenvalue counts as zero (relative to the
/// metric-normalized pencil).
pub const POSITIVITY_MARGIN: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PositivityError {
    #[error("form is not (1,1): (2,0)-residual magnitude {residual}")]
    NotOneOne { residual: f64 },
    #[error("form is not strictly positive at {point:?}: min eigenvalue {min_eigen}")]
    NotPositive { point: Vec<f64>, min_eigen: f64 },
    #[error("{side} positivity precondition failed at {point:?} (min eigenvalue {min_eigen})")]
    PreconditionFailed {
        side: &'static str,
        point: Vec<f64>,
        min_eigen: f64,
    },
    #[error("volume form degenerate at {point:?}")]
    DegenerateVolume { point: Vec<f64> },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PositivityVerdict {
    Positive,
    /// Positive semidefinite with a kernel of the reported dimension.
    Degenerate { kernel_dim: usize },
    Negative,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub min_eigen: f64,
    pub witness_point: Vec<f64>,
    pub samples: usize,
    pub verdict: PositivityVerdict,
}

/// Symmetric pairing matrix `H_{ab} = ω(e_a, J e_b)` at a point.
pub fn hermitian_pairing_matrix(omega: &NumForm, j_at: &DMatrix<f64>) -> DMatrix<f64> {
    let w = omega.two_form_matrix();
    let dim = j_at.nrows();
    let wr = DMatrix::from_fn(dim, dim, |r, c| w[(r, c)].re);
    let h = wr * j_at;
    (h.clone() + h.transpose()) * 0.5
}

/// Metric-normalized eigenvalues of the pairing at a point: the spectrum of
/// `L⁻¹ H L⁻ᵀ` for `G = LLᵀ`.
pub fn pencil_eigenvalues(h: &DMatrix<f64>, gram: &DMatrix<f64>) -> Option<Vec<f64>> {
    let chol = gram.clone().cholesky()?;
    let l_inv = chol.l().try_inverse()?;
    let reduced = &l_inv * h * l_inv.transpose();
    Some(symmetric_eigenvalues(&reduced))
}

/// Strict-positivity report of a real (1,1)-form over a sample grid.
/// Rejects forms with a (2,0) component; the verdict is drawn from the
/// worst metric-normalized eigenvalue over the grid.
pub fn is_strictly_positive_11(
    form: &ExteriorForm,
    j: &ComplexStructureField,
    g: &MetricField,
    grid: &[Vec<BigRational>],
) -> Result<PositivityReport, PositivityError> {
    assert!(!grid.is_empty());
    // (2,0) residual, symbolic once, then sampled
    let residual20 = bigrade_split(form, j).part(2, 0);
    let mut res_max = 0.0f64;
    for p in grid.iter().take(8) {
        res_max = res_max.max(residual20.max_abs_at(p));
    }
    if res_max > 1e-9 {
        return Err(PositivityError::NotOneOne { residual: res_max });
    }

    let dim = g.dim();
    let mut min_eigen = f64::INFINITY;
    let mut witness = Vec::new();
    let mut kernel_dim = 0usize;
    for p in grid {
        g.check_positive_definite(p)?;
        let omega_at = NumForm::from_terms(dim, form.eval_f64(p));
        let h = hermitian_pairing_matrix(&omega_at, &j.eval_f64(p));
        let eigs = pencil_eigenvalues(&h, &g.gram_f64(p)).ok_or_else(|| {
            PositivityError::DegenerateVolume {
                point: p.iter().map(crate::numeric::to_f64).collect(),
            }
        })?;
        if eigs[0] < min_eigen {
            min_eigen = eigs[0];
            witness = p.iter().map(crate::numeric::to_f64).collect();
            kernel_dim = eigs.iter().filter(|e| e.abs() <= POSITIVITY_MARGIN).count();
        }
    }
    let verdict = if min_eigen > POSITIVITY_MARGIN {
        PositivityVerdict::Positive
    } else if min_eigen >= -POSITIVITY_MARGIN {
        PositivityVerdict::Degenerate { kernel_dim }
    } else {
        PositivityVerdict::Negative
    };
    Ok(PositivityReport {
        min_eigen,
        witness_point: witness,
        samples: grid.len(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternionic::BaseModel;
    use crate::twistor::{ChartKind, TwistorSpace};

    fn small_grid(ts: &TwistorSpace) -> Vec<Vec<BigRational>> {
        let half = BigRational::new(1.into(), 2.into());
        ts.product_grid(&-half.clone(), &half, 2, &-half.clone(), &half, 2)
    }

    #[test]
    fn sum_of_metric_forms_is_positive() {
        let ts = TwistorSpace::assemble(&BaseModel::flat(1).unwrap(), ChartKind::North).unwrap();
        let grid = small_grid(&ts);
        // ω = ω_M + ω_FS is the Hermitian form of the product metric
        let rep = is_strictly_positive_11(&ts.omega, &ts.structure, &ts.metric, &grid).unwrap();
        assert_eq!(rep.verdict, PositivityVerdict::Positive);
        assert!(rep.min_eigen > 0.5, "min eigen {}", rep.min_eigen);
    }

    #[test]
    fn negative_form_detected_with_witness() {
        let ts = TwistorSpace::assemble(&BaseModel::flat(1).unwrap(), ChartKind::North).unwrap();
        let grid = small_grid(&ts);
        let rep =
            is_strictly_positive_11(&ts.omega.neg(), &ts.structure, &ts.metric, &grid).unwrap();
        assert_eq!(rep.verdict, PositivityVerdict::Negative);
        assert_eq!(rep.witness_point.len(), 6);
    }

    #[test]
    fn omega_m_is_degenerate_along_horizontal() {
        let ts = TwistorSpace::assemble(&BaseModel::flat(1).unwrap(), ChartKind::North).unwrap();
        let grid = small_grid(&ts);
        let rep = is_strictly_positive_11(&ts.omega_m, &ts.structure, &ts.metric, &grid).unwrap();
        match rep.verdict {
            PositivityVerdict::Degenerate { kernel_dim } => assert_eq!(kernel_dim, 2),
            other => panic!("expected degenerate verdict, got {other:?}"),
        }
    }

    #[test]
    fn two_zero_component_rejected() {
        let ts = TwistorSpace::assemble(&BaseModel::flat(1).unwrap(), ChartKind::North).unwrap();
        let grid = small_grid(&ts);
        // Ω_I = ω_J + iω_K is (2,0) w.r.t. I = 𝓘 at z = 1... over the chart
        // it is not (1,1) w.r.t. 𝓘, so the real part must be rejected.
        let bad = ts.omega_base[1].clone();
        let out = is_strictly_positive_11(&bad, &ts.structure, &ts.metric, &grid);
        assert!(matches!(out, Err(PositivityError::NotOneOne { .. })));
    }
}
