//! The four-way balancedness report: a Hermitian metric is balanced iff the
//! Chern torsion trace vanishes, iff the Bismut torsion trace vanishes, iff
//! `d^*ω = 0`, iff `d(ω^{n−1}) = 0`. All four are evaluated over a sample
//! grid and must co-vanish (or co-fail) within the stated tolerance.

use num_rational::BigRational;

use crate::hermitian::metric::{MetricError, MetricField};
use crate::hermitian::structure::ComplexStructureField;
use crate::hermitian::torsion::{
    codifferential_omega, torsion_trace_bismut, torsion_trace_chern, CodiffBackend,
};
use crate::numeric::NumForm;

pub const DEFAULT_BALANCED_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalancedVerdict {
    Balanced,
    NotBalanced,
    /// The four conditions disagreed: an implementation or model defect.
    Inconsistent,
}

#[derive(Clone, Debug)]
pub struct ConditionRecord {
    pub name: &'static str,
    pub max_abs: f64,
    pub vanishes: bool,
    pub witness: Option<Vec<f64>>,
}

/// Per-condition residuals and the combined verdict of the equivalence.
#[derive(Clone, Debug)]
pub struct BalancedReport {
    pub tau_chern: ConditionRecord,
    pub tau_bismut: ConditionRecord,
    pub codiff_omega: ConditionRecord,
    pub d_omega_power: ConditionRecord,
    pub codiff_backend: CodiffBackend,
    pub tolerance: f64,
    pub samples: usize,
    pub verdict: BalancedVerdict,
}

impl BalancedReport {
    pub fn conditions(&self) -> [&ConditionRecord; 4] {
        [
            &self.tau_chern,
            &self.tau_bismut,
            &self.codiff_omega,
            &self.d_omega_power,
        ]
    }
}

struct Accumulator {
    name: &'static str,
    max_abs: f64,
    witness: Option<Vec<f64>>,
}

impl Accumulator {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max_abs: 0.0,
            witness: None,
        }
    }

    fn update(&mut self, value: f64, point: &[BigRational]) {
        if value > self.max_abs {
            self.max_abs = value;
            self.witness = Some(point.iter().map(crate::numeric::to_f64).collect());
        }
    }

    fn finish(self, tolerance: f64) -> ConditionRecord {
        ConditionRecord {
            name: self.name,
            max_abs: self.max_abs,
            vanishes: self.max_abs <= tolerance,
            witness: self.witness,
        }
    }
}

/// Evaluate all four conditions of the balancedness equivalence over a grid.
pub fn balanced_report(
    g: &MetricField,
    j: &ComplexStructureField,
    grid: &[Vec<BigRational>],
    tolerance: f64,
) -> Result<BalancedReport, MetricError> {
    assert!(!grid.is_empty(), "balanced report needs a nonempty grid");
    let n = (g.dim() / 2) as u32;
    let omega = g.hermitian_form(j);
    let d_power = omega
        .wedge_pow(n.saturating_sub(1))
        .expect("same frame")
        .exterior_derivative();

    let mut acc_ch = Accumulator::new("tau_chern");
    let mut acc_b = Accumulator::new("tau_bismut");
    let mut acc_cd = Accumulator::new("codiff_omega");
    let mut acc_dp = Accumulator::new("d_omega_power");
    let mut backend = CodiffBackend::Exact;

    for point in grid {
        g.check_positive_definite(point)?;
        let tau_ch = torsion_trace_chern(g, j, point)?;
        let tau_b = torsion_trace_bismut(g, j, point)?;
        let (codiff, used) = codifferential_omega(g, j, point)?;
        backend = used;
        acc_ch.update(tau_ch.max_abs(), point);
        acc_b.update(tau_b.max_abs(), point);
        acc_cd.update(codiff.max_abs(), point);
        let dp_at = NumForm::from_terms(g.dim(), d_power.eval_f64(point));
        acc_dp.update(dp_at.max_abs(), point);
    }

    let tau_chern = acc_ch.finish(tolerance);
    let tau_bismut = acc_b.finish(tolerance);
    let codiff_omega_rec = acc_cd.finish(tolerance);
    let d_omega_power = acc_dp.finish(tolerance);

    let votes = [
        tau_chern.vanishes,
        tau_bismut.vanishes,
        codiff_omega_rec.vanishes,
        d_omega_power.vanishes,
    ];
    let verdict = if votes.iter().all(|&v| v) {
        BalancedVerdict::Balanced
    } else if votes.iter().all(|&v| !v) {
        BalancedVerdict::NotBalanced
    } else {
        BalancedVerdict::Inconsistent
    };

    Ok(BalancedReport {
        tau_chern,
        tau_bismut,
        codiff_omega: codiff_omega_rec,
        d_omega_power,
        codiff_backend: backend,
        tolerance,
        samples: grid.len(),
        verdict,
    })
}
