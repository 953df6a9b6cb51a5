//! Assembly of the twistor space `Z = M × CP¹` over a base model: the
//! product complex structure `𝓘` (acting as `A(z)` on vertical vectors and
//! standardly on the chart), the symbolic forms `ω_M`, `ω_FS`, `ω`, and the
//! product metric.

use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{
    lift_form, lift_scalar, ExteriorForm, Frame, FormError, GaussianRational, RingError,
    TwistorScalar,
};
use crate::hermitian::{
    nijenhuis_components, ComplexStructureField, MetricError, MetricField, StructureError,
};
use crate::quaternionic::{BaseModel, SpherePoint, SphereError};
use crate::twistor::chart::{sphere_functions, ChartKind, fubini_study, fubini_study_gram_entry};

/// Degree headroom for twistor computations: wedge powers and repeated
/// structure applications push numerator degrees well past the default cap.
const TWISTOR_DEGREE_CAP: u32 = 96;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistorError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error("theorem requires a hyperkähler base; d_M ω_{{{0}}} ≠ 0")]
    NotHyperkahler(char),
}

/// A chart model of the twistor space of a base hypercomplex model.
#[derive(Clone, Debug)]
pub struct TwistorSpace {
    pub base: BaseModel,
    pub chart: ChartKind,
    /// `q1..q_{4k}, x, y` with a raised degree cap.
    pub frame: Arc<Frame>,
    /// The symbolic sphere point `(x₁, x₂, x₃)` over the chart.
    pub sphere: SpherePoint,
    /// The product structure `𝓘`.
    pub structure: ComplexStructureField,
    /// Product metric `g_M ⊕ g_FS`, with exact volume density.
    pub metric: MetricField,
    /// Lifted `ω_I, ω_J, ω_K` of the base.
    pub omega_base: [ExteriorForm; 3],
    /// `ω_M = x₁ω_I + x₂ω_J + x₃ω_K`.
    pub omega_m: ExteriorForm,
    /// Fubini–Study form on the chart.
    pub omega_fs: ExteriorForm,
    /// `ω = ω_M + ω_FS`.
    pub omega: ExteriorForm,
}

impl TwistorSpace {
    /// Build the twistor space over a base model in the given chart.
    pub fn assemble(base: &BaseModel, chart: ChartKind) -> Result<Self, TwistorError> {
        let dim_m = base.dim();
        let frame = Frame::with_chart(dim_m).with_degree_cap(TWISTOR_DEGREE_CAP);
        let dim_z = frame.dim();
        let (xi, yi) = frame.chart_pair().expect("chart frame");

        let xs = sphere_functions(&frame, chart);
        let sphere = SpherePoint::new(xs.clone())?;

        // lifted structure matrices and sphere combination A(z)
        let lift_mat = |s: &ComplexStructureField| -> Result<Vec<TwistorScalar>, TwistorError> {
            let mut out = Vec::with_capacity(dim_m * dim_m);
            for r in 0..dim_m {
                for c in 0..dim_m {
                    out.push(lift_scalar(s.entry(r, c), &frame)?);
                }
            }
            Ok(out)
        };
        let lifted: Vec<Vec<TwistorScalar>> = base
            .triple
            .structures()
            .iter()
            .map(|s| lift_mat(s))
            .collect::<Result<_, _>>()?;

        let mut mat = vec![TwistorScalar::zero(&frame); dim_z * dim_z];
        for r in 0..dim_m {
            for c in 0..dim_m {
                let mut acc = TwistorScalar::zero(&frame);
                for (x_i, m) in xs.iter().zip(&lifted) {
                    let e = &m[r * dim_m + c];
                    if !e.is_zero() {
                        acc = acc.add(&x_i.mul(e));
                    }
                }
                mat[r * dim_z + c] = acc;
            }
        }
        // chart block: standard structure, ∂x ↦ ∂y ↦ −∂x
        mat[yi * dim_z + xi] = TwistorScalar::one(&frame);
        mat[xi * dim_z + yi] = TwistorScalar::one(&frame).neg();
        let structure = ComplexStructureField::new(&frame, mat)?;

        // product metric with exact density √det = ρ_M · (2/s²)
        let mut gram = vec![TwistorScalar::zero(&frame); dim_z * dim_z];
        for r in 0..dim_m {
            for c in 0..dim_m {
                gram[r * dim_z + c] = lift_scalar(base.metric.metric().entry(r, c), &frame)?;
            }
        }
        let fs_entry = fubini_study_gram_entry(&frame);
        gram[xi * dim_z + xi] = fs_entry.clone();
        gram[yi * dim_z + yi] = fs_entry;
        let mut metric = MetricField::new(&frame, gram)?;
        if let Some(rho) = base.metric.metric().density_hint() {
            let rho_z = lift_scalar(rho, &frame)?.mul(&fubini_study_gram_entry(&frame));
            metric = metric.with_density(rho_z);
        }

        let omega_base: [ExteriorForm; 3] = {
            let forms: Vec<ExteriorForm> = base
                .triple
                .structures()
                .iter()
                .map(|s| lift_form(&base.metric.metric().hermitian_form(s), &frame))
                .collect::<Result<_, _>>()?;
            [forms[0].clone(), forms[1].clone(), forms[2].clone()]
        };
        let omega_m = omega_base[0]
            .scale(&xs[0])
            .add(&omega_base[1].scale(&xs[1]))
            .add(&omega_base[2].scale(&xs[2]));
        let omega_fs = fubini_study(&frame);
        let omega = omega_m.add(&omega_fs);

        Ok(Self {
            base: base.clone(),
            chart,
            frame,
            sphere,
            structure,
            metric,
            omega_base,
            omega_m,
            omega_fs,
            omega,
        })
    }

    pub fn dim_z(&self) -> usize {
        self.frame.dim()
    }

    /// Complex dimension of the base, `n = 2k`.
    pub fn n(&self) -> usize {
        self.base.complex_dim()
    }

    pub fn chart_indices(&self) -> (usize, usize) {
        self.frame.chart_pair().expect("chart frame")
    }

    /// Vertical block of `𝓘` at a chart point, as exact values.
    pub fn vertical_structure_at(&self, x: &BigRational, y: &BigRational) -> Vec<Vec<GaussianRational>> {
        let dim_m = self.base.dim();
        let mut point = vec![BigRational::from_integer(0.into()); self.dim_z()];
        let (xi, yi) = self.chart_indices();
        point[xi] = x.clone();
        point[yi] = y.clone();
        (0..dim_m)
            .map(|r| {
                (0..dim_m)
                    .map(|c| self.structure.entry(r, c).eval(&point))
                    .collect()
            })
            .collect()
    }

    /// Exact residual of `𝓘² + Id` (empty iff zero everywhere).
    pub fn structure_square_residual(&self) -> Vec<TwistorScalar> {
        self.structure
            .square_plus_id()
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect()
    }

    /// Nonzero Nijenhuis components of `𝓘`, symbolically expanded.
    pub fn nijenhuis_residual(&self) -> Vec<((usize, usize), Vec<TwistorScalar>)> {
        nijenhuis_components(&self.structure)
    }

    /// `d_M`: the manifold-variable part of the exterior derivative.
    pub fn d_manifold(&self, f: &ExteriorForm) -> ExteriorForm {
        f.exterior_derivative_over(&self.frame.manifold_vars())
    }

    /// Grid over the product: manifold box × chart box, all exact points.
    pub fn product_grid(
        &self,
        q_lo: &BigRational,
        q_hi: &BigRational,
        q_res: usize,
        chart_lo: &BigRational,
        chart_hi: &BigRational,
        chart_res: usize,
    ) -> Vec<Vec<BigRational>> {
        use crate::quaternionic::{product_grid, rational_linspace, ModelKind};
        let periodic = self.base.kind == ModelKind::Torus;
        let q_axis = rational_linspace(q_lo, q_hi, q_res, periodic);
        let c_axis = rational_linspace(chart_lo, chart_hi, chart_res, false);
        let mut axes: Vec<Vec<BigRational>> = (0..self.base.dim()).map(|_| q_axis.clone()).collect();
        axes.push(c_axis.clone());
        axes.push(c_axis);
        product_grid(&axes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternionic::BaseModel;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn structure_squares_to_minus_id_symbolically() {
        let base = BaseModel::flat(1).unwrap();
        let ts = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
        assert!(ts.structure_square_residual().is_empty());
    }

    #[test]
    fn vertical_block_at_z_equals_one_is_i() {
        let base = BaseModel::flat(1).unwrap();
        let ts = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
        let block = ts.vertical_structure_at(&rat(1, 1), &rat(0, 1));
        for r in 0..4 {
            for c in 0..4 {
                let expected = base.triple.i.entry(r, c).constant_value().unwrap();
                assert_eq!(block[r][c], expected, "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn nijenhuis_vanishes_over_flat_bases() {
        for k in [1usize, 2] {
            let base = BaseModel::flat(k).unwrap();
            let ts = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
            let residual = ts.nijenhuis_residual();
            assert!(residual.is_empty(), "nonzero Nijenhuis components: {:?}",
                residual.iter().map(|(p, _)| *p).collect::<Vec<_>>());
        }
    }

    #[test]
    fn nijenhuis_vanishes_over_conformal_base_too() {
        // The structures are the same constant triple; only the metric
        // changes, so integrability is untouched.
        let base = BaseModel::conformal(1, &BaseModel::default_lambda()).unwrap();
        let ts = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
        assert!(ts.nijenhuis_residual().is_empty());
    }

    #[test]
    fn product_metric_density_is_exact() {
        let base = BaseModel::flat(1).unwrap();
        let ts = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
        let rho = ts.metric.density_hint().unwrap();
        // det(G_Z) = (2/s²)², so ρ = 2/s²
        let expected = fubini_study_gram_entry(&ts.frame);
        assert_eq!(rho, &expected);
    }

    #[test]
    fn south_chart_assembles_and_matches_north_on_overlap() {
        let base = BaseModel::flat(1).unwrap();
        let north = TwistorSpace::assemble(&base, ChartKind::North).unwrap();
        let south = TwistorSpace::assemble(&base, ChartKind::South).unwrap();
        // At z and w = 1/z the vertical structures agree.
        let (x, y) = (rat(1, 2), rat(-1, 3));
        let r2 = &x * &x + &y * &y;
        let (wx, wy) = (&x / &r2, -(&y / &r2));
        let a_north = north.vertical_structure_at(&x, &y);
        let a_south = south.vertical_structure_at(&wx, &wy);
        assert_eq!(a_north, a_south);
    }
}
