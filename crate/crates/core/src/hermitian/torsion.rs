//! Torsion data of the canonical Hermitian connections, computed directly
//! from the Hermitian form: the Chern torsion is `−i·∂ω`, the Bismut torsion
//! is the real 3-form `d^cω`, and their traces recover `−d^*ω`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::{ExteriorForm, GaussianRational, MultiIndex};
use crate::hermitian::bigrade::{bigrade_split, dc, partial, BigradedForm};
use crate::hermitian::metric::{MetricError, MetricField};
use crate::hermitian::star::{star_exact, star_f64};
use crate::hermitian::structure::ComplexStructureField;
use crate::numeric::NumForm;

/// `T^{Ch} = −i·∂ω`, bigraded (pure `(2,1)` for integrable structures).
pub fn chern_torsion(
    g: &MetricField,
    j: &ComplexStructureField,
) -> Result<BigradedForm, MetricError> {
    g.check_hermitian(j)?;
    let omega = g.hermitian_form(j);
    let t = partial(&omega, j).mul_i().neg();
    Ok(bigrade_split(&t, j))
}

/// `T^B = d^cω` as a real 3-form.
pub fn bismut_torsion(
    g: &MetricField,
    j: &ComplexStructureField,
) -> Result<ExteriorForm, MetricError> {
    g.check_hermitian(j)?;
    Ok(dc(&g.hermitian_form(j), j))
}

/// Deterministic Hermitian orthonormal frame at a point: candidate
/// coordinate vectors taken in index order, each accepted vector followed by
/// its `J`-image, Gram–Schmidt against everything accepted so far.
pub fn hermitian_orthonormal_frame(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<Vec<DVector<f64>>, MetricError> {
    let dim = g.dim();
    let gram = g.gram_f64(point);
    let jmat = j.eval_f64(point);
    let inner = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * &gram * b)[(0, 0)];
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(dim);
    for cand in 0..dim {
        if frame.len() == dim {
            break;
        }
        let mut v = DVector::from_fn(dim, |r, _| if r == cand { 1.0 } else { 0.0 });
        for u in &frame {
            let c = inner(&v, u);
            v -= u * c;
        }
        let norm_sq = inner(&v, &v);
        if norm_sq <= 1e-10 {
            continue;
        }
        let e = v / norm_sq.sqrt();
        let je = &jmat * &e;
        frame.push(e);
        frame.push(je);
    }
    if frame.len() != dim {
        return Err(MetricError::NotPositiveDefinite {
            point: point.iter().map(crate::numeric::to_f64).collect(),
            min_eigen: 0.0,
        });
    }
    Ok(frame)
}

fn to_complex(v: &DVector<f64>) -> DVector<Complex64> {
    DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Trace a numeric 3-form over the complex lines of an orthonormal frame:
/// `X ↦ Σ_i T(X, e_i, J e_i)`, returned as the coefficients on the
/// coordinate covectors.
fn trace_three_form(t: &NumForm, frame: &[DVector<f64>], dim: usize) -> NumForm {
    let mut coeffs: Vec<(MultiIndex, Complex64)> = Vec::with_capacity(dim);
    for a in 0..dim {
        let x = DVector::from_fn(dim, |r, _| {
            Complex64::new(if r == a { 1.0 } else { 0.0 }, 0.0)
        });
        let mut acc = Complex64::ZERO;
        for pair in frame.chunks(2) {
            acc += t.apply(&[x.clone(), to_complex(&pair[0]), to_complex(&pair[1])]);
        }
        coeffs.push((1u16 << a, acc));
    }
    NumForm::from_terms(dim, coeffs)
}

/// `τ^B(X) = Σ_i T^B(X, e_i, J e_i)` at a point. Equals `−d^*ω` there.
pub fn torsion_trace_bismut(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<NumForm, MetricError> {
    g.check_positive_definite(point)?;
    let frame = hermitian_orthonormal_frame(g, j, point)?;
    let tb = bismut_torsion(g, j)?;
    let tb_at = NumForm::from_terms(g.dim(), tb.eval_f64(point));
    Ok(trace_three_form(&tb_at, &frame, g.dim()))
}

/// `τ^{Ch}(X) = Σ_i ∂ω(X, e_i, J e_i)`: the complex trace of the Chern
/// torsion in the `1/√2`-normalized complex frame. Equals `−i·∂̄^*ω`.
pub fn torsion_trace_chern(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<NumForm, MetricError> {
    g.check_positive_definite(point)?;
    let frame = hermitian_orthonormal_frame(g, j, point)?;
    let omega = g.hermitian_form(j);
    let pw = partial(&omega, j);
    let pw_at = NumForm::from_terms(g.dim(), pw.eval_f64(point));
    Ok(trace_three_form(&pw_at, &frame, g.dim()))
}

/// Orientation of the complex structure against the coordinate coframe:
/// the sign of the `e^{0..dim}` coefficient of `ω^n/n!` at a point.
pub fn orientation_sign(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> i8 {
    let n = (g.dim() / 2) as u32;
    let omega = g.hermitian_form(j);
    let top = omega.wedge_pow(n).expect("same frame");
    let v = NumForm::from_terms(g.dim(), top.eval_f64(point)).top_coefficient();
    if v.re < 0.0 {
        -1
    } else {
        1
    }
}

/// Which backend produced a codifferential value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodiffBackend {
    /// `d^*ω = −*d(ω^{n−1})/(n−1)!` with a fully exact star (density in the ring).
    Exact,
    /// Central finite differences on `*ω` with Richardson extrapolation.
    FiniteDifference,
}

/// `d^*ω` at a point. Uses the exact route whenever the model carries a
/// volume-density hint, otherwise finite differences (step `1e−4`,
/// Richardson-extrapolated).
pub fn codifferential_omega(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<(NumForm, CodiffBackend), MetricError> {
    if g.density_hint().is_some() {
        let exact = codifferential_omega_exact(g, j, point)?;
        return Ok((
            NumForm::from_terms(
                g.dim(),
                exact.iter().map(|(&i, c)| (i, c.to_complex_f64())),
            ),
            CodiffBackend::Exact,
        ));
    }
    Ok((
        codifferential_omega_fd(g, j, point)?,
        CodiffBackend::FiniteDifference,
    ))
}

/// Exact-rational `d^*ω` through `−*d(ω^{n−1})/(n−1)!`. Requires the volume
/// density to be rational at the point (true whenever a density hint exists).
pub fn codifferential_omega_exact(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<BTreeMap<MultiIndex, GaussianRational>, MetricError> {
    let dim = g.dim();
    let n = (dim / 2) as u32;
    let omega = g.hermitian_form(j);
    let power = omega.wedge_pow(n - 1).expect("same frame");
    let d_power = power.exterior_derivative();
    let mut fact = 1i64;
    for i in 2..n as i64 {
        fact *= i;
    }
    let orient = orientation_sign(g, j, point);
    let values = d_power.eval(point);
    let star = star_exact(&values, &g.gram_exact(point), orient)?;
    let rational = star.into_rational().ok_or_else(|| MetricError::NotPositiveDefinite {
        point: point.iter().map(crate::numeric::to_f64).collect(),
        min_eigen: f64::NAN,
    })?;
    let scale = GaussianRational::from_ratio(-1, fact);
    Ok(rational
        .into_iter()
        .map(|(i, c)| (i, &c * &scale))
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// Finite-difference `d^*ω`: numerically differentiate the coefficients of
/// `σ = *ω` and star the result back down to a 1-form.
pub fn codifferential_omega_fd(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> Result<NumForm, MetricError> {
    let dim = g.dim();
    let omega = g.hermitian_form(j);
    let orient = orientation_sign(g, j, point) as f64;

    let sigma_at = |p: &[BigRational]| -> Result<NumForm, MetricError> {
        let vals = NumForm::from_terms(dim, omega.eval_f64(p));
        star_f64(&vals, &g.gram_f64(p), orient)
    };

    let h = BigRational::new(1.into(), 10_000.into());
    let mut d_sigma = NumForm::zero(dim);
    for v in 0..dim {
        let diff = |step: &BigRational| -> Result<NumForm, MetricError> {
            let mut plus = point.to_vec();
            plus[v] += step;
            let mut minus = point.to_vec();
            minus[v] -= step;
            let scale = 0.5 / crate::numeric::to_f64(step);
            if !scale.is_finite() {
                return Err(MetricError::StepUnderflow);
            }
            Ok(sigma_at(&plus)?.sub(&sigma_at(&minus)?).scale(Complex64::new(scale, 0.0)))
        };
        let d_h = diff(&h)?;
        let h2 = &h / BigRational::from_integer(2.into());
        let d_h2 = diff(&h2)?;
        // Richardson: (4 D_{h/2} − D_h)/3
        let extrap = d_h2
            .scale(Complex64::new(4.0 / 3.0, 0.0))
            .sub(&d_h.scale(Complex64::new(1.0 / 3.0, 0.0)));
        // wedge dv ∧ ∂_v σ
        let dv = NumForm::from_terms(dim, [(1u16 << v, Complex64::new(1.0, 0.0))]);
        d_sigma = d_sigma.add(&dv.wedge(&extrap));
    }
    let starred = star_f64(&d_sigma, &g.gram_f64(point), orient)?;
    Ok(starred.scale(Complex64::new(-1.0, 0.0)))
}

/// Evaluate a symbolic 1-form-valued trace on a tangent matrix: helper to
/// compare traces against codifferentials in tests.
pub fn one_form_gap(a: &NumForm, b: &NumForm) -> f64 {
    a.sub(b).max_abs()
}

/// Max |coefficient| of the matrix residual `JᵀGJ − G` at a point, a numeric
/// Hermitian-compatibility measure for reports.
pub fn hermitian_residual_f64(
    g: &MetricField,
    j: &ComplexStructureField,
    point: &[BigRational],
) -> f64 {
    let gm = g.gram_f64(point);
    let jm = j.eval_f64(point);
    let res = jm.transpose() * &gm * &jm - &gm;
    res.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}
