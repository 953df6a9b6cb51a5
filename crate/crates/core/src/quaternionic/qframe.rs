//! Quaternionic orthonormal frames and the associated `ζ/ξ` coframe, with
//! the canonical decompositions of `ω_I`, `ω_J`, `ω_K` in that coframe.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::{ExteriorForm, MultiIndex};
use crate::hermitian::MetricError;
use crate::numeric::NumForm;
use crate::quaternionic::sphere::HyperhermitianMetric;
use crate::quaternionic::triple::QuaternionicTriple;

/// Acceptance threshold for candidate norms in the Gram–Schmidt sweep.
const GS_NORM_TOLERANCE: f64 = 1e-10;

/// A quaternionic orthonormal frame at a point: vectors grouped as
/// `(e_i, Ie_i, Je_i, Ke_i)` per quaternionic line, plus the complex
/// coframe `dζ_i = e_i^* + i·(Ie_i)^*`, `dξ_i = (Je_i)^* + i·(Ke_i)^*`.
#[derive(Clone, Debug)]
pub struct QuaternionicCoframe {
    pub point: Vec<BigRational>,
    /// 4k frame vectors in coordinates, quaternionic lines contiguous.
    pub vectors: Vec<DVector<f64>>,
    /// Complex 1-forms per line: (dζ_i, dξ_i).
    pub zeta: Vec<NumForm>,
    pub xi: Vec<NumForm>,
}

/// Index-order quaternionic Gram–Schmidt: candidates are coordinate
/// vectors; each accepted vector is followed by its `I`, `J`, `K` images,
/// and later candidates are projected off the whole quaternionic span.
pub fn quaternionic_frame(
    g: &HyperhermitianMetric,
    t: &QuaternionicTriple,
    point: &[BigRational],
) -> Result<QuaternionicCoframe, MetricError> {
    let dim = t.dim();
    let gram = g.metric().gram_f64(point);
    g.metric().check_positive_definite(point)?;
    let mats: Vec<DMatrix<f64>> = t.structures().iter().map(|s| s.eval_f64(point)).collect();
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
        if norm_sq <= GS_NORM_TOLERANCE {
            continue;
        }
        let e = v / norm_sq.sqrt();
        let ie = &mats[0] * &e;
        let je = &mats[1] * &e;
        let ke = &mats[2] * &e;
        frame.extend([e, ie, je, ke]);
    }
    if frame.len() != dim {
        return Err(MetricError::NotPositiveDefinite {
            point: point.iter().map(crate::numeric::to_f64).collect(),
            min_eigen: 0.0,
        });
    }

    // dual coframe: rows of F⁻¹ where the columns of F are the frame vectors
    let f = DMatrix::from_columns(&frame);
    let f_inv = f.try_inverse().expect("frame is a basis");
    let covector = |row: usize| -> Vec<Complex64> {
        (0..dim)
            .map(|c| Complex64::new(f_inv[(row, c)], 0.0))
            .collect()
    };
    let one_form = |coeffs: Vec<Complex64>| {
        NumForm::from_terms(
            dim,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| ((1u16 << i) as MultiIndex, c)),
        )
    };

    let lines = dim / 4;
    let mut zeta = Vec::with_capacity(lines);
    let mut xi = Vec::with_capacity(lines);
    let i_unit = Complex64::new(0.0, 1.0);
    for line in 0..lines {
        let e_star = covector(4 * line);
        let ie_star = covector(4 * line + 1);
        let je_star = covector(4 * line + 2);
        let ke_star = covector(4 * line + 3);
        let dzeta: Vec<Complex64> = e_star
            .iter()
            .zip(&ie_star)
            .map(|(a, b)| a + i_unit * b)
            .collect();
        let dxi: Vec<Complex64> = je_star
            .iter()
            .zip(&ke_star)
            .map(|(a, b)| a + i_unit * b)
            .collect();
        zeta.push(one_form(dzeta));
        xi.push(one_form(dxi));
    }

    Ok(QuaternionicCoframe {
        point: point.to_vec(),
        vectors: frame,
        zeta,
        xi,
    })
}

/// Gram-matrix residual of the frame: `max |g(u_a, u_b) − δ_{ab}|`.
pub fn orthonormality_residual(
    g: &HyperhermitianMetric,
    coframe: &QuaternionicCoframe,
) -> f64 {
    let gram = g.metric().gram_f64(&coframe.point);
    let mut max = 0.0f64;
    for (a, u) in coframe.vectors.iter().enumerate() {
        for (b, v) in coframe.vectors.iter().enumerate() {
            let val = (u.transpose() * &gram * v)[(0, 0)];
            let expected = if a == b { 1.0 } else { 0.0 };
            max = max.max((val - expected).abs());
        }
    }
    max
}

/// Residuals of the canonical coframe decompositions at the frame's point:
///
/// * `ω_I = Σ (i/2)·dζ∧dζ̄ + (i/2)·dξ∧dξ̄`
/// * `ω_J = Σ (1/2)·dζ∧dξ + (1/2)·dζ̄∧dξ̄`
/// * `ω_K = Σ −(i/2)·dζ∧dξ + (i/2)·dζ̄∧dξ̄`
/// * `ω_J + i·ω_K = Σ dζ∧dξ`
#[derive(Clone, Debug)]
pub struct DecompositionRecord {
    pub residual_i: f64,
    pub residual_j: f64,
    pub residual_k: f64,
    pub residual_holomorphic: f64,
}

impl DecompositionRecord {
    pub fn max(&self) -> f64 {
        self.residual_i
            .max(self.residual_j)
            .max(self.residual_k)
            .max(self.residual_holomorphic)
    }
}

pub fn canonical_decompositions(
    g: &HyperhermitianMetric,
    t: &QuaternionicTriple,
    coframe: &QuaternionicCoframe,
) -> DecompositionRecord {
    let dim = t.dim();
    let point = &coframe.point;
    let omega_at = |s: &crate::hermitian::ComplexStructureField| {
        NumForm::from_terms(dim, g.metric().hermitian_form(s).eval_f64(point))
    };
    let omega_i = omega_at(&t.i);
    let omega_j = omega_at(&t.j);
    let omega_k = omega_at(&t.k);

    let half_i = Complex64::new(0.0, 0.5);
    let half = Complex64::new(0.5, 0.0);
    let mut sum_i = NumForm::zero(dim);
    let mut sum_j = NumForm::zero(dim);
    let mut sum_k = NumForm::zero(dim);
    let mut sum_h = NumForm::zero(dim);
    for (dz, dx) in coframe.zeta.iter().zip(&coframe.xi) {
        let dzb = dz.conj();
        let dxb = dx.conj();
        sum_i = sum_i
            .add(&dz.wedge(&dzb).scale(half_i))
            .add(&dx.wedge(&dxb).scale(half_i));
        sum_j = sum_j
            .add(&dz.wedge(dx).scale(half))
            .add(&dzb.wedge(&dxb).scale(half));
        sum_k = sum_k
            .add(&dz.wedge(dx).scale(-half_i))
            .add(&dzb.wedge(&dxb).scale(half_i));
        sum_h = sum_h.add(&dz.wedge(dx));
    }
    let holo = omega_j.add(&omega_k.scale(Complex64::new(0.0, 1.0)));
    DecompositionRecord {
        residual_i: omega_i.sub(&sum_i).max_abs(),
        residual_j: omega_j.sub(&sum_j).max_abs(),
        residual_k: omega_k.sub(&sum_k).max_abs(),
        residual_holomorphic: holo.sub(&sum_h).max_abs(),
    }
}

/// `Ω_I = ω_J + i·ω_K`, exact in the ring; of pure type `(2,0)` w.r.t. `I`.
pub fn holomorphic_symplectic_form(
    g: &HyperhermitianMetric,
    t: &QuaternionicTriple,
) -> ExteriorForm {
    let omega_j = g.metric().hermitian_form(&t.j);
    let omega_k = g.metric().hermitian_form(&t.k);
    omega_j.add(&omega_k.mul_i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Frame, GaussianRational, TwistorScalar};
    use crate::hermitian::{project_pq, MetricField};
    use crate::quaternionic::sphere::symmetrize_metric;
    use crate::rng::Xorshift64Star;

    fn origin(dim: usize) -> Vec<BigRational> {
        vec![BigRational::from_integer(0.into()); dim]
    }

    #[test]
    fn flat_frame_recovers_standard_basis() {
        let fr = Frame::manifold(4);
        let t = QuaternionicTriple::flat(&fr).unwrap();
        let g = HyperhermitianMetric::new(MetricField::identity(&fr), &t).unwrap();
        let cf = quaternionic_frame(&g, &t, &origin(4)).unwrap();
        for (i, v) in cf.vectors.iter().enumerate() {
            for r in 0..4 {
                let expected = if r == i { 1.0 } else { 0.0 };
                assert!((v[r] - expected).abs() < 1e-14);
            }
        }
        assert!(orthonormality_residual(&g, &cf) < 1e-14);
    }

    #[test]
    fn decompositions_hold_for_flat_models() {
        for k in [1usize, 2] {
            let fr = Frame::manifold(4 * k);
            let t = QuaternionicTriple::flat(&fr).unwrap();
            let g = HyperhermitianMetric::new(MetricField::identity(&fr), &t).unwrap();
            let cf = quaternionic_frame(&g, &t, &origin(4 * k)).unwrap();
            let rec = canonical_decompositions(&g, &t, &cf);
            assert!(rec.max() < 1e-12, "residual {:?}", rec);
        }
    }

    #[test]
    fn random_hyperhermitian_frame_is_orthonormal() {
        let fr = Frame::manifold(8);
        let t = QuaternionicTriple::flat(&fr).unwrap();
        let mut rng = Xorshift64Star::new(23);
        // random SPD-ish diagonal + small symmetric perturbation, then
        // quaternionic symmetrization
        let dim = 8;
        let mut gram = vec![TwistorScalar::zero(&fr); dim * dim];
        for d in 0..dim {
            gram[d * dim + d] =
                TwistorScalar::constant(&fr, GaussianRational::from_integer(2 + rng.i64_range(0, 3)));
        }
        for a in 0..dim {
            for b in (a + 1)..dim {
                let v = GaussianRational::from_ratio(rng.i64_range(-2, 3), 10);
                gram[a * dim + b] = TwistorScalar::constant(&fr, v.clone());
                gram[b * dim + a] = TwistorScalar::constant(&fr, v);
            }
        }
        let g0 = MetricField::new(&fr, gram).unwrap();
        let g = symmetrize_metric(&g0, &t).unwrap();
        let cf = quaternionic_frame(&g, &t, &origin(8)).unwrap();
        assert!(orthonormality_residual(&g, &cf) < 1e-12);
        let rec = canonical_decompositions(&g, &t, &cf);
        assert!(rec.max() < 1e-12, "residual {:?}", rec);
    }

    #[test]
    fn zeta_pairs_kronecker_with_holomorphic_vectors() {
        let fr = Frame::manifold(8);
        let t = QuaternionicTriple::flat(&fr).unwrap();
        let g = HyperhermitianMetric::new(MetricField::identity(&fr), &t).unwrap();
        let cf = quaternionic_frame(&g, &t, &origin(8)).unwrap();
        // dζ_i(e_j − i·Ie_j) = 2δ_ij, dζ_i(Je_j − i·Ke_j) = 0
        for (i, dz) in cf.zeta.iter().enumerate() {
            for j in 0..2 {
                let e = &cf.vectors[4 * j];
                let ie = &cf.vectors[4 * j + 1];
                let je = &cf.vectors[4 * j + 2];
                let ke = &cf.vectors[4 * j + 3];
                let hol = DVector::from_fn(8, |r, _| Complex64::new(e[r], -ie[r]));
                let hol_xi = DVector::from_fn(8, |r, _| Complex64::new(je[r], -ke[r]));
                let got = dz.apply(&[hol]);
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((got - Complex64::new(expected, 0.0)).norm() < 1e-12);
                assert!(dz.apply(&[hol_xi]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn symplectic_form_is_two_zero_and_closed_for_flat() {
        let fr = Frame::manifold(4);
        let t = QuaternionicTriple::flat(&fr).unwrap();
        let g = HyperhermitianMetric::new(MetricField::identity(&fr), &t).unwrap();
        let omega_i = holomorphic_symplectic_form(&g, &t);
        let p20 = project_pq(&omega_i, &t.i, 2, 0).unwrap();
        assert_eq!(p20, omega_i);
        assert!(project_pq(&omega_i, &t.i, 1, 1).unwrap().is_zero());
        assert!(omega_i.exterior_derivative().is_zero());
    }
}
