//! Pointwise Hodge star, defined by `α ∧ *β = g(α, β)·Ω` with `Ω` the
//! Riemannian volume form in the orientation of the complex structure.
//!
//! `*β` is computed as the contraction of `Ω` by the metric-raised k-vector
//! of `β`. Over rational data the only irrationality is the single factor
//! `√det G`, so the exact variant carries that factor symbolically: the star
//! of a rational form is (rational form)·√det, and an even number of stars
//! lands back in the rationals. For Hermitian Gram matrices `det G` is a
//! perfect rational square and even a single star is exactly rational.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{index_bits, index_degree, merge_sign, GaussianRational, MultiIndex};
use crate::hermitian::metric::MetricError;
use crate::numeric::{min_eigenvalue, rational_determinant, rational_matrix_inverse, rational_sqrt, NumForm};

/// Exact star output: a rational form scaled by `(√det G)^sqrt_pow`.
#[derive(Clone, Debug)]
pub struct ScaledForm {
    pub terms: BTreeMap<MultiIndex, GaussianRational>,
    pub sqrt_pow: u8,
    pub det: BigRational,
}

impl ScaledForm {
    /// Fold the scale into the coefficients when it is rational:
    /// either `sqrt_pow` is even or `det` is a perfect square.
    pub fn into_rational(mut self) -> Option<BTreeMap<MultiIndex, GaussianRational>> {
        let factor = match self.sqrt_pow {
            0 => BigRational::from_integer(1.into()),
            1 => rational_sqrt(&self.det)?,
            2 => self.det.clone(),
            _ => {
                let mut f = BigRational::from_integer(1.into());
                for _ in 0..self.sqrt_pow / 2 {
                    f *= &self.det;
                }
                if self.sqrt_pow % 2 == 1 {
                    f *= rational_sqrt(&self.det)?;
                }
                f
            }
        };
        let g = GaussianRational::from_rational(factor);
        for v in self.terms.values_mut() {
            *v = &*v * &g;
        }
        Some(self.terms)
    }

    pub fn to_f64(&self, dim: usize) -> NumForm {
        let sqrt = crate::numeric::to_f64(&self.det).sqrt();
        let factor = sqrt.powi(self.sqrt_pow as i32);
        NumForm::from_terms(
            dim,
            self.terms
                .iter()
                .map(|(&i, c)| (i, c.to_complex_f64() * factor)),
        )
    }
}

/// Sign of the permutation `(J, J^c)` of `(0..dim)`.
fn complement_sign(j: MultiIndex, dim: usize) -> i8 {
    let full: MultiIndex = ((1u32 << dim) - 1) as u16;
    let jc = full & !j;
    merge_sign(j, jc).expect("disjoint by construction")
}

/// Exact Hodge star at a point. `values` are the form's coefficients,
/// `gram` the (symmetric positive definite) metric matrix at the point,
/// `orientation` the sign of the volume form against `e^{0..dim}`.
pub fn star_exact(
    values: &BTreeMap<MultiIndex, GaussianRational>,
    gram: &[Vec<BigRational>],
    orientation: i8,
) -> Result<ScaledForm, MetricError> {
    let dim = gram.len();
    let det = rational_determinant(gram);
    if det <= BigRational::zero() {
        return Err(MetricError::NotPositiveDefinite {
            point: vec![],
            min_eigen: crate::numeric::to_f64(&det),
        });
    }
    let ginv = rational_matrix_inverse(gram).expect("invertible by the determinant check");

    let mut by_degree: BTreeMap<u8, Vec<(MultiIndex, GaussianRational)>> = BTreeMap::new();
    for (&idx, c) in values {
        by_degree.entry(index_degree(idx)).or_default().push((idx, c.clone()));
    }

    let full: MultiIndex = ((1u32 << dim) - 1) as u16;
    let mut out: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
    for (k, terms) in by_degree {
        // raised k-vector components B^J = Σ_I c_I · det(G⁻¹[J, I])
        let subsets = index_subsets(dim, k as usize);
        for &jset in &subsets {
            let mut b = GaussianRational::zero();
            for (iset, c) in &terms {
                let minor = minor_det(&ginv, jset, *iset);
                if minor.is_zero() {
                    continue;
                }
                b += &(c * &GaussianRational::from_rational(minor));
            }
            if b.is_zero() {
                continue;
            }
            // ι_{e_J} e^{top} = sign(J, J^c) e^{J^c}
            let sign = complement_sign(jset, dim) * orientation;
            let target = full & !jset;
            let signed = if sign < 0 { -&b } else { b };
            let entry = out.entry(target).or_insert_with(GaussianRational::zero);
            *entry += &signed;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(ScaledForm {
        terms: out,
        sqrt_pow: 1,
        det,
    })
}

/// `f64` Hodge star at a point over complex coefficients.
pub fn star_f64(
    form: &NumForm,
    gram: &DMatrix<f64>,
    orientation: f64,
) -> Result<NumForm, MetricError> {
    let dim = gram.nrows();
    if min_eigenvalue(gram) <= 0.0 {
        return Err(MetricError::NotPositiveDefinite {
            point: vec![],
            min_eigen: min_eigenvalue(gram),
        });
    }
    let det = gram.determinant();
    let scale = det.sqrt() * orientation;
    let ginv = gram.clone().try_inverse().expect("positive definite");

    let full: MultiIndex = ((1u32 << dim) - 1) as u16;
    let mut out = NumForm::zero(dim);
    let mut by_degree: BTreeMap<u8, Vec<(MultiIndex, Complex64)>> = BTreeMap::new();
    for (&idx, &c) in form.terms() {
        by_degree.entry(index_degree(idx)).or_default().push((idx, c));
    }
    for (k, terms) in by_degree {
        for &jset in &index_subsets(dim, k as usize) {
            let mut b = Complex64::ZERO;
            for (iset, c) in &terms {
                b += c * minor_det_f64(&ginv, jset, *iset);
            }
            if b == Complex64::ZERO {
                continue;
            }
            let sign = complement_sign(jset, dim) as f64;
            let target = full & !jset;
            out = out.add(&NumForm::from_terms(dim, [(target, b * sign * scale)]));
        }
    }
    Ok(out)
}

/// All k-subsets of `0..dim` as bit sets, ascending.
pub fn index_subsets(dim: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let full = 1u32 << dim;
    for mask in 0..full {
        if mask.count_ones() as usize == k {
            out.push(mask as u16);
        }
    }
    out
}

fn minor_det(m: &[Vec<BigRational>], rows: MultiIndex, cols: MultiIndex) -> BigRational {
    let r: Vec<usize> = index_bits(rows).collect();
    let c: Vec<usize> = index_bits(cols).collect();
    debug_assert_eq!(r.len(), c.len());
    if r.is_empty() {
        return BigRational::from_integer(1.into());
    }
    let sub: Vec<Vec<BigRational>> = r
        .iter()
        .map(|&ri| c.iter().map(|&ci| m[ri][ci].clone()).collect())
        .collect();
    rational_determinant(&sub)
}

fn minor_det_f64(m: &DMatrix<f64>, rows: MultiIndex, cols: MultiIndex) -> f64 {
    let r: Vec<usize> = index_bits(rows).collect();
    let c: Vec<usize> = index_bits(cols).collect();
    if r.is_empty() {
        return 1.0;
    }
    let sub = DMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])]);
    sub.determinant()
}

/// Metric pairing of two exact numeric k-forms at a point:
/// `g(e^I, e^J) = det(G⁻¹[I, J])` extended bilinearly.
pub fn form_inner_product_exact(
    a: &BTreeMap<MultiIndex, GaussianRational>,
    b: &BTreeMap<MultiIndex, GaussianRational>,
    gram: &[Vec<BigRational>],
) -> GaussianRational {
    let ginv = rational_matrix_inverse(gram).expect("positive definite metric");
    let mut acc = GaussianRational::zero();
    for (&ia, ca) in a {
        for (&ib, cb) in b {
            if index_degree(ia) != index_degree(ib) {
                continue;
            }
            let m = minor_det(&ginv, ia, ib);
            if m.is_zero() {
                continue;
            }
            acc += &(&(ca * cb) * &GaussianRational::from_rational(m));
        }
    }
    acc
}
