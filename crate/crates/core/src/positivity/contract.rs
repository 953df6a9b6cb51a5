//! The volume-form contraction `Λ^{n−1,n−1} ≅ Λ^{1,1}TM ≅ Λ^{1,1}`:
//! a top-minus-two form corresponds to the unique bivector contracting the
//! volume form onto it, lowered back to a 2-form by the metric.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{merge_sign, MultiIndex};
use crate::numeric::NumForm;
use crate::positivity::report::PositivityError;

/// Solve `ι_B Ω = η` for the bivector `B`, with `Ω = ρ·e^{top}`:
/// `B^{ab} = η_{comp(a,b)} / (ρ·sign)` where `sign` is the parity of the
/// permutation `(a, b, complement)`. Returns the matrix `B^{ab}`
/// (antisymmetric).
pub fn bivector_from_topminus(
    eta: &NumForm,
    rho: f64,
    dim: usize,
) -> Result<DMatrix<Complex64>, PositivityError> {
    if rho.abs() < 1e-300 {
        return Err(PositivityError::DegenerateVolume { point: vec![] });
    }
    let full: MultiIndex = ((1u32 << dim) - 1) as u16;
    let mut b = DMatrix::from_element(dim, dim, Complex64::ZERO);
    for a in 0..dim {
        for c in (a + 1)..dim {
            let pair: MultiIndex = (1 << a) | (1 << c);
            let comp = full & !pair;
            let sign = merge_sign(pair, comp).expect("disjoint") as f64;
            let v = eta.coefficient(comp) / (rho * sign);
            b[(a, c)] = v;
            b[(c, a)] = -v;
        }
    }
    Ok(b)
}

/// Inverse direction: `B ↦ ι_B Ω` as a top-minus-two form.
pub fn topminus_from_bivector(b: &DMatrix<Complex64>, rho: f64, dim: usize) -> NumForm {
    let full: MultiIndex = ((1u32 << dim) - 1) as u16;
    let mut terms = Vec::new();
    for a in 0..dim {
        for c in (a + 1)..dim {
            let pair: MultiIndex = (1 << a) | (1 << c);
            let comp = full & !pair;
            let sign = merge_sign(pair, comp).expect("disjoint") as f64;
            let v = b[(a, c)] * rho * sign;
            if v != Complex64::ZERO {
                terms.push((comp, v));
            }
        }
    }
    NumForm::from_terms(dim, terms)
}

/// `(2n−2)`-form to 2-form at a point: contract against `Ω = ρ·e^{top}`,
/// then lower both bivector slots with the metric: `β = G·B·G`.
pub fn topminus_to_oneone(
    eta: &NumForm,
    rho: f64,
    gram: &DMatrix<f64>,
) -> Result<NumForm, PositivityError> {
    let dim = gram.nrows();
    let b = bivector_from_topminus(eta, rho, dim)?;
    let g = gram.map(|x| Complex64::new(x, 0.0));
    let beta = &g * b * &g;
    let mut terms = Vec::new();
    for a in 0..dim {
        for c in (a + 1)..dim {
            let v = beta[(a, c)];
            if v != Complex64::ZERO {
                terms.push((((1u16 << a) | (1u16 << c)) as MultiIndex, v));
            }
        }
    }
    Ok(NumForm::from_terms(dim, terms))
}

/// Lift a 2-form back to its top-minus-two partner (the inverse of
/// [`topminus_to_oneone`]).
pub fn oneone_to_topminus(
    beta: &NumForm,
    rho: f64,
    gram: &DMatrix<f64>,
) -> Result<NumForm, PositivityError> {
    let dim = gram.nrows();
    let ginv = gram
        .clone()
        .try_inverse()
        .ok_or(PositivityError::DegenerateVolume { point: vec![] })?
        .map(|x| Complex64::new(x, 0.0));
    let w = beta.two_form_matrix();
    let b = &ginv * w * &ginv;
    Ok(topminus_from_bivector(&b, rho, dim))
}

/// Helper for spot checks: evaluate `μ ∧ α ∧ Jα` against the volume,
/// returning the coefficient of `e^{top}` divided by `ρ`.
pub fn pair_with_alpha(
    mu: &NumForm,
    alpha_coeffs: &[f64],
    j_at: &DMatrix<f64>,
    rho: f64,
) -> f64 {
    let dim = j_at.nrows();
    let alpha = NumForm::from_terms(
        dim,
        alpha_coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| ((1u16 << i) as MultiIndex, Complex64::new(c, 0.0))),
    );
    // (Jα)_a = −Σ_c M_{ca} α_c
    let jalpha = NumForm::from_terms(
        dim,
        (0..dim).map(|a| {
            let mut acc = 0.0;
            for (c, &v) in alpha_coeffs.iter().enumerate() {
                acc -= j_at[(c, a)] * v;
            }
            ((1u16 << a) as MultiIndex, Complex64::new(acc, 0.0))
        }),
    );
    let top = mu.wedge(&alpha).wedge(&jalpha).top_coefficient();
    top.re / rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xorshift64Star;

    fn identity_gram(dim: usize) -> DMatrix<f64> {
        DMatrix::identity(dim, dim)
    }

    #[test]
    fn diagonal_pattern_matches_hand_formula() {
        // n = 2 (dim 4): η = a₁·e^{34} + a₂·e^{12} ↦ β = a₁·e^{12} + a₂·e^{34}
        let dim = 4;
        let (a1, a2) = (3.0, 5.0);
        let eta = NumForm::from_terms(
            dim,
            [
                (0b1100u16, Complex64::new(a1, 0.0)),
                (0b0011u16, Complex64::new(a2, 0.0)),
            ],
        );
        let beta = topminus_to_oneone(&eta, 1.0, &identity_gram(dim)).unwrap();
        assert_eq!(beta.coefficient(0b0011), Complex64::new(a1, 0.0));
        assert_eq!(beta.coefficient(0b1100), Complex64::new(a2, 0.0));
    }

    #[test]
    fn roundtrip_random_combinations() {
        let dim = 6;
        let gram = {
            let mut g = identity_gram(dim);
            g[(0, 0)] = 2.0;
            g[(0, 2)] = 0.3;
            g[(2, 0)] = 0.3;
            g
        };
        let mut rng = Xorshift64Star::new(99);
        let full: u16 = (1 << dim) - 1;
        for _ in 0..100 {
            let mut terms = Vec::new();
            for a in 0..dim {
                for c in (a + 1)..dim {
                    let pair: u16 = (1 << a) | (1 << c);
                    terms.push((full & !pair, Complex64::new(rng.f64_range(-1.0, 1.0), 0.0)));
                }
            }
            let eta = NumForm::from_terms(dim, terms);
            let beta = topminus_to_oneone(&eta, 2.5, &gram).unwrap();
            let back = oneone_to_topminus(&beta, 2.5, &gram).unwrap();
            assert!(back.sub(&eta).max_abs() < 1e-12);
        }
    }
}
