//! Pointwise-varying almost complex structures acting on the coordinate
//! frame, with the induced multiplicative action on forms.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{
    index_bits, merge_sign, ExteriorForm, Frame, GaussianRational, MultiIndex, TwistorScalar,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structure matrix must be square over the frame (got {got}, frame dim {dim})")]
    BadShape { got: usize, dim: usize },
    #[error("J² + Id ≠ 0: entry ({row},{col}) has nonzero residual")]
    NotAlmostComplex { row: usize, col: usize },
    #[error("frame dimension must be even, got {0}")]
    OddDimension(usize),
}

/// An almost complex structure `J` with `J² = −Id`, stored through its
/// tangent action: `J e_b = Σ_a mat[a][b] e_a` (entries in the coefficient
/// ring, so the structure may vary over the chart).
#[derive(Clone, PartialEq)]
pub struct ComplexStructureField {
    frame: Arc<Frame>,
    mat: Vec<TwistorScalar>, // row-major, dim × dim
}

impl ComplexStructureField {
    pub fn new(frame: &Arc<Frame>, mat: Vec<TwistorScalar>) -> Result<Self, StructureError> {
        let dim = frame.dim();
        if dim % 2 != 0 {
            return Err(StructureError::OddDimension(dim));
        }
        if mat.len() != dim * dim {
            return Err(StructureError::BadShape {
                got: mat.len(),
                dim,
            });
        }
        let j = Self {
            frame: frame.clone(),
            mat,
        };
        j.check_square()?;
        Ok(j)
    }

    /// Construct without the `J² = −Id` check (for intermediate arithmetic).
    pub fn new_unchecked(frame: &Arc<Frame>, mat: Vec<TwistorScalar>) -> Self {
        Self {
            frame: frame.clone(),
            mat,
        }
    }

    fn check_square(&self) -> Result<(), StructureError> {
        let dim = self.dim();
        let sq = self.compose(self);
        for a in 0..dim {
            for b in 0..dim {
                let mut v = sq.entry(a, b).clone();
                if a == b {
                    v = v.add(&TwistorScalar::one(&self.frame));
                }
                if !v.is_zero() {
                    return Err(StructureError::NotAlmostComplex { row: a, col: b });
                }
            }
        }
        Ok(())
    }

    /// The standard constant structure pairing consecutive coordinates:
    /// `e_{2i} ↦ e_{2i+1} ↦ −e_{2i}` over the manifold variables.
    pub fn standard(frame: &Arc<Frame>) -> Self {
        let dim = frame.dim();
        assert!(dim % 2 == 0);
        let mut mat = vec![TwistorScalar::zero(frame); dim * dim];
        for p in 0..dim / 2 {
            let (a, b) = (2 * p, 2 * p + 1);
            mat[b * dim + a] = TwistorScalar::one(frame); // J e_a = e_b
            mat[a * dim + b] = TwistorScalar::one(frame).neg(); // J e_b = −e_a
        }
        Self::new(frame, mat).expect("standard structure squares to −Id")
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> &TwistorScalar {
        &self.mat[row * self.dim() + col]
    }

    pub fn verify_square(&self) -> Result<(), StructureError> {
        self.check_square()
    }

    /// Matrix product `self ∘ rhs` on tangent vectors.
    pub fn compose(&self, rhs: &Self) -> Self {
        let dim = self.dim();
        let mut mat = vec![TwistorScalar::zero(&self.frame); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = TwistorScalar::zero(&self.frame);
                for c in 0..dim {
                    let l = self.entry(a, c);
                    let r = rhs.entry(c, b);
                    if l.is_zero() || r.is_zero() {
                        continue;
                    }
                    acc = acc.add(&l.mul(r));
                }
                mat[a * dim + b] = acc;
            }
        }
        Self::new_unchecked(&self.frame, mat)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mat = self
            .mat
            .iter()
            .zip(rhs.mat.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Self::new_unchecked(&self.frame, mat)
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(&self.frame, self.mat.iter().map(|a| a.neg()).collect())
    }

    pub fn scale(&self, c: &TwistorScalar) -> Self {
        Self::new_unchecked(&self.frame, self.mat.iter().map(|a| a.mul(c)).collect())
    }

    /// `Σ cᵢ·Jᵢ` as a raw matrix (caller checks the square relation).
    pub fn linear_combination(parts: &[(&TwistorScalar, &ComplexStructureField)]) -> Self {
        let (_, first) = parts[0];
        let mut acc = Self::new_unchecked(
            &first.frame,
            vec![TwistorScalar::zero(&first.frame); first.mat.len()],
        );
        for (c, j) in parts {
            acc = acc.add(&j.scale(c));
        }
        acc
    }

    /// Residual of `self² + Id`, as a matrix of scalars (all zero for a
    /// genuine almost complex structure).
    pub fn square_plus_id(&self) -> Vec<TwistorScalar> {
        let dim = self.dim();
        let sq = self.compose(self);
        let mut out = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut v = sq.entry(a, b).clone();
                if a == b {
                    v = v.add(&TwistorScalar::one(&self.frame));
                }
                out.push(v);
            }
        }
        out
    }

    /// Image of the tangent vector `e_col` (column of the matrix).
    pub fn tangent_image(&self, col: usize) -> Vec<TwistorScalar> {
        (0..self.dim()).map(|a| self.entry(a, col).clone()).collect()
    }

    /// The induced coframe action `J e^i = −Σ_b mat[i][b] e^b` as a 1-form,
    /// from `(JΩ)(X) = −Ω(JX)`.
    pub fn coframe_image(&self, i: usize) -> ExteriorForm {
        let dim = self.dim();
        ExteriorForm::from_terms(
            &self.frame,
            (0..dim).filter_map(|b| {
                let c = self.entry(i, b);
                if c.is_zero() {
                    None
                } else {
                    Some(((1u16 << b) as MultiIndex, c.neg()))
                }
            }),
        )
    }

    /// Multiplicative action on forms: `J(Ω₁∧…∧Ωₚ) = (JΩ₁)∧…∧(JΩₚ)`,
    /// coefficients untouched. Expands factor by factor.
    pub fn apply_to_form(&self, form: &ExteriorForm) -> ExteriorForm {
        let images: Vec<ExteriorForm> = (0..self.dim()).map(|i| self.coframe_image(i)).collect();
        let mut out = ExteriorForm::zero(&self.frame);
        for (&idx, coeff) in form.terms() {
            // running expansion: map multi-index -> scalar
            let mut states: Vec<(MultiIndex, TwistorScalar)> = vec![(0, coeff.clone())];
            for i in index_bits(idx) {
                let mut next: std::collections::BTreeMap<MultiIndex, TwistorScalar> =
                    std::collections::BTreeMap::new();
                for (built, c) in &states {
                    for (&jbit, jc) in images[i].terms() {
                        if let Some(sign) = merge_sign(*built, jbit) {
                            let mut v = c.mul(jc);
                            if sign < 0 {
                                v = v.neg();
                            }
                            match next.entry(built | jbit) {
                                std::collections::btree_map::Entry::Vacant(e) => {
                                    e.insert(v);
                                }
                                std::collections::btree_map::Entry::Occupied(mut e) => {
                                    let s = e.get().add(&v);
                                    if s.is_zero() {
                                        e.remove();
                                    } else {
                                        *e.get_mut() = s;
                                    }
                                }
                            }
                        }
                    }
                }
                states = next.into_iter().collect();
            }
            let built: ExteriorForm = ExteriorForm::from_terms(&self.frame, states);
            out = out.add(&built);
        }
        out
    }

    pub fn eval_f64(&self, point: &[BigRational]) -> DMatrix<f64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| self.entry(r, c).eval_f64(point).re)
    }

    /// Conjugate by sign: the structure `−J`.
    pub fn conjugate_structure(&self) -> Self {
        self.neg()
    }

    /// Apply to an exact numeric vector: `v ↦ J v` at a point.
    pub fn apply_exact_at(
        &self,
        point: &[BigRational],
        v: &[GaussianRational],
    ) -> Vec<GaussianRational> {
        let dim = self.dim();
        (0..dim)
            .map(|a| {
                let mut acc = GaussianRational::zero();
                for (b, vb) in v.iter().enumerate() {
                    if vb.is_zero() {
                        continue;
                    }
                    let e = self.entry(a, b);
                    if e.is_zero() {
                        continue;
                    }
                    acc += &(&e.eval(point) * vb);
                }
                acc
            })
            .collect()
    }
}

/// Components of the Nijenhuis tensor `N(X, Y) = [JX, JY] − J[JX, Y] −
/// J[X, JY] − [X, Y]` on coordinate fields, expanded symbolically through
/// `[f∂_c, g∂_d] = f(∂_c g)∂_d − g(∂_d f)∂_c`. Returns, per pair `a < b`,
/// the coefficient vector of `N(∂_a, ∂_b)`; all zero iff `J` is integrable
/// on the chart.
pub fn nijenhuis_components(
    j: &ComplexStructureField,
) -> Vec<((usize, usize), Vec<TwistorScalar>)> {
    let dim = j.dim();
    let frame = j.frame().clone();
    let zero = || vec![TwistorScalar::zero(&frame); dim];
    let mut out = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut n = zero();
            // [JX, JY] = Σ_{c,d} (M_{ca}·∂_c M_{db}·∂_d − M_{db}·∂_d M_{ca}·∂_c)
            for c in 0..dim {
                let mca = j.entry(c, a);
                if !mca.is_zero() {
                    for d in 0..dim {
                        let dm = j.entry(d, b).derivative(c);
                        if !dm.is_zero() {
                            n[d] = n[d].add(&mca.mul(&dm));
                        }
                    }
                }
                let mcb = j.entry(c, b);
                if !mcb.is_zero() {
                    for d in 0..dim {
                        let dm = j.entry(d, a).derivative(c);
                        if !dm.is_zero() {
                            n[d] = n[d].sub(&mcb.mul(&dm));
                        }
                    }
                }
            }
            // −J[JX, Y] = J(Σ_c ∂_b M_{ca} ∂_c) = Σ_{c,e} ∂_b M_{ca}·M_{ec} ∂_e
            for c in 0..dim {
                let dmca = j.entry(c, a).derivative(b);
                if !dmca.is_zero() {
                    for e in 0..dim {
                        let mec = j.entry(e, c);
                        if !mec.is_zero() {
                            n[e] = n[e].add(&dmca.mul(mec));
                        }
                    }
                }
                // −J[X, JY] = −J(Σ_c ∂_a M_{cb} ∂_c)
                let dmcb = j.entry(c, b).derivative(a);
                if !dmcb.is_zero() {
                    for e in 0..dim {
                        let mec = j.entry(e, c);
                        if !mec.is_zero() {
                            n[e] = n[e].sub(&dmcb.mul(mec));
                        }
                    }
                }
            }
            if n.iter().any(|v| !v.is_zero()) {
                out.push(((a, b), n));
            }
        }
    }
    out
}

/// Integrability witness: the Nijenhuis tensor vanishes identically.
pub fn nijenhuis_is_zero(j: &ComplexStructureField) -> bool {
    nijenhuis_components(j).is_empty()
}

impl std::fmt::Debug for ComplexStructureField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexStructureField over {} [", self.frame)?;
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

    #[test]
    fn standard_structure_squares_to_minus_id() {
        let fr = Frame::manifold(4);
        let j = ComplexStructureField::standard(&fr);
        assert!(j.square_plus_id().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn coframe_action_on_plane() {
        // Tangent: J e0 = e1. Coframe: J e^0 = e^1, J e^1 = −e^0.
        let fr = Frame::manifold(2);
        let j = ComplexStructureField::standard(&fr);
        let de0 = j.coframe_image(0);
        let de1 = j.coframe_image(1);
        assert_eq!(de0, ExteriorForm::covector(&fr, 1));
        assert_eq!(de1, ExteriorForm::covector(&fr, 0).neg());
    }

    #[test]
    fn multiplicative_action_squares_with_degree_sign() {
        // On a 2-form, (J∘J)α = α since each factor picks up −1.
        let fr = Frame::manifold(4);
        let j = ComplexStructureField::standard(&fr);
        let e = |i| ExteriorForm::covector(&fr, i);
        let alpha = e(0).wedge(&e(2)).unwrap();
        let twice = j.apply_to_form(&j.apply_to_form(&alpha));
        assert_eq!(twice, alpha);
        // On a 1-form it is −Id.
        let beta = e(3);
        assert_eq!(j.apply_to_form(&j.apply_to_form(&beta)), beta.neg());
    }
}
