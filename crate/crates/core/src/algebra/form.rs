//! Exterior forms with [`TwistorScalar`] coefficients.
//!
//! A form stores a map from strictly increasing multi-indices (bit sets over
//! the frame's covectors) to nonzero coefficients. The canonical map makes
//! equality a literal comparison, which is what drives every exact identity
//! check in the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use super::frame::{Frame, RingError};
use super::gaussian::GaussianRational;
use super::scalar::TwistorScalar;

/// Multi-index over at most 16 covectors, one bit per covector.
pub type MultiIndex = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("operation requires a homogeneous form")]
    NotHomogeneous,
    #[error("form degree {degree} does not match expected {expected}")]
    DegreeMismatch { degree: u8, expected: u8 },
}

/// Sign of `e^A ∧ e^B` when the index sets are disjoint: `None` when they
/// overlap, otherwise the parity of transpositions needed to interleave.
pub fn merge_sign(a: MultiIndex, b: MultiIndex) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        // factors of b strictly below position i must move past this factor
        swaps += (b & ((1u16 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

pub fn index_degree(idx: MultiIndex) -> u8 {
    idx.count_ones() as u8
}

/// Positions of the set bits, ascending.
pub fn index_bits(idx: MultiIndex) -> impl Iterator<Item = usize> {
    (0..16).filter(move |i| idx & (1 << i) != 0)
}

pub fn degree(idx: MultiIndex) -> u8 {
    index_degree(idx)
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorForm {
    frame: Arc<Frame>,
    terms: BTreeMap<MultiIndex, TwistorScalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormDegree {
    Zero,
    Homogeneous(u8),
    Mixed,
}

impl ExteriorForm {
    pub fn zero(frame: &Arc<Frame>) -> Self {
        Self {
            frame: frame.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form from a scalar.
    pub fn scalar(value: TwistorScalar) -> Self {
        let frame = value.frame().clone();
        let mut f = Self::zero(&frame);
        f.insert(0, value);
        f
    }

    pub fn constant(frame: &Arc<Frame>, c: GaussianRational) -> Self {
        Self::scalar(TwistorScalar::constant(frame, c))
    }

    /// The coordinate covector `d v_i`.
    pub fn covector(frame: &Arc<Frame>, i: usize) -> Self {
        assert!(i < frame.dim() && i < 16, "covector index out of range");
        let mut f = Self::zero(frame);
        f.insert(1 << i, TwistorScalar::one(frame));
        f
    }

    pub fn from_terms<I>(frame: &Arc<Frame>, it: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, TwistorScalar)>,
    {
        let mut f = Self::zero(frame);
        for (idx, c) in it {
            f.insert_add(idx, c);
        }
        f
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &TwistorScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: MultiIndex) -> TwistorScalar {
        self.terms
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| TwistorScalar::zero(&self.frame))
    }

    fn insert(&mut self, idx: MultiIndex, c: TwistorScalar) {
        if !c.is_zero() {
            self.terms.insert(idx, c);
        }
    }

    fn insert_add(&mut self, idx: MultiIndex, c: TwistorScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn degree(&self) -> FormDegree {
        let mut degrees: Vec<u8> = self.terms.keys().map(|&i| index_degree(i)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        match degrees.as_slice() {
            [] => FormDegree::Zero,
            [d] => FormDegree::Homogeneous(*d),
            _ => FormDegree::Mixed,
        }
    }

    /// The homogeneous degree, or an error on mixed forms. Zero forms count
    /// as any degree and report 0.
    pub fn homogeneous_degree(&self) -> Result<u8, FormError> {
        match self.degree() {
            FormDegree::Zero => Ok(0),
            FormDegree::Homogeneous(d) => Ok(d),
            FormDegree::Mixed => Err(FormError::NotHomogeneous),
        }
    }

    /// Split into homogeneous pieces by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u8, ExteriorForm> {
        let mut out: BTreeMap<u8, ExteriorForm> = BTreeMap::new();
        for (&idx, c) in &self.terms {
            out.entry(index_degree(idx))
                .or_insert_with(|| ExteriorForm::zero(&self.frame))
                .insert(idx, c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert!(Frame::compatible(&self.frame, &rhs.frame));
        let mut out = self.clone();
        for (&idx, c) in &rhs.terms {
            out.insert_add(idx, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            frame: self.frame.clone(),
            terms: self.terms.iter().map(|(&i, c)| (i, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &TwistorScalar) -> Self {
        let mut out = Self::zero(&self.frame);
        for (&idx, v) in &self.terms {
            out.insert(idx, v.mul(c));
        }
        out
    }

    pub fn scale_c(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(&self.frame);
        for (&idx, v) in &self.terms {
            out.insert(idx, v.scale(c));
        }
        out
    }

    pub fn scale_rational(&self, n: i64, d: i64) -> Self {
        self.scale_c(&GaussianRational::from_ratio(n, d))
    }

    /// Multiply by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        self.scale_c(&GaussianRational::i())
    }

    pub fn conj(&self) -> Self {
        Self {
            frame: self.frame.clone(),
            terms: self.terms.iter().map(|(&i, c)| (i, c.conj())).collect(),
        }
    }

    /// Graded-commutative, associative wedge product.
    pub fn wedge(&self, rhs: &Self) -> Result<Self, FormError> {
        Frame::check_compatible(&self.frame, &rhs.frame)?;
        let mut out = Self::zero(&self.frame);
        for (&ia, ca) in &self.terms {
            for (&ib, cb) in &rhs.terms {
                if let Some(sign) = merge_sign(ia, ib) {
                    let mut c = ca.checked_mul(cb)?;
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.insert_add(ia | ib, c);
                }
            }
        }
        Ok(out)
    }

    pub fn wedge_many<'a, I>(forms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = &'a ExteriorForm>,
    {
        let mut it = forms.into_iter();
        let first = it.next().expect("wedge_many needs at least one factor");
        let mut acc = first.clone();
        for f in it {
            acc = acc.wedge(f)?;
        }
        Ok(acc)
    }

    pub fn wedge_pow(&self, n: u32) -> Result<Self, FormError> {
        let mut acc = Self::constant(&self.frame, GaussianRational::one());
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Exterior derivative restricted to a subset of variables. The full
    /// operator is the sum over all variables; the twistor split `d = d_M +
    /// d_{CP¹}` is the partial sum over manifold and chart variables.
    pub fn exterior_derivative_over(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.frame);
        for (&idx, c) in &self.terms {
            for &v in vars {
                let bit = 1u16 << v;
                if idx & bit != 0 {
                    continue;
                }
                let dc = c.derivative(v);
                if dc.is_zero() {
                    continue;
                }
                let sign = merge_sign(bit, idx).expect("disjoint by construction");
                let coeff = if sign < 0 { dc.neg() } else { dc };
                out.insert_add(bit | idx, coeff);
            }
        }
        out
    }

    /// Full exterior derivative. Satisfies `d∘d = 0` and the graded Leibniz
    /// rule exactly.
    pub fn exterior_derivative(&self) -> Self {
        let all: Vec<usize> = (0..self.frame.dim()).collect();
        self.exterior_derivative_over(&all)
    }

    /// Exact evaluation at a rational point: complex coefficients per index.
    pub fn eval(&self, point: &[BigRational]) -> BTreeMap<MultiIndex, GaussianRational> {
        let mut out = BTreeMap::new();
        for (&idx, c) in &self.terms {
            let v = c.eval(point);
            if !v.is_zero() {
                out.insert(idx, v);
            }
        }
        out
    }

    pub fn eval_f64(&self, point: &[BigRational]) -> BTreeMap<MultiIndex, Complex64> {
        self.terms
            .iter()
            .map(|(&idx, c)| (idx, c.eval_f64(point)))
            .collect()
    }

    /// Largest coefficient magnitude at a point, for residual reporting.
    pub fn max_abs_at(&self, point: &[BigRational]) -> f64 {
        self.terms
            .values()
            .map(|c| c.eval(point).abs_f64())
            .fold(0.0, f64::max)
    }

    /// Canonical rendering: ascending multi-indices, each with its canonical
    /// coefficient; byte-stable for identical forms.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&idx, c) in &self.terms {
            if !first {
                write!(f, "  +  ")?;
            }
            first = false;
            if idx == 0 {
                write!(f, "({c})")?;
            } else {
                let factors: Vec<String> =
                    index_bits(idx).map(|i| self.frame.covector_name(i)).collect();
                write!(f, "({c}) {}", factors.join("∧"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
