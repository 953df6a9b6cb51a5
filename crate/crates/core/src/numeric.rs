//! Pointwise numeric companions to the symbolic layer: complex-coefficient
//! forms at a point, exact rational square roots, and small eigenvalue
//! helpers used by the positivity machinery.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{index_bits, index_degree, merge_sign, GaussianRational, MultiIndex};

/// A form evaluated at a point: complex coefficients per multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct NumForm {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl NumForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(dim: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut f = Self::zero(dim);
        for (idx, c) in it {
            f.insert_add(idx, c);
        }
        f
    }

    pub fn from_exact(dim: usize, exact: &BTreeMap<MultiIndex, GaussianRational>) -> Self {
        Self::from_terms(dim, exact.iter().map(|(&i, c)| (i, c.to_complex_f64())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: MultiIndex) -> Complex64 {
        self.terms.get(&idx).copied().unwrap_or(Complex64::ZERO)
    }

    fn insert_add(&mut self, idx: MultiIndex, c: Complex64) {
        if c == Complex64::ZERO {
            return;
        }
        *self.terms.entry(idx).or_insert(Complex64::ZERO) += c;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&i, &c) in &rhs.terms {
            out.insert_add(i, c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(&i, &v)| (i, v * c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(&i, &v)| (i, v.conj())).collect(),
        }
    }

    pub fn wedge(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&ia, &ca) in &self.terms {
            for (&ib, &cb) in &rhs.terms {
                if let Some(sign) = merge_sign(ia, ib) {
                    out.insert_add(ia | ib, ca * cb * sign as f64);
                }
            }
        }
        out
    }

    pub fn wedge_pow(&self, n: u32) -> Self {
        let mut acc = Self::from_terms(self.dim, [(0u16, Complex64::new(1.0, 0.0))]);
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluate a k-form on k vectors (rows of `vectors`).
    pub fn apply(&self, vectors: &[DVector<Complex64>]) -> Complex64 {
        let k = vectors.len();
        let mut acc = Complex64::ZERO;
        for (&idx, &c) in &self.terms {
            if index_degree(idx) as usize != k {
                continue;
            }
            let cols: Vec<usize> = index_bits(idx).collect();
            let m = DMatrix::from_fn(k, k, |r, cidx| vectors[r][cols[cidx]]);
            acc += c * m.determinant();
        }
        acc
    }

    /// Antisymmetric coefficient matrix of a 2-form: `W[a][b] = ω(e_a, e_b)`.
    pub fn two_form_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dim;
        let mut w = DMatrix::from_element(n, n, Complex64::ZERO);
        for (&idx, &c) in &self.terms {
            let bits: Vec<usize> = index_bits(idx).collect();
            if bits.len() != 2 {
                continue;
            }
            w[(bits[0], bits[1])] += c;
            w[(bits[1], bits[0])] -= c;
        }
        w
    }

    /// Coefficient of the top index (all covectors).
    pub fn top_coefficient(&self) -> Complex64 {
        let top: MultiIndex = ((1u32 << self.dim) - 1) as u16;
        self.coefficient(top)
    }
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m)[0]
}

/// Largest generalized eigenvalue of `A v = λ B v` with `B` symmetric
/// positive definite, via the Cholesky reduction `L⁻¹ A L⁻ᵀ`.
pub fn generalized_max_eigenvalue(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    let chol = b.clone().cholesky()?;
    let l_inv = chol.l().try_inverse()?;
    let reduced = &l_inv * a * l_inv.transpose();
    let vals = symmetric_eigenvalues(&reduced);
    vals.last().copied()
}

/// Real-symmetric solve helper: exact rational Gaussian elimination for
/// small systems, used where `f64` round-off would contaminate an exact path.
pub fn rational_matrix_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::from_integer(BigInt::from(1))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &pivot;
            inv[col][j] /= &pivot;
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[row][j] -= t;
                let t = &factor * &inv[col][j];
                inv[row][j] -= t;
            }
        }
    }
    Some(inv)
}

pub fn rational_determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return BigRational::zero(),
        };
        if pivot_row != col {
            a.swap(col, pivot_row);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &pivot;
            for j in col..n {
                let t = &factor * &a[col][j];
                a[row][j] -= t;
            }
        }
    }
    det
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_detects_squares() {
        let r = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(
            rational_sqrt(&r),
            Some(BigRational::new(BigInt::from(3), BigInt::from(2)))
        );
        let nr = BigRational::new(BigInt::from(2), BigInt::from(1));
        assert_eq!(rational_sqrt(&nr), None);
    }

    #[test]
    fn exact_inverse_small() {
        let m = vec![
            vec![
                BigRational::from_integer(BigInt::from(2)),
                BigRational::from_integer(BigInt::from(1)),
            ],
            vec![
                BigRational::from_integer(BigInt::from(1)),
                BigRational::from_integer(BigInt::from(1)),
            ],
        ];
        let inv = rational_matrix_inverse(&m).unwrap();
        assert_eq!(inv[0][0], BigRational::from_integer(BigInt::from(1)));
        assert_eq!(inv[0][1], BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(rational_determinant(&m), BigRational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn generalized_eigen_matches_direct() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let max = generalized_max_eigenvalue(&a, &b).unwrap();
        assert!((max - 2.0).abs() < 1e-12);
    }

    #[test]
    fn numform_wedge_and_apply() {
        let mut f = NumForm::zero(3);
        f.insert_add(0b011, Complex64::new(1.0, 0.0));
        let g = NumForm::from_terms(3, [(0b100u16, Complex64::new(2.0, 0.0))]);
        let top = f.wedge(&g);
        assert_eq!(top.top_coefficient(), Complex64::new(2.0, 0.0));
        let e0 = DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
        ]);
        let e1 = DVector::from_vec(vec![
            Complex64::ZERO,
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
        ]);
        assert_eq!(f.apply(&[e0, e1]), Complex64::new(1.0, 0.0));
    }
}
