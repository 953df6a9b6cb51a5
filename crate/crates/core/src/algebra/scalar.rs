//! The coefficient ring for twistor-chart computations: polynomials over the
//! Gaussian rationals divided by a power of `s = 1 + x² + y²`.
//!
//! The ring is closed under `+`, `−`, `×`, conjugation and all partial
//! derivatives (the quotient rule keeps denominators as powers of `s`), and
//! every element has a canonical reduced representative: either `k = 0` or
//! the numerator is not divisible by `s`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::frame::{Frame, RingError};
use super::gaussian::GaussianRational;
use super::poly::ChartPolynomial;

#[derive(Clone, PartialEq, Eq)]
pub struct TwistorScalar {
    num: ChartPolynomial,
    denom_pow: u32,
}

/// `s = 1 + x² + y²` in the frame's chart variables.
pub fn chart_denominator(frame: &Arc<Frame>) -> Result<ChartPolynomial, RingError> {
    let (x, y) = frame.chart_pair().ok_or(RingError::NoChartPair)?;
    let xv = ChartPolynomial::var(frame, x);
    let yv = ChartPolynomial::var(frame, y);
    Ok(ChartPolynomial::one(frame)
        .add(&xv.mul(&xv))
        .add(&yv.mul(&yv)))
}

impl TwistorScalar {
    pub fn from_poly(num: ChartPolynomial) -> Self {
        Self { num, denom_pow: 0 }
    }

    /// `num / s^denom_pow`, canonically reduced.
    pub fn new(num: ChartPolynomial, denom_pow: u32) -> Self {
        let mut v = Self { num, denom_pow };
        v.reduce();
        v
    }

    pub fn zero(frame: &Arc<Frame>) -> Self {
        Self::from_poly(ChartPolynomial::zero(frame))
    }

    pub fn one(frame: &Arc<Frame>) -> Self {
        Self::from_poly(ChartPolynomial::one(frame))
    }

    pub fn constant(frame: &Arc<Frame>, c: GaussianRational) -> Self {
        Self::from_poly(ChartPolynomial::constant(frame, c))
    }

    pub fn i(frame: &Arc<Frame>) -> Self {
        Self::constant(frame, GaussianRational::i())
    }

    pub fn var(frame: &Arc<Frame>, idx: usize) -> Self {
        Self::from_poly(ChartPolynomial::var(frame, idx))
    }

    pub fn frame(&self) -> &Arc<Frame> {
        self.num.frame()
    }

    pub fn numerator(&self) -> &ChartPolynomial {
        &self.num
    }

    pub fn denom_pow(&self) -> u32 {
        self.denom_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.denom_pow == 0 && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(self.num.constant_coefficient())
        } else {
            None
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.denom_pow = 0;
            return;
        }
        if self.denom_pow == 0 {
            return;
        }
        let s = match chart_denominator(self.frame()) {
            Ok(s) => s,
            Err(_) => return,
        };
        while self.denom_pow > 0 {
            match self.num.try_div_exact(&s) {
                Some(q) => {
                    self.num = q;
                    self.denom_pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, RingError> {
        Frame::check_compatible(self.frame(), rhs.frame())?;
        let k = self.denom_pow.max(rhs.denom_pow);
        let lift = |v: &Self| -> Result<ChartPolynomial, RingError> {
            let mut n = v.num.clone();
            if k > v.denom_pow {
                let s = chart_denominator(v.frame())?;
                n = n.checked_mul(&s.pow(k - v.denom_pow))?;
            }
            Ok(n)
        };
        Ok(Self::new(lift(self)?.add(&lift(rhs)?), k))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        Frame::check_compatible(self.frame(), rhs.frame())?;
        Ok(Self::new(
            self.num.checked_mul(&rhs.num)?,
            self.denom_pow + rhs.denom_pow,
        ))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs)
            .unwrap_or_else(|e| panic!("scalar sum: {e}"))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            denom_pow: self.denom_pow,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("scalar product: {e}"))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self {
            num: self.num.scale(c),
            denom_pow: self.denom_pow,
        };
        if out.num.is_zero() {
            out.denom_pow = 0;
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.frame());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(&self) -> Self {
        Self {
            num: self.num.conj(),
            denom_pow: self.denom_pow,
        }
    }

    /// Partial derivative. Chart variables use the quotient rule, so the
    /// denominator power grows by at most one before reduction.
    pub fn derivative(&self, idx: usize) -> Self {
        if self.denom_pow == 0 || !self.frame().is_chart_var(idx) {
            return Self {
                num: self.num.derivative(idx),
                denom_pow: self.denom_pow,
            };
        }
        // d(p/s^k) = (p' s − k p s') / s^{k+1}
        let s = chart_denominator(self.frame()).expect("chart pair present");
        let sp = s.derivative(idx);
        let k = GaussianRational::from_integer(self.denom_pow as i64);
        let num = self
            .num
            .derivative(idx)
            .mul(&s)
            .sub(&self.num.mul(&sp).scale(&k));
        Self::new(num, self.denom_pow + 1)
    }

    /// Exact rational evaluation; the denominator never vanishes on real
    /// points since `s ≥ 1`.
    pub fn eval(&self, point: &[BigRational]) -> GaussianRational {
        let n = self.num.eval(point);
        if self.denom_pow == 0 {
            return n;
        }
        let (x, y) = self.frame().chart_pair().expect("chart pair present");
        let s = BigRational::from_integer(1.into()) + &point[x] * &point[x] + &point[y] * &point[y];
        let mut denom = BigRational::from_integer(1.into());
        for _ in 0..self.denom_pow {
            denom *= &s;
        }
        debug_assert!(!denom.is_zero());
        &n * &GaussianRational::from_rational(denom).recip()
    }

    pub fn eval_f64(&self, point: &[BigRational]) -> num_complex::Complex64 {
        self.eval(point).to_complex_f64()
    }

    /// Exact division by another scalar, when the quotient stays in the ring.
    pub fn try_div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if let Some(c) = rhs.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        // self/rhs = (num_a · s^{k_b}) / (num_b · s^{k_a}); try polynomial division.
        let q = self.num.try_div_exact(&rhs.num)?;
        if rhs.denom_pow >= self.denom_pow {
            let s = chart_denominator(self.frame()).ok()?;
            Some(Self::from_poly(
                q.checked_mul(&s.pow(rhs.denom_pow - self.denom_pow)).ok()?,
            ))
        } else {
            Some(Self::new(q, self.denom_pow - rhs.denom_pow))
        }
    }
}

impl fmt::Display for TwistorScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_pow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / s^{}", self.num, self.denom_pow)
        }
    }
}

impl fmt::Debug for TwistorScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn chart_frame() -> Arc<Frame> {
        Frame::with_chart(0)
    }

    /// x₁ = 2x/s as in the inverse stereographic parametrization.
    fn x1(frame: &Arc<Frame>) -> TwistorScalar {
        let x = ChartPolynomial::var(frame, 0);
        TwistorScalar::new(x.scale(&GaussianRational::from_integer(2)), 1)
    }

    #[test]
    fn canonical_reduction_divides_out_s() {
        let fr = chart_frame();
        let s = chart_denominator(&fr).unwrap();
        let v = TwistorScalar::new(s.mul(&s), 3);
        assert_eq!(v.denom_pow(), 1);
        assert_eq!(v.numerator(), &ChartPolynomial::one(&fr));
    }

    #[test]
    fn derivative_closes_in_ring() {
        let fr = chart_frame();
        let v = x1(&fr);
        let d = v.derivative(0);
        // d/dx (2x/s) = (2s − 4x²)/s² = 2(1 − x² + y²)/s²
        assert_eq!(d.denom_pow(), 2);
        let x = ChartPolynomial::var(&fr, 0);
        let y = ChartPolynomial::var(&fr, 1);
        let expected = ChartPolynomial::one(&fr)
            .sub(&x.mul(&x))
            .add(&y.mul(&y))
            .scale(&GaussianRational::from_integer(2));
        assert_eq!(d.numerator(), &expected);
    }

    #[test]
    fn sphere_constraint_reduces_to_one() {
        // x₁² + x₂² + x₃² = 1 exactly in the ring.
        let fr = chart_frame();
        let x = ChartPolynomial::var(&fr, 0);
        let y = ChartPolynomial::var(&fr, 1);
        let two = GaussianRational::from_integer(2);
        let x1 = TwistorScalar::new(x.scale(&two), 1);
        let x2 = TwistorScalar::new(y.scale(&two).neg(), 1);
        let x3 = TwistorScalar::new(
            x.mul(&x).add(&y.mul(&y)).sub(&ChartPolynomial::one(&fr)),
            1,
        );
        let sum = x1.mul(&x1).add(&x2.mul(&x2)).add(&x3.mul(&x3));
        assert_eq!(sum, TwistorScalar::one(&fr));
    }

    #[test]
    fn exact_evaluation_with_denominator() {
        let fr = chart_frame();
        let v = x1(&fr);
        assert_eq!(
            v.eval(&[q(1, 1), q(0, 1)]),
            GaussianRational::from_integer(1)
        );
        assert_eq!(
            v.eval(&[q(1, 2), q(1, 2)]),
            GaussianRational::from_ratio(2, 3)
        );
    }

    #[test]
    fn derivative_of_denominator_power_bounded() {
        let fr = chart_frame();
        let v = x1(&fr);
        for idx in 0..2 {
            let d = v.derivative(idx);
            assert!(d.denom_pow() <= v.denom_pow() + 1);
        }
    }
}
