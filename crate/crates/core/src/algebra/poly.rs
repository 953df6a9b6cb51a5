//! Multivariate polynomials over the Gaussian rationals.
//!
//! Terms are kept in a canonically ordered map from dense exponent vectors to
//! nonzero coefficients, so two polynomials are equal iff their term maps are
//! identical. Multiplication is checked against the frame's total-degree cap
//! and reports overflow instead of truncating.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::frame::{Frame, RingError};
use super::gaussian::GaussianRational;

type Monomial = Vec<u8>;

#[derive(Clone, PartialEq, Eq)]
pub struct ChartPolynomial {
    frame: Arc<Frame>,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl ChartPolynomial {
    pub fn zero(frame: &Arc<Frame>) -> Self {
        Self {
            frame: frame.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(frame: &Arc<Frame>, c: GaussianRational) -> Self {
        let mut p = Self::zero(frame);
        if !c.is_zero() {
            p.terms.insert(vec![0u8; frame.dim()], c);
        }
        p
    }

    pub fn one(frame: &Arc<Frame>) -> Self {
        Self::constant(frame, GaussianRational::one())
    }

    /// The variable with index `idx` as a polynomial.
    pub fn var(frame: &Arc<Frame>, idx: usize) -> Self {
        assert!(idx < frame.dim(), "variable index out of range");
        let mut mono = vec![0u8; frame.dim()];
        mono[idx] = 1;
        let mut p = Self::zero(frame);
        p.terms.insert(mono, GaussianRational::one());
        p
    }

    pub fn from_terms<I>(frame: &Arc<Frame>, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut p = Self::zero(frame);
        for (m, c) in it {
            assert_eq!(m.len(), frame.dim());
            p.add_term(m, c);
        }
        p
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn constant_coefficient(&self) -> GaussianRational {
        self.terms
            .get(&vec![0u8; self.frame.dim()])
            .cloned()
            .unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m[idx] as u32).max().unwrap_or(0)
    }

    fn add_term(&mut self, mono: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert!(Frame::compatible(&self.frame, &rhs.frame));
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            frame: self.frame.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.frame);
        }
        Self {
            frame: self.frame.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Product with the frame degree cap enforced.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        Frame::check_compatible(&self.frame, &rhs.frame)?;
        let cap = self.frame.degree_cap();
        let mut out = Self::zero(&self.frame);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                let mut degree: u32 = 0;
                for (e, &eb) in m.iter_mut().zip(mb.iter()) {
                    let sum = *e as u32 + eb as u32;
                    if sum > u8::MAX as u32 {
                        return Err(RingError::DegreeOverflow { degree: sum, cap });
                    }
                    *e = sum as u8;
                    degree += sum;
                }
                if degree > cap {
                    return Err(RingError::DegreeOverflow { degree, cap });
                }
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("polynomial product: {e}"))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Self::one(&self.frame);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.frame);
        for (m, c) in &self.terms {
            let e = m[idx];
            if e == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono[idx] = e - 1;
            out.add_term(mono, c * &GaussianRational::from_integer(e as i64));
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            frame: self.frame.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point (one value per frame variable).
    pub fn eval(&self, point: &[BigRational]) -> GaussianRational {
        assert_eq!(point.len(), self.frame.dim(), "point/frame dimension mismatch");
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &GaussianRational::from_rational(point[i].clone());
                }
            }
            acc += &term;
        }
        acc
    }

    /// Exact division: returns `q` with `self = q·d`, or `None` when `d`
    /// does not divide `self`. Standard leading-term elimination in the
    /// lexicographic monomial order.
    pub fn try_div_exact(&self, d: &Self) -> Option<Self> {
        debug_assert!(Frame::compatible(&self.frame, &d.frame));
        if d.is_zero() {
            return None;
        }
        let (lead_m, lead_c) = d.terms.iter().next_back()?;
        let lead_c_inv = lead_c.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.frame);
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            let mut qm = rm.clone();
            for (e, &le) in qm.iter_mut().zip(lead_m.iter()) {
                if *e < le {
                    return None;
                }
                *e -= le;
            }
            let qc = rc * &lead_c_inv;
            // rem -= (qc * qm) * d
            for (dm, dc) in &d.terms {
                let mut m = qm.clone();
                for (e, &de) in m.iter_mut().zip(dm.iter()) {
                    *e += de;
                }
                rem.add_term(m, -&(&qc * dc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Substitute variable `idx` by a polynomial.
    pub fn substitute(&self, idx: usize, value: &Self) -> Self {
        let mut out = Self::zero(&self.frame);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest[idx];
            rest[idx] = 0;
            let mut term = Self::from_terms(&self.frame, [(rest, c.clone())]);
            for _ in 0..e {
                term = term.mul(value);
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for ChartPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.frame.var_name(i).to_string()
                    } else {
                        format!("{}^{}", self.frame.var_name(i), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ChartPolynomial {
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

    #[test]
    fn arithmetic_and_canonical_form() {
        let fr = Frame::with_chart(0);
        let x = ChartPolynomial::var(&fr, 0);
        let y = ChartPolynomial::var(&fr, 1);
        let p = x.add(&y).mul(&x.sub(&y)); // x² − y²
        let expected = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expected);
        assert_eq!(p.sub(&expected).num_terms(), 0);
    }

    #[test]
    fn degree_cap_overflow_is_an_error() {
        let fr = Frame::with_chart(0).with_degree_cap(3);
        let x = ChartPolynomial::var(&fr, 0);
        let x2 = x.checked_mul(&x).unwrap();
        assert!(matches!(
            x2.checked_mul(&x2),
            Err(RingError::DegreeOverflow { degree: 4, cap: 3 })
        ));
    }

    #[test]
    fn derivative_stays_in_type() {
        let fr = Frame::with_chart(2);
        let q1 = ChartPolynomial::var(&fr, 0);
        let x = ChartPolynomial::var(&fr, 2);
        let p = q1.mul(&x).mul(&x); // q1·x²
        let dp = p.derivative(2);
        let expected = q1.mul(&x).scale(&GaussianRational::from_integer(2));
        assert_eq!(dp, expected);
    }

    #[test]
    fn exact_division_detects_divisibility() {
        let fr = Frame::with_chart(0);
        let x = ChartPolynomial::var(&fr, 0);
        let y = ChartPolynomial::var(&fr, 1);
        let s = ChartPolynomial::one(&fr).add(&x.mul(&x)).add(&y.mul(&y));
        let p = s.mul(&s).mul(&x.add(&y));
        let quot = p.try_div_exact(&s).unwrap();
        assert_eq!(quot, s.mul(&x.add(&y)));
        assert!(x.add(&y).try_div_exact(&s).is_none());
    }

    #[test]
    fn evaluation_is_exact() {
        let fr = Frame::with_chart(0);
        let x = ChartPolynomial::var(&fr, 0);
        let y = ChartPolynomial::var(&fr, 1);
        let p = x.mul(&x).add(&y); // x² + y
        let v = p.eval(&[q(1, 2), q(-1, 3)]);
        assert_eq!(v, GaussianRational::from_rational(q(-1, 12)));
    }
}
