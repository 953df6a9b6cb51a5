//! Re-basing values from a manifold frame into an enlarged frame whose
//! variables extend the source's by new trailing coordinates (the twistor
//! chart pair). Source variables must be a prefix of the target's, matched
//! by name; multi-indices and exponent vectors embed unchanged.

use std::sync::Arc;

use super::form::ExteriorForm;
use super::frame::{Frame, RingError};
use super::poly::ChartPolynomial;
use super::scalar::TwistorScalar;

fn check_prefix(src: &Arc<Frame>, dst: &Arc<Frame>) -> Result<(), RingError> {
    if src.dim() > dst.dim() {
        return Err(RingError::FrameMismatch(src.to_string(), dst.to_string()));
    }
    for i in 0..src.dim() {
        if src.var_name(i) != dst.var_name(i) {
            return Err(RingError::FrameMismatch(src.to_string(), dst.to_string()));
        }
    }
    Ok(())
}

pub fn lift_poly(p: &ChartPolynomial, dst: &Arc<Frame>) -> Result<ChartPolynomial, RingError> {
    check_prefix(p.frame(), dst)?;
    let pad = dst.dim() - p.frame().dim();
    Ok(ChartPolynomial::from_terms(
        dst,
        p.terms().map(|(m, c)| {
            let mut mono = m.clone();
            mono.extend(std::iter::repeat(0u8).take(pad));
            (mono, c.clone())
        }),
    ))
}

pub fn lift_scalar(v: &TwistorScalar, dst: &Arc<Frame>) -> Result<TwistorScalar, RingError> {
    // A nonzero denominator power only makes sense when the source already
    // has the chart pair, which our models never lift; reject to be safe.
    if v.denom_pow() != 0 {
        return Err(RingError::NoChartPair);
    }
    Ok(TwistorScalar::from_poly(lift_poly(v.numerator(), dst)?))
}

pub fn lift_form(f: &ExteriorForm, dst: &Arc<Frame>) -> Result<ExteriorForm, RingError> {
    check_prefix(f.frame(), dst)?;
    let mut terms = Vec::new();
    for (&idx, c) in f.terms() {
        terms.push((idx, lift_scalar(c, dst)?));
    }
    Ok(ExteriorForm::from_terms(dst, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;

    #[test]
    fn lift_preserves_products() {
        let base = Frame::manifold(4);
        let big = Frame::with_chart(4);
        let q1 = ChartPolynomial::var(&base, 0);
        let q2 = ChartPolynomial::var(&base, 1);
        let p = q1.mul(&q2).add(&ChartPolynomial::one(&base));
        let lifted = lift_poly(&p, &big).unwrap();
        let expected = ChartPolynomial::var(&big, 0)
            .mul(&ChartPolynomial::var(&big, 1))
            .add(&ChartPolynomial::one(&big));
        assert_eq!(lifted, expected);
    }

    #[test]
    fn lift_form_keeps_indices() {
        let base = Frame::manifold(2);
        let big = Frame::with_chart(2);
        let f = ExteriorForm::covector(&base, 0)
            .wedge(&ExteriorForm::covector(&base, 1))
            .unwrap()
            .scale_c(&GaussianRational::from_ratio(3, 7));
        let lifted = lift_form(&f, &big).unwrap();
        let expected = ExteriorForm::covector(&big, 0)
            .wedge(&ExteriorForm::covector(&big, 1))
            .unwrap()
            .scale_c(&GaussianRational::from_ratio(3, 7));
        assert_eq!(lifted, expected);
    }

    #[test]
    fn mismatched_prefix_is_rejected() {
        let base = Frame::chart_only();
        let big = Frame::with_chart(2);
        let p = ChartPolynomial::var(&base, 0);
        assert!(lift_poly(&p, &big).is_err());
    }
}
