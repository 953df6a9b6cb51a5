//! Stereographic chart machinery on the twistor sphere: the coordinate
//! functions `x₁, x₂, x₃`, the Fubini–Study form, the antipodal map and the
//! fiber-direction Dolbeault operators in the chart coordinate `z = x + iy`.

use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{
    ChartPolynomial, ExteriorForm, Frame, GaussianRational, RingError, TwistorScalar,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("the antipode of z = 0 leaves the chart")]
    OutOfChart,
}

/// Which stereographic chart: `N` omits `(0,0,1)`, `S` omits `(0,0,−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    North,
    South,
}

/// The sphere coordinates as ring elements over the chart:
/// in chart `N`, `x₁ = 2x/s`, `x₂ = −2y/s`, `x₃ = (x²+y²−1)/s` with
/// `s = 1 + x² + y²`; in chart `S` the signs of `x₂` and `x₃` flip.
pub fn sphere_functions(frame: &Arc<Frame>, chart: ChartKind) -> [TwistorScalar; 3] {
    let (xi, yi) = frame.chart_pair().expect("frame needs a chart pair");
    let x = ChartPolynomial::var(frame, xi);
    let y = ChartPolynomial::var(frame, yi);
    let two = GaussianRational::from_integer(2);
    let x1 = TwistorScalar::new(x.scale(&two), 1);
    let r2_minus_1 = x.mul(&x).add(&y.mul(&y)).sub(&ChartPolynomial::one(frame));
    match chart {
        ChartKind::North => [
            x1,
            TwistorScalar::new(y.scale(&two).neg(), 1),
            TwistorScalar::new(r2_minus_1, 1),
        ],
        ChartKind::South => [
            x1,
            TwistorScalar::new(y.scale(&two), 1),
            TwistorScalar::new(r2_minus_1.neg(), 1),
        ],
    }
}

/// Evaluate the sphere functions at a rational chart point.
pub fn sphere_point_at(
    frame: &Arc<Frame>,
    chart: ChartKind,
    point: &[BigRational],
) -> [BigRational; 3] {
    sphere_functions(frame, chart).map(|f| {
        let v = f.eval(point);
        debug_assert!(v.is_real());
        v.re().clone()
    })
}

/// The antipodal map `z ↦ −1/z̄` on chart points; `z = 0` maps to the
/// missing pole.
pub fn antipode_point(x: &BigRational, y: &BigRational) -> Result<(BigRational, BigRational), ChartError> {
    let r2 = x * x + y * y;
    if r2 == BigRational::from_integer(0.into()) {
        return Err(ChartError::OutOfChart);
    }
    Ok((-(x / &r2), -(y / &r2)))
}

/// Compose a chart scalar with the antipodal map, exactly in the ring:
/// `x^a y^b / s^k ↦ (−1)^{a+b} x^a y^b·r^{2(m−a−b)} · r^{2(k−m)} / s^k`
/// after clearing `r² = x² + y²` denominators. Fails if the cleared
/// numerator is not divisible by the required `r²` power (the composite
/// then falls outside the ring).
pub fn compose_antipode(v: &TwistorScalar) -> Result<TwistorScalar, ChartError> {
    let frame = v.frame().clone();
    let (xi, yi) = frame.chart_pair().ok_or(RingError::NoChartPair)?;
    let x = ChartPolynomial::var(&frame, xi);
    let y = ChartPolynomial::var(&frame, yi);
    let r2 = x.mul(&x).add(&y.mul(&y));
    let k = v.denom_pow();

    // substitute x ↦ −x/r², y ↦ −y/r², clearing with r^{2m}
    let m = v
        .numerator()
        .terms()
        .map(|(mono, _)| mono[xi] as u32 + mono[yi] as u32)
        .max()
        .unwrap_or(0);
    let mut cleared = ChartPolynomial::zero(&frame);
    for (mono, c) in v.numerator().terms() {
        let a = mono[xi] as u32;
        let b = mono[yi] as u32;
        let mut rest = mono.clone();
        rest[xi] = 0;
        rest[yi] = 0;
        let sign = if (a + b) % 2 == 0 {
            c.clone()
        } else {
            -c
        };
        let mut term = ChartPolynomial::from_terms(&frame, [(rest, sign)]);
        term = term.mul(&x.pow(a)).mul(&y.pow(b)).mul(&r2.pow(m - a - b));
        cleared = cleared.add(&term);
    }
    // composite = cleared · r^{2(k−m)} / s^k
    let num = if k >= m {
        cleared.mul(&r2.pow(k - m))
    } else {
        cleared
            .try_div_exact(&r2.pow(m - k))
            .ok_or(ChartError::OutOfChart)?
    };
    Ok(TwistorScalar::new(num, k))
}

/// The Fubini–Study form `ω_FS = i·dz∧dz̄/(1+|z|²)² = (2/s²)·dx∧dy`.
pub fn fubini_study(frame: &Arc<Frame>) -> ExteriorForm {
    let (xi, yi) = frame.chart_pair().expect("frame needs a chart pair");
    let coeff = TwistorScalar::new(
        ChartPolynomial::constant(frame, GaussianRational::from_integer(2)),
        2,
    );
    ExteriorForm::covector(frame, xi)
        .wedge(&ExteriorForm::covector(frame, yi))
        .expect("same frame")
        .scale(&coeff)
}

/// Fubini–Study metric on the chart block: `g_FS = (2/s²)·(dx² + dy²)`.
pub fn fubini_study_gram_entry(frame: &Arc<Frame>) -> TwistorScalar {
    TwistorScalar::new(
        ChartPolynomial::constant(frame, GaussianRational::from_integer(2)),
        2,
    )
}

/// `dz = dx + i·dy` and `dz̄ = dx − i·dy`.
pub fn dz_forms(frame: &Arc<Frame>) -> (ExteriorForm, ExteriorForm) {
    let (xi, yi) = frame.chart_pair().expect("frame needs a chart pair");
    let dx = ExteriorForm::covector(frame, xi);
    let dy = ExteriorForm::covector(frame, yi);
    (dx.add(&dy.mul_i()), dx.sub(&dy.mul_i()))
}

/// `∂_z` on scalars: `(∂_x − i·∂_y)/2`.
pub fn d_z(v: &TwistorScalar) -> TwistorScalar {
    let (xi, yi) = v.frame().chart_pair().expect("frame needs a chart pair");
    let half = GaussianRational::from_ratio(1, 2);
    v.derivative(xi)
        .sub(&v.derivative(yi).scale(&GaussianRational::i()))
        .scale(&half)
}

/// `∂_z̄` on scalars: `(∂_x + i·∂_y)/2`.
pub fn d_zbar(v: &TwistorScalar) -> TwistorScalar {
    let (xi, yi) = v.frame().chart_pair().expect("frame needs a chart pair");
    let half = GaussianRational::from_ratio(1, 2);
    v.derivative(xi)
        .add(&v.derivative(yi).scale(&GaussianRational::i()))
        .scale(&half)
}

/// Fiber-holomorphic part of the chart differential: `∂_c F = dz ∧ ∂_z F`
/// (coefficientwise `∂_z`). The fiber structure on `dx, dy` is the standard
/// one, so this is the `(1,0)` chart part of `d_{CP¹}`.
pub fn partial_fiber(f: &ExteriorForm) -> ExteriorForm {
    fiber_half(f, true)
}

/// Fiber-antiholomorphic part: `∂̄_c F = dz̄ ∧ ∂_z̄ F`.
pub fn dbar_fiber(f: &ExteriorForm) -> ExteriorForm {
    fiber_half(f, false)
}

fn fiber_half(f: &ExteriorForm, holomorphic: bool) -> ExteriorForm {
    let frame = f.frame().clone();
    let (dz, dzbar) = dz_forms(&frame);
    let one_form = if holomorphic { dz } else { dzbar };
    let mut out = ExteriorForm::zero(&frame);
    for (&idx, c) in f.terms() {
        let dc = if holomorphic { d_z(c) } else { d_zbar(c) };
        if dc.is_zero() {
            continue;
        }
        let monomial = ExteriorForm::from_terms(&frame, [(idx, TwistorScalar::one(&frame))]);
        let piece = one_form
            .scale(&dc)
            .wedge(&monomial)
            .expect("same frame");
        out = out.add(&piece);
    }
    out
}

/// `d_{CP¹} = ∂_c + ∂̄_c`: the chart part of the exterior derivative.
pub fn d_fiber(f: &ExteriorForm) -> ExteriorForm {
    let (xi, yi) = f.frame().chart_pair().expect("frame needs a chart pair");
    f.exterior_derivative_over(&[xi, yi])
}

/// `d^c_{CP¹} = i(∂̄_c − ∂_c)`.
pub fn dc_fiber(f: &ExteriorForm) -> ExteriorForm {
    dbar_fiber(f).sub(&partial_fiber(f)).mul_i()
}

/// `d_{CP¹} d^c_{CP¹}`, which on chart functions equals `2i·∂_c∂̄_c`.
pub fn ddc_fiber(f: &ExteriorForm) -> ExteriorForm {
    d_fiber(&dc_fiber(f))
}

/// The nine closed-form chart derivatives of the sphere functions, each
/// pair (computed, closed form) reduced to canonical form. All residuals
/// are exactly zero; they are returned so callers can report them.
pub struct DerivativeTable {
    /// `(name, computed − closed form)` for the nine entries.
    pub residuals: Vec<(&'static str, ExteriorForm)>,
}

impl DerivativeTable {
    pub fn all_exact(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Verify `∂x_i`, `∂̄x_i`, `∂∂̄x_i` against their closed forms in chart `N`:
///
/// * `∂x₁ = (1−z̄²)/s²·dz`,   `∂̄x₁ = (1−z²)/s²·dz̄`
/// * `∂x₂ = i(1+z̄²)/s²·dz`,  `∂̄x₂ = −i(1+z²)/s²·dz̄`
/// * `∂x₃ = 2z̄/s²·dz`,       `∂̄x₃ = 2z/s²·dz̄`
/// * `∂∂̄x₁ = −2(z+z̄)/s³·dz∧dz̄`, `∂∂̄x₂ = −2i(z−z̄)/s³·dz∧dz̄`,
///   `∂∂̄x₃ = −2(−1+|z|²)/s³·dz∧dz̄`
pub fn derivative_table(frame: &Arc<Frame>) -> DerivativeTable {
    let (xi, yi) = frame.chart_pair().expect("frame needs a chart pair");
    let xs = sphere_functions(frame, ChartKind::North);
    let (dz, dzbar) = dz_forms(frame);
    let dz_dzbar = dz.wedge(&dzbar).expect("same frame");

    let x = ChartPolynomial::var(frame, xi);
    let y = ChartPolynomial::var(frame, yi);
    let i_unit = GaussianRational::i();
    let z = x.add(&y.scale(&i_unit));
    let zbar = x.sub(&y.scale(&i_unit));
    let one = ChartPolynomial::one(frame);
    let two = GaussianRational::from_integer(2);
    let s = |p: ChartPolynomial, k: u32| TwistorScalar::new(p, k);

    // closed-form coefficients over s²
    let a1 = s(one.sub(&zbar.mul(&zbar)), 2);
    let a1_bar = s(one.sub(&z.mul(&z)), 2);
    let a2 = s(one.add(&zbar.mul(&zbar)).scale(&i_unit), 2);
    let a2_bar = s(one.add(&z.mul(&z)).scale(&i_unit).neg(), 2);
    let a3 = s(zbar.scale(&two), 2);
    let a3_bar = s(z.scale(&two), 2);
    // ∂∂̄ coefficients over s³
    let zz = z.mul(&zbar);
    let b1 = s(z.add(&zbar).scale(&two).neg(), 3);
    let b2 = s(z.sub(&zbar).scale(&two).scale(&i_unit).neg(), 3);
    let b3 = s(zz.sub(&one).scale(&two).neg(), 3);

    let mut residuals = Vec::with_capacity(9);
    let names_partial = ["∂x₁", "∂x₂", "∂x₃"];
    let names_dbar = ["∂̄x₁", "∂̄x₂", "∂̄x₃"];
    let names_ddbar = ["∂∂̄x₁", "∂∂̄x₂", "∂∂̄x₃"];
    let partial_closed = [a1, a2, a3];
    let dbar_closed = [a1_bar, a2_bar, a3_bar];
    let ddbar_closed = [b1, b2, b3];
    for i in 0..3 {
        let f = ExteriorForm::scalar(xs[i].clone());
        let computed_partial = partial_fiber(&f);
        let computed_dbar = dbar_fiber(&f);
        let computed_ddbar = partial_fiber(&dbar_fiber(&f));
        residuals.push((
            names_partial[i],
            computed_partial.sub(&dz.scale(&partial_closed[i])),
        ));
        residuals.push((
            names_dbar[i],
            computed_dbar.sub(&dzbar.scale(&dbar_closed[i])),
        ));
        // ∂∂̄ = ∂ applied to dz̄∧(∂_z̄ x): coefficient sits on dz∧dz̄
        residuals.push((
            names_ddbar[i],
            computed_ddbar.sub(&dz_dzbar.scale(&ddbar_closed[i])),
        ));
    }
    DerivativeTable { residuals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xorshift64Star;

    fn fr() -> Arc<Frame> {
        Frame::chart_only()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sphere_functions_hit_named_points() {
        let frame = fr();
        // z = 1 ↦ (1, 0, 0)
        let p1 = sphere_point_at(&frame, ChartKind::North, &[rat(1, 1), rat(0, 1)]);
        assert_eq!(p1, [rat(1, 1), rat(0, 1), rat(0, 1)]);
        // z = 0 ↦ (0, 0, −1)
        let p0 = sphere_point_at(&frame, ChartKind::North, &[rat(0, 1), rat(0, 1)]);
        assert_eq!(p0, [rat(0, 1), rat(0, 1), rat(-1, 1)]);
    }

    #[test]
    fn sphere_constraint_exact() {
        let frame = fr();
        for chart in [ChartKind::North, ChartKind::South] {
            let [x1, x2, x3] = sphere_functions(&frame, chart);
            let sum = x1.mul(&x1).add(&x2.mul(&x2)).add(&x3.mul(&x3));
            assert_eq!(sum, TwistorScalar::one(&frame));
        }
    }

    #[test]
    fn antipode_is_involutive_and_flips_sphere_functions() {
        let frame = fr();
        // symbolic: x_i ∘ antipode = −x_i exactly in the ring
        for f in sphere_functions(&frame, ChartKind::North) {
            let composed = compose_antipode(&f).unwrap();
            assert_eq!(composed, f.neg());
        }
        // pointwise involution on 50 random nonzero chart points
        let mut rng = Xorshift64Star::new(3);
        let mut n = 0;
        while n < 50 {
            let x = rng.rational(5, 7);
            let y = rng.rational(5, 7);
            if &x * &x + &y * &y == BigRational::from_integer(0.into()) {
                continue;
            }
            n += 1;
            let (ax, ay) = antipode_point(&x, &y).unwrap();
            let (bx, by) = antipode_point(&ax, &ay).unwrap();
            assert_eq!((bx, by), (x, y));
        }
        assert!(matches!(
            antipode_point(&rat(0, 1), &rat(0, 1)),
            Err(ChartError::OutOfChart)
        ));
    }

    #[test]
    fn chart_transition_agrees_on_overlap() {
        // w = 1/z identifies the two charts away from the poles.
        let frame = fr();
        let mut rng = Xorshift64Star::new(5);
        let mut n = 0;
        while n < 20 {
            let x = rng.rational(4, 5);
            let y = rng.rational(4, 5);
            let r2 = &x * &x + &y * &y;
            if r2 == BigRational::from_integer(0.into()) {
                continue;
            }
            n += 1;
            let wx = &x / &r2;
            let wy = -(&y / &r2);
            let north = sphere_point_at(&frame, ChartKind::North, &[x, y]);
            let south = sphere_point_at(&frame, ChartKind::South, &[wx, wy]);
            assert_eq!(north, south);
        }
    }

    #[test]
    fn fubini_study_at_origin_and_closed() {
        let frame = fr();
        let fs = fubini_study(&frame);
        // coefficient at z = 0 → 2·dx∧dy
        let at0 = fs.eval(&[rat(0, 1), rat(0, 1)]);
        assert_eq!(at0[&0b11], GaussianRational::from_integer(2));
        assert!(fs.exterior_derivative().is_zero());
        // equals i∂(z·dz̄/(1+|z|²)) — the displayed intermediate
        let x = ChartPolynomial::var(&frame, 0);
        let y = ChartPolynomial::var(&frame, 1);
        let z = TwistorScalar::from_poly(x.add(&y.scale(&GaussianRational::i())));
        let (_, dzbar) = dz_forms(&frame);
        let inner = dzbar.scale(&TwistorScalar::new(z.numerator().clone(), 1));
        let recomputed = partial_fiber(&inner).mul_i();
        assert_eq!(recomputed, fs);
    }

    #[test]
    fn derivative_table_is_exact() {
        let table = derivative_table(&fr());
        assert_eq!(table.residuals.len(), 9);
        for (name, r) in &table.residuals {
            assert!(r.is_zero(), "{name} residual nonzero: {r}");
        }
    }

    #[test]
    fn sphere_constraint_derivative_identity() {
        // Σ xᵢ·∂∂̄xᵢ + Σ ∂xᵢ∧∂̄xᵢ = 0, the ∂∂̄ expansion of Σxᵢ² = 1.
        let frame = fr();
        let xs = sphere_functions(&frame, ChartKind::North);
        let mut acc = ExteriorForm::zero(&frame);
        for xi in &xs {
            let f = ExteriorForm::scalar(xi.clone());
            let ddbar = partial_fiber(&dbar_fiber(&f));
            let cross = partial_fiber(&f).wedge(&dbar_fiber(&f)).unwrap();
            acc = acc.add(&ddbar.scale(xi)).add(&cross);
        }
        assert!(acc.is_zero(), "residual: {acc}");
    }

    #[test]
    fn fiber_split_sums_to_chart_derivative() {
        let frame = fr();
        let [x1, _, _] = sphere_functions(&frame, ChartKind::North);
        let f = ExteriorForm::scalar(x1);
        let total = d_fiber(&f);
        let split = partial_fiber(&f).add(&dbar_fiber(&f));
        assert_eq!(total, split);
    }
}
