//! The positivity-margin search: given `ω` strictly positive on a subbundle
//! `E` and `ω′` strictly positive on the complement `F` with `E ⊆ ker ω′`,
//! find `T > 0` making `ω + T·ω′` strictly positive everywhere.
//!
//! Two certificates are produced per sample point: the sharp pencil value
//! (the Schur-complement threshold, a generalized eigenvalue) and the
//! Cauchy–Schwarz bound `Σ c_ij²` of the quadratic-discriminant argument,
//! with the `F`-block's negative part folded in conservatively. The bound
//! is certified to dominate the sharp value pointwise.

use nalgebra::DMatrix;

use crate::numeric::{generalized_max_eigenvalue, min_eigenvalue, symmetric_eigenvalues};
use crate::positivity::report::PositivityError;

/// Coordinate splitting of the tangent space into the `E` and `F` blocks.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub e_indices: Vec<usize>,
    pub f_indices: Vec<usize>,
}

impl Splitting {
    pub fn new(e_indices: Vec<usize>, f_indices: Vec<usize>) -> Self {
        Self {
            e_indices,
            f_indices,
        }
    }
}

/// Pointwise data for the search: the symmetric pairings `H(X,Y) = ω(X,JY)`
/// of the two forms in coordinates, plus the point itself for reporting.
#[derive(Clone, Debug)]
pub struct MarginPoint {
    pub h_omega: DMatrix<f64>,
    pub h_prime: DMatrix<f64>,
    pub point: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct MarginSearch {
    /// Max over the grid of the Cauchy–Schwarz bound.
    pub t_cs: f64,
    /// Max over the grid of the sharp pencil threshold.
    pub t_eig: f64,
    /// `max(1.05·t_eig, floor)`: the value actually used downstream.
    pub t_used: f64,
    /// `t_cs ≥ t_eig` held at every sample point.
    pub cs_dominates: bool,
    pub samples: usize,
}

/// Safety floor for degenerate instances where the pencil threshold is
/// nonpositive (already positive without help from `ω′`).
pub const T_FLOOR: f64 = 1e-6;

fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
}

/// Per-point thresholds: `(t_eig, t_cs)`.
fn point_thresholds(
    data: &MarginPoint,
    split: &Splitting,
) -> Result<(f64, f64), PositivityError> {
    let e = &split.e_indices;
    let f = &split.f_indices;
    let a = submatrix(&data.h_omega, e, e);
    let b = submatrix(&data.h_omega, e, f);
    let c = submatrix(&data.h_omega, f, f);
    let d = submatrix(&data.h_prime, f, f);

    // preconditions: ω positive on E, ω′ positive on F, E ⊆ ker ω′
    let min_a = min_eigenvalue(&a);
    if min_a <= 0.0 {
        return Err(PositivityError::PreconditionFailed {
            side: "E",
            point: data.point.clone(),
            min_eigen: min_a,
        });
    }
    let min_d = min_eigenvalue(&d);
    if min_d <= 0.0 {
        return Err(PositivityError::PreconditionFailed {
            side: "F",
            point: data.point.clone(),
            min_eigen: min_d,
        });
    }
    let prime_e = submatrix(&data.h_prime, e, e)
        .abs()
        .max()
        .max(submatrix(&data.h_prime, e, f).abs().max());
    if prime_e > 1e-9 {
        return Err(PositivityError::PreconditionFailed {
            side: "ker",
            point: data.point.clone(),
            min_eigen: prime_e,
        });
    }

    // sharp value: ω + tω′ ≻ 0 ⟺ A ≻ 0 and C + tD − BᵀA⁻¹B ≻ 0,
    // i.e. t > λ_max of the pencil (BᵀA⁻¹B − C) v = t·D v
    let a_inv = a.clone().try_inverse().expect("A is positive definite");
    let schur = b.transpose() * &a_inv * &b - &c;
    let t_eig = generalized_max_eigenvalue(&schur, &d)
        .ok_or(PositivityError::DegenerateVolume {
            point: data.point.clone(),
        })?
        .max(0.0);

    // Cauchy–Schwarz bound in the lemma's orthonormal frames: e-frame
    // orthonormal for ω|E, f-frame orthonormal for ω′|F; c_ij is the cross
    // pairing there. The F-block of ω is folded in by its negative part.
    let la = a.cholesky().expect("A positive definite").l();
    let ld = d.clone().cholesky().expect("D positive definite").l();
    let la_inv = la.try_inverse().expect("triangular");
    let ld_inv = ld.try_inverse().expect("triangular");
    let cross = &la_inv * &b * ld_inv.transpose();
    let sum_c_sq: f64 = cross.iter().map(|v| v * v).sum();
    let c_frame = &ld_inv * &c * ld_inv.transpose();
    let c_neg = (-symmetric_eigenvalues(&c_frame)[0]).max(0.0);
    let t_cs = sum_c_sq + c_neg;

    Ok((t_eig, t_cs))
}

/// Run the search over a sample grid.
pub fn find_t(data: &[MarginPoint], split: &Splitting) -> Result<MarginSearch, PositivityError> {
    assert!(!data.is_empty(), "margin search needs sample points");
    let mut t_eig = 0.0f64;
    let mut t_cs = 0.0f64;
    let mut cs_dominates = true;
    for point in data {
        let (te, tc) = point_thresholds(point, split)?;
        if tc < te - 1e-9 {
            cs_dominates = false;
        }
        t_eig = t_eig.max(te);
        t_cs = t_cs.max(tc);
    }
    let t_used = (1.05 * t_eig).max(T_FLOOR);
    Ok(MarginSearch {
        t_cs,
        t_eig,
        t_used,
        cs_dominates,
        samples: data.len(),
    })
}

/// The synthetic 2+2 cross-term instance: `E = span(e₀, e₁)`,
/// `F = span(e₂, e₃)`, `ω = ω_E + c·(cross)`, `ω′ = ω_F`. In pairing
/// matrices: `H(ω) = [[I₂, c·I₂], [c·I₂, 0]]`, `H(ω′) = [[0,0],[0,I₂]]`.
/// The sharp threshold is exactly `c²`.
pub fn synthetic_cross_instance(c: f64) -> (MarginPoint, Splitting) {
    let mut h_omega = DMatrix::zeros(4, 4);
    h_omega[(0, 0)] = 1.0;
    h_omega[(1, 1)] = 1.0;
    h_omega[(0, 2)] = c;
    h_omega[(2, 0)] = c;
    h_omega[(1, 3)] = c;
    h_omega[(3, 1)] = c;
    let mut h_prime = DMatrix::zeros(4, 4);
    h_prime[(2, 2)] = 1.0;
    h_prime[(3, 3)] = 1.0;
    (
        MarginPoint {
            h_omega,
            h_prime,
            point: vec![0.0; 4],
        },
        Splitting::new(vec![0, 1], vec![2, 3]),
    )
}

/// Brute-force positivity sweep for the synthetic instance: evaluate the
/// quadratic form of `H(ω) + T·H(ω′)` on `directions` random unit vectors;
/// returns the minimum value found.
pub fn brute_force_min(
    data: &MarginPoint,
    t: f64,
    directions: usize,
    seed: u64,
) -> f64 {
    let dim = data.h_omega.nrows();
    let m = &data.h_omega + &data.h_prime * t;
    let mut rng = crate::rng::Xorshift64Star::new(seed);
    let mut min = f64::INFINITY;
    for _ in 0..directions {
        let v = rng.unit_vector(dim);
        let dv = nalgebra::DVector::from_vec(v);
        let q = (dv.transpose() * &m * &dv)[(0, 0)];
        min = min.min(q);
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_instance_threshold_is_c_squared() {
        let c = 1.25f64;
        let (point, split) = synthetic_cross_instance(c);
        let search = find_t(std::slice::from_ref(&point), &split).unwrap();
        assert!((search.t_eig - c * c).abs() < 1e-10, "t_eig = {}", search.t_eig);
        // CS bound: Σ c_ij² = 2c² ≥ c²
        assert!((search.t_cs - 2.0 * c * c).abs() < 1e-10);
        assert!(search.cs_dominates);
    }

    #[test]
    fn brute_force_confirms_threshold() {
        let c = 1.0f64;
        let (point, split) = synthetic_cross_instance(c);
        let search = find_t(std::slice::from_ref(&point), &split).unwrap();
        let eps = 0.25 * search.t_eig;
        let min_above = brute_force_min(&point, search.t_eig + eps, 10_000, 17);
        let min_below = brute_force_min(&point, search.t_eig - eps, 10_000, 17);
        assert!(min_above > 0.0, "min at T+ε = {min_above}");
        assert!(min_below < 0.0, "min at T−ε = {min_below}");
    }

    #[test]
    fn degenerate_prime_uses_floor() {
        // ω already positive everywhere, ω′ positive on F with no cross
        let mut h_omega = DMatrix::identity(4, 4);
        h_omega[(2, 2)] = 2.0;
        let mut h_prime = DMatrix::zeros(4, 4);
        h_prime[(2, 2)] = 1.0;
        h_prime[(3, 3)] = 1.0;
        let point = MarginPoint {
            h_omega,
            h_prime,
            point: vec![0.0; 4],
        };
        let split = Splitting::new(vec![0, 1], vec![2, 3]);
        let search = find_t(std::slice::from_ref(&point), &split).unwrap();
        assert!(search.t_eig <= 0.0 + 1e-12);
        assert_eq!(search.t_used, T_FLOOR);
    }

    #[test]
    fn precondition_failures_carry_witness() {
        let (mut point, split) = synthetic_cross_instance(0.5);
        point.h_omega[(0, 0)] = -1.0;
        let out = find_t(std::slice::from_ref(&point), &split);
        assert!(matches!(
            out,
            Err(PositivityError::PreconditionFailed { side: "E", .. })
        ));
    }
}
