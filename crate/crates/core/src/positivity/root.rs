//! Root extraction of strictly positive `(n−1,n−1)`-forms: simultaneous
//! diagonalization of the contracted `(1,1)`-form against the metric in a
//! `J`-compatible frame, closed-form solve for the `b_i`, and certification
//! of `ω^{n−1} = η`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::numeric::{symmetric_eigenvalues, NumForm};
use crate::positivity::contract::topminus_to_oneone;
use crate::positivity::report::PositivityError;

/// Relative threshold under which two eigenvalues are treated as one
/// cluster. The reconstructed form only depends on the eigenvalues, so
/// clustering cannot change the output; it only stabilizes the frame.
const CLUSTER_REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct RootExtraction {
    /// Eigenvalues of the contracted form against the metric, one per
    /// complex line, descending.
    pub a_coeffs: Vec<f64>,
    /// Solved diagonal coefficients of the root.
    pub b_coeffs: Vec<f64>,
    /// Frame vectors, pairs `(e_i, J e_i)` contiguous.
    pub frame: Vec<DVector<f64>>,
    /// The reconstructed `(1,1)`-form `ω = Σ bᵢ·eᵢ^♭∧(Jeᵢ)^♭`.
    pub omega: NumForm,
    /// Relative magnitude of `ω^{n−1} − η`.
    pub residual_rel: f64,
}

/// Solve the diagonal system: `b_i = C / a_i` with
/// `C = (Π a_j / (n−1)!)^{1/(n−1)}`, the unique positive solution of
/// `a_1 = (n−1)!·(a_1/a_2)…(a_1/a_n)·b_1^{n−1}` and `b_j/b_i = a_i/a_j`.
pub fn solve_b_from_a(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let fact: f64 = (1..n).map(|i| i as f64).product::<f64>().max(1.0);
    let product: f64 = a.iter().product();
    let c = (product / fact).powf(1.0 / (n as f64 - 1.0));
    a.iter().map(|ai| c / ai).collect()
}

/// Extract the positive `(1,1)` root of a strictly positive top-minus-two
/// form `η` at a point: `η` is contracted to a `(1,1)`-form, diagonalized
/// against the metric in a frame commuting with `J`, and the root is
/// reassembled with the solved `b_i`.
pub fn root_extract(
    eta: &NumForm,
    gram: &DMatrix<f64>,
    j_at: &DMatrix<f64>,
    rho: f64,
    point: &[f64],
) -> Result<RootExtraction, PositivityError> {
    let dim = gram.nrows();
    let n = dim / 2;
    let beta = topminus_to_oneone(eta, rho, gram)?;

    // symmetric pairing H(X, Y) = β(X, JY)
    let w = beta.two_form_matrix();
    let wr = DMatrix::from_fn(dim, dim, |r, c| w[(r, c)].re);
    let h = {
        let m = wr * j_at;
        (m.clone() + m.transpose()) * 0.5
    };

    // generalized eigensolve H v = a G v through the Cholesky reduction
    let chol = gram
        .clone()
        .cholesky()
        .ok_or(PositivityError::DegenerateVolume {
            point: point.to_vec(),
        })?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(PositivityError::DegenerateVolume {
            point: point.to_vec(),
        })?;
    let reduced = &l_inv * &h * l_inv.transpose();
    let sym = (reduced.clone() + reduced.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    // eigenpairs descending, vectors mapped back (G-orthonormal)
    let mut pairs: Vec<(f64, DVector<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, l_inv.transpose() * eig.eigenvectors.column(i).clone_owned()))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let scale = pairs
        .iter()
        .map(|(v, _)| v.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let inner = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * gram * b)[(0, 0)];

    // deterministic J-paired frame, one pair per cluster slot
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut a_coeffs: Vec<f64> = Vec::with_capacity(n);
    let mut idx = 0usize;
    while frame.len() < dim {
        if idx >= dim {
            return Err(PositivityError::DegenerateVolume {
                point: point.to_vec(),
            });
        }
        // walk a cluster of near-equal eigenvalues
        let cluster_value = pairs[idx].0;
        let mut cluster_end = idx + 1;
        while cluster_end < dim
            && (pairs[cluster_end].0 - cluster_value).abs() <= CLUSTER_REL_TOL * scale
        {
            cluster_end += 1;
        }
        for k in idx..cluster_end {
            let mut v = pairs[k].1.clone();
            for u in &frame {
                let c = inner(&v, u);
                v -= u * c;
            }
            let norm_sq = inner(&v, &v);
            if norm_sq <= 1e-10 {
                continue;
            }
            let e = v / norm_sq.sqrt();
            let je = j_at * &e;
            frame.push(e);
            frame.push(je);
            a_coeffs.push(cluster_value);
            if frame.len() == dim {
                break;
            }
        }
        idx = cluster_end;
    }

    if let Some(&bad) = a_coeffs.iter().find(|&&a| a <= 0.0) {
        return Err(PositivityError::NotPositive {
            point: point.to_vec(),
            min_eigen: bad,
        });
    }

    let b_coeffs = solve_b_from_a(&a_coeffs);

    // ω = Σ bᵢ (G eᵢ) ∧ (G Jeᵢ)
    let mut omega = NumForm::zero(dim);
    for (i, b) in b_coeffs.iter().enumerate() {
        let u = gram * &frame[2 * i];
        let v = gram * &frame[2 * i + 1];
        let uf = NumForm::from_terms(
            dim,
            (0..dim).map(|a| ((1u16 << a), Complex64::new(u[a], 0.0))),
        );
        let vf = NumForm::from_terms(
            dim,
            (0..dim).map(|a| ((1u16 << a), Complex64::new(v[a], 0.0))),
        );
        omega = omega.add(&uf.wedge(&vf).scale(Complex64::new(*b, 0.0)));
    }

    let power = omega.wedge_pow(n as u32 - 1);
    let eta_scale = eta.max_abs().max(1e-300);
    let residual_rel = power.sub(eta).max_abs() / eta_scale;

    Ok(RootExtraction {
        a_coeffs,
        b_coeffs,
        frame,
        omega,
        residual_rel,
    })
}

/// Convenience: certify `root_extract ∘ (·)^{n−1} = id` on a given strictly
/// positive `(1,1)`-form; returns the relative recovery error.
pub fn roundtrip_error(
    omega0: &NumForm,
    gram: &DMatrix<f64>,
    j_at: &DMatrix<f64>,
    rho: f64,
) -> Result<f64, PositivityError> {
    let dim = gram.nrows();
    let n = dim / 2;
    let eta = omega0.wedge_pow(n as u32 - 1);
    let extraction = root_extract(&eta, gram, j_at, rho, &[])?;
    let scale = omega0.max_abs().max(1e-300);
    Ok(extraction.omega.sub(omega0).max_abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xorshift64Star;

    /// Random strictly positive (1,1)-form w.r.t. the standard structure:
    /// the Hermitian form `ω(X, Y) = P(JX, Y)` of a random J-compatible SPD
    /// matrix `P` (every strictly positive (1,1)-form arises this way).
    pub(crate) fn random_positive_oneone(
        n: usize,
        rng: &mut Xorshift64Star,
    ) -> (NumForm, DMatrix<f64>, DMatrix<f64>) {
        let dim = 2 * n;
        let mut j = DMatrix::zeros(dim, dim);
        for p in 0..n {
            j[(2 * p + 1, 2 * p)] = 1.0;
            j[(2 * p, 2 * p + 1)] = -1.0;
        }
        let q = DMatrix::from_fn(dim, dim, |_, _| rng.f64_range(-1.0, 1.0));
        let p_raw = q.transpose() * &q + DMatrix::identity(dim, dim) * 0.5;
        // average with the J-pullback to enforce P(JX, JY) = P(X, Y)
        let p_j = (&p_raw + j.transpose() * &p_raw * &j) * 0.5;
        let w = j.transpose() * &p_j;
        let mut omega = NumForm::zero(dim);
        for a in 0..dim {
            for b in (a + 1)..dim {
                let v = 0.5 * (w[(a, b)] - w[(b, a)]);
                if v != 0.0 {
                    omega = omega.add(&NumForm::from_terms(
                        dim,
                        [(((1u16 << a) | (1u16 << b)), Complex64::new(v, 0.0))],
                    ));
                }
            }
        }
        let gram = DMatrix::identity(dim, dim);
        (omega, gram, j)
    }

    #[test]
    fn b_solve_matches_hand_values() {
        // n = 3, all a = 2: (n−1)!·b² = 2 ⟹ b = 1
        let b = solve_b_from_a(&[2.0, 2.0, 2.0]);
        for v in b {
            assert!((v - 1.0).abs() < 1e-14);
        }
        // n = 2: b₁ = a₂, b₂ = a₁
        let b = solve_b_from_a(&[3.0, 7.0]);
        assert!((b[0] - 7.0).abs() < 1e-12 && (b[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn n2_root_is_identity() {
        // for n = 2 the root of η is η itself
        let mut rng = Xorshift64Star::new(41);
        let (omega0, gram, j) = random_positive_oneone(2, &mut rng);
        let eta = omega0.wedge_pow(1);
        let ext = root_extract(&eta, &gram, &j, 1.0, &[]).unwrap();
        assert!(ext.omega.sub(&omega0).max_abs() < 1e-10);
    }

    #[test]
    fn roundtrip_dimensions_2_3_4() {
        let mut rng = Xorshift64Star::new(7);
        for n in [2usize, 3, 4] {
            for _ in 0..20 {
                let (omega0, gram, j) = random_positive_oneone(n, &mut rng);
                let err = roundtrip_error(&omega0, &gram, &j, 1.0).unwrap();
                assert!(err < 1e-10, "n = {n}: relative error {err}");
            }
        }
    }

    #[test]
    fn clustered_eigenvalues_are_stable() {
        // identity-multiple η: all aᵢ equal; the frame is free but the
        // output must still be the unique root
        let n = 3;
        let dim = 2 * n;
        let mut omega0 = NumForm::zero(dim);
        for p in 0..n {
            omega0 = omega0.add(&NumForm::from_terms(
                dim,
                [(((1u16 << (2 * p)) | (1u16 << (2 * p + 1))), Complex64::new(2.0, 0.0))],
            ));
        }
        let gram = DMatrix::identity(dim, dim);
        let mut j = DMatrix::zeros(dim, dim);
        for p in 0..n {
            j[(2 * p + 1, 2 * p)] = 1.0;
            j[(2 * p, 2 * p + 1)] = -1.0;
        }
        let err = roundtrip_error(&omega0, &gram, &j, 1.0).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn non_positive_input_rejected_with_witness() {
        let n = 2;
        let dim = 4;
        // η with a negative diagonal coefficient
        let eta = NumForm::from_terms(
            dim,
            [
                (0b1100u16, Complex64::new(-1.0, 0.0)),
                (0b0011u16, Complex64::new(2.0, 0.0)),
            ],
        );
        let gram = DMatrix::identity(dim, dim);
        let mut j = DMatrix::zeros(dim, dim);
        for p in 0..n {
            j[(2 * p + 1, 2 * p)] = 1.0;
            j[(2 * p, 2 * p + 1)] = -1.0;
        }
        let out = root_extract(&eta, &gram, &j, 1.0, &[0.0]);
        assert!(matches!(out, Err(PositivityError::NotPositive { .. })));
    }
}
