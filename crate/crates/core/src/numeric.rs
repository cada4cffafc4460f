//! Dense complex-matrix cross-checks for the symbolic block layer.
//!
//! The symbolic characteristic polynomial is validated by sampling random
//! angles, materializing Uγᵏ as an honest 2g×2g complex matrix, and
//! recovering its characteristic polynomial from determinant evaluations
//! at 2g+1 points on the unit circle followed by an inverse DFT. The
//! points are rotated off the roots of unity so eigenvalues of finite
//! order cannot collide with them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::group::{
    self, BlockMonomialMatrix, BlockTag, GroupError, SymbolicCharPoly, SymbolicSum,
};
use crate::hodge::IdentityComponentModel;

/// Materialize a block matrix at concrete angles (indexed 1-based by the
/// form coordinates, so `angles[i-1]` is θᵢ).
pub fn dense_block_matrix(matrix: &BlockMonomialMatrix, angles: &[f64]) -> DMatrix<Complex64> {
    let g = matrix.g() as usize;
    assert_eq!(angles.len(), g, "need one angle per block row");
    let mut dense = DMatrix::<Complex64>::zeros(2 * g, 2 * g);
    for i in 1..=matrix.g() {
        let block = matrix.block(i);
        let phi = block.monomial().eval(|j| angles[(j - 1) as usize]);
        let s = f64::from(block.sign());
        let up = Complex64::from_polar(s, phi);
        let down = Complex64::from_polar(s, -phi);
        let r = 2 * (i as usize - 1);
        let c = 2 * (matrix.target(i) as usize - 1);
        match block.tag() {
            BlockTag::I => {
                dense[(r, c)] = up;
                dense[(r + 1, c + 1)] = down;
            }
            BlockTag::J => {
                dense[(r, c + 1)] = up;
                dense[(r + 1, c)] = -down;
            }
        }
    }
    dense
}

/// Coefficients c₀..c_n of det(T·I − M) for an n×n matrix M, via
/// determinant evaluation at n+1 rotated unit-circle points and an exact
/// inverse DFT. Unit radius keeps all point powers at magnitude one, so
/// the recovery is numerically benign.
pub fn charpoly_coefficients(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let points = n + 1;
    let values: Vec<Complex64> = (0..points)
        .map(|k| {
            let t = Complex64::from_polar(
                1.0,
                (std::f64::consts::TAU * k as f64 + 1.0) / points as f64,
            );
            let mut shifted = -m.clone();
            for d in 0..n {
                shifted[(d, d)] += t;
            }
            shifted.determinant()
        })
        .collect();
    (0..points)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, value) in values.iter().enumerate() {
                let angle = -(std::f64::consts::TAU * k as f64 + 1.0) * j as f64 / points as f64;
                acc += value * Complex64::from_polar(1.0, angle);
            }
            acc / points as f64
        })
        .collect()
}

/// Evaluate the factored characteristic polynomial at concrete angles.
/// Every factor has real coefficients [1, −tr, 1] at degrees [0, L, 2L],
/// so the result is a real polynomial of degree 2g.
pub fn symbolic_coefficients_at(cp: &SymbolicCharPoly, angles: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0f64];
    for factor in cp.factors() {
        let len = factor.len() as usize;
        let tr = match factor.trace() {
            None => 0.0,
            Some((sign, form)) => {
                2.0 * f64::from(sign) * form.eval(|j| angles[(j - 1) as usize]).cos()
            }
        };
        let mut next = vec![0.0f64; coeffs.len() + 2 * len];
        for (d, &c) in coeffs.iter().enumerate() {
            next[d] += c;
            next[d + len] -= tr * c;
            next[d + 2 * len] += c;
        }
        coeffs = next;
    }
    debug_assert_eq!(coeffs.len() as u32, cp.two_g() + 1);
    coeffs
}

/// Evaluate a sum of exponentials at concrete angles.
pub fn sum_eval(sum: &SymbolicSum, angles: &[f64]) -> Complex64 {
    sum.iter()
        .map(|(form, &coeff)| {
            Complex64::from_polar(1.0, form.eval(|j| angles[(j - 1) as usize])) * coeff as f64
        })
        .sum()
}

fn matrix_power(m: &DMatrix<Complex64>, k: u32) -> DMatrix<Complex64> {
    let mut acc = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        acc = &acc * m;
    }
    acc
}

/// Maximum absolute coefficient error between the symbolic factorization
/// of det(T·I − Uγᵏ) and a dense numeric characteristic polynomial, over
/// the given number of random identity-component points.
pub fn cross_validate(
    model: &IdentityComponentModel,
    gamma: &BlockMonomialMatrix,
    k: u32,
    draws: u32,
    rng: &mut impl Rng,
) -> Result<f64, GroupError> {
    let cp = group::char_poly_symbolic(model, gamma, k)?;
    let g = model.g() as usize;
    let dense_gamma_k = {
        let zero_angles = vec![0.0; g];
        matrix_power(&dense_block_matrix(gamma, &zero_angles), k)
    };
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let free: std::collections::HashMap<u32, f64> = model
            .free_indices()
            .iter()
            .map(|&i| (i, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let angles = model.full_angles(|i| free[&i]);

        let symbolic = symbolic_coefficients_at(&cp, &angles);

        let mut dense_u = DMatrix::<Complex64>::zeros(2 * g, 2 * g);
        for (i, &theta) in angles.iter().enumerate() {
            dense_u[(2 * i, 2 * i)] = Complex64::from_polar(1.0, theta);
            dense_u[(2 * i + 1, 2 * i + 1)] = Complex64::from_polar(1.0, -theta);
        }
        let numeric = charpoly_coefficients(&(dense_u * &dense_gamma_k));

        for (j, &s) in symbolic.iter().enumerate() {
            let err = (numeric[j] - Complex64::new(s, 0.0)).norm();
            worst = worst.max(err);
        }
    }
    Ok(worst)
}
