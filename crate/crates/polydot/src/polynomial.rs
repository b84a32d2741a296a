//! Matrix polynomials: sparse evaluation and exact Lagrange interpolation.
//!
//! A matrix polynomial is a sum of `coefficient * z^exponent` terms whose
//! coefficients are equally shaped matrices. Interpolation recovers the
//! dense coefficient list entrywise; an O(n^2) Lagrange solve is deliberate,
//! since exactness, not asymptotics, is what the decoders need.

use crate::error::{Error, Result};
use crate::matrix::FieldMatrix;

/// Evaluates `sum_e M_e z^e` for sparse terms `(e, M_e)`.
pub fn poly_eval_matrix(coeffs: &[(usize, FieldMatrix)], z: u64) -> Result<FieldMatrix> {
    let (first_exp, first) = coeffs
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty polynomial".into()))?;
    let field = first.field();
    let mut seen = std::collections::HashSet::new();
    seen.insert(*first_exp);
    let mut acc = first.scale(field.pow(z, *first_exp as u64));
    for (exp, m) in &coeffs[1..] {
        if m.rows() != first.rows() || m.cols() != first.cols() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {}x{} vs {}x{}",
                m.rows(),
                m.cols(),
                first.rows(),
                first.cols()
            )));
        }
        if !seen.insert(*exp) {
            return Err(Error::InvalidParameter(format!("repeated exponent {exp}")));
        }
        acc.add_scaled(m, field.pow(z, *exp as u64))?;
    }
    Ok(acc)
}

/// Interpolates the unique matrix polynomial of degree <= `degree_bound`
/// through the given evaluations. Exactly `degree_bound + 1` points are
/// consumed; extras are ignored. Returns the dense coefficient list indexed
/// by exponent.
pub fn interpolate(points: &[(u64, FieldMatrix)], degree_bound: usize) -> Result<Vec<FieldMatrix>> {
    let n = degree_bound + 1;
    if points.len() < n {
        return Err(Error::InsufficientShares {
            needed: n,
            got: points.len(),
        });
    }
    let points = &points[..n];
    let field = points[0].1.field();
    let (rows, cols) = (points[0].1.rows(), points[0].1.cols());
    let mut seen = std::collections::HashSet::with_capacity(n);
    for (z, m) in points {
        if !seen.insert(*z) {
            return Err(Error::DuplicatePoint(*z));
        }
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "evaluation {}x{} vs {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
    }

    // master[k] holds the coefficient of z^k in prod_i (z - z_i).
    let mut master = vec![0u64; n + 1];
    master[0] = 1;
    for (deg, (z, _)) in points.iter().enumerate() {
        let neg_z = field.neg(*z);
        for k in (0..=deg + 1).rev() {
            let shifted = if k > 0 { master[k - 1] } else { 0 };
            master[k] = field.add(field.mul(master[k], neg_z), shifted);
        }
    }

    let mut coeffs = vec![FieldMatrix::zero(field, rows, cols); n];
    let mut quotient = vec![0u64; n];
    for (z_i, value) in points {
        // Synthetic division: master / (z - z_i), degree n-1.
        quotient[n - 1] = master[n];
        for k in (0..n - 1).rev() {
            quotient[k] = field.add(master[k + 1], field.mul(*z_i, quotient[k + 1]));
        }
        // The denominator prod_{j != i} (z_i - z_j) equals quotient(z_i).
        let mut denom = 0u64;
        for &q in quotient.iter().rev() {
            denom = field.add(field.mul(denom, *z_i), q);
        }
        let w = field.inv(denom)?;
        for (k, coeff) in coeffs.iter_mut().enumerate() {
            let l = field.mul(quotient[k], w);
            if l != 0 {
                coeff.add_scaled(value, l)?;
            }
        }
    }
    Ok(coeffs)
}
