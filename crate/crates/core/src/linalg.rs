//! Thin wrappers around the dense symmetric eigensolver.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Hard cap on dense eigensolves; larger matrices are rejected.
pub const MAX_EIGEN_DIM: usize = 4000;

fn check_dim(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParameter(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > MAX_EIGEN_DIM {
        return Err(Error::SizeLimit(format!(
            "dense eigensolve limited to {MAX_EIGEN_DIM} rows, got {}",
            m.nrows()
        )));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_dim(m)?;
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .ok_or_else(|| {
            Error::EigenFailure(format!(
                "no convergence for a {} x {} matrix",
                m.nrows(),
                m.ncols()
            ))
        })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Full symmetric eigendecomposition; eigenpairs sorted by ascending eigenvalue.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_dim(m)?;
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .ok_or_else(|| {
            Error::EigenFailure(format!(
                "no convergence for a {} x {} matrix",
                m.nrows(),
                m.ncols()
            ))
        })?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    Ok((vals, vecs))
}

/// Factor a positive semidefinite matrix `G = X^T X` and return the columns
/// of `X` as one coordinate vector per index, restricted to the directions
/// of eigenvalues above `pos_cutoff`.
///
/// Eigenvalues in `[-psd_tol, 0)` are clamped to zero; anything below
/// `-psd_tol` is a PSD violation.
pub fn psd_coordinates(g: &DMatrix<f64>, psd_tol: f64, pos_cutoff: f64) -> Result<Vec<Vec<f64>>> {
    let (vals, vecs) = symmetric_eigen(g)?;
    if let Some(min) = vals.first() {
        if *min < -psd_tol {
            return Err(Error::Discrepancy(format!(
                "matrix is not positive semidefinite: minimum eigenvalue {min:.3e}"
            )));
        }
    }
    let kept: Vec<(usize, f64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > pos_cutoff)
        .map(|(i, &v)| (i, v))
        .collect();
    let n = g.nrows();
    let mut coords = vec![vec![0.0; kept.len()]; n];
    for (slot, (col, val)) in kept.iter().enumerate() {
        let s = val.sqrt();
        for i in 0..n {
            coords[i][slot] = s * vecs[(i, *col)];
        }
    }
    Ok(coords)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let vals = symmetric_eigenvalues(&m).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn psd_factor_reproduces_gram() {
        // G = I + 0.5 (J - I) on 4 points is PSD
        let n = 4;
        let g = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.5 });
        let coords = psd_coordinates(&g, 1e-9, 1e-9).unwrap();
        for i in 0..n {
            for j in 0..n {
                let got = dot(&coords[i], &coords[j]);
                assert!((got - g[(i, j)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn psd_violation_detected() {
        let g = DMatrix::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(psd_coordinates(&g, 1e-9, 1e-9).is_err());
    }
}
