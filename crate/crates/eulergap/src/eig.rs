//! Dense symmetric eigensolver used for the Laplacian gradients.

use crate::{Error, Result};
use nalgebra::DMatrix;

pub struct EigenPairs {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as matrix columns, aligned with `values`.
    pub vectors: DMatrix<f64>,
}

/// Full spectrum of a symmetric matrix, sorted ascending. Asserts symmetry
/// to 1e-10 (relative to the largest entry) and an eigenpair residual of
/// 1e-8 * ||M||.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<EigenPairs> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Parameter("matrix not square".into()));
    }
    let scale = m.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::Numerical(format!(
                    "matrix asymmetric at ({i},{j}): {} vs {}",
                    m[(i, j)],
                    m[(j, i)]
                )));
            }
        }
    }
    let sym = (m + m.transpose()) * 0.5;
    let decomp = sym.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[a]
            .partial_cmp(&decomp.eigenvalues[b])
            .unwrap()
    });
    let values: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &decomp.eigenvectors.column(i));
    }
    let norm = values
        .iter()
        .fold(0.0f64, |a, &x| a.max(x.abs()))
        .max(1e-300);
    for k in 0..n {
        let x = vectors.column(k);
        let residual = (&sym * x - values[k] * x).norm();
        if residual > 1e-8 * norm.max(1.0) {
            return Err(Error::Numerical(format!(
                "eigen residual {residual} too large"
            )));
        }
    }
    Ok(EigenPairs { values, vectors })
}

/// The k smallest eigenpairs.
pub fn bottom_eigs(m: &DMatrix<f64>, k: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let pairs = symmetric_eigen(m)?;
    let k = k.min(pairs.values.len());
    let vals = pairs.values[..k].to_vec();
    let vecs = pairs.vectors.columns(0, k).into_owned();
    Ok((vals, vecs))
}
